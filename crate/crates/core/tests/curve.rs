mod common;

use common::simpson;
use lindley_core::distribution::sample;
use lindley_core::estimators::EstimatorKind;
use lindley_core::{
    plugin_cdf, plugin_pdf, umvue_cdf, umvue_pdf, FittedCurve, LindleyParam, UmvueContext,
};

#[test]
fn umvue_reference_values() {
    let ctx = UmvueContext::new(3.0, 2).unwrap();
    assert!((umvue_pdf(1.0, &ctx) - 0.3636364).abs() <= 1e-7);
    assert!((umvue_cdf(1.0, &ctx).unwrap() - 0.3131313).abs() <= 1e-7);
}

#[test]
fn umvue_cdf_is_integral_of_pdf() {
    for &(n, t) in &[(2usize, 3.0), (5, 8.0), (20, 25.0), (3, 0.7), (60, 40.0)] {
        let ctx = UmvueContext::new(t, n).unwrap();
        // The density is zero at both endpoints but its one-sided limits are not.
        let inside = |x: f64| x.clamp(1e-300, t * (1.0 - 1e-15));
        let total = simpson(|x| umvue_pdf(inside(x), &ctx), 0.0, t, 4000);
        assert!((total - 1.0).abs() <= 1e-8, "n={n} t={t}: {total}");
        for j in 1..=20 {
            let x = t * j as f64 / 21.0;
            let lhs = umvue_cdf(x, &ctx).unwrap();
            let rhs = simpson(|u| umvue_pdf(inside(u), &ctx), 0.0, x, 4000);
            assert!((lhs - rhs).abs() <= 1e-8, "n={n} t={t} x={x}: {lhs} vs {rhs}");
        }
    }
}

#[test]
fn umvue_support_and_shape() {
    for &(n, t) in &[(2usize, 0.5), (4, 2.0), (30, 20.0), (200, 150.0)] {
        let ctx = UmvueContext::new(t, n).unwrap();
        assert_eq!(umvue_pdf(t, &ctx), 0.0);
        assert_eq!(umvue_pdf(t + 1.0, &ctx), 0.0);
        assert_eq!(umvue_pdf(-1.0, &ctx), 0.0);
        assert_eq!(umvue_cdf(0.0, &ctx).unwrap(), 0.0);
        assert_eq!(umvue_cdf(t, &ctx).unwrap(), 1.0);
        assert_eq!(umvue_cdf(2.0 * t, &ctx).unwrap(), 1.0);
        let mut prev = 0.0;
        for j in 1..1000 {
            let x = t * j as f64 / 1000.0;
            let f = umvue_pdf(x, &ctx);
            assert!(f >= 0.0 && (f > 0.0 || x > 0.5 * t), "n={n} t={t} x={x}");
            let c = umvue_cdf(x, &ctx).unwrap();
            assert!(c >= prev && c <= 1.0);
            prev = c;
        }
    }
}

#[test]
fn umvue_needs_two_observations() {
    assert!(UmvueContext::new(1.0, 1).is_err());
    assert!(UmvueContext::new(0.0, 3).is_err());
}

#[test]
fn plugin_matches_lindley_formulas() {
    let th: f64 = 1.7;
    let x: f64 = 0.9;
    let pdf = th * th / (1.0 + th) * (1.0 + x) * (-th * x).exp();
    let cdf = 1.0 - (1.0 + th + th * x) / (1.0 + th) * (-th * x).exp();
    assert!((plugin_pdf(x, th).unwrap() - pdf).abs() < 1e-15);
    assert!((plugin_cdf(x, th).unwrap() - cdf).abs() < 1e-15);
}

#[test]
fn fitted_curves_for_every_method() {
    let s = sample(25, LindleyParam::new(2.0).unwrap(), 11).unwrap();
    for kind in EstimatorKind::ALL {
        let c = FittedCurve::fit(kind, &s).unwrap();
        assert_eq!(c.method(), kind);
        let p = c.point(0.4).unwrap();
        assert!(p.pdf_hat > 0.0 && p.cdf_hat > 0.0 && p.cdf_hat < 1.0, "{kind}: {p:?}");
        assert_eq!(p.method, kind);
    }
}
