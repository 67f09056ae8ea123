mod common;

use lindley_core::quadrature::{integrate, Tolerance};
use lindley_core::special::{
    gamma_pdf, log_gamma, reg_inc_beta, reg_lower_gamma, BetaArgs,
};
use proptest::prelude::*;

fn ib(p: f64, a: f64, b: f64) -> f64 {
    reg_inc_beta(BetaArgs::new(p, a, b).unwrap()).unwrap()
}

proptest! {
    #[test]
    fn incomplete_beta_reflection(p in 0.0f64..=1.0, a in 0.05f64..60.0, b in 0.05f64..60.0) {
        let s = ib(p, a, b) + ib(1.0 - p, b, a);
        prop_assert!((s - 1.0).abs() <= 1e-9, "sum {}", s);
    }

    #[test]
    fn incomplete_beta_monotone(p in 0.0f64..0.999, dp in 1e-6f64..1e-3, a in 0.1f64..30.0, b in 0.1f64..200.0) {
        let q = (p + dp).min(1.0);
        prop_assert!(ib(q, a, b) + 1e-15 >= ib(p, a, b));
    }

    // Beyond ~1e3 the difference of two large ln Γ values loses the digits
    // this tolerance asks for.
    #[test]
    fn log_gamma_recurrence(z in 1e-3f64..1e3) {
        let ratio = (log_gamma(z + 1.0).unwrap() - log_gamma(z).unwrap()).exp();
        prop_assert!((ratio - z).abs() <= 1e-10 * z, "z={} ratio={}", z, ratio);
    }
}

#[test]
fn incomplete_beta_against_simpson() {
    // Shapes >= 1 keep the integrand bounded for Simpson's rule.
    for &(a, b) in &[(1.0, 1.0), (2.0, 3.0), (1.0, 38.0), (2.0, 150.0), (4.5, 2.5), (30.0, 30.0)] {
        let ln_b = log_gamma(a).unwrap() + log_gamma(b).unwrap() - log_gamma(a + b).unwrap();
        let dens = |u: f64| ((a - 1.0) * u.ln() + (b - 1.0) * (1.0 - u).ln() - ln_b).exp();
        for &p in &[0.01, 0.1, 0.3, 0.5, 0.77, 0.95] {
            let oracle = common::simpson(|u| if u <= 0.0 { if a == 1.0 { (-ln_b).exp() } else { 0.0 } } else { dens(u) }, 0.0, p, 20_000);
            let got = ib(p, a, b);
            assert!((got - oracle).abs() <= 1e-10, "a={a} b={b} p={p}: {got} vs {oracle}");
        }
    }
}

#[test]
fn gamma_density_integrates_to_one() {
    let r = integrate(|t| if t > 0.0 { gamma_pdf(t, 3.0, 2.0).unwrap() } else { 0.0 }, 0.0, 40.0, Tolerance::default()).unwrap();
    assert!((r.value - 1.0).abs() < 1e-8);
    let r = integrate(|t| if t > 0.0 { gamma_pdf(t, 40.0, 0.7).unwrap() } else { 0.0 }, 0.0, 400.0, Tolerance::default()).unwrap();
    assert!((r.value - 1.0).abs() < 1e-8);
}

#[test]
fn gamma_density_is_derivative_of_incomplete_gamma() {
    let h = 1e-5;
    for &m in &[1.0, 2.0, 3.5, 10.0, 40.0] {
        for &rate in &[0.5, 1.0, 3.0] {
            for i in 1..=20 {
                let t = i as f64 * m / (10.0 * rate);
                let fd = (reg_lower_gamma(m, rate * (t + h)).unwrap()
                    - reg_lower_gamma(m, rate * (t - h)).unwrap())
                    / (2.0 * h);
                let pdf = gamma_pdf(t, m, rate).unwrap();
                assert!((fd - pdf).abs() < 1e-6, "m={m} rate={rate} t={t}");
            }
        }
    }
}
