//! Globally adaptive Gauss–Kronrod (7/15-point) quadrature on finite
//! intervals.

use alloc::vec::Vec;

use crate::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
// Gauss weights for XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Stopping rule for [`integrate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
    pub max_panels: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            abs: 1e-10,
            rel: 1e-8,
            max_panels: 4000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

fn kronrod<F>(f: &mut F, a: f64, b: f64) -> Result<Panel>
where
    F: FnMut(f64) -> f64,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    if !fc.is_finite() {
        return Err(Error::Evaluation { at: center });
    }
    let mut gauss = fc * WG[3];
    let mut kron = fc * WGK[7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let (x1, x2) = (center - dx, center + dx);
        let (f1, f2) = (f(x1), f(x2));
        if !f1.is_finite() {
            return Err(Error::Evaluation { at: x1 });
        }
        if !f2.is_finite() {
            return Err(Error::Evaluation { at: x2 });
        }
        kron += WGK[j] * (f1 + f2);
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    Ok(Panel {
        a,
        b,
        value: kron * half,
        error: ((kron - gauss) * half).abs(),
    })
}

/// Integrates `f` over `[a, b]`.
pub fn integrate<F>(f: F, a: f64, b: f64, tol: Tolerance) -> Result<Integral>
where
    F: FnMut(f64) -> f64,
{
    integrate_with_breaks(f, &[a, b], tol)
}

/// Integrates `f` over `[breaks[0], breaks[last]]`, starting from one panel
/// per consecutive pair of break points. Kinks and jumps of the integrand
/// belong in `breaks`.
pub fn integrate_with_breaks<F>(mut f: F, breaks: &[f64], tol: Tolerance) -> Result<Integral>
where
    F: FnMut(f64) -> f64,
{
    if breaks.len() < 2 {
        return Err(Error::domain("quadrature needs at least two break points", breaks.len() as f64));
    }
    for w in breaks.windows(2) {
        if !(w[0].is_finite() && w[1].is_finite() && w[0] <= w[1]) {
            return Err(Error::domain("quadrature break points must be finite and sorted", w[1]));
        }
    }
    let mut panels: Vec<Panel> = Vec::new();
    for w in breaks.windows(2) {
        if w[1] > w[0] {
            panels.push(kronrod(&mut f, w[0], w[1])?);
        }
    }
    let mut evaluations = 15 * panels.len();
    loop {
        let value: f64 = panels.iter().map(|p| p.value).sum();
        let error: f64 = panels.iter().map(|p| p.error).sum();
        if error <= tol.abs.max(tol.rel * value.abs()) {
            return Ok(Integral {
                value,
                error,
                evaluations,
            });
        }
        if panels.len() >= tol.max_panels {
            return Err(Error::Quadrature {
                estimate: value,
                error,
            });
        }
        let (worst, _) = panels
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |(bi, be), (i, p)| {
                if p.error > be {
                    (i, p.error)
                } else {
                    (bi, be)
                }
            });
        let p = panels.swap_remove(worst);
        let mid = 0.5 * (p.a + p.b);
        if !(mid > p.a && mid < p.b) {
            // Panel cannot be split further in floating point.
            return Err(Error::Quadrature {
                estimate: value,
                error,
            });
        }
        panels.push(kronrod(&mut f, p.a, mid)?);
        panels.push(kronrod(&mut f, mid, p.b)?);
        evaluations += 30;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomials_are_exact() {
        let r = integrate(|x| x * x * x - 2.0 * x + 1.0, 0.0, 2.0, Tolerance::default()).unwrap();
        assert!((r.value - 2.0).abs() < 1e-13);
        assert_eq!(r.evaluations, 15);
    }

    #[test]
    fn smooth_and_peaked() {
        let r = integrate(|x| x.exp(), 0.0, 1.0, Tolerance::default()).unwrap();
        assert!((r.value - (1f64.exp() - 1.0)).abs() < 1e-12);
        let r = integrate(|x| 1.0 / (1e-4 + x * x), -1.0, 1.0, Tolerance::default()).unwrap();
        let exact = 2.0 * (1.0 / 1e-4f64.sqrt()) * (1.0 / 1e-4f64.sqrt()).atan();
        assert!((r.value - exact).abs() < 1e-8 * exact);
    }

    #[test]
    fn breaks_handle_kinks() {
        let r = integrate_with_breaks(|x| (x - 0.3).abs(), &[0.0, 0.3, 1.0], Tolerance::default())
            .unwrap();
        assert!((r.value - (0.045 + 0.245)).abs() < 1e-14);
    }

    #[test]
    fn non_finite_integrand_is_reported() {
        let e = integrate(|x| 1.0 / (x - 0.5), 0.0, 1.0, Tolerance::default());
        assert!(matches!(e, Err(Error::Evaluation { .. })));
    }

    #[test]
    fn bad_breaks_rejected() {
        assert!(integrate_with_breaks(|x| x, &[1.0], Tolerance::default()).is_err());
        assert!(integrate_with_breaks(|x| x, &[1.0, 0.0], Tolerance::default()).is_err());
    }
}
