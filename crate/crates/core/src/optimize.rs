//! Deterministic one-dimensional minimization and root finding.

// Unused when std is linked into the build, e.g. by dev-dependencies.
#[allow(unused_imports)]
use num_traits::Float;

use crate::{Error, Result};

/// Hard cap on objective evaluations for a single call.
pub const MAX_EVALUATIONS: usize = 10_000;
pub const DEFAULT_TOL: f64 = 1e-8;

const GOLDEN: f64 = 0.381_966_011_250_105_1;

/// A search interval with an absolute x-tolerance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
    pub tol: f64,
}

impl Bracket {
    pub fn new(lo: f64, hi: f64, tol: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::domain("bracket needs finite lo < hi", hi - lo));
        }
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(Error::domain("bracket tolerance must be positive", tol));
        }
        Ok(Bracket { lo, hi, tol })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Minimum {
    pub argmin: f64,
    pub value: f64,
    pub evaluations: usize,
}

struct Counted<F> {
    f: F,
    evaluations: usize,
}

impl<F: FnMut(f64) -> f64> Counted<F> {
    fn eval(&mut self, x: f64) -> Result<f64> {
        if self.evaluations >= MAX_EVALUATIONS {
            return Err(Error::BudgetExhausted {
                evaluations: self.evaluations,
            });
        }
        self.evaluations += 1;
        let v = (self.f)(x);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Evaluation { at: x })
        }
    }
}

/// Brent's method (golden section with successive parabolic interpolation).
///
/// Returns a local minimizer of `objective` on the bracket; for unimodal
/// objectives this is the global one.
pub fn minimize_scalar<F>(objective: F, b: Bracket) -> Result<Minimum>
where
    F: FnMut(f64) -> f64,
{
    let mut f = Counted {
        f: objective,
        evaluations: 0,
    };
    let m = brent(&mut f, b)?;
    Ok(Minimum {
        evaluations: f.evaluations,
        ..m
    })
}

fn brent<F: FnMut(f64) -> f64>(f: &mut Counted<F>, b: Bracket) -> Result<Minimum> {
    let (mut a, mut c) = (b.lo, b.hi);
    let mut x = a + GOLDEN * (c - a);
    let mut w = x;
    let mut v = x;
    let mut fx = f.eval(x)?;
    let mut fw = fx;
    let mut fv = fx;
    let mut d: f64 = 0.0;
    let mut e: f64 = 0.0;

    loop {
        let mid = 0.5 * (a + c);
        let tol1 = 2.0 * f64::EPSILON * x.abs() + b.tol / 3.0;
        let tol2 = 2.0 * tol1;
        if (x - mid).abs() <= tol2 - 0.5 * (c - a) {
            break;
        }
        let mut golden = true;
        if e.abs() > tol1 {
            let r = (x - w) * (fx - fv);
            let mut q = (x - v) * (fx - fw);
            let mut p = (x - v) * q - (x - w) * r;
            q = 2.0 * (q - r);
            if q > 0.0 {
                p = -p;
            } else {
                q = -q;
            }
            let e_prev = e;
            if p.abs() < (0.5 * q * e_prev).abs() && p > q * (a - x) && p < q * (c - x) {
                e = d;
                d = p / q;
                let u = x + d;
                if u - a < tol2 || c - u < tol2 {
                    d = if x < mid { tol1 } else { -tol1 };
                }
                golden = false;
            }
        }
        if golden {
            e = if x < mid { c - x } else { a - x };
            d = GOLDEN * e;
        }
        let u = if d.abs() >= tol1 {
            x + d
        } else if d > 0.0 {
            x + tol1
        } else {
            x - tol1
        };
        let fu = f.eval(u)?;
        if fu <= fx {
            if u < x {
                c = x;
            } else {
                a = x;
            }
            v = w;
            fv = fw;
            w = x;
            fw = fx;
            x = u;
            fx = fu;
        } else {
            if u < x {
                a = u;
            } else {
                c = u;
            }
            if fu <= fw || w == x {
                v = w;
                fv = fw;
                w = u;
                fw = fu;
            } else if fu <= fv || v == x || v == w {
                v = u;
                fv = fu;
            }
        }
    }
    Ok(Minimum {
        argmin: x,
        value: fx,
        evaluations: f.evaluations,
    })
}

/// Scans `points` log-spaced abscissae over a positive bracket, then refines
/// the best cell with Brent's method. Suited to objectives that are smooth
/// but not known to be unimodal over several decades.
pub fn minimize_log_scan<F>(objective: F, b: Bracket, points: usize) -> Result<Minimum>
where
    F: FnMut(f64) -> f64,
{
    if !(b.lo > 0.0) {
        return Err(Error::domain("log scan needs a positive bracket", b.lo));
    }
    if points < 3 {
        return Err(Error::domain("log scan needs at least three points", points as f64));
    }
    let mut f = Counted {
        f: objective,
        evaluations: 0,
    };
    let ln_lo = b.lo.ln();
    let step = (b.hi.ln() - ln_lo) / (points - 1) as f64;
    let at = |i: usize| {
        if i == 0 {
            b.lo
        } else if i == points - 1 {
            b.hi
        } else {
            (ln_lo + step * i as f64).exp()
        }
    };
    let mut best = (0usize, f64::INFINITY);
    for i in 0..points {
        let v = f.eval(at(i))?;
        if v < best.1 {
            best = (i, v);
        }
    }
    let lo = at(best.0.saturating_sub(1));
    let hi = at((best.0 + 1).min(points - 1));
    let refined = brent(&mut f, Bracket::new(lo, hi, b.tol)?)?;
    let m = if refined.value <= best.1 {
        refined
    } else {
        Minimum {
            argmin: at(best.0),
            value: best.1,
            evaluations: 0,
        }
    };
    Ok(Minimum {
        evaluations: f.evaluations,
        ..m
    })
}

/// Brent's root finder on a sign-changing bracket.
pub fn find_root<F>(f: F, b: Bracket) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    let mut f = Counted { f, evaluations: 0 };
    let (mut a, mut x) = (b.lo, b.hi);
    let mut fa = f.eval(a)?;
    let mut fx = f.eval(x)?;
    if fa == 0.0 {
        return Ok(a);
    }
    if fx == 0.0 {
        return Ok(x);
    }
    if fa.signum() == fx.signum() {
        return Err(Error::Bracketing { lo: b.lo, hi: b.hi });
    }
    // `x` is the current iterate, `c` the contrapoint across the sign change,
    // `a` the previous iterate.
    let (mut c, mut fc) = (x, fx);
    let mut d = x - a;
    let mut e = d;
    loop {
        if fx.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = x - a;
            e = d;
        }
        if fc.abs() < fx.abs() {
            a = x;
            x = c;
            c = a;
            fa = fx;
            fx = fc;
            fc = fa;
        }
        let tol1 = 2.0 * f64::EPSILON * x.abs() + 0.5 * b.tol;
        let half = 0.5 * (c - x);
        if half.abs() <= tol1 || fx == 0.0 {
            return Ok(x);
        }
        if e.abs() >= tol1 && fa.abs() > fx.abs() {
            let s = fx / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * half * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fx / fc;
                p = s * (2.0 * half * qa * (qa - r) - (x - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            let bound = (3.0 * half * q - (tol1 * q).abs()).min((e * q).abs());
            if 2.0 * p < bound {
                e = d;
                d = p / q;
            } else {
                d = half;
                e = d;
            }
        } else {
            d = half;
            e = d;
        }
        a = x;
        fa = fx;
        x += if d.abs() > tol1 { d } else { tol1.copysign(half) };
        fx = f.eval(x)?;
    }
}
