//! Scalar search helpers: golden-section extremum refinement and a bracketed
//! bisection/secant root finder.

use crate::error::{Error, Result};

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Maximizes a unimodal `f` on `[a, b]`; returns `(argmax, max)`.
pub fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a).abs() > tol {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    let fx = f(x);
    [(c, fc), (d, fd), (x, fx)].into_iter().fold((x, fx), |best, p| if p.1 > best.1 { p } else { best })
}

/// Minimizes a unimodal `f` on `[a, b]`; returns `(argmin, min)`.
pub fn golden_min(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> (f64, f64) {
    let (x, v) = golden_max(|t| -f(t), a, b, tol);
    (x, -v)
}

/// Root of `f` in `[lo, hi]`: bisection until the bracket is below `switch`,
/// then secant steps kept inside the bracket.
pub fn bracketed_root(f: impl Fn(f64) -> f64, lo: f64, hi: f64, switch: f64, tol: f64) -> Result<f64> {
    let (mut a, mut b) = (lo, hi);
    let (mut fa, mut fb) = (f(a), f(b));
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() || !fa.is_finite() || !fb.is_finite() {
        return Err(Error::BracketFailure { lo, hi });
    }
    while b - a > switch {
        let m = 0.5 * (a + b);
        let fm = f(m);
        if fm == 0.0 {
            return Ok(m);
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
            fb = fm;
        }
    }
    for _ in 0..200 {
        if b - a <= tol {
            break;
        }
        let mut x = b - fb * (b - a) / (fb - fa);
        if !(x > a && x < b) {
            x = 0.5 * (a + b);
        }
        let fx = f(x);
        if fx == 0.0 {
            return Ok(x);
        }
        // shrink from the secant point; nudge the far side when it stalls
        if fx.signum() == fa.signum() {
            a = x;
            fa = fx;
            let probe = (a + tol).min(b);
            let fp = f(probe);
            if fp.signum() != fa.signum() {
                b = probe;
                fb = fp;
            }
        } else {
            b = x;
            fb = fx;
            let probe = (b - tol).max(a);
            let fp = f(probe);
            if fp.signum() != fb.signum() {
                a = probe;
                fa = fp;
            }
        }
    }
    Ok(if fa.abs() < fb.abs() { a } else { b })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_finds_peak() {
        let (x, v) = golden_max(|t| -(t - 0.3).powi(2) + 2.0, 0.0, 1.0, 1e-12);
        assert!((x - 0.3).abs() < 1e-6);
        assert!((v - 2.0).abs() < 1e-12);
    }

    #[test]
    fn root_of_cosine() {
        let r = bracketed_root(f64::cos, 1.0, 2.0, 1e-3, 1e-14).unwrap();
        assert!((r - std::f64::consts::FRAC_PI_2).abs() < 1e-14);
        assert!(matches!(bracketed_root(f64::cos, 2.0, 3.0, 1e-3, 1e-12), Err(Error::BracketFailure { .. })));
    }
}
