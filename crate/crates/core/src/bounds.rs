//! Scalar bounds: the Marx-type exponent, the Phi/A/B/C ledger, the radius
//! equation and its tail sum, the extremal angle constraint and the
//! conjectured coefficient envelope.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::optimize::bracketed_root;

/// Default bracket of the radius equation.
pub const RADIUS_BRACKET: (f64, f64) = (0.5, 0.9);
/// Bisection runs until the bracket is this narrow, then secant steps take over.
pub const RADIUS_SWITCH: f64 = 1e-3;

const ALPHA_TOL: f64 = 1e-12;

/// `alpha(x) = (20 + x - sqrt(x^2 + 40x + 16)) / 24` for `0 <= x <= 2`.
pub fn marx_alpha(x: f64) -> Result<f64> {
    if !(0.0..=2.0).contains(&x) {
        return Err(Error::DomainError(format!("x must lie in [0, 2], got {x}")));
    }
    Ok((20.0 + x - (x * x + 40.0 * x + 16.0).sqrt()) / 24.0)
}

/// Inverse of [`marx_alpha`]: `a2 = 12 alpha + 8/alpha - 20`.
pub fn alpha_to_a2(alpha: f64) -> Result<f64> {
    if !(alpha >= 0.5 - ALPHA_TOL && alpha <= 2.0 / 3.0 + ALPHA_TOL) {
        return Err(Error::DomainError(format!("alpha must lie in [1/2, 2/3], got {alpha}")));
    }
    Ok(12.0 * alpha + 8.0 / alpha - 20.0)
}

/// Coefficients of `Phi(t) = ((a + b t)^2 + c t (d + t)^2) / ((1-alpha)^2 (alpha^2 + t)^3)`
/// and of `Phi - 1 = (A t^2 + B t + C) / ((1-alpha)^2 (alpha^2 + t)^3)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PhiParameters {
    pub alpha: f64,
    pub m: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub big_a: f64,
    pub big_b: f64,
    pub big_c: f64,
}

impl PhiParameters {
    pub fn new(alpha: f64, m: f64) -> Result<Self> {
        if !(alpha >= 0.5 - ALPHA_TOL && alpha <= 2.0 / 3.0 + ALPHA_TOL) {
            return Err(Error::DomainError(format!("alpha must lie in [1/2, 2/3], got {alpha}")));
        }
        let s = (1.0 - alpha).powi(2);
        let a = s * (m - alpha * (1.0 + alpha));
        let b = m - 3.0 * alpha * (1.0 - alpha);
        let c = s;
        let d = 1.0 - 3.0 * alpha * alpha;
        Ok(Self {
            alpha,
            m,
            a,
            b,
            c,
            d,
            big_a: b * b + 2.0 * c * d - 3.0 * alpha.powi(2) * s,
            big_b: 2.0 * a * b + c * d * d - 3.0 * alpha.powi(4) * s,
            big_c: a * a - alpha.powi(6) * s,
        })
    }

    /// `m` at its lower bound `8(1-alpha) / (4(1-alpha) + a2)` with `a2 = alpha_to_a2(alpha)`.
    pub fn at_lower_bound(alpha: f64) -> Result<Self> {
        let a2 = alpha_to_a2(alpha)?;
        Self::new(alpha, 8.0 * (1.0 - alpha) / (4.0 * (1.0 - alpha) + a2))
    }
}

pub fn phi_value(p: &PhiParameters, t: f64) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(Error::DomainError(format!("t must be nonnegative, got {t}")));
    }
    let num = (p.a + p.b * t).powi(2) + p.c * t * (p.d + t).powi(2);
    Ok(num / ((1.0 - p.alpha).powi(2) * (p.alpha * p.alpha + t).powi(3)))
}

/// Minima of `A`, `B`, `C` over an alpha grid on `[1/2, 2/3]`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AbcReport {
    pub step: f64,
    pub points: usize,
    pub min_a: f64,
    pub min_b: f64,
    pub min_c: f64,
    /// `A`, `B`, `C` at `alpha = 1/2`.
    pub at_half: [f64; 3],
}

pub fn abc_check(alpha_grid_step: f64) -> Result<AbcReport> {
    if !(alpha_grid_step > 0.0) {
        return Err(Error::ParameterOutOfRange(format!("step must be positive, got {alpha_grid_step}")));
    }
    let (lo, hi) = (0.5, 2.0 / 3.0);
    let n = ((hi - lo) / alpha_grid_step).ceil() as usize;
    let mut report = AbcReport {
        step: alpha_grid_step,
        points: n + 1,
        min_a: f64::INFINITY,
        min_b: f64::INFINITY,
        min_c: f64::INFINITY,
        at_half: [0.0; 3],
    };
    for k in 0..=n {
        let alpha = if k == n { hi } else { lo + k as f64 * alpha_grid_step };
        let p = PhiParameters::at_lower_bound(alpha)?;
        report.min_a = report.min_a.min(p.big_a);
        report.min_b = report.min_b.min(p.big_b);
        report.min_c = report.min_c.min(p.big_c);
        if k == 0 {
            report.at_half = [p.big_a, p.big_b, p.big_c];
        }
    }
    Ok(report)
}

/// `r (1-r^2)^2 / 2 * log((1+r)/(1-r)) - (4 + r^4 - 7 r^2)`.
pub fn radius_lhs(r: f64) -> f64 {
    let s = 1.0 - r * r;
    r * s * s / 2.0 * ((1.0 + r) / (1.0 - r)).ln() - (4.0 + r.powi(4) - 7.0 * r * r)
}

/// Root of [`radius_lhs`] in the default bracket.
pub fn solve_radius(tol: f64) -> Result<f64> {
    solve_radius_in(RADIUS_BRACKET.0, RADIUS_BRACKET.1, tol)
}

pub fn solve_radius_in(lo: f64, hi: f64, tol: f64) -> Result<f64> {
    solve_with(radius_lhs, lo, hi, tol)
}

/// Bracketed root of any equation with the same strategy as [`solve_radius`].
pub fn solve_with(g: impl Fn(f64) -> f64, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(Error::ParameterOutOfRange(format!("tolerance must be positive, got {tol}")));
    }
    if !(0.0 < lo && lo < hi && hi < 1.0) {
        return Err(Error::ParameterOutOfRange(format!("bracket [{lo}, {hi}] must satisfy 0 < lo < hi < 1")));
    }
    bracketed_root(g, lo, hi, RADIUS_SWITCH, tol)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TailMode {
    ClosedForm,
    Partial(usize),
}

/// `sum_{n>=2} (n-1)^2/(2n-1) r^{2n}`, in closed form or summed to `N`.
pub fn tail_sum(r: f64, mode: TailMode) -> Result<f64> {
    if !(0.0..1.0).contains(&r) {
        return Err(Error::DomainError(format!("r must lie in [0, 1), got {r}")));
    }
    Ok(match mode {
        TailMode::ClosedForm => {
            let s = 1.0 - r * r;
            r * r * (3.0 * r * r - 1.0) / (4.0 * s * s) + r / 8.0 * ((1.0 + r) / (1.0 - r)).ln()
        }
        TailMode::Partial(n_max) => {
            if n_max < 2 {
                return Err(Error::ParameterOutOfRange(format!("partial sums need N >= 2, got {n_max}")));
            }
            let r2 = r * r;
            let mut power = r2;
            let mut sum = 0.0;
            for n in 2..=n_max {
                power *= r2;
                let k = (n - 1) as f64;
                sum += k * k / (2 * n - 1) as f64 * power;
            }
            sum
        }
    })
}

/// Right side of `cos theta <= ((1-lambda^2)^2 - a2^2 (1+lambda^2)) / (2 lambda a2^2)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ThetaBound {
    pub value: f64,
    pub clamped: bool,
}

pub fn extremal_theta_bound(a2: f64, lambda: f64) -> Result<ThetaBound> {
    if !(lambda > 0.0 && lambda <= 1.0) {
        return Err(Error::ParameterOutOfRange(format!("lambda must lie in (0, 1], got {lambda}")));
    }
    if a2 > 1.0 + lambda + 1e-12 {
        return Err(Error::DomainError(format!("a2 = {a2} exceeds 1 + lambda")));
    }
    if a2 <= 1.0 - lambda {
        return Ok(ThetaBound { value: 1.0, clamped: false });
    }
    let lam2 = lambda * lambda;
    let q = ((1.0 - lam2).powi(2) - a2 * a2 * (1.0 + lam2)) / (2.0 * lambda * a2 * a2);
    let value = q.clamp(-1.0, 1.0);
    Ok(ThetaBound { value, clamped: value != q })
}

/// `sum_{k=0}^{n-1} lambda^k`.
pub fn conjecture_bound(n: usize, lambda: f64) -> f64 {
    (0..n).map(|k| lambda.powi(k as i32)).sum()
}
