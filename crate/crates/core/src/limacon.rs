//! Limaçons `l u + lambda u^2` on the unit circle, exact containment in their
//! regions, and the subordination and growth checks built on them.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::map::{AnalyticMap, NONVANISHING_RADIUS, NONVANISHING_SAMPLES};
use crate::optimize::{bracketed_root, golden_min};
use crate::zeros::try_zero_count_in_disk;

const RANGE_TOL: f64 = 1e-12;
/// Cosines within this distance of `+-1` are snapped to the endpoint.
const COSINE_SNAP: f64 = 1e-13;
const INTERSECTION_SCAN: usize = 256;

/// The curve `e^{i beta} (l e^{i alpha} + lambda e^{2 i alpha})` and the region
/// `{e^{i beta}(l u + lambda u^2) : |u| < 1}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Limacon {
    pub lambda: f64,
    pub l: f64,
    pub beta: f64,
}

impl Limacon {
    pub fn new(lambda: f64, l: f64, beta: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda <= 1.0) {
            return Err(Error::ParameterOutOfRange(format!("lambda must lie in (0, 1], got {lambda}")));
        }
        if !(l >= 1.0 - lambda - RANGE_TOL && l <= 1.0 + lambda + RANGE_TOL) {
            return Err(Error::ParameterOutOfRange(format!("l = {l} outside [{}, {}]", 1.0 - lambda, 1.0 + lambda)));
        }
        if !beta.is_finite() {
            return Err(Error::ParameterOutOfRange("beta must be finite".into()));
        }
        Ok(Self { lambda, l, beta })
    }

    /// Point of the curve at parameter `alpha`.
    pub fn parametric_point(&self, alpha: f64) -> (f64, f64) {
        let (s, c) = alpha.sin_cos();
        let radial = self.l + 2.0 * self.lambda * c;
        let w = Complex64::new(c * radial - self.lambda, s * radial) * Complex64::from_polar(1.0, self.beta);
        (w.re, w.im)
    }

    /// `(x^2 + y^2 - lambda^2)^2 - l^2 (x^2 + y^2 + lambda^2 + 2 lambda x)` in the
    /// unrotated frame.
    pub fn implicit_residual(&self, x: f64, y: f64) -> f64 {
        let (lam, l) = (self.lambda, self.l);
        let rho = x * x + y * y;
        (rho - lam * lam).powi(2) - l * l * (rho + lam * lam + 2.0 * lam * x)
    }

    /// Whether `w = e^{i beta}(l u + lambda u^2)` for some `|u| < 1`.
    pub fn region_contains(&self, w: Complex64) -> Result<bool> {
        Ok(quadratic_preimage_modulus(self.l, self.lambda, w * Complex64::from_polar(1.0, -self.beta))? < 1.0)
    }
}

/// Smallest `|u|` with `c1 u + c2 u^2 = w`.
pub fn quadratic_preimage_modulus(c1: f64, c2: f64, w: Complex64) -> Result<f64> {
    if c2.abs() < 1e-14 {
        if c1.abs() < 1e-14 {
            return Err(Error::DegenerateQuadratic);
        }
        return Ok((w / c1).norm());
    }
    // c2 u^2 + c1 u - w = 0, roots from the cancellation-free pair q/c2 and -w/q
    let c1 = Complex64::new(c1, 0.0);
    let sq = (c1 * c1 + 4.0 * c2 * w).sqrt();
    let sq = if (c1.conj() * sq).re >= 0.0 { sq } else { -sq };
    let q = -0.5 * (c1 + sq);
    if q.norm() == 0.0 {
        return Ok(0.0);
    }
    Ok((q / c2).norm().min((-w / q).norm()))
}

/// Whether `w` lies in `{c1 u + c2 u^2 : |u| < 1}`.
pub fn quadratic_region_contains(c1: f64, c2: f64, w: Complex64) -> Result<bool> {
    Ok(quadratic_preimage_modulus(c1, c2, w)? < 1.0)
}

/// `beta_1 = arccos(-x)` with `x = ((1-lambda^2)^2 - l^2 (1+lambda^2)) / (2 lambda l^2)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Beta1 {
    pub beta1: f64,
    /// `x` before clamping.
    pub x: f64,
    pub clamped: bool,
}

pub fn beta1_closed_form(lambda: f64, l: f64) -> Result<Beta1> {
    Limacon::new(lambda, l, 0.0)?;
    if l <= 0.0 {
        return Err(Error::DomainError("l must be positive".into()));
    }
    let lam2 = lambda * lambda;
    let x = ((1.0 - lam2).powi(2) - l * l * (1.0 + lam2)) / (2.0 * lambda * l * l);
    let (cos_beta, clamped) = if x >= 1.0 - COSINE_SNAP {
        (-1.0, x != 1.0)
    } else if x <= -1.0 + COSINE_SNAP {
        (1.0, x != -1.0)
    } else {
        (-x, false)
    };
    Ok(Beta1 { beta1: cos_beta.acos(), x, clamped })
}

/// `beta_1` from a scan-and-bisect search for where the curve crosses the unit
/// circle, independent of the closed form.
pub fn unit_circle_intersection_numeric(c: &Limacon) -> Result<f64> {
    let base = Limacon { beta: 0.0, ..*c };
    // |l e^{i a} + lambda e^{2ia}|^2 - 1
    let excess = |alpha: f64| {
        let (x, y) = base.parametric_point(alpha);
        x * x + y * y - 1.0
    };
    let grid: Vec<f64> = (0..=INTERSECTION_SCAN).map(|k| PI * k as f64 / INTERSECTION_SCAN as f64).collect();
    let alpha = grid
        .windows(2)
        .find_map(|w| {
            let (a, b) = (excess(w[0]), excess(w[1]));
            if a == 0.0 {
                Some(Ok(w[0]))
            } else if b == 0.0 {
                Some(Ok(w[1]))
            } else if a.signum() != b.signum() {
                Some(bracketed_root(excess, w[0], w[1], 1e-3 * (w[1] - w[0]), 1e-15))
            } else {
                None
            }
        })
        .ok_or(Error::NoIntersection)??;
    let (x, y) = base.parametric_point(alpha);
    Ok(PI - y.abs().atan2(x))
}

/// Minimum of `|q_psi(e^{i tau})|` for `q_psi(z) = (1+lambda) z - lambda e^{i psi} z^2`
/// and where it is attained, with `tau` in `(-pi, pi]`.
pub fn q_min_modulus(lambda: f64, psi: f64, m: usize) -> (f64, f64) {
    let m = m.max(4096);
    let rot = Complex64::from_polar(lambda, psi);
    let modulus = |tau: f64| {
        let z = Complex64::from_polar(1.0, tau);
        ((1.0 + lambda) * z - rot * z * z).norm()
    };
    let h = TAU / m as f64;
    let (k, _) = (0..m)
        .map(|k| (k, modulus(-PI + h * k as f64)))
        .fold((0, f64::INFINITY), |best, cur| if cur.1 < best.1 { cur } else { best });
    let centre = -PI + h * k as f64;
    let (tau, min) = golden_min(modulus, centre - h, centre + h, 1e-13);
    let tau = if tau <= -PI { tau + TAU } else if tau > PI { tau - TAU } else { tau };
    (min, tau)
}

/// Which subordination to test.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Subordination {
    /// `z/f + a2 z < 1 + 2 lambda z + lambda z^2`.
    SecondCoefficientShift,
    /// `z/f < 1 + (1+lambda) z + lambda z^2`.
    PreSchwarzian,
    /// `z/f - (1-lambda) z < 1 + 2 lambda z + lambda z^2`, under `z/f != (1-lambda)(1+z)`.
    LinearShift,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SubordinationReport {
    pub holds: bool,
    /// Largest preimage modulus `|u|` over the samples.
    pub worst_preimage: f64,
    pub witness: Complex64,
    /// For [`Subordination::LinearShift`]: whether `z/f - (1-lambda)(1+z)` was
    /// shown zero-free by zero counting.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hypothesis_verified: Option<bool>,
}

/// Tests `W(z) - 1` against the quadratic region on `m` points of `|z| = r`.
pub fn subordination_check(f: &AnalyticMap, lambda: f64, r: f64, m: usize, variant: Subordination) -> Result<SubordinationReport> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::DomainError(format!("radius must lie in (0, 1), got {r}")));
    }
    let a2 = f.a2();
    let (c1, c2) = match variant {
        Subordination::PreSchwarzian => (1.0 + lambda, lambda),
        _ => (2.0 * lambda, lambda),
    };
    let shift = match variant {
        Subordination::SecondCoefficientShift => a2,
        Subordination::PreSchwarzian => Complex64::new(0.0, 0.0),
        Subordination::LinearShift => Complex64::new(lambda - 1.0, 0.0),
    };
    let hypothesis_verified = (variant == Subordination::LinearShift).then(|| {
        let count = try_zero_count_in_disk(
            |z| Ok(f.pre_schwarzian_at(z)?.0 - (1.0 - lambda) * (1.0 + z)),
            NONVANISHING_RADIUS,
            NONVANISHING_SAMPLES,
        );
        matches!(count, Ok(0))
    });
    let mut worst = 0.0;
    let mut witness = Complex64::new(r, 0.0);
    for k in 0..m.max(1) {
        let z = Complex64::from_polar(r, TAU * k as f64 / m as f64);
        let w = f.pre_schwarzian_at(z)?.0 + shift * z - 1.0;
        let u = quadratic_preimage_modulus(c1, c2, w)?;
        if u > worst {
            worst = u;
            witness = z;
        }
    }
    Ok(SubordinationReport { holds: worst < 1.0, worst_preimage: worst, witness, hypothesis_verified })
}

/// `max |z/f - 1| - ((1 + lambda r)(1 + r) - 1)` over `m` points of `|z| = r`.
pub fn growth_bound_check(f: &AnalyticMap, lambda: f64, r: f64, m: usize) -> Result<f64> {
    let bound = (1.0 + lambda * r) * (1.0 + r) - 1.0;
    let mut max: f64 = 0.0;
    for k in 0..m.max(1) {
        let z = Complex64::from_polar(r, TAU * k as f64 / m as f64);
        max = max.max((f.pre_schwarzian_at(z)?.0 - 1.0).norm());
    }
    Ok(max - bound)
}

/// `1 + (1+lambda) e^{i alpha} + lambda e^{2 i alpha}`, the boundary of the
/// subordination target.
pub fn target_curve_point(lambda: f64, alpha: f64) -> (f64, f64) {
    let u = Complex64::from_polar(1.0, alpha);
    let w = 1.0 + (1.0 + lambda) * u + lambda * u * u;
    (w.re, w.im)
}
