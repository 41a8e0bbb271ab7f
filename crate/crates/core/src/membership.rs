//! Membership in U(lambda): coefficient certificates, sup sweeps, coefficient
//! functionals and the contraction that locates zeros of `z/f`.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::map::{AnalyticMap, Backing, ClassParameter, NONVANISHING_RADIUS, NONVANISHING_SAMPLES};
use crate::optimize::golden_max;
use crate::schwarz::SchwarzGenerator;
use crate::series::TruncatedSeries;
use crate::zeros::zero_count_in_disk;

/// Radii of the sup sweep.
pub const SWEEP_RADII: [f64; 3] = [0.9, 0.99, 0.999];
/// Samples per sweep circle.
pub const SWEEP_SAMPLES: usize = 8192;
/// A sample refutes only if `|U_f| >= lambda (1 + REFUTE_SLACK)`.
pub const REFUTE_SLACK: f64 = 1e-9;
/// Truncated certificates need `sum + tail <= lambda (1 - CERTIFY_MARGIN)`.
pub const CERTIFY_MARGIN: f64 = 1e-6;
/// Slack for exact (polynomial) certificates.
pub const EXACT_CERTIFY_SLACK: f64 = 1e-12;

const OMITTED_SAMPLES: usize = 4096;
const MAX_FIXED_POINT_ITERATIONS: usize = 10_000;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status")]
pub enum VerdictStatus {
    CertifiedMember,
    SampledMember { margin: f64, radius_sweep: Vec<f64> },
    Refuted { witness: Complex64, value: f64 },
    NonvanishingViolated { zero_count: i64, radius: f64 },
    Inconclusive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Test {
    ZeroCount,
    CoefficientSum,
    SupSweep,
}

/// Largest `|U_f|` found on one circle.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CircleSup {
    pub radius: f64,
    pub value: f64,
    pub witness: Complex64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Evidence {
    pub decided_by: Option<Test>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub zero_count: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coefficient_sum: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tail_bound: Option<f64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub sweep: Vec<CircleSup>,
    /// False if the sampled sup decreased with the radius.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub monotone: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MembershipVerdict {
    pub lambda: f64,
    #[serde(flatten)]
    pub status: VerdictStatus,
    pub evidence: Evidence,
}

impl MembershipVerdict {
    pub fn is_member(&self) -> bool {
        matches!(self.status, VerdictStatus::CertifiedMember | VerdictStatus::SampledMember { .. })
    }

    pub fn is_refuted(&self) -> bool {
        matches!(self.status, VerdictStatus::Refuted { .. } | VerdictStatus::NonvanishingViolated { .. })
    }
}

/// Outcome of the coefficient test on a map.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CoefficientCertificate {
    /// `sum_{n=2}^N (n-1)|b_n|`.
    pub sum: f64,
    pub tail_bound: Option<f64>,
    pub certified: bool,
}

fn coefficient_sum_passes(sum: f64, tail: f64, lambda: f64) -> bool {
    if tail == 0.0 {
        sum <= lambda + EXACT_CERTIFY_SLACK
    } else {
        sum + tail <= lambda * (1.0 - CERTIFY_MARGIN)
    }
}

/// Coefficient certificate for a pre-Schwarzian series read as an exact
/// polynomial: `sum (n-1)|b_n| <= lambda` and no zeros in `|z| < 0.999`.
pub fn certify_by_coefficients(pre_schwarzian: &TruncatedSeries, lambda: f64) -> bool {
    if (pre_schwarzian.coeff(0) - 1.0).norm() > EXACT_CERTIFY_SLACK {
        return false;
    }
    if !coefficient_sum_passes(pre_schwarzian.weighted_tail_sum(), 0.0, lambda) {
        return false;
    }
    matches!(zero_count_in_disk(|z| pre_schwarzian.evaluate(z), NONVANISHING_RADIUS, NONVANISHING_SAMPLES), Ok(0))
}

fn coefficient_certificate(f: &AnalyticMap, lambda: f64) -> CoefficientCertificate {
    let sum = f.pre_schwarzian().weighted_tail_sum();
    let tail_bound = f.series_tail_bound();
    let certified = tail_bound.is_some_and(|t| coefficient_sum_passes(sum, t, lambda));
    CoefficientCertificate { sum, tail_bound, certified }
}

/// Coefficient certificate for a map, using its analytic tail bound and an
/// exact zero count of `z/f`.
pub fn certify_map_by_coefficients(f: &AnalyticMap, lambda: f64) -> CoefficientCertificate {
    let mut cert = coefficient_certificate(f, lambda);
    if cert.certified && f.ensure_nonvanishing().is_err() {
        cert.certified = false;
    }
    cert
}

/// Largest `|U_f|` over `m` equispaced points of `|z| = r`, polished by a
/// golden-section search around the best sample.
pub fn sup_u_on_circle(f: &AnalyticMap, r: f64, m: usize) -> Result<CircleSup> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::DomainError(format!("radius must lie in (0, 1), got {r}")));
    }
    let m = m.max(1);
    let at = |theta: f64| f.u(Complex64::from_polar(r, theta)).map(|u| u.norm());
    let values: Vec<Result<f64>> = (0..m).into_par_iter().with_min_len(512).map(|k| at(TAU * k as f64 / m as f64)).collect();
    let (mut best_k, mut best) = (0, f64::NEG_INFINITY);
    for (k, v) in values.into_iter().enumerate() {
        let v = v?;
        if v > best {
            best = v;
            best_k = k;
        }
    }
    let h = TAU / m as f64;
    let centre = h * best_k as f64;
    let (theta, refined) = golden_max(|t| at(t).unwrap_or(f64::NEG_INFINITY), centre - h, centre + h, 1e-12);
    let (theta, value) = if refined > best { (theta, refined) } else { (centre, best) };
    Ok(CircleSup { radius: r, value, witness: Complex64::from_polar(r, theta) })
}

/// Runs the membership pipeline: zero count, coefficient certificate, sup sweep.
pub fn verdict(f: &AnalyticMap, lambda: ClassParameter) -> MembershipVerdict {
    verdict_with(f, lambda, &SWEEP_RADII, SWEEP_SAMPLES)
}

/// [`verdict`] with a custom sweep.
pub fn verdict_with(f: &AnalyticMap, lambda: ClassParameter, radii: &[f64], m: usize) -> MembershipVerdict {
    let lam = lambda.value();
    let mut evidence = Evidence::default();
    let done = |status, evidence| MembershipVerdict { lambda: lam, status, evidence };

    evidence.decided_by = Some(Test::ZeroCount);
    match f.zero_count(NONVANISHING_RADIUS, NONVANISHING_SAMPLES) {
        Ok(count) => {
            evidence.zero_count = Some(count.total());
            if count.total() != 0 {
                let status = VerdictStatus::NonvanishingViolated { zero_count: count.total(), radius: NONVANISHING_RADIUS };
                return done(status, evidence);
            }
        }
        Err(e) => {
            evidence.note = Some(e.to_string());
            return done(VerdictStatus::Inconclusive, evidence);
        }
    }

    let cert = coefficient_certificate(f, lam);
    evidence.coefficient_sum = Some(cert.sum);
    evidence.tail_bound = cert.tail_bound;
    if cert.certified {
        evidence.decided_by = Some(Test::CoefficientSum);
        return done(VerdictStatus::CertifiedMember, evidence);
    }

    evidence.decided_by = Some(Test::SupSweep);
    for &r in radii {
        match sup_u_on_circle(f, r, m) {
            Ok(s) => {
                evidence.sweep.push(s);
                if s.value >= lam * (1.0 + REFUTE_SLACK) {
                    evidence.monotone = Some(sweep_is_monotone(&evidence.sweep));
                    let status = VerdictStatus::Refuted { witness: s.witness, value: s.value };
                    return done(status, evidence);
                }
            }
            Err(e) => {
                evidence.note = Some(e.to_string());
                return done(VerdictStatus::Inconclusive, evidence);
            }
        }
    }
    evidence.monotone = Some(sweep_is_monotone(&evidence.sweep));
    let sup = evidence.sweep.iter().map(|s| s.value).fold(0.0, f64::max);
    let status = if sup < lam * (1.0 - REFUTE_SLACK) {
        VerdictStatus::SampledMember { margin: lam - sup, radius_sweep: radii.to_vec() }
    } else {
        VerdictStatus::Inconclusive
    };
    done(status, evidence)
}

fn sweep_is_monotone(sweep: &[CircleSup]) -> bool {
    sweep.windows(2).all(|w| w[0].value <= w[1].value + 1e-9)
}

/// `|a_3 - a_2^2|`.
pub fn fekete_check(f: &AnalyticMap) -> Result<f64> {
    let a = f.taylor_coefficients(3)?;
    Ok((a[2] - a[1] * a[1]).norm())
}

/// Iterates of `z <- (1 + lambda z integral_0^z omega) / a2` started at 0.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FixedPointTrace {
    pub z0: Complex64,
    /// `|z_{k+1} - z_k|` for every step.
    pub steps: Vec<f64>,
    /// `|1 - a2 z0 + lambda z0 integral_0^{z0} omega|`.
    pub residual: f64,
}

impl FixedPointTrace {
    /// Ratios of successive step lengths.
    pub fn contraction_ratios(&self) -> Vec<f64> {
        self.steps.windows(2).filter(|w| w[0] > 0.0).map(|w| w[1] / w[0]).collect()
    }
}

/// Zero of `z/f = 1 - a2 z + lambda z integral_0^z omega` inside the disk,
/// found by the contraction on `|z| <= (1 + lambda)/|a2|` that exists when
/// `|a2| > 1 + lambda`.
pub fn fixed_point_zero_locator(a2: Complex64, lambda: ClassParameter, omega: &SchwarzGenerator, tol: f64) -> Result<Complex64> {
    Ok(fixed_point_trace(a2, lambda, omega, tol)?.z0)
}

/// [`fixed_point_zero_locator`] keeping the step history.
pub fn fixed_point_trace(a2: Complex64, lambda: ClassParameter, omega: &SchwarzGenerator, tol: f64) -> Result<FixedPointTrace> {
    let lam = lambda.value();
    if a2.norm() <= 1.0 + lam {
        return Err(Error::NotContracting { modulus: a2.norm(), bound: 1.0 + lam });
    }
    if !(tol > 0.0) {
        return Err(Error::ParameterOutOfRange(format!("tolerance must be positive, got {tol}")));
    }
    let step = |z: Complex64| (1.0 + lam * z * omega.integral(z)) / a2;
    let mut z = Complex64::new(0.0, 0.0);
    let mut steps = Vec::new();
    for _ in 0..MAX_FIXED_POINT_ITERATIONS {
        let next = step(z);
        let d = (next - z).norm();
        steps.push(d);
        z = next;
        if d < tol {
            break;
        }
    }
    let residual = (1.0 - a2 * z + lam * z * omega.integral(z)).norm();
    Ok(FixedPointTrace { z0: z, steps, residual })
}

/// For `z/f = 1 + b_1 z + sum_{n>=2} (-1)^n b_n z^n` with `b_n >= 0`: univalence
/// holds iff `sum (n-1) b_n <= 1`. `b[k]` holds `b_{k+2}`; `b_1` does not enter.
pub fn alternating_univalence_test(b: &[f64], b1: f64) -> Result<bool> {
    if !b1.is_finite() {
        return Err(Error::ParameterOutOfRange("b1 must be finite".into()));
    }
    let mut sum = 0.0;
    for (k, &v) in b.iter().enumerate() {
        if v < 0.0 || v.is_nan() {
            return Err(Error::NegativeCoefficient { index: k + 2, value: v });
        }
        sum += (k + 1) as f64 * v;
    }
    Ok(sum <= 1.0)
}

/// Minimum of `|1 + mu z + lambda z integral_0^z omega|` on `|z| = 0.999`; a
/// positive value shows that `-1/(a2 + mu)` is omitted by `f`.
pub fn omitted_value_bound_check(f: &AnalyticMap, mu: Complex64) -> Result<f64> {
    let Backing::Characterization { a2, lambda, omega } = f.backing() else {
        return Err(Error::UnsupportedBacking("characterization"));
    };
    let lam = lambda.value();
    if mu.norm() > 1.0 - lam + 1e-12 {
        return Err(Error::ParameterOutOfRange(format!("|mu| = {} exceeds 1 - lambda = {}", mu.norm(), 1.0 - lam)));
    }
    if (a2 + mu).norm() == 0.0 {
        return Err(Error::DomainError("a2 + mu must not vanish".into()));
    }
    let r = NONVANISHING_RADIUS;
    let min = (0..OMITTED_SAMPLES)
        .map(|k| {
            let z = Complex64::from_polar(r, TAU * k as f64 / OMITTED_SAMPLES as f64);
            (1.0 + mu * z + lam * z * omega.integral(z)).norm()
        })
        .fold(f64::INFINITY, f64::min);
    Ok(min)
}
