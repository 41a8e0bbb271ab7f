//! Schwarz-type generators: analytic `omega` on the disk with `|omega| <= 1`.
//!
//! Every generator is `omega(t) = outer * kind(inner * t)` with `|outer|, |inner| <= 1`,
//! which keeps the family closed under the rotation, dilation and conjugation laws
//! that the map transforms need. Validity is checked on construction by sampling
//! `|omega|` on the circle `|t| = 1 - 1e-3`.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::segment_integral;
use crate::series::TruncatedSeries;

/// Boundary samples used to validate a generator.
pub const VALIDATION_SAMPLES: usize = 4096;
/// Radius of the validation circle.
pub const VALIDATION_RADIUS: f64 = 1.0 - 1e-3;
/// Allowed excess of the sampled sup over 1.
pub const VALIDATION_SLACK: f64 = 1e-9;

/// Zeros closer than this (to each other or to the origin) send Blaschke
/// integrals through quadrature instead of partial fractions.
const PARTIAL_FRACTION_SEPARATION: f64 = 0.05;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SchwarzKind {
    /// `omega = c`.
    Constant { c: Complex64 },
    /// `omega = p / scale` where `scale` bounds `|p|` on the closed disk.
    Polynomial { coeffs: Vec<Complex64>, scale: f64 },
    /// `omega = e^{i phase} prod (t - a) / (1 - conj(a) t)`.
    Blaschke { zeros: Vec<Complex64>, phase: f64 },
}

/// Serialized form of a generator.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    #[serde(flatten)]
    pub kind: SchwarzKind,
    #[serde(default = "unit", skip_serializing_if = "is_unit")]
    pub inner: Complex64,
    #[serde(default = "unit", skip_serializing_if = "is_unit")]
    pub outer: Complex64,
}

fn unit() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

fn is_unit(c: &Complex64) -> bool {
    *c == unit()
}

#[derive(Clone, Debug)]
struct PartialFractions {
    at_infinity: Complex64,
    // (residue, conj(a)) pairs: integral contributes residue * log(1 - conj(a) z)
    terms: Vec<(Complex64, Complex64)>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "GeneratorSpec", into = "GeneratorSpec")]
pub struct SchwarzGenerator {
    kind: SchwarzKind,
    inner: Complex64,
    outer: Complex64,
    partial: Option<PartialFractions>,
}

impl PartialEq for SchwarzGenerator {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind && self.inner == other.inner && self.outer == other.outer
    }
}

impl TryFrom<GeneratorSpec> for SchwarzGenerator {
    type Error = Error;

    fn try_from(spec: GeneratorSpec) -> Result<Self> {
        Self::from_parts(spec.kind, spec.inner, spec.outer)
    }
}

impl From<SchwarzGenerator> for GeneratorSpec {
    fn from(g: SchwarzGenerator) -> Self {
        GeneratorSpec { kind: g.kind, inner: g.inner, outer: g.outer }
    }
}

impl SchwarzGenerator {
    pub fn constant(c: Complex64) -> Result<Self> {
        Self::from_parts(SchwarzKind::Constant { c }, unit(), unit())
    }

    /// `omega = p / s` with `s` the sampled sup of `|p|` on the unit circle.
    pub fn normalized_polynomial(coeffs: Vec<Complex64>) -> Result<Self> {
        let scale = polynomial_sup_norm(&coeffs);
        if !(scale > 0.0) {
            return Err(Error::InvalidGenerator("polynomial is identically zero".into()));
        }
        Self::from_parts(SchwarzKind::Polynomial { coeffs, scale }, unit(), unit())
    }

    pub fn blaschke(zeros: Vec<Complex64>, phase: f64) -> Result<Self> {
        Self::from_parts(SchwarzKind::Blaschke { zeros, phase }, unit(), unit())
    }

    pub fn from_parts(kind: SchwarzKind, inner: Complex64, outer: Complex64) -> Result<Self> {
        if inner.norm() > 1.0 + 1e-15 || outer.norm() > 1.0 + 1e-15 {
            return Err(Error::InvalidGenerator("inner and outer factors must lie in the closed disk".into()));
        }
        match &kind {
            SchwarzKind::Constant { c } if c.norm() > 1.0 + 1e-15 => {
                return Err(Error::InvalidGenerator(format!("|c| = {} exceeds 1", c.norm())));
            }
            SchwarzKind::Polynomial { coeffs, scale } => {
                if coeffs.is_empty() || !(*scale > 0.0) {
                    return Err(Error::InvalidGenerator("polynomial needs coefficients and a positive scale".into()));
                }
            }
            SchwarzKind::Blaschke { zeros, phase } => {
                if !phase.is_finite() {
                    return Err(Error::InvalidGenerator("phase must be finite".into()));
                }
                if let Some(a) = zeros.iter().find(|a| a.norm() >= 1.0) {
                    return Err(Error::InvalidGenerator(format!("Blaschke zero {a} is not inside the disk")));
                }
            }
            _ => {}
        }
        let partial = match &kind {
            SchwarzKind::Blaschke { zeros, phase } => partial_fractions(zeros, *phase),
            _ => None,
        };
        let g = Self { kind, inner, outer, partial };
        let sup = g.sampled_sup(VALIDATION_RADIUS, VALIDATION_SAMPLES);
        if sup > 1.0 + VALIDATION_SLACK {
            return Err(Error::InvalidGenerator(format!(
                "sampled sup |omega| = {sup} on |t| = {VALIDATION_RADIUS} exceeds 1"
            )));
        }
        Ok(g)
    }

    pub fn kind(&self) -> &SchwarzKind {
        &self.kind
    }

    pub fn spec(&self) -> GeneratorSpec {
        self.clone().into()
    }

    fn kind_eval(&self, t: Complex64) -> Complex64 {
        match &self.kind {
            SchwarzKind::Constant { c } => *c,
            SchwarzKind::Polynomial { coeffs, scale } => horner(coeffs, t) / scale,
            SchwarzKind::Blaschke { zeros, phase } => zeros
                .iter()
                .fold(Complex64::from_polar(1.0, *phase), |acc, a| acc * (t - a) / (1.0 - a.conj() * t)),
        }
    }

    /// Integral of the bare kind from 0 to `w`.
    fn kind_integral(&self, w: Complex64) -> Complex64 {
        match &self.kind {
            SchwarzKind::Constant { c } => c * w,
            SchwarzKind::Polynomial { coeffs, scale } => {
                let anti: Vec<Complex64> = std::iter::once(Complex64::new(0.0, 0.0))
                    .chain(coeffs.iter().enumerate().map(|(k, c)| c / (k + 1) as f64))
                    .collect();
                horner(&anti, w) / scale
            }
            SchwarzKind::Blaschke { .. } => match &self.partial {
                Some(pf) => {
                    pf.terms.iter().fold(pf.at_infinity * w, |acc, (res, abar)| acc + res * (1.0 - abar * w).ln())
                }
                None => segment_integral(|t| self.kind_eval(t), w),
            },
        }
    }

    pub fn eval(&self, t: Complex64) -> Complex64 {
        self.outer * self.kind_eval(self.inner * t)
    }

    /// `integral_0^z omega(t) dt` along the segment.
    pub fn integral(&self, z: Complex64) -> Complex64 {
        if self.inner.norm() == 0.0 {
            return self.outer * self.kind_eval(Complex64::new(0.0, 0.0)) * z;
        }
        self.outer / self.inner * self.kind_integral(self.inner * z)
    }

    /// Taylor coefficients of omega up to `order`.
    pub fn series(&self, order: usize) -> TruncatedSeries {
        let base = match &self.kind {
            SchwarzKind::Constant { c } => TruncatedSeries::from_complex(&[*c], order),
            SchwarzKind::Polynomial { coeffs, scale } => {
                TruncatedSeries::from_complex(coeffs, order).scale(Complex64::new(1.0 / scale, 0.0))
            }
            SchwarzKind::Blaschke { zeros, phase } => {
                zeros.iter().fold(TruncatedSeries::from_complex(&[Complex64::from_polar(1.0, *phase)], order), |acc, a| {
                    acc.mul(&blaschke_factor_series(*a, order))
                })
            }
        };
        let mut power = Complex64::new(1.0, 0.0);
        base.map_coeffs(|_, c| {
            let v = self.outer * power * c;
            power *= self.inner;
            v
        })
    }

    /// Bound on `sum_{k > order} |omega_k|`; zero for polynomial generators
    /// whose degree fits.
    pub fn coefficient_tail_bound(&self, order: usize) -> f64 {
        let s = self.inner.norm();
        let bound = match &self.kind {
            SchwarzKind::Constant { .. } => 0.0,
            SchwarzKind::Polynomial { coeffs, scale } => {
                coeffs.iter().enumerate().skip(order + 1).map(|(k, c)| c.norm() * s.powi(k as i32)).sum::<f64>() / scale
            }
            SchwarzKind::Blaschke { zeros, .. } => {
                // Coefficients are dominated by those of prod(|a| + (1-|a|^2) s/(1-|a| s)).
                let majorant = zeros.iter().fold(TruncatedSeries::one(order), |acc, a| {
                    let r = a.norm();
                    let f = TruncatedSeries::from_real(
                        &std::iter::once(r)
                            .chain((1..=order).map(|k| (1.0 - r * r) * r.powi(k as i32 - 1)))
                            .collect::<Vec<_>>(),
                        order,
                    );
                    acc.mul(&f)
                });
                let total: f64 = zeros.iter().map(|a| {
                    let r = a.norm();
                    r + (1.0 - r * r) * s / (1.0 - r * s)
                }).product();
                let head: f64 = majorant.coeffs().iter().enumerate().map(|(k, c)| c.re * s.powi(k as i32)).sum();
                (total - head).max(0.0)
            }
        };
        self.outer.norm() * bound
    }

    /// `e^{2i theta} omega(t e^{i theta})`, the generator of the rotated map.
    pub fn rotated(&self, theta: f64) -> Self {
        let mut g = self.clone();
        g.inner *= Complex64::from_polar(1.0, theta);
        g.outer *= Complex64::from_polar(1.0, 2.0 * theta);
        g
    }

    /// `r^2 omega(r t)`, the generator of the dilated map.
    pub fn dilated(&self, r: f64) -> Self {
        let mut g = self.clone();
        g.inner *= r;
        g.outer *= r * r;
        g
    }

    /// `conj(omega(conj(t)))`.
    pub fn conjugated(&self) -> Self {
        let kind = match &self.kind {
            SchwarzKind::Constant { c } => SchwarzKind::Constant { c: c.conj() },
            SchwarzKind::Polynomial { coeffs, scale } => {
                SchwarzKind::Polynomial { coeffs: coeffs.iter().map(|c| c.conj()).collect(), scale: *scale }
            }
            SchwarzKind::Blaschke { zeros, phase } => {
                SchwarzKind::Blaschke { zeros: zeros.iter().map(|a| a.conj()).collect(), phase: -phase }
            }
        };
        let partial = match &kind {
            SchwarzKind::Blaschke { zeros, phase } => partial_fractions(zeros, *phase),
            _ => None,
        };
        Self { kind, inner: self.inner.conj(), outer: self.outer.conj(), partial }
    }

    /// Largest `|omega|` over `m` equispaced points of `|t| = r`.
    pub fn sampled_sup(&self, r: f64, m: usize) -> f64 {
        (0..m)
            .map(|k| self.eval(Complex64::from_polar(r, TAU * k as f64 / m as f64)).norm())
            .fold(0.0, f64::max)
    }
}

fn horner(coeffs: &[Complex64], t: Complex64) -> Complex64 {
    coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * t + c)
}

fn blaschke_factor_series(a: Complex64, order: usize) -> TruncatedSeries {
    // (t - a)/(1 - conj(a) t) = -a + sum_{k>=1} conj(a)^{k-1} (1 - |a|^2) t^k
    let abar = a.conj();
    let w = 1.0 - a.norm_sqr();
    let mut coeffs = Vec::with_capacity(order + 1);
    coeffs.push(-a);
    let mut p = Complex64::new(1.0, 0.0);
    for _ in 1..=order {
        coeffs.push(p * w);
        p *= abar;
    }
    TruncatedSeries::from_complex(&coeffs, order)
}

/// Sup of `|p|` on the unit circle: dense scan plus golden-section polish.
fn polynomial_sup_norm(coeffs: &[Complex64]) -> f64 {
    let m = 16384;
    let modulus = |theta: f64| horner(coeffs, Complex64::from_polar(1.0, theta)).norm();
    let (best_k, _) = (0..m)
        .map(|k| (k, modulus(TAU * k as f64 / m as f64)))
        .fold((0, f64::NEG_INFINITY), |acc, x| if x.1 > acc.1 { x } else { acc });
    let h = TAU / m as f64;
    let center = TAU * best_k as f64 / m as f64;
    let (_, value) = crate::optimize::golden_max(modulus, center - h, center + h, 1e-13);
    value * (1.0 + 1e-12)
}

fn partial_fractions(zeros: &[Complex64], phase: f64) -> Option<PartialFractions> {
    if zeros.is_empty() {
        return Some(PartialFractions { at_infinity: Complex64::from_polar(1.0, phase), terms: Vec::new() });
    }
    if zeros.iter().any(|a| a.norm() < PARTIAL_FRACTION_SEPARATION) {
        return None;
    }
    for (i, a) in zeros.iter().enumerate() {
        if zeros[i + 1..].iter().any(|b| (a - b).norm() < PARTIAL_FRACTION_SEPARATION) {
            return None;
        }
    }
    let gamma = Complex64::from_polar(1.0, phase);
    // B(t) = B(inf) + sum_j R_j / (t - p_j) with poles p_j = 1/conj(a_j)
    let at_infinity = zeros.iter().fold(gamma, |acc, a| acc * (-1.0 / a.conj()));
    let terms = zeros
        .iter()
        .enumerate()
        .map(|(j, a)| {
            let abar = a.conj();
            let p = 1.0 / abar;
            let mut residue = gamma * (p - a) / (-abar);
            for (i, b) in zeros.iter().enumerate() {
                if i != j {
                    residue *= (p - b) / (1.0 - b.conj() * p);
                }
            }
            // integral_0^z R/(t - p) dt = R log(1 - z/p) = R log(1 - conj(a) z)
            (residue, abar)
        })
        .collect();
    Some(PartialFractions { at_infinity, terms })
}
