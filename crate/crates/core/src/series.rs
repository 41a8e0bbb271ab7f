//! Truncated complex power series.
//!
//! A [`TruncatedSeries`] of order `N` stores `c_0, ..., c_N` and stands for the
//! germ `c_0 + c_1 z + ... + c_N z^N + O(z^{N+1})`. Binary operations truncate to
//! the smaller order of their operands; nothing is ever silently extended.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Truncation order used when the caller does not ask for one.
pub const DEFAULT_ORDER: usize = 64;

/// Threshold below which a constant term counts as zero.
pub const CONSTANT_TERM_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TruncatedSeries {
    coeffs: Vec<Complex64>,
}

impl TruncatedSeries {
    /// Builds a series from its coefficients; the order is `coeffs.len() - 1`.
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidMap("a series needs at least one coefficient".into()));
        }
        if let Some(k) = coeffs.iter().position(|c| !(c.re.is_finite() && c.im.is_finite())) {
            return Err(Error::InvalidMap(format!("coefficient {k} is not finite")));
        }
        Ok(Self { coeffs })
    }

    /// Real coefficients, padded with zeros (or truncated) to `order`.
    pub fn from_real(coeffs: &[f64], order: usize) -> Self {
        Self::from_complex(
            &coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect::<Vec<_>>(),
            order,
        )
    }

    /// Complex coefficients, padded with zeros (or truncated) to `order`.
    pub fn from_complex(coeffs: &[Complex64], order: usize) -> Self {
        let mut v = vec![Complex64::new(0.0, 0.0); order + 1];
        for (slot, c) in v.iter_mut().zip(coeffs) {
            *slot = *c;
        }
        Self { coeffs: v }
    }

    pub fn zero(order: usize) -> Self {
        Self { coeffs: vec![Complex64::new(0.0, 0.0); order + 1] }
    }

    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = Complex64::new(1.0, 0.0);
        s
    }

    /// The series of the identity `z`.
    pub fn z(order: usize) -> Self {
        let mut s = Self::zero(order);
        if order >= 1 {
            s.coeffs[1] = Complex64::new(1.0, 0.0);
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Coefficient of `z^k`, zero beyond the stored order.
    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or_default()
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self::from_complex(&self.coeffs, order)
    }

    pub fn scale(&self, k: Complex64) -> Self {
        Self { coeffs: self.coeffs.iter().map(|c| c * k).collect() }
    }

    pub fn map_coeffs(&self, mut f: impl FnMut(usize, Complex64) -> Complex64) -> Self {
        Self { coeffs: self.coeffs.iter().enumerate().map(|(k, &c)| f(k, c)).collect() }
    }

    /// Multiplication by `z`; the order grows by one since no information is lost.
    pub fn mul_z(&self) -> Self {
        let mut v = Vec::with_capacity(self.coeffs.len() + 1);
        v.push(Complex64::new(0.0, 0.0));
        v.extend_from_slice(&self.coeffs);
        Self { coeffs: v }
    }

    /// Cauchy product truncated at the smaller order.
    pub fn mul(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        let mut out = vec![Complex64::new(0.0, 0.0); n + 1];
        for (i, a) in self.coeffs.iter().take(n + 1).enumerate() {
            if *a == Complex64::new(0.0, 0.0) {
                continue;
            }
            for (j, b) in other.coeffs.iter().take(n + 1 - i).enumerate() {
                out[i + j] += a * b;
            }
        }
        Self { coeffs: out }
    }

    /// Multiplicative inverse via `d_0 = 1/c_0`, `d_k = -(1/c_0) sum_{j=1..k} c_j d_{k-j}`.
    pub fn reciprocal(&self, tol: f64) -> Result<Self> {
        let c0 = self.coeffs[0];
        if c0.norm() <= tol {
            return Err(Error::NearZeroConstantTerm { modulus: c0.norm() });
        }
        let inv = c0.inv();
        let n = self.order();
        let mut d = Vec::with_capacity(n + 1);
        d.push(inv);
        for k in 1..=n {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 1..=k {
                acc += self.coeffs[j] * d[k - j];
            }
            d.push(-acc * inv);
        }
        Ok(Self { coeffs: d })
    }

    /// Formal derivative; the order drops by one (order 0 stays 0).
    pub fn derivative(&self) -> Self {
        if self.order() == 0 {
            return Self::zero(0);
        }
        Self {
            coeffs: self.coeffs.iter().enumerate().skip(1).map(|(k, c)| c * k as f64).collect(),
        }
    }

    /// Term-wise antiderivative with zero constant term; the order grows by one.
    pub fn integrate(&self) -> Self {
        let mut v = Vec::with_capacity(self.coeffs.len() + 1);
        v.push(Complex64::new(0.0, 0.0));
        v.extend(self.coeffs.iter().enumerate().map(|(k, c)| c / (k + 1) as f64));
        Self { coeffs: v }
    }

    /// Principal logarithm of a series with constant term 1, as `integral of a'/a`.
    pub fn log(&self) -> Result<Self> {
        self.check_unit_constant()?;
        let n = self.order();
        let quotient = self.derivative().mul(&self.reciprocal(CONSTANT_TERM_TOL)?.truncate(n.saturating_sub(1)));
        Ok(quotient.integrate().truncate(n))
    }

    /// Exponential of a series with zero constant term, from `e' = e L'`.
    pub fn exp(&self) -> Result<Self> {
        let c0 = self.coeffs[0];
        if c0.norm() > CONSTANT_TERM_TOL {
            return Err(Error::DomainError(format!("exp needs a zero constant term, got {c0}")));
        }
        let n = self.order();
        let mut e = Vec::with_capacity(n + 1);
        e.push(Complex64::new(1.0, 0.0));
        // k e_k = sum_{j=1..k} j L_j e_{k-j}
        for k in 1..=n {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 1..=k {
                acc += self.coeffs[j] * (j as f64) * e[k - j];
            }
            e.push(acc / k as f64);
        }
        Ok(Self { coeffs: e })
    }

    /// Principal n-th root of a series with constant term 1.
    pub fn nth_root(&self, n: u32) -> Result<Self> {
        if n < 2 {
            return Err(Error::ParameterOutOfRange(format!("root index must be at least 2, got {n}")));
        }
        let mut root = self.log()?.scale(Complex64::new(1.0 / n as f64, 0.0)).exp()?;
        root.coeffs[0] = Complex64::new(1.0, 0.0);
        Ok(root)
    }

    fn check_unit_constant(&self) -> Result<()> {
        let c0 = self.coeffs[0];
        if (c0 - 1.0).norm() > CONSTANT_TERM_TOL {
            return Err(Error::BranchBase { found: c0 });
        }
        Ok(())
    }

    /// Horner evaluation of the stored polynomial.
    pub fn evaluate(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c)
    }

    /// Value and derivative of the stored polynomial in one Horner pass.
    pub fn evaluate_with_derivative(&self, z: Complex64) -> (Complex64, Complex64) {
        let zero = Complex64::new(0.0, 0.0);
        self.coeffs.iter().rev().fold((zero, zero), |(p, dp), c| (p * z + c, dp * z + p))
    }

    /// Substitutes `z -> z^n`, keeping the original order (coefficients past it are dropped).
    pub fn substitute_zpow(&self, n: usize) -> Self {
        assert!(n >= 1, "substitution power must be positive");
        let order = self.order();
        let mut out = Self::zero(order);
        for (k, c) in self.coeffs.iter().enumerate() {
            let idx = k * n;
            if idx > order {
                break;
            }
            out.coeffs[idx] = *c;
        }
        out
    }

    /// Keeps every `n`-th coefficient: position `k` of the result holds `c_{nk}`.
    pub fn decimate(&self, n: usize) -> Self {
        assert!(n >= 1, "decimation stride must be positive");
        Self { coeffs: self.coeffs.iter().step_by(n).copied().collect() }
    }

    /// Largest coefficient modulus; handy for tolerance scaling.
    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Sum of `(n - 1)|c_n|` for `n >= 2`.
    pub fn weighted_tail_sum(&self) -> f64 {
        self.coeffs.iter().enumerate().skip(2).map(|(n, c)| (n - 1) as f64 * c.norm()).sum()
    }
}

impl Add for &TruncatedSeries {
    type Output = TruncatedSeries;

    fn add(self, rhs: Self) -> TruncatedSeries {
        let n = self.order().min(rhs.order());
        TruncatedSeries {
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).take(n + 1).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &TruncatedSeries {
    type Output = TruncatedSeries;

    fn sub(self, rhs: Self) -> TruncatedSeries {
        let n = self.order().min(rhs.order());
        TruncatedSeries {
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).take(n + 1).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &TruncatedSeries {
    type Output = TruncatedSeries;

    fn mul(self, rhs: Self) -> TruncatedSeries {
        TruncatedSeries::mul(self, rhs)
    }
}

impl Neg for &TruncatedSeries {
    type Output = TruncatedSeries;

    fn neg(self) -> TruncatedSeries {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}
