//! Normalized analytic maps `f(z) = z + a_2 z^2 + ...` and the U-operator.
//!
//! Every map knows its pre-Schwarzian `q = z/f` both pointwise (exactly, from its
//! backing) and as a cached [`TruncatedSeries`]. The U-operator
//! `U_f = (z/f)^2 f' - 1` is available through two independent routes:
//! [`AnalyticMap::u_eval`] works from `f` and `f'`, [`AnalyticMap::u_eval_alt`]
//! from `q - z q' - 1`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::schwarz::SchwarzGenerator;
use crate::series::{TruncatedSeries, CONSTANT_TERM_TOL, DEFAULT_ORDER};
use crate::zeros::try_zero_count_in_disk;

/// `|f(z)|` below this (for `z != 0`) is treated as hitting a zero of `f`.
pub const POLE_OR_ZERO_TOL: f64 = 1e-13;
/// Radius at which nonvanishing of `z/f` is checked.
pub const NONVANISHING_RADIUS: f64 = 0.999;
/// Initial samples for nonvanishing checks.
pub const NONVANISHING_SAMPLES: usize = 1024;

const NORMALIZATION_TOL: f64 = 1e-12;
const SQUEEZE_SERIES_RADIUS: f64 = 1e-6;

/// The class parameter `lambda`, restricted to `(0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize)]
#[serde(transparent)]
pub struct ClassParameter(f64);

impl ClassParameter {
    pub fn new(lambda: f64) -> Result<Self> {
        if lambda > 0.0 && lambda <= 1.0 {
            Ok(Self(lambda))
        } else {
            Err(Error::ParameterOutOfRange(format!("lambda must lie in (0, 1], got {lambda}")))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Backing {
    /// `f = num / den` with `num(0) = 0` and `num'(0) = den(0)`.
    Rational { num: Vec<Complex64>, den: Vec<Complex64> },
    /// `z/f = 1 - a2 z + lambda z integral_0^z omega`.
    Characterization { a2: Complex64, lambda: ClassParameter, omega: SchwarzGenerator },
    /// `z/g(z) = (z^n / f(z^n))^{1/n}`, the pre-Schwarzian of `g = (f(z^n))^{1/n}`.
    NthRoot { base: Box<AnalyticMap>, n: u32 },
    /// `z/f = constant + linear z + sum w_k z/f_k`.
    Combination { terms: Vec<(Complex64, AnalyticMap)>, constant: Complex64, linear: Complex64 },
    /// `z/F(z) = (q(sqrt z) + q(-sqrt z)) / 2` where `q` is the base pre-Schwarzian.
    EvenSqueeze { base: Box<AnalyticMap> },
}

#[derive(Clone, Debug, Serialize)]
pub struct AnalyticMap {
    #[serde(flatten)]
    backing: Backing,
    #[serde(skip)]
    series: TruncatedSeries,
}

/// Zero counts of the pieces of `z/f` inside a disk.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ZeroCount {
    /// Zeros of `z/f`.
    pub pre_schwarzian: i64,
    /// Zeros of `f(z)/z`; only rational maps can have them.
    pub map: i64,
}

impl ZeroCount {
    pub fn total(&self) -> i64 {
        self.pre_schwarzian + self.map
    }
}

fn czero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

fn trim(mut v: Vec<Complex64>) -> Vec<Complex64> {
    while v.len() > 1 && v.last().is_some_and(|c| c.norm() == 0.0) {
        v.pop();
    }
    v
}

fn horner2(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    coeffs.iter().rev().fold((czero(), czero()), |(p, dp), c| (p * z + c, dp * z + p))
}

impl AnalyticMap {
    /// `f = num / den`; coefficient vectors are in ascending powers.
    pub fn rational(num: Vec<Complex64>, den: Vec<Complex64>, order: usize) -> Result<Self> {
        let num = trim(num);
        let den = trim(den);
        if num.len() < 2 || den.is_empty() {
            return Err(Error::InvalidMap("numerator needs a z term and denominator a constant".into()));
        }
        if num.iter().chain(&den).any(|c| !(c.re.is_finite() && c.im.is_finite())) {
            return Err(Error::InvalidMap("coefficients must be finite".into()));
        }
        if den[0].norm() <= CONSTANT_TERM_TOL {
            return Err(Error::InvalidMap("denominator must not vanish at 0".into()));
        }
        if num[0].norm() > NORMALIZATION_TOL {
            return Err(Error::InvalidMap("numerator must vanish at 0".into()));
        }
        if (num[1] / den[0] - 1.0).norm() > NORMALIZATION_TOL {
            return Err(Error::InvalidMap("f'(0) = num[1]/den[0] must equal 1".into()));
        }
        Self::build(Backing::Rational { num, den }, order)
    }

    /// `f = z / q` for a polynomial pre-Schwarzian `q` with `q(0) = 1`.
    pub fn from_pre_schwarzian_poly(q: &[Complex64], order: usize) -> Result<Self> {
        let den = q.to_vec();
        let num = vec![czero(), den.first().copied().unwrap_or_default()];
        Self::rational(num, den, order)
    }

    /// Same as [`AnalyticMap::from_pre_schwarzian_poly`] with real coefficients.
    pub fn from_pre_schwarzian_real(q: &[f64], order: usize) -> Result<Self> {
        let q: Vec<Complex64> = q.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Self::from_pre_schwarzian_poly(&q, order)
    }

    pub fn identity(order: usize) -> Self {
        Self::from_pre_schwarzian_real(&[1.0], order).expect("identity map is valid")
    }

    /// The map with `z/f = 1 - a2 z + lambda z integral_0^z omega`. Membership
    /// in U(lambda) still needs `z/f` to be nonvanishing.
    pub fn from_characterization(
        a2: Complex64,
        lambda: ClassParameter,
        omega: SchwarzGenerator,
        order: usize,
    ) -> Result<Self> {
        if !(a2.re.is_finite() && a2.im.is_finite()) {
            return Err(Error::InvalidMap("a2 must be finite".into()));
        }
        Self::build(Backing::Characterization { a2, lambda, omega }, order)
    }

    pub(crate) fn build(backing: Backing, order: usize) -> Result<Self> {
        let series = Self::series_for(&backing, order)?;
        Ok(Self { backing, series })
    }

    /// Uses a series computed at coefficient level instead of re-deriving it.
    pub(crate) fn with_series(backing: Backing, series: TruncatedSeries) -> Self {
        Self { backing, series }
    }

    fn series_for(backing: &Backing, order: usize) -> Result<TruncatedSeries> {
        Ok(match backing {
            Backing::Rational { num, den } => {
                let reduced = TruncatedSeries::from_complex(&num[1..], order);
                TruncatedSeries::from_complex(den, order).mul(&reduced.reciprocal(CONSTANT_TERM_TOL)?)
            }
            Backing::Characterization { a2, lambda, omega } => {
                let inner = omega.series(order).integrate().mul_z().truncate(order).scale(Complex64::new(lambda.value(), 0.0));
                let mut head = TruncatedSeries::one(order);
                head = head.map_coeffs(|k, c| if k == 1 { -a2 } else { c });
                &head + &inner
            }
            Backing::NthRoot { base, n } => base.series.truncate(order).substitute_zpow(*n as usize).nth_root(*n)?,
            Backing::Combination { terms, constant, linear } => {
                let mut acc = TruncatedSeries::from_complex(&[*constant, *linear], order);
                for (w, m) in terms {
                    acc = &acc + &m.series.truncate(order).scale(*w);
                }
                acc
            }
            Backing::EvenSqueeze { base } => base.series.decimate(2).truncate(order),
        })
    }

    /// Rebuilds the map and its children with a new truncation order.
    pub fn with_order(&self, order: usize) -> Result<Self> {
        let backing = match &self.backing {
            Backing::NthRoot { base, n } => Backing::NthRoot { base: Box::new(base.with_order(order)?), n: *n },
            Backing::Combination { terms, constant, linear } => Backing::Combination {
                terms: terms.iter().map(|(w, m)| Ok((*w, m.with_order(order)?))).collect::<Result<_>>()?,
                constant: *constant,
                linear: *linear,
            },
            Backing::EvenSqueeze { base } => Backing::EvenSqueeze { base: Box::new(base.with_order(2 * order)?) },
            other => other.clone(),
        };
        Self::build(backing, order)
    }

    pub fn backing(&self) -> &Backing {
        &self.backing
    }

    pub fn order(&self) -> usize {
        self.series.order()
    }

    /// Cached series of `z/f`.
    pub fn pre_schwarzian(&self) -> &TruncatedSeries {
        &self.series
    }

    /// `a_2 = -b_1`.
    pub fn a2(&self) -> Complex64 {
        -self.series.coeff(1)
    }

    /// `z/f` and its derivative at `z`, computed from the backing.
    pub fn pre_schwarzian_at(&self, z: Complex64) -> Result<(Complex64, Complex64)> {
        match &self.backing {
            Backing::Rational { num, den } => {
                let (d, dd) = horner2(den, z);
                let (r, dr) = horner2(&num[1..], z);
                if r.norm() <= POLE_OR_ZERO_TOL || !r.is_finite() {
                    return Err(Error::PoleOrZeroHit { z });
                }
                Ok((d / r, (dd * r - d * dr) / (r * r)))
            }
            Backing::Characterization { a2, lambda, omega } => {
                let lam = lambda.value();
                let integral = omega.integral(z);
                let q = 1.0 - a2 * z + lam * z * integral;
                let dq = -a2 + lam * integral + lam * z * omega.eval(z);
                Ok((q, dq))
            }
            Backing::NthRoot { base, n } => {
                let n = *n as i32;
                let w = z.powi(n);
                let log_q = continuous_log_along_ray(|t| Ok(base.pre_schwarzian_at(t)?.0), w)?;
                let root = (log_q / n as f64).exp();
                let (qb, dqb) = base.pre_schwarzian_at(w)?;
                if qb.norm() <= POLE_OR_ZERO_TOL {
                    return Err(Error::PoleOrZeroHit { z });
                }
                Ok((root, root * z.powi(n - 1) * dqb / qb))
            }
            Backing::Combination { terms, constant, linear } => {
                let mut q = constant + linear * z;
                let mut dq = *linear;
                for (w, m) in terms {
                    let (a, b) = m.pre_schwarzian_at(z)?;
                    q += w * a;
                    dq += w * b;
                }
                Ok((q, dq))
            }
            Backing::EvenSqueeze { base } => {
                if z.norm() < SQUEEZE_SERIES_RADIUS {
                    return Ok(self.series.evaluate_with_derivative(z));
                }
                let s = z.sqrt();
                let (qp, dqp) = base.pre_schwarzian_at(s)?;
                let (qm, dqm) = base.pre_schwarzian_at(-s)?;
                Ok((0.5 * (qp + qm), (dqp - dqm) / (4.0 * s)))
            }
        }
    }

    /// `f(z)` and `f'(z)`.
    pub fn eval_with_derivative(&self, z: Complex64) -> Result<(Complex64, Complex64)> {
        if let Backing::Rational { num, den } = &self.backing {
            let (n, dn) = horner2(num, z);
            let (d, dd) = horner2(den, z);
            if d.norm() <= POLE_OR_ZERO_TOL {
                return Err(Error::PoleOrZeroHit { z });
            }
            return Ok((n / d, (dn * d - n * dd) / (d * d)));
        }
        let (q, dq) = self.pre_schwarzian_at(z)?;
        if q.norm() <= POLE_OR_ZERO_TOL {
            return Err(Error::PoleOrZeroHit { z });
        }
        Ok((z / q, (q - z * dq) / (q * q)))
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        Ok(self.eval_with_derivative(z)?.0)
    }

    /// `U_f(z) = (z/f(z))^2 f'(z) - 1`, with the removable value 0 at the origin.
    pub fn u_eval(&self, z: Complex64) -> Result<Complex64> {
        if z == czero() {
            return Ok(czero());
        }
        let (f, df) = self.eval_with_derivative(z)?;
        if f.norm() < POLE_OR_ZERO_TOL || !f.is_finite() {
            return Err(Error::PoleOrZeroHit { z });
        }
        let ratio = z / f;
        Ok(ratio * ratio * df - 1.0)
    }

    /// `U_f(z) = z/f - z (z/f)' - 1`.
    pub fn u_eval_alt(&self, z: Complex64) -> Result<Complex64> {
        if z == czero() {
            return Ok(czero());
        }
        let (q, dq) = self.pre_schwarzian_at(z)?;
        if !q.is_finite() || q.norm() * POLE_OR_ZERO_TOL > z.norm() {
            return Err(Error::PoleOrZeroHit { z });
        }
        Ok(q - z * dq - 1.0)
    }

    /// `U_f(z)` by the cheapest exact route for the backing: `-lambda z^2 omega(z)`
    /// for characterization maps, term-wise for combinations, otherwise
    /// [`AnalyticMap::u_eval_alt`].
    pub fn u(&self, z: Complex64) -> Result<Complex64> {
        match &self.backing {
            Backing::Characterization { lambda, omega, .. } => Ok(-lambda.value() * z * z * omega.eval(z)),
            Backing::Combination { terms, constant, .. } => {
                let mut acc = constant - 1.0;
                for (w, m) in terms {
                    acc += w * (m.u(z)? + 1.0);
                }
                Ok(acc)
            }
            _ => self.u_eval_alt(z),
        }
    }

    /// Series of `U_f` from `q - z q' - 1`: coefficient `(1 - n) b_n`.
    pub fn u_series(&self) -> TruncatedSeries {
        self.series.map_coeffs(|n, b| if n == 0 { czero() } else { b * (1.0 - n as f64) })
    }

    /// Series of `U_f` from `(z/f)^2 f' - 1`, the second route.
    pub fn u_series_from_map(&self) -> Result<TruncatedSeries> {
        let n = self.order();
        let f = self.series.reciprocal(CONSTANT_TERM_TOL)?.mul_z();
        let df = f.derivative();
        let q2 = self.series.mul(&self.series);
        let product = q2.mul(&df.truncate(n));
        Ok(product.map_coeffs(|k, c| if k == 0 { c - 1.0 } else { c }))
    }

    /// `a_1 = 1, a_2, ..., a_{n_max}`.
    pub fn taylor_coefficients(&self, n_max: usize) -> Result<Vec<Complex64>> {
        let series = if self.order() + 1 < n_max { self.with_order(n_max)?.series } else { self.series.clone() };
        let f_over_z = series.reciprocal(CONSTANT_TERM_TOL)?;
        Ok((0..n_max).map(|k| f_over_z.coeff(k)).collect())
    }

    /// Bound on `sum_{n > N} (n - 1)|b_n|` for the cached order `N`, when one is known.
    pub fn series_tail_bound(&self) -> Option<f64> {
        let n = self.order();
        match &self.backing {
            Backing::Rational { num, den } => (num.len() == 2 && den.len() <= n + 1).then_some(0.0),
            Backing::Characterization { lambda, omega, .. } => {
                // b_k = lambda omega_{k-2} / (k - 1) for k >= 2
                (n >= 2).then(|| lambda.value() * omega.coefficient_tail_bound(n - 2))
            }
            Backing::NthRoot { .. } => None,
            Backing::Combination { terms, .. } => {
                terms.iter().try_fold(0.0, |acc, (w, m)| m.series_tail_bound().map(|t| acc + w.norm() * t))
            }
            // (n-1)|b_{2n}| <= (2n-1)|b_{2n}|, so the base tail at order 2N dominates
            Backing::EvenSqueeze { base } => (base.order() >= 2 * n).then(|| base.series_tail_bound()).flatten(),
        }
    }

    /// Zeros of `z/f` (and, for rational maps, of `f/z`) in `|z| < r`.
    pub fn zero_count(&self, r: f64, m: usize) -> Result<ZeroCount> {
        match &self.backing {
            Backing::Rational { num, den } => {
                let den_zeros = try_zero_count_in_disk(|z| Ok(horner2(den, z).0), r, m)?;
                let num_zeros = if num.len() > 2 { try_zero_count_in_disk(|z| Ok(horner2(&num[1..], z).0), r, m)? } else { 0 };
                Ok(ZeroCount { pre_schwarzian: den_zeros, map: num_zeros })
            }
            _ => {
                let count = try_zero_count_in_disk(|z| Ok(self.pre_schwarzian_at(z)?.0), r, m)?;
                Ok(ZeroCount { pre_schwarzian: count, map: 0 })
            }
        }
    }

    /// Nonvanishing of `z/f` on the disk, tested at [`NONVANISHING_RADIUS`].
    pub fn ensure_nonvanishing(&self) -> Result<()> {
        match self.zero_count(NONVANISHING_RADIUS, NONVANISHING_SAMPLES) {
            Ok(count) if count.total() == 0 => Ok(()),
            Ok(count) => Err(Error::NonvanishingViolated { zero_count: count.total(), radius: NONVANISHING_RADIUS }),
            Err(e) => Err(e),
        }
    }

    // Representation-level transforms used by the transforms module.

    /// `e^{-i theta} f(z e^{i theta})`.
    pub(crate) fn rotated(&self, theta: f64) -> Result<Self> {
        let rot = Complex64::from_polar(1.0, theta);
        let backing = match &self.backing {
            Backing::Rational { num, den } => Backing::Rational {
                num: num.iter().enumerate().map(|(k, c)| c * rot.powi(k as i32 - 1)).collect(),
                den: den.iter().enumerate().map(|(k, c)| c * rot.powi(k as i32)).collect(),
            },
            Backing::Characterization { a2, lambda, omega } => {
                Backing::Characterization { a2: a2 * rot, lambda: *lambda, omega: omega.rotated(theta) }
            }
            Backing::NthRoot { base, n } => Backing::NthRoot { base: Box::new(base.rotated(theta * *n as f64)?), n: *n },
            Backing::Combination { terms, constant, linear } => Backing::Combination {
                terms: terms.iter().map(|(w, m)| Ok((*w, m.rotated(theta)?))).collect::<Result<_>>()?,
                constant: *constant,
                linear: linear * rot,
            },
            Backing::EvenSqueeze { base } => Backing::EvenSqueeze { base: Box::new(base.rotated(0.5 * theta)?) },
        };
        Self::build(backing, self.order())
    }

    /// `r^{-1} f(r z)`.
    pub(crate) fn dilated(&self, r: f64) -> Result<Self> {
        let backing = match &self.backing {
            Backing::Rational { num, den } => Backing::Rational {
                num: num.iter().enumerate().map(|(k, c)| c * r.powi(k as i32 - 1)).collect(),
                den: den.iter().enumerate().map(|(k, c)| c * r.powi(k as i32)).collect(),
            },
            Backing::Characterization { a2, lambda, omega } => {
                Backing::Characterization { a2: a2 * r, lambda: *lambda, omega: omega.dilated(r) }
            }
            Backing::NthRoot { base, n } => Backing::NthRoot { base: Box::new(base.dilated(r.powi(*n as i32))?), n: *n },
            Backing::Combination { terms, constant, linear } => Backing::Combination {
                terms: terms.iter().map(|(w, m)| Ok((*w, m.dilated(r)?))).collect::<Result<_>>()?,
                constant: *constant,
                linear: linear * r,
            },
            Backing::EvenSqueeze { base } => Backing::EvenSqueeze { base: Box::new(base.dilated(r.sqrt())?) },
        };
        Self::build(backing, self.order())
    }

    /// `conj(f(conj z))`.
    pub(crate) fn conjugated(&self) -> Result<Self> {
        let backing = match &self.backing {
            Backing::Rational { num, den } => Backing::Rational {
                num: num.iter().map(|c| c.conj()).collect(),
                den: den.iter().map(|c| c.conj()).collect(),
            },
            Backing::Characterization { a2, lambda, omega } => {
                Backing::Characterization { a2: a2.conj(), lambda: *lambda, omega: omega.conjugated() }
            }
            Backing::NthRoot { base, n } => Backing::NthRoot { base: Box::new(base.conjugated()?), n: *n },
            Backing::Combination { terms, constant, linear } => Backing::Combination {
                terms: terms.iter().map(|(w, m)| Ok((w.conj(), m.conjugated()?))).collect::<Result<_>>()?,
                constant: constant.conj(),
                linear: linear.conj(),
            },
            Backing::EvenSqueeze { base } => Backing::EvenSqueeze { base: Box::new(base.conjugated()?) },
        };
        Self::build(backing, self.order())
    }

    /// The map whose pre-Schwarzian is `z/f - z/c`, i.e. `F = c f / (c - f)`.
    pub(crate) fn with_pre_schwarzian_shift(&self, shift: Complex64) -> Result<Self> {
        let backing = match &self.backing {
            Backing::Rational { num, den } => {
                // F = num / (den + shift * num)
                let len = den.len().max(num.len());
                let new_den = (0..len)
                    .map(|k| den.get(k).copied().unwrap_or_default() + shift * num.get(k).copied().unwrap_or_default())
                    .collect();
                Backing::Rational { num: num.clone(), den: trim(new_den) }
            }
            Backing::Characterization { a2, lambda, omega } => {
                Backing::Characterization { a2: a2 - shift, lambda: *lambda, omega: omega.clone() }
            }
            Backing::Combination { terms, constant, linear } => {
                Backing::Combination { terms: terms.clone(), constant: *constant, linear: linear + shift }
            }
            _ => Backing::Combination {
                terms: vec![(Complex64::new(1.0, 0.0), self.clone())],
                constant: czero(),
                linear: shift,
            },
        };
        Self::build(backing, self.order())
    }
}

impl Default for AnalyticMap {
    fn default() -> Self {
        Self::identity(DEFAULT_ORDER)
    }
}

/// Logarithm of `g(w)` continued along `[0, w]` from `log g(0) = 0`.
pub(crate) fn continuous_log_along_ray(g: impl Fn(Complex64) -> Result<Complex64>, w: Complex64) -> Result<Complex64> {
    let mut steps = 16usize;
    'refine: loop {
        let mut prev = g(czero())?;
        if (prev - 1.0).norm() > 1e-9 {
            return Err(Error::BranchBase { found: prev });
        }
        let mut arg = 0.0;
        for k in 1..=steps {
            let v = g(w * (k as f64 / steps as f64))?;
            if v.norm() <= POLE_OR_ZERO_TOL {
                return Err(Error::PoleOrZeroHit { z: w * (k as f64 / steps as f64) });
            }
            let d = (v / prev).arg();
            if d.abs() > std::f64::consts::FRAC_PI_4 && steps < 1 << 16 {
                steps *= 4;
                continue 'refine;
            }
            arg += d;
            prev = v;
        }
        return Ok(Complex64::new(prev.norm().ln(), arg));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn koebe() -> AnalyticMap {
        AnalyticMap::from_pre_schwarzian_real(&[1.0, -2.0, 1.0], 32).unwrap()
    }

    fn f1() -> AnalyticMap {
        AnalyticMap::from_pre_schwarzian_real(&[1.0, 0.5, 0.0, 1.0 / 3.0], 32).unwrap()
    }

    fn lam(x: f64) -> ClassParameter {
        ClassParameter::new(x).unwrap()
    }

    #[test]
    fn class_parameter_range() {
        assert!(ClassParameter::new(0.0).is_err());
        assert!(ClassParameter::new(1.5).is_err());
        assert!(ClassParameter::new(1.0).is_ok());
    }

    #[test]
    fn rational_normalization_is_enforced() {
        assert!(AnalyticMap::rational(vec![c(0.0, 0.0), c(2.0, 0.0)], vec![c(1.0, 0.0)], 8).is_err());
        assert!(AnalyticMap::rational(vec![c(0.1, 0.0), c(1.0, 0.0)], vec![c(1.0, 0.0)], 8).is_err());
        assert!(AnalyticMap::rational(vec![c(0.0, 0.0), c(2.0, 0.0)], vec![c(2.0, 0.0), c(1.0, 0.0)], 8).is_ok());
    }

    #[test]
    fn characterization_examples() {
        let one = SchwarzGenerator::constant(c(1.0, 0.0)).unwrap();
        let zero = SchwarzGenerator::constant(c(0.0, 0.0)).unwrap();
        let k = AnalyticMap::from_characterization(c(2.0, 0.0), lam(1.0), one.clone(), 16).unwrap();
        let q = k.pre_schwarzian();
        assert_eq!(q.coeff(0), c(1.0, 0.0));
        assert_eq!(q.coeff(1), c(-2.0, 0.0));
        assert_eq!(q.coeff(2), c(1.0, 0.0));
        assert!(q.coeffs()[3..].iter().all(|x| x.norm() == 0.0));

        let id = AnalyticMap::from_characterization(c(0.0, 0.0), lam(1.0), zero, 16).unwrap();
        let z = c(0.3, -0.4);
        assert!((id.eval(z).unwrap() - z).norm() < 1e-15);

        let bad = AnalyticMap::from_characterization(c(2.5, 0.0), lam(1.0), one, 16).unwrap();
        assert!(bad.pre_schwarzian_at(c(0.5, 0.0)).unwrap().0.norm() < 1e-15);
        assert!(matches!(bad.ensure_nonvanishing(), Err(Error::NonvanishingViolated { zero_count: 1, .. })));
    }

    #[test]
    fn u_eval_examples() {
        let k = koebe();
        for z in [c(0.3, 0.0), c(0.1, 0.7), c(-0.5, -0.5)] {
            assert!((k.u_eval(z).unwrap() + z * z).norm() < 1e-14);
            assert!((k.u_eval_alt(z).unwrap() + z * z).norm() < 1e-14);
        }
        assert!((k.u_eval_alt(c(0.3, 0.0)).unwrap() - c(-0.09, 0.0)).norm() < 1e-15);

        let f = f1();
        let z = c(0.0, 0.5);
        assert!((f.u_eval(z).unwrap() - c(0.0, 1.0 / 12.0)).norm() < 1e-15);
        assert!((f.u_eval_alt(z).unwrap() - c(0.0, 1.0 / 12.0)).norm() < 1e-15);

        let geometric = AnalyticMap::from_pre_schwarzian_real(&[1.0, -1.0], 16).unwrap();
        assert!(geometric.u_eval(c(0.6, 0.2)).unwrap().norm() < 1e-15);
        assert_eq!(AnalyticMap::identity(8).u_eval(c(0.2, 0.2)).unwrap(), c(0.0, 0.0));
        assert_eq!(k.u_eval(c(0.0, 0.0)).unwrap(), c(0.0, 0.0));
    }

    #[test]
    fn u_eval_reports_zero_of_f() {
        // f = z(1 - 2z)/1 vanishes at z = 1/2
        let f = AnalyticMap::rational(vec![c(0.0, 0.0), c(1.0, 0.0), c(-2.0, 0.0)], vec![c(1.0, 0.0)], 8).unwrap();
        assert!(matches!(f.u_eval(c(0.5, 0.0)), Err(Error::PoleOrZeroHit { .. })));
        assert_eq!(f.zero_count(0.9, 1024).unwrap(), ZeroCount { pre_schwarzian: 0, map: 1 });
    }

    #[test]
    fn taylor_examples() {
        let a = koebe().taylor_coefficients(10).unwrap();
        for (k, x) in a.iter().enumerate() {
            assert!((x - c((k + 1) as f64, 0.0)).norm() < 1e-12);
        }
        let g = AnalyticMap::from_pre_schwarzian_real(&[1.0, -1.0], 16).unwrap().taylor_coefficients(12).unwrap();
        assert!(g.iter().all(|x| (x - c(1.0, 0.0)).norm() < 1e-14));
        let id = AnalyticMap::identity(16).taylor_coefficients(5).unwrap();
        assert_eq!(id[0], c(1.0, 0.0));
        assert!(id[1..].iter().all(|x| x.norm() == 0.0));
        // longer than the cached order: rebuilt on demand
        assert_eq!(koebe().taylor_coefficients(50).unwrap()[49], c(50.0, 0.0));
    }

    #[test]
    fn fast_route_matches_direct_evaluation() {
        let omega = SchwarzGenerator::blaschke(vec![c(0.3, 0.4), c(-0.5, 0.1)], 0.7).unwrap();
        let f = AnalyticMap::from_characterization(c(0.4, -0.2), lam(0.6), omega, 32).unwrap();
        let g = AnalyticMap::build(
            Backing::Combination { terms: vec![(c(0.5, 0.0), f.clone()), (c(0.5, 0.0), koebe())], constant: c(0.0, 0.0), linear: c(0.1, 0.0) },
            32,
        )
        .unwrap();
        for z in [c(0.3, 0.1), c(-0.7, 0.5), c(0.0, 0.95)] {
            for m in [&f, &g] {
                let a = m.u(z).unwrap();
                assert!((a - m.u_eval(z).unwrap()).norm() < 1e-10 * (1.0 + a.norm()));
            }
        }
    }

    #[test]
    fn u_series_routes_agree() {
        let f = f1();
        let a = f.u_series();
        let b = f.u_series_from_map().unwrap();
        for k in 0..=a.order() {
            let want = if k == 3 { c(-2.0 / 3.0, 0.0) } else { c(0.0, 0.0) };
            assert!((a.coeff(k) - want).norm() < 1e-12);
            assert!((b.coeff(k) - want).norm() < 1e-12, "k={k}: {}", b.coeff(k));
        }
    }

    #[test]
    fn nth_root_pointwise_matches_series_inside() {
        let g = AnalyticMap::build(Backing::NthRoot { base: Box::new(f1()), n: 2 }, 64).unwrap();
        for z in [c(0.3, 0.1), c(-0.2, 0.4), c(0.0, 0.5)] {
            let (q, dq) = g.pre_schwarzian_at(z).unwrap();
            let (qs, dqs) = g.pre_schwarzian().evaluate_with_derivative(z);
            assert!((q - qs).norm() < 1e-12 && (dq - dqs).norm() < 1e-10);
        }
    }

    #[test]
    fn even_squeeze_is_smooth_at_the_origin() {
        let base = AnalyticMap::from_pre_schwarzian_real(&[1.0, -0.4, 0.3, 0.1, -0.2], 64).unwrap();
        let sq = AnalyticMap::build(Backing::EvenSqueeze { base: Box::new(base) }, 32).unwrap();
        for z in [c(1e-7, 0.0), c(1e-5, 1e-5), c(0.4, -0.3)] {
            let (q, dq) = sq.pre_schwarzian_at(z).unwrap();
            let want = 1.0 + 0.3 * z - 0.2 * z * z;
            let dwant = 0.3 - 0.4 * z;
            assert!((q - want).norm() < 1e-12 && (dq - dwant).norm() < 1e-9, "{z}: {dq} vs {dwant}");
        }
    }

    #[test]
    fn omitted_value_shift_on_rational() {
        // Koebe with c = -1/4: z/F = (1 - z)^2 + 4z = (1 + z)^2
        let k = koebe();
        let f = k.with_pre_schwarzian_shift(c(4.0, 0.0)).unwrap();
        let q = f.pre_schwarzian();
        assert!((q.coeff(1) - c(2.0, 0.0)).norm() < 1e-14 && (q.coeff(2) - c(1.0, 0.0)).norm() < 1e-14);
    }
}
