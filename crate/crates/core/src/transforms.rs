//! Constructions that preserve U(lambda), and the n-th root transform that does not.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::map::{AnalyticMap, Backing, NONVANISHING_RADIUS, NONVANISHING_SAMPLES};
use crate::zeros::try_zero_count_in_disk;

const IDENTITY_CHECK_POINTS: usize = 64;
const IDENTITY_CHECK_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TransformKind {
    Rotate { theta: f64 },
    Conjugate,
    Dilate { r: f64 },
    OmittedValue { c: Complex64 },
    MobiusShift { mu: Complex64 },
    SymmetrizeN { n: u32 },
    Cosine { theta: f64 },
    Sine { theta: f64 },
    RealPart,
    EvenSqueeze,
    NthRoot { n: u32 },
}

impl TransformKind {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::ParameterOutOfRange(msg));
        match *self {
            Self::Rotate { theta } | Self::Cosine { theta } | Self::Sine { theta } if !theta.is_finite() => {
                bad(format!("angle must be finite, got {theta}"))
            }
            Self::Dilate { r } if !(r > 0.0 && r <= 1.0) => bad(format!("dilation radius must lie in (0, 1], got {r}")),
            Self::OmittedValue { c } if c.norm() == 0.0 || !c.is_finite() => bad("omitted value must be finite and nonzero".into()),
            Self::MobiusShift { mu } if !mu.is_finite() => bad("mu must be finite".into()),
            Self::SymmetrizeN { n } | Self::NthRoot { n } if n < 2 => bad(format!("n must be at least 2, got {n}")),
            _ => Ok(()),
        }
    }
}

/// Applies any transform.
pub fn apply(f: &AnalyticMap, kind: TransformKind) -> Result<AnalyticMap> {
    kind.validate()?;
    match kind {
        TransformKind::Rotate { .. } | TransformKind::Conjugate | TransformKind::Dilate { .. } => basic_transform(f, kind),
        TransformKind::OmittedValue { c } => omitted_value_transform(f, c),
        TransformKind::MobiusShift { mu } => mobius_shift(f, mu),
        TransformKind::SymmetrizeN { n } => symmetrize_n(f, n),
        TransformKind::NthRoot { n } => nth_root_transform(f, n),
        _ => coefficient_filter(f, kind),
    }
}

/// `e^{-i theta} f(z e^{i theta})`, `conj f(conj z)` or `f(r z)/r`.
pub fn basic_transform(f: &AnalyticMap, kind: TransformKind) -> Result<AnalyticMap> {
    kind.validate()?;
    match kind {
        TransformKind::Rotate { theta } => f.rotated(theta),
        TransformKind::Conjugate => f.conjugated(),
        TransformKind::Dilate { r } => f.dilated(r),
        other => Err(Error::DomainError(format!("{other:?} is not a rotation, conjugation or dilation"))),
    }
}

/// `F = c f / (c - f)` for a value `c` omitted by `f`. Then `z/F = z/f - z/c`
/// and `U_F = U_f`.
pub fn omitted_value_transform(f: &AnalyticMap, c: Complex64) -> Result<AnalyticMap> {
    TransformKind::OmittedValue { c }.validate()?;
    // c - f = (c q - z)/q, so c is attained exactly where c q - z vanishes
    let hits = try_zero_count_in_disk(|z| Ok(c * f.pre_schwarzian_at(z)?.0 - z), NONVANISHING_RADIUS, NONVANISHING_SAMPLES)?;
    if hits != 0 {
        return Err(Error::ValueAttained { c });
    }
    let g = f.with_pre_schwarzian_shift(-1.0 / c)?;
    check_u_identity(f, &g)?;
    Ok(g)
}

/// `F = f / (1 + (a2 + mu) f)`, the omitted-value transform with `c = -1/(a2 + mu)`.
pub fn mobius_shift(f: &AnalyticMap, mu: Complex64) -> Result<AnalyticMap> {
    let s = f.a2() + mu;
    if s.norm() == 0.0 {
        return Ok(f.clone());
    }
    omitted_value_transform(f, -1.0 / s)
}

fn check_u_identity(f: &AnalyticMap, g: &AnalyticMap) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..IDENTITY_CHECK_POINTS {
        let z = Complex64::from_polar(0.95 * rng.gen::<f64>().sqrt(), TAU * rng.gen::<f64>());
        let (Ok(a), Ok(b)) = (f.u(z), g.u(z)) else { continue };
        if (a - b).norm() > IDENTITY_CHECK_TOL * (1.0 + a.norm()) {
            return Err(Error::InvalidMap(format!("U changed under the omitted-value transform at {z}")));
        }
    }
    Ok(())
}

fn combination(terms: Vec<(Complex64, AnalyticMap)>, constant: Complex64) -> Backing {
    Backing::Combination { terms, constant, linear: Complex64::new(0.0, 0.0) }
}

fn nonvanishing(g: AnalyticMap) -> Result<AnalyticMap> {
    g.ensure_nonvanishing()?;
    Ok(g)
}

/// `z/f_n = 1 + sum_k b_{nk} z^{nk}`, the average of `z/f` over the n-th roots of unity.
pub fn symmetrize_n(f: &AnalyticMap, n: u32) -> Result<AnalyticMap> {
    TransformKind::SymmetrizeN { n }.validate()?;
    let w = Complex64::new(1.0 / n as f64, 0.0);
    let terms = (0..n).map(|k| Ok((w, f.rotated(TAU * k as f64 / n as f64)?))).collect::<Result<_>>()?;
    let n = n as usize;
    let series = f.pre_schwarzian().map_coeffs(|k, b| if k % n == 0 { b } else { Complex64::new(0.0, 0.0) });
    nonvanishing(AnalyticMap::with_series(combination(terms, Complex64::new(0.0, 0.0)), series))
}

/// Coefficient filters of the pre-Schwarzian: `b_n cos(n theta)`, `b_n sin(n theta)`,
/// `Re b_n`, and the even squeeze `b_{2n} -> z^n`.
pub fn coefficient_filter(f: &AnalyticMap, kind: TransformKind) -> Result<AnalyticMap> {
    kind.validate()?;
    let half = Complex64::new(0.5, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let g = match kind {
        TransformKind::Cosine { theta } => {
            let terms = vec![(half, f.rotated(theta)?), (half, f.rotated(-theta)?)];
            let series = f.pre_schwarzian().map_coeffs(|k, b| b * (k as f64 * theta).cos());
            AnalyticMap::with_series(combination(terms, zero), series)
        }
        TransformKind::Sine { theta } => {
            let w = Complex64::new(0.0, -0.5);
            let terms = vec![(w, f.rotated(theta)?), (-w, f.rotated(-theta)?)];
            let series =
                f.pre_schwarzian().map_coeffs(|k, b| if k == 0 { Complex64::new(1.0, 0.0) } else { b * (k as f64 * theta).sin() });
            AnalyticMap::with_series(combination(terms, Complex64::new(1.0, 0.0)), series)
        }
        TransformKind::RealPart => {
            let terms = vec![(half, f.clone()), (half, f.conjugated()?)];
            let series = f.pre_schwarzian().map_coeffs(|_, b| Complex64::new(b.re, 0.0));
            AnalyticMap::with_series(combination(terms, zero), series)
        }
        TransformKind::EvenSqueeze => {
            let base = f.with_order(2 * f.order())?;
            AnalyticMap::build(Backing::EvenSqueeze { base: Box::new(base) }, f.order())?
        }
        other => return Err(Error::DomainError(format!("{other:?} is not a coefficient filter"))),
    };
    nonvanishing(g)
}

/// `z/Psi = sum mu_k z/g_k` for members `g_k` of U(lambda_k) with
/// `sum mu_k lambda_k = 1`. `sum mu_k = 1` is also required so that `Psi`
/// stays normalized.
pub fn convex_combine(gs: &[AnalyticMap], mus: &[f64], lambdas: &[f64]) -> Result<AnalyticMap> {
    if gs.is_empty() || gs.len() != mus.len() || gs.len() != lambdas.len() {
        return Err(Error::WeightConstraint("maps, weights and parameters must have equal nonzero length".into()));
    }
    if mus.iter().chain(lambdas).any(|x| !(0.0..=1.0).contains(x)) {
        return Err(Error::WeightConstraint("weights and parameters must lie in [0, 1]".into()));
    }
    let weighted: f64 = mus.iter().zip(lambdas).map(|(m, l)| m * l).sum();
    if (weighted - 1.0).abs() > 1e-12 {
        return Err(Error::WeightConstraint(format!("sum mu_k lambda_k = {weighted}, expected 1")));
    }
    let total: f64 = mus.iter().sum();
    if (total - 1.0).abs() > 1e-12 {
        return Err(Error::WeightConstraint(format!("sum mu_k = {total}; the combination would not be normalized")));
    }
    let order = gs.iter().map(AnalyticMap::order).min().unwrap_or_default();
    let terms = gs.iter().zip(mus).map(|(g, &m)| (Complex64::new(m, 0.0), g.clone())).collect();
    nonvanishing(AnalyticMap::build(combination(terms, Complex64::new(0.0, 0.0)), order)?)
}

/// `g(z) = (f(z^n))^{1/n}`. No membership claim is made for `g`.
pub fn nth_root_transform(f: &AnalyticMap, n: u32) -> Result<AnalyticMap> {
    TransformKind::NthRoot { n }.validate()?;
    AnalyticMap::build(Backing::NthRoot { base: Box::new(f.clone()), n }, f.order())
}
