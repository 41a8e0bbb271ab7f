//! Zero counting by the argument principle.
//!
//! The winding number of `g(r e^{i theta})` about the origin is accumulated from
//! principal-argument increments between consecutive samples. Arcs whose
//! increment exceeds [`MAX_STEP`] are bisected until every step is small, so a
//! zero sitting just inside or outside the circle is still resolved.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Minimum admissible `|g|` on the contour.
pub const BOUNDARY_MIN_MODULUS: f64 = 1e-8;
/// Smallest sample count accepted by the counter.
pub const MIN_SAMPLES: usize = 1024;

const MAX_STEP: f64 = PI / 4.0;
const MAX_DEPTH: u32 = 40;

/// Number of zeros of `g` in `|z| < r`.
pub fn zero_count_in_disk(g: impl Fn(Complex64) -> Complex64, r: f64, m: usize) -> Result<i64> {
    try_zero_count_in_disk(|z| Ok(g(z)), r, m)
}

/// Like [`zero_count_in_disk`] for fallible evaluators.
pub fn try_zero_count_in_disk(g: impl Fn(Complex64) -> Result<Complex64>, r: f64, m: usize) -> Result<i64> {
    let m = m.max(MIN_SAMPLES);
    let sample = |theta: f64| -> Result<Complex64> {
        let v = g(Complex64::from_polar(r, theta))?;
        let modulus = v.norm();
        if !(modulus >= BOUNDARY_MIN_MODULUS) {
            return Err(Error::BoundaryZero { radius: r, min_modulus: modulus });
        }
        Ok(v)
    };
    let first = sample(0.0)?;
    let mut prev = first;
    let mut total = 0.0;
    for k in 1..=m {
        let theta_prev = TAU * (k - 1) as f64 / m as f64;
        let theta = TAU * k as f64 / m as f64;
        let v = if k == m { first } else { sample(theta)? };
        total += arc_increment(&sample, theta_prev, prev, theta, v, 0)?;
        prev = v;
    }
    Ok((total / TAU).round() as i64)
}

fn arc_increment(
    sample: &impl Fn(f64) -> Result<Complex64>,
    ta: f64,
    va: Complex64,
    tb: f64,
    vb: Complex64,
    depth: u32,
) -> Result<f64> {
    let step = (vb / va).arg();
    if step.abs() <= MAX_STEP || depth >= MAX_DEPTH {
        return Ok(step);
    }
    let tm = 0.5 * (ta + tb);
    let vm = sample(tm)?;
    Ok(arc_increment(sample, ta, va, tm, vm, depth + 1)? + arc_increment(sample, tm, vm, tb, vb, depth + 1)?)
}

/// Smallest `|g|` over `m` equispaced points of `|z| = r`.
pub fn min_modulus_on_circle(g: impl Fn(Complex64) -> Complex64, r: f64, m: usize) -> f64 {
    (0..m).map(|k| g(Complex64::from_polar(r, TAU * k as f64 / m as f64)).norm()).fold(f64::INFINITY, f64::min)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn koebe_denominator_has_no_zeros_inside() {
        let n = zero_count_in_disk(|z| (1.0 - z) * (1.0 - z), 0.99, 1024).unwrap();
        assert_eq!(n, 0);
    }

    #[test]
    fn counts_single_root() {
        // 1 - 2.5 z + z^2 = (1 - 2z)(1 - z/2): root 0.5 inside, 2 outside
        assert_eq!(zero_count_in_disk(|z| 1.0 - 2.5 * z + z * z, 0.9, 1024).unwrap(), 1);
    }

    #[test]
    fn quadratic_family_depends_on_psi() {
        let lambda = 0.5;
        let p = |psi: f64| move |z: Complex64| 1.0 - (1.0 + lambda) * z + lambda * Complex64::from_polar(1.0, psi) * z * z;
        assert_eq!(zero_count_in_disk(p(0.0), 0.999, 1024).unwrap(), 0);
        assert_eq!(zero_count_in_disk(p(PI), 0.999, 1024).unwrap(), 1);
        let root = (-3.0 + 17f64.sqrt()) / 2.0;
        assert!(p(PI)(c(root, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn boundary_zero_is_reported() {
        let err = zero_count_in_disk(|z| z - 0.5, 0.5, 1024).unwrap_err();
        assert!(matches!(err, Error::BoundaryZero { .. }));
    }

    #[test]
    fn resolves_zero_hugging_the_contour() {
        let a = c(0.0, 0.9 - 1e-6);
        assert_eq!(zero_count_in_disk(|z| z - a, 0.9, 1024).unwrap(), 1);
        let b = c(0.0, 0.9 + 1e-6);
        assert_eq!(zero_count_in_disk(|z| z - b, 0.9, 1024).unwrap(), 0);
    }

    #[test]
    fn stable_under_sample_doubling() {
        let g = |z: Complex64| (z - c(0.3, 0.2)) * (z - c(-0.6, 0.5)) * (z - c(0.95, 0.0)) * (z * z + 0.1);
        let a = zero_count_in_disk(g, 0.9, 1024).unwrap();
        let b = zero_count_in_disk(g, 0.9, 2048).unwrap();
        assert_eq!(a, 4);
        assert_eq!(a, b);
    }
}
