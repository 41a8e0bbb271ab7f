//! Named functions: the Koebe function and its relatives, the set
//! `z/(1 +- z)`, `z/(1 +- z^2)`, `z/(1 +- z + z^2)`, and the n-th root family.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::map::AnalyticMap;
use crate::transforms::nth_root_transform;

/// Orders of the n-th root family shipped in the catalog.
pub const NTH_ROOT_ORDERS: std::ops::RangeInclusive<u32> = 2..=6;

const POLYNOMIAL_MEMBERS: [(&str, &[f64]); 10] = [
    ("identity", &[1.0]),
    ("koebe", &[1.0, -2.0, 1.0]),
    ("koebe_rotated", &[1.0, 2.0, 1.0]),
    ("z/(1+z)", &[1.0, 1.0]),
    ("z/(1-z)", &[1.0, -1.0]),
    ("z/(1+z^2)", &[1.0, 0.0, 1.0]),
    ("z/(1-z^2)", &[1.0, 0.0, -1.0]),
    ("z/(1+z+z^2)", &[1.0, 1.0, 1.0]),
    ("z/(1-z+z^2)", &[1.0, -1.0, 1.0]),
    ("f1", &[1.0, 0.5, 0.0, 1.0 / 3.0]),
];

/// Pre-Schwarzian `1 + z/n + (-1)^n z^{n+1}/(n+1)` of the n-th root source.
pub fn nth_root_source_coefficients(n: u32) -> Vec<f64> {
    let mut q = vec![0.0; n as usize + 2];
    q[0] = 1.0;
    q[1] = 1.0 / n as f64;
    q[n as usize + 1] = if n % 2 == 0 { 1.0 } else { -1.0 } / (n + 1) as f64;
    q
}

pub fn nth_root_source(n: u32, order: usize) -> Result<AnalyticMap> {
    AnalyticMap::from_pre_schwarzian_real(&nth_root_source_coefficients(n), order)
}

/// `(f(z^n))^{1/n}` for the n-th root source `f`.
pub fn nth_root_counterexample(n: u32, order: usize) -> Result<AnalyticMap> {
    nth_root_transform(&nth_root_source(n, order)?, n)
}

/// Names of the catalog members of U (lambda = 1).
pub fn member_names() -> Vec<String> {
    let mut names: Vec<String> = POLYNOMIAL_MEMBERS.iter().map(|(n, _)| n.to_string()).collect();
    names.extend(NTH_ROOT_ORDERS.map(|n| format!("nth_root_source_{n}")));
    names
}

/// Every builtin name.
pub fn names() -> Vec<String> {
    let mut names = member_names();
    names.push("g1".into());
    names.extend(NTH_ROOT_ORDERS.map(|n| format!("nth_root_counterexample_{n}")));
    names
}

pub fn builtin(name: &str, order: usize) -> Result<AnalyticMap> {
    if let Some((_, q)) = POLYNOMIAL_MEMBERS.iter().find(|(n, _)| *n == name) {
        return AnalyticMap::from_pre_schwarzian_real(q, order);
    }
    let suffix = |prefix: &str| name.strip_prefix(prefix).and_then(|s| s.parse::<u32>().ok()).filter(|n| NTH_ROOT_ORDERS.contains(n));
    if name == "g1" {
        return nth_root_counterexample(2, order);
    }
    if let Some(n) = suffix("nth_root_source_") {
        return nth_root_source(n, order);
    }
    if let Some(n) = suffix("nth_root_counterexample_") {
        return nth_root_counterexample(n, order);
    }
    Err(Error::UnknownBuiltin(name.to_string()))
}

/// Closed form of `U_{g1}` with `g1 = sqrt(f1(z^2))`: with `w = z^2` and
/// `q = 1 + w/2 + w^3/3`, `U = (q - w q') / sqrt(q) - 1`.
pub fn g1_u_closed_form(z: Complex64) -> Complex64 {
    let w = z * z;
    let q = 1.0 + w / 2.0 + w * w * w / 3.0;
    let dq = 0.5 + w * w;
    (q - w * dq) / q.sqrt() - 1.0
}

/// `(5 sqrt 6 - 3)/3`, the value of `|U_{g1}|` at `z = i`.
pub fn g1_limit_at_i() -> f64 {
    (5.0 * 6f64.sqrt() - 3.0) / 3.0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_name_builds() {
        for n in names() {
            assert!(builtin(&n, 32).is_ok(), "{n}");
        }
        assert!(matches!(builtin("nth_root_source_7", 32), Err(Error::UnknownBuiltin(_))));
    }

    #[test]
    fn source_two_is_f1() {
        assert_eq!(nth_root_source_coefficients(2), vec![1.0, 0.5, 0.0, 1.0 / 3.0]);
        assert_eq!(nth_root_source_coefficients(3), vec![1.0, 1.0 / 3.0, 0.0, 0.0, -0.25]);
    }

    #[test]
    fn g1_closed_form_matches_map() {
        let g = builtin("g1", 64).unwrap();
        for z in [Complex64::new(0.3, 0.2), Complex64::new(-0.1, 0.8), Complex64::new(0.0, 0.99)] {
            assert!((g.u(z).unwrap() - g1_u_closed_form(z)).norm() < 1e-10);
        }
        assert!((g1_u_closed_form(Complex64::new(0.0, 1.0)).norm() - g1_limit_at_i()).abs() < 1e-12);
        assert!((g1_limit_at_i() - 3.0824829046).abs() < 1e-9);
    }
}
