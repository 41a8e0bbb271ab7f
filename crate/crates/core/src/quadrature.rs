//! Gauss-Legendre quadrature along straight segments in the complex plane.

use std::sync::OnceLock;

use num_complex::Complex64;

const NODES: usize = 16;
const PANELS: usize = 32;

/// Nodes and weights on [-1, 1], found by Newton iteration on `P_n`.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let step = p1 / dp;
            x -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    out
}

fn rule() -> &'static [(f64, f64)] {
    static RULE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(NODES))
}

/// `integral_0^w f(t) dt` along `[0, w]`, composite rule with panels graded
/// toward the far end where boundary singularities sit.
pub fn segment_integral(f: impl Fn(Complex64) -> Complex64, w: Complex64) -> Complex64 {
    let rule = rule();
    // breakpoints s_k = 1 - (1 - k/P)^2 cluster near s = 1
    let bp = |k: usize| 1.0 - (1.0 - k as f64 / PANELS as f64).powi(2);
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..PANELS {
        let (a, b) = (bp(k), bp(k + 1));
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        for &(x, wt) in rule {
            acc += f(w * (mid + half * x)) * (wt * half);
        }
    }
    acc * w
}
