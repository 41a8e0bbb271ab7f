//! Acceptance criteria, one line per criterion. Runs without the libtest
//! harness so the lines always print; exits nonzero if any criterion fails.

use std::f64::consts::{PI, TAU};
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use schlicht::bounds::{
    abc_check, alpha_to_a2, extremal_theta_bound, marx_alpha, phi_value, radius_lhs, solve_radius, tail_sum, PhiParameters,
    TailMode,
};
use schlicht::catalog::{self, g1_limit_at_i, nth_root_counterexample, nth_root_source, NTH_ROOT_ORDERS};
use schlicht::lab::{self, extremal_member, FuzzConfig};
use schlicht::limacon::{beta1_closed_form, q_min_modulus, unit_circle_intersection_numeric, Limacon};
use schlicht::membership::{certify_map_by_coefficients, fekete_check, fixed_point_trace, sup_u_on_circle, verdict, VerdictStatus};
use schlicht::transforms::{apply, convex_combine, TransformKind};
use schlicht::{AnalyticMap, ClassParameter, Error, SchwarzGenerator};

type Outcome = Result<String, String>;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn lam(x: f64) -> ClassParameter {
    ClassParameter::new(x).unwrap()
}

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn e(err: Error) -> String {
    err.to_string()
}

fn radius_root() -> Outcome {
    let start = Instant::now();
    let r0 = solve_radius(1e-12).map_err(e)?;
    let elapsed = start.elapsed();
    let res = radius_lhs(r0);
    ensure((r0 - 0.778387).abs() < 5e-6, format!("r0 = {r0}"))?;
    ensure(res.abs() < 1e-9, format!("residual {res:e}"))?;
    ensure(elapsed < Duration::from_millis(100), format!("took {elapsed:?}"))?;
    Ok(format!("r0 = {r0:.15}, residual {res:.1e}, {elapsed:?}"))
}

fn marx_endpoints() -> Outcome {
    let (a0, a2) = (marx_alpha(0.0).map_err(e)?, marx_alpha(2.0).map_err(e)?);
    ensure((a2 - 0.5).abs() < 1e-12 && (a0 - 2.0 / 3.0).abs() < 1e-12, format!("alpha(0) = {a0}, alpha(2) = {a2}"))?;
    let grid: Vec<f64> = (0..1000).map(|k| marx_alpha(2.0 * k as f64 / 999.0)).collect::<Result<_, _>>().map_err(e)?;
    let bad = grid.windows(2).position(|w| w[1] >= w[0]);
    ensure(bad.is_none(), format!("not decreasing at grid index {bad:?}"))?;
    Ok(format!("alpha(0) = {a0}, alpha(2) = {a2}, strictly decreasing on 1000 points"))
}

fn u_exactness() -> Outcome {
    let koebe = catalog::builtin("koebe", 64).map_err(e)?;
    let f1 = catalog::builtin("f1", 64).map_err(e)?;
    let (uk, uf) = (koebe.u_series(), f1.u_series());
    let mut worst: f64 = 0.0;
    for k in 0..=30 {
        let ek = if k == 2 { -1.0 } else { 0.0 };
        let ef = if k == 3 { -2.0 / 3.0 } else { 0.0 };
        worst = worst.max((uk.coeff(k) - ek).norm()).max((uf.coeff(k) - ef).norm());
    }
    ensure(worst <= 1e-12, format!("series coefficient error {worst:e}"))?;
    let names = catalog::names();
    let maps: Vec<AnalyticMap> = names.iter().map(|n| catalog::builtin(n, 64)).collect::<Result<_, _>>().map_err(e)?;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mut compared, mut gap): (usize, f64) = (0, 0.0);
    for k in 0..1000 {
        let f = &maps[k % maps.len()];
        let z = Complex64::from_polar(0.95 * rng.gen::<f64>().sqrt(), TAU * rng.gen::<f64>());
        let (a, b) = (f.u_eval(z).map_err(e)?, f.u_eval_alt(z).map_err(e)?);
        gap = gap.max((a - b).norm() / (1.0 + a.norm()));
        compared += 1;
    }
    ensure(gap <= 1e-10, format!("u_eval vs u_eval_alt gap {gap:e}"))?;
    Ok(format!("series error {worst:.1e} to order 30; eval gap {gap:.1e} over {compared} points, {} maps", maps.len()))
}

fn square_root_counterexample() -> Outcome {
    let g1 = catalog::builtin("g1", 64).map_err(e)?;
    let at = g1.u_eval(c(0.0, 0.999)).map_err(e)?.norm();
    let limit = g1_limit_at_i();
    let oracle = (5.0 * 6f64.sqrt() - 3.0) / 3.0;
    ensure(at > 1.0, format!("|U(0.999 i)| = {at}"))?;
    ensure((limit - oracle).abs() < 1e-6 && (limit - 3.0824829046).abs() < 1e-6, format!("limit {limit}"))?;
    let v = verdict(&g1, lam(1.0));
    ensure(v.is_refuted(), format!("verdict {:?}", v.status))?;
    Ok(format!("|U(0.999 i)| = {at:.6}, limit {limit:.10}, Refuted"))
}

fn nth_root_family() -> Outcome {
    let mut parts = Vec::new();
    for n in NTH_ROOT_ORDERS {
        let f = nth_root_source(n, 64).map_err(e)?;
        let expected = n as f64 / (n as f64 + 1.0);
        let cert = certify_map_by_coefficients(&f, 1.0);
        let sup = sup_u_on_circle(&f, 0.999, 4096).map_err(e)?.value;
        let v = verdict(&f, lam(1.0));
        ensure(v.status == VerdictStatus::CertifiedMember, format!("n = {n}: source verdict {:?}", v.status))?;
        ensure((cert.sum - expected).abs() < 1e-12 && sup <= expected + 1e-12, format!("n = {n}: sum {} sup {sup}", cert.sum))?;
        let g = nth_root_counterexample(n, 64).map_err(e)?;
        let vg = verdict(&g, lam(1.0));
        let VerdictStatus::Refuted { value, .. } = vg.status else {
            return Err(format!("n = {n}: root verdict {:?}", vg.status));
        };
        parts.push(format!("n={n}: {value:.2}"));
    }
    Ok(format!("sources certified, roots refuted ({})", parts.join(", ")))
}

fn limacon_geometry() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst: f64 = 0.0;
    for _ in 0..10_000 {
        let lambda = 1.0 - rng.gen::<f64>();
        let l = 1.0 - lambda + 2.0 * lambda * rng.gen::<f64>();
        let curve = Limacon::new(lambda, l, 0.0).map_err(e)?;
        let (x, y) = curve.parametric_point(TAU * rng.gen::<f64>());
        worst = worst.max(curve.implicit_residual(x, y).abs());
    }
    ensure(worst <= 1e-9, format!("implicit residual {worst:e}"))?;
    let mut gap: f64 = 0.0;
    for i in 0..20 {
        let lambda = (i as f64 + 1.0) / 20.0;
        for j in 0..20 {
            let l = 1.0 - lambda + 2.0 * lambda * (j as f64 + 0.5) / 20.0;
            let closed = beta1_closed_form(lambda, l).map_err(e)?.beta1;
            let numeric = unit_circle_intersection_numeric(&Limacon::new(lambda, l, 0.0).map_err(e)?).map_err(e)?;
            gap = gap.max((closed - numeric).abs());
        }
    }
    ensure(gap <= 1e-8, format!("beta1 closed vs numeric {gap:e}"))?;
    for lambda in [0.1, 0.25, 0.5, 0.75, 0.9] {
        let hi = beta1_closed_form(lambda, 1.0 + lambda).map_err(e)?;
        let lo = beta1_closed_form(lambda, 1.0 - lambda).map_err(e)?;
        ensure(hi.beta1 == 0.0 && lo.beta1 == PI, format!("lambda {lambda}: endpoints {} {}", hi.beta1, lo.beta1))?;
    }
    Ok(format!("implicit residual {worst:.1e} on 1e4 points, beta1 gap {gap:.1e} on 400 points, endpoints exact"))
}

fn q_minimum() -> Outcome {
    let (mut val_gap, mut arg_gap): (f64, f64) = (0.0, 0.0);
    for lambda in [0.25, 0.5, 0.75, 1.0] {
        for k in 0..64 {
            let psi = -PI + TAU * (k as f64 + 0.5) / 64.0;
            let (min, tau) = q_min_modulus(lambda, psi, 4096);
            let d = (tau + psi).rem_euclid(TAU);
            val_gap = val_gap.max((min - 1.0).abs());
            arg_gap = arg_gap.max(d.min(TAU - d));
        }
    }
    ensure(val_gap <= 1e-9 && arg_gap <= 1e-6, format!("min gap {val_gap:e}, argmin gap {arg_gap:e}"))?;
    Ok(format!("min gap {val_gap:.1e}, argmin gap {arg_gap:.1e} over 256 (lambda, psi)"))
}

fn tail_identity() -> Outcome {
    let mut gap: f64 = 0.0;
    for r in [0.3, 0.5, 0.7, 0.778387] {
        let closed = tail_sum(r, TailMode::ClosedForm).map_err(e)?;
        let partial = tail_sum(r, TailMode::Partial(2000)).map_err(e)?;
        gap = gap.max((closed - partial).abs());
    }
    let spot = tail_sum(0.5, TailMode::ClosedForm).map_err(e)?;
    ensure(gap <= 1e-10, format!("closed vs partial {gap:e}"))?;
    ensure((spot - 0.040885).abs() < 1e-5, format!("tail(0.5) = {spot}"))?;
    Ok(format!("closed vs partial {gap:.1e}, tail(0.5) = {spot:.9}"))
}

fn fixed_point() -> Outcome {
    let omega = SchwarzGenerator::constant(c(1.0, 0.0)).map_err(e)?;
    let t = fixed_point_trace(c(2.5, 0.0), lam(1.0), &omega, 1e-14).map_err(e)?;
    let err = (t.z0 - 0.5).norm();
    let ratios = t.contraction_ratios();
    let monotone = ratios.iter().all(|&q| q < 1.0) && t.steps.windows(2).all(|w| w[1] <= w[0]);
    ensure(err <= 1e-10, format!("z0 = {}", t.z0))?;
    ensure(monotone, format!("ratios {ratios:?}"))?;
    Ok(format!("z0 = {:.12}, {} steps, max ratio {:.3}", t.z0.re, t.steps.len(), ratios.iter().cloned().fold(0.0, f64::max)))
}

const FUZZ_CLAUSES: [&str; 6] = ["a2_bound", "fekete", "growth_r0.9", "growth_r0.99", "subordination_pre_schwarzian", "marx"];

fn theorem_fuzz() -> Outcome {
    // single-threaded, as the runtime target is stated for one core
    std::env::set_var(lab::THREADS_ENV, "1");
    let start = Instant::now();
    let mut failures = [0usize; FUZZ_CLAUSES.len()];
    let mut members = 0;
    let mut per_lambda = Vec::new();
    for (i, lambda) in [0.25, 0.5, 0.75, 1.0].into_iter().enumerate() {
        let config = FuzzConfig {
            seed: 2024 + i as u64,
            count: 10_000,
            lambda_set: vec![lambda],
            include_extremals: false,
            ..FuzzConfig::default()
        };
        let records = lab::run(&config).map_err(e)?;
        let mut local = 0;
        for r in &records {
            for chk in &r.checks {
                if let Some(k) = FUZZ_CLAUSES.iter().position(|n| *n == chk.name) {
                    let failed = if chk.name == "subordination_pre_schwarzian" { !chk.passed } else { chk.residual < -1e-9 };
                    if failed {
                        failures[k] += 1;
                        local += 1;
                    }
                }
            }
        }
        members += records.len();
        per_lambda.push(format!("lambda {lambda}: {local}"));
    }
    let elapsed = start.elapsed();
    let breakdown: Vec<String> =
        FUZZ_CLAUSES.iter().zip(failures).filter(|(_, n)| *n > 0).map(|(name, n)| format!("{name} {n}")).collect();
    let summary = format!(
        "{members} members in {:.1} s; failures: {} [{}]",
        elapsed.as_secs_f64(),
        if breakdown.is_empty() { "none".into() } else { breakdown.join(", ") },
        per_lambda.join(", ")
    );
    ensure(members == 40_000, summary.clone())?;
    ensure(failures.iter().all(|&n| n == 0), summary.clone())?;
    ensure(elapsed < Duration::from_secs(300), summary.clone())?;
    Ok(summary)
}

fn extremal_attainment() -> Outcome {
    for l in [0.25, 0.5, 0.75, 1.0] {
        let f = extremal_member(lam(l), 0.0, 64).map_err(e)?;
        let a2 = f.a2().norm();
        let fek = fekete_check(&f).map_err(e)?;
        ensure((a2 - (1.0 + l)).abs() <= 1e-12 && (fek - l).abs() <= 1e-12, format!("lambda {l}: |a2| = {a2}, fekete {fek}"))?;
        let theta = extremal_theta_bound(1.0 + l, l).map_err(e)?.value;
        ensure((theta + 1.0).abs() <= 1e-12, format!("lambda {l}: theta bound {theta}"))?;
    }
    Ok("|a2| = 1 + lambda, |a3 - a2^2| = lambda and theta bound -1 for lambda in {0.25, 0.5, 0.75, 1}".into())
}

fn abc_ledger() -> Outcome {
    let rep = abc_check(1e-4).map_err(e)?;
    ensure(rep.min_a >= -1e-12 && rep.min_b >= -1e-12 && rep.min_c >= -1e-12, format!("{rep:?}"))?;
    ensure(rep.at_half[0].abs() <= 1e-12 && rep.at_half[1].abs() <= 1e-12, format!("at 1/2: {:?}", rep.at_half))?;
    let mut phi_min = f64::INFINITY;
    for k in 0..=100 {
        let alpha = 0.5 + (2.0 / 3.0 - 0.5) * k as f64 / 100.0;
        alpha_to_a2(alpha).map_err(e)?;
        let p = PhiParameters::at_lower_bound(alpha).map_err(e)?;
        for j in 0..=2000 {
            let t = 1000.0 * j as f64 / 2000.0;
            phi_min = phi_min.min(phi_value(&p, t).map_err(e)?);
        }
    }
    ensure(phi_min >= 1.0 - 1e-9, format!("min Phi = {phi_min}"))?;
    Ok(format!(
        "min A {:.1e}, min B {:.1e}, min C {:.1e} over {} points; min Phi {phi_min:.12}",
        rep.min_a, rep.min_b, rep.min_c, rep.points
    ))
}

fn transforms_for(f: &AnalyticMap) -> Vec<TransformKind> {
    let mut t = vec![
        TransformKind::Rotate { theta: 0.7 },
        TransformKind::Rotate { theta: -2.0 },
        TransformKind::Conjugate,
        TransformKind::Dilate { r: 0.6 },
        TransformKind::SymmetrizeN { n: 2 },
        TransformKind::SymmetrizeN { n: 3 },
        TransformKind::Cosine { theta: 0.9 },
        TransformKind::Sine { theta: 0.9 },
        TransformKind::RealPart,
        TransformKind::EvenSqueeze,
    ];
    for v in [c(-1.0, 0.0), c(1.0, 0.0), c(0.0, 1.0), c(0.0, -1.0), c(-3.0, 0.0)] {
        t.push(TransformKind::OmittedValue { c: v });
    }
    for mu in [c(0.0, 0.0), c(0.5, 0.0), c(0.0, -0.5)] {
        if (f.a2() + mu).norm() > 0.0 {
            t.push(TransformKind::MobiusShift { mu });
        }
    }
    t
}

fn transform_preservation() -> Outcome {
    let names = catalog::member_names();
    let maps: Vec<AnalyticMap> = names.iter().map(|n| catalog::builtin(n, 64)).collect::<Result<_, _>>().map_err(e)?;
    let (mut applied, mut skipped) = (0, 0);
    for (name, f) in names.iter().zip(&maps) {
        for t in transforms_for(f) {
            let g = match apply(f, t) {
                Ok(g) => g,
                Err(Error::ValueAttained { .. } | Error::NonvanishingViolated { .. }) => {
                    skipped += 1;
                    continue;
                }
                Err(err) => return Err(format!("{name} {t:?}: {err}")),
            };
            let v = verdict(&g, lam(1.0));
            ensure(v.is_member(), format!("{name} {t:?}: {:?}", v.status))?;
            applied += 1;
        }
    }
    for (i, f) in maps.iter().enumerate() {
        let g = &maps[(i + 1) % maps.len()];
        match convex_combine(&[f.clone(), g.clone()], &[0.5, 0.5], &[1.0, 1.0]) {
            Ok(h) => {
                let v = verdict(&h, lam(1.0));
                ensure(v.is_member(), format!("combination {} + {}: {:?}", names[i], names[(i + 1) % maps.len()], v.status))?;
                applied += 1;
            }
            Err(Error::NonvanishingViolated { .. }) => skipped += 1,
            Err(err) => return Err(err.to_string()),
        }
    }
    let koebe = catalog::builtin("koebe", 64).map_err(e)?;
    let close = |a: &AnalyticMap, b: &AnalyticMap| -> Result<f64, String> {
        let (x, y) = (a.taylor_coefficients(30).map_err(e)?, b.taylor_coefficients(30).map_err(e)?);
        Ok(x.iter().zip(&y).map(|(p, q)| (p - q).norm()).fold(0.0, f64::max))
    };
    let squeeze = apply(&koebe, TransformKind::EvenSqueeze).map_err(e)?;
    let sym = apply(&koebe, TransformKind::SymmetrizeN { n: 2 }).map_err(e)?;
    let d1 = close(&squeeze, &catalog::builtin("z/(1+z)", 64).map_err(e)?)?;
    let d2 = close(&sym, &catalog::builtin("z/(1+z^2)", 64).map_err(e)?)?;
    ensure(d1 <= 1e-12 && d2 <= 1e-12, format!("squeeze gap {d1:e}, symmetrize gap {d2:e}"))?;
    Ok(format!("{applied} transformed members verified ({skipped} not applicable); squeeze and symmetrize of Koebe exact"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 13] = [
        ("radius root", radius_root),
        ("Marx endpoints", marx_endpoints),
        ("U-operator exactness", u_exactness),
        ("square-root counterexample", square_root_counterexample),
        ("n-th root family", nth_root_family),
        ("limacon geometry", limacon_geometry),
        ("q_psi minimum modulus", q_minimum),
        ("tail-sum identity", tail_identity),
        ("fixed-point locator", fixed_point),
        ("theorem-conclusion fuzz", theorem_fuzz),
        ("extremal attainment", extremal_attainment),
        ("A/B/C ledger", abc_ledger),
        ("transform preservation", transform_preservation),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let t = start.elapsed().as_secs_f64();
        match outcome {
            Ok(msg) => println!("criterion {:>2} PASS  {name}: {msg} ({t:.2} s)", i + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {msg} ({t:.2} s)", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
