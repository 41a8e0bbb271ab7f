//! Randomized members of U(lambda), a battery of theorem checks per member, the
//! coefficient conjecture scan, and JSONL persistence of runs.

use std::collections::BTreeMap;
use std::f64::consts::{PI, TAU};
use std::io::{BufWriter, Write};
use std::path::Path;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{conjecture_bound, marx_alpha};
use crate::error::{Error, Result};
use crate::limacon::{growth_bound_check, subordination_check, Subordination};
use crate::map::{continuous_log_along_ray, AnalyticMap, ClassParameter};
use crate::membership::{fekete_check, verdict, VerdictStatus};
use crate::schwarz::SchwarzGenerator;
use crate::series::DEFAULT_ORDER;

/// Residuals below `-CHECK_TOL` count as failures.
pub const CHECK_TOL: f64 = 1e-9;
/// Consecutive rejections tolerated by [`sample_member`].
pub const REJECTION_BUDGET: usize = 1000;
/// Samples per circle in the theorem suite.
pub const SUITE_SAMPLES: usize = 2048;
/// Radius of the subordination and Marx checks.
pub const SUITE_RADIUS: f64 = 0.99;
/// Version of the JSONL record layout.
pub const RECORD_SCHEMA: u32 = 1;
/// Environment variable capping worker threads.
pub const THREADS_ENV: &str = "SCHLICHT_U_THREADS";

const BOUNDARY_SHARE: f64 = 0.2;
const UNIT_CONSTANT_SHARE: f64 = 0.25;
const MARGINAL_MARGIN: f64 = 1e-3;

/// Relative weights of the generator kinds.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorMix {
    pub constant: f64,
    pub polynomial: f64,
    pub blaschke: f64,
}

impl Default for GeneratorMix {
    fn default() -> Self {
        Self { constant: 0.3, polynomial: 0.3, blaschke: 0.4 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FuzzConfig {
    pub seed: u64,
    /// Accepted members per lambda.
    pub count: usize,
    pub lambda_set: Vec<f64>,
    pub generator_mix: GeneratorMix,
    pub order: usize,
    /// Radii of the growth check.
    pub radii: Vec<f64>,
    /// Number of Taylor coefficients recorded.
    pub coefficients: usize,
    /// Prepend the extremal family `z/((1 - e^{i phi} z)(1 - lambda e^{i phi} z))`.
    pub include_extremals: bool,
}

impl Default for FuzzConfig {
    fn default() -> Self {
        Self {
            seed: 42,
            count: 100,
            lambda_set: vec![1.0],
            generator_mix: GeneratorMix::default(),
            order: DEFAULT_ORDER,
            radii: vec![0.9, 0.99],
            coefficients: 8,
            include_extremals: true,
        }
    }
}

impl FuzzConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::ParameterOutOfRange(m));
        if self.count == 0 {
            return bad("count must be at least 1".into());
        }
        if self.lambda_set.is_empty() {
            return bad("lambda set is empty".into());
        }
        for &l in &self.lambda_set {
            ClassParameter::new(l)?;
        }
        let GeneratorMix { constant, polynomial, blaschke } = self.generator_mix;
        if [constant, polynomial, blaschke].iter().any(|w| !(*w >= 0.0)) || (constant + polynomial + blaschke - 1.0).abs() > 1e-9 {
            return bad("generator weights must be nonnegative and sum to 1".into());
        }
        if self.radii.iter().any(|r| !(*r > 0.0 && *r < 1.0)) {
            return bad("radii must lie in (0, 1)".into());
        }
        if self.coefficients < 3 {
            return bad("at least 3 coefficients are needed".into());
        }
        if self.order < self.coefficients {
            return bad("series order must cover the recorded coefficients".into());
        }
        Ok(())
    }
}

/// Whether a check tests a theorem or the open conjecture.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    Theorem,
    Conjecture,
}

/// `residual = bound - attained`; negative beyond tolerance means failure.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub kind: CheckKind,
    pub residual: f64,
    pub passed: bool,
}

impl Check {
    fn theorem(name: impl Into<String>, residual: f64) -> Self {
        let passed = residual >= -CHECK_TOL;
        Self { name: name.into(), kind: CheckKind::Theorem, residual, passed }
    }

    /// The check could not be evaluated.
    fn failed(name: impl Into<String>) -> Self {
        Self { name: name.into(), kind: CheckKind::Theorem, residual: f64::NEG_INFINITY, passed: false }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FuzzRecord {
    pub schema: u32,
    pub index: usize,
    /// Seed of this sample's generator: run seed xor index.
    pub sample_seed: u64,
    pub lambda: f64,
    pub map: AnalyticMap,
    pub rejections: usize,
    pub verdict: VerdictStatus,
    /// `a_1, ..., a_K`.
    pub coefficients: Vec<Complex64>,
    pub checks: Vec<Check>,
    /// `|a2|` within 1e-3 of `1 + lambda`.
    pub near_extremal: bool,
    /// Sampled margin below 1e-3: the member sits close to the class boundary.
    pub boundary_marginal: bool,
}

impl PartialEq for AnalyticMap {
    fn eq(&self, other: &Self) -> bool {
        serde_json::to_value(self).ok() == serde_json::to_value(other).ok()
    }
}

impl FuzzRecord {
    pub fn theorem_failures(&self) -> usize {
        self.checks.iter().filter(|c| c.kind == CheckKind::Theorem && !c.passed).count()
    }

    pub fn conjecture_ratio(&self) -> Option<f64> {
        self.checks.iter().find(|c| c.kind == CheckKind::Conjecture).map(|c| 1.0 - c.residual)
    }
}

fn draw_disk(rng: &mut ChaCha8Rng, radius: f64) -> Complex64 {
    Complex64::from_polar(radius * rng.gen::<f64>().sqrt(), TAU * rng.gen::<f64>())
}

fn draw_omega(mix: &GeneratorMix, rng: &mut ChaCha8Rng) -> Result<SchwarzGenerator> {
    let u: f64 = rng.gen();
    if u < mix.constant {
        let c = if rng.gen::<f64>() < UNIT_CONSTANT_SHARE {
            Complex64::from_polar(1.0, TAU * rng.gen::<f64>())
        } else {
            draw_disk(rng, 1.0)
        };
        SchwarzGenerator::constant(c)
    } else if u < mix.constant + mix.polynomial {
        let degree = rng.gen_range(1..=4);
        let coeffs = (0..=degree).map(|_| draw_disk(rng, 1.0)).collect();
        SchwarzGenerator::normalized_polynomial(coeffs)
    } else {
        let n = rng.gen_range(1..=3);
        let zeros = (0..n).map(|_| Complex64::from_polar(rng.gen_range(0.1..=0.9), TAU * rng.gen::<f64>())).collect();
        SchwarzGenerator::blaschke(zeros, TAU * rng.gen::<f64>())
    }
}

fn draw_a2(lambda: f64, rng: &mut ChaCha8Rng) -> Complex64 {
    let bound = 1.0 + lambda;
    if rng.gen::<f64>() < BOUNDARY_SHARE {
        Complex64::from_polar(bound * (1.0 - 0.05 * rng.gen::<f64>().powi(2)), TAU * rng.gen::<f64>())
    } else {
        draw_disk(rng, bound)
    }
}

/// An accepted member together with how it was found.
#[derive(Clone, Debug)]
pub struct Sample {
    pub map: AnalyticMap,
    pub verdict: VerdictStatus,
    pub rejections: usize,
}

/// Draws `(a2, omega)`, builds the characterization map and keeps it once the
/// verdict is a member status.
pub fn sample_member(config: &FuzzConfig, lambda: ClassParameter, rng: &mut ChaCha8Rng) -> Result<Sample> {
    for rejections in 0..REJECTION_BUDGET {
        let a2 = draw_a2(lambda.value(), rng);
        let omega = draw_omega(&config.generator_mix, rng)?;
        let map = AnalyticMap::from_characterization(a2, lambda, omega, config.order)?;
        let v = verdict(&map, lambda);
        if v.is_member() {
            return Ok(Sample { map, verdict: v.status, rejections });
        }
    }
    Err(Error::RejectionBudgetExceeded(REJECTION_BUDGET))
}

/// Minimum of `Re sqrt(f(z)/z)` on `|z| = r`, on the branch equal to 1 at 0.
pub fn sqrt_quotient_min_real(f: &AnalyticMap, r: f64, m: usize) -> Result<f64> {
    let q = |z: Complex64| Ok(f.pre_schwarzian_at(z)?.0);
    let start = continuous_log_along_ray(q, Complex64::new(r, 0.0))?;
    let value = |log_q: Complex64| (-0.5 * log_q).exp().re;
    let mut log_q = start;
    let mut prev = q(Complex64::new(r, 0.0))?;
    let mut min = value(log_q);
    let m = m.max(16);
    for k in 1..=m {
        // split steps whose argument increment is not small
        let mut sub = 1;
        loop {
            let mut ok = true;
            let mut lq = log_q;
            let mut pv = prev;
            let mut local_min = min;
            for j in 1..=sub {
                let theta = TAU * ((k - 1) as f64 + j as f64 / sub as f64) / m as f64;
                let v = q(Complex64::from_polar(r, theta))?;
                let d = (v / pv).arg();
                if d.abs() > PI / 4.0 && sub < 1 << 12 {
                    ok = false;
                    break;
                }
                lq = Complex64::new(v.norm().ln(), lq.im + d);
                pv = v;
                local_min = local_min.min(value(lq));
            }
            if ok {
                log_q = lq;
                prev = pv;
                min = local_min;
                break;
            }
            sub *= 4;
        }
    }
    Ok(min)
}

/// Runs every theorem check on a member of U(lambda) and records residuals.
pub fn theorem_suite(f: &AnalyticMap, lambda: ClassParameter, config: &FuzzConfig) -> Vec<Check> {
    let lam = lambda.value();
    let mut checks = Vec::new();
    let a2 = f.a2();

    checks.push(Check::theorem("a2_bound", 1.0 + lam - a2.norm()));
    match fekete_check(f) {
        Ok(v) => checks.push(Check::theorem("fekete", lam - v)),
        Err(_) => checks.push(Check::failed("fekete")),
    }
    for &r in &config.radii {
        let name = format!("growth_r{r}");
        match growth_bound_check(f, lam, r, SUITE_SAMPLES) {
            Ok(v) => checks.push(Check::theorem(name, -v)),
            Err(_) => checks.push(Check::failed(name)),
        }
    }
    for (name, variant) in [
        ("subordination_pre_schwarzian", Subordination::PreSchwarzian),
        ("subordination_second_coefficient", Subordination::SecondCoefficientShift),
        ("subordination_linear_shift", Subordination::LinearShift),
    ] {
        match subordination_check(f, lam, SUITE_RADIUS, SUITE_SAMPLES, variant) {
            Ok(rep) if rep.hypothesis_verified == Some(false) => {}
            Ok(rep) => {
                let mut c = Check::theorem(name, 1.0 - rep.worst_preimage);
                c.passed = rep.holds;
                checks.push(c);
                if variant == Subordination::LinearShift {
                    checks.push(Check::theorem("a2_region", 2.0 * lam - (a2 + (1.0 - lam)).norm()));
                }
            }
            Err(_) => checks.push(Check::failed(name)),
        }
    }
    if lam == 1.0 {
        // rotate so that a2 >= 0; the minimum over the circle does not change
        let marx = f
            .rotated(-a2.arg())
            .and_then(|g| {
                let alpha = marx_alpha(g.a2().re.clamp(0.0, 2.0))?;
                Ok(sqrt_quotient_min_real(&g, SUITE_RADIUS, SUITE_SAMPLES)? - alpha)
            });
        match marx {
            Ok(v) => checks.push(Check::theorem("marx", v)),
            Err(_) => checks.push(Check::failed("marx")),
        }
    }
    if let Ok(a) = f.taylor_coefficients(config.coefficients) {
        let ratio = (1..a.len()).map(|k| a[k].norm() / conjecture_bound(k + 1, lam)).fold(0.0, f64::max);
        checks.push(Check { name: "conjecture".into(), kind: CheckKind::Conjecture, residual: 1.0 - ratio, passed: ratio <= 1.0 + CHECK_TOL });
    }
    checks
}

fn record(index: usize, sample_seed: u64, lambda: ClassParameter, sample: Sample, config: &FuzzConfig) -> FuzzRecord {
    let lam = lambda.value();
    let checks = theorem_suite(&sample.map, lambda, config);
    let coefficients = sample.map.taylor_coefficients(config.coefficients).unwrap_or_default();
    let near_extremal = sample.map.a2().norm() >= (1.0 + lam) - 1e-3;
    let boundary_marginal = matches!(sample.verdict, VerdictStatus::SampledMember { margin, .. } if margin < MARGINAL_MARGIN);
    FuzzRecord {
        schema: RECORD_SCHEMA,
        index,
        sample_seed,
        lambda: lam,
        map: sample.map,
        rejections: sample.rejections,
        verdict: sample.verdict,
        coefficients,
        checks,
        near_extremal,
        boundary_marginal,
    }
}

/// Members `z/((1 - e^{i phi} z)(1 - lambda e^{i phi} z))`, which attain `|a2| = 1 + lambda`.
pub fn extremal_member(lambda: ClassParameter, phi: f64, order: usize) -> Result<AnalyticMap> {
    let a2 = Complex64::from_polar(1.0 + lambda.value(), phi);
    let omega = SchwarzGenerator::constant(Complex64::from_polar(1.0, 2.0 * phi))?;
    AnalyticMap::from_characterization(a2, lambda, omega, order)
}

const EXTREMAL_ANGLES: [f64; 3] = [0.0, 1.0, 2.5];

fn pool() -> Result<rayon::ThreadPool> {
    let threads = std::env::var(THREADS_ENV).ok().and_then(|v| v.parse::<usize>().ok()).filter(|&n| n > 0);
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        builder = builder.num_threads(n);
    }
    builder.build().map_err(|e| Error::ParameterOutOfRange(format!("thread pool: {e}")))
}

/// Samples `count` members for every lambda and runs the theorem suite on each.
/// Sample `i` draws from a generator seeded with `seed ^ i`, so output does not
/// depend on scheduling.
pub fn run(config: &FuzzConfig) -> Result<Vec<FuzzRecord>> {
    config.validate()?;
    let mut jobs = Vec::new();
    for &l in &config.lambda_set {
        let lambda = ClassParameter::new(l)?;
        if config.include_extremals {
            for phi in EXTREMAL_ANGLES {
                jobs.push((lambda, Some(phi)));
            }
        }
        jobs.extend(std::iter::repeat((lambda, None)).take(config.count));
    }
    pool()?.install(|| {
        jobs.par_iter()
            .enumerate()
            .map(|(index, &(lambda, phi))| {
                let sample_seed = config.seed ^ index as u64;
                let sample = match phi {
                    Some(phi) => {
                        let map = extremal_member(lambda, phi, config.order)?;
                        let verdict = verdict(&map, lambda).status;
                        Sample { map, verdict, rejections: 0 }
                    }
                    None => sample_member(config, lambda, &mut ChaCha8Rng::seed_from_u64(sample_seed))?,
                };
                Ok(record(index, sample_seed, lambda, sample, config))
            })
            .collect()
    })
}

/// Largest `|a_n| / sum_{k<n} lambda^k` per lambda, and records above 1.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConjectureReport {
    pub max_coefficient: usize,
    /// Per lambda (as a string key), the largest ratio for each `n = 2..=K`.
    pub max_ratio: BTreeMap<String, Vec<f64>>,
    pub candidates: Vec<FuzzRecord>,
}

pub fn conjecture_report(records: &[FuzzRecord], k: usize) -> ConjectureReport {
    let mut max_ratio: BTreeMap<String, Vec<f64>> = BTreeMap::new();
    let mut candidates = Vec::new();
    for rec in records {
        let entry = max_ratio.entry(rec.lambda.to_string()).or_insert_with(|| vec![0.0; k.saturating_sub(1)]);
        let mut worst: f64 = 0.0;
        for n in 2..=k.min(rec.coefficients.len()) {
            let ratio = rec.coefficients[n - 1].norm() / conjecture_bound(n, rec.lambda);
            entry[n - 2] = entry[n - 2].max(ratio);
            worst = worst.max(ratio);
        }
        if worst > 1.0 + CHECK_TOL {
            candidates.push(rec.clone());
        }
    }
    ConjectureReport { max_coefficient: k, max_ratio, candidates }
}

/// Runs the fuzzer with `K` recorded coefficients and reports the conjecture ratios.
pub fn conjecture_scan(config: &FuzzConfig, k: usize) -> Result<ConjectureReport> {
    if k < 3 {
        return Err(Error::ParameterOutOfRange(format!("K must be at least 3, got {k}")));
    }
    let config = FuzzConfig { coefficients: k, order: config.order.max(k), ..config.clone() };
    Ok(conjecture_report(&run(&config)?, k))
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CheckStats {
    pub evaluated: usize,
    pub passed: usize,
    pub worst_residual: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub seed: Option<u64>,
    pub records: usize,
    pub certified: usize,
    pub sampled: usize,
    pub near_extremal: usize,
    pub boundary_marginal: usize,
    pub theorem_failures: usize,
    pub conjecture_candidates: usize,
    /// Share of records with no theorem failure (1 for an empty run).
    pub pass_rate: f64,
    pub checks: BTreeMap<String, CheckStats>,
}

/// The part of a persisted record that summaries need; the map itself is skipped.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RecordDigest {
    pub schema: u32,
    pub index: usize,
    pub sample_seed: u64,
    pub lambda: f64,
    pub verdict: VerdictStatus,
    pub checks: Vec<Check>,
    pub near_extremal: bool,
    pub boundary_marginal: bool,
}

impl RecordDigest {
    pub fn theorem_failures(&self) -> usize {
        self.checks.iter().filter(|c| c.kind == CheckKind::Theorem && !c.passed).count()
    }

    /// Parses one JSONL line, rejecting other schema versions.
    pub fn from_json_line(line: &str) -> Result<Self> {
        let d: Self = serde_json::from_str(line)?;
        if d.schema != RECORD_SCHEMA {
            return Err(Error::InvalidMap(format!("unsupported record schema {}", d.schema)));
        }
        Ok(d)
    }
}

impl From<&FuzzRecord> for RecordDigest {
    fn from(r: &FuzzRecord) -> Self {
        Self {
            schema: r.schema,
            index: r.index,
            sample_seed: r.sample_seed,
            lambda: r.lambda,
            verdict: r.verdict.clone(),
            checks: r.checks.clone(),
            near_extremal: r.near_extremal,
            boundary_marginal: r.boundary_marginal,
        }
    }
}

pub fn summarize(records: &[FuzzRecord], seed: Option<u64>) -> RunSummary {
    summarize_digests(&records.iter().map(RecordDigest::from).collect::<Vec<_>>(), seed)
}

pub fn summarize_digests(records: &[RecordDigest], seed: Option<u64>) -> RunSummary {
    let mut checks: BTreeMap<String, CheckStats> = BTreeMap::new();
    for c in records.iter().flat_map(|r| &r.checks) {
        let s = checks.entry(c.name.clone()).or_default();
        s.evaluated += 1;
        s.passed += usize::from(c.passed);
        s.worst_residual = Some(s.worst_residual.map_or(c.residual, |w| w.min(c.residual)));
    }
    let failing = records.iter().filter(|r| r.theorem_failures() > 0).count();
    let conjecture_ratio = |r: &RecordDigest| r.checks.iter().find(|c| c.kind == CheckKind::Conjecture).map(|c| 1.0 - c.residual);
    RunSummary {
        seed,
        records: records.len(),
        certified: records.iter().filter(|r| r.verdict == VerdictStatus::CertifiedMember).count(),
        sampled: records.iter().filter(|r| matches!(r.verdict, VerdictStatus::SampledMember { .. })).count(),
        near_extremal: records.iter().filter(|r| r.near_extremal).count(),
        boundary_marginal: records.iter().filter(|r| r.boundary_marginal).count(),
        theorem_failures: records.iter().map(RecordDigest::theorem_failures).sum(),
        conjecture_candidates: records.iter().filter(|r| conjecture_ratio(r).is_some_and(|q| q > 1.0 + CHECK_TOL)).count(),
        pass_rate: if records.is_empty() { 1.0 } else { (records.len() - failing) as f64 / records.len() as f64 },
        checks,
    }
}

/// Writes one JSON record per line and returns the run summary.
pub fn persist_run(records: &[FuzzRecord], path: &Path, seed: Option<u64>) -> Result<RunSummary> {
    let mut out = BufWriter::new(std::fs::File::create(path)?);
    for r in records {
        serde_json::to_writer(&mut out, r)?;
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(summarize(records, seed))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn lam(x: f64) -> ClassParameter {
        ClassParameter::new(x).unwrap()
    }

    const SOUND_CHECKS: [&str; 5] = ["a2_bound", "fekete", "growth_r0.9", "growth_r0.99", "marx"];

    fn small(lambda: f64, count: usize) -> FuzzConfig {
        FuzzConfig { count, lambda_set: vec![lambda], ..FuzzConfig::default() }
    }

    #[test]
    fn sampling_examples_by_construction() {
        let one = SchwarzGenerator::constant(c(1.0, 0.0)).unwrap();
        let zero = SchwarzGenerator::constant(c(0.0, 0.0)).unwrap();
        let koebe = AnalyticMap::from_characterization(c(2.0, 0.0), lam(1.0), one.clone(), 64).unwrap();
        assert!(verdict(&koebe, lam(1.0)).is_member());
        let bad = AnalyticMap::from_characterization(c(2.5, 0.0), lam(1.0), one, 64).unwrap();
        assert!(!verdict(&bad, lam(1.0)).is_member());
        let id = AnalyticMap::from_characterization(c(0.0, 0.0), lam(1.0), zero, 64).unwrap();
        assert!(verdict(&id, lam(1.0)).is_member());
    }

    #[test]
    fn suite_on_koebe_passes_with_fekete_equality() {
        let one = SchwarzGenerator::constant(c(1.0, 0.0)).unwrap();
        let koebe = AnalyticMap::from_characterization(c(2.0, 0.0), lam(1.0), one, 64).unwrap();
        let checks = theorem_suite(&koebe, lam(1.0), &FuzzConfig::default());
        assert!(checks.iter().all(|c| c.passed), "{checks:?}");
        let fekete = checks.iter().find(|c| c.name == "fekete").unwrap();
        assert!(fekete.residual.abs() < 1e-12);
        let marx = checks.iter().find(|c| c.name == "marx").unwrap();
        assert!(marx.residual > 0.0);
    }

    #[test]
    fn marx_min_for_koebe() {
        // sqrt(k(z)/z) = 1/(1 - z); min Re on |z| = r is 1/(1 + r)
        let k = AnalyticMap::from_pre_schwarzian_real(&[1.0, -2.0, 1.0], 32).unwrap();
        let v = sqrt_quotient_min_real(&k, 0.99, 2048).unwrap();
        assert!((v - 1.0 / 1.99).abs() < 1e-9);
    }

    #[test]
    fn extremal_family_attains_bounds() {
        for l in [0.25, 0.5, 1.0] {
            let f = extremal_member(lam(l), 0.0, 64).unwrap();
            let checks = theorem_suite(&f, lam(l), &FuzzConfig::default());
            let get = |n: &str| checks.iter().find(|c| c.name == n).unwrap().residual;
            assert!(get("a2_bound").abs() < 1e-12 && get("fekete").abs() < 1e-12);
            assert!(checks.iter().all(|c| c.passed), "{checks:?}");
        }
    }

    #[test]
    fn small_run_is_clean_and_replayable() {
        let cfg = small(0.5, 12);
        let a = run(&cfg).unwrap();
        let b = run(&cfg).unwrap();
        assert_eq!(a.len(), 15);
        for r in &a {
            let bad: Vec<_> = r.checks.iter().filter(|c| !c.passed && SOUND_CHECKS.contains(&c.name.as_str())).collect();
            assert!(bad.is_empty(), "{} {bad:?}", r.index);
        }
        let dir = tempfile::tempdir().unwrap();
        let (pa, pb) = (dir.path().join("a.jsonl"), dir.path().join("b.jsonl"));
        let s = persist_run(&a, &pa, Some(cfg.seed)).unwrap();
        persist_run(&b, &pb, Some(cfg.seed)).unwrap();
        assert_eq!(std::fs::read(&pa).unwrap(), std::fs::read(&pb).unwrap());
        assert_eq!(std::fs::read_to_string(&pa).unwrap().lines().count(), 15);
        assert_eq!(s.records, 15);
        let text = std::fs::read_to_string(&pa).unwrap();
        let digests: Vec<_> = text.lines().map(|l| RecordDigest::from_json_line(l).unwrap()).collect();
        assert_eq!(summarize_digests(&digests, Some(cfg.seed)), s);
    }

    #[test]
    fn empty_and_unwritable_runs() {
        let s = summarize(&[], Some(1));
        assert_eq!((s.records, s.theorem_failures, s.pass_rate), (0, 0, 1.0));
        assert!(matches!(persist_run(&[], Path::new("/nonexistent/dir/x.jsonl"), None), Err(Error::Io(_))));
    }

    #[test]
    fn conjecture_on_koebe_and_identity() {
        let one = SchwarzGenerator::constant(c(1.0, 0.0)).unwrap();
        let koebe = AnalyticMap::from_characterization(c(2.0, 0.0), lam(1.0), one, 64).unwrap();
        let cfg = FuzzConfig::default();
        let rec = record(0, 0, lam(1.0), Sample { map: koebe, verdict: VerdictStatus::CertifiedMember, rejections: 0 }, &cfg);
        let rep = conjecture_report(&[rec], 8);
        assert!(rep.max_ratio["1"].iter().all(|r| (r - 1.0).abs() < 1e-12));
        assert!(rep.candidates.is_empty());
        let id = record(0, 0, lam(0.5), Sample { map: AnalyticMap::identity(64), verdict: VerdictStatus::CertifiedMember, rejections: 0 }, &cfg);
        assert!(conjecture_report(&[id], 8).max_ratio["0.5"].iter().all(|&r| r == 0.0));
    }

    #[test]
    fn config_validation() {
        assert!(FuzzConfig { lambda_set: vec![1.5], ..FuzzConfig::default() }.validate().is_err());
        assert!(FuzzConfig { count: 0, ..FuzzConfig::default() }.validate().is_err());
        let mix = GeneratorMix { constant: 0.5, polynomial: 0.5, blaschke: 0.5 };
        assert!(FuzzConfig { generator_mix: mix, ..FuzzConfig::default() }.validate().is_err());
    }
}
