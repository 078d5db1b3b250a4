//! Verification suites over parameter grids, producing one [`CheckRecord`] per check.
//!
//! Jobs run on a bounded thread pool; records come back in job order, so a given
//! configuration always yields the same report bytes.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::config::VerifyConfig;
use crate::elliptic::complete_k;
use crate::error::{Error, Result};
use crate::landen::LandenMap;
use crate::spectral::PeriodicGrid;
use crate::verify;
use crate::waves::{DnWaveParams, PlusMinusWave, PmWaveParams, Sign, SuperposedWave, VelocityScaling, WaveFamily};

/// `K(1/2)` to 20 digits.
pub const K_HALF_REFERENCE: f64 = 1.854_074_677_301_371_918_4;

/// Upper end of the parameter range for the random Jacobi invariant sweep.
const RANDOM_M_MAX: f64 = 0.99;
const RANDOM_X_MAX: f64 = 20.0;

/// Samples of `u` used to measure the spread of the cyclic constants.
const CYCLIC_SPREAD_POINTS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Identities,
    Kdv,
    Equivalence,
    Limits,
    All,
}

impl Suite {
    fn includes(self, other: Suite) -> bool {
        self == Suite::All || self == other
    }
}

/// One line of the JSONL report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub check: String,
    pub params: BTreeMap<String, Value>,
    pub metric: f64,
    pub tol: f64,
    pub pass: bool,
}

impl CheckRecord {
    /// Passes when `metric ≤ tol`.
    pub fn upper(check: &str, params: BTreeMap<String, Value>, metric: f64, tol: f64) -> Self {
        CheckRecord { check: check.into(), params, metric, tol, pass: metric <= tol }
    }

    /// Passes when `metric > tol`.
    pub fn lower(check: &str, mut params: BTreeMap<String, Value>, metric: f64, tol: f64) -> Self {
        params.insert("bound".into(), json!("lower"));
        CheckRecord { check: check.into(), params, metric, tol, pass: metric > tol }
    }

    fn failed(check: &str, mut params: BTreeMap<String, Value>, tol: f64, err: &Error) -> Self {
        params.insert("error".into(), json!(err.to_string()));
        CheckRecord { check: check.into(), params, metric: f64::NAN, tol, pass: false }
    }

    fn from_result(check: &str, params: BTreeMap<String, Value>, metric: Result<f64>, tol: f64) -> Self {
        match metric {
            Ok(v) => Self::upper(check, params, v, tol),
            Err(e) => Self::failed(check, params, tol, &e),
        }
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("records are always serializable")
    }
}

macro_rules! params {
    ($($k:expr => $v:expr),* $(,)?) => {{
        let mut map = BTreeMap::new();
        $(map.insert($k.to_string(), json!($v));)*
        map
    }};
}

type Job<'a> = Box<dyn Fn() -> Vec<CheckRecord> + Send + Sync + 'a>;

fn identity_jobs(cfg: &VerifyConfig) -> Vec<Job<'_>> {
    let tol = cfg.tolerances;
    let mut jobs: Vec<Job> = Vec::new();
    jobs.push(Box::new(move || {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let pairs: Vec<(f64, f64)> = (0..cfg.random_samples)
            .map(|_| (rng.gen_range(-RANDOM_X_MAX..=RANDOM_X_MAX), rng.gen_range(0.0..=RANDOM_M_MAX)))
            .collect();
        let p = params!("samples" => cfg.random_samples, "seed" => cfg.seed, "m_max" => RANDOM_M_MAX, "x_max" => RANDOM_X_MAX);
        vec![CheckRecord::from_result("jacobi_invariants", p, verify::jacobi_invariant_defect(&pairs), tol.jacobi_invariants)]
    }));
    jobs.push(Box::new(move || {
        let metric = complete_k(0.5).map(|k| (k - K_HALF_REFERENCE).abs() / K_HALF_REFERENCE);
        vec![CheckRecord::from_result("k_reference", params!("m" => 0.5), metric, tol.k_reference)]
    }));
    for &m in &cfg.identity_m {
        jobs.push(Box::new(move || {
            let p = params!("m" => m, "p" => 2);
            let metric = LandenMap::new(2, m).map(|map| {
                let kp = (1.0 - m).sqrt();
                let gamma = 1.0 / (1.0 + kp);
                let m_tilde = ((1.0 - kp) / (1.0 + kp)).powi(2);
                (map.gamma() - gamma).abs().max((map.m_tilde() - m_tilde).abs())
            });
            vec![CheckRecord::from_result("landen_p2_closed_form", p, metric, tol.landen_closed_form)]
        }));
    }
    for &p in &cfg.identity_p {
        for &m in &cfg.identity_m {
            jobs.push(Box::new(move || {
                let base = params!("p" => p, "m" => m, "points" => cfg.identity_points);
                let map = match LandenMap::new(p, m) {
                    Ok(map) => map,
                    Err(e) => {
                        return ["landen_dn", "landen_dn2"]
                            .iter()
                            .map(|c| CheckRecord::failed(c, base.clone(), tol.landen_identity, &e))
                            .collect()
                    }
                };
                let mut out = vec![
                    CheckRecord::from_result(
                        "landen_dn",
                        base.clone(),
                        verify::landen_dn_deviation(&map, cfg.identity_points),
                        tol.landen_identity,
                    ),
                    CheckRecord::from_result(
                        "landen_dn2",
                        base,
                        verify::landen_dn2_deviation(&map, cfg.identity_points),
                        tol.landen_identity,
                    ),
                ];
                if p >= 2 {
                    let pm = params!("p" => p, "m" => m);
                    out.push(CheckRecord::from_result(
                        "cyclic_spread",
                        params!("p" => p, "m" => m, "points" => CYCLIC_SPREAD_POINTS),
                        verify::cyclic_constant_spread(&map, CYCLIC_SPREAD_POINTS),
                        tol.cyclic_spread,
                    ));
                    out.push(CheckRecord::upper(
                        "cyclic_symmetry",
                        pm.clone(),
                        verify::cyclic_symmetry_defect(&map),
                        tol.cyclic_symmetry,
                    ));
                    let ratio = map.m_tilde() / m;
                    let mut rec = CheckRecord::upper("m_tilde_range", pm, ratio, 1.0);
                    rec.pass = ratio > 0.0 && ratio < 1.0;
                    out.push(rec);
                }
                out
            }));
        }
    }
    jobs
}

fn residual_record(wave: &dyn WaveFamily, points: usize, check: &str, mut p: BTreeMap<String, Value>, tol: f64) -> CheckRecord {
    let period = wave.spatial_period().unwrap_or(f64::NAN);
    let report = PeriodicGrid::new(period, points).and_then(|grid| verify::kdv_residual(wave, &grid, 0.0));
    match report {
        Ok(r) => {
            p.insert("velocity".into(), json!(r.velocity));
            p.insert("aliasing".into(), json!(r.aliasing_warning));
            CheckRecord::upper(check, p, r.normalized, tol)
        }
        Err(e) => CheckRecord::failed(check, p, tol, &e),
    }
}

fn kdv_jobs(cfg: &VerifyConfig) -> Vec<Job<'_>> {
    let tol = cfg.tolerances;
    let mut jobs: Vec<Job> = Vec::new();
    for &p in &cfg.wave_p {
        for &m in &cfg.wave_m {
            jobs.push(Box::new(move || {
                let mut out = Vec::new();
                for &(alpha, beta) in &cfg.wave_params {
                    let check = if p == 1 { "residual_u1" } else { "residual_up" };
                    let base = params!("p" => p, "m" => m, "alpha" => alpha, "beta" => beta, "points" => cfg.grid_points);
                    let wave = DnWaveParams::new(alpha, beta, m, p).and_then(SuperposedWave::new);
                    out.push(match wave {
                        Ok(w) => residual_record(&w, cfg.grid_points, check, base, tol.residual),
                        Err(e) => CheckRecord::failed(check, base, tol.residual, &e),
                    });
                }
                if p >= 2 {
                    let metric = LandenMap::new(p, m).and_then(|map| {
                        let fitted = verify::velocity_constant_from_residual(&map, cfg.grid_points)?;
                        Ok((map.velocity_constant() - fitted).abs())
                    });
                    out.push(CheckRecord::from_result(
                        "velocity_constant_agreement",
                        params!("p" => p, "m" => m, "points" => cfg.grid_points),
                        metric,
                        tol.velocity_constant,
                    ));
                }
                out
            }));
        }
    }
    for &m in &cfg.pm_m {
        for sign in [Sign::Plus, Sign::Minus] {
            jobs.push(Box::new(move || pm_scaling_records(cfg, m, sign)));
        }
    }
    jobs
}

fn pm_scaling_records(cfg: &VerifyConfig, m: f64, sign: Sign) -> Vec<CheckRecord> {
    let tol = cfg.tolerances;
    let sign_name = match sign {
        Sign::Plus => "+",
        Sign::Minus => "-",
    };
    let base = params!("m" => m, "alpha" => cfg.pm_alpha, "sign" => sign_name, "points" => cfg.grid_points);
    let residual = |scaling| -> Result<f64> {
        let params = PmWaveParams::new(cfg.pm_alpha, m, sign)?;
        let wave = PlusMinusWave::new(params, scaling)?;
        let grid = PeriodicGrid::new(wave.spatial_period().unwrap_or(f64::NAN), cfg.grid_points)?;
        Ok(verify::kdv_residual(&wave, &grid, 0.0)?.normalized)
    };
    let (standard, as_written) = match (residual(VelocityScaling::Standard), residual(VelocityScaling::AsWritten)) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(e), _) | (_, Err(e)) => {
            return vec![
                CheckRecord::failed("upm_selected_scaling", base.clone(), tol.residual_pm, &e),
                CheckRecord::failed("upm_rejected_scaling", base, tol.pm_rejected_min, &e),
            ]
        }
    };
    let ((selected, selected_metric), (rejected, rejected_metric)) = if standard <= as_written {
        (("standard", standard), ("as_written", as_written))
    } else {
        (("as_written", as_written), ("standard", standard))
    };
    let mut sel = base.clone();
    sel.insert("scaling".into(), json!(selected));
    let mut rej = base;
    rej.insert("scaling".into(), json!(rejected));
    vec![
        CheckRecord::upper("upm_selected_scaling", sel, selected_metric, tol.residual_pm),
        CheckRecord::lower("upm_rejected_scaling", rej, rejected_metric, tol.pm_rejected_min),
    ]
}

fn equivalence_jobs(cfg: &VerifyConfig) -> Vec<Job<'_>> {
    let tol = cfg.tolerances;
    let mut jobs: Vec<Job> = Vec::new();
    for &p in &cfg.wave_p {
        for &m in &cfg.wave_m {
            jobs.push(Box::new(move || {
                let map = LandenMap::new(p, m);
                cfg.wave_params
                    .iter()
                    .map(|&(alpha, beta)| {
                        let base = params!(
                            "p" => p, "m" => m, "alpha" => alpha, "beta" => beta,
                            "times" => cfg.times.clone(), "points" => cfg.grid_points
                        );
                        let metric = map.clone().and_then(|map| {
                            let params = DnWaveParams::with_map(alpha, beta, &map)?;
                            let span = 2.0 * map.modulus().quarter_period()? / alpha;
                            let grid = PeriodicGrid::new(span, cfg.grid_points)?;
                            verify::equivalence_check(&params, &map, &grid, &cfg.times)
                        });
                        CheckRecord::from_result("equivalence", base, metric, tol.equivalence)
                    })
                    .collect()
            }));
        }
    }
    jobs
}

fn limit_jobs(cfg: &VerifyConfig) -> Vec<Job<'_>> {
    let tol = cfg.tolerances;
    cfg.soliton_params
        .iter()
        .map(|&(alpha, beta)| -> Job {
            Box::new(move || {
                let w = cfg.soliton_half_width;
                vec![
                    CheckRecord::from_result(
                        "soliton_limit",
                        params!("alpha" => alpha, "beta" => beta, "epsilon" => cfg.soliton_epsilon, "half_width" => w),
                        verify::soliton_limit_check(alpha, beta, cfg.soliton_epsilon, w),
                        tol.soliton_limit,
                    ),
                    CheckRecord::from_result(
                        "soliton_exact",
                        params!("alpha" => alpha, "beta" => beta, "epsilon" => 0.0, "half_width" => w),
                        verify::soliton_limit_check(alpha, beta, 0.0, w),
                        tol.soliton_exact,
                    ),
                ]
            })
        })
        .collect()
}

/// Runs `suite` on at most `jobs` threads; the record order depends only on `cfg`.
pub fn run_suite(suite: Suite, cfg: &VerifyConfig, jobs: usize) -> Result<Vec<CheckRecord>> {
    use rayon::prelude::*;

    let mut work: Vec<Job> = Vec::new();
    if suite.includes(Suite::Identities) {
        work.extend(identity_jobs(cfg));
    }
    if suite.includes(Suite::Kdv) {
        work.extend(kdv_jobs(cfg));
    }
    if suite.includes(Suite::Equivalence) {
        work.extend(equivalence_jobs(cfg));
    }
    if suite.includes(Suite::Limits) {
        work.extend(limit_jobs(cfg));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?;
    let records: Vec<Vec<CheckRecord>> = pool.install(|| work.par_iter().map(|job| job()).collect());
    Ok(records.into_iter().flatten().collect())
}

/// Renders records as JSON lines, each terminated by `\n`.
pub fn to_jsonl(records: &[CheckRecord]) -> String {
    records.iter().map(|r| r.to_json_line() + "\n").collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> VerifyConfig {
        VerifyConfig {
            identity_p: vec![1, 3],
            identity_m: vec![0.5],
            random_samples: 100,
            wave_p: vec![1, 2],
            wave_m: vec![0.5],
            wave_params: vec![(1.0, 0.0)],
            pm_m: vec![0.5],
            soliton_params: vec![(1.0, 0.0)],
            ..VerifyConfig::default()
        }
    }

    #[test]
    fn small_grid_passes() {
        let records = run_suite(Suite::All, &small(), 2).unwrap();
        for r in &records {
            assert!(r.pass, "{}", r.to_json_line());
        }
        let names: std::collections::BTreeSet<_> = records.iter().map(|r| r.check.as_str()).collect();
        for expected in [
            "jacobi_invariants", "k_reference", "landen_dn", "landen_dn2", "landen_p2_closed_form",
            "cyclic_spread", "cyclic_symmetry", "m_tilde_range", "residual_u1", "residual_up",
            "velocity_constant_agreement", "upm_selected_scaling", "upm_rejected_scaling",
            "equivalence", "soliton_limit", "soliton_exact",
        ] {
            assert!(names.contains(expected), "missing {expected}");
        }
    }

    #[test]
    fn suite_selection() {
        let records = run_suite(Suite::Limits, &small(), 1).unwrap();
        assert_eq!(records.len(), 2);
        assert!(records.iter().all(|r| r.check.starts_with("soliton")));
    }

    #[test]
    fn thread_count_does_not_change_output() {
        let a = to_jsonl(&run_suite(Suite::All, &small(), 1).unwrap());
        let b = to_jsonl(&run_suite(Suite::All, &small(), 4).unwrap());
        assert_eq!(a, b);
    }

    #[test]
    fn record_shape() {
        let r = CheckRecord::upper("x", params!("p" => 2), 1e-12, 1e-10);
        let v: Value = serde_json::from_str(&r.to_json_line()).unwrap();
        let keys: Vec<_> = v.as_object().unwrap().keys().cloned().collect();
        assert_eq!(keys, vec!["check", "metric", "params", "pass", "tol"]);
        assert!(r.pass);
        assert!(!CheckRecord::lower("y", BTreeMap::new(), 1e-4, 1e-3).pass);
    }

    #[test]
    fn invalid_parameters_fail_cleanly() {
        let cfg = VerifyConfig { wave_m: vec![1.5], ..small() };
        let records = run_suite(Suite::Equivalence, &cfg, 1).unwrap();
        assert!(records.iter().all(|r| !r.pass && r.params.contains_key("error")));
    }
}
