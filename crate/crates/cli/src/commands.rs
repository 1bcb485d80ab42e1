use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use vedkit_core::grassloc::{ved_with, weight_independence_check, Route, WeightVector};
use vedkit_core::stability::{fit_and_validate, FitReport, VedRow, VedTable};
use vedkit_core::{ChernMatherDegrees, Convention};
use vedkit_homotopy::edlagrange::{MetricSpec, TargetPoint};
use vedkit_homotopy::pathtrack::{ed_count, EdRun, PathStatus, TrackerConfig};

use crate::args::{Command, GlobalOpts};
use crate::error::CliError;
use crate::metric::MetricArg;
use crate::record::{CacheKey, ResultCache, RunRecord};

/// Random weight vectors compared by `ved --verify`.
pub const VERIFY_WEIGHT_TRIALS: usize = 3;

/// A finished run: the record to print and, if the run found a problem,
/// the error that decides the exit code.
#[derive(Debug)]
pub struct Outcome {
    pub record: RunRecord,
    pub failure: Option<CliError>,
}

pub struct Context {
    pub cache: ResultCache,
    pub seed: u64,
    pub verify: bool,
    pub convention: Convention,
}

impl Context {
    pub fn new(global: &GlobalOpts) -> Result<Self, CliError> {
        let cache = if global.no_cache { ResultCache::disabled() } else { ResultCache::open(&global.cache) };
        Ok(Context { cache, seed: global.seed, verify: global.verify, convention: Convention::calibrated()? })
    }

    fn key(&self, command: &str, params: &BTreeMap<String, Value>) -> CacheKey {
        CacheKey::new(command, params, self.convention.into())
    }

    fn store(&self, record: &RunRecord) {
        if let Err(e) = self.cache.append(record) {
            log::warn!("could not append to cache: {e}");
        }
    }

    /// Returns the cached record for (command, params) or computes, stores
    /// and returns a fresh one. Failed runs are never cached.
    fn cached<F>(&self, command: &str, params: BTreeMap<String, Value>, compute: F) -> Result<Outcome, CliError>
    where
        F: FnOnce() -> Result<(Value, BTreeMap<String, u64>, Option<CliError>), CliError>,
    {
        if let Some(record) = self.cache.lookup(&self.key(command, &params)) {
            log::info!("cache hit for {command}");
            return Ok(Outcome { record, failure: None });
        }
        let (results, seeds, failure) = compute()?;
        let record = RunRecord::new(command, params, results, seeds, self.convention);
        if failure.is_none() {
            self.store(&record);
        }
        Ok(Outcome { record, failure })
    }
}

pub fn run(ctx: &Context, command: &Command) -> Result<Outcome, CliError> {
    match command {
        Command::Ved { n } => cmd_ved(ctx, *n as usize),
        Command::VedTable { n_min, n_max, fit_window, holdout } => {
            cmd_ved_table(ctx, *n_min as usize, *n_max as usize, *fit_window, *holdout)
        }
        Command::EdCount { metric, trials } => cmd_ed_count(ctx, &MetricArg::parse(metric)?, *trials as usize),
        Command::Compare { seeds } => cmd_compare(ctx, *seeds as usize),
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("result types serialize")
}

fn ved_params(n: usize, verify: bool, seed: u64) -> BTreeMap<String, Value> {
    let mut p = BTreeMap::from([("n".to_string(), json!(n)), ("verify".to_string(), json!(verify))]);
    if verify {
        p.insert("seed".to_string(), json!(seed));
    }
    p
}

fn ved_results(cm: &ChernMatherDegrees) -> Value {
    json!({
        "n": cm.n,
        "m": cm.m(),
        "ved": cm.ved,
        "degs": cm.degs,
        "degree": cm.degree(),
    })
}

fn compute_ved(ctx: &Context, n: usize) -> Result<ChernMatherDegrees, CliError> {
    Ok(ved_with(n, &WeightVector::standard(n), ctx.convention, Route::A)?)
}

pub fn cmd_ved(ctx: &Context, n: usize) -> Result<Outcome, CliError> {
    let params = ved_params(n, ctx.verify, ctx.seed);
    ctx.cached("ved", params, || {
        let cm = compute_ved(ctx, n)?;
        let mut results = ved_results(&cm);
        let mut seeds = BTreeMap::new();
        let mut failure = None;
        if ctx.verify {
            let route_b = ved_with(n, &WeightVector::standard(n), ctx.convention, Route::B)?;
            let routes_agree = route_b.same_values(&cm);
            let weights_agree = weight_independence_check(n, VERIFY_WEIGHT_TRIALS, ctx.seed)?;
            results["routes_agree"] = json!(routes_agree);
            results["weight_independent"] = json!(weights_agree);
            results["verified"] = json!(routes_agree && weights_agree);
            seeds.insert("weights".to_string(), ctx.seed);
            if !routes_agree {
                failure = Some(CliError::Verification(format!("localization routes disagree for n = {n}")));
            } else if !weights_agree {
                failure = Some(CliError::Verification(format!("result depends on torus weights for n = {n}")));
            }
        }
        Ok((results, seeds, failure))
    })
}

/// vED(n) rows, reusing cached `ved` records and computing the rest in
/// parallel.
fn ved_rows(ctx: &Context, n_min: usize, n_max: usize) -> Result<BTreeMap<usize, VedRow>, CliError> {
    let mut rows = BTreeMap::new();
    let mut missing = Vec::new();
    for n in n_min..=n_max {
        let hit = ctx.cache.lookup(&ctx.key("ved", &ved_params(n, false, 0))).and_then(|rec| {
            let ved = rec.results.get("ved")?.as_i64()?;
            let degs = serde_json::from_value(rec.results.get("degs")?.clone()).ok()?;
            Some(VedRow { ved, degs })
        });
        match hit {
            Some(row) => {
                rows.insert(n, row);
            }
            None => missing.push(n),
        }
    }
    let computed = missing.par_iter().map(|&n| compute_ved(ctx, n)).collect::<Result<Vec<_>, _>>()?;
    for cm in computed {
        let record =
            RunRecord::new("ved", ved_params(cm.n, false, 0), ved_results(&cm), BTreeMap::new(), ctx.convention);
        ctx.store(&record);
        rows.insert(cm.n, VedRow { ved: cm.ved, degs: cm.degs });
    }
    Ok(rows)
}

fn fit_status(fit: &FitReport) -> &'static str {
    if fit.detected_degree.degree().is_none() {
        "not stabilized"
    } else if fit.stable {
        "stable"
    } else {
        "holdout mismatch"
    }
}

pub fn cmd_ved_table(
    ctx: &Context,
    n_min: usize,
    n_max: usize,
    fit_window: Option<(usize, usize)>,
    holdout: usize,
) -> Result<Outcome, CliError> {
    if n_min > n_max {
        return Err(CliError::Usage(format!("empty range: n-min {n_min} > n-max {n_max}")));
    }
    let mut params = BTreeMap::from([("n_min".to_string(), json!(n_min)), ("n_max".to_string(), json!(n_max))]);
    if let Some((a, b)) = fit_window {
        params.insert("fit_window".to_string(), json!([a, b]));
        params.insert("holdout".to_string(), json!(holdout));
    }
    ctx.cached("ved-table", params, || {
        let table = VedTable::new(ved_rows(ctx, n_min, n_max)?)?;
        let rows: Vec<Value> =
            table.iter().map(|(n, row)| json!({ "n": n, "ved": row.ved, "degs": row.degs })).collect();
        let mut results = json!({ "rows": rows });
        if let Some(window) = fit_window {
            let fit = fit_and_validate(&table, window, holdout)?;
            results["fit_status"] = json!(fit_status(&fit));
            results["fit"] = to_value(&fit);
        }
        Ok((results, BTreeMap::new(), None))
    })
}

/// vED(3), the upper bound for every numeric count, from the cache when
/// possible.
fn symbolic_bound(ctx: &Context) -> Result<i64, CliError> {
    let rows = ved_rows(ctx, 3, 3)?;
    Ok(rows[&3].ved)
}

#[derive(Serialize)]
struct TrialReport {
    trial: usize,
    target_seed: u64,
    tracker_seed: u64,
    target: TargetPoint,
    count: usize,
    max_residual: f64,
    paths_tracked: usize,
    status_counts: BTreeMap<PathStatus, usize>,
    /// Complex numbers as [re, im] pairs.
    gamma: [f64; 2],
    solutions: Vec<Vec<[f64; 2]>>,
}

fn trial_report(trial: usize, target_seed: u64, tracker_seed: u64, target: TargetPoint, run: EdRun) -> TrialReport {
    TrialReport {
        trial,
        target_seed,
        tracker_seed,
        target,
        count: run.solutions.count,
        max_residual: run.solutions.max_residual,
        paths_tracked: run.solutions.paths_tracked,
        status_counts: run.solutions.status_counts,
        gamma: [run.gamma.re, run.gamma.im],
        solutions: run.solutions.solutions.iter().map(|s| s.iter().map(|z| [z.re, z.im]).collect()).collect(),
    }
}

/// Most frequent count; ties go to the larger count.
pub fn modal_count(counts: &[usize]) -> Option<usize> {
    let mut freq: BTreeMap<usize, usize> = BTreeMap::new();
    for &c in counts {
        *freq.entry(c).or_insert(0) += 1;
    }
    freq.into_iter().max_by_key(|&(c, f)| (f, c)).map(|(c, _)| c)
}

/// Seeded trials of one metric lane. The master RNG hands out one target
/// seed and one tracker seed per trial.
fn run_trials(metric: &MetricSpec, trials: usize, rng: &mut ChaCha8Rng) -> Result<Vec<TrialReport>, CliError> {
    let cfg = TrackerConfig::default();
    (0..trials)
        .map(|trial| {
            let target_seed: u64 = rng.gen();
            let tracker_seed: u64 = rng.gen();
            let target = TargetPoint::random(target_seed);
            let run = ed_count(metric, &target, &cfg, tracker_seed)?;
            log::info!("trial {trial}: {} critical points", run.solutions.count);
            Ok(trial_report(trial, target_seed, tracker_seed, target, run))
        })
        .collect()
}

fn bound_violation(lane: &str, reports: &[TrialReport], bound: i64) -> Option<CliError> {
    reports.iter().find(|r| r.count as i64 > bound).map(|r| {
        CliError::Invariant(format!(
            "{lane} trial {} found {} critical points, above vED(3) = {bound}",
            r.trial, r.count
        ))
    })
}

pub fn cmd_ed_count(ctx: &Context, metric: &MetricArg, trials: usize) -> Result<Outcome, CliError> {
    let params = BTreeMap::from([
        ("metric".to_string(), metric.canonical()),
        ("trials".to_string(), json!(trials)),
        ("seed".to_string(), json!(ctx.seed)),
    ]);
    ctx.cached("ed-count", params, || {
        let bound = symbolic_bound(ctx)?;
        let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
        let metric_seed: u64 = rng.gen();
        let spec = metric.resolve(metric_seed)?;
        let reports = run_trials(&spec, trials, &mut rng)?;
        let counts: Vec<usize> = reports.iter().map(|r| r.count).collect();
        let modal = modal_count(&counts);
        let failure = bound_violation("ed-count", &reports, bound);
        let results = json!({
            "metric": spec,
            "tracker": TrackerConfig::default(),
            "counts": counts,
            "modal_count": modal,
            "max_residual": reports.iter().map(|r| r.max_residual).fold(0.0, f64::max),
            "ved_bound": bound,
            "within_bound": failure.is_none(),
            "trials": to_value(&reports),
        });
        let mut seeds = BTreeMap::from([("master".to_string(), ctx.seed)]);
        if metric.is_random() {
            seeds.insert("metric".to_string(), metric_seed);
        }
        Ok((results, seeds, failure))
    })
}

pub fn cmd_compare(ctx: &Context, trials: usize) -> Result<Outcome, CliError> {
    let params = BTreeMap::from([("seeds".to_string(), json!(trials)), ("seed".to_string(), json!(ctx.seed))]);
    ctx.cached("compare", params, || {
        let symbolic = symbolic_bound(ctx)?;
        let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
        let metric_seed: u64 = rng.gen();
        let generic_metric = MetricArg::Random.resolve(metric_seed)?;
        let generic = run_trials(&generic_metric, trials, &mut rng)?;
        let bw = run_trials(&MetricSpec::bombieri_weyl(), trials, &mut rng)?;

        let generic_counts: Vec<usize> = generic.iter().map(|r| r.count).collect();
        let bw_counts: Vec<usize> = bw.iter().map(|r| r.count).collect();
        let generic_modal = modal_count(&generic_counts);
        let bw_modal = modal_count(&bw_counts);
        // A count below the symbolic value means paths were lost, which
        // says nothing about the exact value: the trial is inconclusive.
        let verdicts: Vec<&str> =
            generic_counts.iter().map(|&c| if c as i64 == symbolic { "agrees" } else { "inconclusive" }).collect();

        let failure = bound_violation("generic", &generic, symbolic)
            .or_else(|| bound_violation("bombieri-weyl", &bw, symbolic))
            .or_else(|| {
                verdicts.iter().all(|v| *v == "inconclusive").then(|| {
                    CliError::Verification(format!(
                        "no generic trial reproduced vED(3) = {symbolic} (counts {generic_counts:?})"
                    ))
                })
            });

        let results = json!({
            "symbolic_ved": symbolic,
            "generic": {
                "metric": generic_metric,
                "counts": generic_counts,
                "verdicts": verdicts,
                "modal_count": generic_modal,
                "equal": generic_modal.map(|m| m as i64) == Some(symbolic),
                "trials": to_value(&generic),
            },
            "bombieri_weyl": {
                "counts": bw_counts,
                "modal_count": bw_modal,
                "strict": bw_modal.is_some_and(|m| (m as i64) < symbolic),
                "trials": to_value(&bw),
            },
        });
        let seeds = BTreeMap::from([("master".to_string(), ctx.seed), ("metric".to_string(), metric_seed)]);
        Ok((results, seeds, failure))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modal_count_prefers_frequency_then_size() {
        assert_eq!(modal_count(&[]), None);
        assert_eq!(modal_count(&[13, 13, 12, 13, 11]), Some(13));
        assert_eq!(modal_count(&[12, 13]), Some(13));
        assert_eq!(modal_count(&[3, 3, 2]), Some(3));
    }

    #[test]
    fn fit_status_labels() {
        let table = VedTable::from_values(3, &[1, 8, 27, 64, 125, 216, 343, 512]).unwrap();
        let fit = fit_and_validate(&table, (3, 8), 2).unwrap();
        assert_eq!(fit_status(&fit), "stable");
        let table = VedTable::from_values(3, &[1, 3, 9, 27, 81, 243, 729]).unwrap();
        let fit = fit_and_validate(&table, (3, 7), 2).unwrap();
        assert_eq!(fit_status(&fit), "not stabilized");
    }
}
