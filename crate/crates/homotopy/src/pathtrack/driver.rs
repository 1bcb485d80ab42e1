use std::collections::BTreeMap;
use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{classify, total_degree_start, track, Homotopy, SolutionSet, TrackError, TrackerConfig};
use crate::edlagrange::{build_system, LagrangeSystem, MetricSpec, TargetPoint};

/// Outcome of one ED-degree computation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdRun {
    pub solutions: SolutionSet,
    pub gamma: Complex64,
    pub start_seed: u64,
    pub target_on_variety: bool,
}

/// Derives the start-system seed and gamma from one master seed.
fn draw_start_and_gamma(seed: u64) -> (u64, Complex64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let start_seed = rng.gen();
    let gamma = Complex64::from_polar(1.0, rng.gen_range(0.0..TAU));
    (start_seed, gamma)
}

/// Count the ED-critical points of det X = 0 for `metric` and `u` by
/// tracking all Bezout paths from a total-degree start system.
pub fn ed_count(metric: &MetricSpec, u: &TargetPoint, cfg: &TrackerConfig, seed: u64) -> Result<EdRun, TrackError> {
    cfg.validate()?;
    let system = build_system(metric, u)?;
    let (start_seed, gamma) = draw_start_and_gamma(seed);
    let start = total_degree_start(&system.degrees(), start_seed)?;
    let h = Homotopy::new(start.system, system.system, gamma)?;
    let results = track(&h, &start.points, cfg)?;
    let mut solutions = classify(&results, cfg);
    solutions.seeds = BTreeMap::from([("master".to_string(), seed), ("start_system".to_string(), start_seed)]);
    log::debug!("ed_count: {} solutions, statuses {:?}", solutions.count, solutions.status_counts);
    Ok(EdRun { solutions, gamma: h.gamma(), start_seed, target_on_variety: system.target_on_variety })
}

/// Move known solutions of `base` to the system `target` along a
/// gamma-trick straight line in parameter space.
pub fn parameter_homotopy(
    base: &LagrangeSystem,
    base_solutions: &[Vec<Complex64>],
    target: &LagrangeSystem,
    cfg: &TrackerConfig,
    seed: u64,
) -> Result<SolutionSet, TrackError> {
    cfg.validate()?;
    let (_, gamma) = draw_start_and_gamma(seed);
    let h = Homotopy::new(base.system.clone(), target.system.clone(), gamma)?;
    let results = track(&h, base_solutions, cfg)?;
    let mut solutions = classify(&results, cfg);
    solutions.seeds = BTreeMap::from([("master".to_string(), seed)]);
    Ok(solutions)
}
