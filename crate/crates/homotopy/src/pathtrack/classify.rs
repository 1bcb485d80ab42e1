use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_complex::Complex64;

use super::{PathResult, PathStatus, SolutionSet, TrackerConfig};

fn lex_cmp(a: &[Complex64], b: &[Complex64]) -> Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)))
        .find(|o| o.is_ne())
        .unwrap_or(Ordering::Equal)
}

fn distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Keep converged endpoints, sort them lexicographically by (re, im) and
/// merge points within `dedupe_tol` (max-norm) of an existing representative.
pub fn classify(results: &[PathResult], cfg: &TrackerConfig) -> SolutionSet {
    let mut status_counts = BTreeMap::new();
    for r in results {
        *status_counts.entry(r.status).or_insert(0) += 1;
    }
    let mut kept: Vec<&PathResult> = results.iter().filter(|r| r.status == PathStatus::Converged).collect();
    kept.sort_by(|a, b| lex_cmp(&a.endpoint, &b.endpoint));

    let mut reps: Vec<&PathResult> = Vec::new();
    for r in kept {
        if !reps.iter().any(|q| distance(&q.endpoint, &r.endpoint) <= cfg.dedupe_tol) {
            reps.push(r);
        }
    }
    let max_residual = reps.iter().map(|r| r.residual).fold(0.0, f64::max);
    SolutionSet {
        count: reps.len(),
        solutions: reps.into_iter().map(|r| r.endpoint.clone()).collect(),
        paths_tracked: results.len(),
        status_counts,
        max_residual,
        seeds: BTreeMap::new(),
    }
}
