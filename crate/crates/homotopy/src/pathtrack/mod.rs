//! Polynomial homotopy continuation with a total-degree start system and
//! the gamma trick.
//!
//! The homotopy is H(x, t) = (1 - t) G(x) + gamma t F(x), tracked from the
//! known roots of G at t = 0 to the roots of F at t = 1.

mod classify;
mod driver;
mod start;
mod tracker;

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::poly::PolySystem;

pub use classify::classify;
pub use driver::{ed_count, parameter_homotopy, EdRun};
pub use start::{total_degree_start, StartSystem};
pub use tracker::{newton_polish, track, track_path};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TrackError {
    #[error("start and target systems differ in shape: {0}x{1} vs {2}x{3}")]
    ShapeMismatch(usize, usize, usize, usize),
    #[error("gamma must be a nonzero finite complex number")]
    BadGamma,
    #[error("invalid tracker configuration: {0}")]
    BadConfig(&'static str),
    #[error("start point has {got} coordinates, system has {expected} variables")]
    BadStartPoint { expected: usize, got: usize },
    #[error("degrees must all be at least 1")]
    BadDegree,
    #[error(transparent)]
    Metric(#[from] crate::edlagrange::MetricError),
}

/// Straight-line homotopy with the gamma trick.
#[derive(Clone, Debug)]
pub struct Homotopy {
    start: PolySystem,
    target: PolySystem,
    gamma: Complex64,
}

impl Homotopy {
    /// `gamma` is normalized to unit modulus.
    pub fn new(start: PolySystem, target: PolySystem, gamma: Complex64) -> Result<Self, TrackError> {
        if start.nvars() != target.nvars() || start.len() != target.len() {
            return Err(TrackError::ShapeMismatch(start.len(), start.nvars(), target.len(), target.nvars()));
        }
        let norm = gamma.norm();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(TrackError::BadGamma);
        }
        Ok(Homotopy { start, target, gamma: gamma / norm })
    }

    pub fn start(&self) -> &PolySystem {
        &self.start
    }

    pub fn target(&self) -> &PolySystem {
        &self.target
    }

    pub fn gamma(&self) -> Complex64 {
        self.gamma
    }

    pub fn nvars(&self) -> usize {
        self.start.nvars()
    }

    pub fn eval(&self, x: &[Complex64], t: f64) -> DVector<Complex64> {
        self.start.eval(x) * Complex64::new(1.0 - t, 0.0) + self.target.eval(x) * (self.gamma * t)
    }

    pub fn jacobian(&self, x: &[Complex64], t: f64) -> DMatrix<Complex64> {
        self.start.jacobian(x) * Complex64::new(1.0 - t, 0.0) + self.target.jacobian(x) * (self.gamma * t)
    }

    /// dH/dt = gamma F(x) - G(x).
    pub fn dt(&self, x: &[Complex64]) -> DVector<Complex64> {
        self.target.eval(x) * self.gamma - self.start.eval(x)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrackerConfig {
    pub initial_step: f64,
    pub min_step: f64,
    pub newton_tol: f64,
    pub max_newton_iters: usize,
    pub divergence_norm: f64,
    pub endgame_start: f64,
    pub singular_cond_threshold: f64,
    pub dedupe_tol: f64,
}

impl Default for TrackerConfig {
    fn default() -> Self {
        TrackerConfig {
            initial_step: 0.05,
            min_step: 1e-7,
            newton_tol: 1e-11,
            max_newton_iters: 5,
            divergence_norm: 1e8,
            endgame_start: 0.95,
            singular_cond_threshold: 1e12,
            dedupe_tol: 1e-6,
        }
    }
}

impl TrackerConfig {
    pub fn validate(&self) -> Result<(), TrackError> {
        let positive = [
            self.initial_step,
            self.min_step,
            self.newton_tol,
            self.divergence_norm,
            self.singular_cond_threshold,
            self.dedupe_tol,
        ];
        if positive.iter().any(|v| !(*v > 0.0 && v.is_finite())) || self.max_newton_iters == 0 {
            return Err(TrackError::BadConfig("all tolerances and limits must be positive"));
        }
        if self.min_step >= self.initial_step {
            return Err(TrackError::BadConfig("min_step must be below initial_step"));
        }
        if !(self.endgame_start > 0.0 && self.endgame_start < 1.0) {
            return Err(TrackError::BadConfig("endgame_start must lie in (0, 1)"));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PathStatus {
    Converged,
    Diverged,
    SingularEndpoint,
    StepFailure,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PathResult {
    pub status: PathStatus,
    pub endpoint: Vec<Complex64>,
    /// max-norm of F at the endpoint after the final polish
    pub residual: f64,
    /// ratio of extreme singular values of the Jacobian of F at the endpoint
    pub condition_estimate: f64,
    pub steps_taken: usize,
}

/// Deduplicated finite nonsingular endpoints of a tracking run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolutionSet {
    pub solutions: Vec<Vec<Complex64>>,
    pub count: usize,
    pub paths_tracked: usize,
    pub status_counts: BTreeMap<PathStatus, usize>,
    /// Largest residual among the kept solutions.
    pub max_residual: f64,
    pub seeds: BTreeMap<String, u64>,
}

pub(crate) fn max_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_config_is_valid() {
        assert!(TrackerConfig::default().validate().is_ok());
    }

    #[test]
    fn bad_configs() {
        let cfg = TrackerConfig { min_step: 0.1, ..TrackerConfig::default() };
        assert!(cfg.validate().is_err());
        let cfg = TrackerConfig { endgame_start: 1.0, ..TrackerConfig::default() };
        assert!(cfg.validate().is_err());
        let cfg = TrackerConfig { newton_tol: -1.0, ..TrackerConfig::default() };
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn gamma_is_normalized() {
        let (g, _) = total_degree_start(&[2], 1).unwrap().into_parts();
        let h = Homotopy::new(g.clone(), g, Complex64::new(3.0, 4.0)).unwrap();
        assert!((h.gamma() - Complex64::new(0.6, 0.8)).norm() < 1e-15);
    }
}
