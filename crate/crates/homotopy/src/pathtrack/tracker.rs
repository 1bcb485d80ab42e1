use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;

use super::{max_norm, Homotopy, PathResult, PathStatus, TrackError, TrackerConfig};
use crate::poly::PolySystem;

/// Largest step allowed once t has passed `endgame_start`.
const ENDGAME_MAX_STEP: f64 = 0.0125;
/// Consecutive successful steps before the step size is doubled.
const SUCCESSES_BEFORE_GROWTH: usize = 3;
/// A predicted point is rejected when the first Newton correction exceeds
/// this fraction of (1 + |x|).
const MAX_FIRST_CORRECTION: f64 = 1e-3;
/// Iterations of the final Newton polish on the target system.
const POLISH_ITERS: usize = 8;

type Vector = DVector<Complex64>;

fn solve(a: DMatrix<Complex64>, b: &Vector) -> Option<Vector> {
    let x = a.lu().solve(b)?;
    x.iter().all(|z| z.re.is_finite() && z.im.is_finite()).then_some(x)
}

fn vmax(v: &Vector) -> f64 {
    max_norm(v.as_slice())
}

/// Tangent dx/dt = -H_x^{-1} H_t.
fn tangent(h: &Homotopy, x: &Vector, t: f64) -> Option<Vector> {
    let rhs = -h.dt(x.as_slice());
    solve(h.jacobian(x.as_slice(), t), &rhs)
}

fn rk4(h: &Homotopy, x: &Vector, t: f64, dt: f64) -> Option<Vector> {
    let k1 = tangent(h, x, t)?;
    let k2 = tangent(h, &(x + &k1 * Complex64::from(dt / 2.0)), t + dt / 2.0)?;
    let k3 = tangent(h, &(x + &k2 * Complex64::from(dt / 2.0)), t + dt / 2.0)?;
    let k4 = tangent(h, &(x + &k3 * Complex64::from(dt)), t + dt)?;
    Some(x + (k1 + k2 * Complex64::from(2.0) + k3 * Complex64::from(2.0) + k4) * Complex64::from(dt / 6.0))
}

/// Newton on H(., t) from the predicted point; `None` when the corrector
/// does not contract within the iteration budget.
fn correct(h: &Homotopy, mut x: Vector, t: f64, cfg: &TrackerConfig) -> Option<Vector> {
    for iter in 0..cfg.max_newton_iters {
        let dx = solve(h.jacobian(x.as_slice(), t), &h.eval(x.as_slice(), t))?;
        let scale = 1.0 + vmax(&x);
        let size = vmax(&dx);
        x -= dx;
        if iter == 0 && size > MAX_FIRST_CORRECTION * scale {
            return None;
        }
        if size <= cfg.newton_tol * scale {
            return Some(x);
        }
    }
    // Accept a point that is already well inside the basin even if the
    // last update did not reach full precision; the next step re-corrects.
    let residual_step = solve(h.jacobian(x.as_slice(), t), &h.eval(x.as_slice(), t))?;
    (vmax(&residual_step) <= 1e3 * cfg.newton_tol * (1.0 + vmax(&x))).then_some(x)
}

/// Newton iterations on `system` from `x`, stopping once the update
/// stagnates. Returns the polished point.
pub fn newton_polish(system: &PolySystem, x: &[Complex64], iters: usize) -> Vec<Complex64> {
    let mut x = Vector::from_column_slice(x);
    let mut best = x.clone();
    let mut best_res = vmax(&system.eval(x.as_slice()));
    for _ in 0..iters {
        let Some(dx) = solve(system.jacobian(x.as_slice()), &system.eval(x.as_slice())) else {
            break;
        };
        x -= &dx;
        let res = vmax(&system.eval(x.as_slice()));
        if !(res.is_finite()) {
            break;
        }
        if res < best_res {
            best_res = res;
            best = x.clone();
        }
        if vmax(&dx) <= f64::EPSILON * (1.0 + vmax(&x)) {
            break;
        }
    }
    best.as_slice().to_vec()
}

fn condition_number(j: DMatrix<Complex64>) -> f64 {
    let sv = j.singular_values();
    let (max, min) = (sv.max(), sv.min());
    if min == 0.0 || !min.is_finite() {
        f64::INFINITY
    } else {
        max / min
    }
}

fn finish(h: &Homotopy, x: &Vector, steps: usize, cfg: &TrackerConfig) -> PathResult {
    let target = h.target();
    let endpoint = newton_polish(target, x.as_slice(), POLISH_ITERS);
    let residual = max_norm(target.eval(&endpoint).as_slice());
    let condition_estimate = condition_number(target.jacobian(&endpoint));
    let status = if max_norm(&endpoint) > cfg.divergence_norm {
        PathStatus::Diverged
    } else if residual < cfg.newton_tol && condition_estimate < cfg.singular_cond_threshold {
        PathStatus::Converged
    } else {
        PathStatus::SingularEndpoint
    };
    PathResult { status, endpoint, residual, condition_estimate, steps_taken: steps }
}

fn abort(status: PathStatus, x: &Vector, steps: usize) -> PathResult {
    PathResult {
        status,
        endpoint: x.as_slice().to_vec(),
        residual: f64::INFINITY,
        condition_estimate: f64::INFINITY,
        steps_taken: steps,
    }
}

/// Track one path from t = 0 to t = 1.
pub fn track_path(h: &Homotopy, start: &[Complex64], cfg: &TrackerConfig) -> Result<PathResult, TrackError> {
    cfg.validate()?;
    if start.len() != h.nvars() {
        return Err(TrackError::BadStartPoint { expected: h.nvars(), got: start.len() });
    }
    let mut x = Vector::from_column_slice(start);
    let mut t = 0.0f64;
    let mut step = cfg.initial_step;
    let mut successes = 0usize;
    let mut steps = 0usize;

    while t < 1.0 {
        let cap = if t >= cfg.endgame_start { step.min(ENDGAME_MAX_STEP) } else { step };
        let remaining = 1.0 - t;
        let dt = cap.min(remaining);
        let last = dt == remaining;
        let t_next = if last { 1.0 } else { t + dt };

        let next = rk4(h, &x, t, dt).and_then(|p| correct(h, p, t_next, cfg));
        match next {
            Some(p) => {
                x = p;
                t = t_next;
                steps += 1;
                if vmax(&x) > cfg.divergence_norm {
                    return Ok(abort(PathStatus::Diverged, &x, steps));
                }
                successes += 1;
                if successes >= SUCCESSES_BEFORE_GROWTH {
                    step = (step * 2.0).min(cfg.initial_step);
                    successes = 0;
                }
            }
            None => {
                successes = 0;
                step = dt / 2.0;
                // The final step may legitimately be shorter than min_step.
                if step < cfg.min_step && !(last && remaining < cfg.min_step) {
                    let status = if vmax(&x) > cfg.divergence_norm.sqrt() {
                        PathStatus::Diverged
                    } else {
                        PathStatus::StepFailure
                    };
                    return Ok(abort(status, &x, steps));
                }
                if last && remaining < cfg.min_step && step < remaining / 1024.0 {
                    return Ok(abort(PathStatus::StepFailure, &x, steps));
                }
            }
        }
    }
    Ok(finish(h, &x, steps, cfg))
}

/// Track every start point in parallel; results keep the input order.
pub fn track(h: &Homotopy, starts: &[Vec<Complex64>], cfg: &TrackerConfig) -> Result<Vec<PathResult>, TrackError> {
    cfg.validate()?;
    starts.par_iter().map(|s| track_path(h, s, cfg)).collect()
}
