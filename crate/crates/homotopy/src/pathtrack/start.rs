use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::TrackError;
use crate::poly::{PolySystem, Polynomial};

/// G_i = x_i^{d_i} - r_i with |r_i| = 1, and all of its roots.
#[derive(Clone, Debug)]
pub struct StartSystem {
    pub system: PolySystem,
    pub points: Vec<Vec<Complex64>>,
    pub constants: Vec<Complex64>,
}

impl StartSystem {
    pub fn into_parts(self) -> (PolySystem, Vec<Vec<Complex64>>) {
        (self.system, self.points)
    }
}

/// Total-degree start system for the given equation degrees; start points
/// are enumerated in lexicographic order of root indices.
pub fn total_degree_start(degrees: &[usize], seed: u64) -> Result<StartSystem, TrackError> {
    if degrees.contains(&0) {
        return Err(TrackError::BadDegree);
    }
    let n = degrees.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let constants: Vec<Complex64> = (0..n).map(|_| Complex64::from_polar(1.0, rng.gen_range(0.0..TAU))).collect();

    let equations = degrees
        .iter()
        .zip(&constants)
        .enumerate()
        .map(|(i, (&d, &r))| {
            let mut exps = vec![0u16; n];
            exps[i] = d as u16;
            let lead = Polynomial::monomial(n, Complex64::new(1.0, 0.0), &exps);
            &lead - &Polynomial::constant(n, r)
        })
        .collect();

    // d-th roots of r: |r| = 1, so each is exp(i (arg r + 2 pi k) / d).
    let roots: Vec<Vec<Complex64>> = degrees
        .iter()
        .zip(&constants)
        .map(|(&d, r)| {
            let base = r.arg() / d as f64;
            (0..d).map(|k| Complex64::from_polar(1.0, base + TAU * k as f64 / d as f64)).collect()
        })
        .collect();

    let total: usize = degrees.iter().product();
    let mut points = Vec::with_capacity(total);
    let mut idx = vec![0usize; n];
    for _ in 0..total {
        points.push(idx.iter().enumerate().map(|(i, &k)| roots[i][k]).collect());
        for i in (0..n).rev() {
            idx[i] += 1;
            if idx[i] < degrees[i] {
                break;
            }
            idx[i] = 0;
        }
    }

    Ok(StartSystem { system: PolySystem::new(equations), points, constants })
}
