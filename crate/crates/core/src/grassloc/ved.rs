use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{aluffi_sum, cm_degrees, Convention, LocalizationError, ProblemSize, Route, WeightVector};
use crate::exact::Rat;

/// Chern-Mather degrees deg(c_j^Ma . H^j), j = 0..=m, and the virtual ED
/// degree obtained from them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChernMatherDegrees {
    pub n: usize,
    pub degs: Vec<i64>,
    pub ved: i64,
    pub weights_used: WeightVector,
    pub route: Route,
    pub convention: Convention,
}

impl ChernMatherDegrees {
    pub fn m(&self) -> usize {
        self.degs.len() - 1
    }

    /// Degree of the variety itself.
    pub fn degree(&self) -> i64 {
        self.degs[self.m()]
    }

    /// Same numbers, ignoring which weights and route produced them.
    pub fn same_values(&self, other: &ChernMatherDegrees) -> bool {
        self.n == other.n && self.degs == other.degs && self.ved == other.ved
    }
}

fn to_i64(value: &Rat, j: usize) -> Result<i64, LocalizationError> {
    let int = value.to_integer().ok_or_else(|| LocalizationError::NonInteger { j, value: value.to_string() })?;
    i64::try_from(int).map_err(|_| LocalizationError::Overflow)
}

/// Full computation with explicit weights, convention and route.
pub fn ved_with(
    n: usize,
    weights: &WeightVector,
    conv: Convention,
    route: Route,
) -> Result<ChernMatherDegrees, LocalizationError> {
    let size = ProblemSize::new(n)?;
    let exact = cm_degrees(&size, weights, conv, route)?;
    let degs = exact.iter().enumerate().map(|(j, d)| to_i64(d, j)).collect::<Result<Vec<_>, _>>()?;
    let ved = to_i64(&aluffi_sum(&exact), size.m)?;
    Ok(ChernMatherDegrees { n, degs, ved, weights_used: weights.clone(), route, convention: conv })
}

/// vED(n) with the standard weights t_l = l and the calibrated convention.
pub fn ved(n: usize) -> Result<ChernMatherDegrees, LocalizationError> {
    let conv = Convention::calibrated()?;
    ved_with(n, &WeightVector::standard(n), conv, Route::A)
}

/// As [`ved`], additionally recomputing every degree by route B and
/// failing on the first disagreement.
pub fn ved_verified(n: usize) -> Result<ChernMatherDegrees, LocalizationError> {
    let conv = Convention::calibrated()?;
    let w = WeightVector::standard(n);
    let a = ved_with(n, &w, conv, Route::A)?;
    let b = ved_with(n, &w, conv, Route::B)?;
    if let Some(j) = a.degs.iter().zip(&b.degs).position(|(x, y)| x != y) {
        return Err(LocalizationError::RouteMismatch { n, j });
    }
    Ok(a)
}

/// `count` random weight vectors of pairwise distinct integers.
pub fn random_weights(n: usize, count: usize, seed: u64) -> Vec<WeightVector> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let span = 20 * n + 40;
    let offset = span as i64 / 2;
    (0..count)
        .map(|_| {
            let w: Vec<i64> = sample(&mut rng, span, n).into_iter().map(|v| v as i64 - offset).collect();
            WeightVector::new(w).expect("sampled without replacement")
        })
        .collect()
}

/// Recomputes the degree vector for each weight vector and reports whether
/// all results coincide.
pub fn weight_independence_check_with(n: usize, weights: &[WeightVector]) -> Result<bool, LocalizationError> {
    if weights.len() < 2 {
        return Err(LocalizationError::TooFewTrials(weights.len()));
    }
    let conv = Convention::calibrated()?;
    let results = weights.iter().map(|w| ved_with(n, w, conv, Route::A)).collect::<Result<Vec<_>, _>>()?;
    Ok(results.windows(2).all(|pair| pair[0].same_values(&pair[1])))
}

pub fn weight_independence_check(n: usize, trials: usize, seed: u64) -> Result<bool, LocalizationError> {
    if trials < 2 {
        return Err(LocalizationError::TooFewTrials(trials));
    }
    weight_independence_check_with(n, &random_weights(n, trials, seed))
}
