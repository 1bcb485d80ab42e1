use std::collections::BTreeSet;

use super::{ExactError, Rat};

/// Coefficients, in ascending degree, of the unique polynomial of degree
/// below `points.len()` passing through every point.
pub fn interpolate(points: &[(i64, Rat)]) -> Result<Vec<Rat>, ExactError> {
    if points.is_empty() {
        return Err(ExactError::NoPoints);
    }
    let mut seen = BTreeSet::new();
    for (x, _) in points {
        if !seen.insert(*x) {
            return Err(ExactError::DuplicateAbscissa(*x));
        }
    }

    // Newton divided differences, in place.
    let xs: Vec<Rat> = points.iter().map(|(x, _)| Rat::from(*x)).collect();
    let mut dd: Vec<Rat> = points.iter().map(|(_, y)| y.clone()).collect();
    let n = points.len();
    for level in 1..n {
        for i in (level..n).rev() {
            dd[i] = (&dd[i] - &dd[i - 1]) / (&xs[i] - &xs[i - level]);
        }
    }

    // Horner expansion of the Newton form into the monomial basis.
    let mut coeffs = vec![Rat::zero(); n];
    coeffs[0] = dd[n - 1].clone();
    for (len, k) in (1..).zip((0..n - 1).rev()) {
        // coeffs <- coeffs * (x - xs[k]) + dd[k]
        for i in (0..=len).rev() {
            let shifted = if i > 0 { coeffs[i - 1].clone() } else { Rat::zero() };
            let scaled = if i < len { &coeffs[i] * &xs[k] } else { Rat::zero() };
            coeffs[i] = shifted - scaled;
        }
        coeffs[0] += &dd[k];
    }
    Ok(coeffs)
}

/// Evaluates an ascending-degree coefficient list at `x`.
pub fn eval_poly(coeffs: &[Rat], x: &Rat) -> Rat {
    coeffs.iter().rev().fold(Rat::zero(), |acc, c| acc * x + c)
}

/// Outcome of a forward-difference scan.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DiffOrder {
    Degree(usize),
    NotStabilized,
}

impl DiffOrder {
    pub fn degree(self) -> Option<usize> {
        match self {
            DiffOrder::Degree(d) => Some(d),
            DiffOrder::NotStabilized => None,
        }
    }
}

/// Smallest `d` whose `d`-th forward differences are all equal, with at
/// least two of them to compare. Values are taken at consecutive integers.
pub fn forward_diff_order(values: &[Rat]) -> DiffOrder {
    let mut diffs = values.to_vec();
    let mut d = 0;
    while diffs.len() >= 2 {
        if diffs.windows(2).all(|w| w[0] == w[1]) {
            return DiffOrder::Degree(d);
        }
        diffs = diffs.windows(2).map(|w| &w[1] - &w[0]).collect();
        d += 1;
    }
    DiffOrder::NotStabilized
}
