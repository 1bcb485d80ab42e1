//! Empirical check that n -> vED(n) is eventually polynomial: exact forward
//! differences on a window, interpolation, and exact prediction of held-out
//! values.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::exact::{eval_poly, forward_diff_order, interpolate, DiffOrder, Rat};
use crate::grassloc::{self, ChernMatherDegrees, LocalizationError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StabilityError {
    #[error("empty range: n_min = {n_min} > n_max = {n_max}")]
    EmptyRange { n_min: usize, n_max: usize },
    #[error("n range must start at 3 or above, got {0}")]
    RangeTooLow(usize),
    #[error("table rows must be contiguous and positive")]
    MalformedTable,
    #[error("window {0}:{1} is not inside the table range")]
    WindowOutsideTable(usize, usize),
    #[error("need {needed} holdout rows above the window, table has {available}")]
    NotEnoughHoldout { needed: usize, available: usize },
    #[error("window insufficient for the detected degree")]
    WindowInsufficient,
    #[error(transparent)]
    Localization(#[from] LocalizationError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VedRow {
    pub ved: i64,
    pub degs: Vec<i64>,
}

/// vED values on a contiguous range of n.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VedTable {
    entries: BTreeMap<usize, VedRow>,
}

impl VedTable {
    pub fn new(entries: BTreeMap<usize, VedRow>) -> Result<Self, StabilityError> {
        let (Some(&lo), Some(&hi)) = (entries.keys().next(), entries.keys().next_back()) else {
            return Err(StabilityError::MalformedTable);
        };
        if hi - lo + 1 != entries.len() || entries.values().any(|r| r.ved <= 0) {
            return Err(StabilityError::MalformedTable);
        }
        Ok(VedTable { entries })
    }

    /// Table of bare values (no degree vectors), for synthetic inputs.
    pub fn from_values(n_min: usize, values: &[i64]) -> Result<Self, StabilityError> {
        let entries =
            values.iter().enumerate().map(|(i, &ved)| (n_min + i, VedRow { ved, degs: Vec::new() })).collect();
        Self::new(entries)
    }

    pub fn n_min(&self) -> usize {
        *self.entries.keys().next().expect("table is non-empty")
    }

    pub fn n_max(&self) -> usize {
        *self.entries.keys().next_back().expect("table is non-empty")
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, n: usize) -> Option<&VedRow> {
        self.entries.get(&n)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &VedRow)> {
        self.entries.iter().map(|(&n, r)| (n, r))
    }
}

fn check_range(n_min: usize, n_max: usize) -> Result<(), StabilityError> {
    if n_min < 3 {
        return Err(StabilityError::RangeTooLow(n_min));
    }
    if n_min > n_max {
        return Err(StabilityError::EmptyRange { n_min, n_max });
    }
    Ok(())
}

/// Builds the table from a caller-supplied source (e.g. a result cache).
pub fn ved_table_with<E, F>(n_min: usize, n_max: usize, mut source: F) -> Result<VedTable, E>
where
    E: From<StabilityError>,
    F: FnMut(usize) -> Result<ChernMatherDegrees, E>,
{
    check_range(n_min, n_max)?;
    let mut entries = BTreeMap::new();
    for n in n_min..=n_max {
        let cm = source(n)?;
        entries.insert(n, VedRow { ved: cm.ved, degs: cm.degs });
    }
    Ok(VedTable::new(entries)?)
}

/// Computes vED(n) for every n in the range, rows in parallel.
pub fn ved_table(n_min: usize, n_max: usize) -> Result<VedTable, StabilityError> {
    check_range(n_min, n_max)?;
    let rows = (n_min..=n_max)
        .into_par_iter()
        .map(|n| grassloc::ved(n).map(|cm| (n, VedRow { ved: cm.ved, degs: cm.degs })))
        .collect::<Result<BTreeMap<_, _>, _>>()?;
    VedTable::new(rows)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HoldoutCheck {
    pub n: usize,
    pub predicted: Rat,
    pub actual: i64,
    pub matches: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FitReport {
    pub detected_degree: DiffOrder,
    /// Ascending coefficients of the fitted polynomial in n.
    pub coefficients: Vec<Rat>,
    pub fit_window: (usize, usize),
    pub holdout: Vec<HoldoutCheck>,
    pub stable: bool,
}

/// Detects the polynomial degree on `window` (inclusive), fits it and
/// checks the next `holdout_count` values exactly.
pub fn fit_and_validate(
    table: &VedTable,
    window: (usize, usize),
    holdout_count: usize,
) -> Result<FitReport, StabilityError> {
    let (a, b) = window;
    if a > b || a < table.n_min() || b > table.n_max() {
        return Err(StabilityError::WindowOutsideTable(a, b));
    }
    let available = table.n_max() - b;
    if available < holdout_count {
        return Err(StabilityError::NotEnoughHoldout { needed: holdout_count, available });
    }
    let window_vals: Vec<(i64, Rat)> = (a..=b).map(|n| (n as i64, Rat::from(table.entries[&n].ved))).collect();
    if window_vals.len() < 2 {
        return Err(StabilityError::WindowInsufficient);
    }

    let values: Vec<Rat> = window_vals.iter().map(|(_, v)| v.clone()).collect();
    let detected = forward_diff_order(&values);
    let Some(d) = detected.degree() else {
        return Ok(FitReport {
            detected_degree: detected,
            coefficients: Vec::new(),
            fit_window: window,
            holdout: Vec::new(),
            stable: false,
        });
    };
    if window_vals.len() < d + 2 {
        return Err(StabilityError::WindowInsufficient);
    }

    // Fit through the d+1 window points nearest the holdout.
    let fit_points = &window_vals[window_vals.len() - (d + 1)..];
    let coefficients = interpolate(fit_points).map_err(|_| StabilityError::WindowInsufficient)?;
    let holdout: Vec<HoldoutCheck> = (b + 1..=b + holdout_count)
        .map(|n| {
            let predicted = eval_poly(&coefficients, &Rat::from(n));
            let actual = table.entries[&n].ved;
            let matches = predicted == Rat::from(actual);
            HoldoutCheck { n, predicted, actual, matches }
        })
        .collect();
    let stable = holdout.iter().all(|h| h.matches);
    Ok(FitReport { detected_degree: detected, coefficients, fit_window: window, holdout, stable })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn constant_table() {
        let t = VedTable::from_values(3, &[7; 8]).unwrap();
        let r = fit_and_validate(&t, (3, 7), 3).unwrap();
        assert!(r.stable);
        assert_eq!(r.detected_degree, DiffOrder::Degree(0));
        assert_eq!(r.coefficients, vec![Rat::from(7)]);
        assert_eq!(r.holdout.len(), 3);
    }

    #[test]
    fn squares_table() {
        let vals: Vec<i64> = (3..=12).map(|n| n * n).collect();
        let t = VedTable::from_values(3, &vals).unwrap();
        let r = fit_and_validate(&t, (3, 8), 4).unwrap();
        assert!(r.stable);
        assert_eq!(r.detected_degree, DiffOrder::Degree(2));
        assert_eq!(r.coefficients, vec![Rat::zero(), Rat::zero(), Rat::one()]);
    }

    #[test]
    fn exponential_is_not_stabilized() {
        let vals: Vec<i64> = (3..=12).map(|n| 1 << n).collect();
        let t = VedTable::from_values(3, &vals).unwrap();
        let r = fit_and_validate(&t, (5, 10), 2).unwrap();
        assert!(!r.stable);
        assert_eq!(r.detected_degree, DiffOrder::NotStabilized);
        assert!(r.coefficients.is_empty());
    }

    #[test]
    fn polynomial_then_break_fails_holdout() {
        // matches n^2 on the window, deviates afterwards
        let mut vals: Vec<i64> = (3..=10).map(|n| n * n).collect();
        vals[7] += 1;
        let t = VedTable::from_values(3, &vals).unwrap();
        let r = fit_and_validate(&t, (3, 8), 2).unwrap();
        assert_eq!(r.detected_degree, DiffOrder::Degree(2));
        assert!(!r.stable);
        assert!(r.holdout[0].matches);
        assert!(!r.holdout[1].matches);
    }

    #[test]
    fn table_errors() {
        assert_eq!(ved_table(4, 3), Err(StabilityError::EmptyRange { n_min: 4, n_max: 3 }));
        assert_eq!(ved_table(2, 3), Err(StabilityError::RangeTooLow(2)));
        assert_eq!(VedTable::from_values(3, &[1, 0]), Err(StabilityError::MalformedTable));
        let t = VedTable::from_values(3, &[1, 2, 3, 4]).unwrap();
        assert_eq!(fit_and_validate(&t, (2, 4), 0), Err(StabilityError::WindowOutsideTable(2, 4)));
        assert_eq!(fit_and_validate(&t, (3, 5), 2), Err(StabilityError::NotEnoughHoldout { needed: 2, available: 1 }));
        assert_eq!(fit_and_validate(&t, (4, 4), 1), Err(StabilityError::WindowInsufficient));
    }

    #[test]
    fn real_table_shape() {
        let t = ved_table(3, 5).unwrap();
        assert_eq!(t.len(), 3);
        assert_eq!(t.get(3).unwrap().ved, 13);
        assert_eq!((t.n_min(), t.n_max()), (3, 5));
    }

    fn eval_i(coeffs: &[i64], n: i64) -> i64 {
        coeffs.iter().rev().fold(0, |acc, c| acc * n + c)
    }

    proptest! {
        #[test]
        fn recovers_polynomials(coeffs in prop::collection::vec(-5i64..5, 1..4), lead in 1i64..5) {
            let mut coeffs = coeffs;
            coeffs.push(lead);
            let deg = coeffs.len() - 1;
            let offset = 1000;
            let vals: Vec<i64> = (3..=16).map(|n| eval_i(&coeffs, n) + offset).collect();
            let t = VedTable::from_values(3, &vals).unwrap();
            let r = fit_and_validate(&t, (4, 10), 4).unwrap();
            prop_assert!(r.stable);
            prop_assert_eq!(r.detected_degree, DiffOrder::Degree(deg));
            let mut expected: Vec<Rat> = coeffs.iter().map(|&c| Rat::from(c)).collect();
            expected[0] += Rat::from(offset);
            prop_assert_eq!(r.coefficients, expected);
        }

        #[test]
        fn stability_is_monotone_in_window(lo in 3usize..6, extra in 0usize..4) {
            let vals: Vec<i64> = (3..=18i64).map(|n| 2 * n * n * n - n + 7).collect();
            let t = VedTable::from_values(3, &vals).unwrap();
            let small = fit_and_validate(&t, (lo + 2, lo + 6), 3).unwrap();
            let large = fit_and_validate(&t, (lo, lo + 6 + extra), 3).unwrap();
            prop_assert!(small.stable);
            prop_assert!(large.stable);
        }
    }
}
