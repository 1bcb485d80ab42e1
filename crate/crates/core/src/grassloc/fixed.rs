use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::LocalizationError;
use crate::exact::Rat;

/// Dimension bookkeeping for rank-2 symmetric n x n matrices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProblemSize {
    /// Dimension of V.
    pub n: usize,
    /// Dimension of the variety (and of its Nash blow-up Z).
    pub m: usize,
    /// Ambient projective dimension.
    pub ambient: usize,
    /// Dimension of the Grassmannian of 2-planes.
    pub dim_g: usize,
    pub dim_z: usize,
}

impl ProblemSize {
    pub fn new(n: usize) -> Result<Self, LocalizationError> {
        if n < 3 {
            return Err(LocalizationError::NTooSmall(n));
        }
        let size = ProblemSize { n, m: 2 * n - 2, ambient: n * (n + 1) / 2 - 1, dim_g: 2 * (n - 2), dim_z: 2 * n - 2 };
        debug_assert_eq!(size.m, size.dim_z);
        debug_assert_eq!(size.dim_z, size.dim_g + 2);
        debug_assert!(size.ambient > size.m);
        Ok(size)
    }

    /// Rank of Sym^2 U* (+) U* (x) Q*.
    pub fn rank_e(&self) -> usize {
        3 + 2 * (self.n - 2)
    }
}

/// Integer torus weights t_1..t_n, pairwise distinct.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct WeightVector(Vec<i64>);

impl WeightVector {
    pub fn new(weights: Vec<i64>) -> Result<Self, LocalizationError> {
        let distinct: BTreeSet<i64> = weights.iter().copied().collect();
        if distinct.len() != weights.len() {
            return Err(LocalizationError::DuplicateWeights(weights));
        }
        Ok(WeightVector(weights))
    }

    /// The specialization t_l = l.
    pub fn standard(n: usize) -> Self {
        WeightVector((1..=n as i64).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.0
    }

    /// Weight of the 1-based index `l`.
    pub fn t(&self, l: usize) -> i64 {
        self.0[l - 1]
    }

    pub(crate) fn check_len(&self, n: usize) -> Result<(), LocalizationError> {
        if self.0.len() != n {
            return Err(LocalizationError::WrongWeightCount { expected: n, got: self.0.len() });
        }
        Ok(())
    }
}

impl TryFrom<Vec<i64>> for WeightVector {
    type Error = LocalizationError;
    fn try_from(v: Vec<i64>) -> Result<Self, Self::Error> {
        WeightVector::new(v)
    }
}

impl From<WeightVector> for Vec<i64> {
    fn from(w: WeightVector) -> Self {
        w.0
    }
}

/// Torus-fixed point p_ij of Gr_2(C^n), 1-based with i < j.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct GFixedPoint {
    pub i: usize,
    pub j: usize,
}

impl GFixedPoint {
    /// Indices of the quotient directions, k not in {i, j}.
    pub fn complement(&self, n: usize) -> impl Iterator<Item = usize> + '_ {
        (1..=n).filter(move |&k| k != self.i && k != self.j)
    }
}

/// All fixed points of Gr_2(C^n) in lexicographic order.
pub fn fixed_points(n: usize) -> Result<Vec<GFixedPoint>, LocalizationError> {
    if n < 3 {
        return Err(LocalizationError::NTooSmall(n));
    }
    Ok((1..=n).flat_map(|i| (i + 1..=n).map(move |j| GFixedPoint { i, j })).collect())
}

/// Equivariant Chern roots of the dual tautological bundles at a fixed point.
///
/// With `sigma = -1` the roots of U* are (-t_i, -t_j); `sigma = +1` flips
/// every root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedPointRoots {
    pub u_dual: [i64; 2],
    pub q_dual: Vec<i64>,
    pub sym2_u_dual: [i64; 3],
    pub u_q_dual: Vec<i64>,
    pub sigma: i8,
}

impl FixedPointRoots {
    /// Chern roots of E = Sym^2 U* (+) U* (x) Q*, rank 2n-1.
    pub fn e_roots(&self) -> Vec<i64> {
        self.sym2_u_dual.iter().chain(self.u_q_dual.iter()).copied().collect()
    }
}

pub fn roots_at(p: GFixedPoint, w: &WeightVector, sigma: i8) -> FixedPointRoots {
    let s = i64::from(sigma);
    let ti = w.t(p.i);
    let tj = w.t(p.j);
    let u_dual = [s * ti, s * tj];
    let q_dual: Vec<i64> = p.complement(w.len()).map(|k| s * w.t(k)).collect();
    let sym2_u_dual = [2 * u_dual[0], u_dual[0] + u_dual[1], 2 * u_dual[1]];
    let u_q_dual = u_dual.iter().flat_map(|u| q_dual.iter().map(move |q| u + q)).collect();
    FixedPointRoots { u_dual, q_dual, sym2_u_dual, u_q_dual, sigma }
}

/// Equivariant Euler class of T_p Gr_2: prod_{k != i,j} (t_k - t_i)(t_k - t_j).
pub fn euler_g(p: GFixedPoint, w: &WeightVector) -> Rat {
    let ti = w.t(p.i);
    let tj = w.t(p.j);
    let e: Rat = p
        .complement(w.len())
        .map(|k| {
            let tk = w.t(k);
            Rat::from(tk - ti) * Rat::from(tk - tj)
        })
        .product();
    assert!(!e.is_zero(), "vanishing Euler class at {p:?}; weights must be distinct");
    e
}

/// Fixed point of Z = P(Sym^2 U*) over `base`: the weight line `line_index`
/// of Sym^2 U*.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZFixedPoint {
    pub base: GFixedPoint,
    pub line_index: usize,
    /// Restriction of xi = c_1(O_Z(1)) to this point.
    pub xi_value: i64,
}

pub fn z_fixed_points(base: GFixedPoint, roots: &FixedPointRoots, xi_sign: i8) -> [ZFixedPoint; 3] {
    std::array::from_fn(|line_index| ZFixedPoint {
        base,
        line_index,
        xi_value: i64::from(xi_sign) * roots.sym2_u_dual[line_index],
    })
}
