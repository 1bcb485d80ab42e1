//! ED-critical Lagrange system of the 3 x 3 symmetroid {det X = 0} in
//! Sym^2(C^3) under a configurable scalar product, plus the Bombieri-Weyl
//! product on symmetric tensors.
//!
//! Coordinates are fixed once as (x11, x12, x13, x22, x23, x33); the
//! Lagrange multiplier is variable index 6.

use nalgebra::{Matrix3, Matrix6};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::poly::{PolySystem, Polynomial};

pub const COORDINATE_NAMES: [&str; 6] = ["x11", "x12", "x13", "x22", "x23", "x33"];
pub const NUM_COORDS: usize = 6;
pub const NUM_VARS: usize = 7;
pub const LAMBDA: usize = 6;

/// Coordinate index of matrix entry (i, j), 0-based.
pub const fn coord_index(i: usize, j: usize) -> usize {
    const MAP: [[usize; 3]; 3] = [[0, 1, 2], [1, 3, 4], [2, 4, 5]];
    MAP[i][j]
}

/// Smallest accepted ratio of extreme singular values of a Gram matrix.
pub const INVERTIBILITY_RATIO: f64 = 1e-8;
const MAX_RESAMPLES: usize = 100;

pub type Gram = [[f64; 6]; 6];

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MetricError {
    #[error("gram matrix is not symmetric")]
    NotSymmetric,
    #[error("gram matrix is degenerate (singular value ratio {0:e})")]
    Degenerate(f64),
    #[error("gram matrix has non-finite entries")]
    NonFinite,
    #[error("diagonal weight {index} must be positive, got {value}")]
    NonPositiveWeight { index: usize, value: f64 },
    #[error("no invertible random metric after {0} draws")]
    ResampleExhausted(usize),
    #[error("target point has non-finite coordinates")]
    NonFiniteTarget,
    #[error("tensor shapes differ: degree {0} dim {1} vs degree {2} dim {3}")]
    ShapeMismatch(usize, usize, usize, usize),
    #[error("multi-index {0:?} does not match degree {1} and dimension {2}")]
    BadMultiIndex(Vec<u32>, usize, usize),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum MetricKind {
    GenericRandom { seed: u64 },
    BombieriWeyl,
    Diagonal { a: [f64; 6] },
    Explicit,
}

/// Scalar product on Sym^2(C^3) in the fixed coordinate order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawMetric")]
pub struct MetricSpec {
    pub kind: MetricKind,
    pub gram: Gram,
}

#[derive(Deserialize)]
struct RawMetric {
    #[serde(default = "explicit_kind")]
    kind: MetricKind,
    gram: Gram,
}

fn explicit_kind() -> MetricKind {
    MetricKind::Explicit
}

impl TryFrom<RawMetric> for MetricSpec {
    type Error = MetricError;
    fn try_from(raw: RawMetric) -> Result<Self, Self::Error> {
        MetricSpec::new(raw.kind, raw.gram)
    }
}

fn gram_matrix(gram: &Gram) -> Matrix6<f64> {
    Matrix6::from_fn(|i, j| gram[i][j])
}

fn check_gram(gram: &Gram) -> Result<(), MetricError> {
    if gram.iter().flatten().any(|v| !v.is_finite()) {
        return Err(MetricError::NonFinite);
    }
    if (0..6).any(|i| (0..i).any(|j| gram[i][j] != gram[j][i])) {
        return Err(MetricError::NotSymmetric);
    }
    let sv = gram_matrix(gram).singular_values();
    let (max, min) = (sv.max(), sv.min());
    if max == 0.0 || min < INVERTIBILITY_RATIO * max {
        return Err(MetricError::Degenerate(if max == 0.0 { 0.0 } else { min / max }));
    }
    Ok(())
}

impl MetricSpec {
    pub fn new(kind: MetricKind, gram: Gram) -> Result<Self, MetricError> {
        check_gram(&gram)?;
        Ok(MetricSpec { kind, gram })
    }

    pub fn explicit(gram: Gram) -> Result<Self, MetricError> {
        Self::new(MetricKind::Explicit, gram)
    }

    pub fn bombieri_weyl() -> Self {
        MetricSpec { kind: MetricKind::BombieriWeyl, gram: bw_gram() }
    }

    pub fn identity() -> Self {
        diag_family_metric([1.0; 6]).expect("identity is a valid metric")
    }

    /// q(v, v) for a real coordinate vector.
    pub fn quadratic_form(&self, v: &[f64; 6]) -> f64 {
        (0..6).map(|i| (0..6).map(|j| v[i] * self.gram[i][j] * v[j]).sum::<f64>()).sum()
    }

    /// Straight-line interpolation of Gram matrices, without validation.
    pub fn lerp_gram(&self, other: &MetricSpec, s: f64) -> Gram {
        std::array::from_fn(|i| std::array::from_fn(|j| (1.0 - s) * self.gram[i][j] + s * other.gram[i][j]))
    }
}

/// Gram matrix of the Bombieri-Weyl product: weight 1 on diagonal entries
/// and 2 on off-diagonal entries.
pub fn bw_gram() -> Gram {
    let mut g = [[0.0; 6]; 6];
    for i in 0..3 {
        for j in i..3 {
            let k = coord_index(i, j);
            g[k][k] = if i == j { 1.0 } else { 2.0 };
        }
    }
    g
}

/// Symmetric matrix with entries uniform in [-1, 1], redrawn until invertible.
pub fn random_metric(seed: u64) -> Result<MetricSpec, MetricError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_RESAMPLES {
        let mut g = [[0.0; 6]; 6];
        for (i, j) in (0..6).flat_map(|i| (i..6).map(move |j| (i, j))) {
            let v = rng.gen_range(-1.0..=1.0);
            g[i][j] = v;
            g[j][i] = v;
        }
        if check_gram(&g).is_ok() {
            return Ok(MetricSpec { kind: MetricKind::GenericRandom { seed }, gram: g });
        }
    }
    Err(MetricError::ResampleExhausted(MAX_RESAMPLES))
}

/// Diagonal metric with the given weights on the six coordinates.
pub fn diag_family_metric(a: [f64; 6]) -> Result<MetricSpec, MetricError> {
    if let Some((index, &value)) = a.iter().enumerate().find(|(_, v)| !v.is_finite() || **v <= 0.0) {
        return Err(MetricError::NonPositiveWeight { index, value });
    }
    let mut g = [[0.0; 6]; 6];
    for (k, &v) in a.iter().enumerate() {
        g[k][k] = v;
    }
    MetricSpec::new(MetricKind::Diagonal { a }, g)
}

/// Target point u in Sym^2(C^3).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TargetPoint {
    pub u: [Complex64; 6],
}

impl TargetPoint {
    pub fn new(u: [Complex64; 6]) -> Result<Self, MetricError> {
        if u.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(MetricError::NonFiniteTarget);
        }
        Ok(TargetPoint { u })
    }

    pub fn real(u: [f64; 6]) -> Result<Self, MetricError> {
        Self::new(u.map(|v| Complex64::new(v, 0.0)))
    }

    /// Real and imaginary parts uniform in [-1, 1].
    pub fn random(seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = std::array::from_fn(|_| {
            let re = rng.gen_range(-1.0..=1.0);
            let im = rng.gen_range(-1.0..=1.0);
            Complex64::new(re, im)
        });
        TargetPoint { u }
    }

    pub fn det(&self) -> Complex64 {
        det3(&self.u)
    }

    /// Whether u lies (numerically) on the symmetroid itself.
    pub fn near_variety(&self) -> bool {
        let scale = self.u.iter().map(|z| z.norm()).fold(1.0f64, f64::max);
        self.det().norm() < 1e-10 * scale.powi(3)
    }
}

fn det3(x: &[Complex64; 6]) -> Complex64 {
    let m = Matrix3::from_fn(|i, j| x[coord_index(i, j)]);
    m.determinant()
}

/// det X as a polynomial in the seven system variables.
pub fn det_polynomial() -> Polynomial {
    let v = |i: usize, j: usize| Polynomial::var(NUM_VARS, coord_index(i, j));
    // cofactor expansion along the first row
    let minor = |r1: usize, r2: usize, c1: usize, c2: usize| &(&v(r1, c1) * &v(r2, c2)) - &(&v(r1, c2) * &v(r2, c1));
    let t0 = &v(0, 0) * &minor(1, 2, 1, 2);
    let t1 = &v(0, 1) * &minor(1, 2, 0, 2);
    let t2 = &v(0, 2) * &minor(1, 2, 0, 1);
    &(&t0 - &t1) + &t2
}

/// Coordinate-wise gradient of det X in (x1..x6).
pub fn grad_det_polynomials() -> [Polynomial; 6] {
    let det = det_polynomial();
    std::array::from_fn(|k| det.derivative(k))
}

/// The seven-equation ED-critical system det X = 0, Q(x - u) = lambda grad det X.
#[derive(Clone, Debug)]
pub struct LagrangeSystem {
    pub system: PolySystem,
    pub metric: MetricSpec,
    pub target: TargetPoint,
    /// Set when u itself is (numerically) on the variety.
    pub target_on_variety: bool,
}

impl LagrangeSystem {
    pub fn degrees(&self) -> Vec<usize> {
        self.system.degrees()
    }

    pub fn bezout_number(&self) -> usize {
        self.degrees().iter().product()
    }
}

pub fn build_system(metric: &MetricSpec, u: &TargetPoint) -> Result<LagrangeSystem, MetricError> {
    check_gram(&metric.gram)?;
    let u = TargetPoint::new(u.u)?;
    let target_on_variety = u.near_variety();
    if target_on_variety {
        log::warn!("target point lies on the symmetroid (|det U| = {:e})", u.det().norm());
    }
    let lambda = Polynomial::var(NUM_VARS, LAMBDA);
    let grads = grad_det_polynomials();
    let mut equations = Vec::with_capacity(NUM_VARS);
    equations.push(det_polynomial());
    for (a, grad) in grads.iter().enumerate() {
        let mut row = Polynomial::zero(NUM_VARS);
        for b in 0..NUM_COORDS {
            let q = metric.gram[a][b];
            if q == 0.0 {
                continue;
            }
            let shifted = &Polynomial::var(NUM_VARS, b) - &Polynomial::constant(NUM_VARS, u.u[b]);
            row = &row + &shifted.scale(Complex64::new(q, 0.0));
        }
        equations.push(&row - &(&lambda * grad));
    }
    Ok(LagrangeSystem { system: PolySystem::new(equations), metric: metric.clone(), target: u, target_on_variety })
}

/// Symmetric tensor of degree d on C^dim, stored by multi-index |alpha| = d.
/// The associated polynomial is sum_alpha binom(d, alpha) f_alpha x^alpha.
#[derive(Clone, Debug, PartialEq)]
pub struct SymTensor {
    degree: usize,
    dim: usize,
    coeffs: Vec<f64>,
    indices: Vec<Vec<u32>>,
}

/// All multi-indices of length `dim` summing to `degree`, lexicographically
/// decreasing.
pub fn multi_indices(dim: usize, degree: usize) -> Vec<Vec<u32>> {
    fn rec(dim: usize, remaining: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if prefix.len() + 1 == dim {
            prefix.push(remaining);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for k in (0..=remaining).rev() {
            prefix.push(k);
            rec(dim, remaining - k, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if dim > 0 {
        rec(dim, degree as u32, &mut Vec::with_capacity(dim), &mut out);
    }
    out
}

/// Multinomial coefficient d! / prod alpha_i!.
pub fn multinomial(alpha: &[u32]) -> f64 {
    let mut total = 0u32;
    let mut acc = 1.0;
    for &a in alpha {
        for k in 1..=a {
            total += 1;
            acc *= f64::from(total) / f64::from(k);
        }
    }
    acc
}

impl SymTensor {
    pub fn zero(dim: usize, degree: usize) -> Self {
        let indices = multi_indices(dim, degree);
        SymTensor { degree, dim, coeffs: vec![0.0; indices.len()], indices }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn position(&self, alpha: &[u32]) -> Result<usize, MetricError> {
        self.indices
            .iter()
            .position(|a| a == alpha)
            .ok_or_else(|| MetricError::BadMultiIndex(alpha.to_vec(), self.degree, self.dim))
    }

    pub fn get(&self, alpha: &[u32]) -> Result<f64, MetricError> {
        Ok(self.coeffs[self.position(alpha)?])
    }

    pub fn set(&mut self, alpha: &[u32], value: f64) -> Result<(), MetricError> {
        let k = self.position(alpha)?;
        self.coeffs[k] = value;
        Ok(())
    }

    /// Tensor of the polynomial sum c_alpha x^alpha (plain monomial
    /// coefficients).
    pub fn from_polynomial(dim: usize, degree: usize, terms: &[(Vec<u32>, f64)]) -> Result<Self, MetricError> {
        let mut t = SymTensor::zero(dim, degree);
        for (alpha, c) in terms {
            let k = t.position(alpha)?;
            t.coeffs[k] += c / multinomial(alpha);
        }
        Ok(t)
    }

    /// The power (v . x)^d, whose tensor entries are v^alpha.
    pub fn power_of_linear_form(v: &[f64], degree: usize) -> Self {
        let mut t = SymTensor::zero(v.len(), degree);
        for (k, alpha) in t.indices.iter().enumerate() {
            t.coeffs[k] = alpha.iter().zip(v).map(|(&a, &vi)| vi.powi(a as i32)).product();
        }
        t
    }
}

/// Bombieri-Weyl pairing sum_alpha binom(d, alpha) f_alpha g_alpha.
pub fn bw_product(f: &SymTensor, g: &SymTensor) -> Result<f64, MetricError> {
    if f.degree != g.degree || f.dim != g.dim {
        return Err(MetricError::ShapeMismatch(f.degree, f.dim, g.degree, g.dim));
    }
    Ok(f.indices.iter().zip(f.coeffs.iter().zip(&g.coeffs)).map(|(alpha, (a, b))| multinomial(alpha) * a * b).sum())
}
