//! Two independent localization routes for deg(c_j^Ma . H^j).
//!
//! Route A pushes the integrand from Z down to Gr_2 with the projective
//! bundle formula (xi^(2+t) pushes forward to the Segre class s_t of
//! Sym^2 U*) and localizes on the C(n,2) fixed points of the Grassmannian.
//! Route B localizes directly on the 3 C(n,2) fixed points of Z.

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{
    euler_g, fixed_points, roots_at, z_fixed_points, Convention, LocalizationError, ProblemSize, TangentModel,
    WeightVector,
};
use crate::exact::{elem_sym_all, Rat, TruncSeries};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Route {
    A,
    B,
}

/// One monomial c_a(E) . s_t(Sym^2 U*) of a pushed-forward integrand.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PushTerm {
    pub chern_index: usize,
    pub segre_index: usize,
    pub multiplicity: BigInt,
}

/// Monomials of p_*(c_{m-j}(T) xi^j) on Gr_2. Every term has total degree
/// dim G; terms with xi exponent below 2 push forward to zero and are
/// dropped.
pub fn pushforward_terms(size: &ProblemSize, j: usize, model: TangentModel) -> Vec<PushTerm> {
    let m = size.m;
    let k = m - j;
    let mut terms = Vec::new();
    match model {
        TangentModel::Quotient => {
            // c_k(T) = sum_b c_{k-b}(E) xi^b
            for b in 0..=k {
                let xi_exp = b + j;
                if xi_exp < 2 {
                    continue;
                }
                terms.push(PushTerm { chern_index: k - b, segre_index: xi_exp - 2, multiplicity: BigInt::from(1) });
            }
        }
        TangentModel::Twisted => {
            // c_k(E (x) O(1)) = sum_a C(r-a, k-a) c_a(E) xi^(k-a)
            let r = size.rank_e();
            for a in 0..=k.min(r) {
                let xi_exp = k - a + j;
                if xi_exp < 2 {
                    continue;
                }
                terms.push(PushTerm {
                    chern_index: a,
                    segre_index: xi_exp - 2,
                    multiplicity: num_integer::binomial(BigInt::from(r - a), BigInt::from(k - a)),
                });
            }
        }
    }
    for t in &terms {
        assert_eq!(t.chern_index + t.segre_index, size.dim_g, "integrand is not of top degree on Gr_2");
    }
    terms
}

fn check_inputs(size: &ProblemSize, w: &WeightVector) -> Result<(), LocalizationError> {
    w.check_len(size.n)
}

fn to_rats(v: &[i64]) -> Vec<Rat> {
    v.iter().map(|&x| Rat::from(x)).collect()
}

/// Route A contributions of one Grassmannian fixed point, for every j.
fn route_a_point(
    size: &ProblemSize,
    p: super::GFixedPoint,
    w: &WeightVector,
    conv: Convention,
    terms: &[Vec<PushTerm>],
) -> Result<Vec<Rat>, LocalizationError> {
    let roots = roots_at(p, w, conv.sigma);
    let c_e = elem_sym_all(&to_rats(&roots.e_roots()));
    let c_sym2 = TruncSeries::new(elem_sym_all(&to_rats(&roots.sym2_u_dual)), size.dim_g);
    let segre = c_sym2.inverse()?;
    let euler = euler_g(p, w);
    Ok(terms
        .iter()
        .map(|js| {
            let integrand: Rat = js
                .iter()
                .map(|t| Rat::from(t.multiplicity.clone()) * &c_e[t.chern_index] * segre.coeff(t.segre_index))
                .sum();
            integrand / &euler
        })
        .collect())
}

/// Route B contributions of the three Z fixed points over `p`, for every j.
fn route_b_point(size: &ProblemSize, p: super::GFixedPoint, w: &WeightVector, conv: Convention) -> Vec<Rat> {
    let m = size.m;
    let roots = roots_at(p, w, conv.sigma);
    let e_roots = roots.e_roots();
    let c_e = elem_sym_all(&to_rats(&e_roots));
    let euler = euler_g(p, w);
    let mut out = vec![Rat::zero(); m + 1];
    for z in z_fixed_points(p, &roots, conv.xi_sign) {
        let line = roots.sym2_u_dual[z.line_index];
        let fiber_euler: Rat = roots
            .sym2_u_dual
            .iter()
            .enumerate()
            .filter(|(idx, _)| *idx != z.line_index)
            .map(|(_, &other)| Rat::from(other - line))
            .product();
        assert!(!fiber_euler.is_zero(), "vanishing fiber Euler class at {z:?}");
        let euler_z = &euler * &fiber_euler;
        let xi = Rat::from(z.xi_value);
        let c_t: Vec<Rat> = match conv.tangent {
            TangentModel::Quotient => (0..=m).map(|k| (0..=k).map(|b| &c_e[k - b] * xi.pow(b as u32)).sum()).collect(),
            TangentModel::Twisted => {
                let shifted: Vec<Rat> = e_roots.iter().map(|&e| Rat::from(e) + &xi).collect();
                elem_sym_all(&shifted)
            }
        };
        for (j, slot) in out.iter_mut().enumerate() {
            let k = m - j;
            let c = c_t.get(k).cloned().unwrap_or_else(Rat::zero);
            *slot += c * xi.pow(j as u32) / &euler_z;
        }
    }
    out
}

fn add_vecs(mut a: Vec<Rat>, b: Vec<Rat>) -> Vec<Rat> {
    for (x, y) in a.iter_mut().zip(b) {
        *x += y;
    }
    a
}

/// deg(c_j^Ma . H^j) for all j = 0..=m by the given route, as exact
/// rationals. Integrality is not enforced here.
pub fn cm_degrees(
    size: &ProblemSize,
    w: &WeightVector,
    conv: Convention,
    route: Route,
) -> Result<Vec<Rat>, LocalizationError> {
    check_inputs(size, w)?;
    let points = fixed_points(size.n)?;
    let zero = vec![Rat::zero(); size.m + 1];
    match route {
        Route::A => {
            let terms: Vec<Vec<PushTerm>> = (0..=size.m).map(|j| pushforward_terms(size, j, conv.tangent)).collect();
            points
                .par_iter()
                .map(|&p| route_a_point(size, p, w, conv, &terms))
                .try_reduce(|| zero.clone(), |a, b| Ok(add_vecs(a, b)))
        }
        Route::B => Ok(points.par_iter().map(|&p| route_b_point(size, p, w, conv)).reduce(|| zero.clone(), add_vecs)),
    }
}

fn single(
    size: &ProblemSize,
    j: usize,
    w: &WeightVector,
    conv: Convention,
    route: Route,
) -> Result<Rat, LocalizationError> {
    if j > size.m {
        return Err(LocalizationError::DegreeOutOfRange { j, m: size.m });
    }
    let value = cm_degrees(size, w, conv, route)?.swap_remove(j);
    if !value.is_integer() {
        return Err(LocalizationError::NonInteger { j, value: value.to_string() });
    }
    Ok(value)
}

/// deg(c_j^Ma . H^j) via pushforward to Gr_2 and localization there.
pub fn cm_degree_route_a(
    size: &ProblemSize,
    j: usize,
    w: &WeightVector,
    conv: Convention,
) -> Result<Rat, LocalizationError> {
    single(size, j, w, conv, Route::A)
}

/// deg(c_j^Ma . H^j) via localization on the fixed points of Z.
pub fn cm_degree_route_b(
    size: &ProblemSize,
    j: usize,
    w: &WeightVector,
    conv: Convention,
) -> Result<Rat, LocalizationError> {
    single(size, j, w, conv, Route::B)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn twisted() -> Convention {
        Convention { sigma: -1, xi_sign: -1, tangent: TangentModel::Twisted }
    }

    #[test]
    fn terms_have_top_degree_for_all_sizes() {
        for n in 3..=12 {
            let size = ProblemSize::new(n).unwrap();
            for j in 0..=size.m {
                for model in [TangentModel::Quotient, TangentModel::Twisted] {
                    for t in pushforward_terms(&size, j, model) {
                        assert_eq!(t.chern_index + t.segre_index, size.dim_g);
                    }
                }
            }
        }
    }

    #[test]
    fn top_class_is_a_single_segre_term() {
        let size = ProblemSize::new(5).unwrap();
        let terms = pushforward_terms(&size, size.m, TangentModel::Twisted);
        assert_eq!(terms, vec![PushTerm { chern_index: 0, segre_index: size.dim_g, multiplicity: BigInt::from(1) }]);
    }

    #[test]
    fn n3_degree_vector() {
        let size = ProblemSize::new(3).unwrap();
        let w = WeightVector::standard(3);
        let a = cm_degrees(&size, &w, twisted(), Route::A).unwrap();
        let expected: Vec<Rat> = [3, 6, 10, 9, 3].iter().map(|&v| Rat::from(v)).collect();
        assert_eq!(a, expected);
        assert_eq!(cm_degree_route_a(&size, 4, &w, twisted()).unwrap(), Rat::from(3));
        assert_eq!(cm_degree_route_b(&size, 4, &w, twisted()).unwrap(), Rat::from(3));
    }

    #[test]
    fn routes_agree_n5_j0() {
        let size = ProblemSize::new(5).unwrap();
        let w = WeightVector::standard(5);
        assert_eq!(
            cm_degree_route_a(&size, 0, &w, twisted()).unwrap(),
            cm_degree_route_b(&size, 0, &w, twisted()).unwrap()
        );
    }

    #[test]
    fn individual_fixed_point_terms_are_fractional() {
        // Integrality only emerges after summing over all fixed points.
        let size = ProblemSize::new(4).unwrap();
        let w = WeightVector::standard(4);
        let terms: Vec<Vec<PushTerm>> =
            (0..=size.m).map(|j| pushforward_terms(&size, j, TangentModel::Twisted)).collect();
        let p = super::super::GFixedPoint { i: 1, j: 2 };
        let contrib = route_a_point(&size, p, &w, twisted(), &terms).unwrap();
        assert!(contrib.iter().any(|c| !c.is_integer()));
    }

    #[test]
    fn out_of_range_and_wrong_weights() {
        let size = ProblemSize::new(3).unwrap();
        let w = WeightVector::standard(3);
        assert_eq!(cm_degree_route_a(&size, 5, &w, twisted()), Err(LocalizationError::DegreeOutOfRange { j: 5, m: 4 }));
        let w4 = WeightVector::standard(4);
        assert_eq!(
            cm_degree_route_a(&size, 0, &w4, twisted()),
            Err(LocalizationError::WrongWeightCount { expected: 3, got: 4 })
        );
    }
}
