use super::Rat;

/// All elementary symmetric polynomials `e_0..=e_len` of `roots`.
///
/// Computed by expanding `prod (1 + r x)` one factor at a time, so this is
/// also the total Chern class of a bundle with the given Chern roots.
pub fn elem_sym_all(roots: &[Rat]) -> Vec<Rat> {
    let mut e = Vec::with_capacity(roots.len() + 1);
    e.push(Rat::one());
    for r in roots {
        e.push(Rat::zero());
        for a in (1..e.len()).rev() {
            let term = &e[a - 1] * r;
            e[a] += term;
        }
    }
    e
}

/// The `a`-th elementary symmetric polynomial of `roots`.
pub fn elem_sym(roots: &[Rat], a: usize) -> Rat {
    if a > roots.len() {
        return Rat::zero();
    }
    elem_sym_all(roots).swap_remove(a)
}

/// Power sum `p_k = sum r^k`.
pub fn power_sum(roots: &[Rat], k: u32) -> Rat {
    roots.iter().map(|r| r.pow(k)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rats(v: &[i64]) -> Vec<Rat> {
        v.iter().map(|&x| Rat::from(x)).collect()
    }

    #[test]
    fn examples() {
        assert_eq!(elem_sym(&[], 0), Rat::one());
        assert_eq!(elem_sym(&rats(&[2, 3]), 2), Rat::from(6));
        assert_eq!(elem_sym(&rats(&[-2, -3, -4]), 1), Rat::from(-9));
        assert_eq!(elem_sym(&rats(&[1, 2]), 5), Rat::zero());
    }

    #[test]
    fn all_matches_single() {
        let r = rats(&[1, -2, 5, 7]);
        let all = elem_sym_all(&r);
        for (a, e) in all.iter().enumerate() {
            assert_eq!(&elem_sym(&r, a), e);
        }
        assert_eq!(all[4], Rat::from(-70));
    }

    fn small_rat() -> impl Strategy<Value = Rat> {
        (-20i64..=20, 1i64..=6).prop_map(|(p, q)| Rat::new(p, q))
    }

    proptest! {
        // k e_k = sum_{i=1}^{k} (-1)^{i-1} e_{k-i} p_i
        #[test]
        fn newton_identities(roots in prop::collection::vec(small_rat(), 0..=10)) {
            let e = elem_sym_all(&roots);
            for k in 1..=roots.len() {
                let mut rhs = Rat::zero();
                for i in 1..=k {
                    let term = &e[k - i] * power_sum(&roots, i as u32);
                    if i % 2 == 1 { rhs += term } else { rhs -= term }
                }
                prop_assert_eq!(Rat::from(k as i64) * &e[k], rhs);
            }
        }
    }
}
