use super::{ExactError, Rat};

/// Dense power series truncated after degree `order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncSeries {
    coeffs: Vec<Rat>,
}

impl TruncSeries {
    /// Builds a series of the given order, padding with zeros or dropping
    /// coefficients beyond `order`.
    pub fn new(mut coeffs: Vec<Rat>, order: usize) -> Self {
        coeffs.resize(order + 1, Rat::zero());
        TruncSeries { coeffs }
    }

    /// Series whose order is `coeffs.len() - 1`. Empty input gives the zero
    /// series of order 0.
    pub fn from_coeffs(coeffs: Vec<Rat>) -> Self {
        let order = coeffs.len().saturating_sub(1);
        Self::new(coeffs, order)
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| Rat::from(c)).collect())
    }

    pub fn one(order: usize) -> Self {
        Self::new(vec![Rat::one()], order)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rat {
        self.coeffs.get(k).cloned().unwrap_or_else(Rat::zero)
    }

    /// Product truncated to the smaller of the two orders.
    pub fn mul_trunc(&self, other: &TruncSeries) -> TruncSeries {
        let order = self.order().min(other.order());
        let mut out = vec![Rat::zero(); order + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(order + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(order + 1 - i) {
                out[i + j] += a * b;
            }
        }
        TruncSeries { coeffs: out }
    }

    /// Multiplicative inverse modulo degree `order + 1`.
    pub fn inverse(&self) -> Result<TruncSeries, ExactError> {
        let c0 = &self.coeffs[0];
        if c0.is_zero() {
            return Err(ExactError::NonInvertibleSeries);
        }
        let inv0 = c0.recip();
        let mut s: Vec<Rat> = Vec::with_capacity(self.coeffs.len());
        s.push(inv0.clone());
        for k in 1..self.coeffs.len() {
            let mut acc = Rat::zero();
            for i in 1..=k {
                let ci = &self.coeffs[i];
                if !ci.is_zero() {
                    acc += ci * &s[k - i];
                }
            }
            s.push(-(acc * &inv0));
        }
        Ok(TruncSeries { coeffs: s })
    }
}

/// Inverse of a truncated series; `c[0]` must be nonzero.
pub fn series_inverse(c: &TruncSeries) -> Result<TruncSeries, ExactError> {
    c.inverse()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_examples() {
        let id = TruncSeries::from_ints(&[1, 0, 0]);
        assert_eq!(series_inverse(&id).unwrap(), id);

        let geo = TruncSeries::from_ints(&[1, 1, 0]);
        assert_eq!(series_inverse(&geo).unwrap(), TruncSeries::from_ints(&[1, -1, 1]));

        // (1+5x+6x^2)(1-5x+19x^2) = 1 + 0x + 0x^2 + O(x^3), checked by hand.
        let c = TruncSeries::from_ints(&[1, 5, 6]);
        assert_eq!(series_inverse(&c).unwrap(), TruncSeries::from_ints(&[1, -5, 19]));
    }

    #[test]
    fn zero_constant_term_rejected() {
        let c = TruncSeries::from_ints(&[0, 1, 2]);
        assert_eq!(series_inverse(&c), Err(ExactError::NonInvertibleSeries));
    }

    #[test]
    fn non_unit_constant_term() {
        let c = TruncSeries::new(vec![Rat::from(2), Rat::from(1)], 3);
        let s = c.inverse().unwrap();
        assert_eq!(c.mul_trunc(&s), TruncSeries::one(3));
        assert_eq!(s.coeff(1), Rat::new(-1, 4));
    }

    #[test]
    fn new_pads_and_truncates() {
        let s = TruncSeries::new(vec![Rat::from(1), Rat::from(2), Rat::from(3)], 1);
        assert_eq!(s.order(), 1);
        assert_eq!(s.coeffs().len(), 2);
        let t = TruncSeries::new(vec![Rat::from(1)], 4);
        assert_eq!(t.coeffs().len(), 5);
    }
}
