//! Sparse multivariate polynomials with complex coefficients.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial {
    nvars: usize,
    /// Exponent vector -> coefficient; zero coefficients are dropped.
    terms: BTreeMap<Vec<u16>, Complex64>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Complex64) -> Self {
        Self::monomial(nvars, c, &vec![0; nvars])
    }

    pub fn var(nvars: usize, index: usize) -> Self {
        let mut exps = vec![0; nvars];
        exps[index] = 1;
        Self::monomial(nvars, Complex64::new(1.0, 0.0), &exps)
    }

    pub fn monomial(nvars: usize, c: Complex64, exps: &[u16]) -> Self {
        assert_eq!(exps.len(), nvars);
        let mut p = Self::zero(nvars);
        if c != Complex64::new(0.0, 0.0) {
            p.terms.insert(exps.to_vec(), c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u16], Complex64)> {
        self.terms.iter().map(|(e, &c)| (e.as_slice(), c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; 0 for the zero polynomial.
    pub fn degree(&self) -> usize {
        self.terms.keys().map(|e| e.iter().map(|&k| k as usize).sum()).max().unwrap_or(0)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, &v) in &self.terms {
            out.add_term(e.clone(), v * c);
        }
        out
    }

    fn add_term(&mut self, exps: Vec<u16>, c: Complex64) {
        let zero = Complex64::new(0.0, 0.0);
        match self.terms.entry(exps) {
            Entry::Vacant(v) => {
                if c != zero {
                    v.insert(c);
                }
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if *o.get() == zero {
                    o.remove();
                }
            }
        }
    }

    pub fn derivative(&self, var: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, &c) in &self.terms {
            if e[var] == 0 {
                continue;
            }
            let mut d = e.clone();
            d[var] -= 1;
            out.add_term(d, c * f64::from(e[var]));
        }
        out
    }

    pub fn eval(&self, x: &[Complex64]) -> Complex64 {
        debug_assert_eq!(x.len(), self.nvars);
        self.terms
            .iter()
            .map(|(e, &c)| {
                e.iter().zip(x).fold(c, |acc, (&k, &xi)| if k == 0 { acc } else { acc * xi.powu(u32::from(k)) })
            })
            .sum()
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = self.clone();
        for (e, &c) in &rhs.terms {
            out.add_term(e.clone(), c);
        }
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self + &(-rhs)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = Polynomial::zero(self.nvars);
        for (ea, &ca) in &self.terms {
            for (eb, &cb) in &rhs.terms {
                let e: Vec<u16> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }
}

/// Flat term list for fast repeated evaluation.
#[derive(Clone, Debug, Default)]
struct Compiled {
    coeffs: Vec<Complex64>,
    /// (variable, exponent) factors of every term, concatenated.
    factors: Vec<(usize, usize)>,
    /// Term k owns factors[offsets[k]..offsets[k + 1]].
    offsets: Vec<usize>,
}

impl Compiled {
    fn new(p: &Polynomial) -> Self {
        let mut c = Compiled { offsets: vec![0], ..Default::default() };
        for (e, &coeff) in &p.terms {
            c.coeffs.push(coeff);
            c.factors.extend(e.iter().enumerate().filter(|(_, &k)| k > 0).map(|(v, &k)| (v, usize::from(k))));
            c.offsets.push(c.factors.len());
        }
        c
    }

    fn eval(&self, powers: &[Vec<Complex64>]) -> Complex64 {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(k, &coeff)| {
                self.factors[self.offsets[k]..self.offsets[k + 1]].iter().fold(coeff, |acc, &(v, e)| acc * powers[v][e])
            })
            .sum()
    }
}

/// Square or rectangular polynomial system with a cached symbolic Jacobian.
#[derive(Clone, Debug)]
pub struct PolySystem {
    nvars: usize,
    max_degree: usize,
    equations: Vec<Polynomial>,
    compiled: Vec<Compiled>,
    jacobian: Vec<Vec<Compiled>>,
}

impl PolySystem {
    pub fn new(equations: Vec<Polynomial>) -> Self {
        let nvars = equations.first().map_or(0, Polynomial::nvars);
        assert!(equations.iter().all(|p| p.nvars() == nvars), "mixed variable counts");
        let max_degree = equations.iter().flat_map(|p| p.terms.keys().flatten().copied()).max().map_or(0, usize::from);
        let compiled = equations.iter().map(Compiled::new).collect();
        let jacobian =
            equations.iter().map(|p| (0..nvars).map(|v| Compiled::new(&p.derivative(v))).collect()).collect();
        PolySystem { nvars, max_degree, equations, compiled, jacobian }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn len(&self) -> usize {
        self.equations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.equations.is_empty()
    }

    pub fn equations(&self) -> &[Polynomial] {
        &self.equations
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.equations.iter().map(Polynomial::degree).collect()
    }

    /// powers[v][k] = x_v^k for k up to the largest exponent in the system.
    fn powers(&self, x: &[Complex64]) -> Vec<Vec<Complex64>> {
        debug_assert_eq!(x.len(), self.nvars);
        x.iter()
            .map(|&xi| {
                let mut row = Vec::with_capacity(self.max_degree + 1);
                row.push(Complex64::new(1.0, 0.0));
                for k in 0..self.max_degree {
                    row.push(row[k] * xi);
                }
                row
            })
            .collect()
    }

    pub fn eval(&self, x: &[Complex64]) -> DVector<Complex64> {
        let powers = self.powers(x);
        DVector::from_iterator(self.compiled.len(), self.compiled.iter().map(|p| p.eval(&powers)))
    }

    pub fn jacobian(&self, x: &[Complex64]) -> DMatrix<Complex64> {
        let powers = self.powers(x);
        DMatrix::from_fn(self.equations.len(), self.nvars, |i, j| self.jacobian[i][j].eval(&powers))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn arithmetic_and_eval() {
        let x = Polynomial::var(2, 0);
        let y = Polynomial::var(2, 1);
        let p = &(&x * &x) - &(&y * &Polynomial::constant(2, c(3.0)));
        assert_eq!(p.degree(), 2);
        assert_eq!(p.num_terms(), 2);
        let v = p.eval(&[c(2.0), Complex64::new(0.0, 1.0)]);
        assert_eq!(v, Complex64::new(4.0, -3.0));
    }

    #[test]
    fn cancellation_drops_terms() {
        let x = Polynomial::var(1, 0);
        let z = &x - &x;
        assert!(z.is_zero());
        assert_eq!(z.degree(), 0);
    }

    #[test]
    fn derivatives() {
        let x = Polynomial::var(2, 0);
        let y = Polynomial::var(2, 1);
        let p = &(&(&x * &x) * &y) + &y;
        let dx = p.derivative(0);
        assert_eq!(dx, &(&x * &y) * &Polynomial::constant(2, c(2.0)));
        let dy = p.derivative(1);
        assert_eq!(dy.eval(&[c(3.0), c(5.0)]), c(10.0));
    }

    #[test]
    fn system_jacobian() {
        let x = Polynomial::var(2, 0);
        let y = Polynomial::var(2, 1);
        let sys = PolySystem::new(vec![&x * &y, &x + &y]);
        assert_eq!(sys.degrees(), vec![2, 1]);
        let j = sys.jacobian(&[c(2.0), c(7.0)]);
        assert_eq!(j[(0, 0)], c(7.0));
        assert_eq!(j[(0, 1)], c(2.0));
        assert_eq!(j[(1, 0)], c(1.0));
    }

    #[test]
    fn compiled_eval_matches_direct_eval() {
        let x = Polynomial::var(3, 0);
        let y = Polynomial::var(3, 1);
        let z = Polynomial::var(3, 2);
        let p = &(&(&x * &x) * &(&y * &z)) - &(&(&z * &z) * &Polynomial::constant(3, Complex64::new(0.5, 2.0)));
        let sys = PolySystem::new(vec![p.clone(), &x + &Polynomial::constant(3, c(1.0))]);
        let pt = [Complex64::new(0.3, -1.2), Complex64::new(2.0, 0.5), Complex64::new(-0.7, 0.1)];
        assert!((sys.eval(&pt)[0] - p.eval(&pt)).norm() < 1e-13);
        assert!((sys.jacobian(&pt)[(0, 2)] - p.derivative(2).eval(&pt)).norm() < 1e-13);
    }
}
