//! Sparse multivariate polynomials over the rationals.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::rational::Rational;
use crate::ratpoly::Poly;

pub type Exponents = Vec<u16>;

/// A polynomial in a fixed number of variables. No zero coefficients are
/// stored, and every exponent vector has exactly `nvars` entries.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiPoly {
    nvars: usize,
    terms: BTreeMap<Exponents, Rational>,
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        MultiPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::one())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::from_terms(nvars, [(e, Rational::one())])
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Exponents, Rational)>) -> Self {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent vector length mismatch");
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, e: Exponents, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        self.terms
            .keys()
            .map(|e| e.iter().map(|&x| x as u32).sum())
            .max()
    }

    /// Coefficient of a monomial.
    pub fn coeff(&self, e: &[u16]) -> Rational {
        self.terms.get(e).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn scale(&self, s: &Rational) -> Self {
        if s.is_zero() {
            return Self::zero(self.nvars);
        }
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * s)).collect(),
        }
    }

    /// Partial derivative with respect to variable `i`.
    pub fn partial(&self, i: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut e2 = e.clone();
            let k = e2[i];
            e2[i] -= 1;
            out.terms
                .insert(e2, c * Rational::from_integer(BigInt::from(k)));
        }
        out
    }

    pub fn depends_on(&self, i: usize) -> bool {
        self.terms.keys().any(|e| e[i] > 0)
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.nvars, "point dimension mismatch");
        // cache powers per variable
        let mut powers: Vec<Vec<Rational>> = vec![vec![Rational::one()]; self.nvars];
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let table = &mut powers[i];
                while table.len() <= k as usize {
                    let next = table.last().expect("nonempty") * &point[i];
                    table.push(next);
                }
                term *= &table[k as usize];
            }
            acc += term;
        }
        acc
    }

    /// `p(lin)` for a univariate `p`, expanded exactly by Horner's scheme.
    pub fn compose(p: &Poly, lin: &MultiPoly) -> Self {
        let n = lin.nvars;
        let mut acc = Self::zero(n);
        for c in p.coeffs().iter().rev() {
            acc = &(&acc * lin) + &Self::constant(n, c.clone());
        }
        acc
    }
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = MultiPoly::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e: Exponents = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    #[test]
    fn arithmetic_and_calculus() {
        let x = MultiPoly::var(2, 0);
        let y = MultiPoly::var(2, 1);
        let d = &x - &y;
        let cube = MultiPoly::compose(&Poly::from_ints(&[0, 0, 0, 1]), &d);
        // (x - y)^3 = x^3 - 3x^2 y + 3 x y^2 - y^3
        assert_eq!(cube.len(), 4);
        assert_eq!(cube.coeff(&[2, 1]), int(-3));
        assert_eq!(cube.partial(0), MultiPoly::compose(&Poly::from_ints(&[0, 0, 3]), &d));
        assert_eq!(cube.eval(&[int(3), int(1)]), int(8));
        assert!((&cube - &cube).is_zero());
        assert_eq!(cube.degree(), Some(3));
        assert!(!MultiPoly::constant(2, int(4)).depends_on(0));
    }
}
