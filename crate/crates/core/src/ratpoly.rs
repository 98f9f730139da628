//! Univariate polynomials with exact rational coefficients.
//!
//! Coefficients are stored in the monomial basis, low degree first, with no
//! trailing zeros. The zero polynomial is the empty coefficient list.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::linalg;
use crate::rational::{format_rational, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("polynomial of degree {degree:?} is too low; degree >= 1 required")]
    DegreeTooLow { degree: Option<usize> },
    #[error("degenerate input: {0}")]
    DegenerateInput(&'static str),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Poly {
    coeffs: Vec<Rational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// The monomial `c * t^k`.
    pub fn monomial(c: Rational, k: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    /// Builds a polynomial from coefficients low to high, trimming trailing zeros.
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| crate::rational::int(c)).collect())
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn eval(&self, t: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * t + c)
    }

    pub fn scale(&self, s: &Rational) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    /// `q(t) = p(t + d)`, by Horner's scheme in the shifted variable.
    pub fn shift(&self, d: &Rational) -> Poly {
        let mut acc: Vec<Rational> = Vec::with_capacity(self.coeffs.len());
        for c in self.coeffs.iter().rev() {
            // acc <- acc * (t + d) + c
            let mut next = vec![Rational::zero(); acc.len() + 1];
            for (i, a) in acc.iter().enumerate() {
                next[i + 1] += a;
                next[i] += a * d;
            }
            next[0] += c;
            acc = next;
        }
        Poly::new(acc)
    }

    /// `q(t) = p(-t)`.
    pub fn reflect(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| if i % 2 == 1 { -c.clone() } else { c.clone() })
                .collect(),
        )
    }

    /// Returns `(p~, delta)` with `p~(t) = p(t + delta)` and a vanishing
    /// coefficient of `t^(k-1)`, where `k` is the degree.
    pub fn adjusted_representation(&self) -> Result<(Poly, Rational), PolyError> {
        let k = match self.degree() {
            Some(k) if k >= 1 => k,
            degree => return Err(PolyError::DegreeTooLow { degree }),
        };
        let lead = &self.coeffs[k];
        let sub = &self.coeffs[k - 1];
        let delta = -(sub / (lead * Rational::from_integer(BigInt::from(k))));
        Ok((self.shift(&delta), delta))
    }

    pub fn is_adjusted(&self) -> bool {
        match self.degree() {
            Some(k) if k >= 1 => self.coeffs[k - 1].is_zero(),
            _ => false,
        }
    }

    /// Coefficients `b_j` of the factorial basis, `p(t) = sum_j b_j t^j / j!`.
    pub fn factorial_coeffs(&self) -> Vec<Rational> {
        let mut fact = Rational::one();
        self.coeffs
            .iter()
            .enumerate()
            .map(|(j, c)| {
                if j > 0 {
                    fact *= Rational::from_integer(BigInt::from(j));
                }
                c * &fact
            })
            .collect()
    }
}

/// Two polynomials of degree >= 1 are equivalent when one is a translate of
/// the other, which holds exactly when their adjusted representations agree.
pub fn equivalent(f: &Poly, g: &Poly) -> Result<bool, PolyError> {
    let (fa, _) = f.adjusted_representation()?;
    let (ga, _) = g.adjusted_representation()?;
    Ok(fa == ga)
}

/// Finds `r_1..r_n` with `sum_i r_i c_j^(i+s) = [j == k]` for every `j`.
///
/// `k` is 1-based. The system is solved by exact Gaussian elimination on
/// the matrix of powers `c_j^(i+s)`.
pub fn vandermonde_selectors(
    c: &[Rational],
    s: u32,
    k: usize,
) -> Result<Vec<Rational>, PolyError> {
    let n = c.len();
    if n == 0 || k == 0 || k > n {
        return Err(PolyError::DegenerateInput("selector index out of range"));
    }
    if c.iter().any(Zero::is_zero) {
        return Err(PolyError::DegenerateInput("values must be nonzero"));
    }
    for (i, a) in c.iter().enumerate() {
        if c[i + 1..].contains(a) {
            return Err(PolyError::DegenerateInput("values must be distinct"));
        }
    }
    // Row j: c_j^(s+1), ..., c_j^(s+n).
    let matrix: Vec<Vec<Rational>> = c
        .iter()
        .map(|cj| {
            let mut p = num_traits::pow(cj.clone(), s as usize);
            (0..n)
                .map(|_| {
                    p = &p * cj;
                    p.clone()
                })
                .collect()
        })
        .collect();
    let rhs: Vec<Rational> = (0..n)
        .map(|j| if j + 1 == k { Rational::one() } else { Rational::zero() })
        .collect();
    linalg::solve(matrix, rhs).ok_or(PolyError::DegenerateInput("singular power matrix"))
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            let c = format_rational(c);
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*t")?,
                _ => write!(f, "{c}*t^{i}")?,
            }
        }
        Ok(())
    }
}
