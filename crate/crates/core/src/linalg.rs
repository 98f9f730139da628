//! Exact linear algebra over the rationals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::rational::Rational;

/// Solves the square system `matrix * x = rhs` by Gauss-Jordan elimination.
/// Returns `None` when the matrix is singular.
pub fn solve(mut matrix: Vec<Vec<Rational>>, mut rhs: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = matrix.len();
    assert_eq!(rhs.len(), n, "right-hand side length mismatch");
    for col in 0..n {
        let pivot = (col..n).find(|&r| !matrix[r][col].is_zero())?;
        matrix.swap(col, pivot);
        rhs.swap(col, pivot);
        let inv = matrix[col][col].recip();
        for x in matrix[col].iter_mut() {
            *x *= &inv;
        }
        rhs[col] *= &inv;
        let pivot_row = matrix[col].clone();
        for r in 0..n {
            if r == col || matrix[r][col].is_zero() {
                continue;
            }
            let factor = matrix[r][col].clone();
            for (x, p) in matrix[r][col..].iter_mut().zip(&pivot_row[col..]) {
                *x -= &factor * p;
            }
            let delta = &factor * &rhs[col];
            rhs[r] -= delta;
        }
    }
    Some(rhs)
}

/// Rank of a rational matrix by fraction-free (Bareiss) elimination.
///
/// Each row is first scaled by the lcm of its denominators so the
/// elimination runs entirely over the integers.
pub fn rank_fraction_free(rows: &[Vec<Rational>]) -> usize {
    let mut m: Vec<Vec<BigInt>> = rows.iter().map(|r| integer_row(r)).collect();
    let nrows = m.len();
    let ncols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    let mut prev = BigInt::one();
    for col in 0..ncols {
        if rank == nrows {
            break;
        }
        let Some(pivot) = (rank..nrows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pivot);
        for r in rank + 1..nrows {
            for c in col + 1..ncols {
                let v = &m[rank][col] * &m[r][c] - &m[r][col] * &m[rank][c];
                // Bareiss: the division is exact
                m[r][c] = v / &prev;
            }
            m[r][col] = BigInt::zero();
        }
        prev = m[rank][col].clone();
        rank += 1;
    }
    rank
}

fn integer_row(row: &[Rational]) -> Vec<BigInt> {
    let lcm = row
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    row.iter()
        .map(|x| x.numer() * (&lcm / x.denom()))
        .collect()
}

/// Incrementally maintained row-echelon basis of a subspace of `Q^dim`.
#[derive(Debug, Clone)]
pub struct EchelonBasis {
    dim: usize,
    // each row is normalized to 1 at its pivot column
    rows: Vec<(usize, Vec<Rational>)>,
}

impl EchelonBasis {
    pub fn new(dim: usize) -> Self {
        EchelonBasis {
            dim,
            rows: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.dim
    }

    /// Residual of `v` after eliminating against the basis.
    fn reduce(&self, mut v: Vec<Rational>) -> Vec<Rational> {
        for (pivot, row) in &self.rows {
            if v[*pivot].is_zero() {
                continue;
            }
            let factor = v[*pivot].clone();
            for (x, r) in v.iter_mut().zip(row) {
                if !r.is_zero() {
                    *x -= &factor * r;
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        self.reduce(v.to_vec()).iter().all(Zero::is_zero)
    }

    /// Adds `v` to the spanning set; returns whether the rank grew.
    pub fn insert(&mut self, v: Vec<Rational>) -> bool {
        assert_eq!(v.len(), self.dim, "vector dimension mismatch");
        let mut v = self.reduce(v);
        let Some(pivot) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = v[pivot].recip();
        for x in v.iter_mut() {
            *x *= &inv;
        }
        self.rows.push((pivot, v));
        true
    }
}
