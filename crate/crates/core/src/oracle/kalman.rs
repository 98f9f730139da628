//! Kalman rank test for networks with linear forces.

use num_traits::{One, Zero};

use super::field::{build_x0, PhaseSpace};
use super::OracleError;
use crate::linalg::rank_fraction_free;
use crate::network::Network;
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KalmanReport {
    pub rank: usize,
    pub dim: usize,
}

impl KalmanReport {
    pub fn controllable(&self) -> bool {
        self.rank == self.dim
    }
}

/// Linear part of the drift: `a[i][j]` is the coefficient of `x_j` in
/// component `i`. Constant terms are dropped.
fn drift_matrix(net: &Network, space: &PhaseSpace) -> Vec<Vec<Rational>> {
    let dim = space.dim();
    let x0 = build_x0(net, space);
    (0..dim)
        .map(|i| {
            (0..dim)
                .map(|j| {
                    let mut e = vec![0u16; dim];
                    e[j] = 1;
                    x0.component(i).coeff(&e)
                })
                .collect()
        })
        .collect()
}

/// Rank of `[B, AB, ..., A^{2n-1} B]` with one input column `e_{p_v}` per
/// bath vertex.
pub fn kalman_rank(net: &Network) -> Result<KalmanReport, OracleError> {
    if !net.has_linear_forces() {
        return Err(OracleError::NonlinearForces(net.mode()));
    }
    let space = PhaseSpace::new(net);
    let dim = space.dim();
    let a = drift_matrix(net, &space);
    let mut columns: Vec<Vec<Rational>> = Vec::new();
    for v in net.bath() {
        let mut col = vec![Rational::zero(); dim];
        col[space.p(v)] = Rational::one();
        for _ in 0..dim {
            let next: Vec<Rational> = a
                .iter()
                .map(|row| {
                    row.iter()
                        .zip(&col)
                        .filter(|(x, y)| !x.is_zero() && !y.is_zero())
                        .map(|(x, y)| x * y)
                        .sum()
                })
                .collect();
            columns.push(std::mem::replace(&mut col, next));
        }
    }
    // row rank equals column rank, so the columns can be fed in as rows
    Ok(KalmanReport {
        rank: rank_fraction_free(&columns),
        dim,
    })
}

pub fn kalman_check(net: &Network) -> Result<bool, OracleError> {
    kalman_rank(net).map(|r| r.controllable())
}
