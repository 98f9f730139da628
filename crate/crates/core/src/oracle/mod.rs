//! Independent verification: symbolic vector fields, bracket saturation at
//! sampled points, and the Kalman rank test.

pub mod field;
pub mod kalman;
pub mod multipoly;
pub mod saturate;

use crate::network::{Mode, NetworkError};

pub use field::{build_x0, double_commutator, evaluate_at, lie_bracket, PhaseSpace, VectorField};
pub use kalman::{kalman_check, kalman_rank, KalmanReport};
pub use multipoly::MultiPoly;
pub use saturate::{
    certificate_from_json, certificate_to_json, in_span, replay, sample_points, saturate, saturate_random,
    saturate_with, verify_certificate, Budget, CertStatus, Certification, Derivation,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("mode error: the oracle does not support mode {0}")]
    Mode(Mode),
    #[error("mode error: the Kalman check needs quadratic springs and pinning of degree at most 2; network mode is {0}")]
    NonlinearForces(Mode),
    #[error("invalid point: {0}")]
    Point(String),
    #[error("invalid certificate: {0}")]
    Certificate(String),
    #[error(transparent)]
    Network(#[from] NetworkError),
}
