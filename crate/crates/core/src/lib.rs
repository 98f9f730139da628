//! Controllability of 1D polynomial-spring networks driven by heat baths.
//!
//! The decision procedures live in [`engine`]; [`oracle`] verifies their
//! verdicts independently by Lie-bracket saturation at sampled points and,
//! for linear networks, by the Kalman rank test.

pub mod classes;
pub mod corpus;
pub mod engine;
pub mod exec;
pub mod genericity;
pub mod linalg;
pub mod network;
pub mod oracle;
pub mod rational;
pub mod ratpoly;
pub mod report;
pub mod vset;

pub use engine::{analyze, Analysis, EngineError, Method, Status, Verdict};
pub use exec::Execution;
pub use network::{parse_network, serialize_network, Mode, Network, NetworkError};
pub use rational::Rational;
pub use ratpoly::Poly;
