//! Random-potential trials on a fixed graph shape.
//!
//! Each edge gets a polynomial of prescribed degree whose coefficients are
//! rationals `n/d` with `n` uniform in `[-COEFF_RANGE, COEFF_RANGE]` and `d`
//! uniform in `[1, COEFF_RANGE]`. Draws are deterministic in the seed: trial
//! `i` of a batch uses seed `seed + i`. A draw whose leading coefficient is
//! zero is discarded and redrawn from the next ChaCha stream of the same seed.

use num_bigint::BigInt;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::engine::{run_algorithm, Analysis, EngineError};
use crate::exec::Execution;
use crate::network::{Network, NetworkError, Shape};
use crate::rational::Rational;
use crate::ratpoly::Poly;

pub const COEFF_RANGE: i64 = 1000;
const MAX_STREAMS: u64 = 64;

/// Draws one potential per edge. Returns `None` if some leading coefficient
/// came out zero.
fn draw_potentials(rng: &mut impl Rng, degrees: &[usize]) -> Option<Vec<Poly>> {
    let mut out = Vec::with_capacity(degrees.len());
    for &d in degrees {
        let coeffs: Vec<Rational> = (0..=d)
            .map(|_| {
                let n = rng.random_range(-COEFF_RANGE..=COEFF_RANGE);
                let den = rng.random_range(1..=COEFF_RANGE);
                Rational::new(BigInt::from(n), BigInt::from(den))
            })
            .collect();
        if coeffs[d].is_zero() {
            return None;
        }
        out.push(Poly::new(coeffs));
    }
    Some(out)
}

/// Builds the network of one trial.
pub fn draw_network(shape: &Shape, degrees: &[usize], seed: u64) -> Result<Network, EngineError> {
    if degrees.len() != shape.pairs.len() {
        return Err(NetworkError::Validation(format!(
            "{} degrees given for {} edges",
            degrees.len(),
            shape.pairs.len()
        ))
        .into());
    }
    if let Some(d) = degrees.iter().find(|&&d| d < 3) {
        return Err(NetworkError::Validation(format!(
            "random potentials need degree >= 3, got {d}"
        ))
        .into());
    }
    for stream in 0..MAX_STREAMS {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        if let Some(potentials) = draw_potentials(&mut rng, degrees) {
            return Ok(shape.with_potentials(potentials)?);
        }
    }
    Err(EngineError::DegenerateDraw)
}

/// Draws random potentials on `shape` and runs the refinement algorithm.
pub fn genericity_trial(shape: &Shape, degrees: &[usize], seed: u64) -> Result<Analysis, EngineError> {
    if !shape.vertices.iter().any(|v| v.bath) {
        return Err(EngineError::EmptyBath);
    }
    let net = draw_network(shape, degrees, seed)?;
    if !net.is_connected() {
        return Err(NetworkError::Validation("shape is not connected".into()).into());
    }
    run_algorithm(&net)
}

/// Runs `trials` independent trials with seeds `seed, seed + 1, ...`.
pub fn genericity_batch(
    shape: &Shape,
    degrees: &[usize],
    seed: u64,
    trials: usize,
    exec: Execution,
) -> Vec<Result<Analysis, EngineError>> {
    let seeds: Vec<u64> = (0..trials as u64).map(|i| seed.wrapping_add(i)).collect();
    exec.map(seeds, |s| genericity_trial(shape, degrees, s))
}
