//! Pointwise Hörmander rank certification by bracket saturation.
//!
//! Fields are generated from the bath seeds `∂_{p_v}` in generations. Each
//! generation takes the fields kept by the previous one (the frontier) and
//! forms, in this order: brackets with the drift `[F, X_0]`, double
//! commutators `[[X_0, F], G]`, plain brackets `[F, G]`, and products
//! `x_e · F` with edge differences. A candidate is kept only if it raises the
//! rank at some sampled point. The span at a point of any bracket built from
//! a discarded field already lies in the span of brackets built from kept
//! ones, away from a measure-zero set, so discarding loses nothing at
//! generic points.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::field::{build_x0, double_commutator, evaluate_at, lie_bracket, PhaseSpace, VectorField};
use super::multipoly::MultiPoly;
use super::OracleError;
use crate::exec::Execution;
use crate::linalg::EchelonBasis;
use crate::network::{Mode, Network};
use crate::rational::Rational;

pub const DEFAULT_POINTS: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    pub max_fields: usize,
    pub max_degree: u32,
    pub max_generations: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_fields: 2000,
            max_degree: 12,
            max_generations: 12,
        }
    }
}

/// How a kept field was obtained. Indices refer to earlier kept fields.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum Derivation {
    Seed { vertex: String },
    /// `[F, X_0]`
    Drift { of: usize },
    /// `[[X_0, F_left], F_right]`
    Double { left: usize, right: usize },
    /// `[F_left, F_right]`
    Bracket { left: usize, right: usize },
    /// `(q_u - q_v) · F` for edge `{u, v}` as stored.
    Product { edge: usize, of: usize },
}

impl Derivation {
    fn parents(&self) -> Vec<usize> {
        match *self {
            Derivation::Seed { .. } => vec![],
            Derivation::Drift { of } | Derivation::Product { of, .. } => vec![of],
            Derivation::Double { left, right } | Derivation::Bracket { left, right } => {
                vec![left, right]
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Certification {
    Certified,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertStatus {
    pub status: Certification,
    pub dim: usize,
    pub points: Vec<Vec<Rational>>,
    /// Final rank at each point.
    pub ranks: Vec<usize>,
    /// Ranks at each point after the seeds and after every generation.
    pub rank_history: Vec<Vec<usize>>,
    /// Nonzero candidates within the degree cap that were evaluated.
    pub fields_used: usize,
    pub generations: usize,
    pub seed: Option<u64>,
    /// Derivations of the kept fields, in order.
    pub fields: Vec<Derivation>,
}

/// Seeded random rational points with coordinates `n/d`,
/// `n ∈ [-12, 12]`, `d ∈ [1, 7]`.
pub fn sample_points(dim: usize, count: usize, seed: u64) -> Vec<Vec<Rational>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            (0..dim)
                .map(|_| {
                    let n: i64 = rng.random_range(-12..=12);
                    let d: i64 = rng.random_range(1..=7);
                    Rational::new(BigInt::from(n), BigInt::from(d))
                })
                .collect()
        })
        .collect()
}

fn check_mode(net: &Network) -> Result<(), OracleError> {
    match net.mode() {
        Mode::Unsupported(_) => Err(OracleError::Mode(net.mode())),
        _ => Ok(()),
    }
}

fn check_points(space: &PhaseSpace, points: &[Vec<Rational>]) -> Result<(), OracleError> {
    if points.is_empty() {
        return Err(OracleError::Point("at least one point is required".into()));
    }
    if let Some(x) = points.iter().find(|x| x.len() != space.dim()) {
        return Err(OracleError::Point(format!(
            "point has {} coordinates, expected {}",
            x.len(),
            space.dim()
        )));
    }
    Ok(())
}

/// Builds the field named by `d` from already built fields.
fn derive(
    d: &Derivation,
    net: &Network,
    space: &PhaseSpace,
    x0: &VectorField,
    fields: &[VectorField],
) -> Result<VectorField, OracleError> {
    let get = |i: usize| {
        fields
            .get(i)
            .ok_or_else(|| OracleError::Certificate(format!("field {i} referenced before it exists")))
    };
    Ok(match d {
        Derivation::Seed { vertex } => {
            let v = net.index_of(vertex)?;
            if !net.vertex(v).bath {
                return Err(OracleError::Certificate(format!("seed {vertex} is not a bath vertex")));
            }
            VectorField::unit(space.dim(), space.p(v))
        }
        Derivation::Drift { of } => lie_bracket(get(*of)?, x0),
        Derivation::Double { left, right } => double_commutator(x0, get(*left)?, get(*right)?),
        Derivation::Bracket { left, right } => lie_bracket(get(*left)?, get(*right)?),
        Derivation::Product { edge, of } => {
            if *edge >= net.edges().len() {
                return Err(OracleError::Certificate(format!("no edge {edge}")));
            }
            let (u, v) = net.edge_endpoints(*edge);
            let x = &MultiPoly::var(space.dim(), space.q(u)) - &MultiPoly::var(space.dim(), space.q(v));
            get(*of)?.multiply(&x)
        }
    })
}

struct Saturation<'a> {
    net: &'a Network,
    space: PhaseSpace,
    x0: VectorField,
    points: &'a [Vec<Rational>],
    budget: Budget,
    exec: Execution,
    bases: Vec<EchelonBasis>,
    kept: Vec<VectorField>,
    derivations: Vec<Derivation>,
    fields_used: usize,
}

impl Saturation<'_> {
    fn full(&self) -> bool {
        self.bases.iter().all(EchelonBasis::is_full)
    }

    fn exhausted(&self) -> bool {
        self.fields_used >= self.budget.max_fields
    }

    fn ranks(&self) -> Vec<usize> {
        self.bases.iter().map(EchelonBasis::rank).collect()
    }

    /// Evaluates a candidate everywhere; keeps it if some rank grew.
    fn offer(&mut self, field: VectorField, d: Derivation) {
        if field.is_zero() || field.degree().is_some_and(|k| k > self.budget.max_degree) {
            return;
        }
        self.fields_used += 1;
        let points = self.points;
        let bases = std::mem::take(&mut self.bases);
        let updated = self.exec.map(bases.into_iter().enumerate().collect(), |(i, mut basis)| {
            let grew = !basis.is_full() && basis.insert(evaluate_at(&field, &points[i]));
            (basis, grew)
        });
        let mut productive = false;
        for (basis, grew) in updated {
            productive |= grew;
            self.bases.push(basis);
        }
        if productive {
            self.kept.push(field);
            self.derivations.push(d);
        }
    }

    /// Builds candidates in parallel batches and offers them in order.
    fn run_phase(&mut self, specs: Vec<Derivation>) -> Result<(), OracleError> {
        const BATCH: usize = 32;
        let mut specs = specs.into_iter().peekable();
        while specs.peek().is_some() {
            if self.full() || self.exhausted() {
                break;
            }
            let room = (self.budget.max_fields - self.fields_used).min(BATCH);
            let batch: Vec<Derivation> = specs.by_ref().take(room).collect();
            let (net, space, x0, kept) = (self.net, &self.space, &self.x0, &self.kept);
            let built = self.exec.map(batch, |d| derive(&d, net, space, x0, kept).map(|f| (f, d)));
            for item in built {
                let (f, d) = item?;
                self.offer(f, d);
                if self.full() || self.exhausted() {
                    break;
                }
            }
        }
        Ok(())
    }
}

/// Saturates at the given points.
pub fn saturate(
    net: &Network,
    points: &[Vec<Rational>],
    budget: Budget,
) -> Result<CertStatus, OracleError> {
    saturate_with(net, points, budget, Execution::default())
}

pub fn saturate_with(
    net: &Network,
    points: &[Vec<Rational>],
    budget: Budget,
    exec: Execution,
) -> Result<CertStatus, OracleError> {
    check_mode(net)?;
    let space = PhaseSpace::new(net);
    check_points(&space, points)?;
    let x0 = build_x0(net, &space);
    let mut sat = Saturation {
        net,
        bases: vec![EchelonBasis::new(space.dim()); points.len()],
        space,
        x0,
        points,
        budget,
        exec,
        kept: Vec::new(),
        derivations: Vec::new(),
        fields_used: 0,
    };
    let mut bath = net.bath();
    bath.sort_by(|&a, &b| net.cmp_ids(a, b));
    let seeds: Vec<Derivation> = bath
        .iter()
        .map(|&v| Derivation::Seed {
            vertex: net.id(v).to_string(),
        })
        .collect();
    sat.run_phase(seeds)?;
    let mut history = vec![sat.ranks()];
    let mut frontier = 0..sat.kept.len();
    let mut generations = 0;
    while generations < budget.max_generations
        && !frontier.is_empty()
        && !sat.full()
        && !sat.exhausted()
    {
        generations += 1;
        let start = sat.kept.len();

        sat.run_phase(frontier.clone().map(|of| Derivation::Drift { of }).collect())?;

        let known = sat.kept.len();
        let doubles = frontier
            .clone()
            .flat_map(|left| (0..known).map(move |right| Derivation::Double { left, right }))
            .collect();
        sat.run_phase(doubles)?;

        let known = sat.kept.len();
        // each unordered pair inside the frontier once
        let brackets = frontier
            .clone()
            .flat_map(|left| {
                (0..known)
                    .filter(move |&right| right > left || right < frontier.start)
                    .map(move |right| Derivation::Bracket { left, right })
            })
            .collect();
        sat.run_phase(brackets)?;

        let products = frontier
            .clone()
            .flat_map(|of| (0..net.edges().len()).map(move |edge| Derivation::Product { edge, of }))
            .collect();
        sat.run_phase(products)?;

        history.push(sat.ranks());
        frontier = start..sat.kept.len();
    }
    let status = if sat.full() {
        Certification::Certified
    } else {
        Certification::Inconclusive
    };
    Ok(CertStatus {
        status,
        dim: sat.space.dim(),
        points: points.to_vec(),
        ranks: sat.ranks(),
        rank_history: history,
        fields_used: sat.fields_used,
        generations,
        seed: None,
        fields: sat.derivations,
    })
}

/// Saturates at `count` seeded random points.
pub fn saturate_random(
    net: &Network,
    count: usize,
    seed: u64,
    budget: Budget,
    exec: Execution,
) -> Result<CertStatus, OracleError> {
    let points = sample_points(2 * net.len(), count, seed);
    let mut cert = saturate_with(net, &points, budget, exec)?;
    cert.seed = Some(seed);
    Ok(cert)
}

fn rebuild(
    net: &Network,
    fields: &[Derivation],
    points: &[Vec<Rational>],
) -> Result<(PhaseSpace, Vec<VectorField>), OracleError> {
    check_mode(net)?;
    let space = PhaseSpace::new(net);
    check_points(&space, points)?;
    let x0 = build_x0(net, &space);
    let mut built: Vec<VectorField> = Vec::with_capacity(fields.len());
    for (i, d) in fields.iter().enumerate() {
        if d.parents().iter().any(|&p| p >= i) {
            return Err(OracleError::Certificate(format!("field {i} references a later field")));
        }
        built.push(derive(d, net, &space, &x0, &built)?);
    }
    Ok((space, built))
}

fn spans_at(space: &PhaseSpace, built: &[VectorField], x: &[Rational]) -> EchelonBasis {
    let mut basis = EchelonBasis::new(space.dim());
    for f in built {
        basis.insert(evaluate_at(f, x));
    }
    basis
}

/// Rebuilds every listed field from its derivation and returns the rank of
/// their values at each point.
pub fn replay(
    net: &Network,
    fields: &[Derivation],
    points: &[Vec<Rational>],
) -> Result<Vec<usize>, OracleError> {
    let (space, built) = rebuild(net, fields, points)?;
    Ok(points.iter().map(|x| spans_at(&space, &built, x).rank()).collect())
}

/// Whether the constant vector `v` lies in the span of the certificate's
/// fields, at each of its points.
pub fn in_span(net: &Network, cert: &CertStatus, v: &[Rational]) -> Result<Vec<bool>, OracleError> {
    let (space, built) = rebuild(net, &cert.fields, &cert.points)?;
    if v.len() != space.dim() {
        return Err(OracleError::Point(format!(
            "vector has {} coordinates, expected {}",
            v.len(),
            space.dim()
        )));
    }
    Ok(cert
        .points
        .iter()
        .map(|x| spans_at(&space, &built, x).contains(v))
        .collect())
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CertificateDoc {
    status: Certification,
    dim: usize,
    points: Vec<serde_json::Value>,
    ranks: Vec<usize>,
    rank_history: Vec<Vec<usize>>,
    fields_used: usize,
    generations: usize,
    seed: Option<u64>,
    fields: Vec<Derivation>,
}

pub fn certificate_to_json(net: &Network, cert: &CertStatus) -> serde_json::Value {
    let space = PhaseSpace::new(net);
    let doc = CertificateDoc {
        status: cert.status,
        dim: cert.dim,
        points: cert.points.iter().map(|x| space.point_to_json(x)).collect(),
        ranks: cert.ranks.clone(),
        rank_history: cert.rank_history.clone(),
        fields_used: cert.fields_used,
        generations: cert.generations,
        seed: cert.seed,
        fields: cert.fields.clone(),
    };
    serde_json::to_value(doc).expect("certificate serializes")
}

pub fn certificate_from_json(net: &Network, text: &str) -> Result<CertStatus, OracleError> {
    let doc: CertificateDoc =
        serde_json::from_str(text).map_err(|e| OracleError::Certificate(e.to_string()))?;
    let space = PhaseSpace::new(net);
    let points = doc
        .points
        .iter()
        .map(|p| space.point_from_json(p))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(CertStatus {
        status: doc.status,
        dim: doc.dim,
        points,
        ranks: doc.ranks,
        rank_history: doc.rank_history,
        fields_used: doc.fields_used,
        generations: doc.generations,
        seed: doc.seed,
        fields: doc.fields,
    })
}

/// Re-derives the listed fields and checks the recorded ranks and status.
pub fn verify_certificate(net: &Network, cert: &CertStatus) -> Result<Vec<usize>, OracleError> {
    let dim = 2 * net.len();
    if cert.dim != dim {
        return Err(OracleError::Certificate(format!(
            "certificate is for dimension {}, network has {dim}",
            cert.dim
        )));
    }
    let ranks = replay(net, &cert.fields, &cert.points)?;
    if ranks != cert.ranks {
        return Err(OracleError::Certificate(format!(
            "recorded ranks {:?} but replay gives {:?}",
            cert.ranks, ranks
        )));
    }
    let full = ranks.iter().all(|&r| r == dim);
    if full != (cert.status == Certification::Certified) {
        return Err(OracleError::Certificate("status does not match the replayed ranks".into()));
    }
    Ok(ranks)
}
