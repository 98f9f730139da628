//! Networks of 1D particles joined by polynomial springs.
//!
//! A network document is JSON with top-level `"vertices"` and `"edges"`
//! arrays. Each edge stores one orientation: its potential is a function of
//! `q_u - q_v`. The opposite orientation is obtained by reflection and is
//! never stored.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::rational::{self, Rational};
use crate::ratpoly::{Poly, PolyError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NetworkError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("validation error: {0}")]
    Validation(String),
    #[error("unknown vertex {0:?}")]
    UnknownVertex(String),
    #[error("no edge between {0:?} and {1:?}")]
    NoSuchEdge(String, String),
    #[error("edge {{{u}, {v}}}: {source}")]
    Key {
        u: String,
        v: String,
        source: PolyError,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vertex {
    pub id: String,
    pub mass: Rational,
    /// On-site potential `U_v`; the zero polynomial when absent.
    pub pinning: Poly,
    pub gamma: Rational,
    pub bath: bool,
    /// Carried for the stochastic model only; no analysis reads it.
    pub temperature: Option<Rational>,
}

impl Vertex {
    /// A unit-mass vertex without pinning. Bath vertices get `gamma = 1`.
    pub fn unit(id: impl Into<String>, bath: bool) -> Self {
        Vertex {
            id: id.into(),
            mass: Rational::one(),
            pinning: Poly::zero(),
            gamma: if bath { Rational::one() } else { Rational::zero() },
            bath,
            temperature: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub u: String,
    pub v: String,
    /// `V_uv`, evaluated at `q_u - q_v`.
    pub potential: Poly,
}

impl Edge {
    pub fn new(u: impl Into<String>, v: impl Into<String>, potential: Poly) -> Self {
        Edge {
            u: u.into(),
            v: v.into(),
            potential,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Mode {
    /// Every interaction has degree at least 3.
    Anharmonic,
    /// Every interaction is quadratic and every pinning has degree at most 2.
    Harmonic,
    Unsupported(String),
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Anharmonic => f.write_str("anharmonic"),
            Mode::Harmonic => f.write_str("harmonic"),
            Mode::Unsupported(reason) => write!(f, "unsupported ({reason})"),
        }
    }
}

/// A validated network. Immutable once built.
#[derive(Debug, Clone)]
pub struct Network {
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
    index: HashMap<String, usize>,
    /// `(u, v)` vertex indices of each stored edge orientation.
    endpoints: Vec<(usize, usize)>,
    /// Per vertex: `(neighbor, edge index)`, sorted by neighbor id.
    adjacency: Vec<Vec<(usize, usize)>>,
    /// Vertex indices sorted by id.
    by_id: Vec<usize>,
}

impl PartialEq for Network {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices && self.edges == other.edges
    }
}

impl Eq for Network {}

impl Network {
    pub fn new(vertices: Vec<Vertex>, edges: Vec<Edge>) -> Result<Self, NetworkError> {
        let invalid = |msg: String| Err(NetworkError::Validation(msg));
        let mut index = HashMap::with_capacity(vertices.len());
        for (i, v) in vertices.iter().enumerate() {
            if v.id.is_empty() {
                return invalid(format!("vertex #{i} has an empty id"));
            }
            if index.insert(v.id.clone(), i).is_some() {
                return invalid(format!("duplicate vertex id {:?}", v.id));
            }
            if v.mass <= Rational::zero() {
                return invalid(format!(
                    "vertex {:?}: mass must be positive, got {}",
                    v.id,
                    rational::format_rational(&v.mass)
                ));
            }
            if v.gamma < Rational::zero() {
                return invalid(format!("vertex {:?}: gamma must be nonnegative", v.id));
            }
            if v.bath && v.gamma.is_zero() {
                return invalid(format!(
                    "vertex {:?}: bath vertices need gamma > 0",
                    v.id
                ));
            }
            if !v.bath && !v.gamma.is_zero() {
                return invalid(format!(
                    "vertex {:?}: gamma must be 0 for vertices outside the bath set",
                    v.id
                ));
            }
            match &v.temperature {
                Some(_) if !v.bath => {
                    return invalid(format!(
                        "vertex {:?}: temperature given for a vertex without bath",
                        v.id
                    ))
                }
                Some(t) if *t <= Rational::zero() => {
                    return invalid(format!("vertex {:?}: temperature must be positive", v.id))
                }
                _ => {}
            }
        }

        let mut endpoints = Vec::with_capacity(edges.len());
        let mut seen = HashSet::new();
        let mut adjacency = vec![Vec::new(); vertices.len()];
        for (ei, e) in edges.iter().enumerate() {
            let u = *index.get(&e.u).ok_or_else(|| {
                NetworkError::Validation(format!(
                    "edge {{{}, {}}}: unknown endpoint {:?}",
                    e.u, e.v, e.u
                ))
            })?;
            let v = *index.get(&e.v).ok_or_else(|| {
                NetworkError::Validation(format!(
                    "edge {{{}, {}}}: unknown endpoint {:?}",
                    e.u, e.v, e.v
                ))
            })?;
            if u == v {
                return invalid(format!("self-edge on vertex {:?}", e.u));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return invalid(format!("duplicate edge {{{}, {}}}", e.u, e.v));
            }
            if e.potential.degree().is_none_or(|d| d < 2) {
                return invalid(format!(
                    "edge {{{}, {}}}: interaction potential must have degree >= 2",
                    e.u, e.v
                ));
            }
            endpoints.push((u, v));
            adjacency[u].push((v, ei));
            adjacency[v].push((u, ei));
        }

        let mut by_id: Vec<usize> = (0..vertices.len()).collect();
        by_id.sort_by(|&a, &b| vertices[a].id.cmp(&vertices[b].id));
        for adj in adjacency.iter_mut() {
            adj.sort_by(|a, b| vertices[a.0].id.cmp(&vertices[b.0].id));
        }

        Ok(Network {
            vertices,
            edges,
            index,
            endpoints,
            adjacency,
            by_id,
        })
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertex(&self, i: usize) -> &Vertex {
        &self.vertices[i]
    }

    pub fn id(&self, i: usize) -> &str {
        &self.vertices[i].id
    }

    pub fn index_of(&self, id: &str) -> Result<usize, NetworkError> {
        self.index
            .get(id)
            .copied()
            .ok_or_else(|| NetworkError::UnknownVertex(id.to_string()))
    }

    /// Vertex indices in ascending id order.
    pub fn indices_by_id(&self) -> &[usize] {
        &self.by_id
    }

    pub fn cmp_ids(&self, a: usize, b: usize) -> Ordering {
        self.vertices[a].id.cmp(&self.vertices[b].id)
    }

    pub fn edge_endpoints(&self, e: usize) -> (usize, usize) {
        self.endpoints[e]
    }

    /// Bath vertices in input order.
    pub fn bath(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.vertices[i].bath).collect()
    }

    /// Neighbors of `v` as `(neighbor, edge index)`, ascending neighbor id.
    pub fn adjacent(&self, v: usize) -> &[(usize, usize)] {
        &self.adjacency[v]
    }

    pub fn neighbor_indices(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adjacency[v].iter().map(|&(u, _)| u)
    }

    pub fn neighbors(&self, v: &str) -> Result<BTreeSet<String>, NetworkError> {
        let i = self.index_of(v)?;
        Ok(self
            .neighbor_indices(i)
            .map(|u| self.vertices[u].id.clone())
            .collect())
    }

    pub fn edge_between(&self, a: usize, b: usize) -> Option<usize> {
        self.adjacency[a]
            .iter()
            .find(|&&(u, _)| u == b)
            .map(|&(_, e)| e)
    }

    pub fn is_connected(&self) -> bool {
        if self.vertices.is_empty() {
            return true;
        }
        let mut seen = vec![false; self.len()];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for u in self.neighbor_indices(v) {
                if !seen[u] {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// `V_cv` as a function of `q_c - q_v`, by vertex index.
    pub fn interaction_between(&self, c: usize, v: usize) -> Option<Poly> {
        let e = self.edge_between(c, v)?;
        let (u, _) = self.endpoints[e];
        let stored = &self.edges[e].potential;
        Some(if u == c {
            stored.clone()
        } else {
            stored.reflect()
        })
    }

    pub fn interaction_from(&self, c: &str, v: &str) -> Result<Poly, NetworkError> {
        let (ci, vi) = (self.index_of(c)?, self.index_of(v)?);
        self.interaction_between(ci, vi)
            .ok_or_else(|| NetworkError::NoSuchEdge(c.to_string(), v.to_string()))
    }

    /// Adjusted representation of `V''_cv / (m_c m_v)` and its shift, by index.
    pub fn class_key_between(&self, c: usize, v: usize) -> Result<(Poly, Rational), NetworkError> {
        let potential = self.interaction_between(c, v).ok_or_else(|| {
            NetworkError::NoSuchEdge(self.id(c).to_string(), self.id(v).to_string())
        })?;
        let masses = &self.vertices[c].mass * &self.vertices[v].mass;
        let curvature = potential.derivative().derivative().scale(&masses.recip());
        curvature
            .adjusted_representation()
            .map_err(|source| NetworkError::Key {
                u: self.id(c).to_string(),
                v: self.id(v).to_string(),
                source,
            })
    }

    pub fn class_key(&self, c: &str, v: &str) -> Result<(Poly, Rational), NetworkError> {
        let (ci, vi) = (self.index_of(c)?, self.index_of(v)?);
        self.class_key_between(ci, vi)
    }

    pub fn mode(&self) -> Mode {
        validate_mode(self)
    }

    /// True when every force is affine in the coordinates: quadratic
    /// springs and pinning of degree at most 2.
    pub fn has_linear_forces(&self) -> bool {
        self.edges.iter().all(|e| e.potential.degree() == Some(2))
            && self
                .vertices
                .iter()
                .all(|v| v.pinning.degree().is_none_or(|d| d <= 2))
    }
}

/// Classifies a network. An edgeless network counts as anharmonic.
pub fn validate_mode(net: &Network) -> Mode {
    let describe = |e: &Edge| format!("{{{}, {}}}", e.u, e.v);
    let quadratic: Vec<&Edge> = net
        .edges
        .iter()
        .filter(|e| e.potential.degree() == Some(2))
        .collect();
    if quadratic.is_empty() {
        return Mode::Anharmonic;
    }
    if quadratic.len() < net.edges.len() {
        let anharmonic = net
            .edges
            .iter()
            .find(|e| e.potential.degree() != Some(2))
            .map(describe)
            .unwrap_or_default();
        return Mode::Unsupported(format!(
            "mixed harmonic and anharmonic springs: {} is quadratic, {} is not",
            describe(quadratic[0]),
            anharmonic
        ));
    }
    if let Some(v) = net
        .vertices
        .iter()
        .find(|v| v.pinning.degree().is_some_and(|d| d > 2))
    {
        return Mode::Unsupported(format!(
            "harmonic springs with anharmonic pinning on vertex {:?}",
            v.id
        ));
    }
    Mode::Harmonic
}

// ---------------------------------------------------------------------------
// Documents
// ---------------------------------------------------------------------------

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct VertexDoc {
    id: String,
    #[serde(with = "rational::serde_rational")]
    mass: Rational,
    #[serde(with = "rational::serde_rational")]
    gamma: Rational,
    bath: bool,
    #[serde(
        default,
        skip_serializing_if = "Option::is_none",
        with = "rational::serde_opt_rational"
    )]
    temperature: Option<Rational>,
    #[serde(
        default,
        skip_serializing_if = "Vec::is_empty",
        with = "rational::serde_rational_vec"
    )]
    pinning: Vec<Rational>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeDoc {
    u: String,
    v: String,
    #[serde(with = "rational::serde_rational_vec")]
    potential: Vec<Rational>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NetworkDoc {
    vertices: Vec<VertexDoc>,
    edges: Vec<EdgeDoc>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ShapeEdgeDoc {
    u: String,
    v: String,
    #[serde(default)]
    #[allow(dead_code)]
    potential: Option<serde_json::Value>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ShapeDoc {
    vertices: Vec<VertexDoc>,
    edges: Vec<ShapeEdgeDoc>,
}

fn vertex_from_doc(d: VertexDoc) -> Vertex {
    Vertex {
        id: d.id,
        mass: d.mass,
        pinning: Poly::new(d.pinning),
        gamma: d.gamma,
        bath: d.bath,
        temperature: d.temperature,
    }
}

pub fn parse_network(text: &str) -> Result<Network, NetworkError> {
    let doc: NetworkDoc =
        serde_json::from_str(text).map_err(|e| NetworkError::Parse(e.to_string()))?;
    let vertices = doc.vertices.into_iter().map(vertex_from_doc).collect();
    let edges = doc
        .edges
        .into_iter()
        .map(|e| Edge::new(e.u, e.v, Poly::new(e.potential)))
        .collect();
    Network::new(vertices, edges)
}

pub fn serialize_network(net: &Network) -> String {
    let doc = NetworkDoc {
        vertices: net
            .vertices
            .iter()
            .map(|v| VertexDoc {
                id: v.id.clone(),
                mass: v.mass.clone(),
                gamma: v.gamma.clone(),
                bath: v.bath,
                temperature: v.temperature.clone(),
                pinning: v.pinning.coeffs().to_vec(),
            })
            .collect(),
        edges: net
            .edges
            .iter()
            .map(|e| EdgeDoc {
                u: e.u.clone(),
                v: e.v.clone(),
                potential: e.potential.coeffs().to_vec(),
            })
            .collect(),
    };
    let mut out = serde_json::to_string_pretty(&doc).expect("network documents always serialize");
    out.push('\n');
    out
}

/// A network without interaction potentials: vertices plus undirected pairs.
#[derive(Debug, Clone)]
pub struct Shape {
    pub vertices: Vec<Vertex>,
    pub pairs: Vec<(String, String)>,
}

impl Shape {
    /// Attaches one potential per pair, in pair order.
    pub fn with_potentials(&self, potentials: Vec<Poly>) -> Result<Network, NetworkError> {
        assert_eq!(potentials.len(), self.pairs.len(), "one potential per edge");
        let edges = self
            .pairs
            .iter()
            .zip(potentials)
            .map(|((u, v), p)| Edge::new(u.clone(), v.clone(), p))
            .collect();
        Network::new(self.vertices.clone(), edges)
    }
}

impl From<&Network> for Shape {
    fn from(net: &Network) -> Self {
        Shape {
            vertices: net.vertices.clone(),
            pairs: net
                .edges
                .iter()
                .map(|e| (e.u.clone(), e.v.clone()))
                .collect(),
        }
    }
}

/// Parses a shape document: a network document whose edge potentials are
/// optional and ignored.
pub fn parse_shape(text: &str) -> Result<Shape, NetworkError> {
    let doc: ShapeDoc =
        serde_json::from_str(text).map_err(|e| NetworkError::Parse(e.to_string()))?;
    Ok(Shape {
        vertices: doc.vertices.into_iter().map(vertex_from_doc).collect(),
        pairs: doc.edges.into_iter().map(|e| (e.u, e.v)).collect(),
    })
}
