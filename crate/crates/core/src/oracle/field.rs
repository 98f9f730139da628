//! Polynomial vector fields on phase space and their brackets.

use std::collections::BTreeMap;

use num_traits::Zero;

use super::multipoly::MultiPoly;
use super::OracleError;
use crate::network::Network;
use crate::rational::{format_rational, parse_rational, Rational};

/// Coordinate layout of `R^{2n}`: positions `q_v` first, then momenta `p_v`,
/// each block in ascending vertex id order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhaseSpace {
    slot: Vec<usize>,
    names: Vec<String>,
}

impl PhaseSpace {
    pub fn new(net: &Network) -> Self {
        let n = net.len();
        let mut slot = vec![0; n];
        let mut names = vec![String::new(); 2 * n];
        for (rank, &v) in net.indices_by_id().iter().enumerate() {
            slot[v] = rank;
            names[rank] = format!("q_{}", net.id(v));
            names[n + rank] = format!("p_{}", net.id(v));
        }
        PhaseSpace { slot, names }
    }

    pub fn vertices(&self) -> usize {
        self.slot.len()
    }

    pub fn dim(&self) -> usize {
        2 * self.slot.len()
    }

    /// Coordinate index of `q_v` for vertex index `v`.
    pub fn q(&self, v: usize) -> usize {
        self.slot[v]
    }

    pub fn p(&self, v: usize) -> usize {
        self.slot.len() + self.slot[v]
    }

    pub fn name(&self, coord: usize) -> &str {
        &self.names[coord]
    }

    pub fn coordinate(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// A point as a JSON object keyed by coordinate name.
    pub fn point_to_json(&self, x: &[Rational]) -> serde_json::Value {
        let map: serde_json::Map<String, serde_json::Value> = self
            .names
            .iter()
            .zip(x)
            .map(|(n, v)| (n.clone(), serde_json::Value::String(format_rational(v))))
            .collect();
        serde_json::Value::Object(map)
    }

    pub fn point_from_json(&self, value: &serde_json::Value) -> Result<Vec<Rational>, OracleError> {
        let obj = value
            .as_object()
            .ok_or_else(|| OracleError::Point("point must be a JSON object".into()))?;
        let mut out: Vec<Option<Rational>> = vec![None; self.dim()];
        for (name, v) in obj {
            let i = self
                .coordinate(name)
                .ok_or_else(|| OracleError::Point(format!("unknown coordinate {name:?}")))?;
            let text = v
                .as_str()
                .ok_or_else(|| OracleError::Point(format!("{name}: value must be a string")))?;
            out[i] = Some(parse_rational(text).map_err(|e| OracleError::Point(e.to_string()))?);
        }
        out.into_iter()
            .enumerate()
            .map(|(i, v)| v.ok_or_else(|| OracleError::Point(format!("missing {}", self.names[i]))))
            .collect()
    }
}

/// A vector field with one polynomial component per phase coordinate.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VectorField {
    comps: Vec<MultiPoly>,
}

impl VectorField {
    pub fn zero(dim: usize) -> Self {
        VectorField {
            comps: vec![MultiPoly::zero(dim); dim],
        }
    }

    /// The constant field `∂_i`.
    pub fn unit(dim: usize, i: usize) -> Self {
        let mut f = Self::zero(dim);
        f.comps[i] = MultiPoly::one(dim);
        f
    }

    pub fn from_components(comps: Vec<MultiPoly>) -> Self {
        let dim = comps.len();
        assert!(comps.iter().all(|c| c.nvars() == dim), "component arity mismatch");
        VectorField { comps }
    }

    pub fn dim(&self) -> usize {
        self.comps.len()
    }

    pub fn component(&self, i: usize) -> &MultiPoly {
        &self.comps[i]
    }

    pub fn set_component(&mut self, i: usize, p: MultiPoly) {
        assert_eq!(p.nvars(), self.dim());
        self.comps[i] = p;
    }

    /// Nonzero components as `(coordinate, polynomial)`.
    pub fn support(&self) -> impl Iterator<Item = (usize, &MultiPoly)> {
        self.comps.iter().enumerate().filter(|(_, c)| !c.is_zero())
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(MultiPoly::is_zero)
    }

    pub fn degree(&self) -> Option<u32> {
        self.comps.iter().filter_map(MultiPoly::degree).max()
    }

    pub fn add(&self, other: &Self) -> Self {
        VectorField {
            comps: self.comps.iter().zip(&other.comps).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        VectorField {
            comps: self.comps.iter().zip(&other.comps).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        VectorField {
            comps: self.comps.iter().map(|a| -a).collect(),
        }
    }

    pub fn scale(&self, s: &Rational) -> Self {
        VectorField {
            comps: self.comps.iter().map(|a| a.scale(s)).collect(),
        }
    }

    /// `f · F` for a scalar polynomial `f`.
    pub fn multiply(&self, f: &MultiPoly) -> Self {
        VectorField {
            comps: self.comps.iter().map(|a| a * f).collect(),
        }
    }

    /// Directional derivative `F(f) = Σ_j F_j ∂_j f`.
    pub fn apply(&self, f: &MultiPoly) -> MultiPoly {
        let mut acc = MultiPoly::zero(self.dim());
        for (j, fj) in self.support() {
            if f.depends_on(j) {
                acc = &acc + &(fj * &f.partial(j));
            }
        }
        acc
    }
}

/// The drift of the network: `q̇_v = p_v / m_v`,
/// `ṗ_v = −U'_v(q_v) − Σ_{e∋v} ∂_{q_v} V_e − γ_v p_v`.
pub fn build_x0(net: &Network, space: &PhaseSpace) -> VectorField {
    let dim = space.dim();
    let mut x0 = VectorField::zero(dim);
    for (v, vertex) in net.vertices().iter().enumerate() {
        let q = MultiPoly::var(dim, space.q(v));
        let p = MultiPoly::var(dim, space.p(v));
        x0.comps[space.q(v)] = p.scale(&vertex.mass.recip());
        let pin_force = MultiPoly::compose(&vertex.pinning.derivative(), &q);
        let friction = p.scale(&vertex.gamma);
        x0.comps[space.p(v)] = &(-&pin_force) - &friction;
    }
    for (e, edge) in net.edges().iter().enumerate() {
        let (u, v) = net.edge_endpoints(e);
        let x = &MultiPoly::var(dim, space.q(u)) - &MultiPoly::var(dim, space.q(v));
        // V(q_u - q_v): the force on u is -V', on v it is +V'
        let force = MultiPoly::compose(&edge.potential.derivative(), &x);
        x0.comps[space.p(u)] = &x0.comps[space.p(u)] - &force;
        x0.comps[space.p(v)] = &x0.comps[space.p(v)] + &force;
    }
    x0
}

/// `[Y, Z]_i = Σ_j (Y_j ∂_j Z_i − Z_j ∂_j Y_i)`.
pub fn lie_bracket(y: &VectorField, z: &VectorField) -> VectorField {
    assert_eq!(y.dim(), z.dim(), "field dimension mismatch");
    VectorField {
        comps: (0..y.dim())
            .map(|i| &y.apply(&z.comps[i]) - &z.apply(&y.comps[i]))
            .collect(),
    }
}

/// `[[X_0, Y], Z]`.
pub fn double_commutator(x0: &VectorField, y: &VectorField, z: &VectorField) -> VectorField {
    lie_bracket(&lie_bracket(x0, y), z)
}

/// Exact component values at `x`, in coordinate order.
pub fn evaluate_at(f: &VectorField, x: &[Rational]) -> Vec<Rational> {
    f.comps
        .iter()
        .map(|c| if c.is_zero() { Rational::zero() } else { c.eval(x) })
        .collect()
}

/// Named nonzero components, for display.
pub fn describe(f: &VectorField, space: &PhaseSpace) -> BTreeMap<String, String> {
    f.support()
        .map(|(i, c)| (space.name(i).to_string(), format!("{c:?}")))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::{Edge, Vertex};
    use crate::rational::int;
    use crate::ratpoly::Poly;

    fn oscillator() -> Network {
        let mut v = Vertex::unit("a", true);
        v.pinning = Poly::from_ints(&[0, 0, 1]).scale(&crate::rational::frac(1, 2));
        Network::new(vec![v], vec![]).unwrap()
    }

    #[test]
    fn damped_oscillator_drift() {
        let net = oscillator();
        let s = PhaseSpace::new(&net);
        let x0 = build_x0(&net, &s);
        assert_eq!(x0.component(0), &MultiPoly::var(2, 1));
        let expected = &(-&MultiPoly::var(2, 0)) - &MultiPoly::var(2, 1);
        assert_eq!(x0.component(1), &expected);
        assert_eq!(evaluate_at(&x0, &[int(1), int(0)]), vec![int(0), int(-1)]);
    }

    #[test]
    fn free_particle_brackets() {
        let net = Network::new(vec![Vertex::unit("a", false)], vec![]).unwrap();
        let s = PhaseSpace::new(&net);
        let x0 = build_x0(&net, &s);
        let dp = VectorField::unit(2, s.p(0));
        let dq = VectorField::unit(2, s.q(0));
        assert_eq!(lie_bracket(&dp, &x0), dq);
        assert!(lie_bracket(&dp, &dq).is_zero());
        assert!(double_commutator(&x0, &dp, &dp).is_zero());
    }

    #[test]
    fn cubic_spring_forces() {
        let net = Network::new(
            vec![Vertex::unit("1", false), Vertex::unit("2", false)],
            vec![Edge::new("1", "2", Poly::from_ints(&[0, 0, 0, 1]))],
        )
        .unwrap();
        let s = PhaseSpace::new(&net);
        let x0 = build_x0(&net, &s);
        let x = &MultiPoly::var(4, 0) - &MultiPoly::var(4, 1);
        let three_x2 = MultiPoly::compose(&Poly::from_ints(&[0, 0, 3]), &x);
        assert_eq!(x0.component(s.p(0)), &(-&three_x2));
        assert_eq!(x0.component(s.p(1)), &three_x2);
        assert_eq!(s.name(s.p(1)), "p_2");
    }

    #[test]
    fn point_json_round_trip() {
        let net = oscillator();
        let s = PhaseSpace::new(&net);
        let x = vec![int(3), crate::rational::frac(-1, 2)];
        let j = s.point_to_json(&x);
        assert_eq!(j["p_a"], "-1/2");
        assert_eq!(s.point_from_json(&j).unwrap(), x);
        assert!(s.point_from_json(&serde_json::json!({"q_a": "1"})).is_err());
    }
}
