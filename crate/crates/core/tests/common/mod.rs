//! Seeded generators shared by the integration tests.

#![allow(dead_code)]

use num_bigint::BigInt;
use rand::Rng;

use polynet::network::{Edge, Network, Vertex};
use polynet::oracle::{MultiPoly, VectorField};
use polynet::rational::Rational;
use polynet::ratpoly::Poly;

pub fn rational(rng: &mut impl Rng) -> Rational {
    let n: i64 = rng.random_range(-9..=9);
    let d: i64 = rng.random_range(1..=6);
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn nonzero_rational(rng: &mut impl Rng) -> Rational {
    loop {
        let r = rational(rng);
        if r != Rational::from_integer(0.into()) {
            return r;
        }
    }
}

/// A polynomial of exact degree `deg`.
pub fn poly(rng: &mut impl Rng, deg: usize) -> Poly {
    let mut c: Vec<Rational> = (0..deg).map(|_| rational(rng)).collect();
    c.push(nonzero_rational(rng));
    Poly::new(c)
}

pub fn multipoly(rng: &mut impl Rng, nvars: usize, max_deg: u16, terms: usize) -> MultiPoly {
    let items: Vec<(Vec<u16>, Rational)> = (0..terms)
        .map(|_| {
            let mut e = vec![0u16; nvars];
            let mut budget = rng.random_range(0..=max_deg);
            while budget > 0 {
                e[rng.random_range(0..nvars)] += 1;
                budget -= 1;
            }
            (e, rational(rng))
        })
        .collect();
    MultiPoly::from_terms(nvars, items)
}

pub fn field(rng: &mut impl Rng, dim: usize) -> VectorField {
    VectorField::from_components((0..dim).map(|_| multipoly(rng, dim, 2, 2)).collect())
}

/// A star: bath center `c` with leaves `v1..vn`, unit masses.
pub fn star(rng: &mut impl Rng, leaves: usize) -> Network {
    let mut vertices = vec![Vertex::unit("c", true)];
    let mut edges = Vec::new();
    for i in 1..=leaves {
        let id = format!("v{i}");
        vertices.push(Vertex::unit(id.clone(), false));
        let deg = rng.random_range(3..=4);
        edges.push(Edge::new("c", id, poly(rng, deg)));
    }
    Network::new(vertices, edges).unwrap()
}

/// A random connected network on `n` unit-mass vertices: a random spanning
/// tree plus extra edges, random potentials of degree 3 or 4, and a random
/// nonempty bath.
pub fn connected(rng: &mut impl Rng, n: usize, extra: usize) -> Network {
    let ids: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
    let mut pairs: Vec<(usize, usize)> = (1..n).map(|i| (rng.random_range(0..i), i)).collect();
    for _ in 0..extra {
        let a = rng.random_range(0..n);
        let b = rng.random_range(0..n);
        let fresh = a != b && !pairs.iter().any(|&(u, v)| (u, v) == (a, b) || (u, v) == (b, a));
        if fresh {
            pairs.push((a, b));
        }
    }
    let bath0 = rng.random_range(0..n);
    let vertices = (0..n)
        .map(|i| Vertex::unit(ids[i].clone(), i == bath0 || rng.random_bool(0.15)))
        .collect();
    let edges = pairs
        .into_iter()
        .map(|(u, v)| {
            let deg = rng.random_range(3..=4);
            Edge::new(ids[u].clone(), ids[v].clone(), poly(rng, deg))
        })
        .collect();
    Network::new(vertices, edges).unwrap()
}
