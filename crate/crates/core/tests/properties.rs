//! Algebraic laws checked exactly on randomized inputs.

mod common;

use num_traits::Zero;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use polynet::network::{parse_network, serialize_network, Edge, Network, Vertex};
use polynet::oracle::{build_x0, double_commutator, lie_bracket, MultiPoly, PhaseSpace, VectorField};
use polynet::rational::{frac, Rational};
use polynet::ratpoly::{equivalent, vandermonde_selectors, Poly};

fn rational() -> impl Strategy<Value = Rational> {
    (-40i64..=40, 1i64..=12).prop_map(|(n, d)| frac(n, d))
}

/// Polynomials of degree 1 to 6 with a nonzero leading coefficient.
fn poly() -> impl Strategy<Value = Poly> {
    (prop::collection::vec(rational(), 1..7), (1i64..=30, 1i64..=7), any::<bool>()).prop_map(
        |(mut c, (n, d), neg)| {
            c.push(frac(if neg { -n } else { n }, d));
            Poly::new(c)
        },
    )
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn shift_composes(p in poly(), a in rational(), b in rational()) {
        prop_assert_eq!(p.shift(&a).shift(&b), p.shift(&(&a + &b)));
    }

    #[test]
    fn reflect_is_an_involution(p in poly()) {
        prop_assert_eq!(p.reflect().reflect(), p);
    }

    #[test]
    fn derivative_commutes_with_shift(p in poly(), a in rational()) {
        prop_assert_eq!(p.shift(&a).derivative(), p.derivative().shift(&a));
    }

    #[test]
    fn adjusted_is_idempotent(p in poly()) {
        let (adj, delta) = p.adjusted_representation().unwrap();
        prop_assert!(adj.is_adjusted());
        prop_assert_eq!(&adj, &p.shift(&delta));
        let (again, zero) = adj.adjusted_representation().unwrap();
        prop_assert_eq!(again, adj);
        prop_assert!(zero.is_zero());
    }

    #[test]
    fn equivalence_laws(p in poly(), q in poly(), a in rational(), b in rational()) {
        let pa = p.shift(&a);
        let pab = pa.shift(&b);
        prop_assert!(equivalent(&p, &p).unwrap());
        prop_assert!(equivalent(&p, &pa).unwrap());
        prop_assert_eq!(equivalent(&p, &q).unwrap(), equivalent(&q, &p).unwrap());
        // transitivity along a chain of translates
        prop_assert!(equivalent(&pa, &pab).unwrap() && equivalent(&p, &pab).unwrap());
        // translates of q are equivalent to p exactly when q is
        prop_assert_eq!(equivalent(&p, &q.shift(&b)).unwrap(), equivalent(&p, &q).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn vandermonde_selects(
        values in prop::collection::btree_set((1i64..=25, 1i64..=5, any::<bool>()), 1..6),
        s in 0u32..3,
        pick in any::<prop::sample::Index>(),
    ) {
        let mut c: Vec<Rational> = values
            .into_iter()
            .map(|(n, d, neg)| frac(if neg { -n } else { n }, d))
            .collect();
        c.sort();
        c.dedup();
        let k = pick.index(c.len()) + 1;
        let r = vandermonde_selectors(&c, s, k).unwrap();
        for (j, cj) in c.iter().enumerate() {
            let mut total = Rational::zero();
            for (i, ri) in r.iter().enumerate() {
                total += ri * num_traits::pow(cj.clone(), i + 1 + s as usize);
            }
            let expected = if j + 1 == k { frac(1, 1) } else { Rational::zero() };
            prop_assert_eq!(total, expected);
        }
    }

    #[test]
    fn class_key_ignores_translation(seed in any::<u64>(), d in rational()) {
        let mut g = rng(seed);
        let v = common::poly(&mut g, 4);
        let net = Network::new(
            vec![Vertex::unit("c", true), Vertex::unit("a", false), Vertex::unit("b", false)],
            vec![Edge::new("c", "a", v.clone()), Edge::new("c", "b", v.shift(&d))],
        )
        .unwrap();
        let (ka, da) = net.class_key("c", "a").unwrap();
        let (kb, db) = net.class_key("c", "b").unwrap();
        prop_assert_eq!(ka, kb);
        prop_assert_eq!(da, &db + &d);
    }

    #[test]
    fn interaction_follows_orientation(seed in any::<u64>()) {
        let mut g = rng(seed);
        let v = common::poly(&mut g, 5);
        let vertices = vec![Vertex::unit("c", true), Vertex::unit("a", false)];
        let forward = Network::new(vertices.clone(), vec![Edge::new("c", "a", v.clone())]).unwrap();
        let backward = Network::new(vertices, vec![Edge::new("a", "c", v.reflect())]).unwrap();
        prop_assert_eq!(forward.interaction_from("c", "a").unwrap(), backward.interaction_from("c", "a").unwrap());
        prop_assert_eq!(forward.interaction_from("a", "c").unwrap(), v.reflect());
    }

    #[test]
    fn serialization_round_trips(seed in any::<u64>(), n in 1usize..7) {
        let mut g = rng(seed);
        let net = common::connected(&mut g, n, 3);
        let text = serialize_network(&net);
        let back = parse_network(&text).unwrap();
        prop_assert_eq!(serialize_network(&back), text);
        prop_assert_eq!(back.vertices(), net.vertices());
        prop_assert_eq!(back.edges(), net.edges());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn bracket_is_antisymmetric_and_satisfies_jacobi(seed in any::<u64>()) {
        let mut g = rng(seed);
        let (x, y, z) = (common::field(&mut g, 4), common::field(&mut g, 4), common::field(&mut g, 4));
        prop_assert_eq!(lie_bracket(&x, &y), lie_bracket(&y, &x).neg());
        let jacobi = lie_bracket(&x, &lie_bracket(&y, &z))
            .add(&lie_bracket(&y, &lie_bracket(&z, &x)))
            .add(&lie_bracket(&z, &lie_bracket(&x, &y)));
        prop_assert!(jacobi.is_zero());
    }

    #[test]
    fn bracket_obeys_leibniz(seed in any::<u64>()) {
        let mut g = rng(seed);
        let (y, z) = (common::field(&mut g, 4), common::field(&mut g, 4));
        let f = common::multipoly(&mut g, 4, 2, 3);
        let lhs = lie_bracket(&y, &z.multiply(&f));
        let rhs = z.multiply(&y.apply(&f)).add(&lie_bracket(&y, &z).multiply(&f));
        prop_assert_eq!(lhs, rhs);
    }
}

/// `Σ_v g_v(q_c - q_v) ∂_{p_v}` over the leaves of a star centered at `c`.
fn diagonal(space: &PhaseSpace, center: usize, leaves: &[usize], polys: &[Poly]) -> VectorField {
    let dim = space.dim();
    let mut f = VectorField::zero(dim);
    for (&v, g) in leaves.iter().zip(polys) {
        let x = &MultiPoly::var(dim, space.q(center)) - &MultiPoly::var(dim, space.q(v));
        f.set_component(space.p(v), MultiPoly::compose(g, &x));
    }
    f
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn double_commutator_of_diagonal_fields(seed in any::<u64>(), leaves in 1usize..4) {
        let mut g = rng(seed);
        let net = common::star(&mut g, leaves);
        let space = PhaseSpace::new(&net);
        let x0 = build_x0(&net, &space);
        let ls: Vec<usize> = (1..=leaves).collect();
        let gs: Vec<Poly> = ls.iter().map(|_| common::poly(&mut g, 4)).collect();
        let hs: Vec<Poly> = ls.iter().map(|_| common::poly(&mut g, 4)).collect();
        let y = diagonal(&space, 0, &ls, &gs);
        let z = diagonal(&space, 0, &ls, &hs);
        let products: Vec<Poly> = gs.iter().zip(&hs).map(|(a, b)| (a * b).derivative()).collect();
        prop_assert_eq!(double_commutator(&x0, &y, &z), diagonal(&space, 0, &ls, &products));
    }

    #[test]
    fn drift_bracket_moves_momenta_to_positions(seed in any::<u64>(), n in 1usize..6) {
        let mut g = rng(seed);
        let net = common::connected(&mut g, n, 2);
        let space = PhaseSpace::new(&net);
        let dim = space.dim();
        let x0 = build_x0(&net, &space);
        let members: Vec<usize> = (0..n).filter(|_| rand::Rng::random_bool(&mut g, 0.5)).collect();
        let mut sum_p = VectorField::zero(dim);
        let mut sum_q = VectorField::zero(dim);
        let mut friction = VectorField::zero(dim);
        for &v in &members {
            sum_p = sum_p.add(&VectorField::unit(dim, space.p(v)));
            sum_q = sum_q.add(&VectorField::unit(dim, space.q(v)));
            friction = friction.add(&VectorField::unit(dim, space.p(v)).scale(&net.vertex(v).gamma));
        }
        prop_assert_eq!(lie_bracket(&sum_p, &x0).add(&friction), sum_q);
    }

    #[test]
    fn diagonal_field_against_center_position(seed in any::<u64>(), leaves in 1usize..4) {
        let mut g = rng(seed);
        let net = common::star(&mut g, leaves);
        let space = PhaseSpace::new(&net);
        let ls: Vec<usize> = (1..=leaves).collect();
        let gs: Vec<Poly> = ls.iter().map(|_| common::poly(&mut g, 4)).collect();
        let y = diagonal(&space, 0, &ls, &gs);
        let dq = VectorField::unit(space.dim(), space.q(0));
        let derivs: Vec<Poly> = gs.iter().map(Poly::derivative).collect();
        prop_assert_eq!(lie_bracket(&y, &dq), diagonal(&space, 0, &ls, &derivs).neg());
    }
}
