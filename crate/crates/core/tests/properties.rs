mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use qacc::arith::{ratio, Cyclotomic};
use qacc::circuit::random::{random_circuit, GateSet};
use qacc::circuit::{Layer, LayeredCircuit};
use qacc::sim::{apply_circuit, StateVector};
use qacc::tgraph::{
    amplitude_dp, amplitude_pathsum_capped, build_from_circuit, ColorLiteral, ColorProduct, ColorSum,
};

const ORDERS: [u32; 6] = [1, 3, 4, 5, 8, 12];

fn cyclotomic() -> impl Strategy<Value = Cyclotomic> {
    (0..ORDERS.len(), prop::collection::vec((-5i64..=5, 1i64..=4, 0i64..24), 1..4)).prop_map(|(oi, terms)| {
        let order = ORDERS[oi];
        terms.into_iter().fold(Cyclotomic::zero(1), |acc, (n, d, p)| {
            &acc + &Cyclotomic::root(order, p).scale(&ratio(n, d))
        })
    })
}

fn product() -> impl Strategy<Value = ColorProduct> {
    prop::collection::vec((0u32..4, any::<bool>()), 0..4).prop_map(|ls| {
        ls.into_iter()
            .map(|(id, anti)| if anti { ColorLiteral::anticolor(id) } else { ColorLiteral::color(id) })
            .fold(ColorProduct::one(), |p, l| p.mul(&ColorProduct::literal(l)))
    })
}

fn color_sum() -> impl Strategy<Value = ColorSum> {
    prop::collection::vec((cyclotomic(), product()), 0..3).prop_map(|ts| {
        ts.into_iter().fold(ColorSum::zero(), |s, (c, p)| s.add(&ColorSum::term(c, p)))
    })
}

fn circuit(set: GateSet) -> impl Strategy<Value = (LayeredCircuit, u64)> {
    (any::<u64>(), 1usize..=5, 0usize..=4).prop_map(move |(seed, lines, layers)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_circuit(&mut rng, lines, layers, set);
        (c, seed % (1 << lines))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_laws(a in cyclotomic(), b in cyclotomic(), c in cyclotomic()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a - &a, Cyclotomic::zero(1));
        prop_assert_eq!((&a * &b).conj(), &a.conj() * &b.conj());
    }

    #[test]
    fn abs2_is_nonnegative_real(a in cyclotomic()) {
        let p = a.abs2();
        prop_assert_eq!(p.conj(), p.clone());
        prop_assert!(p.to_complex().re >= -1e-9);
        prop_assert_eq!(p.is_zero(), a.is_zero());
    }

    #[test]
    fn color_products(p in product(), q in product(), r in product(), id in 0u32..4) {
        prop_assert_eq!(p.mul(&q), q.mul(&p));
        // associative whenever no color occurs more than twice, as on any graph path
        let mut seen = std::collections::BTreeMap::<u32, usize>::new();
        for id in p.ids().chain(q.ids()).chain(r.ids()) {
            *seen.entry(id).or_default() += 1;
        }
        if seen.values().all(|&k| k <= 2) {
            prop_assert_eq!(p.mul(&q).mul(&r), p.mul(&q.mul(&r)));
        }
        prop_assert_eq!(p.mul(&ColorProduct::one()), p.clone());
        let c = ColorProduct::literal(ColorLiteral::color(id));
        let nc = ColorProduct::literal(ColorLiteral::anticolor(id));
        prop_assert!(c.mul(&c).is_one());
        prop_assert!(nc.mul(&nc).is_one());
        prop_assert!(c.mul(&nc).is_annihilated());
        prop_assert!(p.mul(&ColorProduct::zero()).is_annihilated());
    }

    #[test]
    fn color_sums_distribute(a in color_sum(), b in color_sum(), c in color_sum()) {
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.add(&ColorSum::zero()), a.clone());
    }

    #[test]
    fn graph_matches_simulators((c, z) in circuit(GateSet::Standard)) {
        let g = build_from_circuit(&c, z).unwrap();
        let lib = apply_circuit(&StateVector::basis(c.num_lines(), z), &c).unwrap();
        let reference = common::run_basis(&c, z);
        let zero = Cyclotomic::zero(1);
        for x in 0..1u64 << c.num_lines() {
            let a = amplitude_dp(&g, x).unwrap();
            prop_assert_eq!(&a, &lib.amplitude(x));
            prop_assert_eq!(&a, reference.get(&x).unwrap_or(&zero));
            if g.path_count() <= 2_000 {
                prop_assert_eq!(amplitude_pathsum_capped(&g, x, 2_000).unwrap(), a);
            }
        }
    }

    #[test]
    fn graph_invariants((c, z) in circuit(GateSet::Rational)) {
        let mut g = build_from_circuit(&LayeredCircuit::empty(c.num_lines()), z).unwrap();
        for layer in &c.layers {
            let before = g.width();
            g.apply_layer(layer).unwrap();
            if matches!(layer, Layer::Cnot { .. }) {
                prop_assert!(g.width() <= 2 * before);
            }
            prop_assert!(g.check_color_consistency().consistent());
            g.validate().unwrap();
        }
    }

    #[test]
    fn simulation_preserves_norm((c, z) in circuit(GateSet::Standard)) {
        let out = apply_circuit(&StateVector::basis(c.num_lines(), z), &c).unwrap();
        prop_assert!(out.norm_squared().is_one());
        let back = apply_circuit(&out, &c.inverse()).unwrap();
        prop_assert_eq!(back, StateVector::basis(c.num_lines(), z));
    }

    #[test]
    fn circuit_json_round_trips((c, _) in circuit(GateSet::Standard)) {
        let text = c.to_json();
        prop_assert_eq!(LayeredCircuit::from_json(&text).unwrap(), c);
    }
}
