use std::sync::{Arc, OnceLock};

use finlie_core::decomp::{iwahori_decompose, BruhatFrame};
use finlie_core::group::{build_group, Group, Mat, Preset};
use finlie_core::oracle::Naive;
use finlie_core::ring::{extend, make_ring, Elem, Ring, RingKind};
use finlie_core::torus::{make_torus, FixedGroup};
use finlie_core::Budget;
use proptest::prelude::*;

use RingKind::{EqualChar, Witt};

const RINGS: [(u32, u32, u32, RingKind); 7] = [
    (2, 2, 1, Witt),
    (2, 3, 1, Witt),
    (3, 2, 1, Witt),
    (2, 2, 1, EqualChar),
    (3, 2, 1, EqualChar),
    (2, 2, 2, Witt),
    (2, 1, 2, Witt),
];

fn ring(i: usize) -> Arc<Ring> {
    let (p, r, n, k) = RINGS[i];
    make_ring(p, r, n, k).unwrap()
}

fn groups() -> &'static Vec<Group> {
    static G: OnceLock<Vec<Group>> = OnceLock::new();
    G.get_or_init(|| {
        let mut out = Vec::new();
        for i in 0..RINGS.len() {
            for preset in [Preset::SL2, Preset::GL2, Preset::SL3, Preset::Sp4] {
                out.push(build_group(preset, ring(i), 0).unwrap());
            }
        }
        out
    })
}

/// Product of root elements `p_{a}(π^k u)` and, for GL, one diagonal factor.
fn word(g: &Group, steps: &[(usize, u32, u32)], depth: u32) -> Mat {
    let r = g.ring();
    let pi = r.uniformizer();
    let roots = g.datum().root_count();
    let mut x = g.identity();
    for &(a, u, k) in steps {
        let v = r.mul(r.pow(pi, (k + depth) as u64), u % r.card());
        x = g.mul(&x, &g.root_element(a % roots, v));
    }
    x
}

fn steps() -> impl Strategy<Value = Vec<(usize, u32, u32)>> {
    prop::collection::vec((0usize..24, any::<u32>(), 0u32..3), 0..8)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn ring_laws(i in 0..RINGS.len(), a in any::<u32>(), b in any::<u32>(), c in any::<u32>(), j in 0u64..6) {
        let r = ring(i);
        let (a, b, c) = (a % r.card(), b % r.card(), c % r.card());
        prop_assert_eq!(r.mul(a, r.mul(b, c)), r.mul(r.mul(a, b), c));
        prop_assert_eq!(r.mul(a, r.add(b, c)), r.add(r.mul(a, b), r.mul(a, c)));
        prop_assert_eq!(r.mul(a, b), r.mul(b, a));
        prop_assert_eq!(r.add(a, r.neg(a)), r.zero());
        prop_assert_eq!(r.sigma_pow(r.mul(a, b), j), r.mul(r.sigma_pow(a, j), r.sigma_pow(b, j)));
        prop_assert_eq!(r.sigma_pow(r.add(a, b), j), r.add(r.sigma_pow(a, j), r.sigma_pow(b, j)));
        if r.is_unit(a) {
            prop_assert_eq!(r.mul(a, r.inv(a).unwrap()), r.one());
        } else {
            prop_assert!(r.inv(a).is_err());
            prop_assert!(r.valuation(a) >= 1);
        }
    }

    #[test]
    fn norm_is_multiplicative(i in 0..RINGS.len(), deg in 2u32..4, a in any::<u32>(), b in any::<u32>()) {
        let (big, emb) = extend(&ring(i), deg).unwrap();
        let (a, b) = (a % big.card(), b % big.card());
        let n = |x| big.norm(x, 1, deg).unwrap();
        prop_assert_eq!(n(big.mul(a, b)), big.mul(n(a), n(b)));
        let na = n(a);
        prop_assert_eq!(big.frob(na, 1), na);
        let small = emb.small();
        let pre = (0..small.card()).find(|&s| emb.apply(s) == na);
        prop_assert!(pre.is_some());
    }

    #[test]
    fn arithmetic_matches_naive(gi in 0..28usize, s in steps(), t in steps()) {
        let g = &groups()[gi];
        let nv = Naive::new(g);
        let (x, y) = (word(g, &s, 0), word(g, &t, 0));
        prop_assert_eq!(g.mul(&x, &y), nv.mul(&x, &y));
        prop_assert_eq!(g.inv(&x), nv.inv(&x));
        prop_assert_eq!(g.det(&x), nv.det(&x));
        prop_assert_eq!(g.level(&x), nv.level(&x));
        prop_assert!(g.is_member(&x) && nv.is_member(&x));
        prop_assert_eq!(g.commutator(&x, &y), nv.commutator(&x, &y));
    }

    #[test]
    fn commutators_deepen(gi in 0..28usize, s in steps(), t in steps(), i in 0u32..3, j in 0u32..3) {
        let g = &groups()[gi];
        let nv = Naive::new(g);
        let (x, y) = (word(g, &s, i), word(g, &t, j));
        let (lx, ly) = (nv.level(&x), nv.level(&y));
        let r = g.ring().r();
        prop_assert!(nv.level(&nv.commutator(&x, &y)) >= (lx + ly).min(r));
    }

    #[test]
    fn iwahori_round_trip(gi in 0..28usize, s in steps()) {
        let g = &groups()[gi];
        let x = word(g, &s, 1);
        let rec = iwahori_decompose(g, &x).unwrap();
        prop_assert_eq!(g.mul_all(&[&rec.u_minus, &rec.t, &rec.u]), x);
        prop_assert!(g.is_lower_unitriangular(&rec.u_minus));
        prop_assert!(g.is_diagonal(&rec.t));
        prop_assert!(g.is_upper_unitriangular(&rec.u));
    }

    #[test]
    fn bruhat_round_trip(gi in 0..28usize, s in steps(), w in 0usize..48, longest in any::<bool>()) {
        let g = &groups()[gi];
        let nw = g.datum().weyl().len();
        let x = g.mul(&g.weyl_rep(w % nw), &word(g, &s, 0));
        let v = if longest { g.datum().weyl_longest() } else { 0 };
        let frame = BruhatFrame::new(g, v);
        let rec = frame.decompose(g, &x).unwrap();
        prop_assert_eq!(frame.compose(g, &rec), x);
        prop_assert!(frame.is_valid(g, &rec));
    }

    #[test]
    fn characters_are_homomorphisms(i in 0..RINGS.len(), w in 0usize..2, k in any::<usize>(), a in any::<usize>(), b in any::<usize>()) {
        let g = build_group(Preset::GL2, ring(i), 0).unwrap();
        let t = make_torus(&g, w).unwrap();
        let tf: FixedGroup = t.fixed_group(1, Budget::default()).unwrap();
        let els = tf.structure.elements();
        let (x, y) = (&els[a % els.len()], &els[b % els.len()]);
        let ch = tf.structure.character(k % tf.structure.order());
        let xy = tf.ambient.group.mul(x, y);
        let sum = tf.value(&ch, x).unwrap() + tf.value(&ch, y).unwrap();
        let v = tf.value(&ch, &xy).unwrap();
        prop_assert_eq!(v, sum - sum.floor());
    }
}

#[test]
fn residue_field_orders() {
    for (i, &(p, r, n, _)) in RINGS.iter().enumerate() {
        let rg = ring(i);
        let q = (p as u64).pow(n);
        assert_eq!(rg.card() as u64, q.pow(r));
        assert_eq!(rg.unit_count(), q.pow(r) - q.pow(r - 1));
        let units = (0..rg.card()).filter(|&a: &Elem| rg.is_unit(a)).count() as u64;
        assert_eq!(units, rg.unit_count());
    }
}
