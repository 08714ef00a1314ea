use halfplane::arith::padic::{cartan_decompose, smith_valuations, PMat, Rat};
use halfplane::arith::FiniteField;
use halfplane::bt_tree::Tree;
use halfplane::mod_p_reps::{InducedElement, InducedRep, WeightSigma};
use halfplane::special_fiber::build_complex_degrees;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn prime() -> impl Strategy<Value = u32> {
    prop_oneof![Just(3u32), Just(5), Just(7)]
}

/// A product of stabilizers and neighbor steps, seeded.
fn group_element(tree: &Tree, seed: u64, steps: usize) -> PMat {
    use rand::Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = tree.random_stabilizer(&mut rng);
    for _ in 0..steps {
        let pt = rng.gen_range(0..=tree.p());
        g = g.mul(&tree.neighbor_rep(pt)).mul(&tree.random_stabilizer(&mut rng));
    }
    g
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn smith_valuations_are_bi_invariant(p in prime(), seed in any::<u64>(), steps in 0usize..4) {
        let tree = Tree::new(p).unwrap();
        let g = group_element(&tree, seed, steps);
        let h1 = group_element(&tree, seed ^ 1, 0);
        let h2 = group_element(&tree, seed ^ 2, 0);
        let s = smith_valuations(&g, p).unwrap();
        prop_assert_eq!(smith_valuations(&h1.mul(&g).mul(&h2), p).unwrap(), s);
        // the BFS depth of g·s₁ is the elementary-divisor gap
        let ball = tree.ball(tree.s1(), steps as u32, 0).unwrap();
        let i = ball.get(&tree.act(&g, &tree.s1()).unwrap()).unwrap();
        prop_assert_eq!(s.1 - s.0, ball.depth[i] as i32);
    }

    #[test]
    fn cartan_recomposes(p in prime(), a in -40i128..40, b in -40i128..40, c in -40i128..40, d in -40i128..40, e in -2i32..3) {
        let m = PMat::from_ints(a, b, c, d).scale(Rat::p_pow(p, e));
        prop_assume!(!m.det().is_zero());
        let (e, n, h1, h2) = cartan_decompose(&m, p).unwrap();
        let diag = PMat::new(Rat::one(), Rat::zero(), Rat::zero(), Rat::p_pow(p, n));
        prop_assert!(h1.in_gl2_zp(p) && h2.in_gl2_zp(p) && n >= 0);
        prop_assert_eq!(h1.mul(&diag).mul(&h2).scale(Rat::p_pow(p, e)), m);
    }

    #[test]
    fn distance_is_invariant(p in prime(), seed in any::<u64>()) {
        let tree = Tree::new(p).unwrap();
        let u = tree.act(&group_element(&tree, seed, 3), &tree.s1()).unwrap();
        let v = tree.act(&group_element(&tree, seed ^ 7, 2), &tree.s0()).unwrap();
        let g = group_element(&tree, seed ^ 9, 2).scale(Rat::p_pow(p, 1));
        let (gu, gv) = (tree.act(&g, &u).unwrap(), tree.act(&g, &v).unwrap());
        prop_assert_eq!(tree.distance(&gu, &gv), tree.distance(&u, &v));
        prop_assert_eq!(tree.distance(&u, &v), tree.distance(&v, &u));
    }

    #[test]
    fn tree_is_bipartite_and_regular(p in prime(), seed in any::<u64>()) {
        let tree = Tree::new(p).unwrap();
        let v = tree.act(&group_element(&tree, seed, 3), &tree.s1()).unwrap();
        let nb = tree.neighbors(&v);
        let mut distinct = nb.clone();
        distinct.sort();
        distinct.dedup();
        prop_assert_eq!(distinct.len(), p as usize + 1);
        for u in &nb {
            prop_assert_eq!(tree.distance(u, &v), 1);
            prop_assert_ne!(tree.parity(u), tree.parity(&v));
        }
    }

    #[test]
    fn euler_identity_and_gauge(p in prop_oneof![Just(3u32), Just(5)], k0 in -6i64..14, k1 in -6i64..14, r in 1u32..4, seed in 1u64..1000) {
        let tree = Tree::new(p).unwrap();
        let field = FiniteField::new(p, 1).unwrap();
        let a = tree.ball(tree.s1(), r, 0).unwrap();
        let b = tree.ball(tree.s1(), r, seed).unwrap();
        let ca = build_complex_degrees([k0, k1], &a, &field).unwrap();
        let cb = build_complex_degrees([k0, k1], &b, &field).unwrap();
        let (ha, hb) = (ca.cohomology(false).unwrap(), cb.cohomology(false).unwrap());
        prop_assert_eq!(ha.euler, ca.euler_expected());
        prop_assert_eq!((ha.h0_dim, ha.h1_dim), (hb.h0_dim, hb.h1_dim));
    }

    #[test]
    fn t_swaps_parity_and_commutes_with_action(k in 0usize..3, seed in any::<u64>(), w0 in 1u32..3, w1 in 0u32..3) {
        let rep = InducedRep::new(WeightSigma::new(3, k, 1).unwrap()).unwrap();
        let tree = &rep.tree;
        let v = tree.act(&group_element(tree, seed, 2), &tree.s1()).unwrap();
        let mut w = vec![w1; k + 1];
        w[0] = w0;
        let x = InducedElement::single(v, w);
        let tx = rep.t_apply_unchecked(&x).unwrap();
        prop_assert!(!tx.is_zero());
        for u in tx.support() {
            prop_assert_eq!(tree.distance(&u, &v), 1);
        }
        let g = group_element(tree, seed ^ 3, 2);
        let lhs = rep.t_apply_unchecked(&rep.act(&g, &x).unwrap()).unwrap();
        prop_assert_eq!(lhs, rep.act(&g, &tx).unwrap());
    }

    #[test]
    fn action_is_associative(k in 0usize..5, seed in any::<u64>()) {
        let rep = InducedRep::new(WeightSigma::new(5, k, 3).unwrap()).unwrap();
        let tree = &rep.tree;
        let x = InducedElement::single(tree.s0(), (0..=k as u32).map(|j| (j + 1) % 5).collect());
        let g = group_element(tree, seed, 2);
        let h = group_element(tree, seed ^ 5, 1);
        prop_assert_eq!(rep.act(&g, &rep.act(&h, &x).unwrap()).unwrap(), rep.act(&g.mul(&h), &x).unwrap());
    }

    #[test]
    fn field_operations(p in prime(), d in 1u32..4, a in any::<u32>(), b in any::<u32>()) {
        let f = FiniteField::new(p, d).unwrap();
        let (a, b) = (a % f.order(), b % f.order());
        prop_assert_eq!(f.mul(a, b), f.mul(b, a));
        prop_assert_eq!(f.sub(f.add(a, b), b), a);
        if b != 0 {
            prop_assert_eq!(f.mul(f.div(a, b).unwrap(), b), a);
        }
        // Frobenius is a field automorphism of order d
        prop_assert_eq!(f.frobenius(f.mul(a, b), 1).unwrap(), f.mul(f.frobenius(a, 1).unwrap(), f.frobenius(b, 1).unwrap()));
        prop_assert_eq!(f.frobenius(a, d).unwrap(), a);
    }
}
