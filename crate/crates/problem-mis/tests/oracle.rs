use ampc_sim::SimConfig;
use contraction_engine::{two_contraction_reference, UnaryAlgebra};
use oracles::gen;
use oracles::indset::{
    brute_mwis, greedy_maximal_matching, greedy_mis, greedy_misb, is_independent,
    is_maximal_independent, mwis_table, set_weight,
};
use oracles::matching::{is_matching, is_maximal_matching};
use problem_mis::*;
use proptest::prelude::*;
use rand::Rng;
use tree_core::Tree;

fn check_mis(t: &Tree, eps: f64) {
    let cfg = SimConfig::new(t.len(), eps).strict(true);
    let s = mis_solve(t, &cfg).unwrap();
    assert!(is_maximal_independent(t, &s.set));
    assert_eq!(s.set, greedy_mis(t));
    let x = &s.expanded;
    assert_eq!(s.bits, greedy_misb(&x.tree, &x.bypass));
    for v in 0..x.tree.len() {
        if x.is_bypass(v) {
            let any = x.tree.children(v).iter().any(|&c| s.bits[c]);
            assert_eq!(s.bits[v], any);
        }
    }
    assert!(x.tree.len() < 2 * t.len().max(1));
    assert!(x.tree.max_degree() <= cfg.fan());

    let m = maximal_matching_solve(t, &cfg).unwrap();
    assert!(is_matching(t, &m.edges));
    assert!(is_maximal_matching(t, &m.edges));
    assert_eq!(m.edges, greedy_maximal_matching(t));
}

#[test]
fn mis_exhaustive_small() {
    for n in 1..=10 {
        for t in gen::all_shapes(n) {
            check_mis(&t, 0.5);
        }
    }
}

#[test]
fn mis_random_and_adversarial() {
    let mut r = gen::rng(5);
    for k in 0..200u64 {
        let n = r.gen_range(1..=500);
        let t = if k % 2 == 0 {
            gen::random_tree(n, k)
        } else {
            gen::random_power_law(n, k)
        };
        check_mis(&t, [0.25, 1.0 / 3.0, 0.5][k as usize % 3]);
    }
    for t in [
        gen::star(2000),
        gen::broom(2000),
        gen::caterpillar(2000, 30),
        gen::path(2000),
    ] {
        check_mis(&t, 1.0 / 3.0);
    }
}

#[test]
fn mis_examples() {
    let cfg = |n| SimConfig::new(n, 0.5);
    assert_eq!(
        mis_solve(&Tree::single(), &cfg(1)).unwrap().members(),
        vec![0]
    );
    assert_eq!(
        mis_solve(&gen::path(3), &cfg(3)).unwrap().members(),
        vec![0, 2]
    );
    let star = mis_solve(&gen::star(10), &cfg(10)).unwrap();
    assert_eq!(star.members(), (1..10).collect::<Vec<_>>());
    let two = maximal_matching_solve(&gen::path(2), &cfg(2)).unwrap();
    assert_eq!(two.edges.len(), 1);
    let five = maximal_matching_solve(&gen::path(5), &cfg(5)).unwrap();
    assert_eq!(five.edges.len(), 2);
}

#[test]
fn bypass_size_on_power_law() {
    for seed in 0..20 {
        let t = gen::random_power_law(3000, seed);
        let x = bypass_expand(&t, 8);
        assert!(x.tree.len() <= 2 * t.len());
        assert!(x.tree.max_degree() <= 8);
    }
}

#[test]
fn mwis_exhaustive_small() {
    for n in 1..=10 {
        for (i, t) in gen::all_shapes(n).iter().enumerate() {
            let vw = gen::random_weights(n, 0, 4, (n * 131 + i) as u64);
            let s = mwis_solve(t, &vw, &SimConfig::new(n, 0.5).strict(true)).unwrap();
            let want = brute_mwis(t, &vw).unwrap();
            assert_eq!(s.value, want);
            assert!(is_independent(t, &s.set));
            assert_eq!(set_weight(&s.set, &vw), want);
        }
    }
}

#[test]
fn mwis_random_large() {
    let mut r = gen::rng(11);
    for k in 0..60u64 {
        let n = r.gen_range(1..=2000);
        let t = gen::random_power_law(n, k);
        let vw = gen::random_weights(n, 0, 1000, k);
        let s = mwis_solve(&t, &vw, &SimConfig::new(n, 1.0 / 3.0).strict(true)).unwrap();
        let table = mwis_table(&t, &vw);
        assert_eq!(s.values, table);
        assert!(is_independent(&t, &s.set));
        assert_eq!(set_weight(&s.set, &vw), s.value);
        let alg = Mwis::for_weights(&vw);
        let r = two_contraction_reference(&alg, &alg.instance(t.clone(), &vw));
        assert_eq!(r.answer, table[t.root()]);
    }
}

fn arb_pair() -> impl Strategy<Value = MisbEdgePair> {
    (any::<bool>(), any::<bool>()).prop_map(|(w1, w2)| MisbEdgePair { w1, w2 })
}

proptest! {
    #[test]
    fn misb_rake_matches_combine(
        bypass in any::<bool>(),
        kids in proptest::collection::vec((any::<bool>(), arb_pair()), 0..6),
        cut in 0usize..6,
    ) {
        let v = MisbVertexData::new(bypass);
        let cut = cut.min(kids.len());
        let mut raked = v;
        for (c, e) in &kids[..cut] {
            Misb.rake(&mut raked, 0, e, c);
        }
        prop_assert_eq!(misb_combine(&v, &kids), misb_combine(&raked, &kids[cut..]));
    }

    #[test]
    fn misb_chain_matches_direct(
        mids in proptest::collection::vec((any::<bool>(), any::<bool>()), 1..5),
        x in any::<bool>(),
    ) {
        // g - m1 - ... - mk - leaf with bit x; every edge fresh
        let mut direct = x;
        for &(bypass, a) in mids.iter().rev() {
            direct = misb_combine(&MisbVertexData { bypass, a }, &[(direct, MisbEdgePair::FRESH)]);
        }
        let mut fused = MisbEdgePair::FRESH;
        for &(bypass, a) in mids.iter().rev() {
            fused = Misb.compress(&MisbEdgePair::FRESH, &MisbVertexData { bypass, a }, &fused).unwrap();
        }
        prop_assert_eq!(fused.apply(x), direct);
    }

    #[test]
    fn mwis_chains_fold_in_either_order(
        w in proptest::collection::vec((0i64..9, 0i64..9), 2),
        leaf in (0i64..20, 0i64..20),
    ) {
        let m: Vec<_> = w.iter().map(|&(a, b)| MwisVertexData { with: a, without: b }).collect();
        let f = MwisEdgeTuple::fresh();
        let alg = Mwis::for_weights(&[]);
        let left = alg.compress(&alg.compress(&f, &m[0], &f).unwrap(), &m[1], &f).unwrap();
        let right = alg.compress(&f, &m[0], &alg.compress(&f, &m[1], &f).unwrap()).unwrap();
        prop_assert_eq!(left.carry(0, leaf), right.carry(0, leaf));
        prop_assert_eq!(left.carry(1, leaf), right.carry(1, leaf));
    }
}
