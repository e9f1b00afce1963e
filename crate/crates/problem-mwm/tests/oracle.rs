use ampc_sim::SimConfig;
use contraction_engine::{bounded_tree_contract, two_contraction_reference, ChildView, MemberView};
use oracles::gen;
use oracles::matching::{brute_mwm, is_matching, matching_weight, mwm_table, mwm_value};
use problem_mwm::*;
use proptest::prelude::*;
use rand::Rng;
use tree_core::Tree;

fn weights(n: usize, lo: i64, hi: i64, seed: u64) -> Vec<i64> {
    gen::random_weights(n, lo, hi, seed)
}

fn check(t: &Tree, ew: &[i64], eps: f64) {
    let cfg = SimConfig::new(t.len(), eps).strict(true);
    let sol = mwm_solve(t, ew, &cfg).unwrap();
    let want = mwm_value(t, ew);
    assert_eq!(sol.value, want);
    assert!(is_matching(t, &sol.matching));
    assert_eq!(matching_weight(&sol.matching, ew), sol.value);
    assert_eq!(sol.stats.residual_excess, 0);
    let table = mwm_table(t, ew);
    for v in 0..t.len() {
        assert_eq!(
            (sol.values[v].c, sol.values[v].c_prime),
            (table[v].c, table[v].c_prime)
        );
    }
}

#[test]
fn exhaustive_small_shapes() {
    for n in 1..=10 {
        for (i, t) in gen::all_shapes(n).iter().enumerate() {
            let ew = weights(n, 1, 5, (n * 1000 + i) as u64);
            if n <= 8 || i % 7 == 0 {
                let (best, _) = brute_mwm(t, &ew).unwrap();
                assert_eq!(best, mwm_value(t, &ew));
            }
            check(t, &ew, 0.5);
        }
    }
}

#[test]
fn random_trees() {
    let mut r = gen::rng(77);
    for k in 0..200u64 {
        let n = r.gen_range(1..=300);
        let t = if k % 2 == 0 {
            gen::random_tree(n, k)
        } else {
            gen::random_power_law(n, k)
        };
        let ew = weights(n, -3, 40, k);
        let eps = [0.25, 1.0 / 3.0, 0.5][k as usize % 3];
        check(&t, &ew, eps);
    }
}

#[test]
fn adversarial_shapes() {
    for n in [500, 3000] {
        for t in [
            gen::path(n),
            gen::star(n),
            gen::broom(n),
            gen::caterpillar(n, 9),
            gen::complete_kary(n, 4),
        ] {
            let ew = weights(n, 1, 1_000_000, n as u64);
            check(&t, &ew, 1.0 / 3.0);
        }
    }
}

#[test]
fn bounded_and_reference_agree() {
    for seed in 0..20 {
        let t = gen::complete_kary(200, 3);
        let (t, _) = gen::shuffle_labels(&t, seed);
        let ew = weights(200, 0, 9, seed);
        let alg = Mwm::for_weights(&ew);
        let inst = alg.instance(t.clone(), &ew);
        let cfg = SimConfig::new(200, 0.5).strict(true);
        let want = mwm_value(&t, &ew);
        assert_eq!(
            bounded_tree_contract(&alg, &inst, &cfg).unwrap().answer.c,
            want
        );
        assert_eq!(two_contraction_reference(&alg, &inst).answer.c, want);
    }
}

#[test]
fn brute_matches_on_random_small() {
    for seed in 0..60 {
        let n = 1 + (seed as usize % 12);
        let t = gen::random_tree(n, seed);
        let ew = weights(n, -2, 9, seed);
        let sol = mwm_solve(&t, &ew, &SimConfig::new(n, 0.5).strict(true)).unwrap();
        let (best, _) = brute_mwm(&t, &ew).unwrap();
        assert_eq!(sol.value, best);
        assert_eq!(matching_weight(&sol.matching, &ew), best);
    }
}

#[test]
fn fresh_tuples_reduce_to_textbook_recurrence() {
    for seed in 0..30 {
        let t = gen::random_tree(40, seed);
        let ew = weights(40, -5, 20, seed);
        let table = mwm_table(&t, &ew);
        for v in 0..40 {
            let kids: Vec<_> = t
                .children(v)
                .iter()
                .map(|&u| {
                    (
                        u,
                        MwmValue::new(table[u].c, table[u].c_prime),
                        MwmEdgeTuple::fresh(ew[u]),
                    )
                })
                .collect();
            let (val, ptr) = dp_combine(&MwmVertexData::default(), &kids);
            let base: i64 = t.children(v).iter().map(|&u| table[u].c).sum();
            let best = t
                .children(v)
                .iter()
                .map(|&u| ew[u] + table[u].c_prime - table[u].c)
                .fold(0, i64::max);
            assert_eq!(val, MwmValue::new(base + best, base));
            assert_eq!(ptr, table[v].ptr);
        }
    }
}

fn arb_value() -> impl Strategy<Value = MwmValue> {
    (0i64..30, 0i64..30).prop_map(|(x, y)| MwmValue::new(x.max(y), x.min(y)))
}

fn arb_tuple() -> impl Strategy<Value = MwmEdgeTuple> {
    let w = prop_oneof![Just(Ext::NegInf), (-5i64..20).prop_map(Ext::Fin)];
    (w.clone(), w.clone(), w, 0i64..10).prop_map(|(w1, w2, w3, w4)| MwmEdgeTuple {
        w1,
        w2,
        w3,
        w4: Ext::Fin(w4),
    })
}

proptest! {
    #[test]
    fn trimming_preserves_combine(
        a in 0i64..10,
        b in 0i64..10,
        kids in proptest::collection::vec((arb_value(), arb_tuple()), 0..8),
        split in 0usize..8,
    ) {
        let v = MwmVertexData { a, b };
        let all: Vec<_> = kids.iter().enumerate().map(|(i, (x, e))| (i, *x, *e)).collect();
        let cut = split.min(kids.len());
        let mut trimmed = v;
        trim_leaves(&mut trimmed, &kids[..cut]);
        let rest: Vec<_> = all[cut..].to_vec();
        prop_assert_eq!(dp_combine(&v, &all).0, dp_combine(&trimmed, &rest).0);
    }

    #[test]
    fn chains_fold_in_either_order(
        es in proptest::collection::vec(arb_tuple(), 3),
        mids in proptest::collection::vec((0i64..5, 0i64..10), 2),
        leaf in arb_value(),
    ) {
        let mids: Vec<_> = mids.iter().map(|&(a, b)| MwmVertexData { a, b }).collect();
        let left = contract_chain(&contract_chain(&es[0], &es[1], cut_off(&mids[0])), &es[2], cut_off(&mids[1]));
        let right = contract_chain(&es[0], &contract_chain(&es[1], &es[2], cut_off(&mids[1])), cut_off(&mids[0]));
        let top = MwmVertexData::default();
        prop_assert_eq!(dp_combine(&top, &[(1, leaf, left)]), dp_combine(&top, &[(1, leaf, right)]));
    }

    #[test]
    fn sibling_batches_commute(ws in proptest::collection::vec(-3i64..20, 1..9), seed in 0u64..1000) {
        let alg = Mwm::for_weights(&ws);
        let leaves: Vec<_> = ws.iter().map(|&w| (MwmVertexData::default(), MwmEdgeTuple::fresh(w))).collect();
        let mut shuffled = leaves.clone();
        let mut r = gen::rng(seed);
        rand::seq::SliceRandom::shuffle(shuffled.as_mut_slice(), &mut r);
        let one = mwm_sibling_contract(&alg, &leaves);
        let two = mwm_sibling_contract(&alg, &shuffled);
        let top = MwmVertexData::default();
        let leaf = cut_off(&one.0);
        prop_assert_eq!(dp_combine(&top, &[(1, leaf, one.1)]).0, dp_combine(&top, &[(1, cut_off(&two.0), two.1)]).0);
        let star: Vec<_> = ws.iter().enumerate().map(|(i, &w)| (i, MwmValue::default(), MwmEdgeTuple::fresh(w))).collect();
        prop_assert_eq!(dp_combine(&top, &[(1, leaf, one.1)]).0, dp_combine(&top, &star).0);
    }
}

#[test]
fn star_of_three_via_sibling() {
    let alg = Mwm::for_weights(&[2, 7, 4]);
    let leaves: Vec<_> = [2, 7, 4]
        .iter()
        .map(|&w| (MwmVertexData::default(), MwmEdgeTuple::fresh(w)))
        .collect();
    let (n, e) = mwm_sibling_contract(&alg, &leaves);
    let (v, _) = dp_combine(&MwmVertexData::default(), &[(1, cut_off(&n), e)]);
    assert_eq!(v.c, 7);
    let single = mwm_sibling_contract(&alg, &leaves[..1]);
    assert_eq!(single, leaves[0]);
}

/// A six-vertex path component whose members carry the given external children.
fn path_payloads(
    lift: &contraction_engine::Lifted<'_, Mwm>,
    hang: &[(usize, usize)],
) -> Vec<contraction_engine::Residual<MwmVertexData, MwmEdgeTuple>> {
    (0..6)
        .map(|v| {
            let mut kids: Vec<usize> = hang.iter().filter(|h| h.0 == v).map(|h| h.1).collect();
            if v < 5 {
                kids.insert(0, v + 1);
            }
            lift.initial(MwmVertexData::default(), &kids)
        })
        .collect()
}

#[test]
fn internal_path_with_two_stubs() {
    let alg = Mwm::for_weights(&[10]);
    let lift = contraction_engine::lift_unary(&alg, 64);
    let edges: Vec<MwmEdgeTuple> = (0..64).map(|w| MwmEdgeTuple::fresh(w % 7 + 1)).collect();
    for (hang, want) in [(vec![(0, 60), (5, 61)], 3), (vec![(5, 60), (5, 61)], 4)] {
        let payloads = path_payloads(&lift, &hang);
        let members: Vec<_> = (0..6)
            .map(|v| MemberView {
                id: v,
                payload: &payloads[v],
                children: payloads[v]
                    .stub_slots()
                    .into_iter()
                    .map(|s| ChildView {
                        id: s,
                        slot: s,
                        edge: &edges[s],
                    })
                    .collect(),
            })
            .collect();
        let c = mwm_connected_contract(&alg, 64, &members).unwrap();
        assert_eq!(c.external.len(), 2);
        assert_eq!(c.residual.len(), want);
        assert!(c.residual.len() <= 2 * 2 + 1);
    }
}
