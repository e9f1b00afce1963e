use ampc_sim::SimConfig;
use contraction_engine::algebras::{Count, Height, MaxPlus, SumNode, SumParent};
use contraction_engine::{
    bounded_tree_contract, reconstruct, sequential_values, tree_contract,
    two_contraction_reference, ContractionLog, Instance,
};
use oracles::gen;
use tree_core::Tree;

fn count_inst(t: Tree) -> Instance<Count> {
    Instance::build(t, |_| 1, |_| 0)
}

fn sum_inst(t: Tree, seed: u64) -> Instance<SumParent> {
    let w = gen::random_weights(t.len(), -20, 20, seed);
    Instance::build(t, |v| SumNode::leaf(w[v]), |v| (v % 3) as i64 - 1)
}

fn height_inst(t: Tree) -> Instance<Height> {
    Instance::build(t, |_| 0, |_| MaxPlus::STEP)
}

fn named(n: usize, seed: u64) -> Vec<Tree> {
    vec![
        gen::path(n),
        gen::star(n),
        gen::broom(n),
        gen::caterpillar(n, 5),
        gen::random_tree(n, seed),
        gen::random_power_law(n, seed),
        gen::complete_kary(n, 3),
    ]
}

fn check_all(t: &Tree, eps: f64, seed: u64) {
    let n = t.len();
    let cfg = SimConfig::new(n, eps).strict(true);

    let ci = count_inst(t.clone());
    let out = tree_contract(&Count, &ci, &cfg).unwrap_or_else(|e| panic!("n={n} eps={eps}: {e}"));
    assert_eq!(out.answer, n as i64);
    assert_eq!(
        reconstruct(&Count, &out.log).unwrap(),
        sequential_values(&Count, &ci)
    );

    let si = sum_inst(t.clone(), seed);
    let out = tree_contract(&SumParent, &si, &cfg).unwrap();
    let seq = sequential_values(&SumParent, &si);
    assert_eq!(out.answer, seq[t.root()]);
    assert_eq!(reconstruct(&SumParent, &out.log).unwrap(), seq);

    let hi = height_inst(t.clone());
    let out = tree_contract(&Height, &hi, &cfg).unwrap();
    assert_eq!(out.answer, t.height() as i64);
    assert_eq!(
        reconstruct(&Height, &out.log).unwrap(),
        sequential_values(&Height, &hi)
    );
}

#[test]
fn every_small_shape() {
    for n in 1..=7 {
        for (i, t) in gen::all_shapes(n).iter().enumerate() {
            for eps in [0.3, 0.5, 0.9] {
                check_all(t, eps, i as u64);
            }
        }
    }
}

#[test]
fn named_shapes() {
    for n in [40, 300, 2000] {
        for (i, t) in named(n, n as u64).iter().enumerate() {
            for eps in [0.25, 0.5, 0.8] {
                check_all(t, eps, i as u64);
            }
        }
    }
}

#[test]
fn bounded_agrees_with_general_on_low_degree() {
    for seed in 0..6 {
        let t = gen::complete_kary(500, 3);
        let (t, _) = gen::shuffle_labels(&t, seed);
        let cfg = SimConfig::new(500, 0.5).strict(true);
        let si = sum_inst(t, seed);
        let a = bounded_tree_contract(&SumParent, &si, &cfg).unwrap();
        let b = tree_contract(&SumParent, &si, &cfg).unwrap();
        assert_eq!(a.answer, b.answer);
        assert_eq!(
            reconstruct(&SumParent, &a.log).unwrap(),
            reconstruct(&SumParent, &b.log).unwrap()
        );
    }
}

#[test]
fn bounded_rejects_high_degree() {
    let cfg = SimConfig::new(100, 0.5);
    let err = bounded_tree_contract(&Count, &count_inst(gen::star(100)), &cfg).unwrap_err();
    assert!(err.to_string().contains("degree"));
}

#[test]
fn bounded_phases_shrink() {
    let t = gen::random_tree(3000, 4);
    let t = {
        // cap degrees by re-hanging extra children below the first child
        let mut parents: Vec<Option<usize>> = t.parents().to_vec();
        for v in 0..t.len() {
            let kids = t.children(v);
            for w in kids.windows(2).skip(3) {
                parents[w[1]] = Some(w[0]);
            }
        }
        Tree::from_parents(&parents).unwrap()
    };
    let cfg = SimConfig::new(t.len(), 0.4).strict(true);
    let out = bounded_tree_contract(&Count, &count_inst(t), &cfg).unwrap();
    let ph = &out.stats.bounded;
    assert!(!ph.is_empty());
    for p in ph {
        assert!(p.after < p.before);
        assert!(p.after <= p.groups);
    }
}

#[test]
fn reference_matches_sequential() {
    for seed in 0..10 {
        let t = gen::random_tree(60, seed);
        let si = sum_inst(t.clone(), seed);
        let r = two_contraction_reference(&SumParent, &si);
        assert_eq!(r.answer, sequential_values(&SumParent, &si)[t.root()]);
    }
}

#[test]
fn log_sidecar_roundtrip() {
    let t = gen::random_power_law(400, 9);
    let si = sum_inst(t, 9);
    let cfg = SimConfig::new(400, 0.4).strict(true);
    let out = tree_contract(&SumParent, &si, &cfg).unwrap();
    let mut buf = Vec::new();
    out.log.write_to(&mut buf).unwrap();
    let back: ContractionLog<SumNode, i64> =
        ContractionLog::read_from(&mut buf.as_slice()).unwrap();
    assert_eq!(back, out.log);
    assert_eq!(
        reconstruct(&SumParent, &back).unwrap(),
        sequential_values(&SumParent, &si)
    );
    buf[0] ^= 1;
    assert!(ContractionLog::<SumNode, i64>::read_from(&mut buf.as_slice()).is_err());
}
