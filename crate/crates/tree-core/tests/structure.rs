use num_rational::Ratio;
use proptest::prelude::*;
use tree_core::{
    decompose, dependency_tree, group_components, leaf_fraction, leaf_fraction_bound,
    low_degree_components, order_from_ranks, preorder_number, BigSmallTree, LabeledTree,
    PreorderDecomposition, Tree,
};

/// Random recursive tree: vertex `i` hangs below some earlier vertex.
fn arb_tree(max_n: usize) -> impl Strategy<Value = Tree> {
    (1..=max_n)
        .prop_flat_map(|n| proptest::collection::vec(any::<prop::sample::Index>(), n - 1))
        .prop_map(|picks| {
            let mut parents = vec![None];
            for (i, p) in picks.iter().enumerate() {
                parents.push(Some(p.index(i + 1)));
            }
            Tree::from_parents(&parents).unwrap()
        })
}

/// Every parent vector with `parent[i] < i`, i.e. every recursive tree on `n` vertices.
fn all_recursive(n: usize) -> Vec<Tree> {
    let mut out = Vec::new();
    let mut p = vec![0usize; n];
    loop {
        let parents: Vec<_> = (0..n).map(|i| (i > 0).then(|| p[i])).collect();
        out.push(Tree::from_parents(&parents).unwrap());
        let mut i = n;
        loop {
            if i <= 1 {
                return out;
            }
            i -= 1;
            if p[i] + 1 < i {
                p[i] += 1;
                break;
            }
            p[i] = 0;
        }
    }
}

#[test]
fn recursive_tree_counts() {
    // (n-1)! trees
    let counts: Vec<usize> = (1..=6).map(|n| all_recursive(n).len()).collect();
    assert_eq!(counts, vec![1, 1, 2, 6, 24, 120]);
}

/// Any contiguous split of the preorder keeps at most one dependent
/// component per group, degree budget or not.
#[test]
fn sparsity_over_every_split() {
    for n in 1..=7 {
        for t in all_recursive(n) {
            for mask in 0u32..(1 << (n - 1)) {
                let mut boundaries = vec![0];
                boundaries.extend((1..n).filter(|i| mask >> (i - 1) & 1 == 1));
                boundaries.push(n);
                let d = PreorderDecomposition {
                    boundaries,
                    lambda: n,
                };
                let dep = dependency_tree(&t, &d);
                assert!(dep.dependent_per_group(d.k()).iter().all(|&c| c <= 1));
            }
        }
    }
}

#[test]
fn text_round_trip_keeps_attributes() {
    let t = Tree::from_parents(&[None, Some(0), Some(0), Some(2)]).unwrap();
    let lt = LabeledTree::bare(t)
        .with_column("ew", &[0, 5, -3, 7])
        .with_column("bypass", &[0, 0, 1, 0]);
    let text = lt.to_text();
    assert!(text.starts_with("4 0\n0 - bypass=0 ew=0\n"));
    assert_eq!(LabeledTree::parse(&text).unwrap(), lt);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn preorder_is_contiguous(t in arb_tree(60)) {
        let rank = preorder_number(&t).unwrap();
        let size = t.subtree_sizes();
        let mut sorted = rank.clone();
        sorted.sort_unstable();
        prop_assert_eq!(sorted, (1..=t.len()).collect::<Vec<_>>());
        let order = order_from_ranks(&rank);
        for v in 0..t.len() {
            if let Some(p) = t.parent(v) {
                prop_assert!(rank[p] < rank[v]);
            }
            let mut sub: Vec<usize> = order[rank[v] - 1..rank[v] - 1 + size[v]].to_vec();
            sub.sort_unstable();
            let mut below = vec![v];
            let mut i = 0;
            while i < below.len() {
                below.extend_from_slice(t.children(below[i]));
                i += 1;
            }
            below.sort_unstable();
            prop_assert_eq!(sub, below);
        }
    }

    #[test]
    fn decomposition_respects_budget(t in arb_tree(80), extra in 0usize..6) {
        let lambda = t.max_degree().max(1) + extra;
        let d = decompose(&t, lambda).unwrap();
        prop_assert!(d.is_valid_for(t.len()));
        prop_assert!(d.k() <= (2 * t.len()).div_ceil(lambda));
        let order = t.preorder();
        for g in d.groups(&order) {
            prop_assert!(g.iter().map(|&v| t.deg(v)).sum::<usize>() <= lambda);
        }
        let dep = dependency_tree(&t, &d);
        prop_assert!(dep.dependent_per_group(d.k()).iter().all(|&c| c <= 1));
        for (_, comps) in group_components(&t, &d) {
            for c in comps {
                let roots = c.iter().filter(|&&v| t.parent(v).is_none_or(|p| !c.contains(&p))).count();
                prop_assert_eq!(roots, 1);
            }
        }
    }

    #[test]
    fn big_small_shape(t in arb_tree(120), alpha in 2usize..7) {
        let comps = low_degree_components(&t, alpha);
        let covered: usize = comps.iter().map(|c| c.members.len()).sum();
        prop_assert_eq!(covered, (0..t.len()).filter(|&v| t.deg(v) < alpha).count());
        let bst = BigSmallTree::build(&t, alpha);
        prop_assert!(bst.adjacency_holds());
        prop_assert!(leaf_fraction(&bst) >= leaf_fraction_bound(alpha));
        prop_assert_eq!(leaf_fraction_bound(alpha), Ratio::new(alpha, alpha + 4));
    }

    #[test]
    fn relabeling_keeps_shape(t in arb_tree(40), seed in any::<u64>()) {
        let n = t.len();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut x = seed | 1;
        for i in (1..n).rev() {
            x ^= x << 13;
            x ^= x >> 7;
            x ^= x << 17;
            perm.swap(i, (x % (i as u64 + 1)) as usize);
        }
        let r = t.relabel(&perm).unwrap();
        prop_assert_eq!(r.root(), perm[t.root()]);
        for v in 0..n {
            prop_assert_eq!(r.deg(perm[v]), t.deg(v));
            prop_assert_eq!(r.parent(perm[v]), t.parent(v).map(|p| perm[p]));
        }
    }
}
