use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tree_core::{Tree, VertexId};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn build(parents: Vec<Option<VertexId>>) -> Tree {
    Tree::from_parents(&parents).expect("generator produced an invalid tree")
}

pub fn path(n: usize) -> Tree {
    assert!(n >= 1);
    build((0..n).map(|v| v.checked_sub(1)).collect())
}

/// Root `0` with `n - 1` leaf children.
pub fn star(n: usize) -> Tree {
    assert!(n >= 1);
    build(
        (0..n)
            .map(|v| if v == 0 { None } else { Some(0) })
            .collect(),
    )
}

/// Path of `ceil(n/2)` vertices whose last vertex fans out to the rest.
pub fn broom(n: usize) -> Tree {
    assert!(n >= 1);
    let handle = n.div_ceil(2);
    build(
        (0..n)
            .map(|v| match v {
                0 => None,
                v if v < handle => Some(v - 1),
                _ => Some(handle - 1),
            })
            .collect(),
    )
}

/// Spine where spine vertex `i` carries `legs` leaves when `i` is even and
/// one leaf when odd; truncated to `n` vertices.
pub fn caterpillar(n: usize, legs: usize) -> Tree {
    assert!(n >= 1);
    let mut parents = vec![None];
    let mut spine = 0;
    let mut i = 0;
    while parents.len() < n {
        let want = if i % 2 == 0 { legs } else { 1 };
        for _ in 0..want {
            if parents.len() < n {
                parents.push(Some(spine));
            }
        }
        if parents.len() < n {
            parents.push(Some(spine));
            spine = parents.len() - 1;
        }
        i += 1;
    }
    build(parents)
}

/// Uniform random recursive tree: vertex `v` picks a parent in `0..v`.
pub fn random_tree(n: usize, seed: u64) -> Tree {
    assert!(n >= 1);
    let mut r = rng(seed);
    build(
        (0..n)
            .map(|v| {
                if v == 0 {
                    None
                } else {
                    Some(r.gen_range(0..v))
                }
            })
            .collect(),
    )
}

/// Preferential attachment: parents are picked proportionally to degree + 1,
/// producing a few heavy hubs.
pub fn random_power_law(n: usize, seed: u64) -> Tree {
    assert!(n >= 1);
    let mut r = rng(seed);
    let mut pool = vec![0];
    let mut parents = vec![None];
    for v in 1..n {
        let p = pool[r.gen_range(0..pool.len())];
        parents.push(Some(p));
        pool.push(p);
        pool.push(v);
    }
    build(parents)
}

/// Complete `k`-ary tree on `n` vertices filled breadth-first.
pub fn complete_kary(n: usize, k: usize) -> Tree {
    assert!(n >= 1 && k >= 1);
    build(
        (0..n)
            .map(|v| if v == 0 { None } else { Some((v - 1) / k) })
            .collect(),
    )
}

/// Random permutation of ids and of every child list.
pub fn shuffle_labels(tree: &Tree, seed: u64) -> (Tree, Vec<VertexId>) {
    let mut r = rng(seed);
    let mut perm: Vec<VertexId> = (0..tree.len()).collect();
    perm.shuffle(&mut r);
    let mut t = tree.relabel(&perm).expect("relabel of a valid tree");
    t = t.with_child_order(|_, ch| ch.shuffle(&mut r));
    (t, perm)
}

/// Random integer weights in `lo..=hi`, one per vertex.
pub fn random_weights(n: usize, lo: i64, hi: i64, seed: u64) -> Vec<i64> {
    let mut r = rng(seed);
    (0..n).map(|_| r.gen_range(lo..=hi)).collect()
}

/// Every unlabeled rooted tree on `n` vertices, ids in preorder.
pub fn all_shapes(n: usize) -> Vec<Tree> {
    assert!(n >= 1);
    let shapes = ShapeTable::new(n);
    shapes.by_size[n]
        .iter()
        .map(|&s| {
            let mut parents = Vec::with_capacity(n);
            shapes.emit(s, None, &mut parents);
            build(parents)
        })
        .collect()
}

/// Shapes are stored as sorted child lists of earlier shape ids.
struct ShapeTable {
    children: Vec<Vec<usize>>,
    size: Vec<usize>,
    by_size: Vec<Vec<usize>>,
}

impl ShapeTable {
    fn new(n: usize) -> Self {
        let mut t = ShapeTable {
            children: Vec::new(),
            size: Vec::new(),
            by_size: vec![Vec::new(); n + 1],
        };
        for m in 1..=n {
            let mut found = Vec::new();
            let mut cur = Vec::new();
            t.fill(m - 1, usize::MAX, &mut cur, &mut found);
            for ch in found {
                let id = t.children.len();
                t.children.push(ch);
                t.size.push(m);
                t.by_size[m].push(id);
            }
        }
        t
    }

    // child ids are non-increasing so each multiset appears once
    fn fill(&self, rest: usize, max_id: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for id in (0..self.children.len()).rev() {
            if id > max_id || self.size[id] > rest {
                continue;
            }
            cur.push(id);
            self.fill(rest - self.size[id], id, cur, out);
            cur.pop();
        }
    }

    fn emit(&self, s: usize, parent: Option<usize>, parents: &mut Vec<Option<usize>>) {
        let me = parents.len();
        parents.push(parent);
        for &c in &self.children[s] {
            self.emit(c, Some(me), parents);
        }
    }
}
