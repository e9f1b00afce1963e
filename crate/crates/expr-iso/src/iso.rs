use ampc_sim::SimConfig;
use contraction_engine::algebras::{Height, MaxPlus};
use contraction_engine::{reconstruct, tree_contract, EngineError, Instance, UnaryAlgebra};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use tree_core::Tree;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Isomorphic,
    NotIsomorphic,
}

#[derive(Debug, Clone, Serialize)]
pub struct IsoReport {
    pub verdict: Verdict,
    pub n: usize,
    pub height: usize,
    pub modulus: u128,
    /// The modulus came from the prime table.
    pub prime: bool,
    pub q: (u128, u128),
    pub rounds: u64,
}

pub fn mulmod(a: u128, b: u128, m: u128) -> u128 {
    if m <= 1 << 64 {
        return a * b % m;
    }
    let (mut a, mut b, mut acc) = (a % m, b % m, 0u128);
    while b > 0 {
        if b & 1 == 1 {
            acc = addmod(acc, a, m);
        }
        a = addmod(a, a, m);
        b >>= 1;
    }
    acc
}

fn addmod(a: u128, b: u128, m: u128) -> u128 {
    let (s, carry) = a.overflowing_add(b);
    if carry || s >= m {
        s.wrapping_sub(m)
    } else {
        s
    }
}

/// `Q_v = prod over children u of (x_{h_v} - Q_u) mod m`, with `Q = 1` at a
/// leaf. The edge to a parent maps `Q_u` to the factor it contributes,
/// `a Q_u + b`, which stays affine under splicing.
#[derive(Debug, Clone, Copy)]
pub struct ModProduct {
    pub m: u128,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProdNode {
    pub acc: u128,
    pub absorbed: bool,
}

impl ProdNode {
    pub const FRESH: ProdNode = ProdNode {
        acc: 1,
        absorbed: false,
    };
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Affine {
    pub a: u128,
    pub b: u128,
}

impl ModProduct {
    fn apply(&self, e: &Affine, x: u128) -> u128 {
        addmod(mulmod(e.a, x, self.m), e.b, self.m)
    }

    fn own(&self, n: &ProdNode) -> u128 {
        if n.absorbed {
            n.acc
        } else {
            1 % self.m
        }
    }

    /// Edge of a child whose parent carries variable value `x`.
    pub fn factor_edge(&self, x: u128) -> Affine {
        Affine {
            a: self.m - 1,
            b: x % self.m,
        }
    }
}

impl UnaryAlgebra for ModProduct {
    type Node = ProdNode;
    type Edge = Affine;
    type Value = u128;

    fn resolve(&self, node: &ProdNode, children: &[(&Affine, &u128)]) -> u128 {
        if children.is_empty() {
            return self.own(node);
        }
        children.iter().fold(node.acc % self.m, |p, (e, v)| {
            mulmod(p, self.apply(e, **v), self.m)
        })
    }

    fn rake(&self, parent: &mut ProdNode, _: usize, edge: &Affine, leaf: &u128) {
        parent.acc = mulmod(parent.acc, self.apply(edge, *leaf), self.m);
        parent.absorbed = true;
    }

    fn compress(&self, upper: &Affine, mid: &ProdNode, lower: &Affine) -> Option<Affine> {
        let m = self.m;
        let ua = mulmod(upper.a, mid.acc, m);
        Some(Affine {
            a: mulmod(ua, lower.a, m),
            b: addmod(mulmod(ua, lower.b, m), upper.b, m),
        })
    }

    fn merge_leaves(
        &self,
        (n1, e1): (&ProdNode, &Affine),
        (n2, e2): (&ProdNode, &Affine),
    ) -> Option<(ProdNode, Affine)> {
        let f1 = self.apply(e1, self.own(n1));
        let f2 = self.apply(e2, self.own(n2));
        Some((
            ProdNode::FRESH,
            Affine {
                a: 0,
                b: mulmod(f1, f2, self.m),
            },
        ))
    }

    fn node_bits(&self, _: &ProdNode) -> u64 {
        self.word_bits() + 1
    }

    fn edge_bits(&self, _: &Affine) -> u64 {
        2 * self.word_bits()
    }

    fn word_bits(&self) -> u64 {
        128 - self.m.leading_zeros() as u64
    }

    fn name(&self) -> &'static str {
        "mod-product"
    }
}

fn heights(t: &Tree, cfg: &SimConfig) -> Result<(Vec<usize>, u64), EngineError> {
    let inst = Instance::build(t.clone(), |_| 0i64, |_| MaxPlus::STEP);
    let inner = SimConfig {
        n: t.len(),
        ..cfg.clone()
    };
    let out = tree_contract(&Height, &inst, &inner)?;
    let h = reconstruct(&Height, &out.log)?;
    Ok((
        h.into_iter().map(|x| x as usize).collect(),
        out.metrics.rounds,
    ))
}

/// Value of the canonical polynomial of `t` at `x` (indexed by height) mod `m`.
pub fn canonical_value(
    t: &Tree,
    h: &[usize],
    x: &[u128],
    m: u128,
    cfg: &SimConfig,
) -> Result<(u128, u64), EngineError> {
    let alg = ModProduct { m };
    let inst = Instance::build(
        t.clone(),
        |_| ProdNode::FRESH,
        |v| alg.factor_edge(x[h[t.parent(v).unwrap()]]),
    );
    let inner = SimConfig {
        n: t.len(),
        ..cfg.clone()
    };
    let out = tree_contract(&alg, &inst, &inner)?;
    Ok((out.answer, out.metrics.rounds))
}

/// Randomized test for rooted-tree isomorphism. Isomorphic trees always
/// agree; other pairs collide with probability at most one half per trial.
///
/// With a prime table the modulus is a listed prime in `[B, 2B]` for
/// `B = h n^(alpha+1)`; otherwise a random integer in `[B^2, 2B^2]`.
pub fn tree_isomorphism(
    t1: &Tree,
    t2: &Tree,
    alpha: u32,
    primes: Option<&[u128]>,
    seed: u64,
    cfg: &SimConfig,
) -> Result<IsoReport, EngineError> {
    let n = t1.len().max(t2.len());
    let (h1, r1) = heights(t1, cfg)?;
    let (h2, r2) = heights(t2, cfg)?;
    let height = h1[t1.root()].max(h2[t2.root()]);

    let base = (height.max(1) as u128)
        .saturating_mul((n as u128).checked_pow(alpha + 1).unwrap_or(u128::MAX));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let listed: Vec<u128> = primes
        .unwrap_or(&[])
        .iter()
        .copied()
        .filter(|&p| p >= base && p / 2 <= base)
        .collect();
    let (modulus, prime) = if listed.is_empty() {
        let lo = base.checked_mul(base).unwrap_or(u128::MAX / 2);
        (rng.gen_range(lo..=lo.saturating_mul(2)), false)
    } else {
        (listed[rng.gen_range(0..listed.len())], true)
    };
    let x: Vec<u128> = (0..=height).map(|_| rng.gen_range(1..=modulus)).collect();

    let mut rounds = r1 + r2;
    if t1.len() != t2.len() || height != h1[t1.root()].min(h2[t2.root()]) {
        return Ok(IsoReport {
            verdict: Verdict::NotIsomorphic,
            n,
            height,
            modulus,
            prime,
            q: (0, 0),
            rounds,
        });
    }
    let (q1, a) = canonical_value(t1, &h1, &x, modulus, cfg)?;
    let (q2, b) = canonical_value(t2, &h2, &x, modulus, cfg)?;
    rounds += a + b;
    Ok(IsoReport {
        verdict: if q1 == q2 {
            Verdict::Isomorphic
        } else {
            Verdict::NotIsomorphic
        },
        n,
        height,
        modulus,
        prime,
        q: (q1, q2),
        rounds,
    })
}

/// Direct evaluation of the same polynomial, for tests.
pub fn canonical_value_sequential(t: &Tree, x: &[u128], m: u128) -> u128 {
    let h = t.heights();
    let mut q = vec![0u128; t.len()];
    for v in t.postorder() {
        q[v] = t.children(v).iter().fold(1 % m, |p, &c| {
            mulmod(p, addmod(x[h[v]] % m, m - q[c] % m, m) % m, m)
        });
    }
    q[t.root()]
}
