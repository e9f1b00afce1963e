use std::collections::HashMap;

use ampc_sim::{Key, Machine, Metrics, Program, SimConfig, Simulator, Words};
use serde::Serialize;
use tree_core::{
    id_bits, log_factor, low_degree_components, pack_greedy, BigSmallTree, Tree, VertexId,
};

use crate::algebra::{Instance, UnaryAlgebra};
use crate::error::EngineError;
use crate::log::{ChildRef, ContractionLog, LogRecord, RecordKind, Removed};
use crate::residual::{lift_unary, ChildView, Lifted, MemberView, Residual};

/// One entry of the simulated hash table.
#[derive(Debug, Clone, PartialEq)]
pub enum Rec<N, E> {
    Payload(Residual<N, E>),
    /// The edge from a live vertex to its parent and the stub slot it fills.
    Link {
        slot: VertexId,
        edge: E,
        bits: u64,
    },
    Log(LogRecord<N, E>),
}

fn words_for_bits(bits: u64) -> u64 {
    2 + bits.div_ceil(64)
}

impl<N, E> Words for Rec<N, E> {
    fn words(&self) -> u64 {
        match self {
            Rec::Payload(r) => words_for_bits(r.bits),
            Rec::Link { bits, .. } => words_for_bits(*bits),
            Rec::Log(l) => l.words,
        }
    }
}

fn pkey(v: VertexId) -> Key {
    4 * v as Key
}

fn lkey(v: VertexId) -> Key {
    4 * v as Key + 1
}

fn gkey(v: VertexId) -> Key {
    4 * v as Key + 2
}

/// Progress of one phase of the bounded-degree algorithm.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundedPhase {
    pub before: usize,
    pub groups: usize,
    pub after: usize,
}

/// Progress of one phase of the generalized algorithm.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GeneralPhase {
    pub before: usize,
    pub after: usize,
    pub big_small_nodes: usize,
    pub big_small_leaves: usize,
    pub alpha: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct RunStats {
    pub bounded: Vec<BoundedPhase>,
    pub general: Vec<GeneralPhase>,
    /// Contractions whose residual exceeded `2 * stubs + 1` nodes.
    pub residual_excess: usize,
    pub largest_residual: usize,
    /// The remainder fit one machine and was contracted in a single round.
    pub direct_finish: bool,
    /// Sibling batch rounds over the whole run.
    pub merge_rounds: usize,
    pub log_words: u64,
}

/// Result of a full contraction run.
#[derive(Debug, Clone)]
pub struct Outcome<A: UnaryAlgebra> {
    pub answer: A::Value,
    pub log: ContractionLog<A::Node, A::Edge>,
    pub metrics: Metrics,
    pub stats: RunStats,
}

struct Live {
    parent: Vec<Option<VertexId>>,
    children: Vec<Vec<VertexId>>,
    alive: Vec<bool>,
    root: VertexId,
    count: usize,
}

impl Live {
    fn from_tree(t: &Tree) -> Self {
        Live {
            parent: t.parents().to_vec(),
            children: (0..t.len()).map(|v| t.children(v).to_vec()).collect(),
            alive: vec![true; t.len()],
            root: t.root(),
            count: t.len(),
        }
    }

    fn preorder_from(&self, r: VertexId) -> Vec<VertexId> {
        let mut out = Vec::new();
        let mut stack = vec![r];
        while let Some(v) = stack.pop() {
            out.push(v);
            stack.extend(self.children[v].iter().rev());
        }
        out
    }

    fn is_leaf(&self, v: VertexId) -> bool {
        self.children[v].is_empty()
    }

    fn fresh(&mut self, parent: VertexId) -> VertexId {
        let v = self.parent.len();
        self.parent.push(Some(parent));
        self.children.push(Vec::new());
        self.alive.push(true);
        self.count += 1;
        v
    }

    fn remove(&mut self, v: VertexId) {
        debug_assert!(self.alive[v]);
        self.alive[v] = false;
        self.count -= 1;
    }
}

/// A component contracted into its first member.
struct ConnectedTask {
    members: Vec<(VertexId, Vec<VertexId>)>,
}

struct SiblingTask {
    leaves: Vec<VertexId>,
    merged: VertexId,
}

/// Leaves raked into a flat parent without reading the whole parent.
struct FoldTask {
    parent: VertexId,
    leaves: Vec<VertexId>,
    dead: Vec<VertexId>,
}

enum Task {
    Connected(ConnectedTask),
    Sibling(SiblingTask),
    Fold(FoldTask),
}

type R<A> = Rec<<A as UnaryAlgebra>::Node, <A as UnaryAlgebra>::Edge>;

fn read_payload<'t, A: UnaryAlgebra>(
    m: &mut Machine<'t, R<A>>,
    v: VertexId,
) -> Option<&'t Residual<A::Node, A::Edge>> {
    match m.read(pkey(v)) {
        Some(Rec::Payload(r)) => Some(r),
        _ => {
            m.fault(format!("payload of {v} missing"));
            None
        }
    }
}

fn read_link<'t, A: UnaryAlgebra>(
    m: &mut Machine<'t, R<A>>,
    v: VertexId,
) -> Option<(VertexId, &'t A::Edge)> {
    match m.read(lkey(v)) {
        Some(Rec::Link { slot, edge, .. }) => Some((*slot, edge)),
        _ => {
            m.fault(format!("edge of {v} missing"));
            None
        }
    }
}

impl<'a, A: UnaryAlgebra> Lifted<'a, A> {
    fn link_bits(&self, e: &A::Edge) -> u64 {
        id_bits(self.n) + self.edge_bits(e)
    }

    fn removed_words(&self, r: &Removed<A::Node, A::Edge>) -> u64 {
        words_for_bits(r.payload.bits)
            + r.children
                .iter()
                .map(|c| words_for_bits(self.link_bits(&c.edge)))
                .sum::<u64>()
    }

    fn record(
        &self,
        phase: u32,
        kind: RecordKind,
        survivor: VertexId,
        removed: Vec<Removed<A::Node, A::Edge>>,
    ) -> LogRecord<A::Node, A::Edge> {
        let words = 2 + removed.iter().map(|r| self.removed_words(r)).sum::<u64>();
        LogRecord {
            phase,
            kind,
            survivor,
            removed,
            words,
        }
    }

    fn run_connected(&self, m: &mut Machine<'_, R<A>>, t: &ConnectedTask, phase: u32) {
        let mut payloads = Vec::with_capacity(t.members.len());
        for (u, _) in &t.members {
            match read_payload::<A>(m, *u) {
                Some(r) => payloads.push(r),
                None => return,
            }
        }
        let mut views = Vec::with_capacity(t.members.len());
        for ((u, ch), payload) in t.members.iter().zip(&payloads) {
            let mut children = Vec::with_capacity(ch.len());
            for &c in ch {
                let Some((slot, edge)) = read_link::<A>(m, c) else {
                    return;
                };
                children.push(ChildView { id: c, slot, edge });
            }
            views.push(MemberView {
                id: *u,
                payload,
                children,
            });
        }
        let out = match self.connected(&views) {
            Ok(out) => out,
            Err(e) => {
                m.fault(e.to_string());
                return;
            }
        };
        let slot_of: HashMap<VertexId, VertexId> = views
            .iter()
            .flat_map(|v| v.children.iter().map(|c| (c.id, c.slot)))
            .collect();
        let root = t.members[0].0;
        for (x, edge) in out.external {
            let bits = self.link_bits(&edge);
            m.write(
                lkey(x),
                Rec::Link {
                    slot: slot_of[&x],
                    edge,
                    bits,
                },
            );
        }
        m.write(pkey(root), Rec::Payload(out.residual));
        let removed = views[1..]
            .iter()
            .map(|v| Removed {
                id: v.id,
                payload: v.payload.clone(),
                children: v
                    .children
                    .iter()
                    .map(|c| ChildRef {
                        id: c.id,
                        slot: c.slot,
                        edge: c.edge.clone(),
                    })
                    .collect(),
            })
            .collect();
        m.write(
            gkey(root),
            Rec::Log(self.record(phase, RecordKind::Connected, root, removed)),
        );
    }

    fn run_sibling(&self, m: &mut Machine<'_, R<A>>, t: &SiblingTask, phase: u32) {
        let mut parts = Vec::with_capacity(t.leaves.len());
        let mut first_slot = None;
        for &l in &t.leaves {
            let Some(r) = read_payload::<A>(m, l) else {
                return;
            };
            let Some((slot, edge)) = read_link::<A>(m, l) else {
                return;
            };
            if r.len() != 1 {
                m.fault(format!("sibling merge of non-leaf payload {l}"));
                return;
            }
            first_slot.get_or_insert(slot);
            parts.push((r, edge));
        }
        let refs: Vec<_> = parts.iter().map(|(r, e)| (r.root_node(), *e)).collect();
        let (node, edge) = match self.merge(&refs) {
            Ok(x) => x,
            Err(e) => {
                m.fault(e.to_string());
                return;
            }
        };
        let bits = self.link_bits(&edge);
        m.write(
            lkey(t.merged),
            Rec::Link {
                slot: first_slot.expect("non-empty batch"),
                edge,
                bits,
            },
        );
        m.write(pkey(t.merged), Rec::Payload(self.single(node)));
        let removed = t
            .leaves
            .iter()
            .zip(&parts)
            .map(|(&l, (r, _))| Removed {
                id: l,
                payload: (*r).clone(),
                children: Vec::new(),
            })
            .collect();
        m.write(
            gkey(t.merged),
            Rec::Log(self.record(phase, RecordKind::Sibling, t.merged, removed)),
        );
    }

    fn run_fold(&self, m: &mut Machine<'_, R<A>>, t: &FoldTask, phase: u32) {
        let Some(Rec::Payload(root)) = m.read_partial(pkey(t.parent)) else {
            m.fault(format!("payload of {} missing", t.parent));
            return;
        };
        let root_bits = self.alg.node_bits(root.root_node()) + 2;
        // Dead stubs are dropped by the copy machines while carrying the
        // untouched part of the parent.
        let stub_bits = t.leaves.len() as u64 * (id_bits(self.n) + 2);
        m.charge_read(words_for_bits(root_bits + stub_bits));
        let mut leaves = Vec::with_capacity(t.leaves.len());
        for &l in &t.leaves {
            let Some(r) = read_payload::<A>(m, l) else {
                return;
            };
            let Some((slot, edge)) = read_link::<A>(m, l) else {
                return;
            };
            leaves.push((slot, r, edge));
        }
        let refs: Vec<_> = leaves
            .iter()
            .map(|(s, r, e)| (*s, r.root_node(), *e))
            .collect();
        let folded = match self.fold_flat(root, &refs, &t.dead) {
            Ok(f) => f,
            Err(e) => {
                m.fault(e.to_string());
                return;
            }
        };
        let changed = words_for_bits(self.alg.node_bits(folded.root_node()) + 2);
        m.write_partial(pkey(t.parent), Rec::Payload(folded), changed);
        let removed = leaves
            .iter()
            .map(|(_, r, _)| Removed {
                id: 0,
                payload: (*r).clone(),
                children: Vec::new(),
            })
            .zip(&t.leaves)
            .map(|(mut r, &l)| {
                r.id = l;
                r
            })
            .collect();
        m.write(
            gkey(t.parent),
            Rec::Log(self.record(phase, RecordKind::Connected, t.parent, removed)),
        );
    }
}

/// Orchestrates both contraction algorithms over the simulator.
pub struct Engine<'a, A: UnaryAlgebra> {
    lift: Lifted<'a, A>,
    sim: Simulator<R<A>>,
    live: Live,
    log: ContractionLog<A::Node, A::Edge>,
    dead_slots: HashMap<VertexId, Vec<VertexId>>,
    phase: u32,
    stats: RunStats,
}

impl<'a, A: UnaryAlgebra> Engine<'a, A> {
    pub fn new(alg: &'a A, inst: &Instance<A>, cfg: &SimConfig) -> Result<Self, EngineError> {
        let n = inst.len();
        let lift = lift_unary(alg, n);
        let mut sim = Simulator::new(cfg.clone())?;
        let mut table = HashMap::with_capacity(2 * n);
        for v in 0..n {
            let r = lift.initial(inst.nodes[v].clone(), inst.tree.children(v));
            table.insert(pkey(v), Rec::Payload(r));
            if let Some(e) = &inst.up[v] {
                table.insert(
                    lkey(v),
                    Rec::Link {
                        slot: v,
                        edge: e.clone(),
                        bits: lift.link_bits(e),
                    },
                );
            }
        }
        sim.load(table);
        Ok(Engine {
            lift,
            sim,
            live: Live::from_tree(&inst.tree),
            log: ContractionLog::new(n),
            dead_slots: HashMap::new(),
            phase: 0,
            stats: RunStats::default(),
        })
    }

    fn cfg(&self) -> &SimConfig {
        self.sim.config()
    }

    fn payload(&self, v: VertexId) -> &Residual<A::Node, A::Edge> {
        match self.sim.table().get(&pkey(v)) {
            Some(Rec::Payload(r)) => r,
            _ => panic!("live vertex {v} has no payload"),
        }
    }

    fn slot(&self, v: VertexId) -> VertexId {
        match self.sim.table().get(&lkey(v)) {
            Some(Rec::Link { slot, .. }) => *slot,
            _ => panic!("live vertex {v} has no edge record"),
        }
    }

    fn key_words(&self, k: Key) -> u64 {
        self.sim.table().get(&k).map_or(0, Words::words)
    }

    fn live_words(&self) -> u64 {
        self.sim.table().values().map(Words::words).sum()
    }

    fn task_words(&self, t: &Task) -> u64 {
        match t {
            Task::Connected(c) => c
                .members
                .iter()
                .map(|(u, ch)| {
                    self.key_words(pkey(*u))
                        + ch.iter().map(|&x| self.key_words(lkey(x))).sum::<u64>()
                })
                .sum(),
            Task::Sibling(s) => s
                .leaves
                .iter()
                .map(|&l| self.key_words(pkey(l)) + self.key_words(lkey(l)))
                .sum(),
            Task::Fold(f) => {
                4 + f
                    .leaves
                    .iter()
                    .map(|&l| self.key_words(pkey(l)) + self.key_words(lkey(l)))
                    .sum::<u64>()
            }
        }
    }

    /// Runs one round in which every task is assigned to a machine by
    /// first-fit decreasing on its input size, then applies the structural
    /// effects and archives the log records the round produced.
    fn round(&mut self, label: &str, tasks: Vec<Task>) -> Result<(), EngineError> {
        let cap = (self.cfg().space() / 3).max(1);
        let mut sized: Vec<(u64, usize)> = tasks
            .iter()
            .enumerate()
            .map(|(i, t)| (self.task_words(t), i))
            .collect();
        sized.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        let mut bins: Vec<(u64, Vec<usize>)> = Vec::new();
        for (w, i) in sized {
            match bins.iter_mut().find(|b| b.0 + w <= cap) {
                Some(b) => {
                    b.0 += w;
                    b.1.push(i);
                }
                None => bins.push((w, vec![i])),
            }
        }

        // Liveness after this round decides what the copy machines carry.
        for t in &tasks {
            match t {
                Task::Connected(c) => c.members[1..]
                    .iter()
                    .for_each(|(u, _)| self.live.remove(*u)),
                Task::Sibling(s) => s.leaves.iter().for_each(|&l| self.live.remove(l)),
                Task::Fold(f) => f.leaves.iter().for_each(|&l| self.live.remove(l)),
            }
        }

        let phase = self.phase;
        let lift = &self.lift;
        let tasks_ref = &tasks;
        let programs: Vec<Program<'_, R<A>>> = bins
            .into_iter()
            .map(|(_, idx)| {
                Box::new(move |m: &mut Machine<'_, R<A>>| {
                    for i in idx {
                        match &tasks_ref[i] {
                            Task::Connected(c) => lift.run_connected(m, c, phase),
                            Task::Sibling(s) => lift.run_sibling(m, s, phase),
                            Task::Fold(f) => lift.run_fold(m, f, phase),
                        }
                    }
                }) as Program<'_, R<A>>
            })
            .collect();
        let live = &self.live;
        let keep = |k: Key, _: &R<A>| {
            let v = (k / 4) as usize;
            v < live.alive.len() && live.alive[v] && k % 4 < 2
        };
        self.sim.run_round_carry(label, programs, keep)?;

        for (_, rec) in self.sim.drain(|k, _| k % 4 == 2) {
            if let Rec::Log(r) = rec {
                self.log.records.push(r);
            }
        }

        for t in &tasks {
            match t {
                Task::Connected(c) => {
                    let root = c.members[0].0;
                    let slots: HashMap<VertexId, VertexId> = c
                        .members
                        .iter()
                        .flat_map(|(_, ch)| ch.iter().copied())
                        .filter(|x| self.live.alive[*x])
                        .map(|x| (self.slot(x), x))
                        .collect();
                    let kids: Vec<VertexId> = self
                        .payload(root)
                        .stub_slots()
                        .iter()
                        .map(|s| slots[s])
                        .collect();
                    for (u, _) in &c.members[1..] {
                        self.live.children[*u].clear();
                    }
                    for &x in &kids {
                        self.live.parent[x] = Some(root);
                    }
                    self.live.children[root] = kids;
                    self.dead_slots.remove(&root);
                    self.check_payload(root)?;
                }
                Task::Sibling(s) => {
                    let p = self.live.parent[s.merged].expect("merged leaf has a parent");
                    let ch = &mut self.live.children[p];
                    let pos = ch
                        .iter()
                        .position(|&x| x == s.leaves[0])
                        .expect("leaf under parent");
                    ch[pos] = s.merged;
                    ch.retain(|x| !s.leaves[1..].contains(x));
                }
                Task::Fold(f) => {
                    self.live.children[f.parent].retain(|x| !f.leaves.contains(x));
                    self.dead_slots.remove(&f.parent);
                    self.check_payload(f.parent)?;
                }
            }
        }
        Ok(())
    }

    /// Residual size and bit budget of a payload just produced.
    fn check_payload(&mut self, v: VertexId) -> Result<(), EngineError> {
        let (len, stubs, bits) = {
            let r = self.payload(v);
            (r.len(), r.stub_count(), r.bits)
        };
        self.stats.largest_residual = self.stats.largest_residual.max(len);
        if len > 2 * stubs + 1 {
            self.stats.residual_excess += 1;
        }
        if let Some(cw) = self.lift.alg.payload_constant() {
            let word = log_factor(self.log.n).max(self.lift.alg.word_bits());
            let budget = cw * (stubs as u64 + 1) * word;
            if bits > budget {
                self.sim.violation(format!(
                    "payload of vertex {v} uses {bits} bits, budget {budget}"
                ))?;
            }
        }
        Ok(())
    }

    /// Bounded-degree contraction of every tree hanging from `roots`, all
    /// trees sharing the same rounds.
    fn bounded(&mut self, mut roots: Vec<VertexId>, top: bool) -> Result<(), EngineError> {
        let lambda = self.cfg().fan();
        let inv = self.cfg().inv_eps();
        let safety = self.live.count + 1;
        let mut local = 0usize;
        loop {
            roots.retain(|&r| !self.live.is_leaf(r));
            if roots.is_empty() {
                return Ok(());
            }
            local += 1;
            if local > safety {
                return Err(EngineError::PhaseCap {
                    cap: safety,
                    live: self.live.count,
                });
            }
            self.phase += 1;
            if top {
                self.sim.begin_phase(&format!("phase {local}"));
            }
            self.sim.charge_subroutine("preorder", inv);
            let order: Vec<VertexId> = roots
                .iter()
                .flat_map(|&r| self.live.preorder_from(r))
                .collect();
            let mut weights = Vec::with_capacity(order.len());
            for &v in &order {
                let d = self.live.children[v].len();
                if d > lambda {
                    return Err(EngineError::DegreeBound {
                        vertex: v,
                        degree: d,
                        limit: lambda,
                    });
                }
                weights.push(d);
            }
            // A contracted group has at most as many children as its total
            // degree, so the degree bound survives the phase.
            let bounds = pack_greedy(&weights, lambda);
            let groups = bounds.len() - 1;

            let mut group = HashMap::with_capacity(order.len());
            for g in 0..groups {
                for &v in &order[bounds[g]..bounds[g + 1]] {
                    group.insert(v, g);
                }
            }
            let mut comp_of: HashMap<VertexId, usize> = HashMap::new();
            let mut comps: Vec<Vec<VertexId>> = Vec::new();
            for &v in &order {
                let same = self.live.parent[v]
                    .filter(|p| group.get(p) == group.get(&v))
                    .and_then(|p| comp_of.get(&p).copied());
                let c = match same {
                    Some(c) => c,
                    None => {
                        comps.push(Vec::new());
                        comps.len() - 1
                    }
                };
                comps[c].push(v);
                comp_of.insert(v, c);
            }
            let tasks: Vec<Task> = comps
                .into_iter()
                .filter(|c| c.len() > 1)
                .map(|c| {
                    Task::Connected(ConnectedTask {
                        members: c
                            .into_iter()
                            .map(|u| (u, self.live.children[u].clone()))
                            .collect(),
                    })
                })
                .collect();
            self.round("compress", tasks)?;

            let tasks = self.star_tasks(&roots, false);
            self.round("rake", tasks)?;
            self.sim.charge_subroutine("relabel", 1);

            let after = roots
                .iter()
                .map(|&r| self.live.preorder_from(r).len())
                .sum();
            self.stats.bounded.push(BoundedPhase {
                before: order.len(),
                groups,
                after,
            });
        }
    }

    /// One task per vertex of the forest that has leaf children: the vertex
    /// together with all of them.
    fn star_tasks(&self, roots: &[VertexId], fold: bool) -> Vec<Task> {
        let mut tasks = Vec::new();
        for &r in roots {
            for p in self.live.preorder_from(r) {
                let leaves: Vec<VertexId> = self.live.children[p]
                    .iter()
                    .copied()
                    .filter(|&c| self.live.is_leaf(c))
                    .collect();
                if leaves.is_empty() {
                    continue;
                }
                if fold && self.payload(p).is_flat() {
                    let dead = self.dead_slots.get(&p).cloned().unwrap_or_default();
                    tasks.push(Task::Fold(FoldTask {
                        parent: p,
                        leaves,
                        dead,
                    }));
                } else {
                    let mut members = vec![(p, self.live.children[p].clone())];
                    members.extend(leaves.into_iter().map(|l| (l, Vec::new())));
                    tasks.push(Task::Connected(ConnectedTask { members }));
                }
            }
        }
        tasks
    }

    /// Dense copy of the live tree in preorder, with the map back to ids.
    fn compact(&self) -> (Tree, Vec<VertexId>) {
        let order = self.live.preorder_from(self.live.root);
        let mut dense = HashMap::with_capacity(order.len());
        for (i, &v) in order.iter().enumerate() {
            dense.insert(v, i);
        }
        let parents: Vec<Option<usize>> = order
            .iter()
            .map(|v| self.live.parent[*v].map(|p| dense[&p]))
            .collect();
        let tree = Tree::from_parents(&parents).expect("live structure is a tree");
        (tree, order)
    }

    fn direct_finish(&mut self) -> Result<(), EngineError> {
        let order = self.live.preorder_from(self.live.root);
        let members = order
            .into_iter()
            .map(|u| (u, self.live.children[u].clone()))
            .collect();
        self.phase += 1;
        self.sim.begin_phase("final");
        self.stats.direct_finish = true;
        self.round("final", vec![Task::Connected(ConnectedTask { members })])
    }

    fn general(&mut self) -> Result<(), EngineError> {
        let fan = self.cfg().fan();
        let inv = self.cfg().inv_eps();
        let cap = (4.0 / self.cfg().epsilon - 1e-9).ceil() as usize;
        let strict = self.cfg().strict;
        let mut phases = 0;
        while self.live.count > 1 {
            if 3 * self.live_words() <= self.cfg().space() {
                return self.direct_finish();
            }
            phases += 1;
            if phases > cap {
                if strict {
                    return Err(EngineError::PhaseCap {
                        cap,
                        live: self.live.count,
                    });
                }
                self.sim.violation(format!(
                    "phase cap {cap} exceeded with {} live",
                    self.live.count
                ))?;
            }
            self.sim.begin_phase(&format!("phase {phases}"));
            let before = self.live.count;
            self.sim.charge_subroutine("connectivity", inv);
            let (tree, ids) = self.compact();
            let alpha = fan + 1;
            let bst = BigSmallTree::build(&tree, alpha);
            let roots: Vec<VertexId> = low_degree_components(&tree, alpha)
                .into_iter()
                .filter(|c| c.is_leaf)
                .map(|c| ids[c.root()])
                .collect();
            self.bounded(roots, false)?;

            loop {
                let mut tasks = Vec::new();
                for p in self.live.preorder_from(self.live.root) {
                    let leaves: Vec<VertexId> = self.live.children[p]
                        .iter()
                        .copied()
                        .filter(|&c| self.live.is_leaf(c))
                        .collect();
                    if leaves.len() < 2 {
                        continue;
                    }
                    for chunk in leaves.chunks(fan) {
                        if chunk.len() < 2 {
                            continue;
                        }
                        tasks.push((p, chunk.to_vec()));
                    }
                }
                if tasks.is_empty() {
                    break;
                }
                self.phase += 1;
                let mut planned = Vec::with_capacity(tasks.len());
                for (p, leaves) in tasks {
                    for &l in &leaves[1..] {
                        let s = self.slot(l);
                        self.dead_slots.entry(p).or_default().push(s);
                    }
                    let merged = self.live.fresh(p);
                    planned.push(Task::Sibling(SiblingTask { leaves, merged }));
                }
                self.stats.merge_rounds += 1;
                self.round("merge", planned)?;
            }
            let root = self.live.root;
            let tasks = self.star_tasks(&[root], true);
            self.phase += 1;
            self.round("fold", tasks)?;
            self.sim.charge_subroutine("relabel", 1);
            self.stats.general.push(GeneralPhase {
                before,
                after: self.live.count,
                big_small_nodes: bst.len(),
                big_small_leaves: bst.leaves(),
                alpha,
            });
        }
        Ok(())
    }

    fn finish(mut self) -> Result<Outcome<A>, EngineError> {
        self.sim.end_phase();
        let root = self.live.root;
        let payload = self.payload(root).clone();
        if !self.live.children[root].is_empty() || payload.stub_count() != 0 {
            return Err(EngineError::LogIntegrity(
                "contraction stopped with live children at the root".into(),
            ));
        }
        let answer = self.lift.resolve(&payload, |_| None);
        self.log.root = root;
        self.log.root_payload = Some(payload);
        let words = self.log.total_words();
        self.stats.log_words = words;
        let limit = self.cfg().total_limit();
        if words > limit {
            self.sim.violation(format!(
                "contraction log holds {words} words, limit {limit}"
            ))?;
        }
        Ok(Outcome {
            answer,
            log: self.log,
            metrics: self.sim.snapshot_metrics(),
            stats: self.stats,
        })
    }
}

/// Bounded-degree contraction: every vertex must have at most `n^eps`
/// children.
pub fn bounded_tree_contract<A: UnaryAlgebra>(
    alg: &A,
    inst: &Instance<A>,
    cfg: &SimConfig,
) -> Result<Outcome<A>, EngineError> {
    let fan = cfg.fan();
    for v in 0..inst.len() {
        let d = inst.tree.deg(v);
        if d > fan {
            return Err(EngineError::DegreeBound {
                vertex: v,
                degree: d,
                limit: fan,
            });
        }
    }
    let mut e = Engine::new(alg, inst, cfg)?;
    let root = e.live.root;
    e.bounded(vec![root], true)?;
    e.finish()
}

/// Contraction of arbitrary trees, alternating bounded contraction of the
/// low-degree leaf components with batched raking at high-degree vertices.
pub fn tree_contract<A: UnaryAlgebra>(
    alg: &A,
    inst: &Instance<A>,
    cfg: &SimConfig,
) -> Result<Outcome<A>, EngineError> {
    let mut e = Engine::new(alg, inst, cfg)?;
    e.general()?;
    e.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebras::Count;

    fn counted(t: Tree) -> Instance<Count> {
        Instance::build(t, |_| 1, |_| 0)
    }

    #[test]
    fn single_vertex_runs_no_phase() {
        let cfg = SimConfig::new(1, 0.5).strict(true);
        let out = bounded_tree_contract(&Count, &counted(Tree::single()), &cfg).unwrap();
        assert_eq!(out.answer, 1);
        assert!(out.stats.bounded.is_empty());
        assert_eq!(out.metrics.rounds, 0);
        assert!(out.log.records.is_empty());
    }

    #[test]
    fn path_of_sixteen() {
        let parents: Vec<_> = (0..16usize).map(|v| v.checked_sub(1)).collect();
        let t = Tree::from_parents(&parents).unwrap();
        let cfg = SimConfig::new(16, 0.5).strict(true);
        assert_eq!(cfg.fan(), 4);
        let out = bounded_tree_contract(&Count, &counted(t), &cfg).unwrap();
        assert_eq!(out.answer, 16);
        assert!(out.stats.bounded.len() <= 2, "{:?}", out.stats.bounded);
        for p in &out.stats.bounded {
            assert!(p.after <= p.groups.max(1));
        }
    }

    #[test]
    fn star_takes_one_general_phase() {
        for n in [1937usize, 2000] {
            star_case(n);
        }
    }

    fn star_case(n: usize) {
        let parents: Vec<_> = (0..n)
            .map(|v| if v == 0 { None } else { Some(0) })
            .collect();
        let t = Tree::from_parents(&parents).unwrap();
        let cfg = SimConfig::new(n, 0.5).strict(true);
        let out = tree_contract(&Count, &counted(t), &cfg).unwrap();
        assert_eq!(out.answer, n as i64);
        assert!(out.stats.general.len() <= 1);
        let fan = cfg.fan() as f64;
        let levels = (((n - 1) as f64).ln() / fan.ln() - 1e-9).ceil() as usize;
        let merges = out.stats.merge_rounds;
        assert!(merges <= levels, "{merges} merge rounds, {levels} levels");
    }

    #[test]
    fn every_vertex_but_the_root_removed_once() {
        let parents: Vec<_> = (0..300usize)
            .map(|v| if v == 0 { None } else { Some((v * 7919) % v) })
            .collect();
        let t = Tree::from_parents(&parents).unwrap();
        let root = t.root();
        let cfg = SimConfig::new(300, 0.4).strict(true);
        let out = tree_contract(&Count, &counted(t), &cfg).unwrap();
        let counts = out.log.removal_counts();
        for v in 0..300 {
            let want = usize::from(v != root);
            assert_eq!(counts.get(&v).copied().unwrap_or(0), want, "vertex {v}");
        }
    }
}
