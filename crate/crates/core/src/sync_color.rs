//! Synchronization colors.
//!
//! Phase-2 vertices of one level are colored with `deg_threshold + 1` colors.
//! Phase-1 vertices inherit the color of their key in a proper coloring of
//! the super-graph, whose nodes are the keys of one level and whose edges join
//! keys `K1 != K2` with `N(K1) ∩ K2 != ∅`. Both colorings use a deterministic
//! `(Δ+1)` reduction: polynomial color reduction down to `O(Δ²)` colors,
//! then block-wise shrinking that removes one color class per round.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::engine::{self, Inbox, RoundTrace, Step, VertexContext, VertexProgram, WireSize};
use crate::error::{ensure, Error, Result};
use crate::graph::{check_proper, Color, ColorAssignment, Graph, Key, VertexId};
use crate::partition::{Label, PartitionOutcome};
use crate::preset::Preset;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ReductionStep {
    /// Read colors as base-`q` digit vectors of degree-`degree` polynomials
    /// over `F_q` and move to `x * q + p(x)` for the first `x` where `p`
    /// differs from every neighbor's polynomial.
    Polynomial { q: u64, degree: u32 },
    /// In blocks of `block` colors, recolor local class `class` into
    /// `0..keep`. The last step of a pass re-packs the blocks.
    Shrink {
        block: u64,
        keep: u64,
        class: u64,
        last: bool,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReductionSchedule {
    pub delta: u64,
    #[serde(serialize_with = "big_as_string")]
    pub initial_palette: BigUint,
    pub steps: Vec<ReductionStep>,
}

fn big_as_string<S: serde::Serializer>(x: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

fn is_prime(x: u64) -> bool {
    if x < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= x {
        if x.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn next_prime(mut x: u64) -> u64 {
    while !is_prime(x) {
        x += 1;
    }
    x
}

fn ceil_root(m: &BigUint, k: u32) -> BigUint {
    let r = m.nth_root(k);
    if r.pow(k) < *m {
        r + 1u32
    } else {
        r
    }
}

fn polynomial_steps(initial_palette: &BigUint, delta: u64) -> Result<(Vec<ReductionStep>, u64)> {
    let mut steps = Vec::new();
    let mut m = initial_palette.clone();
    loop {
        let mut best: Option<(u64, u32)> = None;
        for d in 1..=64u32 {
            let Some(root) = ceil_root(&m, d + 1).to_u64() else {
                continue;
            };
            let floor = delta.saturating_mul(d as u64).saturating_add(1);
            let q = next_prime(root.max(floor).max(2));
            if best.is_none_or(|(bq, _)| q < bq) {
                best = Some((q, d));
            }
        }
        match best {
            Some((q, degree)) if BigUint::from(q) * q < m => {
                steps.push(ReductionStep::Polynomial { q, degree });
                m = BigUint::from(q) * q;
            }
            _ => break,
        }
    }
    let m = m
        .to_u64()
        .ok_or_else(|| Error::Input("initial palette too large for polynomial reduction".into()))?;
    Ok((steps, m))
}

/// Palette size after one shrink pass with blocks of `2 * keep` colors.
fn shrunk(m: u64, keep: u64) -> u64 {
    let block = 2 * keep;
    (m / block) * keep + (m % block).min(keep)
}

impl ReductionSchedule {
    /// Plans the reduction of a palette of size `initial_palette` to
    /// `delta + 1` colors on graphs of maximum degree at most `delta`.
    pub fn plan(initial_palette: &BigUint, delta: u64) -> Result<Self> {
        let (mut steps, m) = polynomial_steps(initial_palette, delta)?;
        let keep = delta + 1;
        let block = 2 * keep;
        let mut m = m;
        while m > keep {
            let top = m.min(block);
            for class in (keep..top).rev() {
                steps.push(ReductionStep::Shrink {
                    block,
                    keep,
                    class,
                    last: class == keep,
                });
            }
            m = shrunk(m, keep);
        }
        Ok(ReductionSchedule {
            delta,
            initial_palette: initial_palette.clone(),
            steps,
        })
    }

    /// Number of rounds [`plan`](Self::plan) would schedule, without
    /// materializing the steps.
    pub fn count_rounds(initial_palette: &BigUint, delta: u64) -> Result<u128> {
        let (steps, mut m) = polynomial_steps(initial_palette, delta)?;
        let keep = delta + 1;
        let mut total = steps.len() as u128;
        while m > keep {
            total += (m.min(2 * keep) - keep) as u128;
            m = shrunk(m, keep);
        }
        Ok(total)
    }

    pub fn rounds(&self) -> usize {
        self.steps.len()
    }
}

fn digits(c: &BigUint, q: u64, count: u32) -> Vec<u64> {
    let mut c = c.clone();
    (0..count)
        .map(|_| {
            let d = (&c % q).to_u64().expect("digit below q");
            c /= q;
            d
        })
        .collect()
}

fn eval(coeffs: &[u64], x: u64, q: u64) -> u64 {
    coeffs
        .iter()
        .rev()
        .fold(0u128, |acc, &a| (acc * x as u128 + a as u128) % q as u128) as u64
}

#[derive(Debug)]
pub struct ReduceState {
    color: BigUint,
    neighbors: BTreeMap<VertexId, BigUint>,
    pub result: Option<Color>,
}

pub struct ReduceMsg(BigUint);

impl WireSize for ReduceMsg {
    fn wire_bits(&self) -> u64 {
        self.0.bits().max(1)
    }
}

/// Runs a [`ReductionSchedule`]: one schedule step per round.
pub struct ReduceProgram {
    schedule: Arc<ReductionSchedule>,
    initial: Arc<BTreeMap<VertexId, BigUint>>,
}

impl ReduceProgram {
    pub fn new(schedule: Arc<ReductionSchedule>, initial: Arc<BTreeMap<VertexId, BigUint>>) -> Self {
        ReduceProgram { schedule, initial }
    }

    fn finish(st: &mut ReduceState) {
        st.result = Some(st.color.to_u32().expect("final color fits") + 1);
    }
}

impl VertexProgram for ReduceProgram {
    type State = ReduceState;
    type Msg = ReduceMsg;

    fn init(&self, ctx: &VertexContext) -> ReduceState {
        ReduceState {
            color: self.initial.get(&ctx.id).cloned().unwrap_or_default(),
            neighbors: BTreeMap::new(),
            result: None,
        }
    }

    fn step(
        &self,
        round: usize,
        ctx: &VertexContext,
        st: &mut ReduceState,
        inbox: &Inbox<'_, ReduceMsg>,
    ) -> Step<ReduceMsg> {
        let total = self.schedule.steps.len();
        if round == 0 {
            if ctx.degree == 0 {
                st.color = BigUint::zero();
                Self::finish(st);
                return Step::halt();
            }
            if total == 0 {
                Self::finish(st);
                return Step::halt();
            }
            return Step::broadcast(ReduceMsg(st.color.clone()));
        }
        for (s, ReduceMsg(c)) in inbox.iter() {
            st.neighbors.insert(s, c.clone());
        }
        let before = st.color.clone();
        match self.schedule.steps[round - 1] {
            ReductionStep::Polynomial { q, degree } => {
                let own = digits(&st.color, q, degree + 1);
                let others: Vec<Vec<u64>> = st.neighbors.values().map(|c| digits(c, q, degree + 1)).collect();
                let x = (0..q)
                    .find(|&x| {
                        let y = eval(&own, x, q);
                        others.iter().all(|o| eval(o, x, q) != y)
                    })
                    .expect("q > delta * degree leaves a free point");
                st.color = BigUint::from(x) * q + eval(&own, x, q);
            }
            ReductionStep::Shrink {
                block,
                keep,
                class,
                last,
            } => {
                let c = st.color.to_u64().expect("shrinking works on small palettes");
                if c % block == class {
                    let group = c / block;
                    let used: BTreeSet<u64> = st
                        .neighbors
                        .values()
                        .filter_map(|n| n.to_u64())
                        .filter(|n| n / block == group)
                        .map(|n| n % block)
                        .collect();
                    let l = (0..keep).find(|l| !used.contains(l)).expect("at most delta neighbors");
                    st.color = BigUint::from(group * block + l);
                }
                if last {
                    let pack = |c: &BigUint| {
                        let c = c.to_u64().expect("small palette");
                        BigUint::from((c / block) * keep + c % block)
                    };
                    st.color = pack(&st.color);
                    for v in st.neighbors.values_mut() {
                        *v = pack(v);
                    }
                }
            }
        }
        if round == total {
            Self::finish(st);
            return Step::halt();
        }
        if st.color != before || matches!(self.schedule.steps[round - 1], ReductionStep::Polynomial { .. }) {
            Step::broadcast(ReduceMsg(st.color.clone()))
        } else {
            Step::silent()
        }
    }
}

/// Proper `(delta+1)`-coloring of `g` from injective initial ids.
pub fn reduce_colors(
    g: &Graph,
    delta: usize,
    initial_ids: &BTreeMap<VertexId, BigUint>,
) -> Result<(ColorAssignment, RoundTrace)> {
    if g.max_degree() > delta {
        return Err(Error::Input(format!(
            "maximum degree {} exceeds delta {delta}",
            g.max_degree()
        )));
    }
    let mut seen = BTreeSet::new();
    for v in g.vertices() {
        let id = initial_ids
            .get(&v)
            .ok_or_else(|| Error::Input(format!("no initial id for vertex {v}")))?;
        if !seen.insert(id) {
            return Err(Error::Input(format!("initial id {id} is not unique")));
        }
    }
    let palette = seen.iter().next_back().map_or_else(BigUint::one, |&m| m + 1u32);
    let schedule = Arc::new(ReductionSchedule::plan(&palette, delta as u64)?);
    let program = ReduceProgram::new(Arc::clone(&schedule), Arc::new(initial_ids.clone()));
    let out = engine::run(g, &program, schedule.rounds())?;
    let mut colors = ColorAssignment::new(delta as Color + 1);
    for (v, st) in out.states {
        colors.set(v, st.result.expect("every vertex finishes"));
    }
    if let Err(v) = check_proper(g, &colors, true) {
        return Err(Error::Assertion(format!(
            "color reduction produced an improper coloring: {v}"
        )));
    }
    Ok((colors, out.trace))
}

/// [`reduce_colors`] with every vertex's own id as its initial color.
pub fn reduce_colors_by_id(g: &Graph, delta: usize) -> Result<(ColorAssignment, RoundTrace)> {
    let ids = g.vertices().map(|v| (v, BigUint::from(v))).collect();
    reduce_colors(g, delta, &ids)
}

/// Decimal digits needed for the largest id of `g`.
pub fn id_width(g: &Graph) -> usize {
    g.max_id().unwrap_or(1).max(1).to_string().len()
}

/// Concatenates the sorted member ids, each padded to `width` digits.
pub fn encode_key(key: &Key, width: usize) -> BigUint {
    let text: String = key.iter().map(|v| format!("{v:0width$}")).collect();
    text.parse().unwrap_or_default()
}

#[derive(Clone, Debug)]
pub struct SuperGraph {
    pub level: u32,
    /// Sorted keys; node `i` has engine id `i + 1`.
    pub nodes: Vec<Key>,
    pub graph: Graph,
}

impl SuperGraph {
    pub fn index_of(&self, key: &Key) -> Option<usize> {
        self.nodes.binary_search(key).ok()
    }

    pub fn max_degree(&self) -> usize {
        self.graph.max_degree()
    }

    pub fn edge_keys(&self) -> Vec<(Key, Key)> {
        self.graph
            .edges()
            .map(|(a, b)| (self.nodes[a as usize - 1].clone(), self.nodes[b as usize - 1].clone()))
            .collect()
    }

    fn from_adjacency(level: u32, adj: &BTreeMap<Key, BTreeSet<Key>>) -> SuperGraph {
        let nodes: Vec<Key> = adj.keys().cloned().collect();
        let mut graph = Graph::with_vertices(1..=nodes.len() as VertexId);
        let idx = |k: &Key| nodes.binary_search(k).expect("known key") as VertexId + 1;
        for (k, nbrs) in adj {
            for k2 in nbrs {
                graph.add_edge(idx(k), idx(k2)).expect("distinct keys");
            }
        }
        SuperGraph { level, nodes, graph }
    }
}

fn super_adjacency(g: &Graph, keys: &BTreeSet<Key>) -> BTreeMap<Key, BTreeSet<Key>> {
    let mut holders: HashMap<VertexId, Vec<&Key>> = HashMap::new();
    for k in keys {
        for &v in k.iter() {
            holders.entry(v).or_default().push(k);
        }
    }
    let mut adj: BTreeMap<Key, BTreeSet<Key>> = keys.iter().map(|k| (k.clone(), BTreeSet::new())).collect();
    for k in keys {
        for x in g.closed_neighborhood(k.iter()) {
            for &k2 in holders.get(&x).into_iter().flatten() {
                if k2 != k {
                    adj.get_mut(k).expect("present").insert(k2.clone());
                }
            }
        }
    }
    adj
}

/// Offline construction of the level-`level` super-graph.
pub fn build_super_graph(
    g: &Graph,
    level: u32,
    labels: &BTreeMap<VertexId, Label>,
    keys: &BTreeMap<VertexId, Key>,
) -> SuperGraph {
    let nodes: BTreeSet<Key> = labels
        .iter()
        .filter(|(_, l)| **l == Label::new(level, 1))
        .map(|(v, _)| keys[v].clone())
        .collect();
    SuperGraph::from_adjacency(level, &super_adjacency(g, &nodes))
}

/// Phase-1 vertex announcing its key and neighbors.
#[derive(Debug)]
pub struct KeyRecord {
    pub id: VertexId,
    pub label: Label,
    pub key: Key,
    pub adjacency: Vec<VertexId>,
}

pub struct KeyBatch(Vec<Arc<KeyRecord>>);

impl WireSize for KeyBatch {
    fn wire_bits(&self) -> u64 {
        self.0
            .iter()
            .map(|r| 104 + 64 * (r.key.len() + r.adjacency.len()) as u64)
            .sum()
    }
}

#[derive(Debug, Default)]
pub struct DiscoveryState {
    label: Option<Label>,
    records: HashMap<VertexId, Arc<KeyRecord>>,
    /// Keys this vertex represents, with their super-graph neighbors.
    pub represented: BTreeMap<Key, BTreeSet<Key>>,
}

/// Floods phase-1 records among same-label vertices for `span` rounds, after
/// which the highest-id member of every key knows the key's super-graph
/// neighborhood.
pub struct KeyDiscovery<'a> {
    span: usize,
    labels: &'a BTreeMap<VertexId, Label>,
    keys: &'a BTreeMap<VertexId, Key>,
    graph: &'a Graph,
}

impl VertexProgram for KeyDiscovery<'_> {
    type State = DiscoveryState;
    type Msg = KeyBatch;

    fn init(&self, ctx: &VertexContext) -> DiscoveryState {
        let label = self.labels.get(&ctx.id).copied().filter(|l| l.phase == 1);
        let mut st = DiscoveryState {
            label,
            ..Default::default()
        };
        if let Some(label) = label {
            let own = KeyRecord {
                id: ctx.id,
                label,
                key: self.keys[&ctx.id].clone(),
                adjacency: self.graph.neighbors(ctx.id).collect(),
            };
            st.records.insert(ctx.id, Arc::new(own));
        }
        st
    }

    fn step(
        &self,
        round: usize,
        ctx: &VertexContext,
        st: &mut DiscoveryState,
        inbox: &Inbox<'_, KeyBatch>,
    ) -> Step<KeyBatch> {
        let Some(label) = st.label else { return Step::halt() };
        if round == 0 {
            if self.span == 0 {
                self.summarize(ctx, st);
                return Step::halt();
            }
            return Step::broadcast(KeyBatch(st.records.values().cloned().collect()));
        }
        let mut fresh = Vec::new();
        for (_, KeyBatch(batch)) in inbox.iter() {
            for rec in batch {
                if rec.label == label && !st.records.contains_key(&rec.id) {
                    st.records.insert(rec.id, Arc::clone(rec));
                    fresh.push(Arc::clone(rec));
                }
            }
        }
        if round >= self.span {
            self.summarize(ctx, st);
            return Step::halt();
        }
        if fresh.is_empty() {
            Step::silent()
        } else {
            Step::broadcast(KeyBatch(fresh))
        }
    }
}

impl KeyDiscovery<'_> {
    fn summarize(&self, ctx: &VertexContext, st: &mut DiscoveryState) {
        let keys: BTreeSet<Key> = st.records.values().map(|r| r.key.clone()).collect();
        let mut local = Graph::new();
        for r in st.records.values() {
            local.add_vertex(r.id);
            for &u in &r.adjacency {
                local.add_edge(r.id, u).expect("no self-loops");
            }
        }
        let mine: BTreeSet<Key> = keys.iter().filter(|k| k.highest() == Some(ctx.id)).cloned().collect();
        let adj = super_adjacency(&local, &keys);
        st.represented = mine
            .into_iter()
            .map(|k| {
                let nb = adj[&k].clone();
                (k, nb)
            })
            .collect();
        st.records.clear();
    }
}

#[derive(Clone, Debug)]
pub struct PhiOutcome {
    pub phi: BTreeMap<VertexId, u64>,
    pub super_graphs: Vec<SuperGraph>,
    pub max_super_degree: usize,
    pub discovery_rounds: usize,
    pub super_rounds: usize,
    pub phase_two_rounds: usize,
    /// Largest base-graph distance between representatives of adjacent keys.
    pub dilation: usize,
    pub trace: RoundTrace,
}

/// Synchronization colors for every vertex of a completed partition.
pub fn assign_phi(g: &Graph, partition: &PartitionOutcome, preset: Preset) -> Result<PhiOutcome> {
    let labels = &partition.labels;
    let keys = &partition.keys;
    let span = preset.key_span();

    let discovery = KeyDiscovery {
        span,
        labels,
        keys,
        graph: g,
    };
    let disc = engine::run(g, &discovery, span)?;
    let mut by_level: BTreeMap<u32, BTreeMap<Key, BTreeSet<Key>>> = BTreeMap::new();
    for (&v, st) in &disc.states {
        for (k, nb) in &st.represented {
            let level = labels[&v].level;
            ensure!(
                by_level
                    .entry(level)
                    .or_default()
                    .insert(k.clone(), nb.clone())
                    .is_none(),
                "key {k} has two representatives"
            );
        }
    }
    let mut super_graphs = Vec::new();
    for level in 1..=partition.levels() {
        let offline = build_super_graph(g, level, labels, keys);
        let online = SuperGraph::from_adjacency(level, by_level.get(&level).unwrap_or(&BTreeMap::new()));
        ensure!(
            offline.nodes == online.nodes && offline.graph == online.graph,
            "distributed super-graph of level {level} differs from the offline construction"
        );
        if !offline.nodes.is_empty() {
            super_graphs.push(offline);
        }
    }

    let mut dilation = 0;
    for sg in &super_graphs {
        for (i, k) in sg.nodes.iter().enumerate() {
            let near = g.distances(k.highest().expect("non-empty key"), Some(span));
            for j in sg.graph.neighbors(i as VertexId + 1) {
                let other = &sg.nodes[j as usize - 1];
                let d = near.get(&other.highest().expect("non-empty key")).copied();
                ensure!(
                    d.is_some(),
                    "representatives of {k} and {other} are more than {span} apart"
                );
                dilation = dilation.max(d.unwrap_or(0));
            }
        }
    }

    // All levels run side by side as one disjoint union.
    let width = id_width(g);
    let mut union = Graph::new();
    let mut initial = BTreeMap::new();
    let mut node_of: BTreeMap<Key, VertexId> = BTreeMap::new();
    let mut next = 1;
    for sg in &super_graphs {
        let base = next - 1;
        for (i, k) in sg.nodes.iter().enumerate() {
            let id = base + i as VertexId + 1;
            union.add_vertex(id);
            initial.insert(id, encode_key(k, width));
            node_of.insert(k.clone(), id);
        }
        for (a, b) in sg.graph.edges() {
            union.add_edge(base + a, base + b)?;
        }
        next += sg.nodes.len() as VertexId;
    }
    let max_super_degree = union.max_degree();
    ensure!(
        (max_super_degree as u64) < preset.super_palette(),
        "super-graph degree {max_super_degree} reaches the bound {}",
        preset.super_palette()
    );
    let (super_colors, super_trace) = reduce_colors(&union, max_super_degree, &initial)?;

    let threshold = partition.params.deg_threshold;
    let phase_two: BTreeSet<VertexId> = labels.iter().filter(|(_, l)| l.phase == 2).map(|(&v, _)| v).collect();
    let mut low = g.induced(&phase_two)?;
    let cross: Vec<(VertexId, VertexId)> = low
        .edges()
        .filter(|&(u, v)| labels[&u].level != labels[&v].level)
        .collect();
    for (u, v) in cross {
        low.remove_edge(u, v);
    }
    let (low_colors, low_trace) = reduce_colors_by_id(&low, threshold)?;

    let mut phi = BTreeMap::new();
    for (&v, l) in labels {
        let c = if l.phase == 2 {
            low_colors.get(v)
        } else {
            super_colors.get(node_of[&keys[&v]])
        };
        phi.insert(v, c.expect("every node is colored") as u64);
    }

    let mut trace = disc.trace.clone();
    trace.then(&super_trace.dilated(span).alongside(&low_trace));
    Ok(PhiOutcome {
        phi,
        super_graphs,
        max_super_degree,
        discovery_rounds: disc.trace.rounds_used,
        super_rounds: super_trace.rounds_used,
        phase_two_rounds: low_trace.rounds_used,
        dilation,
        trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(n: u64) -> Graph {
        Graph::from_edges(n, &(1..=n).map(|i| (i, i % n + 1)).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn primes() {
        assert_eq!(next_prime(14), 17);
        assert_eq!(next_prime(2), 2);
        assert!(!is_prime(1));
    }

    #[test]
    fn polynomial_digits() {
        assert_eq!(digits(&BigUint::from(23u32), 5, 3), vec![3, 4, 0]);
        assert_eq!(eval(&[3, 4, 0], 2, 5), (3 + 8) % 5);
    }

    #[test]
    fn schedule_for_a_ring() {
        let s = ReductionSchedule::plan(&BigUint::from(65u32), 2).unwrap();
        assert_eq!(s.steps[0], ReductionStep::Polynomial { q: 5, degree: 2 });
        assert_eq!(s.rounds(), 11);
        for (m, d) in [(65u32, 2u64), (1 << 20, 4), (1000, 6), (7, 6), (1 << 30, 1023)] {
            let plan = ReductionSchedule::plan(&BigUint::from(m), d).unwrap();
            assert_eq!(
                ReductionSchedule::count_rounds(&BigUint::from(m), d).unwrap(),
                plan.rounds() as u128
            );
        }
    }

    #[test]
    fn single_vertex() {
        let g = Graph::with_vertices([1]);
        let (c, t) = reduce_colors_by_id(&g, 0).unwrap();
        assert_eq!(c.get(1), Some(1));
        assert_eq!(t.rounds_used, 0);
    }

    #[test]
    fn ring_and_path() {
        let (c, _) = reduce_colors_by_id(&ring(64), 2).unwrap();
        assert!(c.distinct_colors() <= 3);
        let path = Graph::from_edges(10, &(1..10).map(|i| (i, i + 1)).collect::<Vec<_>>()).unwrap();
        let (c, _) = reduce_colors_by_id(&path, 2).unwrap();
        assert!(check_proper(&path, &c, true).is_ok());
        assert!(reduce_colors_by_id(&ring(5), 1).is_err());
    }

    #[test]
    fn key_encoding() {
        assert_eq!(encode_key(&Key::new([3, 12, 7]), 3).to_string(), "3007012");
        assert_eq!(id_width(&ring(100)), 3);
    }

    #[test]
    fn two_squares_joined() {
        let mut g = Graph::from_edges(8, &[(1, 2), (2, 3), (3, 4), (4, 1), (5, 6), (6, 7), (7, 8), (8, 5)]).unwrap();
        g.add_edge(3, 5).unwrap();
        let labels = (1..=8).map(|v| (v, Label::new(1, 1))).collect();
        let keys = (1..=8)
            .map(|v| {
                (
                    v,
                    if v <= 4 {
                        Key::new([1, 2, 3, 4])
                    } else {
                        Key::new([5, 6, 7, 8])
                    },
                )
            })
            .collect();
        let sg = build_super_graph(&g, 1, &labels, &keys);
        assert_eq!((sg.nodes.len(), sg.graph.edge_count()), (2, 1));
    }
}
