//! Synchronous LOCAL-model simulator.
//!
//! Step 0 is local computation only. Round `r >= 1` first delivers every
//! outbox produced in step `r - 1`, then steps all running vertices.
//! A vertex starts knowing its own id, its degree and `n`; neighbor ids are
//! learned from the senders of incoming messages.

use std::collections::BTreeMap;
use std::io::Write;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexContext {
    pub id: VertexId,
    pub degree: usize,
    pub n: usize,
    pub seed: u64,
}

/// Approximate encoded size of a message, used only for reporting.
pub trait WireSize {
    fn wire_bits(&self) -> u64;
}

impl WireSize for () {
    fn wire_bits(&self) -> u64 {
        0
    }
}

impl WireSize for u64 {
    fn wire_bits(&self) -> u64 {
        64
    }
}

impl WireSize for u32 {
    fn wire_bits(&self) -> u64 {
        32
    }
}

impl<T: WireSize> WireSize for Vec<T> {
    fn wire_bits(&self) -> u64 {
        self.iter().map(WireSize::wire_bits).sum()
    }
}

impl<T: WireSize> WireSize for Arc<T> {
    fn wire_bits(&self) -> u64 {
        (**self).wire_bits()
    }
}

impl<T: WireSize> WireSize for Option<T> {
    fn wire_bits(&self) -> u64 {
        1 + self.as_ref().map_or(0, WireSize::wire_bits)
    }
}

impl<A: WireSize, B: WireSize> WireSize for (A, B) {
    fn wire_bits(&self) -> u64 {
        self.0.wire_bits() + self.1.wire_bits()
    }
}

pub enum Outbox<M> {
    Silent,
    Broadcast(M),
    /// Per-neighbor messages; every target must be a neighbor.
    Direct(Vec<(VertexId, M)>),
}

pub struct Step<M> {
    pub outbox: Outbox<M>,
    pub halt: bool,
}

impl<M> Step<M> {
    pub fn silent() -> Self {
        Step {
            outbox: Outbox::Silent,
            halt: false,
        }
    }

    pub fn broadcast(m: M) -> Self {
        Step {
            outbox: Outbox::Broadcast(m),
            halt: false,
        }
    }

    pub fn halt() -> Self {
        Step {
            outbox: Outbox::Silent,
            halt: true,
        }
    }

    pub fn and_halt(mut self) -> Self {
        self.halt = true;
        self
    }
}

/// Messages received this round, sorted by sender id.
pub struct Inbox<'a, M> {
    entries: &'a [(VertexId, Arc<M>)],
}

impl<'a, M> Inbox<'a, M> {
    pub fn empty() -> Self {
        Inbox { entries: &[] }
    }

    pub fn iter(&self) -> impl Iterator<Item = (VertexId, &'a M)> + 'a {
        self.entries.iter().map(|(s, m)| (*s, &**m))
    }

    pub fn senders(&self) -> impl Iterator<Item = VertexId> + 'a {
        self.entries.iter().map(|(s, _)| *s)
    }

    pub fn get(&self, sender: VertexId) -> Option<&'a M> {
        self.entries
            .binary_search_by_key(&sender, |(s, _)| *s)
            .ok()
            .map(|i| &*self.entries[i].1)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// A deterministic per-vertex algorithm.
pub trait VertexProgram: Sync {
    type State: Send;
    type Msg: Send + Sync + WireSize;

    fn init(&self, ctx: &VertexContext) -> Self::State;

    fn step(
        &self,
        round: usize,
        ctx: &VertexContext,
        state: &mut Self::State,
        inbox: &Inbox<'_, Self::Msg>,
    ) -> Step<Self::Msg>;
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct RoundTrace {
    pub rounds_used: usize,
    pub messages_per_round: Vec<u64>,
    pub max_bits_per_round: Vec<u64>,
    pub max_message_bits: u64,
}

impl RoundTrace {
    fn push(&mut self, messages: u64, max_bits: u64) {
        self.rounds_used += 1;
        self.messages_per_round.push(messages);
        self.max_bits_per_round.push(max_bits);
        self.max_message_bits = self.max_message_bits.max(max_bits);
    }

    /// Appends `other` as if it ran after `self`.
    pub fn then(&mut self, other: &RoundTrace) {
        for i in 0..other.rounds_used {
            self.push(other.messages_per_round[i], other.max_bits_per_round[i]);
        }
    }

    /// Combines two executions running side by side in the same rounds.
    pub fn alongside(&self, other: &RoundTrace) -> RoundTrace {
        let mut out = RoundTrace::default();
        for i in 0..self.rounds_used.max(other.rounds_used) {
            let m = self.messages_per_round.get(i).unwrap_or(&0) + other.messages_per_round.get(i).unwrap_or(&0);
            let b = (*self.max_bits_per_round.get(i).unwrap_or(&0)).max(*other.max_bits_per_round.get(i).unwrap_or(&0));
            out.push(m, b);
        }
        out
    }

    /// Stretches every round into `factor` rounds, as when each message is
    /// relayed over a path of `factor` hops.
    pub fn dilated(&self, factor: usize) -> RoundTrace {
        let mut out = RoundTrace::default();
        for i in 0..self.rounds_used {
            for _ in 0..factor {
                out.push(self.messages_per_round[i], self.max_bits_per_round[i]);
            }
        }
        out
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        wr.write_record(["round", "messages", "max_bits"])?;
        for i in 0..self.rounds_used {
            wr.write_record([
                (i + 1).to_string(),
                self.messages_per_round[i].to_string(),
                self.max_bits_per_round[i].to_string(),
            ])?;
        }
        wr.flush()?;
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory cannot fail");
        String::from_utf8(buf).expect("csv output is utf-8")
    }
}

#[derive(Debug)]
pub struct RunOutcome<S> {
    pub states: BTreeMap<VertexId, S>,
    pub trace: RoundTrace,
    pub all_halted: bool,
    pub unhalted: usize,
}

enum Sent<M> {
    Silent,
    Broadcast(Arc<M>),
    Direct(Vec<(VertexId, Arc<M>)>),
}

fn vertex_seed(seed: u64, id: VertexId) -> u64 {
    let mut z = seed ^ id.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Runs until every vertex halts; more than `round_limit` rounds is a timeout.
pub fn run<P: VertexProgram>(g: &Graph, program: &P, round_limit: usize) -> Result<RunOutcome<P::State>> {
    run_seeded(g, program, round_limit, 0)
}

pub fn run_seeded<P: VertexProgram>(
    g: &Graph,
    program: &P,
    round_limit: usize,
    seed: u64,
) -> Result<RunOutcome<P::State>> {
    let out = execute(g, program, round_limit, seed);
    if out.all_halted {
        Ok(out)
    } else {
        Err(Error::Timeout {
            limit: round_limit,
            unhalted: out.unhalted,
            trace: out.trace,
        })
    }
}

/// Runs for at most `rounds` rounds and returns whatever state was reached.
pub fn run_rounds<P: VertexProgram>(g: &Graph, program: &P, rounds: usize) -> RunOutcome<P::State> {
    execute(g, program, rounds, 0)
}

fn execute<P: VertexProgram>(g: &Graph, program: &P, limit: usize, seed: u64) -> RunOutcome<P::State> {
    let ids: Vec<VertexId> = g.vertices().collect();
    let index: BTreeMap<VertexId, usize> = ids.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let nbrs: Vec<Vec<usize>> = ids
        .iter()
        .map(|&v| g.neighbors(v).map(|u| index[&u]).collect())
        .collect();
    let ctxs: Vec<VertexContext> = ids
        .iter()
        .map(|&id| VertexContext {
            id,
            degree: g.degree(id),
            n: ids.len(),
            seed: vertex_seed(seed, id),
        })
        .collect();
    let mut states: Vec<P::State> = ctxs.par_iter().map(|c| program.init(c)).collect();
    let mut halted = vec![false; ids.len()];
    let mut inboxes: Vec<Vec<(VertexId, Arc<P::Msg>)>> = (0..ids.len()).map(|_| Vec::new()).collect();
    let mut trace = RoundTrace::default();

    let mut sent = step_all(program, 0, &ctxs, &mut states, &mut halted, &inboxes);
    let mut round = 0;
    while halted.iter().any(|h| !h) && round < limit {
        round += 1;
        inboxes = (0..ids.len())
            .into_par_iter()
            .map(|v| {
                if halted[v] {
                    return Vec::new();
                }
                let me = ids[v];
                let mut inbox = Vec::new();
                for &u in &nbrs[v] {
                    match &sent[u] {
                        Sent::Silent => {}
                        Sent::Broadcast(m) => inbox.push((ids[u], Arc::clone(m))),
                        Sent::Direct(list) => {
                            if let Some((_, m)) = list.iter().find(|(t, _)| *t == me) {
                                inbox.push((ids[u], Arc::clone(m)));
                            }
                        }
                    }
                }
                inbox
            })
            .collect();
        let messages = inboxes.iter().map(|b| b.len() as u64).sum();
        let max_bits = inboxes
            .par_iter()
            .flat_map_iter(|b| b.iter().map(|(_, m)| m.wire_bits()))
            .max()
            .unwrap_or(0);
        trace.push(messages, max_bits);
        sent = step_all(program, round, &ctxs, &mut states, &mut halted, &inboxes);
    }
    let unhalted = halted.iter().filter(|&&h| !h).count();
    RunOutcome {
        states: ids.into_iter().zip(states).collect(),
        trace,
        all_halted: unhalted == 0,
        unhalted,
    }
}

fn step_all<P: VertexProgram>(
    program: &P,
    round: usize,
    ctxs: &[VertexContext],
    states: &mut [P::State],
    halted: &mut [bool],
    inboxes: &[Vec<(VertexId, Arc<P::Msg>)>],
) -> Vec<Sent<P::Msg>> {
    states
        .par_iter_mut()
        .zip(halted.par_iter_mut())
        .enumerate()
        .map(|(i, (state, halted))| {
            if *halted {
                return Sent::Silent;
            }
            let step = program.step(round, &ctxs[i], state, &Inbox { entries: &inboxes[i] });
            *halted = step.halt;
            match step.outbox {
                Outbox::Silent => Sent::Silent,
                Outbox::Broadcast(m) => Sent::Broadcast(Arc::new(m)),
                Outbox::Direct(list) => Sent::Direct(list.into_iter().map(|(t, m)| (t, Arc::new(m))).collect()),
            }
        })
        .collect()
}

/// One vertex as seen by a [`CollectBall`] run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BallRecord<L> {
    pub id: VertexId,
    pub degree: usize,
    pub label: L,
    /// Known once the vertex has heard from all of its neighbors.
    pub adjacency: Option<Arc<Vec<VertexId>>>,
}

impl<L: WireSize> WireSize for BallRecord<L> {
    fn wire_bits(&self) -> u64 {
        128 + self.label.wire_bits() + self.adjacency.as_ref().map_or(1, |a| 1 + 64 * a.len() as u64)
    }
}

/// Knowledge a vertex holds after a ball collection.
#[derive(Clone, Debug)]
pub struct LocalView<L> {
    pub center: VertexId,
    pub records: BTreeMap<VertexId, BallRecord<L>>,
    fresh: Vec<VertexId>,
}

impl<L: Clone> LocalView<L> {
    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.records.keys().copied()
    }

    pub fn label(&self, v: VertexId) -> Option<&L> {
        self.records.get(&v).map(|r| &r.label)
    }

    /// Known vertices and every edge reported by a known adjacency list.
    pub fn graph(&self) -> Graph {
        let mut g = Graph::with_vertices(self.records.keys().copied());
        for r in self.records.values() {
            if let Some(adj) = &r.adjacency {
                for &u in adj.iter() {
                    if g.contains(u) {
                        g.add_edge(r.id, u).expect("ids differ");
                    }
                }
            }
        }
        g
    }
}

/// Floods vertex records for `r` rounds.
///
/// Afterwards every vertex knows the id, degree and label of each vertex
/// within distance `r`, and the adjacency list of each vertex within distance
/// `r - 1`. That is the radius-`r` ball with every edge except those joining
/// two vertices at distance exactly `r`, which no `r`-round algorithm can see.
pub struct CollectBall<L> {
    radius: usize,
    labels: BTreeMap<VertexId, L>,
    default_label: L,
}

impl CollectBall<()> {
    pub fn unlabeled(radius: usize) -> Self {
        CollectBall {
            radius,
            labels: BTreeMap::new(),
            default_label: (),
        }
    }
}

impl<L: Clone> CollectBall<L> {
    pub fn new(radius: usize, labels: BTreeMap<VertexId, L>, default_label: L) -> Self {
        CollectBall {
            radius,
            labels,
            default_label,
        }
    }
}

pub fn collect_ball(r: usize) -> CollectBall<()> {
    CollectBall::unlabeled(r)
}

impl<L> VertexProgram for CollectBall<L>
where
    L: Clone + Send + Sync + WireSize,
{
    type State = LocalView<L>;
    type Msg = Vec<BallRecord<L>>;

    fn init(&self, ctx: &VertexContext) -> LocalView<L> {
        let label = self
            .labels
            .get(&ctx.id)
            .cloned()
            .unwrap_or_else(|| self.default_label.clone());
        let own = BallRecord {
            id: ctx.id,
            degree: ctx.degree,
            label,
            adjacency: (ctx.degree == 0).then(|| Arc::new(Vec::new())),
        };
        LocalView {
            center: ctx.id,
            records: BTreeMap::from([(ctx.id, own)]),
            fresh: vec![ctx.id],
        }
    }

    fn step(
        &self,
        round: usize,
        ctx: &VertexContext,
        view: &mut LocalView<L>,
        inbox: &Inbox<'_, Self::Msg>,
    ) -> Step<Self::Msg> {
        if round == 1 {
            let adj: Vec<VertexId> = inbox.senders().collect();
            if let Some(own) = view.records.get_mut(&ctx.id) {
                own.adjacency = Some(Arc::new(adj));
            }
            view.fresh.push(ctx.id);
        }
        for (_, batch) in inbox.iter() {
            for rec in batch {
                match view.records.get_mut(&rec.id) {
                    None => {
                        view.records.insert(rec.id, rec.clone());
                        view.fresh.push(rec.id);
                    }
                    Some(known) if known.adjacency.is_none() && rec.adjacency.is_some() => {
                        known.adjacency = rec.adjacency.clone();
                        view.fresh.push(rec.id);
                    }
                    Some(_) => {}
                }
            }
        }
        if round >= self.radius {
            view.fresh.clear();
            return Step::halt();
        }
        view.fresh.sort_unstable();
        view.fresh.dedup();
        let batch = view.fresh.drain(..).map(|v| view.records[&v].clone()).collect();
        Step::broadcast(batch)
    }
}
