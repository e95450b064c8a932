//! Level/phase partition of the vertex set.
//!
//! In iteration `i` every active vertex that lies on a short removable cycle
//! of low degree in the active subgraph takes label `(i, 1)` and remembers
//! the cycle's vertex set as its key. Afterwards every still active vertex
//! whose active degree is below the threshold takes label `(i, 2)`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::engine::{self, Inbox, RoundTrace, Step, VertexContext, VertexProgram, WireSize};
use crate::error::{Error, Result};
use crate::graph::{Graph, Key, VertexId};
use crate::preset::PartitionParams;
use crate::removable::{classify_vertex_set, removable_cycles_through, Reason};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Label {
    pub level: u32,
    /// 1 for cycle vertices, 2 for low-degree vertices.
    pub phase: u8,
}

impl Label {
    pub fn new(level: u32, phase: u8) -> Self {
        Label { level, phase }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.level, self.phase)
    }
}

impl WireSize for Label {
    fn wire_bits(&self) -> u64 {
        40
    }
}

impl WireSize for Key {
    fn wire_bits(&self) -> u64 {
        64 * self.len() as u64
    }
}

/// Active vertex announcing its active neighbors.
#[derive(Debug)]
pub struct AdjRecord {
    pub id: VertexId,
    pub adjacency: Vec<VertexId>,
}

#[derive(Debug)]
pub enum PartitionMsg {
    Hello,
    Records(Vec<Arc<AdjRecord>>),
    Inactive,
}

impl WireSize for PartitionMsg {
    fn wire_bits(&self) -> u64 {
        match self {
            PartitionMsg::Hello | PartitionMsg::Inactive => 2,
            PartitionMsg::Records(rs) => 2 + rs.iter().map(|r| 64 * (1 + r.adjacency.len() as u64)).sum::<u64>(),
        }
    }
}

#[derive(Debug, Default)]
pub struct PartitionState {
    pub label: Option<Label>,
    pub key: Option<Key>,
    /// Still active after the last iteration.
    pub exhausted: bool,
    active: BTreeSet<VertexId>,
    records: HashMap<VertexId, Arc<AdjRecord>>,
    low: bool,
}

/// The partition as a vertex program.
///
/// Timeline: step 0 says hello. Iteration `i` starts at round
/// `s = 1 + (i - 1)(R + 2)` where `R` is the collect radius. Low-degree active
/// vertices flood their active adjacency during rounds `s+1 ..= s+R`; step-1
/// labels are decided at `s+R` and announced, step-2 labels are decided at
/// `s+R+1` and announced, and the announcements are absorbed at `s+R+2`.
///
/// Only active vertices of degree at most the threshold originate or relay
/// records. Every qualifying cycle lies in that subgraph within
/// `cycle_len_max / 2` hops, so the search sees the same cycles as a search
/// over the whole active ball.
pub struct PartitionProgram {
    params: PartitionParams,
}

impl PartitionProgram {
    pub fn new(params: PartitionParams) -> Result<Self> {
        params.validate()?;
        Ok(PartitionProgram { params })
    }

    pub fn round_limit(&self) -> usize {
        1 + self.params.iterations * self.params.rounds_per_iteration()
    }

    fn start_iteration(&self, ctx: &VertexContext, st: &mut PartitionState) -> Step<PartitionMsg> {
        st.records.clear();
        st.low = st.active.len() <= self.params.deg_threshold;
        if !st.low {
            return Step::silent();
        }
        let own = Arc::new(AdjRecord {
            id: ctx.id,
            adjacency: st.active.iter().copied().collect(),
        });
        st.records.insert(ctx.id, Arc::clone(&own));
        Step::broadcast(PartitionMsg::Records(vec![own]))
    }

    fn choose_cycle(&self, ctx: &VertexContext, st: &PartitionState) -> Option<Key> {
        let mut g = Graph::new();
        for r in st.records.values() {
            g.add_vertex(r.id);
            for &u in &r.adjacency {
                g.add_edge(r.id, u).expect("adjacency excludes self");
            }
        }
        let eligible = |v: VertexId| st.records.contains_key(&v);
        removable_cycles_through(&g, ctx.id, self.params.cycle_len_max, &eligible)
            .first()
            .map(|c| c.key())
    }
}

impl VertexProgram for PartitionProgram {
    type State = PartitionState;
    type Msg = PartitionMsg;

    fn init(&self, _ctx: &VertexContext) -> PartitionState {
        PartitionState::default()
    }

    fn step(
        &self,
        round: usize,
        ctx: &VertexContext,
        st: &mut PartitionState,
        inbox: &Inbox<'_, PartitionMsg>,
    ) -> Step<PartitionMsg> {
        if round == 0 {
            return Step::broadcast(PartitionMsg::Hello);
        }
        let r = self.params.collect_radius;
        let t = round - 1;
        let iteration = (t / (r + 2) + 1) as u32;
        let offset = t % (r + 2);
        match offset {
            0 => {
                if round == 1 {
                    st.active = inbox.senders().collect();
                } else {
                    for s in inbox.senders() {
                        st.active.remove(&s);
                    }
                    if iteration as usize > self.params.iterations {
                        st.exhausted = true;
                        return Step::halt();
                    }
                }
                self.start_iteration(ctx, st)
            }
            d if d <= r => {
                if !st.low {
                    return Step::silent();
                }
                let mut fresh = Vec::new();
                for (_, msg) in inbox.iter() {
                    if let PartitionMsg::Records(batch) = msg {
                        for rec in batch {
                            if let std::collections::hash_map::Entry::Vacant(e) = st.records.entry(rec.id) {
                                e.insert(Arc::clone(rec));
                                fresh.push(Arc::clone(rec));
                            }
                        }
                    }
                }
                if d < r {
                    return if fresh.is_empty() {
                        Step::silent()
                    } else {
                        Step::broadcast(PartitionMsg::Records(fresh))
                    };
                }
                match self.choose_cycle(ctx, st) {
                    Some(key) => {
                        st.label = Some(Label::new(iteration, 1));
                        st.key = Some(key);
                        st.records.clear();
                        Step::broadcast(PartitionMsg::Inactive).and_halt()
                    }
                    None => Step::silent(),
                }
            }
            _ => {
                st.records.clear();
                for s in inbox.senders() {
                    st.active.remove(&s);
                }
                if st.active.len() < self.params.deg_threshold {
                    st.label = Some(Label::new(iteration, 2));
                    st.key = Some(Key::singleton(ctx.id));
                    Step::broadcast(PartitionMsg::Inactive).and_halt()
                } else {
                    Step::silent()
                }
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct PartitionOutcome {
    pub labels: BTreeMap<VertexId, Label>,
    pub keys: BTreeMap<VertexId, Key>,
    pub trace: RoundTrace,
    pub params: PartitionParams,
}

impl PartitionOutcome {
    pub fn levels(&self) -> u32 {
        self.labels.values().map(|l| l.level).max().unwrap_or(0)
    }

    /// `(|A_i|, |B_i|)` for every level `i`, where `A_i` holds the vertices
    /// active when iteration `i` starts and `B_i` those still active after it.
    pub fn shrinkage(&self) -> Vec<(usize, usize)> {
        let mut at_level = vec![0usize; self.levels() as usize + 1];
        for l in self.labels.values() {
            at_level[l.level as usize] += 1;
        }
        let mut remaining = self.labels.len();
        let mut out = Vec::new();
        for &count in at_level.iter().skip(1) {
            out.push((remaining, remaining - count));
            remaining -= count;
        }
        out
    }
}

pub fn run_partition(g: &Graph, params: &PartitionParams) -> Result<PartitionOutcome> {
    let program = PartitionProgram::new(*params)?;
    let out = engine::run(g, &program, program.round_limit() + 1)?;
    let stuck: Vec<VertexId> = out
        .states
        .iter()
        .filter(|(_, s)| s.exhausted || s.label.is_none())
        .map(|(&v, _)| v)
        .collect();
    if !stuck.is_empty() {
        return Err(Error::Assertion(format!(
            "{} vertices still active after {} iterations, first {}",
            stuck.len(),
            params.iterations,
            stuck[0]
        )));
    }
    let mut labels = BTreeMap::new();
    let mut keys = BTreeMap::new();
    for (v, s) in out.states {
        labels.insert(v, s.label.expect("checked above"));
        keys.insert(v, s.key.expect("labeled vertices carry a key"));
    }
    Ok(PartitionOutcome {
        labels,
        keys,
        trace: out.trace,
        params: *params,
    })
}

pub fn shrinkage_audit(g: &Graph, params: &PartitionParams) -> Result<Vec<(usize, usize)>> {
    Ok(run_partition(g, params)?.shrinkage())
}

/// Re-checks the partition offline: every key is valid for its level and
/// every vertex was labeled exactly when the rules say so.
pub fn verify_partition(g: &Graph, p: &PartitionOutcome) -> Result<()> {
    let prm = &p.params;
    for level in 1..=p.levels() {
        let active: BTreeSet<VertexId> = p
            .labels
            .iter()
            .filter(|(_, l)| l.level >= level)
            .map(|(&v, _)| v)
            .collect();
        let h = g.induced(&active)?;
        let low = |v: VertexId| h.degree(v) <= prm.deg_threshold;
        for &v in &active {
            let label = p.labels[&v];
            let cycles = removable_cycles_through(&h, v, prm.cycle_len_max, &low);
            let expect_one = !cycles.is_empty();
            if expect_one != (label == Label::new(level, 1)) {
                return Err(Error::Verification(format!(
                    "vertex {v} has label {label} but qualifying cycles at level {level}: {}",
                    cycles.len()
                )));
            }
            if expect_one {
                let key = &p.keys[&v];
                if *key != cycles[0].key() {
                    return Err(Error::Verification(format!(
                        "vertex {v} chose key {key}, smallest is {}",
                        cycles[0].key()
                    )));
                }
                if classify_vertex_set(&h, key.ids()) != Reason::EvenOrChordedOk
                    || key.iter().any(|&u| p.labels[&u] != label)
                {
                    return Err(Error::Verification(format!("key {key} of vertex {v} is invalid")));
                }
            }
        }
        let after_one: BTreeSet<VertexId> = active
            .iter()
            .copied()
            .filter(|v| p.labels[v] != Label::new(level, 1))
            .collect();
        let h2 = g.induced(&after_one)?;
        for &v in &after_one {
            let low_now = h2.degree(v) < prm.deg_threshold;
            if low_now != (p.labels[&v] == Label::new(level, 2)) {
                return Err(Error::Verification(format!(
                    "vertex {v} has degree {} after step 1 of level {level} but label {}",
                    h2.degree(v),
                    p.labels[&v]
                )));
            }
            if low_now && p.keys[&v] != Key::singleton(v) {
                return Err(Error::Verification(format!(
                    "phase-2 vertex {v} has a non-singleton key"
                )));
            }
        }
    }
    Ok(())
}
