//! Final coloring, level by level from the top.
//!
//! A startup flood spreads `(label, key, φ, adjacency)` records over the view
//! radius. Each vertex then adopts the maximum-φ key among same-label records
//! within the pair radius whose key contains it. Levels are processed in
//! decreasing order: low-degree vertices pick the smallest free color in
//! φ-class order, then cycle vertices of each φ-class color their key by
//! [`consistent_cycle_color`] on the locally known colors. Fresh colors are
//! flooded with a hop budget equal to the view radius.
//!
//! Only occupied `(level, phase, φ)` slots are scheduled. Empty slots change
//! no state, so skipping them leaves every decision unchanged.
//! [`FinalOutcome::literal_rounds`] reports the length of the full schedule.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use serde::Serialize;

use crate::engine::{self, Inbox, RoundTrace, Step, VertexContext, VertexProgram, WireSize};
use crate::error::{ensure, Error, Result};
use crate::graph::{check_proper, Color, ColorAssignment, Graph, Key, VertexId};
use crate::partition::{Label, PartitionOutcome};
use crate::preset::Preset;
use crate::removable::{canonical_cycle_on, extend_on_cycle};

/// Colors the members of `key` consistently with the colored vertices of
/// `local`. Every caller passing the same view and key gets the same result.
pub fn consistent_cycle_color(
    local: &Graph,
    colors: &ColorAssignment,
    key: &Key,
    palette: Color,
) -> Result<BTreeMap<VertexId, Color>> {
    let cycle = canonical_cycle_on(local, key)
        .ok_or_else(|| Error::Input(format!("{key} does not span a cycle of the view")))?;
    let mut partial = ColorAssignment::new(palette);
    for (v, c) in colors.iter() {
        if local.contains(v) && !key.contains(v) {
            partial.set(v, c);
        }
    }
    let out = extend_on_cycle(local, &cycle, &partial, palette as usize)?;
    Ok(key
        .iter()
        .map(|&v| (v, out.get(v).expect("extension colors the whole cycle")))
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Slot {
    pub level: u32,
    pub phase: u8,
    pub class: u64,
}

/// Decision rounds of all occupied slots.
#[derive(Clone, Debug, Serialize)]
pub struct FinalSchedule {
    pub startup: usize,
    pub view_radius: usize,
    pub slots: Vec<(Slot, usize)>,
}

impl FinalSchedule {
    pub fn build(labels: &BTreeMap<VertexId, Label>, phi: &BTreeMap<VertexId, u64>, preset: Preset) -> Self {
        let r = preset.view_radius();
        let occupied: BTreeSet<Slot> = labels
            .iter()
            .map(|(v, l)| Slot {
                level: l.level,
                phase: l.phase,
                class: phi[v],
            })
            .collect();
        let mut order: Vec<Slot> = occupied.into_iter().collect();
        order.sort_by(|a, b| {
            b.level
                .cmp(&a.level)
                .then(b.phase.cmp(&a.phase))
                .then(a.class.cmp(&b.class))
        });
        let mut cursor = r;
        let slots = order
            .into_iter()
            .map(|s| {
                cursor += if s.phase == 2 { 1 } else { r };
                (s, cursor)
            })
            .collect();
        FinalSchedule {
            startup: r,
            view_radius: r,
            slots,
        }
    }

    pub fn round_of(&self, slot: Slot) -> Option<usize> {
        self.slots.iter().find(|(s, _)| *s == slot).map(|&(_, t)| t)
    }

    pub fn last_round(&self) -> usize {
        self.slots.last().map_or(self.startup, |&(_, t)| t)
    }
}

/// Length of the uncompressed schedule over `levels` levels: every level
/// runs all phase-2 classes in one round each and all super-graph classes
/// in one view radius each.
pub fn literal_rounds(preset: Preset, levels: u64) -> u128 {
    let r = preset.view_radius() as u128;
    let per_level = preset.phase_two_palette() as u128 + preset.super_palette() as u128 * r;
    r + levels as u128 * per_level
}

#[derive(Debug)]
pub struct FinalRecord {
    pub id: VertexId,
    pub label: Label,
    pub key: Key,
    pub phi: u64,
    pub adjacency: Vec<VertexId>,
}

#[derive(Clone, Copy, Debug)]
pub struct ColorEvent {
    pub id: VertexId,
    pub color: Color,
    pub hops: usize,
}

#[derive(Debug, Default)]
pub struct FinalMsg {
    records: Vec<Arc<FinalRecord>>,
    colors: Vec<ColorEvent>,
}

impl WireSize for FinalMsg {
    fn wire_bits(&self) -> u64 {
        let r: u64 = self
            .records
            .iter()
            .map(|r| 40 + 64 * (2 + r.key.len() + r.adjacency.len()) as u64)
            .sum();
        r + 104 * self.colors.len() as u64
    }
}

#[derive(Debug, Default)]
pub struct FinalState {
    pub color: Option<Color>,
    pub key_new: Option<Key>,
    pub phi_new: u64,
    pub decided_at: Option<usize>,
    pub failure: Option<String>,
    label: Option<Label>,
    known: BTreeMap<VertexId, (usize, Arc<FinalRecord>)>,
    fresh: Vec<Arc<FinalRecord>>,
    colors: BTreeMap<VertexId, Color>,
    decide_at: usize,
}

pub struct FinalColorProgram<'a> {
    preset: Preset,
    graph: &'a Graph,
    partition: &'a PartitionOutcome,
    phi: &'a BTreeMap<VertexId, u64>,
    schedule: &'a FinalSchedule,
    slot_round: BTreeMap<Slot, usize>,
}

impl<'a> FinalColorProgram<'a> {
    pub fn new(
        preset: Preset,
        graph: &'a Graph,
        partition: &'a PartitionOutcome,
        phi: &'a BTreeMap<VertexId, u64>,
        schedule: &'a FinalSchedule,
    ) -> Self {
        FinalColorProgram {
            preset,
            graph,
            partition,
            phi,
            schedule,
            slot_round: schedule.slots.iter().copied().collect(),
        }
    }

    fn choose_pair(&self, ctx: &VertexContext, st: &mut FinalState) {
        let label = st.label.expect("labeled");
        let best = st
            .known
            .values()
            .filter(|(d, r)| *d <= self.preset.pair_radius() && r.label == label && r.key.contains(ctx.id))
            .map(|(_, r)| r)
            .max_by(|a, b| a.phi.cmp(&b.phi).then(b.key.cmp(&a.key)))
            .expect("a vertex always holds its own pair");
        st.key_new = Some(best.key.clone());
        st.phi_new = best.phi;
        let slot = Slot {
            level: label.level,
            phase: label.phase,
            class: best.phi,
        };
        st.decide_at = self.slot_round[&slot];
    }

    fn decide(&self, ctx: &VertexContext, st: &FinalState) -> std::result::Result<Color, String> {
        let palette = self.preset.palette();
        let label = st.label.expect("labeled");
        if label.phase == 2 {
            let used: BTreeSet<Color> = self
                .graph
                .neighbors(ctx.id)
                .filter_map(|u| st.colors.get(&u).copied())
                .collect();
            return (1..=palette)
                .find(|c| !used.contains(c))
                .ok_or_else(|| format!("no free color at {} (neighbors use {used:?})", ctx.id));
        }
        let key = st.key_new.as_ref().expect("pair chosen");
        let mut view = Graph::new();
        let mut partial = ColorAssignment::new(palette);
        for &u in key.iter() {
            if st.colors.contains_key(&u) {
                return Err(format!("member {u} of {key} is colored before its turn"));
            }
            let (_, rec) = st
                .known
                .get(&u)
                .ok_or_else(|| format!("member {u} of {key} is outside the view of {}", ctx.id))?;
            view.add_vertex(u);
            for &w in &rec.adjacency {
                if let Some(&c) = st.colors.get(&w) {
                    view.add_edge(u, w).expect("no self-loops");
                    partial.set(w, c);
                } else if key.contains(w) {
                    view.add_edge(u, w).expect("no self-loops");
                }
            }
        }
        let out = consistent_cycle_color(&view, &partial, key, palette).map_err(|e| e.to_string())?;
        Ok(out[&ctx.id])
    }
}

impl VertexProgram for FinalColorProgram<'_> {
    type State = FinalState;
    type Msg = FinalMsg;

    fn init(&self, ctx: &VertexContext) -> FinalState {
        let label = self.partition.labels[&ctx.id];
        let own = Arc::new(FinalRecord {
            id: ctx.id,
            label,
            key: self.partition.keys[&ctx.id].clone(),
            phi: self.phi[&ctx.id],
            adjacency: self.graph.neighbors(ctx.id).collect(),
        });
        let mut st = FinalState {
            label: Some(label),
            ..Default::default()
        };
        st.known.insert(ctx.id, (0, Arc::clone(&own)));
        st.fresh.push(own);
        st
    }

    fn step(
        &self,
        round: usize,
        ctx: &VertexContext,
        st: &mut FinalState,
        inbox: &Inbox<'_, FinalMsg>,
    ) -> Step<FinalMsg> {
        let r = self.schedule.view_radius;
        let mut out = FinalMsg::default();
        for (_, msg) in inbox.iter() {
            for rec in &msg.records {
                if let std::collections::btree_map::Entry::Vacant(e) = st.known.entry(rec.id) {
                    e.insert((round, Arc::clone(rec)));
                    st.fresh.push(Arc::clone(rec));
                }
            }
            for ev in &msg.colors {
                if let std::collections::btree_map::Entry::Vacant(e) = st.colors.entry(ev.id) {
                    e.insert(ev.color);
                    if ev.hops + 1 < r {
                        out.colors.push(ColorEvent {
                            hops: ev.hops + 1,
                            ..*ev
                        });
                    }
                }
            }
        }
        if round < self.schedule.startup {
            out.records = std::mem::take(&mut st.fresh);
        } else {
            st.fresh.clear();
        }
        if round == self.schedule.startup {
            self.choose_pair(ctx, st);
        }
        if round > self.schedule.startup && round == st.decide_at && st.failure.is_none() {
            match self.decide(ctx, st) {
                Ok(c) => {
                    st.color = Some(c);
                    st.decided_at = Some(round);
                    st.colors.insert(ctx.id, c);
                    if r > 0 {
                        out.colors.push(ColorEvent {
                            id: ctx.id,
                            color: c,
                            hops: 0,
                        });
                    }
                }
                Err(e) => st.failure = Some(e),
            }
        }
        let step = if out.records.is_empty() && out.colors.is_empty() {
            Step::silent()
        } else {
            Step::broadcast(out)
        };
        if round >= self.schedule.last_round() || st.failure.is_some() {
            step.and_halt()
        } else {
            step
        }
    }
}

#[derive(Clone, Debug)]
pub struct FinalOutcome {
    pub coloring: ColorAssignment,
    pub key_new: BTreeMap<VertexId, Key>,
    pub phi_new: BTreeMap<VertexId, u64>,
    pub schedule: FinalSchedule,
    pub literal_rounds: u128,
    pub trace: RoundTrace,
}

/// Expected `(key_new, φ_new)` when every same-label holder of a key
/// containing `v` is visible, regardless of distance.
fn unrestricted_pairs(partition: &PartitionOutcome, phi: &BTreeMap<VertexId, u64>) -> BTreeMap<VertexId, (Key, u64)> {
    let mut best: BTreeMap<VertexId, (Key, u64)> = BTreeMap::new();
    for (&x, key) in &partition.keys {
        let lx = partition.labels[&x];
        for &v in key.iter() {
            if partition.labels.get(&v) != Some(&lx) {
                continue;
            }
            let cand = (key.clone(), phi[&x]);
            let e = best.entry(v).or_insert_with(|| cand.clone());
            if cand.1 > e.1 || (cand.1 == e.1 && cand.0 < e.0) {
                *e = cand;
            }
        }
    }
    best
}

pub fn final_color(
    g: &Graph,
    partition: &PartitionOutcome,
    phi: &BTreeMap<VertexId, u64>,
    preset: Preset,
) -> Result<FinalOutcome> {
    let schedule = FinalSchedule::build(&partition.labels, phi, preset);
    let program = FinalColorProgram::new(preset, g, partition, phi, &schedule);
    let run = engine::run(g, &program, schedule.last_round() + 1)?;

    if let Some((v, st)) = run.states.iter().find(|(_, s)| s.failure.is_some()) {
        return Err(Error::Assertion(format!(
            "final coloring failed at vertex {v}: {}",
            st.failure.as_deref().unwrap_or_default()
        )));
    }
    let expected = unrestricted_pairs(partition, phi);
    let mut coloring = ColorAssignment::new(preset.palette());
    let mut key_new = BTreeMap::new();
    let mut phi_new = BTreeMap::new();
    for (&v, st) in &run.states {
        let k = st.key_new.clone().expect("every vertex picks a pair");
        ensure!(
            expected[&v] == (k.clone(), st.phi_new),
            "vertex {v} missed the pair {:?} within radius {}",
            expected[&v],
            preset.pair_radius()
        );
        let c = st
            .color
            .ok_or_else(|| Error::Assertion(format!("vertex {v} was never colored")))?;
        coloring.set(v, c);
        key_new.insert(v, k);
        phi_new.insert(v, st.phi_new);
    }
    if let Err(v) = check_proper(g, &coloring, true) {
        return Err(Error::Assertion(format!("final coloring is improper: {v}")));
    }
    // After the last slot of level i exactly the vertices of level >= i are colored.
    let mut level_end: BTreeMap<u32, usize> = BTreeMap::new();
    for &(s, t) in &schedule.slots {
        let e = level_end.entry(s.level).or_insert(0);
        *e = (*e).max(t);
    }
    for (&level, &end) in &level_end {
        for (&v, st) in &run.states {
            let colored = st.decided_at.is_some_and(|t| t <= end);
            ensure!(
                colored == (partition.labels[&v].level >= level),
                "vertex {v} breaks the level order at level {level}"
            );
        }
    }
    Ok(FinalOutcome {
        coloring,
        key_new,
        phi_new,
        literal_rounds: literal_rounds(preset, partition.params.iterations as u64),
        schedule,
        trace: run.trace,
    })
}
