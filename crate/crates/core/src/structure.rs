//! Edge-charging argument for planar graphs of maximum degree 6 without
//! short removable cycles, and the edge-disjointness properties it relies on.

use std::collections::BTreeSet;
use std::fmt;

use num_rational::Ratio;
use num_traits::Zero;
use serde::{Serialize, Serializer};

use crate::error::{ensure, Error, Result};
use crate::graph::{cycles_up_to, Cycle, Graph, VertexId};
use crate::removable::removable_cycles_through;

pub type Charge = Ratio<u64>;

const MAX_DEGREE: usize = 6;
const REMOVABLE_LEN: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EventKind {
    FiveCycle,
    FourClique,
    Triangle,
}

impl EventKind {
    pub fn share(self) -> Charge {
        match self {
            EventKind::FiveCycle => Ratio::new(1, 5),
            EventKind::FourClique => Ratio::new(3, 4),
            EventKind::Triangle => Ratio::new(1, 3),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChargeEvent {
    pub kind: EventKind,
    pub vertices: Vec<VertexId>,
    pub removed: Vec<(VertexId, VertexId)>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ChargeLedger {
    #[serde(serialize_with = "charges_as_strings")]
    pub charges: std::collections::BTreeMap<VertexId, Charge>,
    pub removed: Vec<(VertexId, VertexId)>,
    pub events: Vec<ChargeEvent>,
}

fn charges_as_strings<S: Serializer>(
    m: &std::collections::BTreeMap<VertexId, Charge>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_map(m.iter().map(|(v, c)| (v.to_string(), c.to_string())))
}

impl ChargeLedger {
    pub fn total(&self) -> Charge {
        self.charges.values().fold(Charge::zero(), |a, &b| a + b)
    }

    pub fn max_charge(&self) -> Charge {
        self.charges.values().copied().max().unwrap_or_else(Charge::zero)
    }

    fn record(
        &mut self,
        g: &mut Graph,
        kind: EventKind,
        vertices: Vec<VertexId>,
        removed: Vec<(VertexId, VertexId)>,
    ) -> Result<()> {
        for &(u, v) in &removed {
            ensure!(g.remove_edge(u, v), "edge {{{u},{v}}} was already gone");
        }
        for v in &vertices {
            *self.charges.get_mut(v).expect("every vertex has a charge") += kind.share();
        }
        self.removed.extend(removed.iter().copied());
        self.events.push(ChargeEvent {
            kind,
            vertices,
            removed,
        });
        ensure!(
            self.total() == Charge::from_integer(self.removed.len() as u64),
            "total charge {} differs from {} removed edges",
            self.total(),
            self.removed.len()
        );
        Ok(())
    }
}

/// The three edges removed from a 4-clique on ids `x < y < z < w`:
/// `{x,y}, {y,z}, {z,w}`, leaving the path `(z, x, w, y)`.
pub fn k4_break_edges(g: &Graph, vertices: [VertexId; 4]) -> Result<[(VertexId, VertexId); 3]> {
    let mut s = vertices;
    s.sort_unstable();
    for i in 0..4 {
        for j in i + 1..4 {
            if s[i] == s[j] || !g.has_edge(s[i], s[j]) {
                return Err(Error::Input(format!("{s:?} is not a 4-clique")));
            }
        }
    }
    let [x, y, z, w] = s;
    Ok([(x, y), (y, z), (z, w)])
}

/// All 4-cliques, as sorted id quadruples in lexicographic order.
pub fn four_cliques(g: &Graph) -> Vec<[VertexId; 4]> {
    let mut out = Vec::new();
    for a in g.vertices() {
        let up: Vec<VertexId> = g.neighbors(a).filter(|&b| b > a).collect();
        for (i, &b) in up.iter().enumerate() {
            for (j, &c) in up.iter().enumerate().skip(i + 1) {
                if !g.has_edge(b, c) {
                    continue;
                }
                for &d in &up[j + 1..] {
                    if g.has_edge(b, d) && g.has_edge(c, d) {
                        out.push([a, b, c, d]);
                    }
                }
            }
        }
    }
    out.sort_unstable();
    out
}

/// Some removable cycle of length at most `max_len`, searching shorter
/// lengths first.
pub fn find_removable_cycle(g: &Graph, max_len: usize) -> Option<Cycle> {
    for len in 4..=max_len {
        for v in g.vertices() {
            if let Some(c) = removable_cycles_through(g, v, len, &|_| true).into_iter().next() {
                return Some(c);
            }
        }
    }
    None
}

/// Deletes vertices of degree above 6 and vertices on removable cycles of
/// length at most 10 until neither remains. The result satisfies the
/// precondition of [`charge_procedure`].
pub fn strip_removable(g: &Graph) -> Graph {
    let mut h = g.clone();
    'outer: loop {
        let low: BTreeSet<VertexId> = h.vertices().filter(|&v| h.degree(v) <= MAX_DEGREE).collect();
        if low.len() < h.n() {
            h = h.induced(&low).expect("subset of the vertex set");
            continue;
        }
        for len in 4..=REMOVABLE_LEN {
            let hit: BTreeSet<VertexId> = h
                .vertices()
                .filter(|&v| !removable_cycles_through(&h, v, len, &|_| true).is_empty())
                .collect();
            if !hit.is_empty() {
                let keep: BTreeSet<VertexId> = h.vertices().filter(|v| !hit.contains(v)).collect();
                h = h.induced(&keep).expect("subset of the vertex set");
                continue 'outer;
            }
        }
        return h;
    }
}

fn smallest_edge(c: &Cycle) -> (VertexId, VertexId) {
    c.edges()
        .map(|(u, v)| (u.min(v), u.max(v)))
        .min()
        .expect("cycles have edges")
}

fn intact(g: &Graph, c: &Cycle) -> bool {
    c.edges().all(|(u, v)| g.has_edge(u, v))
}

/// Removes edges until no cycle of length at most 5 remains, charging the
/// vertices of every broken structure. Structures are taken in canonical
/// order; removing edges never creates new ones, so one enumeration per step
/// is enough.
pub fn charge_procedure(g: &Graph) -> Result<(Graph, ChargeLedger)> {
    if g.max_degree() > MAX_DEGREE {
        let v = g.vertices().find(|&v| g.degree(v) > MAX_DEGREE).expect("exists");
        return Err(Error::Precondition(format!(
            "vertex {v} has degree {} > {MAX_DEGREE}",
            g.degree(v)
        )));
    }
    if let Some(c) = find_removable_cycle(g, REMOVABLE_LEN) {
        return Err(Error::Precondition(format!("graph contains the removable cycle {c}")));
    }
    let mut h = g.clone();
    let mut ledger = ChargeLedger {
        charges: g.vertices().map(|v| (v, Charge::zero())).collect(),
        ..Default::default()
    };

    for c in cycles_up_to(&h, 5).into_iter().filter(|c| c.len() == 5) {
        if intact(&h, &c) {
            ledger.record(
                &mut h,
                EventKind::FiveCycle,
                c.key().ids().to_vec(),
                vec![smallest_edge(&c)],
            )?;
        }
    }
    for k in four_cliques(&h) {
        if let Ok(edges) = k4_break_edges(&h, k) {
            ledger.record(&mut h, EventKind::FourClique, k.to_vec(), edges.to_vec())?;
        }
    }
    for c in cycles_up_to(&h, 3) {
        if intact(&h, &c) {
            ledger.record(
                &mut h,
                EventKind::Triangle,
                c.key().ids().to_vec(),
                vec![smallest_edge(&c)],
            )?;
        }
    }

    if let Some(c) = cycles_up_to(&h, 5).first() {
        return Err(Error::Assertion(format!("cycle {c} survives the procedure")));
    }
    let n = g.n() as u64;
    ensure!(
        Charge::from_integer(ledger.removed.len() as u64) <= Ratio::new(3 * n, 2),
        "{} edges removed from {n} vertices",
        ledger.removed.len()
    );
    let worst = ledger.max_charge();
    ensure!(worst <= Ratio::new(3, 2), "a vertex ends with charge {worst}");
    Ok((h, ledger))
}

/// Recomputed edge bound: the residual graph has no cycle of length at most 6,
/// hence at most `7/5 |V|` edges, and at most `3/2 |V|` edges were removed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub vertices: usize,
    pub edges: usize,
    pub removed: usize,
    pub residual_edges: usize,
    pub residual_short_cycle_free: bool,
    pub residual_within_bound: bool,
    pub removed_within_bound: bool,
    pub edges_within_bound: bool,
}

impl Certificate {
    pub fn holds(&self) -> bool {
        self.residual_short_cycle_free
            && self.residual_within_bound
            && self.removed_within_bound
            && self.edges_within_bound
            && self.edges == self.residual_edges + self.removed
    }
}

pub fn certificate(g: &Graph, residual: &Graph, ledger: &ChargeLedger) -> Certificate {
    let n = g.n() as u64;
    let at_most = |count: usize, num: u64, den: u64| Charge::from_integer(count as u64) <= Ratio::new(num * n, den);
    Certificate {
        vertices: g.n(),
        edges: g.edge_count(),
        removed: ledger.removed.len(),
        residual_edges: residual.edge_count(),
        residual_short_cycle_free: cycles_up_to(residual, 6).is_empty(),
        residual_within_bound: at_most(residual.edge_count(), 7, 5),
        removed_within_bound: at_most(ledger.removed.len(), 3, 2),
        edges_within_bound: at_most(g.edge_count(), 29, 10),
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct DisjointnessReport {
    pub five_cycles: usize,
    pub four_cliques: usize,
    pub triangles: usize,
    pub violations: Vec<String>,
}

impl fmt::Display for DisjointnessReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} five-cycles, {} four-cliques, {} triangles, {} violations",
            self.five_cycles,
            self.four_cliques,
            self.triangles,
            self.violations.len()
        )
    }
}

fn edge_set(edges: impl Iterator<Item = (VertexId, VertexId)>) -> BTreeSet<(VertexId, VertexId)> {
    edges.map(|(u, v)| (u.min(v), u.max(v))).collect()
}

fn clique_edges(k: &[VertexId; 4]) -> BTreeSet<(VertexId, VertexId)> {
    let mut out = BTreeSet::new();
    for i in 0..4 {
        for j in i + 1..4 {
            out.insert((k[i], k[j]));
        }
    }
    out
}

/// Checks the pairwise edge-disjointness that holds in planar graphs
/// without removable cycles of length at most 10: a 5-cycle shares no edge
/// with any other cycle of length at most 5, 4-cliques share no edges with
/// each other or with 5-cycles, and a triangle shares no edge with a 4-clique
/// unless it lies inside it.
pub fn disjointness_audit(g: &Graph) -> DisjointnessReport {
    let short = cycles_up_to(g, 5);
    let cycles: Vec<(&Cycle, BTreeSet<(VertexId, VertexId)>)> =
        short.iter().map(|c| (c, edge_set(c.edges()))).collect();
    let cliques: Vec<([VertexId; 4], BTreeSet<(VertexId, VertexId)>)> =
        four_cliques(g).into_iter().map(|k| (k, clique_edges(&k))).collect();
    let mut report = DisjointnessReport {
        five_cycles: short.iter().filter(|c| c.len() == 5).count(),
        four_cliques: cliques.len(),
        triangles: short.iter().filter(|c| c.len() == 3).count(),
        violations: Vec::new(),
    };
    for (i, (c1, e1)) in cycles.iter().enumerate() {
        for (c2, e2) in &cycles[i + 1..] {
            if (c1.len() == 5 || c2.len() == 5) && !e1.is_disjoint(e2) {
                report.violations.push(format!("cycles {c1} and {c2} share an edge"));
            }
        }
    }
    for (i, (k1, e1)) in cliques.iter().enumerate() {
        for (k2, e2) in &cliques[i + 1..] {
            if !e1.is_disjoint(e2) {
                report
                    .violations
                    .push(format!("cliques {k1:?} and {k2:?} share an edge"));
            }
        }
        for (c, e) in &cycles {
            let inside = c.sequence().iter().all(|v| k1.contains(v));
            let shares = !e1.is_disjoint(e);
            if shares && (c.len() == 5 || (c.len() == 3 && !inside)) {
                report
                    .violations
                    .push(format!("clique {k1:?} shares an edge with cycle {c}"));
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complete(n: u64) -> Graph {
        let mut g = Graph::with_vertices(1..=n);
        for u in 1..=n {
            for v in u + 1..=n {
                g.add_edge(u, v).unwrap();
            }
        }
        g
    }

    #[test]
    fn edgeless() {
        let g = Graph::with_vertices(1..=5);
        let (h, l) = charge_procedure(&g).unwrap();
        assert_eq!(h, g);
        assert!(l.removed.is_empty());
        assert!(l.charges.values().all(|c| c.is_zero()));
    }

    #[test]
    fn k4() {
        let g = complete(4);
        let (h, l) = charge_procedure(&g).unwrap();
        assert_eq!(l.removed.len(), 3);
        assert_eq!(l.events.len(), 1);
        assert_eq!(l.events[0].kind, EventKind::FourClique);
        assert!(l.charges.values().all(|&c| c == Ratio::new(3, 4)));
        assert_eq!(h.edges().collect::<Vec<_>>(), vec![(1, 3), (1, 4), (2, 4)]);
        assert!(certificate(&g, &h, &l).holds());
    }

    #[test]
    fn c5() {
        let g = Graph::from_edges(5, &[(1, 2), (2, 3), (3, 4), (4, 5), (5, 1)]).unwrap();
        let (h, l) = charge_procedure(&g).unwrap();
        assert_eq!(l.removed, vec![(1, 2)]);
        assert!(l.charges.values().all(|&c| c == Ratio::new(1, 5)));
        assert_eq!(h.edge_count(), 4);
        assert!(h.is_connected());
    }

    #[test]
    fn rejects_removable_cycles() {
        let g = Graph::from_edges(4, &[(1, 2), (2, 3), (3, 4), (4, 1)]).unwrap();
        assert!(matches!(charge_procedure(&g), Err(Error::Precondition(_))));
    }

    #[test]
    fn break_edges() {
        let g = complete(4);
        assert_eq!(k4_break_edges(&g, [4, 2, 3, 1]).unwrap(), [(1, 2), (2, 3), (3, 4)]);
        let mut h = g.clone();
        for (u, v) in k4_break_edges(&g, [1, 2, 3, 4]).unwrap() {
            h.remove_edge(u, v);
        }
        assert!(k4_break_edges(&h, [1, 2, 3, 4]).is_err());
    }

    #[test]
    fn audit_k4() {
        let r = disjointness_audit(&complete(4));
        assert_eq!((r.four_cliques, r.triangles, r.five_cycles), (1, 4, 0));
        assert!(r.violations.is_empty());
    }

    #[test]
    fn audit_flags_shared_edges() {
        // Two 5-cycles glued along the edge {1,2}.
        let g = Graph::from_edges(
            8,
            &[(1, 2), (2, 3), (3, 4), (4, 5), (5, 1), (2, 6), (6, 7), (7, 8), (8, 1)],
        )
        .unwrap();
        assert!(!disjointness_audit(&g).violations.is_empty());
    }
}
