//! Removable cycles and the coloring extension they permit.
//!
//! A cycle `C` of `H` is removable when `H[V(C)]` is neither a complete graph
//! nor an odd cycle graph. Then every partial proper `Δ`-coloring of `H` that
//! leaves `V(C)` uncolored extends to `V(C)` whenever `Δ(C, H) <= Δ`.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use serde::Serialize;

use crate::error::{ensure, BrooksException, Error, Result};
use crate::graph::{check_proper, Color, ColorAssignment, Cycle, Graph, Key, VertexId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Reason {
    EvenOrChordedOk,
    Complete,
    OddCycleGraph,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RemovabilityVerdict {
    pub removable: bool,
    pub reason: Reason,
}

impl From<Reason> for RemovabilityVerdict {
    fn from(reason: Reason) -> Self {
        RemovabilityVerdict {
            removable: reason == Reason::EvenOrChordedOk,
            reason,
        }
    }
}

/// Classifies `g[ids]` for a vertex set known to carry a Hamiltonian cycle.
///
/// Such a graph is complete iff it has `k(k-1)/2` edges and is a bare cycle
/// iff it has exactly `k` edges.
pub fn classify_vertex_set(g: &Graph, ids: &[VertexId]) -> Reason {
    let k = ids.len();
    let mut edges = 0;
    for (i, &u) in ids.iter().enumerate() {
        for &v in &ids[i + 1..] {
            if g.has_edge(u, v) {
                edges += 1;
            }
        }
    }
    if edges == k * (k - 1) / 2 {
        Reason::Complete
    } else if k % 2 == 1 && edges == k {
        Reason::OddCycleGraph
    } else {
        Reason::EvenOrChordedOk
    }
}

pub fn is_removable(g: &Graph, c: &Cycle) -> Result<RemovabilityVerdict> {
    c.check_in(g)?;
    Ok(classify_vertex_set(g, c.key().ids()).into())
}

/// Largest host degree over the cycle's vertices.
pub fn cycle_degree(g: &Graph, c: &Cycle) -> usize {
    c.sequence().iter().map(|&v| g.degree(v)).max().unwrap_or(0)
}

/// Removable cycles through `through` of length at most `max_len` whose
/// vertices all have degree at most `max_deg`, searched inside the radius
/// `radius` ball. Sorted by canonical key, then sequence.
pub fn enumerate_removable(
    g: &Graph,
    max_len: usize,
    max_deg: usize,
    through: VertexId,
    radius: usize,
) -> Result<Vec<Cycle>> {
    if radius < max_len / 2 + 1 {
        return Err(Error::Input(format!(
            "radius {radius} cannot contain every cycle of length {max_len}"
        )));
    }
    if !g.contains(through) {
        return Ok(Vec::new());
    }
    let ball = g.ball(through, radius)?;
    let eligible = |v: VertexId| ball.contains(&v) && g.degree(v) <= max_deg;
    Ok(removable_cycles_through(g, through, max_len, &eligible))
}

/// Depth-bounded search over eligible vertices. Each cycle is reported once,
/// by requiring the second vertex of the path to be smaller than the last.
pub(crate) fn removable_cycles_through(
    g: &Graph,
    through: VertexId,
    max_len: usize,
    eligible: &dyn Fn(VertexId) -> bool,
) -> Vec<Cycle> {
    if max_len < 3 || !eligible(through) {
        return Vec::new();
    }
    let mut dist: HashMap<VertexId, usize> = HashMap::from([(through, 0)]);
    let mut queue = VecDeque::from([through]);
    while let Some(x) = queue.pop_front() {
        let d = dist[&x];
        if d >= max_len / 2 {
            continue;
        }
        for y in g.neighbors(x) {
            if eligible(y) && !dist.contains_key(&y) {
                dist.insert(y, d + 1);
                queue.push_back(y);
            }
        }
    }
    let mut search = CycleSearch {
        g,
        through,
        max_len,
        dist: &dist,
        path: vec![through],
        verdicts: HashMap::new(),
        found: Vec::new(),
    };
    search.extend();
    let mut found = search.found;
    found.sort();
    found
}

struct CycleSearch<'a> {
    g: &'a Graph,
    through: VertexId,
    max_len: usize,
    dist: &'a HashMap<VertexId, usize>,
    path: Vec<VertexId>,
    verdicts: HashMap<Key, bool>,
    found: Vec<Cycle>,
}

impl CycleSearch<'_> {
    fn extend(&mut self) {
        let last = *self.path.last().expect("path starts at the root");
        let edges_so_far = self.path.len() - 1;
        for w in self.g.neighbors(last) {
            if w == self.through {
                if self.path.len() >= 3 && self.path[1] < last {
                    self.record();
                }
                continue;
            }
            let Some(&d) = self.dist.get(&w) else { continue };
            if edges_so_far + 1 + d > self.max_len || self.path.contains(&w) {
                continue;
            }
            self.path.push(w);
            self.extend();
            self.path.pop();
        }
    }

    fn record(&mut self) {
        let key = Key::new(self.path.iter().copied());
        let g = self.g;
        let ok = *self
            .verdicts
            .entry(key)
            .or_insert_with_key(|k| classify_vertex_set(g, k.ids()) == Reason::EvenOrChordedOk);
        if ok {
            self.found
                .push(Cycle::new(self.path.clone()).expect("path vertices are distinct"));
        }
    }
}

/// Lexicographically least canonical Hamiltonian cycle of `g[key]`.
pub fn canonical_cycle_on(g: &Graph, key: &Key) -> Option<Cycle> {
    let ids = key.ids();
    if ids.len() < 3 || ids.iter().any(|&v| !g.contains(v)) {
        return None;
    }
    let mut path = vec![ids[0]];
    if hamiltonian(g, key, &mut path) {
        Cycle::new(path).ok()
    } else {
        None
    }
}

fn hamiltonian(g: &Graph, key: &Key, path: &mut Vec<VertexId>) -> bool {
    let last = *path.last().expect("non-empty path");
    if path.len() == key.len() {
        return path[1] < last && g.has_edge(last, path[0]);
    }
    for w in g.neighbors(last) {
        if key.contains(w) && !path.contains(&w) {
            path.push(w);
            if hamiltonian(g, key, path) {
                return true;
            }
            path.pop();
        }
    }
    false
}

/// A proper coloring of `h` with colors `1..=delta`, found by backtracking in
/// id order after ruling out the cases excluded by Brooks' theorem.
pub fn brooks_color(h: &Graph, delta: usize) -> Result<ColorAssignment> {
    let palette = delta as Color;
    if h.is_empty() {
        return Ok(ColorAssignment::new(palette));
    }
    if !h.is_connected() {
        return Err(BrooksException::Disconnected.into());
    }
    for v in h.vertices() {
        if h.degree(v) > delta {
            return Err(BrooksException::DegreeExceeded {
                vertex: v,
                degree: h.degree(v),
                delta,
            }
            .into());
        }
    }
    let n = h.n();
    if n == delta + 1 && h.edge_count() == n * (n - 1) / 2 {
        return Err(BrooksException::Complete(n).into());
    }
    if delta == 2 && n % 2 == 1 && h.vertices().all(|v| h.degree(v) == 2) {
        return Err(BrooksException::OddCycle(n).into());
    }
    let order: Vec<VertexId> = h.vertices().collect();
    let mut coloring = ColorAssignment::new(palette);
    ensure!(
        backtrack(h, &order, 0, palette, &mut coloring),
        "no {delta}-coloring found for a graph meeting the Brooks conditions"
    );
    Ok(coloring)
}

fn backtrack(h: &Graph, order: &[VertexId], i: usize, palette: Color, c: &mut ColorAssignment) -> bool {
    let Some(&v) = order.get(i) else { return true };
    for col in 1..=palette {
        if h.neighbors(v).all(|u| c.get(u) != Some(col)) {
            c.set(v, col);
            if backtrack(h, order, i + 1, palette, c) {
                return true;
            }
            c.unset(v);
        }
    }
    false
}

fn colors_around(g: &Graph, c: &ColorAssignment, v: VertexId) -> BTreeSet<Color> {
    g.neighbors(v).filter_map(|u| c.get(u)).collect()
}

/// Extends `partial` to the vertices of the removable cycle `c`.
///
/// With `COL(v)` the colors on `v`'s colored neighbors and `S(v)` the
/// successor of `v` on `c`: if `COL(v) ⊆ COL(S(v))` for every `v`, all the
/// sets coincide and `g[V(c)]` is colored from the remaining colors by
/// [`brooks_color`]. Otherwise the smallest such `v` and smallest color
/// `x ∈ COL(v) \ COL(S(v))` are taken, `S(v)` gets `x`, and the rest of the
/// cycle is colored greedily ending at `v`.
pub fn extend_on_cycle(g: &Graph, c: &Cycle, partial: &ColorAssignment, delta: usize) -> Result<ColorAssignment> {
    c.check_in(g)?;
    let verdict = is_removable(g, c)?;
    if !verdict.removable {
        return Err(Error::Input(format!(
            "cycle {c} is not removable ({:?})",
            verdict.reason
        )));
    }
    if cycle_degree(g, c) > delta {
        return Err(Error::Input(format!(
            "cycle {c} has degree {} > {delta}",
            cycle_degree(g, c)
        )));
    }
    let mut out = partial.clone();
    out.palette = delta as Color;
    if let Err(v) = check_proper(g, &out, false) {
        return Err(Error::Input(format!("partial coloring is not proper: {v}")));
    }
    if let Some(&v) = c.sequence().iter().find(|&&v| out.is_colored(v)) {
        return Err(Error::Input(format!("cycle vertex {v} is already colored")));
    }
    let col: BTreeMap<VertexId, BTreeSet<Color>> =
        c.sequence().iter().map(|&v| (v, colors_around(g, &out, v))).collect();
    let succ = |v: VertexId| c.successor(v).expect("vertex lies on the cycle");
    let pivot = c
        .key()
        .ids()
        .iter()
        .copied()
        .find(|&v| !col[&v].is_subset(&col[&succ(v)]));

    match pivot {
        None => {
            let used = &col[&c.sequence()[0]];
            let free: Vec<Color> = (1..=delta as Color).filter(|x| !used.contains(x)).collect();
            let inner = g.induced(c.sequence())?;
            let local =
                brooks_color(&inner, free.len()).map_err(|e| Error::Assertion(format!("uniform case on {c}: {e}")))?;
            for (v, x) in local.iter() {
                out.set(v, free[x as usize - 1]);
            }
        }
        Some(v) => {
            let x = *col[&v]
                .difference(&col[&succ(v)])
                .next()
                .expect("pivot has a color missing at its successor");
            let mut cur = succ(v);
            out.set(cur, x);
            loop {
                cur = succ(cur);
                let around = colors_around(g, &out, cur);
                let pick = (1..=delta as Color).find(|y| !around.contains(y));
                ensure!(pick.is_some(), "no free color for {cur} while extending onto {c}");
                out.set(cur, pick.unwrap_or_default());
                if cur == v {
                    break;
                }
            }
        }
    }
    if let Err(v) = check_proper(g, &out, false) {
        return Err(Error::Assertion(format!("extension onto {c} is improper: {v}")));
    }
    Ok(out)
}
