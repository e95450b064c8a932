//! Undirected simple graphs, cycles, keys and color assignments.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type VertexId = u64;
pub type Color = u32;

/// Undirected simple graph keyed by vertex id.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Graph {
    adj: BTreeMap<VertexId, BTreeSet<VertexId>>,
}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_vertices<I: IntoIterator<Item = VertexId>>(ids: I) -> Self {
        let mut g = Self::new();
        for v in ids {
            g.add_vertex(v);
        }
        g
    }

    /// Graph on ids `1..=n` with the given edges.
    pub fn from_edges(n: u64, edges: &[(VertexId, VertexId)]) -> Result<Self> {
        let mut g = Self::with_vertices(1..=n);
        for &(u, v) in edges {
            if !g.contains(u) || !g.contains(v) {
                return Err(Error::Input(format!("edge {{{u},{v}}} outside 1..={n}")));
            }
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn add_vertex(&mut self, v: VertexId) {
        self.adj.entry(v).or_default();
    }

    /// Adds `{u, v}`, creating missing endpoints. Parallel edges collapse.
    pub fn add_edge(&mut self, u: VertexId, v: VertexId) -> Result<()> {
        if u == v {
            return Err(Error::Input(format!("self-loop at {u}")));
        }
        self.adj.entry(u).or_default().insert(v);
        self.adj.entry(v).or_default().insert(u);
        Ok(())
    }

    pub fn remove_edge(&mut self, u: VertexId, v: VertexId) -> bool {
        let a = self.adj.get_mut(&u).map(|s| s.remove(&v)).unwrap_or(false);
        let b = self.adj.get_mut(&v).map(|s| s.remove(&u)).unwrap_or(false);
        a && b
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.values().map(BTreeSet::len).sum::<usize>() / 2
    }

    pub fn vertices(&self) -> impl DoubleEndedIterator<Item = VertexId> + ExactSizeIterator + '_ {
        self.adj.keys().copied()
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.adj.contains_key(&v)
    }

    /// Neighbors in increasing id order; empty for unknown ids.
    pub fn neighbors(&self, v: VertexId) -> impl DoubleEndedIterator<Item = VertexId> + '_ {
        self.adj.get(&v).into_iter().flatten().copied()
    }

    pub fn neighbor_set(&self, v: VertexId) -> Option<&BTreeSet<VertexId>> {
        self.adj.get(&v)
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adj.get(&v).map_or(0, BTreeSet::len)
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.adj.get(&u).is_some_and(|s| s.contains(&v))
    }

    /// Edges as `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.adj
            .iter()
            .flat_map(|(&u, s)| s.range(u + 1..).map(move |&v| (u, v)))
    }

    pub fn max_degree(&self) -> usize {
        self.adj.values().map(BTreeSet::len).max().unwrap_or(0)
    }

    pub fn max_id(&self) -> Option<VertexId> {
        self.adj.keys().next_back().copied()
    }

    fn require(&self, v: VertexId) -> Result<()> {
        if self.contains(v) {
            Ok(())
        } else {
            Err(Error::Input(format!("unknown vertex {v}")))
        }
    }

    /// Subgraph induced by `s`; every id in `s` must belong to the graph.
    pub fn induced<'a, I>(&self, s: I) -> Result<Graph>
    where
        I: IntoIterator<Item = &'a VertexId>,
    {
        let keep: BTreeSet<VertexId> = s.into_iter().copied().collect();
        let mut adj = BTreeMap::new();
        for &v in &keep {
            let nb = self
                .adj
                .get(&v)
                .ok_or_else(|| Error::Input(format!("unknown vertex {v}")))?;
            adj.insert(v, nb.intersection(&keep).copied().collect());
        }
        Ok(Graph { adj })
    }

    /// Hop distances from `v`, optionally truncated at `limit`.
    pub fn distances(&self, v: VertexId, limit: Option<usize>) -> BTreeMap<VertexId, usize> {
        let mut dist = BTreeMap::new();
        if !self.contains(v) {
            return dist;
        }
        dist.insert(v, 0);
        let mut queue = VecDeque::from([v]);
        while let Some(x) = queue.pop_front() {
            let d = dist[&x];
            if limit.is_some_and(|l| d >= l) {
                continue;
            }
            for y in self.neighbors(x) {
                if let std::collections::btree_map::Entry::Vacant(e) = dist.entry(y) {
                    e.insert(d + 1);
                    queue.push_back(y);
                }
            }
        }
        dist
    }

    pub fn distance(&self, u: VertexId, v: VertexId) -> Option<usize> {
        self.distances(u, None).get(&v).copied()
    }

    pub fn ball(&self, v: VertexId, r: usize) -> Result<BTreeSet<VertexId>> {
        self.require(v)?;
        Ok(self.distances(v, Some(r)).into_keys().collect())
    }

    /// Closed neighborhood of a vertex set.
    pub fn closed_neighborhood<'a, I>(&self, s: I) -> BTreeSet<VertexId>
    where
        I: IntoIterator<Item = &'a VertexId>,
    {
        let mut out = BTreeSet::new();
        for &v in s {
            if self.contains(v) {
                out.insert(v);
                out.extend(self.neighbors(v));
            }
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        match self.adj.keys().next() {
            None => true,
            Some(&v) => self.distances(v, None).len() == self.n(),
        }
    }

    /// Renames vertices through `map`, which must be injective on the vertex set.
    pub fn relabel(&self, map: &BTreeMap<VertexId, VertexId>) -> Result<Graph> {
        let image = |v: VertexId| {
            map.get(&v)
                .copied()
                .ok_or_else(|| Error::Input(format!("relabeling misses vertex {v}")))
        };
        let mut g = Graph::new();
        for v in self.vertices() {
            g.add_vertex(image(v)?);
        }
        if g.n() != self.n() {
            return Err(Error::Input("relabeling is not injective".into()));
        }
        for (u, v) in self.edges() {
            g.add_edge(image(u)?, image(v)?)?;
        }
        Ok(g)
    }

    /// Checks adjacency symmetry and the absence of self-loops.
    pub fn is_well_formed(&self) -> bool {
        self.adj
            .iter()
            .all(|(&u, s)| !s.contains(&u) && s.iter().all(|v| self.has_edge(*v, u)))
    }
}

pub fn induced_subgraph(g: &Graph, s: &BTreeSet<VertexId>) -> Result<Graph> {
    g.induced(s)
}

pub fn ball(g: &Graph, v: VertexId, r: usize) -> Result<BTreeSet<VertexId>> {
    g.ball(v, r)
}

/// Sorted, duplicate-free set of vertex ids.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Key(Vec<VertexId>);

impl Key {
    pub fn new<I: IntoIterator<Item = VertexId>>(ids: I) -> Self {
        let mut v: Vec<VertexId> = ids.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        Key(v)
    }

    pub fn singleton(v: VertexId) -> Self {
        Key(vec![v])
    }

    pub fn ids(&self) -> &[VertexId] {
        &self.0
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Highest member id, the representative of the key.
    pub fn highest(&self) -> Option<VertexId> {
        self.0.last().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = &VertexId> {
        self.0.iter()
    }
}

impl fmt::Display for Key {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

/// Simple cycle stored in canonical form: rotated to start at its smallest
/// id and oriented so the second entry is smaller than the last.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cycle {
    seq: Vec<VertexId>,
}

impl Cycle {
    pub fn new(seq: Vec<VertexId>) -> Result<Self> {
        if seq.len() < 3 {
            return Err(Error::Input(format!("cycle needs >= 3 vertices, got {}", seq.len())));
        }
        if Key::new(seq.iter().copied()).len() != seq.len() {
            return Err(Error::Input("cycle repeats a vertex".into()));
        }
        Ok(Self::canonical(seq))
    }

    fn canonical(mut seq: Vec<VertexId>) -> Self {
        let pos = (0..seq.len()).min_by_key(|&i| seq[i]).unwrap_or(0);
        seq.rotate_left(pos);
        if seq[1] > seq[seq.len() - 1] {
            seq[1..].reverse();
        }
        Cycle { seq }
    }

    pub fn sequence(&self) -> &[VertexId] {
        &self.seq
    }

    pub fn len(&self) -> usize {
        self.seq.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn key(&self) -> Key {
        Key::new(self.seq.iter().copied())
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.seq.contains(&v)
    }

    /// Next vertex along the canonical orientation.
    pub fn successor(&self, v: VertexId) -> Option<VertexId> {
        let i = self.seq.iter().position(|&x| x == v)?;
        Some(self.seq[(i + 1) % self.seq.len()])
    }

    /// Cycle edges as `(min, max)` pairs.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        let k = self.seq.len();
        (0..k).map(move |i| {
            let (a, b) = (self.seq[i], self.seq[(i + 1) % k]);
            (a.min(b), a.max(b))
        })
    }

    /// Verifies that every cycle edge is present in `g`.
    pub fn check_in(&self, g: &Graph) -> Result<()> {
        for (a, b) in self.edges() {
            if !g.has_edge(a, b) {
                return Err(Error::Input(format!("cycle edge {{{a},{b}}} missing from graph")));
            }
        }
        Ok(())
    }
}

impl PartialOrd for Cycle {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Cycle {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.key().cmp(&other.key()).then_with(|| self.seq.cmp(&other.seq))
    }
}

impl fmt::Display for Cycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.seq.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

/// Partial or total coloring with colors in `1..=palette`; absent entries are uncolored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColorAssignment {
    pub palette: Color,
    #[serde(with = "string_keys")]
    pub colors: BTreeMap<VertexId, Color>,
}

impl ColorAssignment {
    pub fn new(palette: Color) -> Self {
        Self {
            palette,
            colors: BTreeMap::new(),
        }
    }

    pub fn get(&self, v: VertexId) -> Option<Color> {
        self.colors.get(&v).copied()
    }

    pub fn set(&mut self, v: VertexId, c: Color) {
        self.colors.insert(v, c);
    }

    pub fn unset(&mut self, v: VertexId) {
        self.colors.remove(&v);
    }

    pub fn is_colored(&self, v: VertexId) -> bool {
        self.colors.contains_key(&v)
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    pub fn distinct_colors(&self) -> usize {
        self.colors.values().collect::<BTreeSet<_>>().len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (VertexId, Color)> + '_ {
        self.colors.iter().map(|(&v, &c)| (v, c))
    }
}

mod string_keys {
    use std::collections::BTreeMap;

    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(m: &BTreeMap<u64, u32>, s: S) -> Result<S::Ok, S::Error> {
        s.collect_map(m.iter().map(|(k, v)| (k.to_string(), v)))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<u64, u32>, D::Error> {
        let raw = BTreeMap::<String, u32>::deserialize(d)?;
        raw.into_iter()
            .map(|(k, v)| {
                k.parse::<u64>()
                    .map(|k| (k, v))
                    .map_err(|_| D::Error::custom(format!("bad vertex id {k:?}")))
            })
            .collect()
    }
}

/// First reason a coloring is not proper.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    Monochromatic {
        u: VertexId,
        v: VertexId,
        color: Color,
    },
    Uncolored(VertexId),
    OutOfPalette {
        vertex: VertexId,
        color: Color,
        palette: Color,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Monochromatic { u, v, color } => {
                write!(f, "edge {{{u},{v}}} has both endpoints colored {color}")
            }
            Violation::Uncolored(v) => write!(f, "vertex {v} is uncolored"),
            Violation::OutOfPalette { vertex, color, palette } => {
                write!(f, "vertex {vertex} has color {color} outside 1..={palette}")
            }
        }
    }
}

/// Checks the coloring vertex by vertex, then edge by edge, in id order.
pub fn check_proper(g: &Graph, c: &ColorAssignment, require_total: bool) -> std::result::Result<(), Violation> {
    for v in g.vertices() {
        match c.get(v) {
            None if require_total => return Err(Violation::Uncolored(v)),
            Some(col) if col == 0 || col > c.palette => {
                return Err(Violation::OutOfPalette {
                    vertex: v,
                    color: col,
                    palette: c.palette,
                })
            }
            _ => {}
        }
    }
    for (u, v) in g.edges() {
        if let (Some(a), Some(b)) = (c.get(u), c.get(v)) {
            if a == b {
                return Err(Violation::Monochromatic { u, v, color: a });
            }
        }
    }
    Ok(())
}

/// Shortest simple cycle through `v` of length at most `max_len`.
///
/// BFS from `v` tags every vertex with the neighbor of `v` it descends from;
/// an edge joining two different branches closes a cycle through `v`.
pub fn shortest_cycle_through(g: &Graph, v: VertexId, max_len: usize) -> Option<Cycle> {
    if max_len < 3 || !g.contains(v) {
        return None;
    }
    let depth_limit = max_len / 2;
    let mut dist: BTreeMap<VertexId, (usize, VertexId, VertexId)> = BTreeMap::new();
    let mut order = Vec::new();
    let mut queue = VecDeque::new();
    for w in g.neighbors(v) {
        dist.insert(w, (1, w, v));
        queue.push_back(w);
    }
    while let Some(x) = queue.pop_front() {
        order.push(x);
        let (d, branch, _) = dist[&x];
        if d >= depth_limit {
            continue;
        }
        for y in g.neighbors(x) {
            if y != v && !dist.contains_key(&y) {
                dist.insert(y, (d + 1, branch, x));
                queue.push_back(y);
            }
        }
    }
    let mut best: Option<(usize, VertexId, VertexId)> = None;
    for &x in &order {
        let (dx, bx, _) = dist[&x];
        for y in g.neighbors(x) {
            if let Some(&(dy, by, _)) = dist.get(&y) {
                if bx != by && x < y {
                    let len = dx + dy + 1;
                    if len <= max_len && best.is_none_or(|(l, _, _)| len < l) {
                        best = Some((len, x, y));
                    }
                }
            }
        }
    }
    let (_, x, y) = best?;
    let path_to = |mut z: VertexId| {
        let mut p = vec![];
        while z != v {
            p.push(z);
            z = dist[&z].2;
        }
        p.reverse();
        p
    };
    let mut seq = vec![v];
    seq.extend(path_to(x));
    let mut back = path_to(y);
    back.reverse();
    seq.extend(back);
    Cycle::new(seq).ok()
}

/// Edge-density check `|E| <= girth/(girth-2) * |V|` for graphs of girth at least `girth_lower`.
pub fn check_edge_bound(g: &Graph, girth_lower: usize) -> Result<bool> {
    if girth_lower < 3 {
        return Err(Error::Input(format!("girth bound must be >= 3, got {girth_lower}")));
    }
    for v in g.vertices() {
        if let Some(c) = shortest_cycle_through(g, v, girth_lower - 1) {
            return Err(Error::Precondition(format!(
                "cycle {c} of length {} is shorter than {girth_lower}",
                c.len()
            )));
        }
    }
    Ok(g.edge_count() * (girth_lower - 2) <= girth_lower * g.n())
}

/// All simple cycles of length at most `max_len`, each once, sorted.
pub fn cycles_up_to(g: &Graph, max_len: usize) -> Vec<Cycle> {
    let mut out = Vec::new();
    for s in g.vertices() {
        let mut path = vec![s];
        let mut on_path = BTreeSet::from([s]);
        extend_cycles(g, s, max_len, &mut path, &mut on_path, &mut out);
    }
    out.sort();
    out
}

fn extend_cycles(
    g: &Graph,
    s: VertexId,
    max_len: usize,
    path: &mut Vec<VertexId>,
    on_path: &mut BTreeSet<VertexId>,
    out: &mut Vec<Cycle>,
) {
    let last = *path.last().expect("path is never empty");
    for w in g.neighbors(last) {
        if w == s && path.len() >= 3 && path[1] < last {
            out.push(Cycle { seq: path.clone() });
        } else if w > s && !on_path.contains(&w) && path.len() < max_len {
            path.push(w);
            on_path.insert(w);
            extend_cycles(g, s, max_len, path, on_path, out);
            on_path.remove(&w);
            path.pop();
        }
    }
}
