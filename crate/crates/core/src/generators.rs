//! Seeded planar graph families. Every generator numbers vertices `1..=n`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Grid,
    Hexgrid,
    Triangulation,
    Subdivided,
    OuterplanarFan,
    MaximalOuterplanar,
}

impl Family {
    pub const ALL: [Family; 6] = [
        Family::Grid,
        Family::Hexgrid,
        Family::Triangulation,
        Family::Subdivided,
        Family::OuterplanarFan,
        Family::MaximalOuterplanar,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Grid => "grid",
            Family::Hexgrid => "hexgrid",
            Family::Triangulation => "triangulation",
            Family::Subdivided => "subdivided",
            Family::OuterplanarFan => "outerplanar_fan",
            Family::MaximalOuterplanar => "maximal_outerplanar",
        }
    }

    /// Families whose members never contain a triangle.
    pub fn is_triangle_free(self) -> bool {
        matches!(self, Family::Grid | Family::Hexgrid | Family::Subdivided)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::Input(format!("unknown family {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenSpec {
    pub family: Family,
    pub n: usize,
    pub seed: u64,
}

impl GenSpec {
    pub fn new(family: Family, n: usize, seed: u64) -> Self {
        Self { family, n, seed }
    }
}

pub fn generate(spec: &GenSpec) -> Result<Graph> {
    if spec.n < 2 {
        return Err(Error::Input(format!("n must be >= 2, got {}", spec.n)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    match spec.family {
        Family::Grid => {
            let (w, h) = factor(spec.n)?;
            Ok(grid(w, h))
        }
        Family::Hexgrid => {
            let (w, h) = factor(spec.n)?;
            Ok(hexgrid(w, h))
        }
        Family::Triangulation => triangulation(spec.n, &mut rng),
        Family::Subdivided => subdivided(spec.n, &mut rng),
        Family::OuterplanarFan => Ok(outerplanar_fan(spec.n)),
        Family::MaximalOuterplanar => Ok(maximal_outerplanar(spec.n, &mut rng)),
    }
}

/// Most square factorization `w * h = n` with `2 <= w <= h`.
fn factor(n: usize) -> Result<(usize, usize)> {
    let mut w = (n as f64).sqrt() as usize;
    while w >= 2 {
        if n.is_multiple_of(w) {
            return Ok((w, n / w));
        }
        w -= 1;
    }
    Err(Error::Input(format!("{n} has no factorization into two sides >= 2")))
}

fn cell(w: usize, r: usize, c: usize) -> VertexId {
    (r * w + c + 1) as VertexId
}

/// `h` rows of `w` vertices, numbered row by row.
pub fn grid(w: usize, h: usize) -> Graph {
    let mut g = Graph::with_vertices(1..=(w * h) as VertexId);
    for r in 0..h {
        for c in 0..w {
            if c + 1 < w {
                g.add_edge(cell(w, r, c), cell(w, r, c + 1)).unwrap();
            }
            if r + 1 < h {
                g.add_edge(cell(w, r, c), cell(w, r + 1, c)).unwrap();
            }
        }
    }
    g
}

/// Brick-wall drawing of the hexagonal lattice.
pub fn hexgrid(w: usize, h: usize) -> Graph {
    let mut g = Graph::with_vertices(1..=(w * h) as VertexId);
    for r in 0..h {
        for c in 0..w {
            if c + 1 < w {
                g.add_edge(cell(w, r, c), cell(w, r, c + 1)).unwrap();
            }
            if r + 1 < h && (r + c) % 2 == 0 {
                g.add_edge(cell(w, r, c), cell(w, r + 1, c)).unwrap();
            }
        }
    }
    g
}

/// Random stacked triangulation: start from both faces of a triangle and
/// repeatedly split a uniformly chosen face with a new vertex.
pub fn triangulation(n: usize, rng: &mut impl Rng) -> Result<Graph> {
    if n < 3 {
        return Err(Error::Input(format!("triangulation needs n >= 3, got {n}")));
    }
    let mut g = Graph::from_edges(3, &[(1, 2), (2, 3), (1, 3)])?;
    let mut faces: Vec<[VertexId; 3]> = vec![[1, 2, 3], [1, 2, 3]];
    for v in 4..=n as VertexId {
        let i = rng.gen_range(0..faces.len());
        let [a, b, c] = faces[i];
        for x in [a, b, c] {
            g.add_edge(x, v)?;
        }
        faces[i] = [a, b, v];
        faces.push([b, c, v]);
        faces.push([a, c, v]);
    }
    Ok(g)
}

/// A connected planar graph on `m` vertices with every edge subdivided once,
/// sized so that the result has exactly `n` vertices.
pub fn subdivided(n: usize, rng: &mut impl Rng) -> Result<Graph> {
    if n < 5 {
        return Err(Error::Input(format!("subdivided needs n >= 5, got {n}")));
    }
    let m = (n + 6).div_ceil(4).max(3);
    let target_edges = n - m;
    let mut base = triangulation(m, rng)?;
    let mut candidates: Vec<(VertexId, VertexId)> = base.edges().collect();
    candidates.shuffle(rng);
    for (u, v) in candidates {
        if base.edge_count() == target_edges {
            break;
        }
        base.remove_edge(u, v);
        if base.distance(u, v).is_none() {
            base.add_edge(u, v)?;
        }
    }
    if base.edge_count() != target_edges {
        return Err(Error::Input(format!("cannot build a subdivided graph on {n} vertices")));
    }
    let mut g = Graph::with_vertices(1..=n as VertexId);
    for (i, (u, v)) in base.edges().enumerate() {
        let s = (m + i + 1) as VertexId;
        g.add_edge(u, s)?;
        g.add_edge(s, v)?;
    }
    Ok(g)
}

/// Path `1..n-1` plus a hub `n` adjacent to every path vertex.
pub fn outerplanar_fan(n: usize) -> Graph {
    let hub = n as VertexId;
    let mut g = Graph::with_vertices(1..=hub);
    for v in 1..hub {
        g.add_edge(v, hub).unwrap();
        if v + 1 < hub {
            g.add_edge(v, v + 1).unwrap();
        }
    }
    g
}

/// Maximal outerplanar graph grown by stacking new vertices on random outer edges.
pub fn maximal_outerplanar(n: usize, rng: &mut impl Rng) -> Graph {
    let mut g = Graph::with_vertices(1..=n as VertexId);
    g.add_edge(1, 2).unwrap();
    if n == 2 {
        return g;
    }
    g.add_edge(2, 3).unwrap();
    g.add_edge(1, 3).unwrap();
    let mut outer: Vec<(VertexId, VertexId)> = vec![(1, 2), (2, 3), (3, 1)];
    for v in 4..=n as VertexId {
        let i = rng.gen_range(0..outer.len());
        let (a, b) = outer[i];
        g.add_edge(a, v).unwrap();
        g.add_edge(v, b).unwrap();
        outer[i] = (a, v);
        outer.insert(i + 1, (v, b));
    }
    g
}

/// Applies a seeded random bijection of the vertex ids onto themselves.
pub fn permute_ids(g: &Graph, seed: u64) -> Graph {
    let ids: Vec<VertexId> = g.vertices().collect();
    let mut shuffled = ids.clone();
    shuffled.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let map: BTreeMap<VertexId, VertexId> = ids.into_iter().zip(shuffled).collect();
    g.relabel(&map).expect("a permutation is a valid relabeling")
}
