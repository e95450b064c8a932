#![allow(dead_code)]

pub mod locality;

use std::collections::BTreeSet;

use planar_color::generators::triangulation;
use planar_color::graph::cycles_up_to;
use planar_color::structure::strip_removable;
use planar_color::{Color, ColorAssignment, Cycle, Graph, VertexId};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `g[ids]` is neither complete nor an odd cycle, for `ids` spanning a cycle.
pub fn removable_by_definition(g: &Graph, ids: &[VertexId]) -> bool {
    let k = ids.len();
    let mut edges = 0;
    for i in 0..k {
        for j in i + 1..k {
            edges += g.has_edge(ids[i], ids[j]) as usize;
        }
    }
    let complete = edges == k * (k - 1) / 2;
    let odd_cycle = k % 2 == 1 && edges == k;
    !complete && !odd_cycle
}

pub struct ExtensionInstance {
    pub graph: Graph,
    pub cycle: Cycle,
    pub partial: ColorAssignment,
    pub delta: usize,
}

fn try_add(g: &mut Graph, u: VertexId, v: VertexId, cap: usize) -> bool {
    if u == v || g.has_edge(u, v) || g.degree(u) >= cap || g.degree(v) >= cap {
        return false;
    }
    g.add_edge(u, v).unwrap();
    true
}

/// A removable cycle `1..=len` with random chords, a random outside graph of
/// maximum degree at most 6 and a random proper partial coloring of the
/// outside with colors `1..=delta`, where `delta` is between the cycle degree
/// and 6.
pub fn extension_instance(seed: u64) -> ExtensionInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let len = rng.gen_range(4..=10u64);
        let outside = rng.gen_range(0..=14u64);
        let mut g = Graph::with_vertices(1..=len + outside);
        for i in 1..=len {
            g.add_edge(i, i % len + 1).unwrap();
        }
        for _ in 0..rng.gen_range(0..=3) {
            let (a, b) = (rng.gen_range(1..=len), rng.gen_range(1..=len));
            try_add(&mut g, a, b, 6);
        }
        for _ in 0..rng.gen_range(0..=3 * (len + outside)) {
            let a = rng.gen_range(1..=len + outside);
            let b = rng.gen_range(len + 1..=len + outside.max(1));
            if b <= len + outside {
                try_add(&mut g, a, b, 6);
            }
        }
        let ids: Vec<VertexId> = (1..=len).collect();
        if !removable_by_definition(&g, &ids) {
            continue;
        }
        let cycle = Cycle::new(ids.clone()).unwrap();
        let cdeg = ids.iter().map(|&v| g.degree(v)).max().unwrap();
        let delta = rng.gen_range(cdeg.max(3)..=6);
        let mut partial = ColorAssignment::new(delta as Color);
        let mut order: Vec<VertexId> = (len + 1..=len + outside).collect();
        order.shuffle(&mut rng);
        for v in order {
            if rng.gen_bool(0.15) {
                continue;
            }
            let used: BTreeSet<Color> = g.neighbors(v).filter_map(|u| partial.get(u)).collect();
            let free: Vec<Color> = (1..=delta as Color).filter(|c| !used.contains(c)).collect();
            if let Some(&c) = free.choose(&mut rng) {
                partial.set(v, c);
            }
        }
        return ExtensionInstance {
            graph: g,
            cycle,
            partial,
            delta,
        };
    }
}

/// Whether some coloring of `targets` with `1..=palette` extends `partial`
/// properly, by plain backtracking.
pub fn extension_exists(g: &Graph, partial: &ColorAssignment, targets: &[VertexId], palette: Color) -> bool {
    fn go(g: &Graph, c: &mut ColorAssignment, targets: &[VertexId], palette: Color) -> bool {
        let Some((&v, rest)) = targets.split_first() else {
            return true;
        };
        for x in 1..=palette {
            if g.neighbors(v).all(|u| c.get(u) != Some(x)) {
                c.set(v, x);
                if go(g, c, rest, palette) {
                    return true;
                }
                c.unset(v);
            }
        }
        false
    }
    let mut c = partial.clone();
    go(g, &mut c, targets, palette)
}

/// A random planar graph of maximum degree 6 without removable cycles of
/// length at most 10: a stacked triangulation on 120 vertices, each edge kept
/// with probability 0.7, with offending vertices stripped to a fixpoint.
pub fn charge_instance(seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let t = triangulation(120, &mut rng).unwrap();
    let mut g = Graph::with_vertices(t.vertices());
    for (u, v) in t.edges() {
        if rng.gen_bool(0.7) {
            g.add_edge(u, v).unwrap();
        }
    }
    strip_removable(&g)
}

/// Brute-force check of the charge precondition.
pub fn no_short_removable_cycle(g: &Graph) -> bool {
    g.vertices().all(|v| g.degree(v) <= 6)
        && cycles_up_to(g, 10)
            .iter()
            .all(|c| !removable_by_definition(g, c.sequence()))
}

/// A proper coloring with `palette` colors by exhaustive search.
pub fn is_colorable(g: &Graph, palette: Color) -> bool {
    let order: Vec<VertexId> = g.vertices().collect();
    extension_exists(g, &ColorAssignment::new(palette), &order, palette)
}
