use std::collections::hash_map::DefaultHasher;
use std::collections::BTreeMap;
use std::hash::{Hash, Hasher};

use planar_color::engine::{collect_ball, run_rounds, Inbox, LocalView, Step, VertexContext, VertexProgram};
use planar_color::generators::{generate, Family, GenSpec};
use planar_color::lowerbound::{build_gadget, labeling, swapped_labeling, GadgetFamily, GadgetSpec};
use planar_color::{Graph, VertexId};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Remembers everything it ever received and sends a digest of it.
pub struct Transcript;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct History {
    id: VertexId,
    degree: usize,
    n: usize,
    heard: Vec<Vec<(VertexId, u64)>>,
}

impl History {
    fn digest(&self) -> u64 {
        let mut h = DefaultHasher::new();
        self.hash(&mut h);
        h.finish()
    }
}

impl VertexProgram for Transcript {
    type State = History;
    type Msg = u64;

    fn init(&self, ctx: &VertexContext) -> History {
        History {
            id: ctx.id,
            degree: ctx.degree,
            n: ctx.n,
            heard: Vec::new(),
        }
    }

    fn step(&self, round: usize, _ctx: &VertexContext, st: &mut History, inbox: &Inbox<'_, u64>) -> Step<u64> {
        if round > 0 {
            let mut got: Vec<(VertexId, u64)> = inbox.iter().map(|(s, &m)| (s, m)).collect();
            got.sort_unstable();
            st.heard.push(got);
        }
        Step::broadcast(st.digest())
    }
}

pub type Canon = (VertexId, Vec<(VertexId, usize, Option<Vec<VertexId>>)>);

fn canon(view: &LocalView<()>) -> Canon {
    let recs = view
        .records
        .values()
        .map(|r| {
            let adj = r.adjacency.as_ref().map(|a| {
                let mut a = a.to_vec();
                a.sort_unstable();
                a
            });
            (r.id, r.degree, adj)
        })
        .collect();
    (view.center, recs)
}

pub fn states_at(g: &Graph, r: usize, v: VertexId) -> (Canon, History) {
    let ball = run_rounds(g, &collect_ball(r), r);
    let tr = run_rounds(g, &Transcript, r);
    (canon(&ball.states[&v]), tr.states[&v].clone())
}

/// A graph agreeing with `g` on the radius-`r` ball around `v` including the
/// degrees of its vertices, with the same vertex count but rewired and
/// relabeled beyond it.
pub fn perturb_outside(g: &Graph, v: VertexId, r: usize, rng: &mut ChaCha8Rng) -> Graph {
    let dist = g.distances(v, None);
    let far: Vec<VertexId> = g.vertices().filter(|u| dist.get(u).is_none_or(|&d| d > r)).collect();
    let mut h = g.clone();
    let mut far_edges: Vec<(VertexId, VertexId)> =
        h.edges().filter(|(a, b)| far.contains(a) && far.contains(b)).collect();
    far_edges.shuffle(rng);
    for &(a, b) in far_edges.iter().take(far_edges.len() / 3) {
        h.remove_edge(a, b);
    }
    for _ in 0..far.len() / 2 {
        if far.len() < 2 {
            break;
        }
        let a = far[rng.gen_range(0..far.len())];
        let b = far[rng.gen_range(0..far.len())];
        if a != b && !h.has_edge(a, b) {
            h.add_edge(a, b).unwrap();
        }
    }
    let mut fresh: Vec<VertexId> = far.iter().map(|&u| u + 1_000_000).collect();
    fresh.shuffle(rng);
    let mut map: BTreeMap<VertexId, VertexId> = h.vertices().map(|u| (u, u)).collect();
    for (&u, &w) in far.iter().zip(&fresh) {
        map.insert(u, w);
    }
    h.relabel(&map).unwrap()
}

pub struct PairCheck {
    pub name: String,
    pub identical: bool,
}

/// 48 random instance pairs agreeing on a ball, then the gadget swap for
/// both gadget families: 50 pairs in all.
pub fn locality_pairs() -> Vec<PairCheck> {
    let families = [Family::Grid, Family::Triangulation, Family::Subdivided, Family::Hexgrid];
    let mut out = Vec::new();
    for i in 0..48u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(i);
        let f = families[i as usize % families.len()];
        let n = [64, 100, 144][i as usize % 3];
        let g = generate(&GenSpec::new(f, n, i)).unwrap();
        let ids: Vec<VertexId> = g.vertices().collect();
        let v = ids[rng.gen_range(0..ids.len())];
        let r = rng.gen_range(1..=3);
        let h = perturb_outside(&g, v, r, &mut rng);
        out.push(PairCheck {
            name: format!("{f} n={n} v={v} r={r}"),
            identical: g.n() == h.n() && states_at(&g, r, v) == states_at(&h, r, v),
        });
    }
    for (family, seed) in [(GadgetFamily::Planar4, 11), (GadgetFamily::Outerplanar3, 12)] {
        let t = 2;
        let gadget = build_gadget(GadgetSpec::new(family, 3));
        let psi = labeling(&gadget.graph, Some(seed));
        let psi2 = swapped_labeling(&gadget, &psi, t);
        let a = gadget.graph.relabel(&psi).unwrap();
        let b = gadget.graph.relabel(&psi2).unwrap();
        let (near, top1, top2) = (gadget.endpoint(0, 1), gadget.endpoint(3, 1), gadget.endpoint(3, 2));
        let identical = states_at(&a, t, psi[&near]) == states_at(&b, t, psi2[&near])
            && psi2[&top1] == psi[&top2]
            && states_at(&a, t, psi[&top2]) == states_at(&b, t, psi2[&top1]);
        out.push(PairCheck {
            name: format!("{family} gadget swap k=3 t={t}"),
            identical,
        });
    }
    out
}
