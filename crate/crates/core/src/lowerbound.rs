//! Gadget families on which every proper coloring with few colors repeats a
//! color at distance linear in the size, and the relabeling experiment that
//! shows short-running algorithms cannot find such colorings.
//!
//! `planar4`: `G_0` is the edge `v_(0,1) v_(0,2)`. Level `i` adds, for each
//! side `j`, a triangle `a_(i,j) b_(i,j) c_(i,j)` joined completely to both
//! `v_(i-1,j)` and the new vertex `v_(i,j)`. Every proper 4-coloring gives
//! `v_(k,j)` the color of `v_(0,j)`.
//!
//! `outerplanar3`: `G_0` is the edge `v_0 u_0`. Level `i` adds the triangle
//! `a_i b_i v_i` with `a_i, b_i` joined to `v_(i-1)`, and the triangle
//! `c_i d_i u_i` with `c_i, d_i` joined to `u_(i-1)`. Every proper 3-coloring
//! gives `v_k` the color of `v_0` and `u_k` the color of `u_0`.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::engine::{self, collect_ball, LocalView};
use crate::error::{Error, Result};
use crate::graph::{check_proper, Color, ColorAssignment, Graph, VertexId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GadgetFamily {
    Planar4,
    Outerplanar3,
}

impl GadgetFamily {
    pub fn name(self) -> &'static str {
        match self {
            GadgetFamily::Planar4 => "planar4",
            GadgetFamily::Outerplanar3 => "outerplanar3",
        }
    }

    /// Colors that force the endpoint equalities.
    pub fn palette(self) -> Color {
        match self {
            GadgetFamily::Planar4 => 4,
            GadgetFamily::Outerplanar3 => 3,
        }
    }

    pub fn vertices_per_level(self) -> usize {
        match self {
            GadgetFamily::Planar4 => 8,
            GadgetFamily::Outerplanar3 => 6,
        }
    }
}

impl FromStr for GadgetFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "planar4" => Ok(GadgetFamily::Planar4),
            "outerplanar3" => Ok(GadgetFamily::Outerplanar3),
            _ => Err(Error::Input(format!("unknown gadget family {s:?}"))),
        }
    }
}

impl fmt::Display for GadgetFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GadgetSpec {
    pub family: GadgetFamily,
    pub k: u32,
}

impl GadgetSpec {
    pub fn new(family: GadgetFamily, k: u32) -> Self {
        GadgetSpec { family, k }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Role {
    V,
    A,
    B,
    C,
}

/// Construction name of a gadget vertex. `side` is 1 or 2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct VertexName {
    pub family: GadgetFamily,
    pub role: Role,
    pub level: u32,
    pub side: u8,
}

impl VertexName {
    pub fn mirror(self) -> Self {
        VertexName {
            side: 3 - self.side,
            ..self
        }
    }
}

impl fmt::Display for VertexName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            GadgetFamily::Planar4 => {
                let r = match self.role {
                    Role::V => 'v',
                    Role::A => 'a',
                    Role::B => 'b',
                    Role::C => 'c',
                };
                write!(f, "{r}_({},{})", self.level, self.side)
            }
            GadgetFamily::Outerplanar3 => {
                let r = match (self.role, self.side) {
                    (Role::V, 1) => 'v',
                    (Role::A, 1) => 'a',
                    (Role::B, 1) => 'b',
                    (Role::V, _) => 'u',
                    (Role::A, _) => 'c',
                    _ => 'd',
                };
                write!(f, "{r}_{}", self.level)
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct Gadget {
    pub spec: GadgetSpec,
    pub graph: Graph,
    pub names: BTreeMap<VertexId, VertexName>,
    pub ids: BTreeMap<VertexName, VertexId>,
}

impl Gadget {
    pub fn id(&self, role: Role, level: u32, side: u8) -> VertexId {
        self.ids[&VertexName {
            family: self.spec.family,
            role,
            level,
            side,
        }]
    }

    /// `v_(level, side)`, or `v_level` / `u_level` for the outerplanar family.
    pub fn endpoint(&self, level: u32, side: u8) -> VertexId {
        self.id(Role::V, level, side)
    }
}

/// Builds `G_k` with ids assigned level by level in construction order.
pub fn build_gadget(spec: GadgetSpec) -> Gadget {
    let fam = spec.family;
    let mut g = Graph::new();
    let mut names = BTreeMap::new();
    let mut ids = BTreeMap::new();
    let mut next: VertexId = 0;
    let mut add = |role, level, side, g: &mut Graph| {
        next += 1;
        let name = VertexName {
            family: fam,
            role,
            level,
            side,
        };
        g.add_vertex(next);
        names.insert(next, name);
        ids.insert(name, next);
        next
    };
    let v0 = [add(Role::V, 0, 1, &mut g), add(Role::V, 0, 2, &mut g)];
    g.add_edge(v0[0], v0[1]).expect("distinct");
    let mut prev = v0;
    for i in 1..=spec.k {
        for side in 1..=2u8 {
            let p = prev[side as usize - 1];
            let tri: Vec<VertexId> = match fam {
                GadgetFamily::Planar4 => vec![
                    add(Role::A, i, side, &mut g),
                    add(Role::B, i, side, &mut g),
                    add(Role::C, i, side, &mut g),
                ],
                GadgetFamily::Outerplanar3 => vec![add(Role::A, i, side, &mut g), add(Role::B, i, side, &mut g)],
            };
            let v = add(Role::V, i, side, &mut g);
            for (x, &a) in tri.iter().enumerate() {
                for &b in &tri[x + 1..] {
                    g.add_edge(a, b).expect("distinct");
                }
                g.add_edge(a, v).expect("distinct");
                g.add_edge(a, p).expect("distinct");
            }
            prev[side as usize - 1] = v;
        }
    }
    Gadget {
        spec,
        graph: g,
        names,
        ids,
    }
}

#[derive(Clone, Debug)]
pub struct Enumeration {
    pub colorings: Vec<ColorAssignment>,
    /// The search finished before reaching the cap.
    pub complete: bool,
}

/// Visits proper colorings of `g` with colors `1..=palette` in
/// lexicographic order of a breadth-first vertex order until `visit`
/// returns false or `cap` colorings were visited. Returns the number visited
/// and whether the search space was exhausted.
pub fn for_each_coloring<F>(g: &Graph, palette: Color, cap: usize, mut visit: F) -> (usize, bool)
where
    F: FnMut(&ColorAssignment) -> bool,
{
    let order = bfs_order(g);
    let mut c = ColorAssignment::new(palette);
    let mut seen = 0;
    let mut stopped = false;
    search(g, &order, 0, &mut c, cap, &mut seen, &mut stopped, &mut visit);
    (seen, !stopped)
}

#[allow(clippy::too_many_arguments)]
fn search<F>(
    g: &Graph,
    order: &[VertexId],
    i: usize,
    c: &mut ColorAssignment,
    cap: usize,
    seen: &mut usize,
    stopped: &mut bool,
    visit: &mut F,
) where
    F: FnMut(&ColorAssignment) -> bool,
{
    if *stopped {
        return;
    }
    let Some(&v) = order.get(i) else {
        if *seen >= cap {
            *stopped = true;
            return;
        }
        *seen += 1;
        if !visit(c) {
            *stopped = true;
        }
        return;
    };
    for col in 1..=c.palette {
        if g.neighbors(v).all(|u| c.get(u) != Some(col)) {
            c.set(v, col);
            search(g, order, i + 1, c, cap, seen, stopped, visit);
            c.unset(v);
            if *stopped {
                return;
            }
        }
    }
}

fn bfs_order(g: &Graph) -> Vec<VertexId> {
    let mut seen = BTreeSet::new();
    let mut order = Vec::with_capacity(g.n());
    for s in g.vertices() {
        if !seen.insert(s) {
            continue;
        }
        let mut q = VecDeque::from([s]);
        while let Some(x) = q.pop_front() {
            order.push(x);
            for y in g.neighbors(x) {
                if seen.insert(y) {
                    q.push_back(y);
                }
            }
        }
    }
    order
}

/// Up to `cap` proper colorings of `g` with `palette` colors.
pub fn exact_colorings(g: &Graph, palette: Color, cap: usize) -> Enumeration {
    let mut colorings = Vec::new();
    let (_, complete) = for_each_coloring(g, palette, cap, |c| {
        colorings.push(c.clone());
        true
    });
    Enumeration { colorings, complete }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Forcing {
    Holds,
    Fails(ColorAssignment),
    Inconclusive,
}

/// Whether every proper `palette`-coloring gives both ends of each pair the
/// same color. A counter-coloring is a proper coloring of `g` plus the pair
/// as an extra edge, so each pair costs one search.
pub fn forcing_holds(g: &Graph, pairs: &[(VertexId, VertexId)], palette: Color, cap: usize) -> Result<Forcing> {
    for &(x, y) in pairs {
        if x == y {
            continue;
        }
        if !g.contains(x) || !g.contains(y) {
            return Err(Error::Input(format!("pair ({x},{y}) is not in the graph")));
        }
        let mut h = g.clone();
        h.add_edge(x, y)?;
        let mut found = None;
        let (_, complete) = for_each_coloring(&h, palette, cap, |c| {
            found = Some(c.clone());
            false
        });
        if let Some(c) = found {
            return Ok(Forcing::Fails(c));
        }
        if !complete {
            return Ok(Forcing::Inconclusive);
        }
    }
    Ok(Forcing::Holds)
}

pub fn endpoint_pairs(gadget: &Gadget) -> Vec<(VertexId, VertexId)> {
    let k = gadget.spec.k;
    (1..=2)
        .map(|s| (gadget.endpoint(0, s), gadget.endpoint(k, s)))
        .collect()
}

/// Exhaustive check of the endpoint forcing on `G_k`.
pub fn forcing_check(spec: GadgetSpec) -> Result<Forcing> {
    let gadget = build_gadget(spec);
    forcing_holds(
        &gadget.graph,
        &endpoint_pairs(&gadget),
        spec.family.palette(),
        usize::MAX,
    )
}

/// Whether `dist(v_(0,j), v_(k,j)) = 2k` for both sides.
pub fn distance_check(spec: GadgetSpec) -> bool {
    let gadget = build_gadget(spec);
    endpoint_pairs(&gadget)
        .into_iter()
        .all(|(a, b)| gadget.graph.distance(a, b) == Some(2 * spec.k as usize))
}

/// Whether every path from `v_(0,2)` to `v_(k,1)` passes through `v_(0,1)`.
pub fn cut_check(spec: GadgetSpec) -> bool {
    let gadget = build_gadget(spec);
    if spec.k == 0 {
        return true;
    }
    let cut = gadget.endpoint(0, 1);
    let rest: BTreeSet<VertexId> = gadget.graph.vertices().filter(|&v| v != cut).collect();
    let h = gadget.graph.induced(&rest).expect("subset");
    h.distance(gadget.endpoint(0, 2), gadget.endpoint(spec.k, 1)).is_none()
}

/// Whether the radius-`t` balls around the level-`k` endpoints avoid the
/// radius-`t` balls around the level-0 endpoints.
pub fn balls_disjoint(gadget: &Gadget, t: usize) -> bool {
    let k = gadget.spec.k;
    let ball = |v| gadget.graph.ball(v, t).expect("gadget vertex");
    let far: BTreeSet<VertexId> = (1..=2).flat_map(|s| ball(gadget.endpoint(k, s))).collect();
    (1..=2).all(|s| ball(gadget.endpoint(0, s)).is_disjoint(&far))
}

/// Deterministic colorings computed from the radius-`t` view alone.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BallRule {
    /// Greedy in increasing id order over the view.
    BallGreedy,
    /// Lexicographically first proper coloring of the view.
    BallExact,
    /// `id mod palette + 1`.
    IdModulo,
}

impl BallRule {
    pub const ALL: [BallRule; 3] = [BallRule::BallGreedy, BallRule::BallExact, BallRule::IdModulo];

    pub fn name(self) -> &'static str {
        match self {
            BallRule::BallGreedy => "ball_greedy",
            BallRule::BallExact => "ball_exact",
            BallRule::IdModulo => "id_modulo",
        }
    }

    pub fn color(self, view: &LocalView<()>, palette: Color) -> Color {
        let me = view.center;
        match self {
            BallRule::IdModulo => (me % palette as u64) as Color + 1,
            BallRule::BallGreedy => {
                let g = view.graph();
                let mut c = ColorAssignment::new(palette);
                for v in g.vertices() {
                    let used: BTreeSet<Color> = g.neighbors(v).filter_map(|u| c.get(u)).collect();
                    let pick = (1..=palette).find(|x| !used.contains(x)).unwrap_or(1);
                    c.set(v, pick);
                }
                c.get(me).expect("center is colored")
            }
            BallRule::BallExact => {
                let g = view.graph();
                let mut first = None;
                for_each_coloring(&g, palette, 1, |c| {
                    first = c.get(me);
                    false
                });
                first.unwrap_or(1)
            }
        }
    }
}

impl FromStr for BallRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BallRule::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| Error::Input(format!("unknown program {s:?}")))
    }
}

/// Runs the `t`-round program `rule` on `g` relabeled by `labeling` and
/// returns the colors keyed by the original vertices.
pub fn run_ball_rule(
    g: &Graph,
    labeling: &BTreeMap<VertexId, VertexId>,
    rule: BallRule,
    t: usize,
    palette: Color,
) -> Result<(ColorAssignment, usize)> {
    let h = g.relabel(labeling)?;
    let out = engine::run(&h, &collect_ball(t), t)?;
    let mut c = ColorAssignment::new(palette);
    for (&v, &id) in labeling {
        c.set(v, rule.color(&out.states[&id], palette));
    }
    Ok((c, out.trace.rounds_used))
}

/// `ψ'` from `ψ`: vertices in the radius-`t` balls around the level-`k`
/// endpoints take the label of their mirror image.
pub fn swapped_labeling(gadget: &Gadget, psi: &BTreeMap<VertexId, VertexId>, t: usize) -> BTreeMap<VertexId, VertexId> {
    let k = gadget.spec.k;
    let region: BTreeSet<VertexId> = (1..=2)
        .flat_map(|s| gadget.graph.ball(gadget.endpoint(k, s), t).expect("gadget vertex"))
        .collect();
    psi.iter()
        .map(|(&v, &label)| {
            if region.contains(&v) {
                let mirror = gadget.ids[&gadget.names[&v].mirror()];
                (v, psi[&mirror])
            } else {
                (v, label)
            }
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct RunCheck {
    pub proper: bool,
    pub forcing: bool,
    pub rounds: usize,
}

impl RunCheck {
    pub fn violated(&self) -> bool {
        !self.proper || !self.forcing
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SwapVerdict {
    pub k: u32,
    pub t: usize,
    pub rule: BallRule,
    pub balls_disjoint: bool,
    pub psi: RunCheck,
    pub psi_prime: RunCheck,
    /// `φ'(v_(k,1)) = φ(v_(k,2))` and `φ'(v_(0,1)) = φ(v_(0,1))`.
    pub locality: bool,
}

impl SwapVerdict {
    pub fn violation_found(&self) -> bool {
        self.psi.violated() || self.psi_prime.violated()
    }
}

/// Runs `rule` for `t < k` rounds on `G_k` under `psi` and under the swapped
/// labeling, and checks both outputs against properness and forcing.
pub fn swap_labeling_experiment(
    spec: GadgetSpec,
    t: usize,
    rule: BallRule,
    psi: &BTreeMap<VertexId, VertexId>,
) -> Result<SwapVerdict> {
    if t >= spec.k as usize {
        return Err(Error::Input(format!("need t < k, got t = {t}, k = {}", spec.k)));
    }
    let gadget = build_gadget(spec);
    if psi.len() != gadget.graph.n() || !gadget.graph.vertices().all(|v| psi.contains_key(&v)) {
        return Err(Error::Input("labeling must cover every gadget vertex".into()));
    }
    let palette = spec.family.palette();
    let pairs = endpoint_pairs(&gadget);
    let check = |c: &ColorAssignment, rounds: usize| -> Result<RunCheck> {
        if rounds > t {
            return Err(Error::Input(format!("program used {rounds} > {t} rounds")));
        }
        Ok(RunCheck {
            proper: check_proper(&gadget.graph, c, true).is_ok(),
            forcing: pairs.iter().all(|&(a, b)| c.get(a) == c.get(b)),
            rounds,
        })
    };
    let (phi, r1) = run_ball_rule(&gadget.graph, psi, rule, t, palette)?;
    let psi2 = swapped_labeling(&gadget, psi, t);
    let (phi2, r2) = run_ball_rule(&gadget.graph, &psi2, rule, t, palette)?;
    let k = spec.k;
    let locality = phi2.get(gadget.endpoint(k, 1)) == phi.get(gadget.endpoint(k, 2))
        && phi2.get(gadget.endpoint(0, 1)) == phi.get(gadget.endpoint(0, 1));
    Ok(SwapVerdict {
        k,
        t,
        rule,
        balls_disjoint: balls_disjoint(&gadget, t),
        psi: check(&phi, r1)?,
        psi_prime: check(&phi2, r2)?,
        locality,
    })
}

/// The identity labeling, or a seeded permutation of `1..=n`.
pub fn labeling(g: &Graph, seed: Option<u64>) -> BTreeMap<VertexId, VertexId> {
    let ids: Vec<VertexId> = g.vertices().collect();
    match seed {
        None => ids.iter().map(|&v| (v, v)).collect(),
        Some(s) => {
            use rand::seq::SliceRandom;
            use rand::SeedableRng;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(s);
            let mut perm = ids.clone();
            perm.shuffle(&mut rng);
            ids.into_iter().zip(perm).collect()
        }
    }
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
    fn sizes() {
        let g0 = build_gadget(GadgetSpec::new(GadgetFamily::Planar4, 0));
        assert_eq!((g0.graph.n(), g0.graph.edge_count()), (2, 1));
        let g1 = build_gadget(GadgetSpec::new(GadgetFamily::Planar4, 1));
        assert_eq!(g1.graph.n(), 10);
        assert_eq!(g1.graph.degree(g1.endpoint(0, 1)), 4);
        assert_eq!(
            build_gadget(GadgetSpec::new(GadgetFamily::Outerplanar3, 2)).graph.n(),
            14
        );
    }

    #[test]
    fn ball_of_top_endpoint() {
        let g = build_gadget(GadgetSpec::new(GadgetFamily::Planar4, 2));
        let want: BTreeSet<VertexId> = [Role::V, Role::A, Role::B, Role::C]
            .iter()
            .map(|&r| g.id(r, 2, 1))
            .collect();
        assert_eq!(g.graph.ball(g.endpoint(2, 1), 1).unwrap(), want);
    }

    #[test]
    fn k4_colorings() {
        assert_eq!(exact_colorings(&complete(4), 4, usize::MAX).colorings.len(), 24);
        let e = exact_colorings(&complete(4), 3, usize::MAX);
        assert!(e.colorings.is_empty() && e.complete);
        assert!(!exact_colorings(&complete(4), 4, 5).complete);
    }

    #[test]
    fn names() {
        let g = build_gadget(GadgetSpec::new(GadgetFamily::Outerplanar3, 1));
        let shown: Vec<String> = g.names.values().map(|n| n.to_string()).collect();
        assert_eq!(shown, ["v_0", "u_0", "a_1", "b_1", "v_1", "c_1", "d_1", "u_1"]);
        let p = build_gadget(GadgetSpec::new(GadgetFamily::Planar4, 1));
        assert_eq!(p.names[&3].to_string(), "a_(1,1)");
    }

    #[test]
    fn forcing_small() {
        assert_eq!(
            forcing_check(GadgetSpec::new(GadgetFamily::Planar4, 1)).unwrap(),
            Forcing::Holds
        );
        assert_eq!(
            forcing_check(GadgetSpec::new(GadgetFamily::Outerplanar3, 2)).unwrap(),
            Forcing::Holds
        );
    }

    #[test]
    fn forcing_breaks_without_a_triangle_edge() {
        let mut g = build_gadget(GadgetSpec::new(GadgetFamily::Planar4, 1));
        let (a, b) = (g.id(Role::A, 1, 1), g.id(Role::B, 1, 1));
        g.graph.remove_edge(a, b);
        let pairs = endpoint_pairs(&g);
        assert!(matches!(
            forcing_holds(&g.graph, &pairs, 4, usize::MAX).unwrap(),
            Forcing::Fails(_)
        ));
    }

    #[test]
    fn swap_small() {
        let spec = GadgetSpec::new(GadgetFamily::Planar4, 1);
        let g = build_gadget(spec);
        let v = swap_labeling_experiment(spec, 0, BallRule::IdModulo, &labeling(&g.graph, None)).unwrap();
        assert!(v.balls_disjoint && v.locality && v.violation_found());
    }
}
