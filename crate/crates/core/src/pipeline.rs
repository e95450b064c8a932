//! End-to-end coloring: partition, synchronization colors, final coloring.

use num_bigint::BigUint;
use num_traits::One;
use serde::Serialize;

use crate::engine::RoundTrace;
use crate::error::{Error, Result};
use crate::final_color::{final_color, literal_rounds, FinalOutcome};
use crate::graph::{check_proper, shortest_cycle_through, ColorAssignment, Graph};
use crate::partition::{run_partition, PartitionOutcome, PartitionProgram};
use crate::preset::Preset;
use crate::sync_color::{assign_phi, PhiOutcome, ReductionSchedule};

#[derive(Clone, Debug)]
pub struct ColorReport {
    pub preset: Preset,
    pub coloring: ColorAssignment,
    pub partition: PartitionOutcome,
    pub phi: PhiOutcome,
    pub finish: FinalOutcome,
    pub trace: RoundTrace,
    pub round_budget: u128,
}

#[derive(Clone, Debug, Serialize)]
pub struct RoundSummary {
    pub partition: usize,
    pub sync: usize,
    pub finish: usize,
    pub total: usize,
    pub budget: String,
}

impl ColorReport {
    pub fn rounds(&self) -> usize {
        self.trace.rounds_used
    }

    pub fn levels(&self) -> u32 {
        self.partition.levels()
    }

    /// Largest `|B_i| / |A_i|` over the iterations that had active vertices.
    pub fn worst_shrink(&self) -> f64 {
        worst_shrink(&self.partition.shrinkage())
    }

    pub fn summary(&self) -> RoundSummary {
        RoundSummary {
            partition: self.partition.trace.rounds_used,
            sync: self.phi.trace.rounds_used,
            finish: self.finish.trace.rounds_used,
            total: self.rounds(),
            budget: self.round_budget.to_string(),
        }
    }
}

pub fn worst_shrink(audit: &[(usize, usize)]) -> f64 {
    audit
        .iter()
        .filter(|(a, _)| *a > 0)
        .map(|&(a, b)| b as f64 / a as f64)
        .fold(0.0, f64::max)
}

/// Rounds the uncompressed pipeline may use on `n` vertices with ids up to
/// `max_id`: the full partition, key discovery plus the dilated super-graph
/// reduction for the worst admissible degree, and the full final schedule.
pub fn round_budget(preset: Preset, n: usize, max_id: u64) -> Result<u128> {
    let params = preset.partition_params(n);
    let partition = PartitionProgram::new(params)?.round_limit() as u128;
    let span = preset.key_span() as u128;
    let width = max_id.max(1).to_string().len() as u32;
    let super_initial = BigUint::from(10u32).pow(width * params.cycle_len_max as u32);
    let super_rounds = ReductionSchedule::count_rounds(&super_initial, preset.super_palette() - 1)?;
    let low_rounds =
        ReductionSchedule::count_rounds(&(BigUint::from(max_id) + BigUint::one()), params.deg_threshold as u64)?;
    let sync = span + (span * super_rounds).max(low_rounds);
    Ok(partition + sync + literal_rounds(preset, params.iterations as u64))
}

/// Rejects inputs outside the preset's graph class that are cheap to detect:
/// edge counts above the planar bound and, for 4 colors, triangles.
pub fn check_input(g: &Graph, preset: Preset) -> Result<()> {
    let n = g.n();
    if n >= 3 {
        let bound = match preset {
            Preset::FourColor => 2 * n - 4,
            Preset::SixColor => 3 * n - 6,
        };
        if g.edge_count() > bound {
            return Err(Error::Precondition(format!(
                "{} edges exceed the planar bound {bound} for preset {preset}",
                g.edge_count()
            )));
        }
    }
    if preset == Preset::FourColor {
        for v in g.vertices() {
            if let Some(c) = shortest_cycle_through(g, v, 3) {
                return Err(Error::Precondition(format!(
                    "preset 4col needs a triangle-free graph, found {c}"
                )));
            }
        }
    }
    Ok(())
}

pub fn color_graph(g: &Graph, preset: Preset) -> Result<ColorReport> {
    check_input(g, preset)?;
    let params = preset.partition_params(g.n());
    let partition = run_partition(g, &params)?;
    let phi = assign_phi(g, &partition, preset)?;
    let finish = final_color(g, &partition, &phi.phi, preset)?;
    if let Err(v) = check_proper(g, &finish.coloring, true) {
        return Err(Error::Assertion(format!("pipeline output is improper: {v}")));
    }
    let mut trace = partition.trace.clone();
    trace.then(&phi.trace);
    trace.then(&finish.trace);
    let round_budget = round_budget(preset, g.n(), g.max_id().unwrap_or(0))?;
    if trace.rounds_used as u128 > round_budget {
        return Err(Error::Assertion(format!(
            "{} rounds exceed the budget {round_budget}",
            trace.rounds_used
        )));
    }
    Ok(ColorReport {
        preset,
        coloring: finish.coloring.clone(),
        partition,
        phi,
        finish,
        trace,
        round_budget,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{generate, Family, GenSpec};

    #[test]
    fn triangulation_six_colors() {
        let g = generate(&GenSpec::new(Family::Triangulation, 200, 3)).unwrap();
        let r = color_graph(&g, Preset::SixColor).unwrap();
        assert!(r.coloring.iter().all(|(_, c)| (1..=6).contains(&c)));
        assert!(r.worst_shrink() <= 0.999);
    }

    #[test]
    fn rejects_triangles_for_four_colors() {
        let g = Graph::from_edges(3, &[(1, 2), (2, 3), (1, 3)]).unwrap();
        assert!(matches!(
            color_graph(&g, Preset::FourColor),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn empty_graph() {
        let r = color_graph(&Graph::new(), Preset::FourColor).unwrap();
        assert!(r.coloring.is_empty());
    }
}
