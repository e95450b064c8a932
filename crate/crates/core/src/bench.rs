//! Round and color measurements over generated families.

use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::generators::{generate, Family, GenSpec};
use crate::graph::check_proper;
use crate::pipeline::color_graph;
use crate::preset::Preset;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchRow {
    pub family: Family,
    pub n: usize,
    pub rounds: usize,
    pub colors: usize,
    pub proper: bool,
    pub worst_shrink: f64,
    #[serde(skip)]
    pub max_super_degree: usize,
    #[serde(skip)]
    pub shrinkage: Vec<(usize, usize)>,
}

/// Colors one generated instance per `(family, n)` cell. Cells run in
/// parallel; rows come back in input order. The first failing cell aborts.
pub fn run_bench(families: &[Family], sizes: &[usize], preset: Preset, seed: u64) -> Result<Vec<BenchRow>> {
    let cells: Vec<(Family, usize)> = families
        .iter()
        .flat_map(|&f| sizes.iter().map(move |&n| (f, n)))
        .collect();
    cells
        .par_iter()
        .map(|&(family, n)| {
            let g = generate(&GenSpec::new(family, n, seed))?;
            let r = color_graph(&g, preset)?;
            Ok(BenchRow {
                family,
                n: g.n(),
                rounds: r.rounds(),
                colors: r.coloring.distinct_colors(),
                proper: check_proper(&g, &r.coloring, true).is_ok(),
                worst_shrink: r.worst_shrink(),
                max_super_degree: r.phi.max_super_degree,
                shrinkage: r.partition.shrinkage(),
            })
        })
        .collect()
}

pub fn write_bench_csv<W: Write>(rows: &[BenchRow], w: W) -> Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    wr.write_record(["family", "n", "rounds", "colors", "proper", "worst_shrink"])?;
    for r in rows {
        wr.write_record([
            r.family.name().to_string(),
            r.n.to_string(),
            r.rounds.to_string(),
            r.colors.to_string(),
            r.proper.to_string(),
            format!("{:.6}", r.worst_shrink),
        ])?;
    }
    wr.flush()?;
    Ok(())
}

pub fn bench_csv(rows: &[BenchRow]) -> String {
    let mut buf = Vec::new();
    write_bench_csv(rows, &mut buf).expect("writing to memory cannot fail");
    String::from_utf8(buf).expect("csv is utf-8")
}
