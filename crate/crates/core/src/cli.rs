//! The `planar-color` command line tool.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::bench::{run_bench, write_bench_csv};
use crate::error::{Error, Result};
use crate::generators::{generate, Family, GenSpec};
use crate::graph::{check_proper, Graph};
use crate::io::{graph_to_json, read_colors, read_graph, write_colors, write_graph};
use crate::lowerbound::{
    build_gadget, distance_check, forcing_check, labeling, swap_labeling_experiment, BallRule, Forcing, GadgetFamily,
    GadgetSpec,
};
use crate::partition::run_partition;
use crate::pipeline::{color_graph, worst_shrink};
use crate::preset::Preset;
use crate::structure::{certificate, charge_procedure, disjointness_audit};

/// Environment variable that overrides every `--seed`.
pub const SEED_ENV: &str = "COLOR_SEED";

#[derive(Parser, Debug)]
#[command(
    name = "planar-color",
    version,
    about = "Distributed coloring of planar graphs in the LOCAL model"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Generate a graph from a seeded family.
    Generate {
        #[arg(long)]
        family: Family,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output path; `.json` writes JSON, anything else an edge list.
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the partition and report labels per level.
    Partition {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        preset: Preset,
        /// CSV with one row per iteration: active set sizes before and after.
        #[arg(long)]
        audit: Option<PathBuf>,
    },
    /// Color a graph with the full pipeline.
    Color {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        preset: Preset,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Per-round message counts as CSV.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Structural analyses.
    Analyze {
        #[arg(value_enum)]
        what: Analysis,
        #[arg(long = "in")]
        input: PathBuf,
        /// Where to write the charge ledger as JSON.
        #[arg(long)]
        ledger: Option<PathBuf>,
    },
    /// Lower-bound gadgets and their checks.
    Lowerbound {
        #[arg(long)]
        family: GadgetFamily,
        #[arg(long)]
        k: u32,
        #[arg(long, value_enum)]
        check: Option<Check>,
        /// Rounds of the program under test for `--check swap`.
        #[arg(long, default_value_t = 0)]
        t: usize,
        #[arg(long, default_value = "ball_greedy")]
        program: BallRule,
        /// Labeling seed for `--check swap`; identity labels when absent.
        #[arg(long)]
        seed: Option<u64>,
        /// Write the gadget graph here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Rounds and colors over families and sizes, as CSV.
    Bench {
        #[arg(long, value_delimiter = ',', default_value = "grid")]
        families: Vec<Family>,
        #[arg(long, value_delimiter = ',')]
        sizes: Vec<usize>,
        #[arg(long)]
        preset: Preset,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check that a coloring is total and proper.
    Verify {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        colors: PathBuf,
        /// Palette size; defaults to the one stored with the colors.
        #[arg(long)]
        palette: Option<u32>,
    },
}

#[derive(Args, Debug)]
#[group(required = true, multiple = true)]
pub struct InputArgs {
    #[arg(long = "in", conflicts_with = "family")]
    pub input: Option<PathBuf>,
    #[arg(long, requires = "n")]
    pub family: Option<Family>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Analysis {
    Charge,
    Disjointness,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Check {
    Forcing,
    Distance,
    Swap,
}

fn seed_override(seed: u64) -> Result<u64> {
    match std::env::var(SEED_ENV) {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| Error::Input(format!("{SEED_ENV}={s:?} is not an unsigned integer"))),
        Err(_) => Ok(seed),
    }
}

impl InputArgs {
    fn load(&self) -> Result<Graph> {
        match (&self.input, self.family, self.n) {
            (Some(p), None, _) => read_graph(p),
            (None, Some(f), Some(n)) => generate(&GenSpec::new(f, n, seed_override(self.seed)?)),
            _ => Err(Error::Input("give either --in or --family with --n".into())),
        }
    }
}

fn write_or_print(path: Option<&Path>, text: &str, out: &mut dyn Write) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn println(out: &mut dyn Write, v: serde_json::Value) -> Result<()> {
    writeln!(out, "{}", serde_json::to_string_pretty(&v)?)?;
    Ok(())
}

pub fn execute(cli: Cli, out: &mut dyn Write) -> Result<()> {
    match cli.command {
        Command::Generate {
            family,
            n,
            seed,
            out: path,
        } => {
            let g = generate(&GenSpec::new(family, n, seed_override(seed)?))?;
            write_graph(&path, &g)?;
            println(out, json!({"family": family, "n": g.n(), "edges": g.edge_count()}))
        }
        Command::Partition { input, preset, audit } => {
            let g = input.load()?;
            let p = run_partition(&g, &preset.partition_params(g.n()))?;
            let shrink = p.shrinkage();
            if let Some(path) = audit {
                let mut wr = csv::Writer::from_path(path)?;
                wr.write_record(["iteration", "active_before", "active_after", "ratio"])?;
                for (i, &(a, b)) in shrink.iter().enumerate() {
                    let ratio = if a == 0 { 0.0 } else { b as f64 / a as f64 };
                    wr.write_record([(i + 1).to_string(), a.to_string(), b.to_string(), format!("{ratio:.6}")])?;
                }
                wr.flush()?;
            }
            let phase1 = p.labels.values().filter(|l| l.phase == 1).count();
            println(
                out,
                json!({
                    "n": g.n(),
                    "levels": p.levels(),
                    "phase1": phase1,
                    "phase2": g.n() - phase1,
                    "rounds": p.trace.rounds_used,
                    "worst_shrink": worst_shrink(&shrink),
                }),
            )
        }
        Command::Color {
            input,
            preset,
            out: path,
            trace,
        } => {
            let g = input.load()?;
            let r = color_graph(&g, preset)?;
            if let Some(p) = path {
                write_colors(&p, &r.coloring)?;
            }
            if let Some(p) = trace {
                r.trace.write_csv(fs::File::create(p)?)?;
            }
            println(
                out,
                json!({
                    "n": g.n(),
                    "preset": preset,
                    "colors": r.coloring.distinct_colors(),
                    "levels": r.levels(),
                    "rounds": r.summary(),
                    "max_super_degree": r.phi.max_super_degree,
                    "worst_shrink": r.worst_shrink(),
                }),
            )
        }
        Command::Analyze { what, input, ledger } => {
            let g = read_graph(&input)?;
            match what {
                Analysis::Charge => {
                    let (residual, l) = charge_procedure(&g)?;
                    let cert = certificate(&g, &residual, &l);
                    if let Some(p) = ledger {
                        fs::write(p, serde_json::to_string_pretty(&l)?)?;
                    }
                    println(
                        out,
                        json!({
                            "removed": l.removed.len(),
                            "max_charge": l.max_charge().to_string(),
                            "certificate": cert,
                            "holds": cert.holds(),
                        }),
                    )?;
                    if !cert.holds() {
                        return Err(Error::Assertion("edge bound certificate does not hold".into()));
                    }
                    Ok(())
                }
                Analysis::Disjointness => {
                    let r = disjointness_audit(&g);
                    println(out, serde_json::to_value(&r)?)?;
                    if !r.violations.is_empty() {
                        return Err(Error::Verification(r.violations[0].clone()));
                    }
                    Ok(())
                }
            }
        }
        Command::Lowerbound {
            family,
            k,
            check,
            t,
            program,
            seed,
            out: path,
        } => {
            let spec = GadgetSpec::new(family, k);
            let gadget = build_gadget(spec);
            if let Some(p) = path {
                fs::write(p, graph_to_json(&gadget.graph))?;
            }
            let mut report = json!({
                "family": family,
                "k": k,
                "vertices": gadget.graph.n(),
                "edges": gadget.graph.edge_count(),
            });
            let ok = match check {
                None => true,
                Some(Check::Distance) => {
                    let ok = distance_check(spec);
                    report["distance_2k"] = json!(ok);
                    ok
                }
                Some(Check::Forcing) => {
                    let f = forcing_check(spec)?;
                    report["forcing"] = json!(match f {
                        Forcing::Holds => "holds",
                        Forcing::Fails(_) => "fails",
                        Forcing::Inconclusive => "inconclusive",
                    });
                    f == Forcing::Holds
                }
                Some(Check::Swap) => {
                    let seed = match seed {
                        Some(s) => Some(seed_override(s)?),
                        None => std::env::var(SEED_ENV).ok().map(|_| seed_override(0)).transpose()?,
                    };
                    let psi = labeling(&gadget.graph, seed);
                    let v = swap_labeling_experiment(spec, t, program, &psi)?;
                    report["swap"] = serde_json::to_value(&v)?;
                    report["violation_found"] = json!(v.violation_found());
                    v.violation_found() && v.balls_disjoint
                }
            };
            println(out, report)?;
            if ok {
                Ok(())
            } else {
                Err(Error::Verification("lower-bound check failed".into()))
            }
        }
        Command::Bench {
            families,
            sizes,
            preset,
            seed,
            out: path,
        } => {
            if sizes.windows(2).any(|w| w[0] > w[1]) {
                return Err(Error::Input("sizes must be ascending".into()));
            }
            let rows = run_bench(&families, &sizes, preset, seed_override(seed)?)?;
            let mut buf = Vec::new();
            write_bench_csv(&rows, &mut buf)?;
            write_or_print(path.as_deref(), &String::from_utf8_lossy(&buf), out)?;
            if let Some(r) = rows.iter().find(|r| !r.proper) {
                return Err(Error::Verification(format!("{} n={} is improper", r.family, r.n)));
            }
            Ok(())
        }
        Command::Verify { graph, colors, palette } => {
            let g = read_graph(&graph)?;
            let mut c = read_colors(&colors)?;
            if let Some(k) = palette {
                c.palette = k;
            }
            match check_proper(&g, &c, true) {
                Ok(()) => {
                    writeln!(
                        out,
                        "ok: {} vertices, {} colors, palette {}",
                        g.n(),
                        c.distinct_colors(),
                        c.palette
                    )?;
                    Ok(())
                }
                Err(v) => Err(Error::Verification(v.to_string())),
            }
        }
    }
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{e}");
                return 2;
            }
            let _ = write!(out, "{e}");
            return 0;
        }
    };
    match execute(cli, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
