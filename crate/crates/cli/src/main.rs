use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use hullforge::construction::CoverageAnswer;
use hullforge::geometry::{Point2, TorusMesh};
use hullforge::io::{cmd_construct, cmd_export, cmd_query, cmd_verify, ExportOptions, Projection, RunBudget, RunConfig};

#[derive(Parser)]
#[command(name = "hullforge", version, about = "Certified nested solid-torus constructions whose polynomial hulls contain a ball")]
struct Cli {
    /// Output format of the verdict summary.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum ProjectionArg {
    Stereographic,
    Coordinates,
}

#[derive(Subcommand)]
enum Command {
    /// Build a construction tree and write its archive.
    Construct {
        /// JSON run configuration; flags given alongside override its fields.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        beta: Option<f64>,
        #[arg(long)]
        depth: Option<u32>,
        #[arg(long = "B")]
        b: Option<f64>,
        #[arg(long)]
        resolution: Option<f64>,
        #[arg(long)]
        eps: Option<f64>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        budget_tori: Option<u64>,
        #[arg(long)]
        budget_seconds: Option<f64>,
    },
    /// Re-run every check stored in an archive.
    Verify {
        archive: PathBuf,
        #[arg(long)]
        resolution: Option<f64>,
    },
    /// Report the certified region containing a point.
    Query {
        archive: PathBuf,
        /// `re_z1,im_z1,re_z2,im_z2`
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        point: Vec<f64>,
        #[arg(long, default_value_t = 1)]
        level: u32,
    },
    /// Write torus sample points as CSV.
    Export {
        archive: PathBuf,
        #[arg(long, value_enum, default_value_t = ProjectionArg::Stereographic)]
        projection: ProjectionArg,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        pole: Option<Vec<f64>>,
        /// `radial,tube,fiber` sample counts per torus.
        #[arg(long, value_delimiter = ',')]
        mesh: Option<Vec<usize>>,
        #[arg(long)]
        out: PathBuf,
    },
}

fn init_threads() -> Result<()> {
    if let Ok(v) = std::env::var("HULLFORGE_THREADS") {
        let n: usize = v.parse().with_context(|| format!("HULLFORGE_THREADS = {v:?} is not a thread count"))?;
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn run_config(
    config: Option<PathBuf>,
    beta: Option<f64>,
    depth: Option<u32>,
    b: Option<f64>,
    resolution: Option<f64>,
    eps: Option<f64>,
    seed: Option<u64>,
    out: Option<PathBuf>,
    budget_tori: Option<u64>,
    budget_seconds: Option<f64>,
) -> Result<RunConfig> {
    let mut c = match config {
        Some(p) => {
            let text = std::fs::read_to_string(&p).with_context(|| format!("reading {}", p.display()))?;
            RunConfig::from_json(&text).with_context(|| format!("in {}", p.display()))?
        }
        None => RunConfig::default(),
    };
    c.beta = beta.unwrap_or(c.beta);
    c.depth = depth.unwrap_or(c.depth);
    c.b = b.unwrap_or(c.b);
    c.resolution = resolution.unwrap_or(c.resolution);
    c.eps_initial = eps.unwrap_or(c.eps_initial);
    c.seed = seed.unwrap_or(c.seed);
    c.output = out.unwrap_or(c.output);
    if budget_tori.is_some() || budget_seconds.is_some() {
        c.budget = RunBudget {
            max_tori_per_level: budget_tori.or(c.budget.max_tori_per_level),
            max_seconds: budget_seconds.or(c.budget.max_seconds),
        };
    }
    c.validate()?;
    Ok(c)
}

fn run(cli: Cli) -> Result<i32> {
    let json = cli.format == Format::Json;
    match cli.command {
        Command::Construct { config, beta, depth, b, resolution, eps, seed, out, budget_tori, budget_seconds } => {
            let c = run_config(config, beta, depth, b, resolution, eps, seed, out, budget_tori, budget_seconds)?;
            let done = cmd_construct(&c)?;
            let tree = &done.archive.tree;
            if json {
                let summary = serde_json::json!({
                    "archive": c.output,
                    "status": tree.status,
                    "depth": tree.depth(),
                    "witness": tree.witness,
                    "hull_margins": tree.hull_chain.iter().map(|h| h.margin).collect::<Vec<_>>(),
                    "exit_code": done.exit_code,
                });
                println!("{summary}");
            } else {
                for g in &tree.generations {
                    println!("level {}: {} tori, eps {:e}, r {:.6}, max s {:.6}, hull margin {:e}", g.level, g.torus_count(), g.eps_level, g.r_level, g.max_s(), g.hull.margin);
                }
                println!("status {:?}", tree.status);
                if let Some(w) = &tree.witness {
                    println!("witness: {w}");
                }
                println!("archive written to {}", c.output.display());
            }
            Ok(done.exit_code)
        }
        Command::Verify { archive, resolution } => {
            let report = cmd_verify(&archive, resolution)?;
            if json {
                println!("{}", serde_json::to_string(&report)?);
            } else {
                print!("{}", report.render());
            }
            Ok(report.exit_code)
        }
        Command::Query { archive, point, level } => {
            if point.len() != 4 {
                bail!("--point needs four reals");
            }
            let z = Point2::from_reals(point[0], point[1], point[2], point[3]);
            let report = cmd_query(&archive, &z, level)?;
            let covered = matches!(report.answer, CoverageAnswer::Covered(_));
            if json {
                println!("{}", serde_json::json!({ "covered": covered, "level": level, "lines": report.lines }));
            } else {
                for l in &report.lines {
                    println!("{l}");
                }
            }
            Ok(0)
        }
        Command::Export { archive, projection, pole, mesh, out } => {
            let mut opts = ExportOptions::default();
            opts.projection = match projection {
                ProjectionArg::Stereographic => Projection::Stereographic,
                ProjectionArg::Coordinates => Projection::Coordinates,
            };
            if let Some(p) = pole {
                if p.len() != 4 {
                    bail!("--pole needs four reals");
                }
                opts.pole = [p[0], p[1], p[2], p[3]];
            }
            if let Some(m) = mesh {
                if m.len() != 3 {
                    bail!("--mesh needs three counts");
                }
                opts.mesh = TorusMesh::new(m[0], m[1], m[2]);
            }
            let s = cmd_export(&archive, &opts, &out)?;
            if json {
                println!("{}", serde_json::json!({ "rows": s.rows, "skipped": s.skipped, "out": out }));
            } else {
                println!("{} rows written to {} ({} skipped at the pole)", s.rows, out.display(), s.skipped);
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let outcome = init_threads().and_then(|_| run(cli));
    match outcome {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
