use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use stt_core::experiment::{cmd_compare, cmd_run, rows_from_csv, ExperimentConfig};
use stt_core::generators::{
    gen_grid, gen_hyperbolic, gen_path, gen_random_tree, grid_rotation, largest_component,
    tree_rotation, HyperbolicParams,
};
use stt_core::graph::{parse_graph_file, write_graph_file, GraphFile};
use stt_core::oracle::verify_schedule;
use stt_core::pw::{
    bfs_path_decomposition, grid_path_decomposition, pw_schedule, tree_path_decomposition,
    PathDecomposition,
};
use stt_core::schedule::{Model, Schedule};
use stt_core::separators::{
    parse_coordinates, validate_separation, write_coordinates, Strategy, StrategyKind,
};
use stt_core::septree::{build_separation_tree, BoundProfile, SizeBudget};
use stt_core::stt::{edge_from_teleport, stt_schedule_teleport};

#[derive(Parser)]
#[command(
    name = "stt",
    version,
    about = "Separation tree traversal against an invisible robber"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum GenFamily {
    Path,
    Grid,
    Tree,
    Hyperbolic,
}

#[derive(clap::Args)]
struct GraphArgs {
    /// Graph file: "n m", one edge per line, optional rotation section.
    #[arg(long)]
    graph: PathBuf,
    /// Coordinates file ("r theta" per vertex) for the hyperbolic sector separator.
    #[arg(long)]
    coords: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Write a benchmark graph (and coordinates or a decomposition where available).
    Generate {
        family: GenFamily,
        /// n, or k for a k x k grid.
        #[arg(long)]
        size: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0.75)]
        alpha: f64,
        #[arg(long, default_value_t = 1.0)]
        c_avg: f64,
        /// Keep only the largest component of a hyperbolic sample.
        #[arg(long)]
        largest: bool,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        coords_out: Option<PathBuf>,
        #[arg(long)]
        decomposition_out: Option<PathBuf>,
    },
    /// Separate a graph once and validate the result.
    Separate {
        #[command(flatten)]
        input: GraphArgs,
        #[arg(long, default_value = "bfs-level")]
        strategy: StrategyKind,
    },
    /// Build the separation tree and print it as JSON.
    Tree {
        #[command(flatten)]
        input: GraphArgs,
        #[arg(long, default_value = "bfs-level")]
        strategy: StrategyKind,
        /// Size budget; its value at n is the leaf threshold unless --threshold is given.
        #[arg(long, default_value = "sqrt:8")]
        budget: SizeBudget,
        #[arg(long)]
        threshold: Option<usize>,
    },
    /// Run separation tree traversal, verify it, and optionally export the schedule.
    RunStt {
        #[command(flatten)]
        input: GraphArgs,
        #[arg(long, default_value = "bfs-level")]
        strategy: StrategyKind,
        #[arg(long, default_value = "sqrt:8")]
        budget: SizeBudget,
        #[arg(long, default_value = "teleport")]
        model: Model,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the path-decomposition sweep, verify it, and optionally export the schedule.
    RunPw {
        #[arg(long)]
        graph: PathBuf,
        /// One bag per line; generated from the graph when absent.
        #[arg(long)]
        decomposition: Option<PathBuf>,
        #[arg(long, default_value = "teleport")]
        model: Model,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Replay an exported schedule against the territory oracle.
    Verify {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        schedule: PathBuf,
    },
    /// Print the closed-form bounds for n and a size budget.
    Bounds {
        #[arg(long)]
        n: u64,
        #[arg(long, default_value = "sqrt")]
        budget: SizeBudget,
        #[arg(long)]
        diameter: Option<u64>,
    },
    /// Run an experiment config (JSON or TOML) and write its tables.
    Run {
        config: PathBuf,
        #[arg(long, env = "STT_OUT_DIR")]
        out_dir: Option<PathBuf>,
    },
    /// Join two result tables and fit capture-time exponents.
    Compare {
        a: PathBuf,
        b: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn load(input: &GraphArgs) -> Result<(GraphFile, Option<Vec<stt_core::separators::PolarPoint>>)> {
    let file = parse_graph_file(&read(&input.graph)?)
        .with_context(|| input.graph.display().to_string())?;
    let coords = match &input.coords {
        Some(p) => Some(parse_coordinates(&read(p)?).with_context(|| p.display().to_string())?),
        None => None,
    };
    Ok((file, coords))
}

fn strategy_for(
    kind: StrategyKind,
    file: &GraphFile,
    coords: Option<Vec<stt_core::separators::PolarPoint>>,
) -> Result<Strategy> {
    Ok(Strategy::from_kind(kind, file.rotation.clone(), coords)?)
}

fn print(value: serde_json::Value) {
    println!(
        "{}",
        serde_json::to_string_pretty(&value).expect("json values serialize")
    );
}

fn finish(g: &stt_core::graph::Graph, schedule: &Schedule, out: Option<&Path>) -> Result<bool> {
    let report = verify_schedule(g, schedule)?;
    if let Some(path) = out {
        write(path, &schedule.to_jsonl())?;
    }
    print(json!({ "stats": schedule.stats, "report": report }));
    Ok(report.captured)
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Generate {
            family,
            size,
            seed,
            alpha,
            c_avg,
            largest,
            out,
            coords_out,
            decomposition_out,
        } => {
            if size == 0 {
                bail!("size must be positive");
            }
            let (graph, rotation, coords) = match family {
                GenFamily::Path => {
                    let g = gen_path(size);
                    let r = tree_rotation(&g);
                    (g, Some(r), None)
                }
                GenFamily::Grid => (gen_grid(size), Some(grid_rotation(size)), None),
                GenFamily::Tree => {
                    let g = gen_random_tree(size, seed);
                    let r = tree_rotation(&g);
                    (g, Some(r), None)
                }
                GenFamily::Hyperbolic => {
                    let params = HyperbolicParams::new(size, alpha, c_avg, seed);
                    if !params.is_valid() {
                        bail!("hyperbolic parameters need alpha >= 1/2");
                    }
                    let mut gg = gen_hyperbolic(&params);
                    if largest {
                        gg = largest_component(&gg);
                    }
                    (gg.graph, None, Some(gg.coords))
                }
            };
            write(&out, &write_graph_file(&graph, rotation.as_ref()))?;
            match (coords_out, coords) {
                (Some(path), Some(c)) => write(&path, &write_coordinates(&c))?,
                (Some(_), None) => bail!("only hyperbolic graphs have coordinates"),
                _ => {}
            }
            if let Some(path) = decomposition_out {
                let d = match family {
                    GenFamily::Grid => grid_path_decomposition(size),
                    GenFamily::Path | GenFamily::Tree => tree_path_decomposition(&graph)?,
                    GenFamily::Hyperbolic => bfs_path_decomposition(&graph)?,
                };
                write(&path, &d.to_text())?;
            }
            print(json!({ "n": graph.n(), "m": graph.m() }));
            Ok(true)
        }
        Command::Separate { input, strategy } => {
            let (file, coords) = load(&input)?;
            let r = strategy_for(strategy, &file, coords)?.separate(&file.graph)?;
            let report = validate_separation(&file.graph, &r, file.graph.n());
            print(json!({
                "a": r.a, "b": r.b, "s": r.s,
                "valid": report.is_valid(), "violations": format!("{:?}", report.violations),
            }));
            Ok(report.is_valid())
        }
        Command::Tree {
            input,
            strategy,
            budget,
            threshold,
        } => {
            let (file, coords) = load(&input)?;
            let g = &file.graph;
            let threshold = threshold.unwrap_or(budget.eval(g.n() as u64) as usize);
            let tree =
                build_separation_tree(g, &strategy_for(strategy, &file, coords)?, threshold)?;
            print(json!({
                "threshold": threshold,
                "node_count": tree.node_count(),
                "height": tree.height(),
                "nodes": tree.to_json(),
            }));
            Ok(true)
        }
        Command::RunStt {
            input,
            strategy,
            budget,
            model,
            out,
        } => {
            let (file, coords) = load(&input)?;
            let g = &file.graph;
            let mut run =
                stt_schedule_teleport(g, &strategy_for(strategy, &file, coords)?, &budget)?;
            if model == Model::Edge {
                run = edge_from_teleport(g, run);
            }
            finish(g, &run.schedule, out.as_deref())
        }
        Command::RunPw {
            graph,
            decomposition,
            model,
            out,
        } => {
            let file =
                parse_graph_file(&read(&graph)?).with_context(|| graph.display().to_string())?;
            let g = &file.graph;
            let d = match decomposition {
                Some(p) => {
                    PathDecomposition::parse(&read(&p)?).with_context(|| p.display().to_string())?
                }
                None if g.is_tree() => tree_path_decomposition(g)?,
                None => bfs_path_decomposition(g)?,
            };
            let schedule = pw_schedule(g, &d, model)?;
            finish(g, &schedule, out.as_deref())
        }
        Command::Verify { graph, schedule } => {
            let g = parse_graph_file(&read(&graph)?)
                .with_context(|| graph.display().to_string())?
                .graph;
            let s = Schedule::from_jsonl(&read(&schedule)?)
                .with_context(|| schedule.display().to_string())?;
            let report = verify_schedule(&g, &s)?;
            print(serde_json::to_value(&report)?);
            Ok(report.captured)
        }
        Command::Bounds {
            n,
            budget,
            diameter,
        } => {
            let profile = BoundProfile::new(budget, n)?;
            let mut value = serde_json::to_value(&profile)?;
            value["budget"] = json!(budget.to_string());
            if let Some(d) = diameter {
                value["capture_time_bound"] = json!(profile.capture_time_bound(d));
            }
            print(value);
            Ok(true)
        }
        Command::Run { config, out_dir } => {
            let cfg = ExperimentConfig::from_file(&config)?;
            let dir = out_dir
                .or_else(|| cfg.out_dir.clone())
                .unwrap_or_else(|| PathBuf::from("out"));
            match cmd_run(&cfg, &dir) {
                Ok((rows, files)) => {
                    eprintln!("{} rows -> {}", rows.len(), files.csv.display());
                    Ok(true)
                }
                Err(e @ stt_core::experiment::ExperimentError::NotCaptured { .. }) => {
                    eprintln!("verification failed: {e}");
                    Ok(false)
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::Compare { a, b, out } => {
            let rows_a = rows_from_csv(&read(&a)?)?;
            let rows_b = rows_from_csv(&read(&b)?)?;
            let cmp = cmd_compare(&rows_a, &rows_b)?;
            let table = String::from_utf8(cmp.to_csv()?).expect("csv is utf-8");
            match out {
                Some(path) => write(&path, &table)?,
                None => print!("{table}"),
            }
            eprintln!(
                "exponent a = {}, exponent b = {}, ratio exponent = {}",
                fmt_opt(cmp.exponent_a),
                fmt_opt(cmp.exponent_b),
                fmt_opt(cmp.ratio_exponent)
            );
            Ok(true)
        }
    }
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map_or_else(|| "n/a".to_string(), |v| format!("{v:.3}"))
}
