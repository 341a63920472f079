//! Batch experiments: build instances, run an engine, certify every schedule
//! with the oracle, and tabulate measured values next to their bounds.

use std::cmp::Ordering;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::generators::{
    gen_grid, gen_hyperbolic, gen_path, gen_random_tree, grid_rotation, largest_component,
    HyperbolicParams,
};
use crate::graph::{diameter, parse_graph_file, Graph, Rotation};
use crate::oracle::{verify_schedule, OracleError, VerificationReport};
use crate::pw::{
    bfs_path_decomposition, grid_path_decomposition, pw_schedule, tree_path_decomposition,
    PathDecomposition, PwError,
};
use crate::schedule::{Algorithm, Event, Model, Schedule};
use crate::separators::{parse_coordinates, PolarPoint, SeparatorError, Strategy, StrategyKind};
use crate::septree::{capture_time_bound, cop_bound, node_bound, BoundError, SizeBudget};
use crate::stt::{edge_from_teleport, stt_schedule_teleport, SttError};

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("invalid config: {0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {reason}")]
    Input { path: PathBuf, reason: String },
    #[error("{instance}: {source}")]
    Stt {
        instance: String,
        #[source]
        source: SttError,
    },
    #[error("{instance}: {source}")]
    Pw {
        instance: String,
        #[source]
        source: PwError,
    },
    #[error("{instance}: {source}")]
    Separator {
        instance: String,
        #[source]
        source: SeparatorError,
    },
    #[error("{instance}: {source}")]
    Oracle {
        instance: String,
        #[source]
        source: OracleError,
    },
    #[error("{instance}: {source}")]
    Bound {
        instance: String,
        #[source]
        source: BoundError,
    },
    #[error("{instance}: robber not captured; schedule written to {}", dump.display())]
    NotCaptured { instance: String, dump: PathBuf },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("instance sets differ: {0}")]
    Mismatch(String),
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> ExperimentError + '_ {
    move |source| ExperimentError::Io {
        path: path.to_path_buf(),
        source,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Path,
    Grid,
    Tree,
    Hyperbolic,
    File,
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Family::Path => "path",
            Family::Grid => "grid",
            Family::Tree => "tree",
            Family::Hyperbolic => "hyperbolic",
            Family::File => "file",
        })
    }
}

fn default_algorithm() -> Algorithm {
    Algorithm::Stt
}

fn default_model() -> Model {
    Model::Teleport
}

fn default_alpha() -> f64 {
    0.75
}

fn default_c_avg() -> f64 {
    1.0
}

/// One experiment: a graph family swept over sizes and seeds, run with one
/// algorithm in one model. Read from JSON or TOML; unknown keys are rejected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub name: String,
    pub family: Family,
    /// `n` for paths, trees and hyperbolic graphs; `k` for `k x k` grids.
    #[serde(default)]
    pub sizes: Vec<usize>,
    /// Used by the random families; others run once with seed 0.
    #[serde(default)]
    pub seeds: Vec<u64>,
    #[serde(default = "default_algorithm")]
    pub algorithm: Algorithm,
    #[serde(default = "default_model")]
    pub model: Model,
    /// Separator for STT; defaults by family.
    #[serde(default)]
    pub strategy: Option<StrategyKind>,
    /// Size budget such as `sqrt:8` or `const:1`; defaults by family.
    #[serde(default)]
    pub budget: Option<String>,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    #[serde(default = "default_c_avg")]
    pub c_avg: f64,
    /// Graph files of the `file` family.
    #[serde(default)]
    pub files: Vec<PathBuf>,
    /// Optional coordinate files, parallel to `files`.
    #[serde(default)]
    pub coordinates: Vec<PathBuf>,
    #[serde(default)]
    pub dump_schedules: bool,
    #[serde(default)]
    pub out_dir: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self, ExperimentError> {
        let c: Self = toml::from_str(text).map_err(|e| ExperimentError::Config(e.to_string()))?;
        c.validate()?;
        Ok(c)
    }

    pub fn from_json_str(text: &str) -> Result<Self, ExperimentError> {
        let c: Self =
            serde_json::from_str(text).map_err(|e| ExperimentError::Config(e.to_string()))?;
        c.validate()?;
        Ok(c)
    }

    /// Reads `.toml` files as TOML and anything else as JSON.
    pub fn from_file(path: &Path) -> Result<Self, ExperimentError> {
        let text = fs::read_to_string(path).map_err(io_err(path))?;
        if path.extension().is_some_and(|e| e == "toml") {
            Self::from_toml_str(&text)
        } else {
            Self::from_json_str(&text)
        }
    }

    pub fn budget(&self) -> Result<SizeBudget, ExperimentError> {
        match &self.budget {
            Some(s) => s.parse().map_err(ExperimentError::Config),
            None => Ok(match self.family {
                Family::Path | Family::Tree => SizeBudget::Const { c: 1 },
                Family::Grid | Family::File => SizeBudget::PLANAR,
                Family::Hyperbolic => SizeBudget::Power {
                    coef: 4.0,
                    exp: 0.5,
                },
            }),
        }
    }

    pub fn strategy_kind(&self) -> StrategyKind {
        self.strategy.unwrap_or(match self.family {
            Family::Path | Family::Tree => StrategyKind::TreeCentroid,
            Family::Grid => StrategyKind::PlanarCycle,
            Family::Hyperbolic => StrategyKind::HyperbolicSector,
            Family::File => StrategyKind::BfsLevel,
        })
    }

    pub fn validate(&self) -> Result<(), ExperimentError> {
        let bad = |m: &str| Err(ExperimentError::Config(m.to_string()));
        if self.name.is_empty() || self.name.contains(['/', '\\']) {
            return bad("name must be a nonempty file stem");
        }
        self.budget()?;
        match self.family {
            Family::File if self.files.is_empty() => return bad("family \"file\" needs files"),
            Family::File
                if !self.coordinates.is_empty() && self.coordinates.len() != self.files.len() =>
            {
                return bad("coordinates must be parallel to files")
            }
            Family::File => {}
            _ if self.sizes.is_empty() => return bad("sizes must be nonempty"),
            _ if self.sizes.contains(&0) => return bad("sizes must be positive"),
            _ => {}
        }
        if matches!(self.family, Family::Tree | Family::Hyperbolic) && self.seeds.is_empty() {
            return bad("random families need seeds");
        }
        if self.family == Family::Hyperbolic && !(self.alpha >= 0.5 && self.c_avg.is_finite()) {
            return bad("hyperbolic graphs need alpha >= 1/2 and a finite c_avg");
        }
        let kind = self.strategy_kind();
        let supported = match kind {
            StrategyKind::PlanarCycle => matches!(
                self.family,
                Family::Grid | Family::Path | Family::Tree | Family::File
            ),
            StrategyKind::HyperbolicSector => {
                matches!(self.family, Family::Hyperbolic | Family::File)
            }
            StrategyKind::TreeCentroid => {
                matches!(self.family, Family::Path | Family::Tree | Family::File)
            }
            StrategyKind::Exact | StrategyKind::BfsLevel => true,
        };
        if !supported {
            return Err(ExperimentError::Config(format!(
                "strategy {kind} cannot run on family {}",
                self.family
            )));
        }
        Ok(())
    }
}

/// A prepared graph with the side data its strategies need.
#[derive(Debug, Clone)]
pub struct Instance {
    pub label: String,
    pub family: Family,
    pub size: usize,
    pub seed: u64,
    pub graph: Graph,
    pub rotation: Option<Rotation>,
    pub coords: Option<Vec<PolarPoint>>,
}

impl Instance {
    pub fn path(n: usize) -> Self {
        let graph = gen_path(n);
        let rotation = Some(crate::generators::tree_rotation(&graph));
        Self::plain(format!("path-{n}"), Family::Path, n, 0, graph, rotation)
    }

    pub fn grid(k: usize) -> Self {
        Self::plain(
            format!("grid-{k}"),
            Family::Grid,
            k,
            0,
            gen_grid(k),
            Some(grid_rotation(k)),
        )
    }

    pub fn tree(n: usize, seed: u64) -> Self {
        let graph = gen_random_tree(n, seed);
        let rotation = Some(crate::generators::tree_rotation(&graph));
        Self::plain(
            format!("tree-{n}-s{seed}"),
            Family::Tree,
            n,
            seed,
            graph,
            rotation,
        )
    }

    /// Largest component of a sampled hyperbolic graph.
    pub fn hyperbolic(n: usize, alpha: f64, c_avg: f64, seed: u64) -> Self {
        let gg = largest_component(&gen_hyperbolic(&HyperbolicParams::new(
            n, alpha, c_avg, seed,
        )));
        Self {
            label: format!("hyperbolic-{n}-a{alpha}-s{seed}"),
            family: Family::Hyperbolic,
            size: n,
            seed,
            graph: gg.graph,
            rotation: None,
            coords: Some(gg.coords),
        }
    }

    fn plain(
        label: String,
        family: Family,
        size: usize,
        seed: u64,
        graph: Graph,
        rotation: Option<Rotation>,
    ) -> Self {
        Self {
            label,
            family,
            size,
            seed,
            graph,
            rotation,
            coords: None,
        }
    }

    pub fn strategy(&self, kind: StrategyKind) -> Result<Strategy, ExperimentError> {
        Strategy::from_kind(kind, self.rotation.clone(), self.coords.clone()).map_err(|source| {
            ExperimentError::Separator {
                instance: self.label.clone(),
                source,
            }
        })
    }

    /// The decomposition the PW baseline sweeps for this family.
    pub fn decomposition(&self) -> Result<PathDecomposition, ExperimentError> {
        let pw = |source| ExperimentError::Pw {
            instance: self.label.clone(),
            source,
        };
        match self.family {
            Family::Grid => Ok(grid_path_decomposition(self.size)),
            _ if self.graph.is_tree() => tree_path_decomposition(&self.graph).map_err(pw),
            _ => bfs_path_decomposition(&self.graph).map_err(pw),
        }
    }
}

/// The instances a config describes, in output order.
pub fn build_instances(config: &ExperimentConfig) -> Result<Vec<Instance>, ExperimentError> {
    config.validate()?;
    let seeds: Vec<u64> = if config.seeds.is_empty() {
        vec![0]
    } else {
        config.seeds.clone()
    };
    let mut out = Vec::new();
    match config.family {
        Family::Path => out.extend(config.sizes.iter().map(|&n| Instance::path(n))),
        Family::Grid => out.extend(config.sizes.iter().map(|&k| Instance::grid(k))),
        Family::Tree => {
            for &n in &config.sizes {
                out.extend(seeds.iter().map(|&s| Instance::tree(n, s)));
            }
        }
        Family::Hyperbolic => {
            let jobs: Vec<(usize, u64)> = config
                .sizes
                .iter()
                .flat_map(|&n| seeds.iter().map(move |&s| (n, s)))
                .collect();
            out = jobs
                .par_iter()
                .map(|&(n, s)| Instance::hyperbolic(n, config.alpha, config.c_avg, s))
                .collect();
        }
        Family::File => {
            for (i, path) in config.files.iter().enumerate() {
                let text = fs::read_to_string(path).map_err(io_err(path))?;
                let file = parse_graph_file(&text).map_err(|e| ExperimentError::Input {
                    path: path.clone(),
                    reason: e.to_string(),
                })?;
                let coords = match config.coordinates.get(i) {
                    Some(cp) => {
                        let text = fs::read_to_string(cp).map_err(io_err(cp))?;
                        Some(
                            parse_coordinates(&text).map_err(|e| ExperimentError::Input {
                                path: cp.clone(),
                                reason: e.to_string(),
                            })?,
                        )
                    }
                    None => None,
                };
                let n = file.graph.n();
                out.push(Instance {
                    label: path.display().to_string(),
                    family: Family::File,
                    size: n,
                    seed: 0,
                    graph: file.graph,
                    rotation: file.rotation,
                    coords,
                });
            }
        }
    }
    Ok(out)
}

/// One line of the results table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub instance: String,
    pub family: Family,
    pub size: usize,
    pub seed: u64,
    pub n: usize,
    pub m: usize,
    pub diameter: usize,
    pub algorithm: Algorithm,
    pub model: Model,
    pub strategy: String,
    pub budget: String,
    pub captured: bool,
    pub cops_used: usize,
    pub c_f_bound: Option<u64>,
    pub capture_rounds: usize,
    pub capture_bound: f64,
    pub tree_nodes: Option<usize>,
    pub node_bound: Option<f64>,
    pub peak_stack_mass: Option<usize>,
    pub iterations: usize,
    pub root_separator: Option<usize>,
    pub width: Option<usize>,
    pub invariant_i: Option<bool>,
}

/// Everything one run produced.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub row: ResultRow,
    pub schedule: Schedule,
    pub report: VerificationReport,
    pub wall_ms: f64,
}

/// Runs one instance and certifies the schedule. A schedule that fails to
/// capture is not an error here; [`cmd_run`] treats it as one.
pub fn run_instance(
    inst: &Instance,
    algorithm: Algorithm,
    model: Model,
    kind: StrategyKind,
    f: &SizeBudget,
) -> Result<RunOutcome, ExperimentError> {
    let start = Instant::now();
    let g = &inst.graph;
    let label = || inst.label.clone();
    let d = diameter(g).map_err(|_| ExperimentError::Pw {
        instance: label(),
        source: PwError::Disconnected,
    })?;
    let n = g.n() as u64;
    let (schedule, mut row) = match algorithm {
        Algorithm::Stt => {
            let strategy = inst.strategy(kind)?;
            let mut run =
                stt_schedule_teleport(g, &strategy, f).map_err(|source| ExperimentError::Stt {
                    instance: label(),
                    source,
                })?;
            let root_separator = run.schedule.rounds.first().map(|r| match r.event {
                Event::Separate(_) => r.occupied.len(),
                _ => 0,
            });
            if model == Model::Edge {
                run = edge_from_teleport(g, run);
            }
            let bound = |source| ExperimentError::Bound {
                instance: label(),
                source,
            };
            let row = ResultRow {
                c_f_bound: Some(cop_bound(f, n).map_err(bound)?),
                capture_bound: capture_time_bound(d as u64, n, f)
                    .to_f64()
                    .unwrap_or(f64::NAN),
                tree_nodes: Some(run.stats.tree_nodes()),
                node_bound: Some(node_bound(f, n).to_f64().unwrap_or(f64::NAN)),
                peak_stack_mass: Some(run.stats.peak_stack_mass),
                iterations: run.stats.iterations,
                root_separator,
                width: None,
                strategy: kind.to_string(),
                ..blank_row(inst, d, algorithm, model, f)
            };
            (run.schedule, row)
        }
        Algorithm::Pw => {
            let decomposition = inst.decomposition()?;
            let schedule =
                pw_schedule(g, &decomposition, model).map_err(|source| ExperimentError::Pw {
                    instance: label(),
                    source,
                })?;
            let row = ResultRow {
                capture_bound: (d * g.n()) as f64,
                iterations: schedule.stats.iterations,
                width: schedule.stats.width,
                strategy: "path-decomposition".into(),
                ..blank_row(inst, d, algorithm, model, f)
            };
            (schedule, row)
        }
    };
    let report = verify_schedule(g, &schedule).map_err(|source| ExperimentError::Oracle {
        instance: label(),
        source,
    })?;
    row.captured = report.captured;
    row.cops_used = schedule.max_concurrent_cops();
    row.capture_rounds = report.capture_round.unwrap_or(schedule.rounds.len());
    row.invariant_i = report
        .invariant_i
        .map(|ok| ok && report.strictly_decreasing == Some(true));
    Ok(RunOutcome {
        row,
        schedule,
        report,
        wall_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

fn blank_row(
    inst: &Instance,
    d: usize,
    algorithm: Algorithm,
    model: Model,
    f: &SizeBudget,
) -> ResultRow {
    ResultRow {
        instance: inst.label.clone(),
        family: inst.family,
        size: inst.size,
        seed: inst.seed,
        n: inst.graph.n(),
        m: inst.graph.m(),
        diameter: d,
        algorithm,
        model,
        strategy: String::new(),
        budget: f.to_string(),
        captured: false,
        cops_used: 0,
        c_f_bound: None,
        capture_rounds: 0,
        capture_bound: 0.0,
        tree_nodes: None,
        node_bound: None,
        peak_stack_mass: None,
        iterations: 0,
        root_separator: None,
        width: None,
        invariant_i: None,
    }
}

/// Output order: size, seed, then label.
fn row_order(a: &ResultRow, b: &ResultRow) -> Ordering {
    (a.size, a.seed, &a.instance, a.algorithm, a.model).cmp(&(
        b.size,
        b.seed,
        &b.instance,
        b.algorithm,
        b.model,
    ))
}

/// Files written by [`cmd_run`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunArtifacts {
    pub csv: PathBuf,
    pub json: PathBuf,
    pub timings: PathBuf,
    pub schedules: Option<PathBuf>,
}

/// Runs every instance of `config` in parallel and writes
/// `<name>.csv`, `<name>.json` and `<name>.timings.csv` into `out_dir`
/// (plus `<name>-schedules/` when schedules are dumped). Rows are sorted, so
/// the tables do not depend on scheduling. Any uncaptured schedule is dumped
/// and aborts the run.
pub fn cmd_run(
    config: &ExperimentConfig,
    out_dir: &Path,
) -> Result<(Vec<ResultRow>, RunArtifacts), ExperimentError> {
    let f = config.budget()?;
    let kind = config.strategy_kind();
    let instances = build_instances(config)?;
    fs::create_dir_all(out_dir).map_err(io_err(out_dir))?;
    let schedule_dir = out_dir.join(format!("{}-schedules", config.name));
    let outcomes: Vec<Result<RunOutcome, ExperimentError>> = instances
        .par_iter()
        .map(|inst| run_instance(inst, config.algorithm, config.model, kind, &f))
        .collect();
    let mut done = Vec::with_capacity(outcomes.len());
    for outcome in outcomes {
        let outcome = outcome?;
        if !outcome.row.captured || config.dump_schedules {
            fs::create_dir_all(&schedule_dir).map_err(io_err(&schedule_dir))?;
            let path = schedule_dir.join(schedule_file_name(&outcome.row));
            fs::write(&path, outcome.schedule.to_jsonl()).map_err(io_err(&path))?;
            if !outcome.row.captured {
                return Err(ExperimentError::NotCaptured {
                    instance: outcome.row.instance,
                    dump: path,
                });
            }
        }
        done.push(outcome);
    }
    done.sort_by(|a, b| row_order(&a.row, &b.row));
    let rows: Vec<ResultRow> = done.iter().map(|o| o.row.clone()).collect();

    let csv_path = out_dir.join(format!("{}.csv", config.name));
    fs::write(&csv_path, rows_to_csv(&rows)?).map_err(io_err(&csv_path))?;
    let json_path = out_dir.join(format!("{}.json", config.name));
    let json = serde_json::to_string_pretty(&rows).expect("rows serialize") + "\n";
    fs::write(&json_path, json).map_err(io_err(&json_path))?;
    let timings_path = out_dir.join(format!("{}.timings.csv", config.name));
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["instance", "algorithm", "model", "wall_ms"])?;
    for o in &done {
        w.write_record([
            o.row.instance.clone(),
            o.row.algorithm.to_string(),
            o.row.model.to_string(),
            format!("{:.3}", o.wall_ms),
        ])?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| ExperimentError::Csv(e.into_error().into()))?;
    fs::write(&timings_path, bytes).map_err(io_err(&timings_path))?;
    Ok((
        rows,
        RunArtifacts {
            csv: csv_path,
            json: json_path,
            timings: timings_path,
            schedules: schedule_dir.exists().then_some(schedule_dir),
        },
    ))
}

pub fn schedule_file_name(row: &ResultRow) -> String {
    let stem: String = row
        .instance
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '-' || c == '.' {
                c
            } else {
                '_'
            }
        })
        .collect();
    format!("{stem}-{}-{}.jsonl", row.algorithm, row.model)
}

pub fn rows_to_csv(rows: &[ResultRow]) -> Result<Vec<u8>, ExperimentError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    w.into_inner()
        .map_err(|e| ExperimentError::Csv(e.into_error().into()))
}

pub fn rows_from_csv(text: &str) -> Result<Vec<ResultRow>, ExperimentError> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    r.deserialize()
        .map(|row| row.map_err(ExperimentError::from))
        .collect()
}

/// Least-squares slope of `ln y` against `ln x`; `None` with fewer than two
/// distinct `x` or any non-positive value.
pub fn loglog_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.iter().any(|&(x, y)| x <= 0.0 || y <= 0.0) {
        return None;
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let k = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / k;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub instance: String,
    pub n: usize,
    pub capture_a: usize,
    pub capture_b: usize,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub rows: Vec<ComparisonRow>,
    /// Fitted exponents of capture rounds in `n`.
    pub exponent_a: Option<f64>,
    pub exponent_b: Option<f64>,
    pub ratio_exponent: Option<f64>,
}

impl Comparison {
    pub fn to_csv(&self) -> Result<Vec<u8>, ExperimentError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for r in &self.rows {
            w.serialize(r)?;
        }
        w.into_inner()
            .map_err(|e| ExperimentError::Csv(e.into_error().into()))
    }
}

/// Joins two result sets on their instances and fits growth exponents.
pub fn cmd_compare(a: &[ResultRow], b: &[ResultRow]) -> Result<Comparison, ExperimentError> {
    let mut rows = Vec::with_capacity(a.len());
    for ra in a {
        let rb = b
            .iter()
            .find(|rb| rb.instance == ra.instance)
            .ok_or_else(|| {
                ExperimentError::Mismatch(format!("{} only in the first set", ra.instance))
            })?;
        if rb.n != ra.n {
            return Err(ExperimentError::Mismatch(format!(
                "{} has different sizes",
                ra.instance
            )));
        }
        rows.push(ComparisonRow {
            instance: ra.instance.clone(),
            n: ra.n,
            capture_a: ra.capture_rounds,
            capture_b: rb.capture_rounds,
            ratio: ra.capture_rounds as f64 / rb.capture_rounds as f64,
        });
    }
    if let Some(extra) = b
        .iter()
        .find(|rb| !a.iter().any(|ra| ra.instance == rb.instance))
    {
        return Err(ExperimentError::Mismatch(format!(
            "{} only in the second set",
            extra.instance
        )));
    }
    let fit = |pick: &dyn Fn(&ComparisonRow) -> f64| {
        loglog_slope(
            &rows
                .iter()
                .map(|r| (r.n as f64, pick(r)))
                .collect::<Vec<_>>(),
        )
    };
    Ok(Comparison {
        exponent_a: fit(&|r| r.capture_a as f64),
        exponent_b: fit(&|r| r.capture_b as f64),
        ratio_exponent: fit(&|r| r.ratio),
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(toml_text: &str) -> ExperimentConfig {
        ExperimentConfig::from_toml_str(toml_text).unwrap()
    }

    #[test]
    fn config_parsing_and_defaults() {
        let c = config("name = \"g\"\nfamily = \"grid\"\nsizes = [4]\n");
        assert_eq!(c.algorithm, Algorithm::Stt);
        assert_eq!(c.model, Model::Teleport);
        assert_eq!(c.budget().unwrap(), SizeBudget::PLANAR);
        assert_eq!(c.strategy_kind(), StrategyKind::PlanarCycle);
        let j =
            ExperimentConfig::from_json_str(r#"{"name":"g","family":"grid","sizes":[4]}"#).unwrap();
        assert_eq!(j, c);

        for bad in [
            "name = \"g\"\nfamily = \"grid\"\nsizes = [4]\ncolour = 1\n",
            "name = \"g\"\nfamily = \"grid\"\nsizes = []\n",
            "name = \"g\"\nfamily = \"tree\"\nsizes = [4]\n",
            "name = \"g\"\nfamily = \"grid\"\nsizes = [4]\nbudget = \"cube\"\n",
            "name = \"g\"\nfamily = \"grid\"\nsizes = [4]\nstrategy = \"hyperbolic-sector\"\n",
            "name = \"g\"\nfamily = \"file\"\n",
            "name = \"a/b\"\nfamily = \"grid\"\nsizes = [4]\n",
        ] {
            assert!(ExperimentConfig::from_toml_str(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn run_writes_sorted_deterministic_tables() {
        let dir = tempfile::tempdir().unwrap();
        let c = config("name = \"t\"\nfamily = \"tree\"\nsizes = [50, 20]\nseeds = [2, 1]\n");
        let (rows, files) = cmd_run(&c, dir.path()).unwrap();
        assert_eq!(rows.len(), 4);
        assert_eq!((rows[0].size, rows[0].seed), (20, 1));
        assert!(rows
            .iter()
            .all(|r| r.captured && r.invariant_i == Some(true)));
        assert!(rows
            .iter()
            .all(|r| r.cops_used as u64 <= r.c_f_bound.unwrap()));
        let first = fs::read(&files.csv).unwrap();
        let text = String::from_utf8(first.clone()).unwrap();
        assert!(text.starts_with("instance,family,size,seed,n,m,diameter,algorithm,model"));
        assert_eq!(rows_from_csv(&text).unwrap(), rows);
        let (_, again) = cmd_run(&c, dir.path()).unwrap();
        assert_eq!(fs::read(again.csv).unwrap(), first);
        assert!(files.schedules.is_none());
    }

    #[test]
    fn schedules_are_dumped_and_replayable() {
        let dir = tempfile::tempdir().unwrap();
        let c = config("name = \"g\"\nfamily = \"grid\"\nsizes = [4]\nmodel = \"edge\"\ndump_schedules = true\n");
        let (rows, files) = cmd_run(&c, dir.path()).unwrap();
        let path = files.schedules.unwrap().join(schedule_file_name(&rows[0]));
        let schedule = Schedule::from_jsonl(&fs::read_to_string(path).unwrap()).unwrap();
        let report = verify_schedule(&gen_grid(4), &schedule).unwrap();
        assert_eq!(report.capture_round, Some(rows[0].capture_rounds));
    }

    #[test]
    fn pw_rows_and_comparison() {
        let dir = tempfile::tempdir().unwrap();
        let stt = config("name = \"s\"\nfamily = \"grid\"\nsizes = [4, 8]\nmodel = \"edge\"\n");
        let pw = config("name = \"p\"\nfamily = \"grid\"\nsizes = [4, 8]\nmodel = \"edge\"\nalgorithm = \"pw\"\n");
        let (a, _) = cmd_run(&stt, dir.path()).unwrap();
        let (b, _) = cmd_run(&pw, dir.path()).unwrap();
        assert_eq!(b[0].width, Some(4));
        assert_eq!(b[0].c_f_bound, None);
        let cmp = cmd_compare(&a, &b).unwrap();
        assert_eq!(cmp.rows.len(), 2);
        assert!(cmp.exponent_a.is_some() && cmp.exponent_b.is_some());
        let same = cmd_compare(&a, &a).unwrap();
        assert!(same.rows.iter().all(|r| r.ratio == 1.0));
        assert!(matches!(
            cmd_compare(&a, &b[..1]),
            Err(ExperimentError::Mismatch(_))
        ));
    }

    #[test]
    fn slope_fit() {
        let pts: Vec<(f64, f64)> = [1.0, 2.0, 4.0, 8.0]
            .iter()
            .map(|&x: &f64| (x, 3.0 * x.powf(1.5)))
            .collect();
        assert!((loglog_slope(&pts).unwrap() - 1.5).abs() < 1e-12);
        assert_eq!(loglog_slope(&[(1.0, 1.0)]), None);
        assert_eq!(loglog_slope(&[(1.0, 0.0), (2.0, 1.0)]), None);
    }

    #[test]
    fn file_family() {
        let dir = tempfile::tempdir().unwrap();
        let g = dir.path().join("c6.txt");
        fs::write(
            &g,
            crate::graph::write_graph_file(&crate::separators::test_graphs::cycle(6), None),
        )
        .unwrap();
        let c = ExperimentConfig {
            name: "f".into(),
            family: Family::File,
            sizes: vec![],
            seeds: vec![],
            algorithm: Algorithm::Stt,
            model: Model::Edge,
            strategy: None,
            budget: Some("const:2".into()),
            alpha: 0.75,
            c_avg: 1.0,
            files: vec![g],
            coordinates: vec![],
            dump_schedules: false,
            out_dir: None,
        };
        let (rows, _) = cmd_run(&c, dir.path()).unwrap();
        assert!(rows[0].captured);
        assert_eq!(rows[0].n, 6);
    }
}
