//! Batch runs behind the command line: single solves, enumeration, oracle
//! cross-checks, reward ablations and the alpha grid.
//!
//! Every mode renders its rows in instance order, so a fixed seed reproduces the
//! same output. Wall times are the only non-deterministic column and are always
//! named `wall_ms` / `mean_wall_ms`; `no_timing` zeroes them.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

use crate::dimacs::parse_dimacs;
use crate::enumerate::{enumerate, split_seed};
use crate::error::{Error, Result};
use crate::formula::{generate_random, Formula, GeneratorSpec, ProblemClass};
use crate::mcts::{solve, SolverConfig};
use crate::oracle::{brute_force, DEFAULT_MAX_VARS};
use crate::record::{write_csv, write_result, ResultRecord};
use crate::rl::RewardKind;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_MISMATCH: i32 = 3;

pub const ALPHA_GRID_POINTS: usize = 11;
pub const DEFAULT_REPEATS: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Solve,
    Enumerate,
    OracleCheck,
    Ablation,
    AlphaGrid,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

/// `count` generated instances; instance `i` uses seed `split_seed(spec.seed, i)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GeneratedBatch {
    pub spec: GeneratorSpec,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunSpec {
    /// Instance files, or directories scanned for `.cnf` / `.wcnf` files.
    pub inputs: Vec<PathBuf>,
    pub generate: Option<GeneratedBatch>,
    pub mode: Mode,
    /// `None` classifies each instance.
    pub class: Option<ProblemClass>,
    pub config: SolverConfig,
    pub executions: usize,
    pub repeats: usize,
    pub oracle_max_vars: usize,
    pub format: Format,
    pub no_timing: bool,
}

impl Default for RunSpec {
    fn default() -> Self {
        RunSpec {
            inputs: Vec::new(),
            generate: None,
            mode: Mode::Solve,
            class: None,
            config: SolverConfig::default(),
            executions: 10,
            repeats: DEFAULT_REPEATS,
            oracle_max_vars: DEFAULT_MAX_VARS,
            format: Format::Json,
            no_timing: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub exit_code: i32,
    pub body: String,
    /// Per-instance problems, one line each.
    pub diagnostics: Vec<String>,
}

/// A loaded instance with the class it is solved as.
#[derive(Debug, Clone)]
pub struct Instance {
    pub name: String,
    pub formula: Formula,
    pub class: ProblemClass,
}

fn list_inputs(inputs: &[PathBuf]) -> std::io::Result<Vec<PathBuf>> {
    let mut files = Vec::new();
    for path in inputs {
        if path.is_dir() {
            let mut found: Vec<PathBuf> = fs::read_dir(path)?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| {
                    p.is_file()
                        && matches!(
                            p.extension().and_then(|e| e.to_str()),
                            Some("cnf" | "wcnf")
                        )
                })
                .collect();
            found.sort();
            files.extend(found);
        } else {
            files.push(path.clone());
        }
    }
    Ok(files)
}

fn instance_name(path: &Path) -> String {
    path.file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

/// Loads all inputs, collecting a diagnostic for every unreadable or
/// unparsable file instead of stopping.
pub fn load_instances(spec: &RunSpec) -> (Vec<Instance>, Vec<String>) {
    let mut instances = Vec::new();
    let mut diagnostics = Vec::new();
    let files = match list_inputs(&spec.inputs) {
        Ok(files) => files,
        Err(e) => {
            diagnostics.push(format!("cannot list inputs: {e}"));
            Vec::new()
        }
    };
    for path in files {
        let name = instance_name(&path);
        let text = match fs::read(&path) {
            Ok(bytes) => String::from_utf8_lossy(&bytes).into_owned(),
            Err(e) => {
                diagnostics.push(format!("{}: {e}", path.display()));
                continue;
            }
        };
        match parse_dimacs(&text) {
            Ok(formula) => instances.push(make_instance(name, formula, spec.class)),
            Err(e) => diagnostics.push(format!("{}: {e}", path.display())),
        }
    }
    if let Some(batch) = spec.generate {
        for i in 0..batch.count {
            let gen = GeneratorSpec {
                seed: split_seed(batch.spec.seed, i as u64),
                ..batch.spec
            };
            match generate_random(gen) {
                Ok(formula) => {
                    instances.push(make_instance(format!("gen-{i:04}"), formula, spec.class))
                }
                Err(e) => diagnostics.push(format!("generator: {e}")),
            }
        }
    }
    (instances, diagnostics)
}

fn make_instance(name: String, mut formula: Formula, class: Option<ProblemClass>) -> Instance {
    formula.declared_class = class;
    let class = formula.class();
    Instance {
        name,
        formula,
        class,
    }
}

/// Quartile by linear interpolation between order statistics.
pub fn quantile(sorted: &[f64], q: f64) -> f64 {
    assert!(!sorted.is_empty());
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

/// `(x - Q1) / (Q3 - Q1)` clamped to `[0, 1]`. With a zero interquartile range,
/// values at or above the quartile map to 1 and the rest to 0.
pub fn iqr_normalize(values: &[f64]) -> Vec<f64> {
    if values.is_empty() {
        return Vec::new();
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let q1 = quantile(&sorted, 0.25);
    let q3 = quantile(&sorted, 0.75);
    let range = q3 - q1;
    values
        .iter()
        .map(|&x| {
            if range > 0.0 {
                ((x - q1) / range).clamp(0.0, 1.0)
            } else if x >= q3 {
                1.0
            } else {
                0.0
            }
        })
        .collect()
}

pub fn alpha_grid() -> Vec<f64> {
    (0..ALPHA_GRID_POINTS).map(|i| i as f64 / 10.0).collect()
}

fn mean(xs: impl IntoIterator<Item = f64>) -> f64 {
    let (sum, n) = xs.into_iter().fold((0.0, 0usize), |(s, n), x| (s + x, n + 1));
    if n == 0 {
        0.0
    } else {
        sum / n as f64
    }
}

struct Ctx<'a> {
    spec: &'a RunSpec,
    diagnostics: Vec<String>,
    exit_code: i32,
}

impl Ctx<'_> {
    fn fail(&mut self, code: i32, message: String) {
        self.diagnostics.push(message);
        self.exit_code = self.exit_code.max(code);
    }

    fn wall(&self, ms: f64) -> f64 {
        if self.spec.no_timing {
            0.0
        } else {
            ms
        }
    }
}

pub fn run(spec: &RunSpec) -> Result<RunOutput> {
    spec.config.validate()?;
    if spec.repeats == 0 || spec.executions == 0 {
        return Err(Error::InvalidArgument(
            "repeats and executions must be positive".into(),
        ));
    }
    let (instances, load_errors) = load_instances(spec);
    let mut ctx = Ctx {
        spec,
        diagnostics: Vec::new(),
        exit_code: EXIT_OK,
    };
    for e in load_errors {
        ctx.fail(EXIT_PARSE, e);
    }
    let body = match spec.mode {
        Mode::Solve => run_solve(&mut ctx, &instances),
        Mode::Enumerate => run_enumerate(&mut ctx, &instances),
        Mode::OracleCheck => run_oracle_check(&mut ctx, &instances),
        Mode::Ablation => run_ablation(&mut ctx, &instances),
        Mode::AlphaGrid => run_alpha_grid(&mut ctx, &instances),
    };
    Ok(RunOutput {
        exit_code: ctx.exit_code,
        body,
        diagnostics: ctx.diagnostics,
    })
}

fn json_lines<T: Serialize>(rows: &[T]) -> String {
    rows.iter()
        .map(|r| serde_json::to_string(r).expect("row serialization") + "\n")
        .collect()
}

fn csv_text<T: Serialize>(rows: &[T], header: &[&str]) -> String {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.serialize(r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
}

fn render<T: Serialize>(format: Format, rows: &[T], header: &[&str]) -> String {
    match format {
        Format::Json => json_lines(rows),
        Format::Csv => csv_text(rows, header),
    }
}

fn run_solve(ctx: &mut Ctx, instances: &[Instance]) -> String {
    let cfg = ctx.spec.config;
    let results: Vec<_> = instances
        .par_iter()
        .map(|inst| solve(&inst.formula, inst.class, &cfg))
        .collect();
    let mut records = Vec::new();
    for (inst, res) in instances.iter().zip(results) {
        match res {
            Ok(r) => {
                let mut rec = ResultRecord::from_solve(&inst.name, inst.class, &r, cfg.seed);
                rec.wall_ms = ctx.wall(rec.wall_ms);
                records.push(rec);
            }
            Err(e) => ctx.fail(EXIT_PARSE, format!("{}: {e}", inst.name)),
        }
    }
    match ctx.spec.format {
        Format::Json => records.iter().map(|r| write_result(r) + "\n").collect(),
        Format::Csv => write_csv(&records),
    }
}

#[derive(Serialize)]
struct EnumerationRow {
    instance: String,
    class: ProblemClass,
    best_objective: u64,
    executions: usize,
    distinct_optima: Vec<Vec<u8>>,
    discovery_curve: Vec<(usize, usize)>,
}

fn run_enumerate(ctx: &mut Ctx, instances: &[Instance]) -> String {
    let spec = ctx.spec;
    let mut rows = Vec::new();
    for inst in instances {
        match enumerate(&inst.formula, inst.class, &spec.config, spec.executions) {
            Ok(report) => rows.push(EnumerationRow {
                instance: inst.name.clone(),
                class: inst.class,
                best_objective: report.best_objective,
                executions: report.executions,
                distinct_optima: report.distinct_optima.into_iter().collect(),
                discovery_curve: report.discovery_curve,
            }),
            Err(e) => ctx.fail(EXIT_PARSE, format!("{}: {e}", inst.name)),
        }
    }
    match spec.format {
        Format::Json => json_lines(&rows),
        Format::Csv => {
            let mut out = String::from("instance,execution,distinct_count,best_objective\n");
            for row in &rows {
                for (e, c) in &row.discovery_curve {
                    let _ = writeln!(out, "{},{e},{c},{}", row.instance, row.best_objective);
                }
            }
            out
        }
    }
}

#[derive(Serialize)]
struct OracleRow {
    instance: String,
    class: ProblemClass,
    solver_objective: u64,
    oracle_optimum: u64,
    matched: bool,
    oracle_optima: usize,
    hard_feasible: bool,
}

const ORACLE_HEADER: [&str; 7] = [
    "instance",
    "class",
    "solver_objective",
    "oracle_optimum",
    "match",
    "oracle_optima",
    "hard_feasible",
];

fn run_oracle_check(ctx: &mut Ctx, instances: &[Instance]) -> String {
    let spec = ctx.spec;
    let results: Vec<_> = instances
        .par_iter()
        .map(|inst| -> Result<OracleRow> {
            let truth = brute_force(&inst.formula, inst.class, spec.oracle_max_vars)?;
            let solved = solve(&inst.formula, inst.class, &spec.config)?;
            Ok(OracleRow {
                instance: inst.name.clone(),
                class: inst.class,
                solver_objective: solved.objective,
                oracle_optimum: truth.optimum,
                matched: solved.objective == truth.optimum,
                oracle_optima: truth.optimal_set.len(),
                hard_feasible: truth.hard_feasible,
            })
        })
        .collect();
    let mut rows = Vec::new();
    for (inst, res) in instances.iter().zip(results) {
        match res {
            Ok(row) => {
                if !row.matched {
                    ctx.fail(
                        EXIT_MISMATCH,
                        format!(
                            "{}: solver {} != oracle {}",
                            inst.name, row.solver_objective, row.oracle_optimum
                        ),
                    );
                }
                rows.push(row);
            }
            Err(e @ Error::OracleGuard { .. }) => ctx.fail(EXIT_USAGE, format!("{}: {e}", inst.name)),
            Err(e) => ctx.fail(EXIT_PARSE, format!("{}: {e}", inst.name)),
        }
    }
    render(spec.format, &rows, &ORACLE_HEADER)
}

/// Mean objective and wall time over `repeats` seeds for one configuration.
fn repeated(inst: &Instance, cfg: SolverConfig, repeats: usize) -> Result<Vec<(u64, f64)>> {
    (0..repeats)
        .map(|r| {
            let run_cfg = SolverConfig {
                seed: split_seed(cfg.seed, r as u64),
                ..cfg
            };
            solve(&inst.formula, inst.class, &run_cfg).map(|s| (s.objective, s.stats.wall_ms))
        })
        .collect()
}

#[derive(Serialize)]
struct AblationRow {
    instance: String,
    reward: RewardKind,
    explore_factor: f64,
    repeats: usize,
    mean_objective: f64,
    best_objective: u64,
    mean_wall_ms: f64,
}

const ABLATION_HEADER: [&str; 7] = [
    "instance",
    "reward",
    "explore_factor",
    "repeats",
    "mean_objective",
    "best_objective",
    "mean_wall_ms",
];

fn run_ablation(ctx: &mut Ctx, instances: &[Instance]) -> String {
    let spec = ctx.spec;
    let jobs: Vec<(usize, RewardKind)> = (0..instances.len())
        .flat_map(|i| RewardKind::ALL.into_iter().map(move |k| (i, k)))
        .collect();
    let results: Vec<_> = jobs
        .par_iter()
        .map(|&(i, kind)| {
            let cfg = SolverConfig {
                reward: kind,
                ..spec.config
            };
            repeated(&instances[i], cfg, spec.repeats)
        })
        .collect();
    let mut rows = Vec::new();
    let mut failed = vec![false; instances.len()];
    for (&(i, kind), res) in jobs.iter().zip(results) {
        match res {
            Ok(runs) => rows.push(AblationRow {
                instance: instances[i].name.clone(),
                reward: kind,
                explore_factor: spec.config.explore_factor,
                repeats: runs.len(),
                mean_objective: mean(runs.iter().map(|r| r.0 as f64)),
                best_objective: runs.iter().map(|r| r.0).max().unwrap_or(0),
                mean_wall_ms: ctx.wall(mean(runs.iter().map(|r| r.1))),
            }),
            Err(e) => {
                if !failed[i] {
                    failed[i] = true;
                    ctx.fail(EXIT_PARSE, format!("{}: {e}", instances[i].name));
                }
            }
        }
    }
    render(spec.format, &rows, &ABLATION_HEADER)
}

#[derive(Serialize)]
struct AlphaRow {
    instance: String,
    alpha: f64,
    repeats: usize,
    mean_objective: f64,
    mean_normalized: f64,
    mean_wall_ms: f64,
}

const ALPHA_HEADER: [&str; 6] = [
    "instance",
    "alpha",
    "repeats",
    "mean_objective",
    "mean_normalized",
    "mean_wall_ms",
];

fn run_alpha_grid(ctx: &mut Ctx, instances: &[Instance]) -> String {
    let spec = ctx.spec;
    let grid = alpha_grid();
    let mut rows = Vec::new();
    for inst in instances {
        let cells: Result<Vec<Vec<(u64, f64)>>> = grid
            .par_iter()
            .map(|&alpha| {
                let cfg = SolverConfig {
                    alpha,
                    ..spec.config
                };
                repeated(inst, cfg, spec.repeats)
            })
            .collect();
        let cells = match cells {
            Ok(c) => c,
            Err(e) => {
                ctx.fail(EXIT_PARSE, format!("{}: {e}", inst.name));
                continue;
            }
        };
        let pooled: Vec<f64> = cells.iter().flatten().map(|r| r.0 as f64).collect();
        let normalized = iqr_normalize(&pooled);
        for (c, (&alpha, runs)) in grid.iter().zip(&cells).enumerate() {
            let norm = &normalized[c * spec.repeats..(c + 1) * spec.repeats];
            rows.push(AlphaRow {
                instance: inst.name.clone(),
                alpha,
                repeats: runs.len(),
                mean_objective: mean(runs.iter().map(|r| r.0 as f64)),
                mean_normalized: mean(norm.iter().copied()),
                mean_wall_ms: ctx.wall(mean(runs.iter().map(|r| r.1))),
            });
        }
    }
    render(spec.format, &rows, &ALPHA_HEADER)
}
