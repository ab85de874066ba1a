use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use mcts_maxsat::bench::{self, Format, GeneratedBatch, Mode, RunSpec, EXIT_USAGE};
use mcts_maxsat::{ExploitRule, GeneratorSpec, ProblemClass, RewardKind, SolverConfig};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Solve,
    Enumerate,
    OracleCheck,
    Ablation,
    AlphaGrid,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ClassArg {
    Auto,
    Maxsat,
    Wmaxsat,
    Pms,
    Wpms,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum RewardArg {
    Terminal,
    R1,
    R2,
    Mixed,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ExploitArg {
    Mean,
    Sig,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

/// Solve MaxSAT-family instances with Monte Carlo tree search.
#[derive(Debug, Parser)]
#[command(version)]
struct Args {
    /// Instance files or directories of .cnf / .wcnf files.
    inputs: Vec<PathBuf>,

    #[arg(long, value_enum, default_value = "solve")]
    mode: ModeArg,

    #[arg(long, value_enum, default_value = "auto")]
    class: ClassArg,

    /// Episodes per decision level, as a multiple of the clause count.
    #[arg(long, default_value_t = 7.0)]
    explore_factor: f64,

    #[arg(long, default_value_t = 0.9)]
    alpha: f64,

    #[arg(long, default_value_t = 1.0)]
    uct_c: f64,

    #[arg(long, value_enum, default_value = "terminal")]
    reward: RewardArg,

    #[arg(long, value_enum, default_value = "mean")]
    exploit: ExploitArg,

    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Use raw rewards in the UCT mean term instead of range-scaled ones.
    #[arg(long)]
    raw_uct: bool,

    /// Return the committed path even when a rollout found a better assignment.
    #[arg(long)]
    path_only: bool,

    /// Independent executions in enumerate mode.
    #[arg(long, default_value_t = 10)]
    executions: usize,

    /// Seeds per configuration in ablation and alpha-grid modes.
    #[arg(long, default_value_t = bench::DEFAULT_REPEATS)]
    repeats: usize,

    #[arg(long, default_value_t = mcts_maxsat::oracle::DEFAULT_MAX_VARS)]
    oracle_max_vars: usize,

    #[arg(long, value_enum, default_value = "json")]
    format: FormatArg,

    /// Write results here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,

    /// Report every wall time as 0 so output is byte-reproducible.
    #[arg(long)]
    no_timing: bool,

    /// Generate this many random instances in addition to the inputs.
    #[arg(long, default_value_t = 0)]
    gen_count: usize,

    #[arg(long, default_value_t = 10)]
    gen_vars: usize,

    #[arg(long, default_value_t = 30)]
    gen_clauses: usize,

    #[arg(long, default_value_t = 3)]
    gen_clause_len: usize,

    #[arg(long)]
    gen_weighted: bool,

    #[arg(long, default_value_t = 0)]
    gen_hard: usize,

    #[arg(long, default_value_t = 1)]
    gen_seed: u64,
}

impl Args {
    fn into_spec(self) -> (RunSpec, Option<PathBuf>) {
        let config = SolverConfig {
            explore_factor: self.explore_factor,
            alpha: self.alpha,
            uct_c: self.uct_c,
            reward: match self.reward {
                RewardArg::Terminal => RewardKind::Terminal,
                RewardArg::R1 => RewardKind::IncrementWeighted,
                RewardArg::R2 => RewardKind::PrefixWeighted,
                RewardArg::Mixed => RewardKind::Mixed,
            },
            exploit_rule: match self.exploit {
                ExploitArg::Mean => ExploitRule::MeanQ,
                ExploitArg::Sig => ExploitRule::Significance,
            },
            seed: self.seed,
            normalize_uct: !self.raw_uct,
            keep_best: !self.path_only,
        };
        let generate = (self.gen_count > 0).then_some(GeneratedBatch {
            spec: GeneratorSpec {
                num_vars: self.gen_vars,
                num_clauses: self.gen_clauses,
                clause_len: self.gen_clause_len,
                weighted: self.gen_weighted,
                hard_count: self.gen_hard,
                seed: self.gen_seed,
            },
            count: self.gen_count,
        });
        let spec = RunSpec {
            inputs: self.inputs,
            generate,
            mode: match self.mode {
                ModeArg::Solve => Mode::Solve,
                ModeArg::Enumerate => Mode::Enumerate,
                ModeArg::OracleCheck => Mode::OracleCheck,
                ModeArg::Ablation => Mode::Ablation,
                ModeArg::AlphaGrid => Mode::AlphaGrid,
            },
            class: match self.class {
                ClassArg::Auto => None,
                ClassArg::Maxsat => Some(ProblemClass::MaxSat),
                ClassArg::Wmaxsat => Some(ProblemClass::WeightedMaxSat),
                ClassArg::Pms => Some(ProblemClass::PartialMaxSat),
                ClassArg::Wpms => Some(ProblemClass::WeightedPartialMaxSat),
            },
            config,
            executions: self.executions,
            repeats: self.repeats,
            oracle_max_vars: self.oracle_max_vars,
            format: match self.format {
                FormatArg::Json => Format::Json,
                FormatArg::Csv => Format::Csv,
            },
            no_timing: self.no_timing,
        };
        (spec, self.out)
    }
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE as u8)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let (spec, out) = args.into_spec();
    if spec.inputs.is_empty() && spec.generate.is_none() {
        eprintln!("error: no instances given (pass files, directories or --gen-count)");
        return ExitCode::from(EXIT_USAGE as u8);
    }
    let output = match bench::run(&spec) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE as u8);
        }
    };
    for d in &output.diagnostics {
        eprintln!("{d}");
    }
    match out {
        Some(path) => {
            if let Err(e) = fs::write(&path, &output.body) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(EXIT_USAGE as u8);
            }
        }
        None => print!("{}", output.body),
    }
    ExitCode::from(output.exit_code as u8)
}
