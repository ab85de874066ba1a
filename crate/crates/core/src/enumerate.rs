//! Collecting distinct optimal assignments over repeated independent searches.

use std::collections::BTreeSet;

use rayon::prelude::*;

use crate::error::Result;
use crate::formula::{Formula, ProblemClass};
use crate::mcts::{solve, SolveResult, SolverConfig};

#[derive(Debug, Clone, PartialEq)]
pub struct EnumerationReport {
    pub best_objective: u64,
    pub distinct_optima: BTreeSet<Vec<u8>>,
    /// `(execution, distinct optima found so far)`, executions counted from 1.
    pub discovery_curve: Vec<(usize, usize)>,
    pub executions: usize,
}

/// SplitMix64 finalizer.
pub fn split_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed.wrapping_add(index.wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Runs `n_exe` independent solves and keeps the assignments reaching the best
/// objective seen. Executions may run in parallel; the report only depends on
/// execution order.
pub fn enumerate(
    f: &Formula,
    class: ProblemClass,
    cfg: &SolverConfig,
    n_exe: usize,
) -> Result<EnumerationReport> {
    let runs: Vec<SolveResult> = (0..n_exe)
        .into_par_iter()
        .map(|i| {
            let run_cfg = SolverConfig {
                seed: split_seed(cfg.seed, i as u64),
                ..*cfg
            };
            solve(f, class, &run_cfg)
        })
        .collect::<Result<_>>()?;
    Ok(merge_runs(runs.iter().map(|r| (r.objective, r.assignment.as_slice()))))
}

/// Builds the report from per-execution `(objective, assignment)` in order.
///
/// When a later execution improves the objective, earlier assignments are
/// dropped and the curve is rewritten as if counting restarted there, so it
/// stays non-decreasing and ends at the number of distinct optima.
pub fn merge_runs<'a, I>(runs: I) -> EnumerationReport
where
    I: IntoIterator<Item = (u64, &'a [u8])>,
{
    let mut best: Option<u64> = None;
    let mut distinct = BTreeSet::new();
    let mut curve: Vec<(usize, usize)> = Vec::new();
    for (i, (objective, assignment)) in runs.into_iter().enumerate() {
        match best {
            Some(b) if objective < b => {}
            Some(b) if objective == b => {
                distinct.insert(assignment.to_vec());
            }
            _ => {
                best = Some(objective);
                distinct.clear();
                distinct.insert(assignment.to_vec());
                for point in curve.iter_mut() {
                    point.1 = 0;
                }
            }
        }
        curve.push((i + 1, distinct.len()));
    }
    EnumerationReport {
        best_objective: best.unwrap_or(0),
        executions: curve.len(),
        distinct_optima: distinct,
        discovery_curve: curve,
    }
}

/// `execution,distinct_count` rows with a header.
pub fn curve_csv(report: &EnumerationReport) -> String {
    let mut out = String::from("execution,distinct_count\n");
    for (e, c) in &report.discovery_curve {
        out.push_str(&format!("{e},{c}\n"));
    }
    out
}
