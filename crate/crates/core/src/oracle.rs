//! Exhaustive ground truth for small instances.

use crate::blp::to_blp;
use crate::error::{Error, Result};
use crate::formula::{Formula, ProblemClass};

pub const DEFAULT_MAX_VARS: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleResult {
    pub optimum: u64,
    /// Every assignment attaining `optimum`, in increasing binary order
    /// (variable 1 is the least significant bit).
    pub optimal_set: Vec<Vec<u8>>,
    /// Whether some assignment satisfies all hard clauses.
    pub hard_feasible: bool,
}

impl OracleResult {
    pub fn contains(&self, assignment: &[u8]) -> bool {
        self.optimal_set.binary_search_by(|probe| cmp_binary(probe, assignment)).is_ok()
    }
}

fn to_code(assignment: &[u8]) -> u64 {
    assignment
        .iter()
        .enumerate()
        .fold(0, |acc, (i, &b)| acc | (u64::from(b) << i))
}

fn cmp_binary(a: &[u8], b: &[u8]) -> std::cmp::Ordering {
    to_code(a).cmp(&to_code(b))
}

fn from_code(code: u64, n: usize) -> Vec<u8> {
    (0..n).map(|i| ((code >> i) & 1) as u8).collect()
}

/// Enumerates all `2^n` assignments in Gray-code order, updating per-clause
/// true-literal counts incrementally on every flip.
pub fn brute_force(f: &Formula, class: ProblemClass, max_vars: usize) -> Result<OracleResult> {
    let n = f.num_vars;
    if n > max_vars || n >= 63 {
        return Err(Error::OracleGuard {
            num_vars: n,
            max_vars,
        });
    }
    let weights = to_blp(f, class)?.weights;
    let m = f.clauses.len();

    // occurrences[i] = (clause, +1 if the literal is positive, -1 if negated)
    let mut occurrences: Vec<Vec<(usize, i32)>> = vec![Vec::new(); n];
    for (j, clause) in f.clauses.iter().enumerate() {
        for lit in &clause.literals {
            occurrences[lit.var - 1].push((j, if lit.negated { -1 } else { 1 }));
        }
    }
    let hard: Vec<bool> = f.clauses.iter().map(|c| c.hard).collect();

    // All-zero start: negated literals are true.
    let mut true_count: Vec<u32> = f
        .clauses
        .iter()
        .map(|c| c.literals.iter().filter(|l| l.negated).count() as u32)
        .collect();
    let mut value: u64 = (0..m).filter(|&j| true_count[j] > 0).map(|j| weights[j]).sum();
    let mut hard_unsat = (0..m).filter(|&j| hard[j] && true_count[j] == 0).count();

    let mut y = vec![0u8; n];
    let mut optimum = value;
    let mut optimal_codes = vec![0u64];
    let mut hard_feasible = hard_unsat == 0;

    for step in 1u64..(1u64 << n) {
        let var = step.trailing_zeros() as usize;
        y[var] ^= 1;
        let rising = y[var] == 1;
        for &(j, sign) in &occurrences[var] {
            let becomes_true = (sign > 0) == rising;
            if becomes_true {
                true_count[j] += 1;
                if true_count[j] == 1 {
                    value += weights[j];
                    if hard[j] {
                        hard_unsat -= 1;
                    }
                }
            } else {
                true_count[j] -= 1;
                if true_count[j] == 0 {
                    value -= weights[j];
                    if hard[j] {
                        hard_unsat += 1;
                    }
                }
            }
        }
        hard_feasible |= hard_unsat == 0;
        let code = step ^ (step >> 1);
        if value > optimum {
            optimum = value;
            optimal_codes.clear();
            optimal_codes.push(code);
        } else if value == optimum {
            optimal_codes.push(code);
        }
    }

    optimal_codes.sort_unstable();
    Ok(OracleResult {
        optimum,
        optimal_set: optimal_codes.into_iter().map(|c| from_code(c, n)).collect(),
        hard_feasible,
    })
}
