//! Reduction of a classified formula to a binary linear program.
//!
//! Each variable `x_i` maps to a 0/1 variable `y_i`, a negated literal to `1 - y_i`.
//! Clause `j` becomes the row `a_y[j] · y + b[j]`, where `b[j]` counts the negated
//! literals, and the clause holds iff that sum is at least 1. The objective is the
//! weighted count of satisfied clauses, with weights chosen per problem class so
//! that all four classes share one program.

use std::fmt::Write as _;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::formula::{Formula, ProblemClass};

/// One sparse constraint row: `(variable index (0-based), coefficient)`, sorted by
/// variable, zero coefficients removed.
pub type Row = Vec<(usize, i64)>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlpProblem {
    pub num_vars: usize,
    pub weights: Vec<u64>,
    pub rows: Vec<Row>,
    pub offsets: Vec<i64>,
}

/// Objective weight of every clause under the class rules:
/// MaxSAT all 1; weighted MaxSAT input weights; PMS soft 1 and hard as given;
/// WPMS everything as given.
pub fn class_weights(f: &Formula, class: ProblemClass) -> Vec<u64> {
    f.clauses
        .iter()
        .map(|c| match class {
            ProblemClass::MaxSat => 1,
            ProblemClass::WeightedMaxSat | ProblemClass::WeightedPartialMaxSat => c.weight,
            ProblemClass::PartialMaxSat => {
                if c.hard {
                    c.weight
                } else {
                    1
                }
            }
        })
        .collect()
}

fn check_dominance(f: &Formula, weights: &[u64]) -> Result<()> {
    let soft_sum: u64 = f
        .clauses
        .iter()
        .zip(weights)
        .filter(|(c, _)| !c.hard)
        .map(|(_, &w)| w)
        .sum();
    for (j, (c, &w)) in f.clauses.iter().zip(weights).enumerate() {
        if c.hard && w <= soft_sum {
            return Err(Error::HardDominance {
                clause: j,
                weight: w,
                soft_sum,
            });
        }
    }
    Ok(())
}

/// Builds `(w, A_y, b)`. Partial classes must satisfy hard-weight dominance.
pub fn to_blp(f: &Formula, class: ProblemClass) -> Result<BlpProblem> {
    let weights = class_weights(f, class);
    if class.has_hard_clauses() {
        check_dominance(f, &weights)?;
    }
    let mut rows = Vec::with_capacity(f.clauses.len());
    let mut offsets = Vec::with_capacity(f.clauses.len());
    for clause in &f.clauses {
        let mut row: Row = Vec::with_capacity(clause.literals.len());
        let mut negatives = 0i64;
        for lit in &clause.literals {
            let coeff = if lit.negated {
                negatives += 1;
                -1
            } else {
                1
            };
            row.push((lit.var - 1, coeff));
        }
        row.sort_unstable_by_key(|&(v, _)| v);
        let mut merged: Row = Vec::with_capacity(row.len());
        for (v, c) in row {
            match merged.last_mut() {
                Some((last, acc)) if *last == v => *acc += c,
                _ => merged.push((v, c)),
            }
        }
        merged.retain(|&(_, c)| c != 0);
        rows.push(merged);
        offsets.push(negatives);
    }
    Ok(BlpProblem {
        num_vars: f.num_vars,
        weights,
        rows,
        offsets,
    })
}

impl BlpProblem {
    pub fn num_clauses(&self) -> usize {
        self.rows.len()
    }

    /// Dense coefficient `a_y[j][i]` (0-based indices).
    pub fn coeff(&self, clause: usize, var: usize) -> i64 {
        self.rows[clause]
            .iter()
            .find(|&&(v, _)| v == var)
            .map_or(0, |&(_, c)| c)
    }

    /// `a_y[j] · y + b[j] >= 1` for a full 0/1 assignment.
    #[inline]
    pub fn clause_satisfied(&self, clause: usize, y: &[u8]) -> bool {
        let dot: i64 = self.rows[clause]
            .iter()
            .map(|&(v, c)| c * i64::from(y[v]))
            .sum();
        dot + self.offsets[clause] >= 1
    }

    /// Objective `Σ w_j z_j` without validation.
    pub fn value(&self, y: &[u8]) -> u64 {
        (0..self.rows.len())
            .filter(|&j| self.clause_satisfied(j, y))
            .map(|j| self.weights[j])
            .sum()
    }

    pub fn total_weight(&self) -> u64 {
        self.weights.iter().sum()
    }

    /// Plain-text `(w | A_y | b)` matrix, one clause per row.
    pub fn debug_dump(&self) -> String {
        let mut out = String::new();
        let _ = write!(out, "{:>8} |", "w");
        for i in 0..self.num_vars {
            let _ = write!(out, " {:>3}", format!("y{}", i + 1));
        }
        out.push_str(" | b\n");
        for j in 0..self.rows.len() {
            let _ = write!(out, "{:>8} |", self.weights[j]);
            for i in 0..self.num_vars {
                let _ = write!(out, " {:>3}", self.coeff(j, i));
            }
            let _ = writeln!(out, " | {}", self.offsets[j]);
        }
        out
    }
}

/// The search state layout: weights and coefficient rows shared between all
/// states of one search, plus the partial assignment (`None` = unassigned).
/// `b` and the clause indicators are not stored; both follow from the formula
/// and `y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SatTableaux {
    weights: Arc<[u64]>,
    rows: Arc<[Row]>,
    pub y: Vec<Option<u8>>,
}

pub fn to_tableaux(p: &BlpProblem) -> SatTableaux {
    SatTableaux {
        weights: p.weights.clone().into(),
        rows: p.rows.clone().into(),
        y: vec![None; p.num_vars],
    }
}

impl SatTableaux {
    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    pub fn num_vars(&self) -> usize {
        self.y.len()
    }

    pub fn assigned_count(&self) -> usize {
        self.y.iter().filter(|v| v.is_some()).count()
    }
}

/// Evaluation of a full assignment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Evaluation {
    pub value: u64,
    pub satisfied: Vec<bool>,
    /// Indices of hard clauses left unsatisfied.
    pub hard_violations: Vec<usize>,
}

pub fn validate_assignment(num_vars: usize, y: &[u8]) -> Result<()> {
    if y.len() != num_vars {
        return Err(Error::AssignmentLength {
            expected: num_vars,
            found: y.len(),
        });
    }
    if let Some((index, &value)) = y.iter().enumerate().find(|(_, &v)| v > 1) {
        return Err(Error::AssignmentValue { index, value });
    }
    Ok(())
}

/// Class-weighted objective of a full assignment, evaluated through the BLP rows.
pub fn objective(f: &Formula, class: ProblemClass, y: &[u8]) -> Result<Evaluation> {
    validate_assignment(f.num_vars, y)?;
    let p = to_blp(f, class)?;
    Ok(evaluate(&p, f, y))
}

/// Like [`objective`] but with a prebuilt program; `y` must already be valid.
pub fn evaluate(p: &BlpProblem, f: &Formula, y: &[u8]) -> Evaluation {
    let satisfied: Vec<bool> = (0..p.num_clauses())
        .map(|j| p.clause_satisfied(j, y))
        .collect();
    let value = satisfied
        .iter()
        .zip(&p.weights)
        .filter(|(s, _)| **s)
        .map(|(_, &w)| w)
        .sum();
    let hard_violations = f
        .clauses
        .iter()
        .zip(&satisfied)
        .enumerate()
        .filter(|(_, (c, s))| c.hard && !**s)
        .map(|(j, _)| j)
        .collect();
    Evaluation {
        value,
        satisfied,
        hard_violations,
    }
}
