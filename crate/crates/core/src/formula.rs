//! Weighted clause sets and the four problem classes they can express.

use std::fmt;
use std::str::FromStr;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A variable or its negation. Variables are 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Literal {
    pub var: usize,
    pub negated: bool,
}

impl Literal {
    pub fn pos(var: usize) -> Self {
        Literal {
            var,
            negated: false,
        }
    }

    pub fn neg(var: usize) -> Self {
        Literal { var, negated: true }
    }

    /// Builds a literal from a signed DIMACS integer. Returns `None` for 0.
    pub fn from_dimacs(value: i64) -> Option<Self> {
        if value == 0 {
            return None;
        }
        Some(Literal {
            var: value.unsigned_abs() as usize,
            negated: value < 0,
        })
    }

    pub fn to_dimacs(self) -> i64 {
        if self.negated {
            -(self.var as i64)
        } else {
            self.var as i64
        }
    }

    /// Whether this literal is true when its variable takes `value` (0 or 1).
    #[inline]
    pub fn satisfied_by(self, value: u8) -> bool {
        (value == 1) != self.negated
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Clause {
    pub literals: Vec<Literal>,
    pub weight: u64,
    pub hard: bool,
}

impl Clause {
    /// An unweighted soft clause from DIMACS integers.
    pub fn from_dimacs(lits: &[i64]) -> Self {
        Clause {
            literals: lits.iter().filter_map(|&l| Literal::from_dimacs(l)).collect(),
            weight: 1,
            hard: false,
        }
    }

    pub fn weighted(lits: &[i64], weight: u64) -> Self {
        Clause {
            weight,
            ..Clause::from_dimacs(lits)
        }
    }

    pub fn hard(lits: &[i64], weight: u64) -> Self {
        Clause {
            weight,
            hard: true,
            ..Clause::from_dimacs(lits)
        }
    }

    /// Direct literal walk over a full 0/1 assignment (index 0 holds variable 1).
    pub fn is_satisfied(&self, assignment: &[u8]) -> bool {
        self.literals
            .iter()
            .any(|lit| lit.satisfied_by(assignment[lit.var - 1]))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ProblemClass {
    #[serde(rename = "maxsat")]
    MaxSat,
    #[serde(rename = "wmaxsat")]
    WeightedMaxSat,
    #[serde(rename = "pms")]
    PartialMaxSat,
    #[serde(rename = "wpms")]
    WeightedPartialMaxSat,
}

impl ProblemClass {
    pub const ALL: [ProblemClass; 4] = [
        ProblemClass::MaxSat,
        ProblemClass::WeightedMaxSat,
        ProblemClass::PartialMaxSat,
        ProblemClass::WeightedPartialMaxSat,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ProblemClass::MaxSat => "maxsat",
            ProblemClass::WeightedMaxSat => "wmaxsat",
            ProblemClass::PartialMaxSat => "pms",
            ProblemClass::WeightedPartialMaxSat => "wpms",
        }
    }

    pub fn has_hard_clauses(self) -> bool {
        matches!(
            self,
            ProblemClass::PartialMaxSat | ProblemClass::WeightedPartialMaxSat
        )
    }
}

impl fmt::Display for ProblemClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ProblemClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "maxsat" => Ok(ProblemClass::MaxSat),
            "wmaxsat" => Ok(ProblemClass::WeightedMaxSat),
            "pms" => Ok(ProblemClass::PartialMaxSat),
            "wpms" => Ok(ProblemClass::WeightedPartialMaxSat),
            other => Err(Error::InvalidArgument(format!("unknown problem class '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Formula {
    pub num_vars: usize,
    pub clauses: Vec<Clause>,
    /// WCNF `top` weight; when present, a clause is hard iff its weight equals it.
    pub top_weight: Option<u64>,
    /// Class forced by the caller, overriding [`classify`].
    pub declared_class: Option<ProblemClass>,
}

impl Formula {
    pub fn new(num_vars: usize, clauses: Vec<Clause>) -> Self {
        Formula {
            num_vars,
            clauses,
            top_weight: None,
            declared_class: None,
        }
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    /// The declared class if any, else the structural classification.
    pub fn class(&self) -> ProblemClass {
        self.declared_class.unwrap_or_else(|| classify(self))
    }

    pub fn soft_weight_sum(&self) -> u64 {
        self.clauses
            .iter()
            .filter(|c| !c.hard)
            .map(|c| c.weight)
            .sum()
    }
}

/// Structural classification from hard marks and soft weights.
pub fn classify(f: &Formula) -> ProblemClass {
    let has_hard = f.clauses.iter().any(|c| c.hard);
    let unit_softs = f.clauses.iter().filter(|c| !c.hard).all(|c| c.weight == 1);
    match (has_hard, unit_softs) {
        (false, true) => ProblemClass::MaxSat,
        (false, false) => ProblemClass::WeightedMaxSat,
        (true, true) => ProblemClass::PartialMaxSat,
        (true, false) => ProblemClass::WeightedPartialMaxSat,
    }
}

/// True iff every hard clause outweighs all soft clauses together.
pub fn check_hard_weight_rule(f: &Formula) -> bool {
    let soft_sum = f.soft_weight_sum();
    f.clauses.iter().filter(|c| c.hard).all(|c| c.weight > soft_sum)
}

/// Parameters for [`generate_random`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GeneratorSpec {
    pub num_vars: usize,
    pub num_clauses: usize,
    pub clause_len: usize,
    pub weighted: bool,
    pub hard_count: usize,
    pub seed: u64,
}

pub const MAX_RANDOM_WEIGHT: u64 = 1000;

/// Random k-literal clauses over distinct variables, each literal negated with
/// probability 0.5. Weighted soft clauses draw weights uniformly from
/// `0..=1000`; hard clauses get `soft_sum + 1`, which is also recorded as top.
pub fn generate_random(spec: GeneratorSpec) -> Result<Formula> {
    let GeneratorSpec {
        num_vars,
        num_clauses,
        clause_len,
        weighted,
        hard_count,
        seed,
    } = spec;
    if num_vars == 0 || num_clauses == 0 {
        return Err(Error::InvalidArgument(
            "generator needs at least one variable and one clause".into(),
        ));
    }
    if clause_len == 0 || clause_len > num_vars {
        return Err(Error::InvalidArgument(format!(
            "clause length {clause_len} must be in 1..={num_vars}"
        )));
    }
    if hard_count > num_clauses {
        return Err(Error::InvalidArgument(format!(
            "hard clause count {hard_count} exceeds clause count {num_clauses}"
        )));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut clauses = Vec::with_capacity(num_clauses);
    for _ in 0..num_clauses {
        let literals = index::sample(&mut rng, num_vars, clause_len)
            .into_iter()
            .map(|v| Literal {
                var: v + 1,
                negated: rng.gen_bool(0.5),
            })
            .collect();
        let weight = if weighted {
            rng.gen_range(0..=MAX_RANDOM_WEIGHT)
        } else {
            1
        };
        clauses.push(Clause {
            literals,
            weight,
            hard: false,
        });
    }

    let mut top_weight = None;
    if hard_count > 0 {
        let hard_idx = index::sample(&mut rng, num_clauses, hard_count);
        for j in hard_idx.iter() {
            clauses[j].hard = true;
        }
        let soft_sum: u64 = clauses.iter().filter(|c| !c.hard).map(|c| c.weight).sum();
        let top = soft_sum + 1;
        for c in clauses.iter_mut().filter(|c| c.hard) {
            c.weight = top;
        }
        top_weight = Some(top);
    }

    Ok(Formula {
        num_vars,
        clauses,
        top_weight,
        declared_class: None,
    })
}
