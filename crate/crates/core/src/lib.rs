//! MaxSAT, weighted MaxSAT and (weighted) partial MaxSAT solved as one binary
//! linear program, searched with Monte Carlo tree search.
//!
//! Typical use: parse an instance with [`parse_dimacs`], then call [`solve`]
//! with a [`SolverConfig`]. Small instances can be checked against
//! [`brute_force`].

pub mod bench;
pub mod blp;
pub mod budget;
pub mod dimacs;
pub mod enumerate;
pub mod error;
pub mod formula;
pub mod mcts;
pub mod oracle;
pub mod record;
pub mod rl;

pub use blp::{objective, to_blp, to_tableaux, BlpProblem, Evaluation, SatTableaux};
pub use budget::{theory_budgets, TheoryBudgets};
pub use dimacs::{parse_cnf, parse_dimacs, parse_wcnf, write_cnf, write_dimacs, write_wcnf};
pub use enumerate::{enumerate, EnumerationReport};
pub use error::{Error, ParseError, Result};
pub use formula::{classify, generate_random, Clause, Formula, GeneratorSpec, Literal, ProblemClass};
pub use mcts::{solve, solve_with_observer, ExploitRule, SolveResult, SolverConfig};
pub use oracle::{brute_force, OracleResult};
pub use record::{parse_result, write_result, ResultRecord};
pub use rl::{Action, RewardKind, State};
