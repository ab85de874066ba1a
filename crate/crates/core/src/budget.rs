//! Closed-form lower bounds on the search effort needed by the convergence
//! arguments for the uniform (alpha = 0) exploration policy.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TheoryBudgets {
    /// Root explorations so that a fixed assignment is sampled with
    /// probability at least `1 - epsilon`.
    pub explore_bound: u64,
    /// Root explorations so that every child is revisited in the second
    /// phase with probability at least `1 - delta1`.
    pub child_visit_bound: u64,
    /// Executions so that all `num_optima` optima are found with probability
    /// at least `1 - epsilon`.
    pub execution_bound: u64,
}

fn ceil_u64(x: f64) -> u64 {
    x.ceil() as u64
}

pub fn theory_budgets(
    n: usize,
    epsilon: f64,
    delta1: f64,
    num_optima: usize,
) -> Result<TheoryBudgets> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "epsilon {epsilon} outside (0, 1)"
        )));
    }
    if !(delta1 > 0.0 && delta1 < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "delta1 {delta1} outside (0, 1)"
        )));
    }
    if num_optima == 0 {
        return Err(Error::InvalidArgument("num_optima must be at least 1".into()));
    }

    // ln(1 + 1/(2^n - 1)) = -ln(1 - 2^-n)
    let leaf_p = 0.5f64.powi(n.min(i32::MAX as usize) as i32);
    let explore_bound = ceil_u64((1.0 / epsilon).ln() / -(-leaf_p).ln_1p());

    let actions = 2 * n as u64;
    let child_visit_bound =
        ceil_u64((1.0 / delta1).ln() / (1.0 / (actions as f64 - 1.0)).ln_1p()) + actions;

    let execution_bound = if num_optima == 1 {
        1
    } else {
        let s = num_optima as f64;
        ceil_u64((s / epsilon).ln() / (s / (s - 1.0)).ln())
    };

    Ok(TheoryBudgets {
        explore_bound,
        child_visit_bound,
        execution_bound,
    })
}
