//! The decision process over partial assignments: states, actions, random
//! episode completion and the episode reward definitions.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::blp::{to_blp, to_tableaux, SatTableaux};
use crate::error::{Error, Result};
use crate::formula::{Formula, ProblemClass};

/// Set variable `var` (1-based) to `value`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Action {
    pub var: usize,
    pub value: u8,
}

impl Action {
    pub fn new(var: usize, value: u8) -> Self {
        Action { var, value }
    }
}

/// A node of the assignment tree. `trail` keeps the order in which variables
/// were assigned, which the shaped rewards depend on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct State {
    pub tableaux: SatTableaux,
    pub depth: usize,
    trail: Vec<Action>,
}

impl State {
    pub fn num_vars(&self) -> usize {
        self.tableaux.num_vars()
    }

    pub fn trail(&self) -> &[Action] {
        &self.trail
    }

    /// The assignment as 0/1 values when complete.
    pub fn assignment(&self) -> Option<Vec<u8>> {
        self.tableaux.y.iter().copied().collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RewardKind {
    /// Objective of the completed assignment.
    #[default]
    #[serde(rename = "terminal")]
    Terminal,
    /// Σ_{i<n} (n-i)/n · (obj_{i+1} - obj_i).
    #[serde(rename = "r1")]
    IncrementWeighted,
    /// Σ_{i≤n} (n+1-i)/n · obj_i.
    #[serde(rename = "r2")]
    PrefixWeighted,
    /// 0.5 · PrefixWeighted + 0.5 · Terminal.
    #[serde(rename = "mixed")]
    Mixed,
}

impl RewardKind {
    pub const ALL: [RewardKind; 4] = [
        RewardKind::Terminal,
        RewardKind::IncrementWeighted,
        RewardKind::PrefixWeighted,
        RewardKind::Mixed,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            RewardKind::Terminal => "terminal",
            RewardKind::IncrementWeighted => "r1",
            RewardKind::PrefixWeighted => "r2",
            RewardKind::Mixed => "mixed",
        }
    }

    fn needs_prefix(self) -> bool {
        self != RewardKind::Terminal
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Episode {
    /// Each visited non-terminal state with the action taken from it.
    pub steps: Vec<(State, Action)>,
    /// Every assignment from the root in order, including the starting state's.
    pub trail: Vec<Action>,
    pub terminal_assignment: Vec<u8>,
}

pub fn initial_state(f: &Formula, class: ProblemClass) -> Result<(State, Vec<Action>)> {
    if f.num_vars == 0 {
        return Err(Error::NoVariables);
    }
    let tableaux = to_tableaux(&to_blp(f, class)?);
    let state = State {
        tableaux,
        depth: 0,
        trail: Vec::with_capacity(f.num_vars),
    };
    let actions = action_space(&state);
    Ok((state, actions))
}

/// Both values of every unassigned variable, in variable order (`1` first).
pub fn action_space(s: &State) -> Vec<Action> {
    s.tableaux
        .y
        .iter()
        .enumerate()
        .filter(|(_, v)| v.is_none())
        .flat_map(|(i, _)| [Action::new(i + 1, 1), Action::new(i + 1, 0)])
        .collect()
}

pub fn apply_action(s: &State, a: Action) -> Result<State> {
    let n = s.num_vars();
    if a.var == 0 || a.var > n || a.value > 1 {
        return Err(Error::VarOutOfRange {
            var: a.var,
            num_vars: n,
        });
    }
    if s.tableaux.y[a.var - 1].is_some() {
        return Err(Error::AlreadyAssigned { var: a.var });
    }
    let mut next = s.clone();
    next.tableaux.y[a.var - 1] = Some(a.value);
    next.depth += 1;
    next.trail.push(a);
    Ok(next)
}

pub fn is_terminal(s: &State) -> bool {
    s.depth == s.num_vars()
}

fn sample_action<R: Rng + ?Sized>(unassigned: &mut Vec<usize>, rng: &mut R) -> Action {
    let pick = rng.gen_range(0..2 * unassigned.len());
    let var = unassigned.swap_remove(pick / 2);
    Action::new(var + 1, if pick % 2 == 0 { 1 } else { 0 })
}

/// Completes `s` by drawing uniformly from the remaining actions at every step.
pub fn rollout<R: Rng + ?Sized>(s: &State, rng: &mut R) -> Episode {
    let mut unassigned: Vec<usize> = s
        .tableaux
        .y
        .iter()
        .enumerate()
        .filter(|(_, v)| v.is_none())
        .map(|(i, _)| i)
        .collect();
    let mut steps = Vec::with_capacity(unassigned.len());
    let mut current = s.clone();
    while !unassigned.is_empty() {
        let a = sample_action(&mut unassigned, rng);
        let next = apply_action(&current, a).expect("sampled action is unassigned");
        steps.push((std::mem::replace(&mut current, next), a));
    }
    let terminal_assignment = current.assignment().expect("rollout ends terminal");
    Episode {
        steps,
        trail: current.trail,
        terminal_assignment,
    }
}

/// Reward from `objs[i-1] = cᵀy_i`, the objective after the first `i` assignments.
pub fn reward_from_objectives(objs: &[u64], kind: RewardKind) -> f64 {
    let n = objs.len();
    if n == 0 {
        return 0.0;
    }
    let nf = n as f64;
    match kind {
        RewardKind::Terminal => objs[n - 1] as f64,
        RewardKind::IncrementWeighted => (1..n)
            .map(|i| (n - i) as f64 / nf * (objs[i] as f64 - objs[i - 1] as f64))
            .sum(),
        RewardKind::PrefixWeighted => (1..=n)
            .map(|i| (n + 1 - i) as f64 / nf * objs[i - 1] as f64)
            .sum(),
        RewardKind::Mixed => {
            0.5 * reward_from_objectives(objs, RewardKind::PrefixWeighted)
                + 0.5 * reward_from_objectives(objs, RewardKind::Terminal)
        }
    }
}

pub fn episode_reward(
    e: &Episode,
    f: &Formula,
    class: ProblemClass,
    kind: RewardKind,
) -> Result<f64> {
    if e.trail.len() != f.num_vars || e.terminal_assignment.len() != f.num_vars {
        return Err(Error::IncompleteEpisode {
            assigned: e.trail.len(),
            num_vars: f.num_vars,
        });
    }
    let sim = Simulator::new(f, class)?;
    Ok(reward_from_objectives(&sim.trail_objectives(&e.trail), kind))
}

/// Clause bookkeeping for fast episode evaluation.
///
/// A clause counts as satisfied once an assigned literal makes it true; clauses
/// not yet decided count 0. After the last assignment this is the objective.
#[derive(Debug, Clone)]
pub struct Simulator {
    num_vars: usize,
    weights: Vec<u64>,
    /// Per variable (0-based): `(clause, value that satisfies the literal)`.
    occurrences: Vec<Vec<(usize, u8)>>,
}

/// Clause status after the assignments of one state.
#[derive(Debug, Clone)]
pub struct PartialEval {
    satisfied: Vec<bool>,
    /// 0 for unassigned variables.
    values: Vec<u8>,
    objective: u64,
    prefix: Vec<u64>,
    unassigned: Vec<usize>,
}

impl RolloutBuffers {
    /// The complete assignment reached by the last rollout.
    pub fn assignment(&self) -> &[u8] {
        &self.values
    }
}

impl PartialEval {
    pub fn objective(&self) -> u64 {
        self.objective
    }

    pub fn prefix_objectives(&self) -> &[u64] {
        &self.prefix
    }
}

/// Reusable buffers for [`Simulator::rollout_reward`].
#[derive(Debug, Default, Clone)]
pub struct RolloutBuffers {
    satisfied: Vec<bool>,
    values: Vec<u8>,
    prefix: Vec<u64>,
    unassigned: Vec<usize>,
}

impl Simulator {
    pub fn new(f: &Formula, class: ProblemClass) -> Result<Self> {
        let weights = to_blp(f, class)?.weights;
        let mut occurrences = vec![Vec::new(); f.num_vars];
        for (j, clause) in f.clauses.iter().enumerate() {
            for lit in &clause.literals {
                let value = u8::from(!lit.negated);
                let occ = &mut occurrences[lit.var - 1];
                if !occ.contains(&(j, value)) {
                    occ.push((j, value));
                }
            }
        }
        Ok(Simulator {
            num_vars: f.num_vars,
            weights,
            occurrences,
        })
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn total_weight(&self) -> u64 {
        self.weights.iter().sum()
    }

    #[inline]
    fn assign(&self, satisfied: &mut [bool], objective: &mut u64, a: Action) {
        for &(j, value) in &self.occurrences[a.var - 1] {
            if value == a.value && !satisfied[j] {
                satisfied[j] = true;
                *objective += self.weights[j];
            }
        }
    }

    /// `cᵀy_i` after each prefix of `trail`.
    pub fn trail_objectives(&self, trail: &[Action]) -> Vec<u64> {
        self.partial(trail).prefix
    }

    pub fn partial(&self, trail: &[Action]) -> PartialEval {
        let mut satisfied = vec![false; self.weights.len()];
        let mut objective = 0;
        let mut prefix = Vec::with_capacity(self.num_vars);
        let mut assigned = vec![false; self.num_vars];
        let mut values = vec![0; self.num_vars];
        for &a in trail {
            self.assign(&mut satisfied, &mut objective, a);
            prefix.push(objective);
            assigned[a.var - 1] = true;
            values[a.var - 1] = a.value;
        }
        let unassigned = (0..self.num_vars).filter(|&i| !assigned[i]).collect();
        PartialEval {
            satisfied,
            values,
            objective,
            prefix,
            unassigned,
        }
    }

    pub fn state_eval(&self, s: &State) -> PartialEval {
        self.partial(&s.trail)
    }

    /// Applies `first` (if any) on top of `base`, completes uniformly at random
    /// and returns `(reward, terminal objective)`.
    pub fn rollout_reward<R: Rng + ?Sized>(
        &self,
        base: &PartialEval,
        first: Option<Action>,
        kind: RewardKind,
        rng: &mut R,
        buf: &mut RolloutBuffers,
    ) -> (f64, u64) {
        buf.satisfied.clear();
        buf.satisfied.extend_from_slice(&base.satisfied);
        buf.values.clear();
        buf.values.extend_from_slice(&base.values);
        buf.unassigned.clear();
        buf.unassigned.extend_from_slice(&base.unassigned);
        let track = kind.needs_prefix();
        buf.prefix.clear();
        if track {
            buf.prefix.extend_from_slice(&base.prefix);
        }
        let mut objective = base.objective;

        if let Some(a) = first {
            let pos = buf
                .unassigned
                .iter()
                .position(|&v| v + 1 == a.var)
                .expect("first action must be unassigned");
            buf.unassigned.swap_remove(pos);
            buf.values[a.var - 1] = a.value;
            self.assign(&mut buf.satisfied, &mut objective, a);
            if track {
                buf.prefix.push(objective);
            }
        }
        while !buf.unassigned.is_empty() {
            let a = sample_action(&mut buf.unassigned, rng);
            buf.values[a.var - 1] = a.value;
            self.assign(&mut buf.satisfied, &mut objective, a);
            if track {
                buf.prefix.push(objective);
            }
        }
        let reward = if track {
            reward_from_objectives(&buf.prefix, kind)
        } else {
            objective as f64
        };
        (reward, objective)
    }
}
