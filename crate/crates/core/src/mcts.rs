//! Level-by-level Monte Carlo tree search over variable assignments.
//!
//! At every decision level the current state gets one child per remaining
//! action. Each child is rolled out once, the rest of the level budget goes to
//! children drawn uniformly from those whose UCT value clears a soft-max
//! threshold, and finally one child is committed by the exploitation rule.

use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::blp::{evaluate, to_blp};
use crate::error::{Error, Result};
use crate::formula::{Formula, ProblemClass};
use crate::rl::{
    action_space, apply_action, initial_state, is_terminal, Action, RewardKind, RolloutBuffers,
    Simulator, State,
};

pub type NodeId = usize;

#[derive(Debug, Clone)]
pub struct SearchNode {
    pub state: State,
    pub from_action: Option<Action>,
    pub parent: Option<NodeId>,
    pub children: Vec<NodeId>,
    /// Cumulative backed-up reward.
    pub q_sum: f64,
    pub visits: u64,
    /// Largest reward backed up through this node.
    pub r_max: f64,
    /// Smallest reward backed up through this node.
    pub r_min: f64,
}

impl SearchNode {
    fn new(state: State, from_action: Option<Action>, parent: Option<NodeId>) -> Self {
        SearchNode {
            state,
            from_action,
            parent,
            children: Vec::new(),
            q_sum: 0.0,
            visits: 0,
            r_max: f64::NEG_INFINITY,
            r_min: f64::INFINITY,
        }
    }

    pub fn mean(&self) -> f64 {
        self.q_sum / self.visits as f64
    }
}

/// Arena-backed tree; node 0 is the root.
#[derive(Debug, Clone)]
pub struct SearchTree {
    nodes: Vec<SearchNode>,
}

impl SearchTree {
    pub const ROOT: NodeId = 0;

    pub fn new(root: State) -> Self {
        SearchTree {
            nodes: vec![SearchNode::new(root, None, None)],
        }
    }

    pub fn add_child(&mut self, parent: NodeId, state: State, action: Action) -> NodeId {
        let id = self.nodes.len();
        self.nodes.push(SearchNode::new(state, Some(action), Some(parent)));
        self.nodes[parent].children.push(id);
        id
    }

    pub fn node(&self, id: NodeId) -> &SearchNode {
        &self.nodes[id]
    }

    pub fn root(&self) -> &SearchNode {
        &self.nodes[Self::ROOT]
    }

    pub fn children(&self, id: NodeId) -> &[NodeId] {
        &self.nodes[id].children
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    fn into_node(mut self, id: NodeId) -> SearchNode {
        self.nodes.swap_remove(id)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum ExploitRule {
    /// Highest empirical mean reward.
    #[default]
    #[serde(rename = "mean")]
    MeanQ,
    /// Highest max statistic after the significance operator and projection.
    #[serde(rename = "sig")]
    Significance,
}

impl ExploitRule {
    pub fn as_str(self) -> &'static str {
        match self {
            ExploitRule::MeanQ => "mean",
            ExploitRule::Significance => "sig",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    /// Per-level budget is `ceil(explore_factor * clauses)`.
    pub explore_factor: f64,
    pub alpha: f64,
    pub uct_c: f64,
    pub reward: RewardKind,
    pub exploit_rule: ExploitRule,
    pub seed: u64,
    /// Rescale child means by the parent's reward range before adding the
    /// exploration term, so one `uct_c` suits any clause weights.
    pub normalize_uct: bool,
    /// Return the best complete assignment sampled by any rollout when it
    /// beats the committed path.
    pub keep_best: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            explore_factor: 7.0,
            alpha: 0.9,
            uct_c: 1.0,
            reward: RewardKind::Terminal,
            exploit_rule: ExploitRule::MeanQ,
            seed: 0,
            normalize_uct: true,
            keep_best: true,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.alpha) {
            return Err(Error::InvalidArgument(format!(
                "alpha {} outside [0, 1]",
                self.alpha
            )));
        }
        if !(self.explore_factor > 0.0 && self.explore_factor.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "explore factor {} must be positive",
                self.explore_factor
            )));
        }
        if !(self.uct_c >= 0.0 && self.uct_c.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "UCT constant {} must be non-negative",
                self.uct_c
            )));
        }
        Ok(())
    }

    /// Episodes spent at a level offering `actions` choices.
    pub fn level_budget(&self, num_clauses: usize, actions: usize) -> u64 {
        let base = (self.explore_factor * num_clauses as f64).ceil() as u64;
        base.max(actions as u64 + 1)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SearchStats {
    pub episodes: u64,
    pub per_level: Vec<u64>,
    /// Best episode reward seen during the search.
    pub best_reward: f64,
    /// Best terminal objective reached by any rollout.
    pub best_sampled: u64,
    /// Whether the returned assignment came from a rollout rather than the
    /// committed path.
    pub from_rollout: bool,
    pub wall_ms: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveResult {
    pub assignment: Vec<u8>,
    pub objective: u64,
    pub satisfied_mask: Vec<bool>,
    pub hard_violations: Vec<usize>,
    pub stats: SearchStats,
}

impl SolveResult {
    pub fn satisfied_count(&self) -> usize {
        self.satisfied_mask.iter().filter(|&&s| s).count()
    }
}

/// `mean + c * sqrt(2 ln N_parent / N_child)`.
pub fn uct_value(parent: &SearchNode, child: &SearchNode, c: f64) -> f64 {
    assert!(
        parent.visits > 0 && child.visits > 0,
        "UCT needs visited nodes"
    );
    let n = child.visits as f64;
    child.q_sum / n + c * (2.0 * (parent.visits as f64).ln() / n).sqrt()
}

/// As [`uct_value`] with the mean rescaled to `[0, 1]` by the reward range
/// observed at the parent. A parent whose rollouts all scored the same gives
/// every child mean 0.
pub fn normalized_uct_value(parent: &SearchNode, child: &SearchNode, c: f64) -> f64 {
    assert!(
        parent.visits > 0 && child.visits > 0,
        "UCT needs visited nodes"
    );
    let n = child.visits as f64;
    let range = parent.r_max - parent.r_min;
    let mean = if range > 0.0 {
        (child.q_sum / n - parent.r_min) / range
    } else {
        0.0
    };
    mean + c * (2.0 * (parent.visits as f64).ln() / n).sqrt()
}

/// UCT value of every child of `v`, in child order.
pub fn uct_scores(tree: &SearchTree, v: NodeId, c: f64, normalize: bool) -> Result<Vec<f64>> {
    let children = tree.children(v);
    if children.is_empty() {
        return Err(Error::NoChildren);
    }
    let parent = tree.node(v);
    let f = if normalize {
        normalized_uct_value
    } else {
        uct_value
    };
    Ok(children.iter().map(|&ch| f(parent, tree.node(ch), c)).collect())
}

/// `(1 - alpha) * min + alpha * max`, evaluated as `min + alpha * (max - min)`
/// so that it never leaves `[min, max]`.
pub fn soft_threshold(values: &[f64], alpha: f64) -> Result<f64> {
    let (min, max) = values
        .iter()
        .fold(None, |acc: Option<(f64, f64)>, &v| match acc {
            None => Some((v, v)),
            Some((lo, hi)) => Some((lo.min(v), hi.max(v))),
        })
        .ok_or(Error::EmptyValues)?;
    Ok((min + alpha * (max - min)).clamp(min, max))
}

/// Children of `v` whose UCT value reaches the soft threshold.
pub fn exploration_candidates(
    tree: &SearchTree,
    v: NodeId,
    alpha: f64,
    c: f64,
    normalize: bool,
) -> Result<Vec<NodeId>> {
    let children = tree.children(v);
    let values = uct_scores(tree, v, c, normalize)?;
    let threshold = soft_threshold(&values, alpha)?;
    Ok(children
        .iter()
        .zip(&values)
        .filter(|(_, &u)| u >= threshold)
        .map(|(&ch, _)| ch)
        .collect())
}

pub fn select_exploration_child<R: Rng + ?Sized>(
    tree: &SearchTree,
    v: NodeId,
    cfg: &SolverConfig,
    rng: &mut R,
) -> Result<NodeId> {
    let eligible = exploration_candidates(tree, v, cfg.alpha, cfg.uct_c, cfg.normalize_uct)?;
    Ok(*eligible.choose(rng).expect("threshold is attained by the maximum"))
}

/// Adds `reward` to every node from `leaf` up to the root.
pub fn backup(tree: &mut SearchTree, leaf: NodeId, reward: f64) {
    let mut cursor = Some(leaf);
    while let Some(id) = cursor {
        let node = &mut tree.nodes[id];
        node.visits += 1;
        node.q_sum += reward;
        node.r_max = node.r_max.max(reward);
        node.r_min = node.r_min.min(reward);
        cursor = node.parent;
    }
}

/// 1-based position of each value in ascending order; equal values keep
/// their original order.
pub fn rank(values: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));
    let mut ranks = vec![0; values.len()];
    for (pos, idx) in order.into_iter().enumerate() {
        ranks[idx] = pos + 1;
    }
    ranks
}

/// Keeps a group's mean where its rank among means equals the rank of its
/// maximum among maxima, otherwise substitutes the maximum.
pub fn significance(means: &[f64], maxes: &[f64]) -> Result<Vec<f64>> {
    if means.len() != maxes.len() {
        return Err(Error::LengthMismatch {
            left: means.len(),
            right: maxes.len(),
        });
    }
    if means.is_empty() {
        return Err(Error::EmptyValues);
    }
    let mean_ranks = rank(means);
    let max_ranks = rank(maxes);
    Ok((0..means.len())
        .map(|k| {
            if mean_ranks[k] == max_ranks[k] {
                means[k]
            } else {
                maxes[k]
            }
        })
        .collect())
}

/// Projection of the significance output onto the max statistics: a kept mean
/// maps to its group's maximum, a substituted maximum stays as it is.
pub fn projected_significance(means: &[f64], maxes: &[f64]) -> Result<Vec<f64>> {
    let sig = significance(means, maxes)?;
    let mean_ranks = rank(means);
    let max_ranks = rank(maxes);
    Ok(sig
        .into_iter()
        .enumerate()
        .map(|(k, s)| if mean_ranks[k] == max_ranks[k] { maxes[k] } else { s })
        .collect())
}

fn argmax_uniform<R: Rng + ?Sized>(ids: &[NodeId], scores: &[f64], rng: &mut R) -> NodeId {
    let best = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let ties: Vec<NodeId> = ids
        .iter()
        .zip(scores)
        .filter(|(_, &s)| s == best)
        .map(|(&id, _)| id)
        .collect();
    *ties.choose(rng).expect("non-empty children")
}

pub fn select_best_child<R: Rng + ?Sized>(
    tree: &SearchTree,
    v: NodeId,
    rule: ExploitRule,
    rng: &mut R,
) -> Result<NodeId> {
    let children = tree.children(v);
    if children.is_empty() {
        return Err(Error::NoChildren);
    }
    let means: Vec<f64> = children.iter().map(|&c| tree.node(c).mean()).collect();
    let scores = match rule {
        ExploitRule::MeanQ => means,
        ExploitRule::Significance => {
            let maxes: Vec<f64> = children.iter().map(|&c| tree.node(c).r_max).collect();
            projected_significance(&means, &maxes)?
        }
    };
    Ok(argmax_uniform(children, &scores, rng))
}

/// Runs the search to a complete assignment.
pub fn solve(f: &Formula, class: ProblemClass, cfg: &SolverConfig) -> Result<SolveResult> {
    solve_with_observer(f, class, cfg, |_, _| {})
}

/// As [`solve`], calling `observer(level, tree)` after each level's episodes
/// and before its commitment.
pub fn solve_with_observer<F>(
    f: &Formula,
    class: ProblemClass,
    cfg: &SolverConfig,
    mut observer: F,
) -> Result<SolveResult>
where
    F: FnMut(usize, &SearchTree),
{
    cfg.validate()?;
    let started = Instant::now();
    let blp = to_blp(f, class)?;
    let sim = Simulator::new(f, class)?;
    let (mut state, _) = initial_state(f, class)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut buf = RolloutBuffers::default();
    let mut stats = SearchStats {
        best_reward: f64::NEG_INFINITY,
        ..SearchStats::default()
    };

    let mut best: Option<(u64, Vec<u8>)> = None;
    let mut note = |obj: u64, buf: &RolloutBuffers| {
        if best.as_ref().map_or(true, |b| obj > b.0) {
            best = Some((obj, buf.assignment().to_vec()));
        }
    };
    let mut level = 0;
    while !is_terminal(&state) {
        let actions = action_space(&state);
        let budget = cfg.level_budget(f.num_clauses(), actions.len());
        let base = sim.state_eval(&state);
        let mut tree = SearchTree::new(state);

        for &a in &actions {
            let child_state = apply_action(&tree.root().state, a)?;
            let id = tree.add_child(SearchTree::ROOT, child_state, a);
            let (reward, obj) = sim.rollout_reward(&base, Some(a), cfg.reward, &mut rng, &mut buf);
            note(obj, &buf);
            backup(&mut tree, id, reward);
        }
        for _ in actions.len() as u64..budget {
            let id = select_exploration_child(&tree, SearchTree::ROOT, cfg, &mut rng)?;
            let a = tree.node(id).from_action;
            let (reward, obj) = sim.rollout_reward(&base, a, cfg.reward, &mut rng, &mut buf);
            note(obj, &buf);
            backup(&mut tree, id, reward);
        }

        stats.episodes += budget;
        stats.per_level.push(budget);
        stats.best_reward = stats.best_reward.max(tree.root().r_max);
        observer(level, &tree);

        let best = select_best_child(&tree, SearchTree::ROOT, cfg.exploit_rule, &mut rng)?;
        state = tree.into_node(best).state;
        level += 1;
    }

    let mut assignment = state.assignment().expect("terminal state is complete");
    let mut eval = evaluate(&blp, f, &assignment);
    if let Some((obj, sampled)) = best {
        stats.best_sampled = obj;
        if cfg.keep_best && obj > eval.value {
            assignment = sampled;
            eval = evaluate(&blp, f, &assignment);
            stats.from_rollout = true;
        }
    }
    if stats.episodes == 0 {
        stats.best_reward = 0.0;
    }
    stats.wall_ms = started.elapsed().as_secs_f64() * 1000.0;
    Ok(SolveResult {
        assignment,
        objective: eval.value,
        satisfied_mask: eval.satisfied,
        hard_violations: eval.hard_violations,
        stats,
    })
}
