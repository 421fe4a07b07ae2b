//! Closed-loop Monte Carlo tree search with a polynomial bonus at every node.
//!
//! Each in-tree node is a bandit over its actions; children are keyed by the
//! sampled successor state. A new node counts one visit for its expansion and
//! starts with empty action statistics, so at every node
//! `visits = 1 + Σ pulls`.

use std::collections::HashMap;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bandit::ArmStats;
use crate::env::Mdp;
use crate::harness::{derive_seed, stream_rng, Stream};
use crate::policy::{select_arm, validate_params, ExplorationParams, ParamViolation, ValidationMode, TIE_TOLERANCE};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SearchError {
    #[error("search started from a terminal state")]
    TerminalRoot,
    #[error("root state has no actions")]
    NoActions,
    #[error("invalid search configuration: {0}")]
    InvalidConfig(String),
    #[error("invalid exploration parameters: {0:?}")]
    Params(Vec<ParamViolation>),
}

/// How the root action is chosen once the simulations are spent.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Recommendation {
    /// Highest empirical mean, ties broken at random.
    #[default]
    EmpiricalMean,
    /// Most pulls, ties broken at random.
    MostVisits,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub simulations: u64,
    /// Horizon of one simulation, tree and rollout steps together.
    pub max_depth: usize,
    pub params: ExplorationParams,
    /// Optional extra cap on rollout length.
    pub rollout_depth: Option<usize>,
    pub recommendation: Recommendation,
}

impl SearchConfig {
    pub fn new(simulations: u64, max_depth: usize) -> Self {
        Self {
            simulations,
            max_depth,
            params: ExplorationParams::practical(),
            rollout_depth: None,
            recommendation: Recommendation::EmpiricalMean,
        }
    }

    pub fn with_params(mut self, params: ExplorationParams) -> Self {
        self.params = params;
        self
    }

    pub fn with_recommendation(mut self, recommendation: Recommendation) -> Self {
        self.recommendation = recommendation;
        self
    }

    pub fn validate(&self) -> Result<(), SearchError> {
        if self.simulations == 0 {
            return Err(SearchError::InvalidConfig("simulations must be at least 1".into()));
        }
        if self.max_depth == 0 {
            return Err(SearchError::InvalidConfig("max_depth must be at least 1".into()));
        }
        validate_params(&self.params, ValidationMode::Practical).map_err(SearchError::Params)
    }
}

#[derive(Debug, Clone)]
pub struct TreeNode<S, A> {
    pub state: S,
    pub visits: u64,
    pub actions: Vec<A>,
    pub stats: Vec<ArmStats>,
    pub children: Vec<HashMap<S, usize>>,
}

impl<S, A> TreeNode<S, A> {
    pub fn pulls(&self) -> u64 {
        self.stats.iter().map(ArmStats::pulls).sum()
    }
}

/// Arena of nodes, root at index 0.
#[derive(Debug, Clone)]
pub struct Tree<S, A> {
    nodes: Vec<TreeNode<S, A>>,
}

impl<S: Clone + Eq + std::hash::Hash, A: Copy> Tree<S, A> {
    pub fn new<M: Mdp<State = S, Action = A>>(mdp: &M, root: S) -> Self {
        let mut tree = Self { nodes: Vec::new() };
        tree.add_node(mdp, root);
        tree
    }

    fn add_node<M: Mdp<State = S, Action = A>>(&mut self, mdp: &M, state: S) -> usize {
        let actions = mdp.actions(&state);
        let k = actions.len();
        self.nodes.push(TreeNode {
            state,
            visits: 1,
            actions,
            stats: vec![ArmStats::new(); k],
            children: vec![HashMap::new(); k],
        });
        self.nodes.len() - 1
    }

    pub fn root(&self) -> &TreeNode<S, A> {
        &self.nodes[0]
    }

    pub fn nodes(&self) -> &[TreeNode<S, A>] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// The selection, transition and rollout streams of one search.
#[derive(Debug, Clone)]
pub struct SearchRng {
    pub selection: ChaCha8Rng,
    pub transition: ChaCha8Rng,
    pub rollout: ChaCha8Rng,
}

impl SearchRng {
    pub fn new(seed: u64) -> Self {
        Self {
            selection: stream_rng(seed, Stream::Selection),
            transition: stream_rng(seed, Stream::Transition),
            rollout: stream_rng(seed, Stream::Rollout),
        }
    }
}

/// Largest magnitude a return over `depth` steps can take.
pub fn return_bound(reward_bound: f64, gamma: f64, depth: usize) -> f64 {
    if gamma == 1.0 {
        reward_bound * depth as f64
    } else {
        reward_bound * (1.0 - gamma.powi(depth as i32)) / (1.0 - gamma)
    }
}

/// Uniform-random playout of at most `depth_budget` steps, returning
/// `Σ γ^k r_k` from `state`.
pub fn rollout<M: Mdp, R: Rng + ?Sized>(mdp: &M, state: &M::State, depth_budget: usize, rng: &mut R) -> f64 {
    let gamma = mdp.discount();
    let mut state = state.clone();
    let mut total = 0.0;
    let mut weight = 1.0;
    for _ in 0..depth_budget {
        if mdp.is_terminal(&state) {
            break;
        }
        let actions = mdp.actions(&state);
        if actions.is_empty() {
            break;
        }
        let action = actions[rng.gen_range(0..actions.len())];
        let step = mdp.step(&state, action, rng);
        total += weight * step.reward;
        weight *= gamma;
        if step.terminal {
            break;
        }
        state = step.next;
    }
    total
}

/// One selection-expansion-rollout-backup pass; returns the discounted
/// return seen from the root.
pub fn simulate_once<M: Mdp>(
    tree: &mut Tree<M::State, M::Action>,
    mdp: &M,
    config: &SearchConfig,
    rng: &mut SearchRng,
) -> f64 {
    let gamma = mdp.discount();
    let mut path: Vec<(usize, usize, f64)> = Vec::new();
    let mut id = 0;
    let mut depth = 0;
    let tail = loop {
        let node = &tree.nodes[id];
        if node.actions.is_empty() {
            break 0.0;
        }
        let t = 1 + node.pulls();
        let a = select_arm(&node.stats, t, &config.params, &mut rng.selection).expect("node has actions");
        let step = mdp.step(&node.state, node.actions[a], &mut rng.transition);
        path.push((id, a, step.reward));
        tree.nodes[id].visits += 1;
        depth += 1;
        if step.terminal || depth >= config.max_depth {
            break 0.0;
        }
        match tree.nodes[id].children[a].get(&step.next) {
            Some(&child) => id = child,
            None => {
                let budget = (config.max_depth - depth).min(config.rollout_depth.unwrap_or(usize::MAX));
                let value = rollout(mdp, &step.next, budget, &mut rng.rollout);
                let child = tree.add_node(mdp, step.next.clone());
                tree.nodes[id].children[a].insert(step.next, child);
                break value;
            }
        }
    };
    let mut g = tail;
    for (remaining, &(node, a, reward)) in path.iter().rev().enumerate() {
        g = reward + gamma * g;
        debug_assert!(
            g.abs() <= return_bound(mdp.reward_bound(), gamma, config.max_depth) * (1.0 + 1e-12),
            "return {g} exceeds bound at path position {remaining}"
        );
        tree.nodes[node].stats[a].push(g);
    }
    g
}

/// Root statistics and recommendation of one search.
#[derive(Debug, Clone)]
pub struct SearchResult<A> {
    pub action: A,
    pub action_index: usize,
    pub actions: Vec<A>,
    pub root_stats: Vec<ArmStats>,
    /// Empirical mean of the recommended action.
    pub value: f64,
    pub tree_size: usize,
}

impl<A> SearchResult<A> {
    pub fn means(&self) -> Vec<Option<f64>> {
        self.root_stats.iter().map(ArmStats::mean).collect()
    }
}

fn recommend<R: Rng + ?Sized>(stats: &[ArmStats], rule: Recommendation, rng: &mut R) -> usize {
    let score = |s: &ArmStats| match rule {
        Recommendation::EmpiricalMean => s.mean().unwrap_or(f64::NEG_INFINITY),
        Recommendation::MostVisits => s.pulls() as f64,
    };
    let best = stats.iter().map(score).fold(f64::NEG_INFINITY, f64::max);
    let tied: Vec<usize> = (0..stats.len())
        .filter(|&i| score(&stats[i]) >= best - TIE_TOLERANCE)
        .collect();
    if tied.len() == 1 {
        tied[0]
    } else {
        tied[rng.gen_range(0..tied.len())]
    }
}

pub type SearchOutput<M> = (
    SearchResult<<M as Mdp>::Action>,
    Tree<<M as Mdp>::State, <M as Mdp>::Action>,
);

/// Builds a tree over `config.simulations` passes and returns it with the
/// result.
pub fn search_tree<M: Mdp>(
    mdp: &M,
    root: M::State,
    config: &SearchConfig,
    seed: u64,
) -> Result<SearchOutput<M>, SearchError> {
    config.validate()?;
    if mdp.is_terminal(&root) {
        return Err(SearchError::TerminalRoot);
    }
    let mut tree = Tree::new(mdp, root);
    if tree.root().actions.is_empty() {
        return Err(SearchError::NoActions);
    }
    let mut rng = SearchRng::new(seed);
    for _ in 0..config.simulations {
        simulate_once(&mut tree, mdp, config, &mut rng);
    }
    let root = tree.root();
    let index = recommend(&root.stats, config.recommendation, &mut rng.selection);
    let result = SearchResult {
        action: root.actions[index],
        action_index: index,
        actions: root.actions.clone(),
        root_stats: root.stats.clone(),
        value: root.stats[index].mean().unwrap_or(0.0),
        tree_size: tree.len(),
    };
    Ok((result, tree))
}

/// Searches from `root` and returns the recommendation with root statistics.
pub fn search<M: Mdp>(
    mdp: &M,
    root: M::State,
    config: &SearchConfig,
    seed: u64,
) -> Result<SearchResult<M::Action>, SearchError> {
    search_tree(mdp, root, config, seed).map(|(r, _)| r)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EpisodeOutcome {
    pub discounted_return: f64,
    pub steps: usize,
}

/// Plays one episode from the start state, replanning from scratch before
/// every real step.
///
/// Each search looks at most `min(config.max_depth, steps left)` ahead. Real
/// transitions come from a stream separate from the planner's.
pub fn run_episode<M: Mdp>(mdp: &M, config: &SearchConfig, episode_seed: u64) -> Result<EpisodeOutcome, SearchError> {
    config.validate()?;
    let gamma = mdp.discount();
    let limit = mdp.step_limit().unwrap_or(config.max_depth);
    let mut env_rng = stream_rng(episode_seed, Stream::Environment);
    let mut state = mdp.start();
    let mut total = 0.0;
    let mut weight = 1.0;
    let mut steps = 0;
    while steps < limit && !mdp.is_terminal(&state) {
        let mut step_config = *config;
        step_config.max_depth = config.max_depth.min(limit - steps);
        let result = search(
            mdp,
            state.clone(),
            &step_config,
            derive_seed(episode_seed, steps as u64),
        )?;
        let step = mdp.step(&state, result.action, &mut env_rng);
        total += weight * step.reward;
        weight *= gamma;
        steps += 1;
        if step.terminal {
            break;
        }
        state = step.next;
    }
    Ok(EpisodeOutcome {
        discounted_return: total,
        steps,
    })
}
