//! Environments for the planner and exhaustive transition models for the
//! value-iteration oracle.

mod chain;
mod grid;
mod value_iteration;

use std::collections::HashMap;
use std::fmt::Debug;
use std::hash::Hash;

use rand::Rng;
use thiserror::Error;

pub use chain::{ChainMdp, ChainMove};
pub use grid::{
    frozen_lake_4x4, Cell, FrozenLake, GridSpec, Move, DEFAULT_STEP_LIMIT, FROZEN_LAKE_DISCOUNT, STANDARD_4X4,
};
pub use value_iteration::{finite_horizon_values, value_iteration, ValueSolution};

/// Probability-sum tolerance of an enumerated `(state, action)` pair.
pub const OUTCOME_SUM_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EnvError {
    #[error("invalid map: {0}")]
    InvalidMap(String),
    #[error("environment `{0}` has no explicit transition model")]
    Unsupported(String),
    #[error("state {state} action {action}: outcome probabilities sum to {sum}")]
    OutcomeSum { state: String, action: String, sum: f64 },
    #[error("successor {0} is not among the enumerated states")]
    UnknownState(String),
    #[error("invalid value-iteration input: {0}")]
    InvalidInput(String),
    #[error("value iteration did not reach tolerance {tol} within {iterations} sweeps")]
    NoConvergence { tol: f64, iterations: usize },
    #[error("i/o error: {0}")]
    Io(String),
}

/// Result of one sampled transition.
#[derive(Debug, Clone, PartialEq)]
pub struct Step<S> {
    pub next: S,
    pub reward: f64,
    pub terminal: bool,
}

/// A generative environment.
///
/// Rewards are bounded by [`reward_bound`](Mdp::reward_bound) and every
/// non-terminal state offers at least one action.
pub trait Mdp {
    type State: Clone + Eq + Hash + Debug;
    type Action: Copy + Eq + Debug;

    fn start(&self) -> Self::State;

    /// Available actions; empty for terminal states.
    fn actions(&self, state: &Self::State) -> Vec<Self::Action>;

    fn is_terminal(&self, state: &Self::State) -> bool;

    fn step<R: Rng + ?Sized>(&self, state: &Self::State, action: Self::Action, rng: &mut R) -> Step<Self::State>;

    fn discount(&self) -> f64;

    fn reward_bound(&self) -> f64;

    /// Episode length after which an episode is cut off without reward.
    fn step_limit(&self) -> Option<usize> {
        None
    }
}

/// One possible outcome of a `(state, action)` pair.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome<S> {
    pub prob: f64,
    pub next: S,
    pub reward: f64,
    pub terminal: bool,
}

/// Environments that can list every transition.
pub trait ExplicitMdp: Mdp {
    fn states(&self) -> Vec<Self::State>;

    fn outcomes(&self, state: &Self::State, action: Self::Action) -> Vec<Outcome<Self::State>>;
}

/// Index-based outcome.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IndexedOutcome {
    pub prob: f64,
    pub next: usize,
    pub reward: f64,
    pub terminal: bool,
}

/// Exhaustive transition table over enumerated states.
#[derive(Debug, Clone)]
pub struct TransitionModel<S, A> {
    states: Vec<S>,
    index: HashMap<S, usize>,
    actions: Vec<Vec<A>>,
    outcomes: Vec<Vec<Vec<IndexedOutcome>>>,
}

impl<S: Clone + Eq + Hash + Debug, A: Copy + Debug> TransitionModel<S, A> {
    pub fn states(&self) -> &[S] {
        &self.states
    }

    pub fn state_index(&self, state: &S) -> Option<usize> {
        self.index.get(state).copied()
    }

    pub fn actions(&self, state: usize) -> &[A] {
        &self.actions[state]
    }

    /// Outcomes of the `action`-th available action of `state`.
    pub fn outcomes(&self, state: usize, action: usize) -> &[IndexedOutcome] {
        &self.outcomes[state][action]
    }

    /// Total number of `(state, action, outcome)` entries.
    pub fn len(&self) -> usize {
        self.outcomes.iter().flatten().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Lists every transition, merging outcomes that coincide in successor,
/// reward and termination.
pub fn enumerate_transitions<M: ExplicitMdp>(mdp: &M) -> Result<TransitionModel<M::State, M::Action>, EnvError> {
    let states = mdp.states();
    let index: HashMap<M::State, usize> = states.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
    let mut actions = Vec::with_capacity(states.len());
    let mut outcomes = Vec::with_capacity(states.len());
    for state in &states {
        let available = if mdp.is_terminal(state) {
            Vec::new()
        } else {
            mdp.actions(state)
        };
        let mut per_action = Vec::with_capacity(available.len());
        for &action in &available {
            let mut merged: Vec<IndexedOutcome> = Vec::new();
            for o in mdp.outcomes(state, action) {
                let next = *index
                    .get(&o.next)
                    .ok_or_else(|| EnvError::UnknownState(format!("{:?}", o.next)))?;
                match merged
                    .iter_mut()
                    .find(|m| m.next == next && m.reward == o.reward && m.terminal == o.terminal)
                {
                    Some(m) => m.prob += o.prob,
                    None => merged.push(IndexedOutcome {
                        prob: o.prob,
                        next,
                        reward: o.reward,
                        terminal: o.terminal,
                    }),
                }
            }
            let sum: f64 = merged.iter().map(|m| m.prob).sum();
            if (sum - 1.0).abs() > OUTCOME_SUM_TOLERANCE {
                return Err(EnvError::OutcomeSum {
                    state: format!("{state:?}"),
                    action: format!("{action:?}"),
                    sum,
                });
            }
            per_action.push(merged);
        }
        actions.push(available);
        outcomes.push(per_action);
    }
    Ok(TransitionModel {
        states,
        index,
        actions,
        outcomes,
    })
}
