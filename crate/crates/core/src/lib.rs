#![allow(clippy::neg_cmp_op_on_partial_ord)]

//! Polynomial-bonus UCB for bandits with stochastic transitions and
//! non-stationary rewards, the matching tree search, and tools to compute and
//! check the regret-concentration constants.
//!
//! * [`bandit`]: arm statistics, transition tables, reward processes.
//! * [`policy`]: the exploration bonus and arm selection.
//! * [`constants`]: derived concentration constants and their propagation.
//! * [`mab_sim`]: seeded bandit runs and empirical tail estimates.
//! * [`mcts`]: closed-loop tree search.
//! * [`env`]: FrozenLake, chains and value iteration.

pub mod bandit;
pub mod constants;
pub mod env;
pub mod harness;
pub mod mab_sim;
pub mod mcts;
pub mod policy;

pub use bandit::{ArmStats, ExactSum, RewardProcess, TransitionTable};
pub use constants::{DerivedConstants, LayerConstants, ProblemShape};
pub use harness::{derive_seed, Summary};
pub use mcts::{run_episode, search, SearchConfig};
pub use policy::{exploration_bonus, select_arm, ExplorationParams};
