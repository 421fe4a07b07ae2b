use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{ExplicitMdp, Mdp, Outcome, Step};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ChainMove {
    Left,
    Right,
}

/// `length` states in a line, deterministic moves, reward 1 on entering the
/// last state, which is terminal. Moving left from state 0 stays put.
///
/// `V*(s) = γ^{d−1}` where `d` is the distance from `s` to the goal.
#[derive(Debug, Clone)]
pub struct ChainMdp {
    length: usize,
    discount: f64,
}

impl ChainMdp {
    pub fn new(length: usize, discount: f64) -> Self {
        assert!(length >= 2, "a chain needs at least two states");
        Self { length, discount }
    }

    pub fn length(&self) -> usize {
        self.length
    }

    /// Closed-form optimal value of `state`.
    pub fn optimal_value(&self, state: usize) -> f64 {
        if state + 1 >= self.length {
            return 0.0;
        }
        let distance = self.length - 1 - state;
        self.discount.powi(distance as i32 - 1)
    }

    fn advance(&self, state: usize, m: ChainMove) -> Step<usize> {
        let next = match m {
            ChainMove::Left => state.saturating_sub(1),
            ChainMove::Right => (state + 1).min(self.length - 1),
        };
        let terminal = next == self.length - 1;
        Step {
            next,
            reward: if terminal { 1.0 } else { 0.0 },
            terminal,
        }
    }
}

impl Mdp for ChainMdp {
    type State = usize;
    type Action = ChainMove;

    fn start(&self) -> usize {
        0
    }

    fn actions(&self, state: &usize) -> Vec<ChainMove> {
        if self.is_terminal(state) {
            Vec::new()
        } else {
            vec![ChainMove::Left, ChainMove::Right]
        }
    }

    fn is_terminal(&self, state: &usize) -> bool {
        *state == self.length - 1
    }

    fn step<R: Rng + ?Sized>(&self, state: &usize, action: ChainMove, _rng: &mut R) -> Step<usize> {
        self.advance(*state, action)
    }

    fn discount(&self) -> f64 {
        self.discount
    }

    fn reward_bound(&self) -> f64 {
        1.0
    }
}

impl ExplicitMdp for ChainMdp {
    fn states(&self) -> Vec<usize> {
        (0..self.length).collect()
    }

    fn outcomes(&self, state: &usize, action: ChainMove) -> Vec<Outcome<usize>> {
        let s = self.advance(*state, action);
        vec![Outcome {
            prob: 1.0,
            next: s.next,
            reward: s.reward,
            terminal: s.terminal,
        }]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::env::enumerate_transitions;

    #[test]
    fn two_state_chain_enumeration() {
        // Only the start state has actions; the goal is terminal.
        let model = enumerate_transitions(&ChainMdp::new(2, 0.9)).unwrap();
        assert_eq!(model.len(), 2);
        assert!(model.actions(1).is_empty());
        let model = enumerate_transitions(&ChainMdp::new(3, 0.9)).unwrap();
        assert_eq!(model.len(), 4);
        for s in 0..2 {
            for a in 0..2 {
                assert_eq!(model.outcomes(s, a)[0].prob, 1.0);
            }
        }
    }

    #[test]
    fn closed_form_values() {
        let c = ChainMdp::new(5, 0.99);
        assert!((c.optimal_value(0) - 0.970299).abs() < 1e-15);
        assert_eq!(c.optimal_value(3), 1.0);
        assert_eq!(c.optimal_value(4), 0.0);
    }
}
