//! Slippery FrozenLake gridworld.
//!
//! The agent moves in the intended direction with probability 1/3 and in each
//! of the two perpendicular directions with probability 1/3. Moves off the
//! grid leave the agent in place. Reaching `G` pays 1 and ends the episode;
//! falling into `H` ends it with 0.

use std::fmt;
use std::path::Path;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{EnvError, ExplicitMdp, Mdp, Outcome, Step};

/// Standard 4x4 layout, holes at cells 5, 7, 11 and 12.
pub const STANDARD_4X4: &str = "SFFF\nFHFH\nFFFH\nHFFG";

pub const DEFAULT_STEP_LIMIT: usize = 400;
pub const FROZEN_LAKE_DISCOUNT: f64 = 0.99;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Cell {
    Start,
    Frozen,
    Hole,
    Goal,
}

impl Cell {
    fn from_char(c: char) -> Option<Self> {
        match c {
            'S' => Some(Cell::Start),
            'F' => Some(Cell::Frozen),
            'H' => Some(Cell::Hole),
            'G' => Some(Cell::Goal),
            _ => None,
        }
    }

    fn as_char(self) -> char {
        match self {
            Cell::Start => 'S',
            Cell::Frozen => 'F',
            Cell::Hole => 'H',
            Cell::Goal => 'G',
        }
    }
}

/// Rectangular map over `{S, F, H, G}` with one start and at least one goal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridSpec {
    rows: usize,
    cols: usize,
    cells: Vec<Cell>,
    start: usize,
}

impl GridSpec {
    /// Parses one row per line; blank lines are ignored.
    pub fn parse(text: &str) -> Result<Self, EnvError> {
        let lines: Vec<&str> = text.lines().map(str::trim).filter(|l| !l.is_empty()).collect();
        if lines.is_empty() {
            return Err(EnvError::InvalidMap("map is empty".into()));
        }
        let cols = lines[0].chars().count();
        let mut cells = Vec::with_capacity(lines.len() * cols);
        for (r, line) in lines.iter().enumerate() {
            if line.chars().count() != cols {
                return Err(EnvError::InvalidMap(format!(
                    "row {r} has {} cells, expected {cols}",
                    line.chars().count()
                )));
            }
            for (c, ch) in line.chars().enumerate() {
                let cell = Cell::from_char(ch)
                    .ok_or_else(|| EnvError::InvalidMap(format!("unknown character {ch:?} at row {r}, column {c}")))?;
                cells.push(cell);
            }
        }
        let starts: Vec<usize> = (0..cells.len()).filter(|&i| cells[i] == Cell::Start).collect();
        if starts.len() != 1 {
            return Err(EnvError::InvalidMap(format!(
                "expected exactly one S, found {}",
                starts.len()
            )));
        }
        if !cells.contains(&Cell::Goal) {
            return Err(EnvError::InvalidMap("map has no G".into()));
        }
        Ok(Self {
            rows: lines.len(),
            cols,
            cells,
            start: starts[0],
        })
    }

    pub fn from_file(path: &Path) -> Result<Self, EnvError> {
        let text = std::fs::read_to_string(path).map_err(|e| EnvError::Io(e.to_string()))?;
        Self::parse(&text)
    }

    pub fn standard_4x4() -> Self {
        Self::parse(STANDARD_4X4).expect("built-in map is valid")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn cell(&self, state: usize) -> Cell {
        self.cells[state]
    }

    /// Neighbour in direction `m`, or `state` itself at a wall.
    pub fn neighbour(&self, state: usize, m: Move) -> usize {
        let (r, c) = (state / self.cols, state % self.cols);
        let (r, c) = match m {
            Move::Left => (r, c.saturating_sub(1)),
            Move::Down => ((r + 1).min(self.rows - 1), c),
            Move::Right => (r, (c + 1).min(self.cols - 1)),
            Move::Up => (r.saturating_sub(1), c),
        };
        r * self.cols + c
    }
}

impl fmt::Display for GridSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let row: String = self.cells[r * self.cols..(r + 1) * self.cols]
                .iter()
                .map(|c| c.as_char())
                .collect();
            writeln!(f, "{row}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Move {
    Left = 0,
    Down = 1,
    Right = 2,
    Up = 3,
}

impl Move {
    pub const ALL: [Move; 4] = [Move::Left, Move::Down, Move::Right, Move::Up];

    fn from_index(i: usize) -> Self {
        Self::ALL[i % 4]
    }

    /// The intended move and both perpendicular ones, in slip order.
    pub fn slip_outcomes(self) -> [Move; 3] {
        let a = self as usize;
        [Move::from_index(a + 3), self, Move::from_index(a + 1)]
    }
}

#[derive(Debug, Clone)]
pub struct FrozenLake {
    grid: GridSpec,
    step_limit: usize,
    discount: f64,
}

impl FrozenLake {
    pub fn new(grid: GridSpec, step_limit: usize, discount: f64) -> Self {
        Self {
            grid,
            step_limit,
            discount,
        }
    }

    /// The standard 4x4 map, 400 steps, discount 0.99.
    pub fn standard() -> Self {
        Self::new(GridSpec::standard_4x4(), DEFAULT_STEP_LIMIT, FROZEN_LAKE_DISCOUNT)
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    fn arrive(&self, next: usize) -> Step<usize> {
        match self.grid.cell(next) {
            Cell::Goal => Step {
                next,
                reward: 1.0,
                terminal: true,
            },
            Cell::Hole => Step {
                next,
                reward: 0.0,
                terminal: true,
            },
            Cell::Start | Cell::Frozen => Step {
                next,
                reward: 0.0,
                terminal: false,
            },
        }
    }
}

/// The standard slippery 4x4 FrozenLake.
pub fn frozen_lake_4x4() -> FrozenLake {
    FrozenLake::standard()
}

impl Mdp for FrozenLake {
    type State = usize;
    type Action = Move;

    fn start(&self) -> usize {
        self.grid.start()
    }

    fn actions(&self, state: &usize) -> Vec<Move> {
        if self.is_terminal(state) {
            Vec::new()
        } else {
            Move::ALL.to_vec()
        }
    }

    fn is_terminal(&self, state: &usize) -> bool {
        matches!(self.grid.cell(*state), Cell::Hole | Cell::Goal)
    }

    fn step<R: Rng + ?Sized>(&self, state: &usize, action: Move, rng: &mut R) -> Step<usize> {
        let actual = action.slip_outcomes()[rng.gen_range(0..3)];
        self.arrive(self.grid.neighbour(*state, actual))
    }

    fn discount(&self) -> f64 {
        self.discount
    }

    fn reward_bound(&self) -> f64 {
        1.0
    }

    fn step_limit(&self) -> Option<usize> {
        Some(self.step_limit)
    }
}

impl ExplicitMdp for FrozenLake {
    fn states(&self) -> Vec<usize> {
        (0..self.grid.len()).collect()
    }

    fn outcomes(&self, state: &usize, action: Move) -> Vec<Outcome<usize>> {
        action
            .slip_outcomes()
            .iter()
            .map(|&m| {
                let s = self.arrive(self.grid.neighbour(*state, m));
                Outcome {
                    prob: 1.0 / 3.0,
                    next: s.next,
                    reward: s.reward,
                    terminal: s.terminal,
                }
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::env::enumerate_transitions;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn standard_layout() {
        let g = GridSpec::standard_4x4();
        assert_eq!((g.rows(), g.cols()), (4, 4));
        assert_eq!(g.start(), 0);
        let holes: Vec<usize> = (0..16).filter(|&i| g.cell(i) == Cell::Hole).collect();
        assert_eq!(holes, vec![5, 7, 11, 12]);
        assert_eq!(g.cell(15), Cell::Goal);
        assert_eq!(g.to_string(), "SFFF\nFHFH\nFFFH\nHFFG\n");
    }

    #[test]
    fn map_validation() {
        assert!(GridSpec::parse("SFF\nFG").is_err());
        assert!(GridSpec::parse("SFX\nFFG").is_err());
        assert!(GridSpec::parse("SFS\nFFG").is_err());
        assert!(GridSpec::parse("SFF\nFFF").is_err());
        assert!(GridSpec::parse("").is_err());
        assert!(GridSpec::parse("\nSG\n\n").is_ok());
    }

    #[test]
    fn hole_ends_without_reward() {
        let env = FrozenLake::standard();
        // From 1, moving down always lands in 5 (hole) or slides to 0 / 2.
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let mut saw_hole = false;
        for _ in 0..100 {
            let s = env.step(&1, Move::Down, &mut rng);
            if s.next == 5 {
                assert_eq!((s.reward, s.terminal), (0.0, true));
                saw_hole = true;
            }
        }
        assert!(saw_hole);
        assert!(env.is_terminal(&5));
        assert!(env.actions(&5).is_empty());
    }

    #[test]
    fn goal_pays_one() {
        let env = FrozenLake::standard();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut saw_goal = false;
        for _ in 0..100 {
            let s = env.step(&14, Move::Right, &mut rng);
            if s.next == 15 {
                assert_eq!((s.reward, s.terminal), (1.0, true));
                saw_goal = true;
            } else {
                assert_eq!(s.reward, 0.0);
            }
        }
        assert!(saw_goal);
    }

    #[test]
    fn slip_frequencies() {
        // Interior state 9, action Right: 10 (intended), 5 (up), 13 (down).
        let env = FrozenLake::standard();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let mut counts = [0usize; 16];
        let n = 100_000;
        for _ in 0..n {
            counts[env.step(&9, Move::Right, &mut rng).next] += 1;
        }
        for s in [10, 5, 13] {
            let f = counts[s] as f64 / n as f64;
            assert!((f - 1.0 / 3.0).abs() <= 0.01, "state {s}: {f}");
        }
        assert_eq!(counts[10] + counts[5] + counts[13], n);
    }

    #[test]
    fn interior_enumeration() {
        let env = FrozenLake::standard();
        let model = enumerate_transitions(&env).unwrap();
        let right = model.outcomes(9, Move::Right as usize);
        assert_eq!(right.len(), 3);
        assert!(right.iter().all(|o| (o.prob - 1.0 / 3.0).abs() < 1e-15));
        // Corner 0, Left: left and up both bounce back to 0.
        let left = model.outcomes(0, Move::Left as usize);
        assert_eq!(left.len(), 2);
        let stay = left.iter().find(|o| o.next == 0).unwrap();
        assert!((stay.prob - 2.0 / 3.0).abs() < 1e-15);
        for s in [5, 7, 11, 12, 15] {
            assert!(model.actions(s).is_empty());
        }
    }

    const SAMPLING_SEED: u64 = 4;

    #[test]
    fn sampling_matches_enumeration() {
        let env = FrozenLake::standard();
        let model = enumerate_transitions(&env).unwrap();
        // 192 outcome checks at 3σ: about half a false alarm per seed on
        // average, so the seed is pinned.
        let n = 100_000usize;
        let mut rng = ChaCha8Rng::seed_from_u64(SAMPLING_SEED);
        for s in 0..16 {
            for (a, &action) in model.actions(s).iter().enumerate() {
                let mut counts = [0usize; 16];
                for _ in 0..n {
                    counts[env.step(&s, action, &mut rng).next] += 1;
                }
                for o in model.outcomes(s, a) {
                    let f = counts[o.next] as f64 / n as f64;
                    let sigma = (o.prob * (1.0 - o.prob) / n as f64).sqrt();
                    assert!((f - o.prob).abs() <= 3.0 * sigma.max(1e-12), "{s} {action:?}");
                }
            }
        }
    }
}
