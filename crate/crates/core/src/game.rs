//! Finite strategic-form games and pure F-equilibria.

use crate::influence::{colonization, ColonizationMatrix, InfluenceError, InfluenceMatrix};
use std::fmt;
use thiserror::Error;

/// Slack allowed when comparing mixed utilities; ties count as equilibria.
pub const EQUILIBRIUM_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GameError {
    #[error("a game needs at least one player")]
    NoPlayers,
    #[error("player {0} has no strategies")]
    EmptyStrategySet(usize),
    #[error("payoff tensor of player {player} has {len} entries, expected {expected}")]
    ShapeMismatch { player: usize, len: usize, expected: usize },
    #[error("expected {expected} payoff tensors, got {actual}")]
    PlayerCountMismatch { expected: usize, actual: usize },
    #[error("influence matrix is {actual}×{actual}, game has {expected} players")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("payoff of player {0} is not finite")]
    NonFinite(usize),
    #[error("invalid profile {0:?}")]
    InvalidProfile(Vec<usize>),
    #[error("unknown profile label {0:?}")]
    UnknownLabel(String),
    #[error("game is not a two-player game with at most two strategies each")]
    NotTwoByTwo,
    #[error(transparent)]
    Influence(#[from] InfluenceError),
}

/// One strategy index per player.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Profile(pub Vec<usize>);

impl Profile {
    /// Parses the 2×2 labels `UL`, `UR`, `DL`, `DR`.
    pub fn from_label(label: &str) -> Result<Self, GameError> {
        let idx = match label.to_ascii_uppercase().as_str() {
            "UL" => [0, 0],
            "UR" => [0, 1],
            "DL" => [1, 0],
            "DR" => [1, 1],
            _ => return Err(GameError::UnknownLabel(label.to_string())),
        };
        Ok(Profile(idx.to_vec()))
    }

    /// The 2×2 label, if this is a two-player binary profile.
    pub fn label(&self) -> Option<&'static str> {
        match self.0.as_slice() {
            [0, 0] => Some("UL"),
            [0, 1] => Some("UR"),
            [1, 0] => Some("DL"),
            [1, 1] => Some("DR"),
            _ => None,
        }
    }

    /// The same profile with `player`'s choice replaced.
    pub fn deviate(&self, player: usize, strategy: usize) -> Profile {
        let mut p = self.0.clone();
        p[player] = strategy;
        Profile(p)
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.label() {
            Some(l) => f.write_str(l),
            None => write!(f, "{:?}", self.0),
        }
    }
}

/// Players, strategy counts and one payoff tensor per player.
///
/// Tensors are stored flat in row-major order with player 0 as the slowest
/// index.
#[derive(Debug, Clone, PartialEq)]
pub struct StrategicGame {
    strategy_counts: Vec<usize>,
    payoffs: Vec<Vec<f64>>,
}

impl StrategicGame {
    pub fn new(strategy_counts: Vec<usize>, payoffs: Vec<Vec<f64>>) -> Result<Self, GameError> {
        if strategy_counts.is_empty() {
            return Err(GameError::NoPlayers);
        }
        if let Some(p) = strategy_counts.iter().position(|&s| s == 0) {
            return Err(GameError::EmptyStrategySet(p));
        }
        if payoffs.len() != strategy_counts.len() {
            return Err(GameError::PlayerCountMismatch { expected: strategy_counts.len(), actual: payoffs.len() });
        }
        let expected: usize = strategy_counts.iter().product();
        for (player, t) in payoffs.iter().enumerate() {
            if t.len() != expected {
                return Err(GameError::ShapeMismatch { player, len: t.len(), expected });
            }
            if t.iter().any(|v| !v.is_finite()) {
                return Err(GameError::NonFinite(player));
            }
        }
        Ok(Self { strategy_counts, payoffs })
    }

    /// Two-player game from row-player and column-player matrices.
    pub fn bimatrix(row: Vec<Vec<f64>>, col: Vec<Vec<f64>>) -> Result<Self, GameError> {
        let rows = row.len();
        let cols = row.first().map_or(0, Vec::len);
        let counts = vec![rows, cols];
        Self::new(counts, vec![row.concat(), col.concat()])
    }

    pub fn n_players(&self) -> usize {
        self.strategy_counts.len()
    }

    pub fn strategy_counts(&self) -> &[usize] {
        &self.strategy_counts
    }

    /// Flat payoff tensor of `player`.
    pub fn payoff_tensor(&self, player: usize) -> &[f64] {
        &self.payoffs[player]
    }

    pub fn is_valid_profile(&self, profile: &Profile) -> bool {
        profile.0.len() == self.n_players() && profile.0.iter().zip(&self.strategy_counts).all(|(&s, &m)| s < m)
    }

    fn offset(&self, profile: &Profile) -> usize {
        profile.0.iter().zip(&self.strategy_counts).fold(0, |acc, (&s, &m)| acc * m + s)
    }

    pub fn payoff(&self, player: usize, profile: &Profile) -> f64 {
        self.payoffs[player][self.offset(profile)]
    }

    /// Pure utilities of every player at `profile`.
    pub fn pure_utilities(&self, profile: &Profile) -> Vec<f64> {
        let k = self.offset(profile);
        self.payoffs.iter().map(|t| t[k]).collect()
    }

    /// All profiles in row-major order.
    pub fn profiles(&self) -> impl Iterator<Item = Profile> + '_ {
        let total: usize = self.strategy_counts.iter().product();
        (0..total).map(move |mut k| {
            let mut choice = vec![0; self.n_players()];
            for (slot, &m) in choice.iter_mut().zip(&self.strategy_counts).rev() {
                *slot = k % m;
                k /= m;
            }
            Profile(choice)
        })
    }

    /// `(min, max)` of `player`'s payoff tensor.
    pub fn payoff_range(&self, player: usize) -> (f64, f64) {
        self.payoffs[player].iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)))
    }

    /// A copy with `player`'s payoffs transformed by `map`.
    pub fn map_payoffs(&self, player: usize, map: impl Fn(f64) -> f64) -> Self {
        let mut g = self.clone();
        g.payoffs[player].iter_mut().for_each(|v| *v = map(*v));
        g
    }

    fn check_influence(&self, f: &InfluenceMatrix) -> Result<(), GameError> {
        if f.n() != self.n_players() {
            return Err(GameError::DimensionMismatch { expected: self.n_players(), actual: f.n() });
        }
        Ok(())
    }

    /// Colonization matrix for this game's player set.
    pub fn colonize(&self, f: &InfluenceMatrix) -> Result<ColonizationMatrix, GameError> {
        self.check_influence(f)?;
        Ok(colonization(f)?)
    }
}

/// Whether no unilateral deviation raises any player's mixed utility.
pub fn is_f_equilibrium(game: &StrategicGame, c: &ColonizationMatrix, profile: &Profile) -> bool {
    (0..game.n_players()).all(|i| {
        let here = c.mixed_utility(i, &game.pure_utilities(profile));
        (0..game.strategy_counts()[i]).all(|s| {
            let there = c.mixed_utility(i, &game.pure_utilities(&profile.deviate(i, s)));
            here >= there - EQUILIBRIUM_TOL
        })
    })
}

/// All pure profiles that are F-equilibria of `game` under `f`.
pub fn pure_f_equilibria(game: &StrategicGame, f: &InfluenceMatrix) -> Result<Vec<Profile>, GameError> {
    let c = game.colonize(f)?;
    Ok(game.profiles().filter(|p| is_f_equilibrium(game, &c, p)).collect())
}

/// `(min, max)` of `player`'s payoffs.
pub fn game_payoff_range(game: &StrategicGame, player: usize) -> (f64, f64) {
    game.payoff_range(player)
}

/// Ready-made games used throughout the docs and tests.
pub mod catalog {
    use super::StrategicGame;

    /// Prisoner's Dilemma with `U/L` as cooperation.
    pub fn prisoners_dilemma() -> StrategicGame {
        StrategicGame::bimatrix(vec![vec![-1.0, -6.0], vec![0.0, -5.0]], vec![vec![-1.0, 0.0], vec![-6.0, -5.0]])
            .expect("static game")
    }

    /// Man (player 0, one strategy) and God (player 1, `L`/`R`). Only Man's
    /// payoff depends on the outcome.
    pub fn lutheran() -> StrategicGame {
        StrategicGame::new(vec![1, 2], vec![vec![-100.0, 100.0], vec![0.0, 0.0]]).expect("static game")
    }

    /// Pure coordination: both players get 1 when they match, 0 otherwise.
    pub fn coordination() -> StrategicGame {
        let m = vec![vec![1.0, 0.0], vec![0.0, 1.0]];
        StrategicGame::bimatrix(m.clone(), m).expect("static game")
    }

    pub fn matching_pennies() -> StrategicGame {
        StrategicGame::bimatrix(vec![vec![1.0, -1.0], vec![-1.0, 1.0]], vec![vec![-1.0, 1.0], vec![1.0, -1.0]])
            .expect("static game")
    }
}

#[cfg(test)]
mod tests {
    use super::catalog::*;
    use super::*;

    #[test]
    fn pd_classical_nash_is_dr() {
        let g = prisoners_dilemma();
        let eq = pure_f_equilibria(&g, &InfluenceMatrix::zeros(2)).unwrap();
        assert_eq!(eq, vec![Profile::from_label("DR").unwrap()]);
    }

    #[test]
    fn pd_mutual_sympathy_flips_to_ul() {
        // f = 0.25 both ways gives c = 0.2 > 1/6 both ways
        let f = InfluenceMatrix::new(vec![vec![0.0, 0.25], vec![0.25, 0.0]]).unwrap();
        let eq = pure_f_equilibria(&prisoners_dilemma(), &f).unwrap();
        assert_eq!(eq, vec![Profile::from_label("UL").unwrap()]);
    }

    #[test]
    fn lutheran_sympathy_selects_r() {
        let f = InfluenceMatrix::from_edges(2, [(0, 1, 0.5)]).unwrap();
        let g = lutheran();
        let eq = pure_f_equilibria(&g, &f).unwrap();
        assert_eq!(eq, vec![Profile(vec![0, 1])]);
        let c = g.colonize(&f).unwrap();
        assert!((c.mixed_utility(1, &g.pure_utilities(&Profile(vec![0, 1]))) - 50.0).abs() < 1e-12);
    }

    #[test]
    fn payoff_ranges() {
        assert_eq!(game_payoff_range(&lutheran(), 0), (-100.0, 100.0));
        assert_eq!(game_payoff_range(&prisoners_dilemma(), 0), (-6.0, 0.0));
        let constant = StrategicGame::new(vec![2, 2], vec![vec![3.0; 4], vec![3.0; 4]]).unwrap();
        assert_eq!(game_payoff_range(&constant, 1), (3.0, 3.0));
    }

    #[test]
    fn profile_order_and_labels() {
        let g = StrategicGame::new(vec![2, 3], vec![vec![0.0; 6]]);
        assert!(matches!(g, Err(GameError::PlayerCountMismatch { .. })));
        let g = StrategicGame::new(vec![2, 3], vec![(0..6).map(f64::from).collect(), vec![0.0; 6]]).unwrap();
        let all: Vec<_> = g.profiles().collect();
        assert_eq!(all.len(), 6);
        assert_eq!(all[4], Profile(vec![1, 1]));
        assert_eq!(g.payoff(0, &Profile(vec![1, 2])), 5.0);
        assert_eq!(Profile::from_label("dl").unwrap().label(), Some("DL"));
        assert!(Profile::from_label("XX").is_err());
    }

    #[test]
    fn influence_dimension_checked() {
        let r = pure_f_equilibria(&prisoners_dilemma(), &InfluenceMatrix::zeros(3));
        assert!(matches!(r, Err(GameError::DimensionMismatch { expected: 2, actual: 3 })));
    }
}
