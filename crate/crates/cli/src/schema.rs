//! JSON input documents.
//!
//! Matrix:   `{"n": 2, "entries": [[0, 0.5], [0.5, 0]]}`, entry `[j][i]` is
//!           the weight player `i` places on player `j`.
//! Game:     `{"players": ["M", "G"], "strategies": [1, 2],
//!            "payoffs": [[-100, 100], [0, 0]], "influence": <matrix>}`;
//!           each payoff list is row-major with player 0 slowest.
//!           `players` and `influence` are optional.
//! Scenario: `{"a": 20, "cost": 1, "peasants": 4,
//!            "edges": [{"from": 0, "to": 1, "weight": 0.8}]}`;
//!           node 0 is the landowner.

use fgame_core::game::StrategicGame;
use fgame_core::influence::InfluenceMatrix;
use fgame_core::landowner::LandownerScenario;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SchemaError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Invalid(String),
}

fn invalid(e: impl std::fmt::Display) -> SchemaError {
    SchemaError::Invalid(e.to_string())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixDoc {
    pub n: usize,
    pub entries: Vec<Vec<f64>>,
}

impl MatrixDoc {
    pub fn to_influence(&self) -> Result<InfluenceMatrix, SchemaError> {
        if self.entries.len() != self.n {
            return Err(invalid(format!("n is {} but there are {} rows", self.n, self.entries.len())));
        }
        InfluenceMatrix::new(self.entries.clone()).map_err(invalid)
    }

    pub fn from_influence(f: &InfluenceMatrix) -> Self {
        Self { n: f.n(), entries: f.to_rows() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GameDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub players: Option<Vec<String>>,
    pub strategies: Vec<usize>,
    pub payoffs: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub influence: Option<MatrixDoc>,
}

impl GameDoc {
    pub fn to_game(&self) -> Result<StrategicGame, SchemaError> {
        if let Some(names) = &self.players {
            if names.len() != self.strategies.len() {
                return Err(invalid(format!("{} names for {} players", names.len(), self.strategies.len())));
            }
        }
        StrategicGame::new(self.strategies.clone(), self.payoffs.clone()).map_err(invalid)
    }

    pub fn influence(&self) -> Result<InfluenceMatrix, SchemaError> {
        match &self.influence {
            Some(m) => m.to_influence(),
            None => Ok(InfluenceMatrix::zeros(self.strategies.len())),
        }
    }

    pub fn name(&self, player: usize) -> String {
        self.players.as_ref().map_or_else(|| player.to_string(), |p| p[player].clone())
    }

    /// Resolves a player by name, then by index.
    pub fn lookup(&self, key: &str) -> Result<usize, SchemaError> {
        if let Some(k) = self.players.as_ref().and_then(|p| p.iter().position(|n| n == key)) {
            return Ok(k);
        }
        match key.parse::<usize>() {
            Ok(k) if k < self.strategies.len() => Ok(k),
            _ => Err(invalid(format!("no player {key:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeDoc {
    pub from: usize,
    pub to: usize,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioDoc {
    pub a: f64,
    pub cost: f64,
    pub peasants: usize,
    #[serde(default)]
    pub edges: Vec<EdgeDoc>,
}

impl ScenarioDoc {
    pub fn to_scenario(&self) -> Result<LandownerScenario, SchemaError> {
        // `to` places `weight` on `from`'s utility
        let edges = self.edges.iter().map(|e| (e.from, e.to, e.weight));
        LandownerScenario::with_edges(self.a, self.cost, self.peasants, edges).map_err(invalid)
    }

    /// `L` is the landowner; otherwise a node index.
    pub fn lookup(&self, key: &str) -> Result<usize, SchemaError> {
        if key.eq_ignore_ascii_case("L") {
            return Ok(0);
        }
        match key.parse::<usize>() {
            Ok(k) if k <= self.peasants => Ok(k),
            _ => Err(invalid(format!("no node {key:?}"))),
        }
    }

    pub fn name(node: usize) -> String {
        if node == 0 {
            "L".into()
        } else {
            format!("P{node}")
        }
    }
}

/// Input accepted by `power`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PowerInput {
    Game(GameDoc),
    Scenario(ScenarioDoc),
}

pub fn parse<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T, SchemaError> {
    Ok(serde_json::from_str(text)?)
}

/// Canonical pretty form with a trailing newline.
pub fn emit<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents serialize");
    s.push('\n');
    s
}
