//! F-games: strategic games whose payoffs are mixed through an influence
//! network.
//!
//! An influence matrix `F` (entry `(j, i)` is the weight player `i` puts on
//! player `j`'s mixed utility) is resolved into a colonization matrix `C`
//! (entry `(j, i)` is the weight of `j`'s pure utility inside `i`'s mixed
//! utility). Everything else in the crate is built on that transform:
//!
//! - [`influence`]: validation of `F`, the colonization solve and the
//!   two-player closed forms.
//! - [`game`] and [`mixed`]: finite games, pure F-equilibria and exact
//!   equilibrium enumeration for games with at most two strategies per side.
//! - [`geometry`]: colonization and influence spaces of 2×2 profiles.
//! - [`landowner`]: the monopsony labor game with a passive landowner node.
//! - [`power`] and [`quadrature`]: welfare curves and potential power.

#![allow(clippy::needless_range_loop)]

pub mod game;
pub mod geometry;
pub mod influence;
pub mod landowner;
mod linalg;
pub mod mixed;
pub mod power;
pub mod quadrature;

pub use game::{GameError, Profile, StrategicGame};
pub use geometry::{ConvexRegion, DeviationDelta, Point, SpaceError};
pub use influence::{ColonizationMatrix, InfluenceError, InfluenceMatrix};
pub use landowner::{LaborEquilibrium, LandownerError, LandownerScenario};
pub use mixed::{Component, EquilibriumSet};
pub use power::{PowerError, PowerReport, WelfareCurve};
