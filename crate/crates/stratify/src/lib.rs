//! Exact cohomology bookkeeping for GIT quotients and their blowups.

pub mod assembly;
pub mod eisenstein;
pub mod error;
pub mod invariants;
pub mod orbits;
pub mod rational;
pub mod ring;
pub mod scenario;
pub mod series;
pub mod strata;
pub mod weights;

pub use error::{Error, Result};
pub use rational::Q;
pub use series::{BettiTable, TruncatedSeries};
