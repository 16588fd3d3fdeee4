//! Exact-rational social choice over three alternatives.
//!
//! Profiles are finite distributions of voter mass over strict rankings of
//! `x`, `y`, `z`. On top of that the crate provides the standard rules
//! (Borda, Condorcet, plurality, positional scoring), checks for the usual
//! axioms, a bounded search for small-coalition manipulations, and a replay
//! engine for case-by-case impossibility arguments encoded as data.
//!
//! All arithmetic is exact; there is no floating point anywhere in the
//! decision paths.

pub mod alternative;
pub mod axioms;
pub mod domain;
pub mod manipulation;
pub mod profile;
pub mod rational;
pub mod replay;
pub mod rules;

pub use alternative::{AltSet, Alternative, Permutation, Ranking};
pub use domain::Domain;
pub use profile::Profile;
pub use rational::Rational;
pub use rules::{Outcome, Rule};
