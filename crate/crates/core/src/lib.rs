//! Level structure, photon statistics and polarization entanglement of a
//! small quantum dot driven as a two-photon turnstile.
//!
//! Energies are in units of the radiative rate unless stated otherwise.
//! The modules build on each other:
//!
//! - [`scheme`]: parameters, the sixteen-state model, level energies and
//!   bright/dark classification of cylindrical dots.
//! - [`thermal`]: populations and emission spectra under fast tunneling.
//! - [`kinetics`]: the lumped rate graph, cascade probabilities and a
//!   stochastic simulator of the same chain.
//! - [`entangle`]: the two-photon polarization state and its concurrence.
//! - [`cavity`]: the pair state when photon 2 couples to a tilted cavity.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cavity;
pub mod entangle;
pub mod error;
pub mod export;
pub mod kinetics;
mod quad;
pub mod scheme;
pub mod thermal;

pub use error::{Error, Result};
pub use scheme::{DotParameters, Level, LevelScheme, SchemeClass};
