//! Chemical reaction network analysis.
//!
//! Structural network numbers, finest independent decompositions,
//! embedded-network comparison, concordance with certificates, and
//! mass-action equilibrium checks. Structural analysis is exact (rational
//! arithmetic); kinetics runs in binary64.

pub mod concord;
pub mod decomp;
pub mod error;
pub mod fixtures;
pub mod makin;
pub mod network;
pub mod ratlin;
pub mod structure;
pub mod transform;

pub use error::{Error, Result};
pub use network::{parse_network, serialize_network, Complex, Network, Reaction, SpeciesId};
pub use ratlin::{Rational, RationalMatrix};
