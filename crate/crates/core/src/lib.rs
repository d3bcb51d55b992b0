//! Certified Hausdorff dimension enclosures for continued-fraction limit sets
//! and checks on their dimension spectra.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod alphabets;
pub mod bounds;
pub mod certificate;
pub mod decimal;
pub mod error;
pub mod grid;
pub mod interval;
pub mod par;
pub mod solver;
pub mod spectrum;
pub mod statements;
pub mod table;
pub mod transfer;

pub use alphabets::{Alphabet, Family};
pub use error::{Error, Result};
pub use grid::{GridFunction, PositiveFunction};
pub use interval::Interval;
pub use solver::{dimension, DimensionEnclosure, SolverConfig};
pub use transfer::TransferOperator;

/// A real value known to lie in `[lo, hi]`.
pub type Enclosure = Interval;
