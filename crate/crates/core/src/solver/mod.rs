//! Spectral-radius and dimension enclosures.

pub mod config;
pub mod dimension;
pub mod power;
pub mod sandwich;
pub mod tail;

pub use config::SolverConfig;
pub use dimension::{
    dimension, dimension_monotonicity_check, truncation_convergence_scan, DimensionEnclosure, MonotonicityReport,
};
pub use power::{power_iterate, power_iterate_from, PowerResult};
pub use sandwich::{radius_enclosure, radius_enclosure_with_tail, ratio_bounds, sample_ratios, Goal, RatioBounds};
pub use tail::{TailKind, TailMajorant};
