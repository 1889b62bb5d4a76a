//! Exact coefficient calculus for the shortcut Collatz map
//! `T(p) = p/2` (even) or `(3p + 1)/2` (odd).
//!
//! Every iterate decomposes as `T^n(p) = A_n·p + B_n` with `A_n = 3^m/2^n`
//! and `B_n` a dyadic rational. The crate computes these coefficients, inverts
//! parity vectors to residue classes, takes limits along cycles, repeating
//! units and nested series, labels the resulting infinite objects, and counts
//! class proportions over complete parity spaces. All arithmetic is exact.
//!
//! ```
//! use collatz_lab::{coeffs_of_seed, Seed};
//!
//! let c = coeffs_of_seed(&Seed::try_from(661).unwrap(), 11);
//! assert_eq!(c.a.to_string(), "729/2048");
//! assert_eq!(c.b.to_string(), "13747/2^11");
//! ```

pub mod classify;
pub mod cli;
pub mod coeffs;
pub mod collatz;
pub mod config;
pub mod dyadic;
pub mod error;
pub mod matrix;
pub mod parity;
pub mod periodic;
pub mod proportions;
mod report;
pub mod series;
pub mod trend;

pub use classify::{
    classify_seed, classify_unit, conjecture_watchlist, ClassLabel, Grade, Verdict, WatchFlag,
};
pub use coeffs::{coeffs_of_seed, coeffs_of_vector, evaluate, CoeffA, CoeffPair};
pub use collatz::{detect_cycle, parity_indicator, step, trajectory, CycleSearch, Seed, Trajectory};
pub use config::Config;
pub use dyadic::Dyadic;
pub use error::{Error, Result};
pub use matrix::{build_matrix, CompleteMatrix};
pub use parity::{
    convertibility_probe, minimal_seed, parity_vector, solve_parity, ParityVector, ResidueClass,
};
pub use periodic::{alpha_cycle_limit, is_alpha_vs_beta, unit_limit, PeriodicUnit, UnitLimit};
pub use proportions::{convergence_sweep, proportion_a, proportion_s, Mode, ProportionReport};
pub use report::{parse_rational, rational_string};
pub use series::{build_series, series_limits, Family, SeriesReport};
pub use trend::Trend;
