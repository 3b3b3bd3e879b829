//! Stationary states of the one-dimensional Klein-Gordon equation in a square
//! potential with mixed vector and scalar coupling.
//!
//! Units: hbar = c = m = 1, so energies and potentials are in mc^2 and
//! lengths in Compton wavelengths.

// `!(x > 0.0)` is used on purpose so that NaN is rejected with the bad values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bound;
pub mod config;
pub mod error;
pub mod kinematics;
pub mod oracle;
pub mod presets;
pub mod scatter;
pub mod spectrum;
pub mod table;

pub use config::{classify, PotentialConfig, SolutionClass};
pub use error::{KgError, Result};
