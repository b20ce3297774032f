//! Identification of unitary quantum channels `Φ(ρ) = UρU*` from
//! input/output state pairs.

pub mod equiv;
pub mod error;
pub mod harness;
pub mod matkit;
pub mod search;
pub mod tomo;

pub use error::{Error, Result};
pub use matkit::ComplexMatrix;
