//! Exact finite-window oracles for Schreier families, the spaces built on
//! them, domination constants, ordinal indices and injective tensor norms.

pub mod checks;
pub mod config;
pub mod estimates;
pub mod error;
pub mod indices;
pub mod ordinal;
pub mod lp;
pub mod num;
pub mod schreier;
pub mod spaces;
pub mod suite;
pub mod tensor;

pub use config::Capacity;
pub use error::{Error, Result};
pub use ordinal::Ordinal;
pub use schreier::{Certificate, FinSet, Schreier, SchreierFamily};
pub use spaces::{NormEngine, RatVec, SpaceSpec};
