//! Divisor-sum races on arithmetic progressions.
//!
//! The crate evaluates `σ_s` along progressions `an + b`, searches for and
//! certifies sign changes of `σ_s(an+b) - σ_s(cn+d)`, builds explicit
//! witnesses with checkable certificates, and evaluates zeta-based criteria.

pub mod codec;
pub mod config;
pub mod error;
pub mod numerics;
pub mod params;
pub mod race;
pub mod repro;
pub mod sigma;
pub mod witness;

pub use config::{OutputFormat, RunConfig};
pub use error::{Error, Result};
