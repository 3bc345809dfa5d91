//! Std companion to `swap-tur-core`: parameter sweeps written as CSV/JSON,
//! violation-boundary reports, parallel Monte Carlo, circuit files and the
//! self-verification suite behind the `swap-tur` binary.

pub mod circuit;
pub mod config;
pub mod error;
pub mod format;
pub mod mc;
pub mod point;
pub mod sweep;
pub mod threshold;
pub mod verify;

pub use error::CliError;
