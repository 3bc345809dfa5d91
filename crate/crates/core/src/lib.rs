//! Exact numerics for a two-qubit quantum SWAP engine.
//!
//! Two qubits with energy gaps `ε₁ < ε₂` are thermalized at inverse spin
//! temperatures `β₁`, `β₂` and then exchanged by a SWAP unitary. This crate
//! computes the cycle statistics in closed form and by exhaustive
//! enumeration of the two-point-measurement outcomes, simulates the same
//! cycle on 4×4 density matrices, samples trajectories with a counter-based
//! generator, and evaluates two thermodynamic uncertainty bounds on the
//! resulting heat and work currents.
//!
//! All energies are expressed as frequencies in kHz (Planck's constant set
//! to one), so inverse temperatures carry units of kHz⁻¹ and `β·ε` is
//! dimensionless.
//!
//! The crate is `no_std` and only needs `alloc`.

#![cfg_attr(not(test), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod density;
pub mod engine;
pub mod error;
pub mod mc;
pub mod tur;
pub mod units;

pub use density::{DensityMatrix, Gate, Hamiltonian, Qubit};
pub use engine::{CycleReport, EngineParams, QubitSpec, Regime, TpmDistribution, TpmOutcome};
pub use error::{Error, Result};
pub use mc::{SampleReport, XftEmpirical};
pub use tur::{Bound, Extended, InverseSnr, TurEvaluation};
pub use units::{FlipAngle, Frequency, InverseTemperature, SpinTemperature};
