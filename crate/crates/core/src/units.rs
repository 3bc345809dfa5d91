//! Unit conventions.
//!
//! Energies are frequencies in kHz with `h = 1`; inverse temperatures are the
//! product `β·h` in kHz⁻¹ (milliseconds). Zero and infinite temperature are
//! explicit values rather than stray infinities.

use core::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};

/// Planck constant, J·s (exact, 2019 SI).
pub const PLANCK: f64 = 6.626_070_15e-34;
/// Boltzmann constant, J/K (exact, 2019 SI).
pub const BOLTZMANN: f64 = 1.380_649e-23;

/// `h / k_B` in K·ms, i.e. the kelvin value of `β·h = 1 kHz⁻¹`.
const H_OVER_KB_KELVIN_MS: f64 = PLANCK / BOLTZMANN * 1e3;

/// A positive, finite frequency in kHz. Doubles as an energy gap in h·kHz.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Frequency(f64);

impl Frequency {
    pub fn new(khz: f64) -> Result<Self> {
        if khz.is_finite() && khz > 0.0 {
            Ok(Frequency(khz))
        } else {
            Err(Error::domain("frequency", khz))
        }
    }

    pub fn from_hz(hz: f64) -> Result<Self> {
        Self::new(hz / 1e3)
    }

    #[inline]
    pub fn khz(self) -> f64 {
        self.0
    }
}

/// Inverse spin temperature `β·h` in kHz⁻¹.
///
/// Finite non-negative values come from [`InverseTemperature::new`]. The
/// zero-temperature limit is the dedicated constant
/// [`InverseTemperature::ZERO_TEMPERATURE`]; `0.0` is infinite temperature.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct InverseTemperature(f64);

impl InverseTemperature {
    pub const INFINITE_TEMPERATURE: Self = InverseTemperature(0.0);
    pub const ZERO_TEMPERATURE: Self = InverseTemperature(f64::INFINITY);

    pub fn new(beta_h: f64) -> Result<Self> {
        if beta_h.is_finite() && beta_h >= 0.0 {
            Ok(InverseTemperature(beta_h))
        } else {
            Err(Error::domain("inverse temperature", beta_h))
        }
    }

    /// Raw value in kHz⁻¹; `+∞` only for [`Self::ZERO_TEMPERATURE`].
    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_zero_temperature(self) -> bool {
        self.0.is_infinite()
    }

    pub fn is_infinite_temperature(self) -> bool {
        self.0 == 0.0
    }
}

/// A spin temperature in kelvin, or the infinite-temperature limit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpinTemperature {
    Kelvin(f64),
    Infinite,
}

/// Rotation angle of a population-control pulse, in `[0, π/2]` radians.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct FlipAngle(f64);

impl FlipAngle {
    pub fn new(theta: f64) -> Result<Self> {
        if (0.0..=FRAC_PI_2).contains(&theta) {
            Ok(FlipAngle(theta))
        } else {
            Err(Error::domain("flip angle", theta))
        }
    }

    #[inline]
    pub fn radians(self) -> f64 {
        self.0
    }

    /// Ground and excited populations `(cos²(θ/2), sin²(θ/2))` left after
    /// rotating `|0⟩` by this angle and dephasing.
    pub fn populations(self) -> (f64, f64) {
        let c = libm::cos(self.0 / 2.0);
        let s = libm::sin(self.0 / 2.0);
        (c * c, s * s)
    }
}

pub fn kelvin_to_beta_h(kelvin: f64) -> Result<InverseTemperature> {
    if !(kelvin.is_finite() && kelvin > 0.0) {
        return Err(Error::domain("temperature (K)", kelvin));
    }
    InverseTemperature::new(H_OVER_KB_KELVIN_MS / kelvin)
}

pub fn beta_h_to_kelvin(beta: InverseTemperature) -> SpinTemperature {
    if beta.is_infinite_temperature() {
        SpinTemperature::Infinite
    } else {
        // ZERO_TEMPERATURE maps to 0 K through the division.
        SpinTemperature::Kelvin(H_OVER_KB_KELVIN_MS / beta.value())
    }
}

/// Inverse spin temperature reached by a `θ` rotation on a qubit of
/// frequency `nu`: `β·h = (2/ν)·ln(cot(θ/2))`.
pub fn flip_angle_to_beta_h(theta: FlipAngle, nu: Frequency) -> InverseTemperature {
    let t = theta.radians();
    if t == 0.0 {
        return InverseTemperature::ZERO_TEMPERATURE;
    }
    if t == FRAC_PI_2 {
        return InverseTemperature::INFINITE_TEMPERATURE;
    }
    let half = t / 2.0;
    let log_cot = libm::log(libm::cos(half) / libm::sin(half));
    InverseTemperature(libm::fmax(2.0 * log_cot / nu.khz(), 0.0))
}
