//! Closed-form and enumerated statistics of one SWAP-engine cycle.
//!
//! Sign conventions: `q1` and `q2` are the heats released by qubits 1 and 2
//! into their baths (`Qᵢ = -ΔEᵢ`), `w_ext = q1 + q2` is the work delivered by
//! the engine (positive in the heat-engine regime) and `w_on = -w_ext` is the
//! work done on it. Every per-trajectory quantity is proportional to the
//! exchanged excitation `n2 - n1`, where `nᵢ` is the pre-SWAP excitation of
//! qubit `i`.

use core::fmt;

use crate::error::{Error, Result};
use crate::units::{Frequency, InverseTemperature};

/// Relative tolerance used to detect the crossover `β₁ε₁ = β₂ε₂`.
pub const CROSSOVER_RTOL: f64 = 1e-12;

/// Relative threshold below which a mean is treated as zero in `Var/mean²`.
pub const SNR_DEGENERACY: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitSpec {
    pub epsilon: Frequency,
    pub beta_h: InverseTemperature,
}

impl QubitSpec {
    pub fn new(epsilon: Frequency, beta_h: InverseTemperature) -> Self {
        QubitSpec { epsilon, beta_h }
    }

    /// Convenience constructor from raw kHz and kHz⁻¹ values.
    pub fn from_raw(epsilon_khz: f64, beta_h: f64) -> Result<Self> {
        Ok(QubitSpec::new(
            Frequency::new(epsilon_khz)?,
            InverseTemperature::new(beta_h)?,
        ))
    }

    /// Dimensionless `β·ε`; `+∞` at zero temperature.
    pub fn reduced_gap(&self) -> f64 {
        if self.beta_h.is_zero_temperature() {
            f64::INFINITY
        } else {
            self.beta_h.value() * self.epsilon.khz()
        }
    }

    /// Thermal population of the excited level, `1 / (1 + e^{βε})`.
    pub fn excited_population(&self) -> f64 {
        1.0 / (1.0 + libm::exp(self.reduced_gap()))
    }

    /// Thermal population of the ground level, `1 / (1 + e^{-βε})`.
    pub fn ground_population(&self) -> f64 {
        1.0 / (1.0 + libm::exp(-self.reduced_gap()))
    }

    /// `Z = 1 + e^{-βε}` with the ground energy as reference.
    pub fn partition_function(&self) -> f64 {
        1.0 + libm::exp(-self.reduced_gap())
    }

    fn marginal(&self, excited: u8) -> f64 {
        if excited == 1 {
            self.excited_population()
        } else {
            self.ground_population()
        }
    }
}

pub fn excited_population(q: &QubitSpec) -> f64 {
    q.excited_population()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EngineParams {
    pub qubit1: QubitSpec,
    pub qubit2: QubitSpec,
}

impl EngineParams {
    pub fn new(qubit1: QubitSpec, qubit2: QubitSpec) -> Self {
        EngineParams { qubit1, qubit2 }
    }

    /// Gaps in kHz and inverse temperatures in kHz⁻¹.
    pub fn from_raw(eps1: f64, eps2: f64, beta1_h: f64, beta2_h: f64) -> Result<Self> {
        Ok(EngineParams::new(
            QubitSpec::from_raw(eps1, beta1_h)?,
            QubitSpec::from_raw(eps2, beta2_h)?,
        ))
    }

    pub fn eps1(&self) -> f64 {
        self.qubit1.epsilon.khz()
    }

    pub fn eps2(&self) -> f64 {
        self.qubit2.epsilon.khz()
    }

    /// Entropy produced per exchanged excitation, `β₁ε₁ - β₂ε₂`.
    pub fn affinity(&self) -> f64 {
        let (x1, x2) = (self.qubit1.reduced_gap(), self.qubit2.reduced_gap());
        if x1 == x2 {
            0.0
        } else {
            x1 - x2
        }
    }

    /// `p₂ - p₁`, the difference of excited populations, evaluated without
    /// cancellation as `sinh((x₁-x₂)/2) / (2 cosh(x₁/2) cosh(x₂/2))`.
    pub fn population_bias(&self) -> f64 {
        let (x1, x2) = (self.qubit1.reduced_gap(), self.qubit2.reduced_gap());
        if x1 == x2 {
            return 0.0;
        }
        if x1.max(x2) < 700.0 {
            libm::sinh(0.5 * (x1 - x2)) / (2.0 * libm::cosh(0.5 * x1) * libm::cosh(0.5 * x2))
        } else {
            self.qubit2.excited_population() - self.qubit1.excited_population()
        }
    }
}

/// One two-point-measurement trajectory: `|n1 n2⟩ → |n2 n1⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TpmOutcome {
    pub n1: u8,
    pub n2: u8,
    pub prob: f64,
    pub q1: f64,
    pub q2: f64,
    pub w_ext: f64,
    pub sigma: f64,
}

impl TpmOutcome {
    /// Excitations moved from qubit 2 to qubit 1.
    pub fn exchange(&self) -> i8 {
        self.n2 as i8 - self.n1 as i8
    }
}

/// The four outcomes in basis order `00, 01, 10, 11` (qubit 1 on the left).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TpmDistribution {
    pub outcomes: [TpmOutcome; 4],
}

impl TpmDistribution {
    pub fn total_probability(&self) -> f64 {
        self.outcomes.iter().map(|o| o.prob).sum()
    }

    /// Expectation of `f`; zero-probability outcomes are skipped so that
    /// infinite entropies at zero temperature never meet a zero weight.
    pub fn mean(&self, f: impl Fn(&TpmOutcome) -> f64) -> f64 {
        self.outcomes
            .iter()
            .filter(|o| o.prob > 0.0)
            .map(|o| o.prob * f(o))
            .sum()
    }

    /// Second central moment of `f`.
    pub fn variance(&self, f: impl Fn(&TpmOutcome) -> f64) -> f64 {
        let m = self.mean(&f);
        self.mean(|o| {
            let d = f(o) - m;
            d * d
        })
    }

    /// Total probability of all outcomes whose entropy equals `sigma`.
    pub fn sigma_probability(&self, sigma: f64) -> f64 {
        self.outcomes
            .iter()
            .filter(|o| o.sigma == sigma)
            .map(|o| o.prob)
            .sum()
    }
}

pub fn enumerate_tpm(p: &EngineParams) -> TpmDistribution {
    let (e1, e2) = (p.eps1(), p.eps2());
    let a = p.affinity();
    let outcome = |n1: u8, n2: u8| {
        let k = f64::from(n2) - f64::from(n1);
        let q1 = -e1 * k;
        let q2 = e2 * k;
        TpmOutcome {
            n1,
            n2,
            prob: p.qubit1.marginal(n1) * p.qubit2.marginal(n2),
            q1,
            q2,
            w_ext: q1 + q2,
            sigma: if k == 0.0 { 0.0 } else { a * k },
        }
    };
    TpmDistribution {
        outcomes: [outcome(0, 0), outcome(0, 1), outcome(1, 0), outcome(1, 1)],
    }
}

/// Heat released by qubit 1, `-ε₁ (p₂ - p₁)`. Negative when it warms up.
pub fn avg_heat_q1(p: &EngineParams) -> f64 {
    -p.eps1() * p.population_bias()
}

/// Heat released by qubit 2, `ε₂ (p₂ - p₁)`.
pub fn avg_heat_q2(p: &EngineParams) -> f64 {
    p.eps2() * p.population_bias()
}

/// Work delivered by the engine, `Q₁ + Q₂ = (ε₂ - ε₁)(p₂ - p₁)`.
pub fn avg_work_extracted(p: &EngineParams) -> f64 {
    (p.eps2() - p.eps1()) * p.population_bias()
}

pub fn avg_work_on(p: &EngineParams) -> f64 {
    -avg_work_extracted(p)
}

/// Mean entropy production `(β₁ε₁ - β₂ε₂)(p₂ - p₁) ≥ 0`.
pub fn avg_entropy(p: &EngineParams) -> f64 {
    let bias = p.population_bias();
    if bias == 0.0 {
        0.0
    } else {
        p.affinity() * bias
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Regime {
    HeatEngine,
    Refrigerator,
    Crossover,
    Other,
}

impl Regime {
    pub fn as_str(self) -> &'static str {
        match self {
            Regime::HeatEngine => "HeatEngine",
            Regime::Refrigerator => "Refrigerator",
            Regime::Crossover => "Crossover",
            Regime::Other => "Other",
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Heat engine: `1 > ε₁/ε₂ > β₂/β₁`; refrigerator: `β₂/β₁ > ε₁/ε₂`, also
/// with `ε₁ < ε₂`. The ratios are compared as products `β₂ε₂` vs `β₁ε₁`, so
/// `β₁ = 0` needs no special case.
pub fn classify_regime(p: &EngineParams) -> Regime {
    let (x1, x2) = (p.qubit1.reduced_gap(), p.qubit2.reduced_gap());
    let close = x1.is_finite() && x2.is_finite() && (x1 - x2).abs() <= CROSSOVER_RTOL * x1.max(x2);
    if x1 == x2 || close {
        return Regime::Crossover;
    }
    if p.eps1() >= p.eps2() {
        return Regime::Other;
    }
    if x2 < x1 {
        Regime::HeatEngine
    } else {
        Regime::Refrigerator
    }
}

/// `1 - ε₁/ε₂` in the heat-engine regime, otherwise `None`.
pub fn efficiency(p: &EngineParams) -> Option<f64> {
    (classify_regime(p) == Regime::HeatEngine).then(|| 1.0 - p.eps1() / p.eps2())
}

pub fn variance_heat_oracle(p: &EngineParams) -> f64 {
    enumerate_tpm(p).variance(|o| o.q2)
}

pub fn variance_work_oracle(p: &EngineParams) -> f64 {
    enumerate_tpm(p).variance(|o| o.w_ext)
}

// Published cumulant expressions, transcribed term by term. `e^{b}/(1+e^{b})`
// is written as `1 - p` and `1/(1+e^{b})` as `p` so that zero temperature
// does not produce ∞/∞.

/// Transcribed `Var(Q)` with `Q ≡ Q₂`.
pub fn printed_variance_heat(p: &EngineParams) -> f64 {
    let e1 = p.eps1();
    let p1 = p.qubit1.excited_population();
    let p2 = p.qubit2.excited_population();
    let q2 = avg_heat_q2(p);
    let half = 2.0 * e1 * e1 * (1.0 - p2) * p1 + e1 * q2 * p1 + e1 * q2 * (1.0 - p2);
    2.0 * half
}

/// Transcribed `Var(W)` with `W ≡ W_ext`; the mixed `exp(β₂ε₂)` term is read
/// as `e^{β₂ε₂}`.
pub fn printed_variance_work(p: &EngineParams) -> f64 {
    let (e1, e2) = (p.eps1(), p.eps2());
    let p1 = p.qubit1.excited_population();
    let p2 = p.qubit2.excited_population();
    let w = avg_work_extracted(p);
    // (ε₁e^{b₁} + ε₂)/(1 + e^{b₁}) and (ε₂e^{b₂} + ε₁)/(1 + e^{b₂})
    let a = e1 * (1.0 - p1) + e2 * p1;
    let b = e2 * (1.0 - p2) + e1 * p2;
    let half = 2.0 * a * b - a * w - b * w
        + (e1 * e1 * (1.0 - p1) + e2 * e2 * p1)
        + (e2 * e2 * (1.0 - p2) + e1 * e1 * p2)
        - (e1 + e2) * a
        - (e1 + e2) * b;
    2.0 * half
}

/// Enumerated and transcribed variances side by side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VarianceDiscrepancy {
    pub oracle_heat: f64,
    pub printed_heat: f64,
    pub oracle_work: f64,
    pub printed_work: f64,
    /// `printed / oracle`; `None` when the oracle variance is zero.
    pub heat_ratio: Option<f64>,
    pub work_ratio: Option<f64>,
    /// Printed value negative or non-finite.
    pub heat_anomaly: bool,
    pub work_anomaly: bool,
}

pub fn variance_discrepancy_report(p: &EngineParams) -> VarianceDiscrepancy {
    let oracle_heat = variance_heat_oracle(p);
    let oracle_work = variance_work_oracle(p);
    let printed_heat = printed_variance_heat(p);
    let printed_work = printed_variance_work(p);
    let ratio = |num: f64, den: f64| (den > 0.0).then(|| num / den);
    VarianceDiscrepancy {
        oracle_heat,
        printed_heat,
        oracle_work,
        printed_work,
        heat_ratio: ratio(printed_heat, oracle_heat),
        work_ratio: ratio(printed_work, oracle_work),
        heat_anomaly: !(printed_heat.is_finite() && printed_heat >= 0.0),
        work_anomaly: !(printed_work.is_finite() && printed_work >= 0.0),
    }
}

/// `Var/mean²`, or `Degenerate` when the mean vanishes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InverseSnr {
    Value(f64),
    Degenerate,
}

impl InverseSnr {
    pub fn value(self) -> Option<f64> {
        match self {
            InverseSnr::Value(v) => Some(v),
            InverseSnr::Degenerate => None,
        }
    }
}

pub fn inverse_snr(mean: f64, var: f64) -> InverseSnr {
    debug_assert!(var >= 0.0);
    if mean.abs() > SNR_DEGENERACY * libm::sqrt(var) {
        InverseSnr::Value(var / (mean * mean))
    } else {
        InverseSnr::Degenerate
    }
}

/// `max |ln(P(σ)/P(-σ)) - σ|` over the nonzero entropy support.
pub fn xft_check(d: &TpmDistribution) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for o in d.outcomes.iter().filter(|o| o.prob > 0.0 && o.sigma != 0.0) {
        let forward = d.sigma_probability(o.sigma);
        let backward = d.sigma_probability(-o.sigma);
        if backward <= 0.0 {
            return Err(Error::OneSidedSupport { sigma: o.sigma });
        }
        worst = worst.max((libm::log(forward / backward) - o.sigma).abs());
    }
    Ok(worst)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CycleReport {
    pub q1_avg: f64,
    pub q2_avg: f64,
    pub w_ext_avg: f64,
    pub sigma_avg: f64,
    pub var_q2: f64,
    pub var_w: f64,
    pub efficiency: Option<f64>,
    pub regime: Regime,
}

impl CycleReport {
    pub fn w_on_avg(&self) -> f64 {
        -self.w_ext_avg
    }
}

pub fn cycle_report(p: &EngineParams) -> CycleReport {
    CycleReport {
        q1_avg: avg_heat_q1(p),
        q2_avg: avg_heat_q2(p),
        w_ext_avg: avg_work_extracted(p),
        sigma_avg: avg_entropy(p),
        var_q2: variance_heat_oracle(p),
        var_w: variance_work_oracle(p),
        efficiency: efficiency(p),
        regime: classify_regime(p),
    }
}

/// Published qubit frequencies in kHz.
pub const NU1_KHZ: f64 = 4.78559;
pub const NU2_KHZ: f64 = 11.81291;
