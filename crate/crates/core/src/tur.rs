//! Thermodynamic uncertainty bounds on `Var(X)/⟨X⟩²`.
//!
//! * TUR-1: `2/⟨Σ⟩`.
//! * TUR-2: `f(⟨Σ⟩) = csch²(g(⟨Σ⟩/2))` with `g` the inverse of `x·tanh(x)`.
//!   For small entropy `f(σ) ≈ 2/σ - 2/3`, so TUR-2 is always the tighter
//!   (smaller) of the two.

use alloc::vec::Vec;

use crate::engine::{self, EngineParams, Regime};
use crate::error::{Error, Result};
use crate::units::{Frequency, InverseTemperature};

pub use crate::engine::InverseSnr;

/// Below this entropy the TUR-2 bound switches to its series expansion.
pub const SERIES_CUTOFF: f64 = 1e-6;
/// Relative tolerance for calling a bound violated.
pub const VIOLATION_RTOL: f64 = 1e-9;
/// Default number of scan points in [`violation_boundary`].
pub const DEFAULT_SCAN_POINTS: usize = 2000;

const MAX_ITER: usize = 200;
const BISECT_RWIDTH: f64 = 1e-6;
const BOUNDARY_RTOL: f64 = 1e-10;

/// A non-negative real or `+∞`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Extended {
    Finite(f64),
    Infinite,
}

impl Extended {
    pub fn finite(self) -> Option<f64> {
        match self {
            Extended::Finite(v) => Some(v),
            Extended::Infinite => None,
        }
    }

    pub fn to_f64(self) -> f64 {
        self.finite().unwrap_or(f64::INFINITY)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Bound {
    Tur1,
    Tur2,
}

#[inline]
pub fn x_tanh_x(x: f64) -> f64 {
    x * libm::tanh(x)
}

/// `d/dx [x tanh x] = tanh x + x sech² x`.
#[inline]
fn x_tanh_x_slope(x: f64) -> f64 {
    let c = libm::cosh(x);
    libm::tanh(x) + x / (c * c)
}

/// Unique `x ≥ 0` with `x·tanh(x) = y`.
///
/// Bisection on `[√y·(1-10⁻³), y+1]` down to a relative width of 10⁻⁶,
/// then Newton steps kept inside the bracket.
pub fn g_inverse(y: f64) -> Result<f64> {
    if y.is_nan() || y < 0.0 {
        return Err(Error::domain("g_inverse argument", y));
    }
    if y == 0.0 {
        return Ok(0.0);
    }
    if y.is_infinite() {
        return Ok(f64::INFINITY);
    }
    let mut lo = libm::fmax(libm::sqrt(y) * (1.0 - 1e-3), 0.0);
    let mut hi = y + 1.0;
    let mut iter = 0;
    while hi - lo > BISECT_RWIDTH * hi && iter < MAX_ITER {
        let mid = 0.5 * (lo + hi);
        if x_tanh_x(mid) < y {
            lo = mid;
        } else {
            hi = mid;
        }
        iter += 1;
    }
    let mut x = 0.5 * (lo + hi);
    let mut last_step = f64::INFINITY;
    while iter < MAX_ITER {
        let resid = x_tanh_x(x) - y;
        if resid == 0.0 {
            break;
        }
        if resid < 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        let next = (x - resid / x_tanh_x_slope(x)).clamp(lo, hi);
        let step = (next - x).abs();
        x = next;
        // stop once steps reach rounding level or stop shrinking
        if step <= 4.0 * f64::EPSILON * x || step >= last_step {
            break;
        }
        last_step = step;
        iter += 1;
    }
    Ok(x)
}

fn check_sigma(sigma: f64) -> Result<()> {
    if sigma >= 0.0 {
        Ok(())
    } else {
        Err(Error::domain("entropy production", sigma))
    }
}

/// `2/σ`; infinite at `σ = 0`.
pub fn tur1_bound(sigma: f64) -> Result<Extended> {
    check_sigma(sigma)?;
    Ok(if sigma == 0.0 {
        Extended::Infinite
    } else {
        Extended::Finite(2.0 / sigma)
    })
}

/// `csch²(g(σ/2))`; infinite at `σ = 0`.
pub fn tur2_bound(sigma: f64) -> Result<Extended> {
    check_sigma(sigma)?;
    if sigma == 0.0 {
        return Ok(Extended::Infinite);
    }
    if sigma < SERIES_CUTOFF {
        return Ok(Extended::Finite(2.0 / sigma - 2.0 / 3.0));
    }
    let s = libm::sinh(g_inverse(0.5 * sigma)?);
    Ok(Extended::Finite(1.0 / (s * s)))
}

/// `tur1_bound(σ) - tur2_bound(σ)` without cancellation; tends to 2/3 as
/// `σ → 0⁺`. Subtracting the two bounds directly loses every digit once
/// `2/σ` exceeds about 10¹⁶.
pub fn bound_gap(sigma: f64) -> Result<f64> {
    check_sigma(sigma)?;
    if sigma == 0.0 {
        return Ok(2.0 / 3.0);
    }
    if sigma < GAP_SERIES_CUTOFF {
        return Ok(
            2.0 / 3.0 - sigma * (2.0 / 45.0 + sigma * (4.0 / 945.0 + sigma * (2.0 / 14175.0)))
        );
    }
    let s = libm::sinh(g_inverse(0.5 * sigma)?);
    Ok(2.0 / sigma - 1.0 / (s * s))
}

const GAP_SERIES_CUTOFF: f64 = 1e-3;

pub fn bound(which: Bound, sigma: f64) -> Result<Extended> {
    match which {
        Bound::Tur1 => tur1_bound(sigma),
        Bound::Tur2 => tur2_bound(sigma),
    }
}

/// Inverse SNR of the heat current against both bounds at one engine point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TurEvaluation {
    pub sigma_avg: f64,
    pub lhs: InverseSnr,
    pub tur1_rhs: Extended,
    pub tur2_rhs: Extended,
    pub tur1_violated: bool,
    pub tur2_violated: bool,
    pub degenerate: bool,
}

impl TurEvaluation {
    pub fn rhs(&self, which: Bound) -> Extended {
        match which {
            Bound::Tur1 => self.tur1_rhs,
            Bound::Tur2 => self.tur2_rhs,
        }
    }

    pub fn violated(&self, which: Bound) -> bool {
        match which {
            Bound::Tur1 => self.tur1_violated,
            Bound::Tur2 => self.tur2_violated,
        }
    }

    /// `lhs/rhs - 1`; negative means the bound is violated.
    pub fn margin(&self, which: Bound) -> Option<f64> {
        let lhs = self.lhs.value()?;
        let rhs = self.rhs(which).finite()?;
        (rhs > 0.0).then(|| lhs / rhs - 1.0)
    }
}

fn is_violated(lhs: f64, rhs: f64) -> bool {
    lhs < rhs - VIOLATION_RTOL * lhs.max(rhs)
}

pub fn evaluate(p: &EngineParams) -> TurEvaluation {
    let sigma_avg = engine::avg_entropy(p);
    let lhs = engine::inverse_snr(engine::avg_heat_q2(p), engine::variance_heat_oracle(p));
    let sigma = libm::fmax(sigma_avg, 0.0);
    let (tur1_rhs, tur2_rhs) = if sigma.is_infinite() {
        (Extended::Finite(0.0), Extended::Finite(0.0))
    } else {
        // sigma is non-negative here, so neither call can fail
        (
            tur1_bound(sigma).unwrap_or(Extended::Infinite),
            tur2_bound(sigma).unwrap_or(Extended::Infinite),
        )
    };
    let degenerate = engine::classify_regime(p) == Regime::Crossover
        || lhs == InverseSnr::Degenerate
        || sigma == 0.0;
    let (mut tur1_violated, mut tur2_violated) = (false, false);
    if let (false, InverseSnr::Value(l)) = (degenerate, lhs) {
        tur1_violated = is_violated(l, tur1_rhs.to_f64());
        tur2_violated = is_violated(l, tur2_rhs.to_f64());
    }
    TurEvaluation {
        sigma_avg,
        lhs,
        tur1_rhs,
        tur2_rhs,
        tur1_violated,
        tur2_violated,
        degenerate,
    }
}

/// Values of `β₂h` in `[beta2_lo, beta2_hi]` where the violation status of
/// `which` flips, in ascending order.
///
/// The range is scanned on `points` equally spaced values and each flip is
/// refined by bisection to a relative width of 10⁻¹⁰. Only adjacent scan
/// points sharing the heat-engine or refrigerator regime are compared, so
/// the crossover (where both sides degenerate) and `Other` regions never
/// produce a boundary.
pub fn violation_boundary(
    qubit1: engine::QubitSpec,
    epsilon2: Frequency,
    beta2_lo: f64,
    beta2_hi: f64,
    which: Bound,
    points: usize,
) -> Result<Vec<InverseTemperature>> {
    if !(beta2_lo.is_finite() && beta2_hi.is_finite() && beta2_lo >= 0.0 && beta2_lo < beta2_hi) {
        return Err(Error::EmptyRange {
            lo: beta2_lo,
            hi: beta2_hi,
        });
    }
    if points < 2 {
        return Err(Error::domain("scan points", points as f64));
    }
    let status = |b2: f64| -> Option<(Regime, bool)> {
        let p = EngineParams::new(
            qubit1,
            engine::QubitSpec::new(epsilon2, InverseTemperature::new(b2).ok()?),
        );
        let regime = engine::classify_regime(&p);
        if !matches!(regime, Regime::HeatEngine | Regime::Refrigerator) {
            return None;
        }
        let e = evaluate(&p);
        (!e.degenerate).then(|| (regime, e.violated(which)))
    };

    let step = (beta2_hi - beta2_lo) / (points - 1) as f64;
    let grid = |i: usize| {
        if i + 1 == points {
            beta2_hi
        } else {
            beta2_lo + step * i as f64
        }
    };

    let mut out = Vec::new();
    let mut prev = (grid(0), status(grid(0)));
    for i in 1..points {
        let b = grid(i);
        let cur = status(b);
        if let (Some((ra, fa)), Some((rb, fb))) = (prev.1, cur) {
            if ra == rb && fa != fb {
                out.push(InverseTemperature::new(bisect_flip(
                    &status, prev.0, b, fa,
                ))?);
            }
        }
        prev = (b, cur);
    }
    Ok(out)
}

fn bisect_flip(
    status: &impl Fn(f64) -> Option<(Regime, bool)>,
    mut a: f64,
    mut b: f64,
    flag_a: bool,
) -> f64 {
    for _ in 0..MAX_ITER {
        if b - a <= BOUNDARY_RTOL * b.abs().max(f64::MIN_POSITIVE) {
            break;
        }
        let mid = 0.5 * (a + b);
        match status(mid) {
            Some((_, f)) if f == flag_a => a = mid,
            Some(_) => b = mid,
            None => break,
        }
    }
    0.5 * (a + b)
}
