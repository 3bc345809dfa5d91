//! Monte Carlo sampling of two-point-measurement trajectories.
//!
//! Draw `i` uses the uniform variate `u(seed, i)` from a counter-based
//! generator (the SplitMix64 finalizer applied to `seed + (i+1)·γ`), so any
//! partition of the index range into chunks yields the same outcome counts.

use alloc::vec::Vec;

use crate::engine::{enumerate_tpm, EngineParams, TpmDistribution};
use crate::error::{Error, Result};

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

#[inline]
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Raw 64-bit output for draw `index` of stream `seed`.
#[inline]
pub fn counter_u64(seed: u64, index: u64) -> u64 {
    mix64(seed.wrapping_add(index.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA)))
}

/// Uniform variate in `[0, 1)` with 53 random bits.
#[inline]
pub fn counter_uniform(seed: u64, index: u64) -> f64 {
    (counter_u64(seed, index) >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Cumulative distribution over the four outcomes in basis order.
fn cdf(d: &TpmDistribution) -> [f64; 3] {
    let mut acc = 0.0;
    core::array::from_fn(|k| {
        acc += d.outcomes[k].prob;
        acc
    })
}

/// Outcome counts for draws `start..end`, in basis order `00, 01, 10, 11`.
pub fn sample_counts(p: &EngineParams, seed: u64, start: u64, end: u64) -> [u64; 4] {
    let c = cdf(&enumerate_tpm(p));
    let mut counts = [0u64; 4];
    for i in start..end {
        let u = counter_uniform(seed, i);
        let k = c.iter().position(|&edge| u < edge).unwrap_or(3);
        counts[k] += 1;
    }
    counts
}

/// Sample estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub std_err: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampleReport {
    pub n: u64,
    pub seed: u64,
    pub counts: [u64; 4],
    pub mean_q2: Estimate,
    pub mean_w: Estimate,
    pub var_q2: Estimate,
    pub var_w: Estimate,
    /// Counts per entropy value, ascending in σ. Keys are the exact support
    /// `{-|a|, 0, |a|}` with `a = β₁ε₁ - β₂ε₂`; only `{0}` when `a = 0`.
    pub sigma_histogram: Vec<(f64, u64)>,
}

/// Mean (SE `√(s²/n)`) and unbiased variance (SE from the fourth central
/// moment) of a variable taking `values[k]` on outcome `k`.
fn estimates(values: [f64; 4], counts: &[u64; 4], n: u64) -> (Estimate, Estimate) {
    let nf = n as f64;
    let mean = (0..4).map(|k| counts[k] as f64 * values[k]).sum::<f64>() / nf;
    let central = |pow: i32| {
        (0..4)
            .map(|k| counts[k] as f64 * libm::pow(values[k] - mean, f64::from(pow)))
            .sum::<f64>()
            / nf
    };
    let m2 = central(2);
    let m4 = central(4);
    let var = if n > 1 { m2 * nf / (nf - 1.0) } else { 0.0 };
    let mean_est = Estimate {
        value: mean,
        std_err: libm::sqrt(var / nf),
    };
    let var_est = Estimate {
        value: var,
        std_err: libm::sqrt(libm::fmax(m4 - m2 * m2, 0.0) / nf),
    };
    (mean_est, var_est)
}

pub fn report_from_counts(p: &EngineParams, counts: [u64; 4], seed: u64) -> Result<SampleReport> {
    let n: u64 = counts.iter().sum();
    if n == 0 {
        return Err(Error::NoSamples);
    }
    let d = enumerate_tpm(p);
    let (mean_q2, var_q2) = estimates(d.outcomes.map(|o| o.q2), &counts, n);
    let (mean_w, var_w) = estimates(d.outcomes.map(|o| o.w_ext), &counts, n);

    let a = p.affinity().abs();
    let mut sigma_histogram = Vec::new();
    if a == 0.0 {
        sigma_histogram.push((0.0, n));
    } else {
        for key in [-a, 0.0, a] {
            let c = (0..4)
                .filter(|&k| d.outcomes[k].sigma == key)
                .map(|k| counts[k])
                .sum();
            sigma_histogram.push((key, c));
        }
    }
    Ok(SampleReport {
        n,
        seed,
        counts,
        mean_q2,
        mean_w,
        var_q2,
        var_w,
        sigma_histogram,
    })
}

/// Draws `n` trajectories sequentially.
pub fn sample(p: &EngineParams, n: u64, seed: u64) -> Result<SampleReport> {
    if n == 0 {
        return Err(Error::NoSamples);
    }
    report_from_counts(p, sample_counts(p, seed, 0, n), seed)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum XftEmpirical {
    /// `|ln(N(+σ)/N(-σ)) - σ|` and its standard error `√(1/N₊ + 1/N₋)`.
    Statistic {
        sigma: f64,
        value: f64,
        std_err: f64,
    },
    /// One side of the histogram is empty, or the support is `{0}`.
    Inconclusive,
}

pub fn xft_empirical(r: &SampleReport) -> XftEmpirical {
    let count = |key: f64| {
        r.sigma_histogram
            .iter()
            .find(|(s, _)| *s == key)
            .map(|&(_, c)| c)
    };
    let Some(&(sigma, _)) = r.sigma_histogram.iter().rev().find(|(s, _)| *s > 0.0) else {
        return XftEmpirical::Inconclusive;
    };
    match (count(sigma), count(-sigma)) {
        (Some(plus), Some(minus)) if plus > 0 && minus > 0 => {
            let (plus, minus) = (plus as f64, minus as f64);
            XftEmpirical::Statistic {
                sigma,
                value: (libm::log(plus / minus) - sigma).abs(),
                std_err: libm::sqrt(1.0 / plus + 1.0 / minus),
            }
        }
        _ => XftEmpirical::Inconclusive,
    }
}
