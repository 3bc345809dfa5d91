//! Parallel front end for the counter-based trajectory sampler.

use rayon::prelude::*;
use serde_json::{json, Value};
use swap_tur_core::engine::{self, EngineParams};
use swap_tur_core::mc::{self, Estimate, SampleReport, XftEmpirical};

use crate::error::CliError;
use crate::format::json_num;

const CHUNK: u64 = 1 << 16;

/// Same result as [`mc::sample`] for any thread count: chunks are counted
/// independently and the integer counts summed.
pub fn sample_parallel(p: &EngineParams, n: u64, seed: u64) -> Result<SampleReport, CliError> {
    if n == 0 {
        return Err(CliError::Usage("--n must be at least 1".into()));
    }
    let chunks = n.div_ceil(CHUNK);
    let counts = (0..chunks)
        .into_par_iter()
        .map(|c| mc::sample_counts(p, seed, c * CHUNK, ((c + 1) * CHUNK).min(n)))
        .reduce(|| [0u64; 4], |a, b| std::array::from_fn(|k| a[k] + b[k]));
    Ok(mc::report_from_counts(p, counts, seed)?)
}

fn estimate(e: &Estimate) -> Value {
    json!({ "value": json_num(e.value), "std_err": json_num(e.std_err) })
}

pub fn report_json(p: &EngineParams, r: &SampleReport) -> Value {
    let xft = match mc::xft_empirical(r) {
        XftEmpirical::Statistic {
            sigma,
            value,
            std_err,
        } => json!({
            "sigma": json_num(sigma),
            "statistic": json_num(value),
            "std_err": json_num(std_err),
            "inconclusive": false,
        }),
        XftEmpirical::Inconclusive => json!({ "inconclusive": true }),
    };
    json!({
        "n": r.n,
        "seed": r.seed,
        "counts": { "00": r.counts[0], "01": r.counts[1], "10": r.counts[2], "11": r.counts[3] },
        "mean_q2": estimate(&r.mean_q2),
        "mean_w": estimate(&r.mean_w),
        "var_q2": estimate(&r.var_q2),
        "var_w": estimate(&r.var_w),
        "sigma_histogram": r.sigma_histogram.iter()
            .map(|&(s, c)| json!({ "sigma": json_num(s), "count": c }))
            .collect::<Vec<_>>(),
        "exact": {
            "mean_q2": json_num(engine::avg_heat_q2(p)),
            "mean_w": json_num(engine::avg_work_extracted(p)),
            "var_q2": json_num(engine::variance_heat_oracle(p)),
            "var_w": json_num(engine::variance_work_oracle(p)),
        },
        "xft": xft,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parallel_equals_sequential() {
        let p = EngineParams::from_raw(4.78559, 11.81291, 0.177, 0.02).unwrap();
        let n = 3 * CHUNK + 123;
        let par = sample_parallel(&p, n, 11).unwrap();
        let seq = mc::sample(&p, n, 11).unwrap();
        assert_eq!(par, seq);
        assert!(sample_parallel(&p, 0, 1).is_err());
    }
}
