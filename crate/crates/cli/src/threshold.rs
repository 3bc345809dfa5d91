//! TUR violation boundary search in `β₂h` with kelvin conversion.

use std::fmt::Write as _;

use serde_json::{json, Value};
use swap_tur_core::engine::{EngineParams, QubitSpec};
use swap_tur_core::tur::{self, Bound};
use swap_tur_core::units::{self, SpinTemperature};
use swap_tur_core::{Frequency, InverseTemperature};

use crate::error::CliError;
use crate::format::{fmt_num, json_num};

/// Published reference temperature for the onset of TUR-1 violation.
pub const REFERENCE_KELVIN: f64 = 0.266e-6;

pub const CAVEAT: &str = "The reference threshold does not fix which inverse temperature is held \
where or whether a violation must exceed a resolvable margin. This search holds beta1 fixed, \
scans beta2 and reports every flip of the violation flag at zero margin, so agreement or \
disagreement with the reference value depends on that reading.";

#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdQuery {
    pub which: Bound,
    pub epsilon1: f64,
    pub epsilon2: f64,
    pub beta1_h: f64,
    pub beta2_h_start: f64,
    pub beta2_h_end: f64,
    pub points: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Boundary {
    pub beta2_h: f64,
    pub kelvin: Option<f64>,
    /// Violation status just below and just above the boundary.
    pub violated_below: bool,
    pub violated_above: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdReport {
    pub query: ThresholdQuery,
    pub boundaries: Vec<Boundary>,
    pub reference_beta2_h: f64,
}

fn kelvin(b: f64) -> Option<f64> {
    match units::beta_h_to_kelvin(InverseTemperature::new(b).ok()?) {
        SpinTemperature::Kelvin(t) => Some(t),
        SpinTemperature::Infinite => None,
    }
}

fn bound_name(b: Bound) -> &'static str {
    match b {
        Bound::Tur1 => "TUR-1",
        Bound::Tur2 => "TUR-2",
    }
}

pub fn parse_bound(s: &str) -> Result<Bound, String> {
    match s.to_ascii_lowercase().replace('-', "").as_str() {
        "tur1" | "1" => Ok(Bound::Tur1),
        "tur2" | "2" => Ok(Bound::Tur2),
        _ => Err(format!("unknown bound `{s}` (expected tur1 or tur2)")),
    }
}

pub fn run(q: &ThresholdQuery) -> Result<ThresholdReport, CliError> {
    let q1 = QubitSpec::from_raw(q.epsilon1, q.beta1_h)?;
    let e2 = Frequency::new(q.epsilon2)?;
    let found = tur::violation_boundary(q1, e2, q.beta2_h_start, q.beta2_h_end, q.which, q.points)?;
    let probe = |b: f64| -> bool {
        EngineParams::from_raw(q.epsilon1, q.epsilon2, q.beta1_h, b)
            .map(|p| tur::evaluate(&p).violated(q.which))
            .unwrap_or(false)
    };
    let boundaries = found
        .into_iter()
        .map(|b| {
            let b = b.value();
            let d = b * 1e-6;
            Boundary {
                beta2_h: b,
                kelvin: kelvin(b),
                violated_below: probe(b - d),
                violated_above: probe(b + d),
            }
        })
        .collect();
    let reference_beta2_h = units::kelvin_to_beta_h(REFERENCE_KELVIN)?.value();
    Ok(ThresholdReport {
        query: q.clone(),
        boundaries,
        reference_beta2_h,
    })
}

fn side(b: &Boundary) -> &'static str {
    match (b.violated_below, b.violated_above) {
        (true, false) => "violated for smaller beta2 (hotter qubit 2)",
        (false, true) => "violated for larger beta2 (colder qubit 2)",
        _ => "flag flips",
    }
}

impl ThresholdReport {
    fn comparison(&self) -> String {
        let r = self.reference_beta2_h;
        match self.boundaries.iter().min_by(|a, b| (a.beta2_h - r).abs().total_cmp(&(b.beta2_h - r).abs())) {
            None => format!(
                "no {} boundary in the scanned range; reference threshold {} K is beta2_h = {} kHz^-1",
                bound_name(self.query.which),
                fmt_num(REFERENCE_KELVIN),
                fmt_num(r)
            ),
            Some(b) => format!(
                "nearest boundary beta2_h = {} kHz^-1 ({}) vs reference {} kHz^-1 ({} K): ratio {}; {}",
                fmt_num(b.beta2_h),
                b.kelvin.map_or("infinite temperature".into(), |t| format!("{} K", fmt_num(t))),
                fmt_num(r),
                fmt_num(REFERENCE_KELVIN),
                fmt_num(b.beta2_h / r),
                side(b)
            ),
        }
    }

    pub fn to_text(&self) -> String {
        let q = &self.query;
        let mut s = String::new();
        let _ = writeln!(
            s,
            "{} boundary search: epsilon1 = {} kHz, epsilon2 = {} kHz, beta1_h = {} kHz^-1 ({})",
            bound_name(q.which),
            fmt_num(q.epsilon1),
            fmt_num(q.epsilon2),
            fmt_num(q.beta1_h),
            kelvin(q.beta1_h).map_or("infinite temperature".into(), |t| format!(
                "{} K",
                fmt_num(t)
            )),
        );
        let _ = writeln!(
            s,
            "beta2_h range [{}, {}] kHz^-1, {} scan points",
            fmt_num(q.beta2_h_start),
            fmt_num(q.beta2_h_end),
            q.points
        );
        if self.boundaries.is_empty() {
            let _ = writeln!(s, "boundaries: none");
        }
        for b in &self.boundaries {
            let k = b.kelvin.map_or("infinite".into(), fmt_num);
            let _ = writeln!(
                s,
                "boundary beta2_h = {} kHz^-1  T2 = {} K  {}",
                fmt_num(b.beta2_h),
                k,
                side(b)
            );
        }
        let _ = writeln!(s, "comparison: {}", self.comparison());
        let _ = writeln!(s, "caveat: {CAVEAT}");
        s
    }

    pub fn to_json(&self) -> Value {
        let q = &self.query;
        json!({
            "which": bound_name(q.which),
            "epsilon1": json_num(q.epsilon1),
            "epsilon2": json_num(q.epsilon2),
            "beta1_h": json_num(q.beta1_h),
            "beta2_h_start": json_num(q.beta2_h_start),
            "beta2_h_end": json_num(q.beta2_h_end),
            "points": q.points,
            "boundaries": self.boundaries.iter().map(|b| json!({
                "beta2_h": json_num(b.beta2_h),
                "kelvin": b.kelvin.map(json_num),
                "violated_below": b.violated_below,
                "violated_above": b.violated_above,
            })).collect::<Vec<_>>(),
            "reference": {
                "kelvin": json_num(REFERENCE_KELVIN),
                "beta2_h": json_num(self.reference_beta2_h),
                "comparison": self.comparison(),
                "caveat": CAVEAT,
            },
        })
    }
}
