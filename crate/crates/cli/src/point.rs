//! Single-point report: cycle averages, variances and the TUR comparison.

use std::fmt::Write as _;

use serde_json::{json, Value};
use swap_tur_core::engine::{self, CycleReport, EngineParams};
use swap_tur_core::tur::{self, TurEvaluation};

use crate::format::{fmt_num, json_num, json_opt};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointReport {
    pub params: EngineParams,
    pub cycle: CycleReport,
    pub tur: TurEvaluation,
}

impl PointReport {
    pub fn new(params: EngineParams) -> Self {
        PointReport {
            params,
            cycle: engine::cycle_report(&params),
            tur: tur::evaluate(&params),
        }
    }

    pub fn to_json(&self) -> Value {
        let p = &self.params;
        let c = &self.cycle;
        let t = &self.tur;
        json!({
            "epsilon1": json_num(p.eps1()),
            "epsilon2": json_num(p.eps2()),
            "beta1_h": json_num(p.qubit1.beta_h.value()),
            "beta2_h": json_num(p.qubit2.beta_h.value()),
            "q1": json_num(c.q1_avg),
            "q2": json_num(c.q2_avg),
            "w_ext": json_num(c.w_ext_avg),
            "w_on": json_num(c.w_on_avg()),
            "sigma": json_num(c.sigma_avg),
            "var_q2": json_num(c.var_q2),
            "var_w": json_num(c.var_w),
            "efficiency": json_opt(c.efficiency),
            "regime": c.regime.as_str(),
            "inv_snr": json_opt(t.lhs.value()),
            "tur1_rhs": json_opt(t.tur1_rhs.finite()),
            "tur2_rhs": json_opt(t.tur2_rhs.finite()),
            "tur1_violated": t.tur1_violated,
            "tur2_violated": t.tur2_violated,
            "degenerate": t.degenerate,
        })
    }

    pub fn to_text(&self) -> String {
        let p = &self.params;
        let c = &self.cycle;
        let t = &self.tur;
        let opt = |x: Option<f64>| x.map_or_else(|| "-".to_string(), fmt_num);
        let mut s = String::new();
        let _ = writeln!(
            s,
            "epsilon1 = {} kHz, epsilon2 = {} kHz",
            fmt_num(p.eps1()),
            fmt_num(p.eps2())
        );
        let _ = writeln!(
            s,
            "beta1_h = {} kHz^-1, beta2_h = {} kHz^-1",
            fmt_num(p.qubit1.beta_h.value()),
            fmt_num(p.qubit2.beta_h.value())
        );
        let _ = writeln!(s, "regime          {}", c.regime);
        let _ = writeln!(s, "<Q1>            {} h kHz", fmt_num(c.q1_avg));
        let _ = writeln!(s, "<Q2>            {} h kHz", fmt_num(c.q2_avg));
        let _ = writeln!(s, "<W_ext>         {} h kHz", fmt_num(c.w_ext_avg));
        let _ = writeln!(s, "<Sigma>         {}", fmt_num(c.sigma_avg));
        let _ = writeln!(s, "Var(Q2)         {}", fmt_num(c.var_q2));
        let _ = writeln!(s, "Var(W_ext)      {}", fmt_num(c.var_w));
        let _ = writeln!(s, "efficiency      {}", opt(c.efficiency));
        let _ = writeln!(s, "inverse SNR     {}", opt(t.lhs.value()));
        let _ = writeln!(
            s,
            "TUR-1 bound     {}  violated: {}",
            fmt_num(t.tur1_rhs.to_f64()),
            t.tur1_violated
        );
        let _ = writeln!(
            s,
            "TUR-2 bound     {}  violated: {}",
            fmt_num(t.tur2_rhs.to_f64()),
            t.tur2_violated
        );
        let _ = writeln!(s, "degenerate      {}", t.degenerate);
        s
    }
}
