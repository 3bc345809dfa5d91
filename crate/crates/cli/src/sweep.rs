//! `β₂h` sweeps at fixed qubit-1 temperature.

use std::io::Write;
use std::path::Path;

use rayon::prelude::*;
use serde_json::{json, Value};
use swap_tur_core::engine::{self, EngineParams, Regime};
use swap_tur_core::tur::{self, TurEvaluation};

use crate::config::SweepConfig;
use crate::error::CliError;
use crate::format::{fmt_num, json_num, json_opt};

pub const CSV_HEADER: &str = "beta2_h,q1,q2,w_ext,sigma,inv_snr,tur1_rhs,tur2_rhs,regime,tur1_violated,tur2_violated,degenerate";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub beta2_h: f64,
    pub q1: f64,
    pub q2: f64,
    pub w_ext: f64,
    pub sigma: f64,
    /// `None` at the degenerate crossover.
    pub inv_snr: Option<f64>,
    /// `+∞` when the entropy production vanishes.
    pub tur1_rhs: f64,
    pub tur2_rhs: f64,
    pub regime: Regime,
    pub tur1_violated: bool,
    pub tur2_violated: bool,
    pub degenerate: bool,
}

impl SweepRow {
    pub fn from_eval(beta2_h: f64, p: &EngineParams, e: &TurEvaluation) -> Self {
        SweepRow {
            beta2_h,
            q1: engine::avg_heat_q1(p),
            q2: engine::avg_heat_q2(p),
            w_ext: engine::avg_work_extracted(p),
            sigma: e.sigma_avg,
            inv_snr: e.lhs.value(),
            tur1_rhs: e.tur1_rhs.to_f64(),
            tur2_rhs: e.tur2_rhs.to_f64(),
            regime: engine::classify_regime(p),
            tur1_violated: e.tur1_violated,
            tur2_violated: e.tur2_violated,
            degenerate: e.degenerate,
        }
    }

    pub fn csv_line(&self) -> String {
        [
            fmt_num(self.beta2_h),
            fmt_num(self.q1),
            fmt_num(self.q2),
            fmt_num(self.w_ext),
            fmt_num(self.sigma),
            fmt_num(self.inv_snr.unwrap_or(f64::NAN)),
            fmt_num(self.tur1_rhs),
            fmt_num(self.tur2_rhs),
            self.regime.to_string(),
            self.tur1_violated.to_string(),
            self.tur2_violated.to_string(),
            self.degenerate.to_string(),
        ]
        .join(",")
    }

    pub fn to_json(&self) -> Value {
        json!({
            "beta2_h": json_num(self.beta2_h),
            "q1": json_num(self.q1),
            "q2": json_num(self.q2),
            "w_ext": json_num(self.w_ext),
            "sigma": json_num(self.sigma),
            "inv_snr": json_opt(self.inv_snr),
            "tur1_rhs": json_num(self.tur1_rhs),
            "tur2_rhs": json_num(self.tur2_rhs),
            "regime": self.regime.as_str(),
            "tur1_violated": self.tur1_violated,
            "tur2_violated": self.tur2_violated,
            "degenerate": self.degenerate,
        })
    }
}

pub fn params_at(cfg: &SweepConfig, beta2_h: f64) -> Result<EngineParams, CliError> {
    Ok(EngineParams::from_raw(
        cfg.epsilon1,
        cfg.epsilon2,
        cfg.beta1_h,
        beta2_h,
    )?)
}

pub fn row_at(cfg: &SweepConfig, beta2_h: f64) -> Result<SweepRow, CliError> {
    let p = params_at(cfg, beta2_h)?;
    Ok(SweepRow::from_eval(beta2_h, &p, &tur::evaluate(&p)))
}

/// `β₂h` at which `β₁ε₁ = β₂ε₂`.
pub fn crossover_beta2(cfg: &SweepConfig) -> f64 {
    cfg.beta1_h * cfg.epsilon1 / cfg.epsilon2
}

/// `points` equally spaced values, plus the crossover when it falls strictly
/// inside the range and off the grid.
pub fn grid(cfg: &SweepConfig) -> Vec<f64> {
    let n = cfg.points;
    let step = (cfg.beta2_h_end - cfg.beta2_h_start) / (n - 1) as f64;
    let mut g: Vec<f64> = (0..n)
        .map(|i| {
            if i + 1 == n {
                cfg.beta2_h_end
            } else {
                cfg.beta2_h_start + step * i as f64
            }
        })
        .collect();
    let c = crossover_beta2(cfg);
    if c > cfg.beta2_h_start && c < cfg.beta2_h_end && !g.contains(&c) {
        let at = g.partition_point(|&b| b < c);
        g.insert(at, c);
    }
    g
}

/// Rows in grid order; computed in parallel.
pub fn run(cfg: &SweepConfig) -> Result<Vec<SweepRow>, CliError> {
    cfg.validate()?;
    grid(cfg).into_par_iter().map(|b| row_at(cfg, b)).collect()
}

pub fn write_csv(rows: &[SweepRow], mut w: impl Write) -> std::io::Result<()> {
    writeln!(w, "{CSV_HEADER}")?;
    for r in rows {
        writeln!(w, "{}", r.csv_line())?;
    }
    Ok(())
}

pub fn to_csv(rows: &[SweepRow]) -> String {
    let mut buf = Vec::new();
    write_csv(rows, &mut buf).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("CSV is ASCII")
}

pub fn to_json(cfg: &SweepConfig, rows: &[SweepRow]) -> Value {
    json!({
        "epsilon1": json_num(cfg.epsilon1),
        "epsilon2": json_num(cfg.epsilon2),
        "beta1_h": json_num(cfg.beta1_h),
        "rows": rows.iter().map(SweepRow::to_json).collect::<Vec<_>>(),
    })
}

/// gnuplot script plotting heat, work, entropy and the TUR comparison from
/// the CSV at `csv_path`.
pub fn gnuplot_script(csv_path: &Path, cfg: &SweepConfig) -> String {
    let csv = csv_path.display();
    format!(
        "# beta1_h = {b1} kHz^-1, epsilon = ({e1}, {e2}) kHz\n\
         set datafile separator ','\n\
         set key autotitle columnhead\n\
         set xlabel 'beta_2 h (kHz^-1)'\n\
         set multiplot layout 3,1\n\
         set ylabel 'h kHz'\n\
         plot '{csv}' using 1:3 with lines title '<Q>', '' using 1:4 with lines dashtype 2 title '<W_ext>'\n\
         set ylabel '<Sigma>'\n\
         plot '{csv}' using 1:5 with lines title '<Sigma>'\n\
         set ylabel 'Var/mean^2'\n\
         set logscale y\n\
         plot '{csv}' using 1:6 with lines title 'inverse SNR', '' using 1:7 with lines dashtype 2 title 'TUR-1', '' using 1:8 with lines dashtype 3 title 'TUR-2'\n\
         unset multiplot\n",
        b1 = fmt_num(cfg.beta1_h),
        e1 = fmt_num(cfg.epsilon1),
        e2 = fmt_num(cfg.epsilon2),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Preset;

    #[test]
    fn grid_includes_crossover() {
        let cfg = Preset::Pps0177.config();
        let g = grid(&cfg);
        assert_eq!(g.len(), cfg.points + 1);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
        assert!(g.contains(&crossover_beta2(&cfg)));
        assert_eq!(*g.first().unwrap(), 0.0);
        assert_eq!(*g.last().unwrap(), 0.177);
    }

    #[test]
    fn crossover_row() {
        let cfg = Preset::Pps0177.config();
        let r = row_at(&cfg, crossover_beta2(&cfg)).unwrap();
        assert!((crossover_beta2(&cfg) - 0.0717).abs() < 1e-4);
        assert!(r.degenerate);
        assert_eq!(r.regime, Regime::Crossover);
        assert!(r.q2.abs() <= 1e-12 && r.w_ext.abs() <= 1e-12 && r.sigma.abs() <= 1e-12);
        assert!(r.csv_line().contains(",nan,"));
    }

    #[test]
    fn columns_change_sign_at_crossover() {
        let rows = run(&Preset::Pps0177.config()).unwrap();
        let c = crossover_beta2(&Preset::Pps0177.config());
        for r in rows.iter().filter(|r| r.beta2_h > 0.0) {
            if r.beta2_h < c {
                assert!(r.q2 > 0.0 && r.w_ext > 0.0, "{r:?}");
            } else if r.beta2_h > c {
                assert!(r.q2 < 0.0 && r.w_ext < 0.0, "{r:?}");
            }
            assert!(r.sigma >= 0.0);
        }
    }

    #[test]
    fn csv_is_deterministic() {
        let cfg = SweepConfig {
            points: 50,
            ..Preset::Pps0289.config()
        };
        let a = to_csv(&run(&cfg).unwrap());
        let b = to_csv(&run(&cfg).unwrap());
        assert_eq!(a, b);
        assert!(a.starts_with(CSV_HEADER));
        assert!(!a.contains('\r'));
        assert_eq!(a.lines().count(), 52);
    }

    #[test]
    fn json_matches_csv() {
        let cfg = SweepConfig {
            points: 20,
            ..Preset::Pps0177.config()
        };
        let rows = run(&cfg).unwrap();
        let j = to_json(&cfg, &rows);
        let csv = to_csv(&rows);
        for (line, obj) in csv.lines().skip(1).zip(j["rows"].as_array().unwrap()) {
            let fields: Vec<&str> = line.split(',').collect();
            for (i, key) in ["beta2_h", "q1", "q2", "w_ext", "sigma"].iter().enumerate() {
                assert_eq!(
                    fields[i].parse::<f64>().unwrap(),
                    obj[key].as_f64().unwrap()
                );
            }
        }
    }
}
