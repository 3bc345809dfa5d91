//! Invariant suite over every module. Each property reports the measured
//! worst case next to its tolerance.

use std::fmt::Write as _;

use serde_json::{json, Value};
use swap_tur_core::density::{self, Gate, Qubit};
use swap_tur_core::engine::{self, EngineParams, Regime, NU1_KHZ, NU2_KHZ};
use swap_tur_core::tur::{self, Bound};
use swap_tur_core::units::{self, FlipAngle, Frequency, SpinTemperature};
use swap_tur_core::{mc, DensityMatrix};

use crate::config::Preset;
use crate::format::{fmt_num, json_num};
use crate::{mc as cli_mc, sweep};

pub const DRAWS: u64 = 10_000;
pub const DRAW_SEED: u64 = 0x5eed_0001;
pub const MC_SEED: u64 = 7;
pub const MC_SAMPLES: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Options {
    /// Flip the sign of the average entropy production seen by the
    /// second-law check. Exists only to prove the harness can fail.
    pub inject_fault: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub measured: f64,
    pub tolerance: f64,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Note {
    pub name: &'static str,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
    pub notes: Vec<Note>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    fn push(
        &mut self,
        name: &'static str,
        passed: bool,
        measured: f64,
        tolerance: f64,
        detail: impl Into<String>,
    ) {
        self.checks.push(Check {
            name,
            passed,
            measured,
            tolerance,
            detail: detail.into(),
        });
    }

    /// `measured ≤ tolerance`.
    fn at_most(
        &mut self,
        name: &'static str,
        measured: f64,
        tolerance: f64,
        detail: impl Into<String>,
    ) {
        self.push(name, measured <= tolerance, measured, tolerance, detail);
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for c in &self.checks {
            let _ = writeln!(
                s,
                "{} {:<28} measured {:<22} tolerance {:<10} {}",
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                fmt_num(c.measured),
                fmt_num(c.tolerance),
                c.detail
            );
        }
        for n in &self.notes {
            let _ = writeln!(s, "INFO {:<28} {}", n.name, n.detail);
        }
        let failed = self.checks.iter().filter(|c| !c.passed).count();
        let _ = writeln!(s, "{} checks, {} failed", self.checks.len(), failed);
        s
    }

    pub fn to_json(&self) -> Value {
        json!({
            "passed": self.passed(),
            "checks": self.checks.iter().map(|c| json!({
                "name": c.name,
                "passed": c.passed,
                "measured": json_num(c.measured),
                "tolerance": json_num(c.tolerance),
                "detail": c.detail,
            })).collect::<Vec<_>>(),
            "informational": self.notes.iter().map(|n| json!({ "name": n.name, "detail": n.detail })).collect::<Vec<_>>(),
        })
    }
}

/// Deterministic parameter draws: `ε ∈ [0.1, 20]` kHz, `β ∈ [0, 2]` kHz⁻¹.
pub fn random_draws(n: u64, seed: u64) -> Vec<EngineParams> {
    (0..n)
        .map(|i| {
            let u = |k: u64| mc::counter_uniform(seed, 4 * i + k);
            let eps = |x: f64| 0.1 + 19.9 * x;
            EngineParams::from_raw(eps(u(0)), eps(u(1)), 2.0 * u(2), 2.0 * u(3))
                .expect("draws lie in the domain")
        })
        .collect()
}

/// Every grid point of the three presets.
pub fn preset_points() -> Vec<(Preset, EngineParams)> {
    Preset::ALL
        .into_iter()
        .flat_map(|preset| {
            let cfg = preset.config();
            sweep::grid(&cfg).into_iter().map(move |b| {
                (
                    preset,
                    sweep::params_at(&cfg, b).expect("preset grid lies in the domain"),
                )
            })
        })
        .collect()
}

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

pub fn run(opts: Options) -> VerifyReport {
    let mut r = VerifyReport::default();
    let draws = random_draws(DRAWS, DRAW_SEED);
    let presets = preset_points();
    let all: Vec<&EngineParams> = presets.iter().map(|(_, p)| p).chain(draws.iter()).collect();

    // Units
    let mut worst: f64 = 0.0;
    for k in 1..=200 {
        let t = 1e-9 * 10f64.powf(k as f64 * 0.06);
        let b = units::kelvin_to_beta_h(t).expect("positive temperature");
        if let SpinTemperature::Kelvin(back) = units::beta_h_to_kelvin(b) {
            worst = worst.max(rel(back, t));
        } else {
            worst = f64::INFINITY;
        }
    }
    r.at_most("kelvin_round_trip", worst, 1e-14, "1 nK .. 1e3 K");

    let mut worst: f64 = 0.0;
    for k in 1..100 {
        let theta =
            FlipAngle::new(k as f64 / 100.0 * std::f64::consts::FRAC_PI_2).expect("in range");
        let nu = Frequency::new(NU1_KHZ).expect("positive");
        let b = units::flip_angle_to_beta_h(theta, nu).value();
        let (_, excited) = theta.populations();
        let p = 1.0 / (1.0 + (b * NU1_KHZ).exp());
        worst = worst.max((p - excited).abs());
    }
    r.at_most(
        "flip_angle_population",
        worst,
        1e-12,
        "excited population from the mapped beta",
    );

    // Engine
    let mut worst: f64 = 0.0;
    for p in &draws {
        let d = engine::enumerate_tpm(p);
        let scale = p.eps1().max(p.eps2());
        worst = worst
            .max((d.total_probability() - 1.0).abs())
            .max((d.mean(|o| o.q1) - engine::avg_heat_q1(p)).abs() / scale)
            .max((d.mean(|o| o.q2) - engine::avg_heat_q2(p)).abs() / scale)
            .max((d.mean(|o| o.w_ext) - engine::avg_work_extracted(p)).abs() / scale)
            .max((d.mean(|o| o.sigma) - engine::avg_entropy(p)).abs() / (1.0 + p.affinity().abs()));
    }
    r.at_most(
        "closed_form_vs_enumeration",
        worst,
        1e-12,
        format!("{DRAWS} draws, relative to energy scale"),
    );

    let mut min_sigma = f64::INFINITY;
    for p in &all {
        let s = engine::avg_entropy(p);
        min_sigma = min_sigma.min(if opts.inject_fault { -s } else { s });
    }
    r.push(
        "second_law",
        min_sigma >= -1e-15,
        min_sigma,
        -1e-15,
        format!(
            "min <Sigma> over {} points, must be >= tolerance",
            all.len()
        ),
    );

    let mut worst: f64 = 0.0;
    let mut skipped = 0usize;
    for p in &draws {
        match engine::xft_check(&engine::enumerate_tpm(p)) {
            Ok(e) => worst = worst.max(e),
            Err(_) => skipped += 1,
        }
    }
    r.at_most(
        "xft_exactness",
        worst,
        1e-10,
        format!("max |ln P(s)/P(-s) - s|, {skipped} one-sided draws skipped"),
    );

    let mut worst: f64 = 0.0;
    for p in &all {
        let q =
            engine::inverse_snr(engine::avg_heat_q2(p), engine::variance_heat_oracle(p)).value();
        let w = engine::inverse_snr(
            engine::avg_work_extracted(p),
            engine::variance_work_oracle(p),
        )
        .value();
        if let (Some(q), Some(w)) = (q, w) {
            worst = worst.max((q - w).abs() / q);
        }
    }
    r.at_most(
        "snr_identity",
        worst,
        1e-12,
        "relative, degenerate points excluded",
    );

    let mut bad = 0usize;
    for p in &all {
        let c = engine::cycle_report(p);
        let ok = match engine::classify_regime(p) {
            Regime::HeatEngine => c.w_ext_avg > 0.0 && c.q2_avg > 0.0,
            Regime::Refrigerator => c.w_ext_avg < 0.0 && c.q1_avg > 0.0,
            Regime::Crossover | Regime::Other => true,
        };
        bad += usize::from(!ok);
    }
    r.at_most(
        "regime_signs",
        bad as f64,
        0.0,
        "heat engine extracts work, refrigerator pumps heat",
    );

    let mut worst: f64 = 0.0;
    let mut carnot_bad = 0usize;
    for p in &all {
        if engine::classify_regime(p) == Regime::HeatEngine {
            let eta = engine::efficiency(p).unwrap_or(f64::NAN);
            let otto = 1.0 - p.eps1() / p.eps2();
            let carnot = 1.0 - p.qubit2.beta_h.value() / p.qubit1.beta_h.value();
            worst = worst.max((eta - otto).abs());
            carnot_bad += usize::from(eta >= carnot || eta.is_nan());
        }
    }
    r.at_most(
        "efficiency",
        worst.max(if carnot_bad > 0 { f64::INFINITY } else { 0.0 }),
        1e-12,
        format!("|eta - (1 - e1/e2)|, {carnot_bad} rows above Carnot"),
    );

    let cfg = Preset::Pps0177.config();
    let x = sweep::crossover_beta2(&cfg);
    let p = sweep::params_at(&cfg, x).expect("crossover in domain");
    let worst = engine::avg_heat_q2(&p)
        .abs()
        .max(engine::avg_work_extracted(&p).abs())
        .max(engine::avg_entropy(&p).abs());
    r.at_most(
        "crossover_zero",
        worst,
        1e-12,
        format!("pps-0177 at beta2_h = {}", fmt_num(x)),
    );

    // TUR bounds
    let mut worst: f64 = 0.0;
    for k in 0..=2000 {
        let y = if k == 0 {
            0.0
        } else {
            1e-9 * 10f64.powf(k as f64 * 0.006)
        };
        let x = tur::g_inverse(y).unwrap_or(f64::NAN);
        worst = worst.max((tur::x_tanh_x(x) - y).abs() / y.max(1.0));
    }
    r.at_most("g_inverse_round_trip", worst, 1e-12, "y in [0, 1e3]");

    let mut bad = 0usize;
    let mut worst_gap: f64 = 0.0;
    for k in 0..=1000 {
        let s = 1e-12 * 10f64.powf(k as f64 * 0.015);
        let (t1, t2) = (
            tur::tur1_bound(s).ok().and_then(|e| e.finite()),
            tur::tur2_bound(s).ok().and_then(|e| e.finite()),
        );
        bad += usize::from(!matches!((t1, t2), (Some(a), Some(b)) if b < a));
        if s <= 1e-4 {
            worst_gap = worst_gap.max((tur::bound_gap(s).unwrap_or(f64::NAN) - 2.0 / 3.0).abs());
        }
    }
    r.at_most(
        "bound_ordering",
        bad as f64,
        0.0,
        "tur2 < tur1 for sigma in [1e-12, 1e3]",
    );
    r.at_most(
        "small_entropy_gap",
        worst_gap,
        1e-3,
        "|tur1 - tur2 - 2/3| for sigma <= 1e-4",
    );

    let mut worst = f64::INFINITY;
    let mut violations = 0usize;
    for p in &all {
        let e = tur::evaluate(p);
        if let (Some(lhs), Some(rhs)) = (e.lhs.value(), e.tur2_rhs.finite()) {
            if lhs < rhs - 1e-9 * lhs {
                violations += 1;
            }
            worst = worst.min((lhs - rhs) / lhs);
        }
    }
    r.push(
        "tur2_universality",
        violations == 0,
        worst,
        -1e-9,
        format!("min (lhs - tur2)/lhs, {violations} violations"),
    );

    let mut margin = f64::INFINITY;
    for b1 in [0.177, 0.289] {
        let p = EngineParams::from_raw(NU1_KHZ, NU2_KHZ, b1, 0.02).expect("valid");
        let e = tur::evaluate(&p);
        let m = if e.tur1_violated {
            -e.margin(Bound::Tur1).unwrap_or(f64::NAN)
        } else {
            f64::NAN
        };
        margin = margin.min(m);
    }
    r.push(
        "tur1_violation",
        margin > 0.0,
        margin,
        0.0,
        "1 - lhs/tur1 at beta1_h 0.177 and 0.289, beta2_h 0.02",
    );

    // Density matrices
    let nu1 = Frequency::new(NU1_KHZ).expect("positive");
    let nu2 = Frequency::new(NU2_KHZ).expect("positive");
    let mut worst: f64 = 0.0;
    for i in 0..20 {
        for j in 0..20 {
            let p = EngineParams::from_raw(NU1_KHZ, NU2_KHZ, 0.05 * i as f64, 0.05 * j as f64)
                .expect("valid");
            let a = density::run_cycle(&p);
            let b = engine::cycle_report(&p);
            for (x, y) in [
                (a.q1_avg, b.q1_avg),
                (a.q2_avg, b.q2_avg),
                (a.w_ext_avg, b.w_ext_avg),
                (a.sigma_avg, b.sigma_avg),
                (a.var_q2, b.var_q2),
                (a.var_w, b.var_w),
            ] {
                worst = worst.max((x - y).abs());
            }
        }
    }
    r.at_most("density_vs_analytic", worst, 1e-10, "20x20 grid, absolute");

    let mut worst: f64 = 0.0;
    for i in 0..=20 {
        for j in 0..=20 {
            let th = |k: i32| {
                FlipAngle::new(k as f64 / 20.0 * std::f64::consts::FRAC_PI_2).expect("in range")
            };
            let prep = density::thermal_prep(th(i), th(j), nu1, nu2);
            let gibbs = density::gibbs_product(&prep.params);
            worst = worst.max((*prep.state.matrix() - *gibbs.matrix()).max_abs());
        }
    }
    r.at_most(
        "thermal_prep_vs_gibbs",
        worst,
        1e-12,
        "flip angles on a 21x21 grid",
    );

    r.at_most(
        "swap_as_three_cnots",
        density::swap_cnot_distance(),
        1e-12,
        "max entry difference",
    );

    let mut worst: f64 = 0.0;
    let circuit = [
        Gate::RotY(Qubit::One, 1.1),
        Gate::RotX(Qubit::Two, 0.7),
        Gate::CNot {
            control: Qubit::One,
            target: Qubit::Two,
        },
        Gate::ZZEvolution(std::f64::consts::PI),
        Gate::RotZ(Qubit::One, 0.3),
        Gate::Swap,
    ];
    for start in [
        DensityMatrix::basis(0),
        DensityMatrix::maximally_mixed(),
        density::pps_state(0.6).expect("valid"),
    ] {
        let out = density::apply_circuit(&start, &circuit);
        worst = worst
            .max((out.matrix().trace().re - 1.0).abs())
            .max((-out.eigenvalues()[0]).max(0.0))
            .max((out.purity() - start.purity()).abs());
        if DensityMatrix::new(*out.matrix()).is_err() {
            worst = f64::INFINITY;
        }
    }
    r.at_most(
        "unitary_circuit_validity",
        worst,
        1e-10,
        "trace, positivity and purity preserved",
    );

    // Monte Carlo
    let p = EngineParams::from_raw(NU1_KHZ, NU2_KHZ, 0.177, 0.02).expect("valid");
    let a = cli_mc::sample_parallel(&p, MC_SAMPLES, MC_SEED);
    let b = cli_mc::sample_parallel(&p, MC_SAMPLES, MC_SEED);
    let seq = mc::sample(&p, 100_000, MC_SEED);
    let par = cli_mc::sample_parallel(&p, 100_000, MC_SEED);
    let same = matches!((&a, &b), (Ok(a), Ok(b)) if a == b)
        && matches!((&seq, &par), (Ok(s), Ok(q)) if s == q);
    r.push(
        "mc_determinism",
        same,
        f64::from(u8::from(!same)),
        0.0,
        "rerun and parallel/sequential equality",
    );

    match &a {
        Ok(rep) => {
            let exact = [
                engine::avg_heat_q2(&p),
                engine::avg_work_extracted(&p),
                engine::variance_heat_oracle(&p),
                engine::variance_work_oracle(&p),
            ];
            let est = [rep.mean_q2, rep.mean_w, rep.var_q2, rep.var_w];
            let z = est
                .iter()
                .zip(exact)
                .map(|(e, x)| (e.value - x).abs() / e.std_err)
                .fold(0.0, f64::max);
            r.at_most(
                "mc_consistency",
                z,
                5.0,
                format!("max |z| of 4 moments, n = {MC_SAMPLES}, seed {MC_SEED}"),
            );
        }
        Err(e) => r.push("mc_consistency", false, f64::NAN, 5.0, e.to_string()),
    }

    // Informational
    for (name, p) in [
        (
            "variance_report_pps",
            EngineParams::from_raw(NU1_KHZ, NU2_KHZ, 0.177, 0.02),
        ),
        (
            "variance_report_symmetric",
            EngineParams::from_raw(NU1_KHZ, NU1_KHZ, 0.177, 0.02),
        ),
    ] {
        let p = p.expect("valid");
        let v = engine::variance_discrepancy_report(&p);
        let ratio = |x: Option<f64>| x.map_or_else(|| "-".into(), fmt_num);
        r.notes.push(Note {
            name,
            detail: format!(
                "Var(Q) oracle {} printed {} ratio {}; Var(W) oracle {} printed {} ratio {}",
                fmt_num(v.oracle_heat),
                fmt_num(v.printed_heat),
                ratio(v.heat_ratio),
                fmt_num(v.oracle_work),
                fmt_num(v.printed_work),
                ratio(v.work_ratio)
            ),
        });
    }
    let cfg = Preset::Direct300K.config();
    let max_sigma = sweep::grid(&cfg)
        .into_iter()
        .filter_map(|b| sweep::params_at(&cfg, b).ok())
        .map(|p| engine::avg_entropy(&p))
        .fold(0.0, f64::max);
    r.notes.push(Note {
        name: "direct_300K_scale",
        detail: format!(
            "max <Sigma> = {} (published order of magnitude 1e-9)",
            fmt_num(max_sigma)
        ),
    });
    r
}
