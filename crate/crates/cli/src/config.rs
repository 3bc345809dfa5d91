//! Sweep configuration: presets, `key = value` config files and flag
//! overrides.
//!
//! Config files hold one `key = value` pair per line; `#` starts a comment.
//! Keys are the [`SweepConfig`] field names. Precedence is preset, then
//! file, then flags.

use std::fmt;
use std::str::FromStr;

use swap_tur_core::engine::{NU1_KHZ, NU2_KHZ};

use crate::error::CliError;

/// Named parameter sets for the published sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Preset {
    /// Thermal-equilibrium start, qubit 1 at 300 K.
    Direct300K,
    /// Pseudopure start, `β₁h = 0.177 kHz⁻¹`.
    Pps0177,
    /// Pseudopure start, `β₁h = 0.289 kHz⁻¹`.
    Pps0289,
}

impl Preset {
    pub const ALL: [Preset; 3] = [Preset::Direct300K, Preset::Pps0177, Preset::Pps0289];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Direct300K => "direct-300K",
            Preset::Pps0177 => "pps-0177",
            Preset::Pps0289 => "pps-0289",
        }
    }

    pub fn beta1_h(self) -> f64 {
        match self {
            Preset::Direct300K => 1.61e-10,
            Preset::Pps0177 => 0.177,
            Preset::Pps0289 => 0.289,
        }
    }

    pub fn config(self) -> SweepConfig {
        let (start, end) = match self {
            Preset::Direct300K => (1.2e-10, 1.25e-9),
            Preset::Pps0177 | Preset::Pps0289 => (0.0, self.beta1_h()),
        };
        SweepConfig {
            epsilon1: NU1_KHZ,
            epsilon2: NU2_KHZ,
            beta1_h: self.beta1_h(),
            beta2_h_start: start,
            beta2_h_end: end,
            points: DEFAULT_POINTS,
            outputs: Outputs::default(),
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| {
                format!("unknown preset `{s}` (expected direct-300K, pps-0177 or pps-0289)")
            })
    }
}

pub const DEFAULT_POINTS: usize = 401;

/// Which artifacts a sweep writes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Outputs {
    pub csv: bool,
    pub json: bool,
    pub gnuplot: bool,
}

impl Default for Outputs {
    fn default() -> Self {
        Outputs {
            csv: true,
            json: false,
            gnuplot: false,
        }
    }
}

impl FromStr for Outputs {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut o = Outputs {
            csv: false,
            json: false,
            gnuplot: false,
        };
        for item in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            match item {
                "csv" => o.csv = true,
                "json" => o.json = true,
                "gnuplot" => o.gnuplot = true,
                other => return Err(format!("unknown output `{other}`")),
            }
        }
        if !(o.csv || o.json) {
            o.csv = true;
        }
        Ok(o)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepConfig {
    pub epsilon1: f64,
    pub epsilon2: f64,
    pub beta1_h: f64,
    pub beta2_h_start: f64,
    pub beta2_h_end: f64,
    pub points: usize,
    pub outputs: Outputs,
}

impl SweepConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |m: String| Err(CliError::Usage(m));
        if !(self.epsilon1 > 0.0 && self.epsilon2 > 0.0) {
            return bad(format!(
                "energy gaps must be positive, got {} and {}",
                self.epsilon1, self.epsilon2
            ));
        }
        if !(self.beta1_h >= 0.0 && self.beta2_h_start >= 0.0) {
            return bad("inverse temperatures must be non-negative".into());
        }
        if self.beta2_h_start >= self.beta2_h_end || !self.beta2_h_end.is_finite() {
            return bad(format!(
                "beta2_h_start ({}) must be below beta2_h_end ({})",
                self.beta2_h_start, self.beta2_h_end
            ));
        }
        if self.points < 2 {
            return bad(format!("points must be at least 2, got {}", self.points));
        }
        Ok(())
    }
}

/// Partially specified configuration, from a file or from flags.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigPatch {
    pub epsilon1: Option<f64>,
    pub epsilon2: Option<f64>,
    pub beta1_h: Option<f64>,
    pub beta2_h_start: Option<f64>,
    pub beta2_h_end: Option<f64>,
    pub points: Option<usize>,
    pub outputs: Option<Outputs>,
}

impl ConfigPatch {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut patch = ConfigPatch::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |m: String| CliError::Usage(format!("config line {}: {m}", lineno + 1));
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err(format!("expected `key = value`, got `{line}`")))?;
            let (key, value) = (key.trim(), value.trim());
            let num = || {
                value
                    .parse::<f64>()
                    .map_err(|_| err(format!("`{key}` expects a number, got `{value}`")))
            };
            match key {
                "epsilon1" => patch.epsilon1 = Some(num()?),
                "epsilon2" => patch.epsilon2 = Some(num()?),
                "beta1_h" => patch.beta1_h = Some(num()?),
                "beta2_h_start" => patch.beta2_h_start = Some(num()?),
                "beta2_h_end" => patch.beta2_h_end = Some(num()?),
                "points" => {
                    patch.points =
                        Some(value.parse().map_err(|_| {
                            err(format!("`points` expects an integer, got `{value}`"))
                        })?)
                }
                "outputs" => patch.outputs = Some(value.parse().map_err(err)?),
                other => return Err(err(format!("unknown key `{other}`"))),
            }
        }
        Ok(patch)
    }

    /// Fields set in `other` win.
    pub fn overlay(self, other: ConfigPatch) -> ConfigPatch {
        ConfigPatch {
            epsilon1: other.epsilon1.or(self.epsilon1),
            epsilon2: other.epsilon2.or(self.epsilon2),
            beta1_h: other.beta1_h.or(self.beta1_h),
            beta2_h_start: other.beta2_h_start.or(self.beta2_h_start),
            beta2_h_end: other.beta2_h_end.or(self.beta2_h_end),
            points: other.points.or(self.points),
            outputs: other.outputs.or(self.outputs),
        }
    }

    /// Completes the patch on top of `base` (a preset) or the published
    /// frequencies when no preset is given.
    pub fn resolve(self, base: Option<SweepConfig>) -> Result<SweepConfig, CliError> {
        let missing = |k: &str| {
            CliError::Usage(format!(
                "missing `{k}` (give a preset, a config file or the flag)"
            ))
        };
        let cfg = SweepConfig {
            epsilon1: self
                .epsilon1
                .or(base.map(|b| b.epsilon1))
                .unwrap_or(NU1_KHZ),
            epsilon2: self
                .epsilon2
                .or(base.map(|b| b.epsilon2))
                .unwrap_or(NU2_KHZ),
            beta1_h: self
                .beta1_h
                .or(base.map(|b| b.beta1_h))
                .ok_or_else(|| missing("beta1_h"))?,
            beta2_h_start: self
                .beta2_h_start
                .or(base.map(|b| b.beta2_h_start))
                .ok_or_else(|| missing("beta2_h_start"))?,
            beta2_h_end: self
                .beta2_h_end
                .or(base.map(|b| b.beta2_h_end))
                .ok_or_else(|| missing("beta2_h_end"))?,
            points: self
                .points
                .or(base.map(|b| b.points))
                .unwrap_or(DEFAULT_POINTS),
            outputs: self.outputs.or(base.map(|b| b.outputs)).unwrap_or_default(),
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_use_published_values() {
        let c = Preset::Direct300K.config();
        assert_eq!((c.epsilon1, c.epsilon2), (4.78559, 11.81291));
        assert_eq!(c.beta1_h, 1.61e-10);
        assert_eq!((c.beta2_h_start, c.beta2_h_end), (1.2e-10, 1.25e-9));
        assert_eq!(Preset::Pps0177.config().beta1_h, 0.177);
        assert_eq!(Preset::Pps0289.config().beta1_h, 0.289);
        assert_eq!("PPS-0177".parse::<Preset>().unwrap(), Preset::Pps0177);
        assert!("pps-1".parse::<Preset>().is_err());
    }

    #[test]
    fn config_file_grammar() {
        let text = "# sweep\nbeta1_h = 0.2\nbeta2_h_start=0.01 # inline\n\nbeta2_h_end = 0.3\npoints = 5\noutputs = csv,gnuplot\n";
        let p = ConfigPatch::parse(text).unwrap();
        let cfg = p.resolve(None).unwrap();
        assert_eq!(cfg.beta1_h, 0.2);
        assert_eq!(cfg.points, 5);
        assert_eq!(cfg.epsilon1, NU1_KHZ);
        assert!(cfg.outputs.gnuplot && cfg.outputs.csv);
    }

    #[test]
    fn flags_override_file() {
        let file = ConfigPatch::parse("beta1_h = 0.2\nbeta2_h_start = 0\nbeta2_h_end = 1").unwrap();
        let flags = ConfigPatch {
            beta1_h: Some(0.5),
            ..Default::default()
        };
        let cfg = file
            .overlay(flags)
            .resolve(Some(Preset::Pps0177.config()))
            .unwrap();
        assert_eq!(cfg.beta1_h, 0.5);
        assert_eq!(cfg.beta2_h_end, 1.0);
    }

    #[test]
    fn config_errors_carry_line_numbers() {
        let e = ConfigPatch::parse("beta1_h = 0.2\nbogus = 1\n").unwrap_err();
        assert!(e.to_string().contains("line 2"), "{e}");
        assert_eq!(e.exit_code(), 2);
        assert!(ConfigPatch::parse("points = 2.5").is_err());
        assert!(ConfigPatch::parse("beta1_h 0.2").is_err());
    }

    #[test]
    fn invalid_configs() {
        let base = Preset::Pps0177.config();
        let p = ConfigPatch {
            beta2_h_start: Some(0.3),
            beta2_h_end: Some(0.1),
            ..Default::default()
        };
        assert!(p.resolve(Some(base)).is_err());
        let p = ConfigPatch {
            points: Some(1),
            ..Default::default()
        };
        assert!(p.resolve(Some(base)).is_err());
        assert!(ConfigPatch::default().resolve(None).is_err());
    }
}
