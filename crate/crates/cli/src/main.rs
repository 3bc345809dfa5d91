use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use swap_tur::circuit;
use swap_tur::config::{ConfigPatch, Outputs, Preset};
use swap_tur::mc;
use swap_tur::point::PointReport;
use swap_tur::sweep;
use swap_tur::threshold::{self, ThresholdQuery};
use swap_tur::verify;
use swap_tur::CliError;
use swap_tur_core::engine::{NU1_KHZ, NU2_KHZ};
use swap_tur_core::tur::{Bound, DEFAULT_SCAN_POINTS};
use swap_tur_core::{units, EngineParams};

/// Two-qubit SWAP engine: cycle statistics, TUR bounds, sweeps and checks.
#[derive(Parser, Debug)]
#[command(name = "swap-tur", version)]
struct Cli {
    /// Machine-readable JSON output.
    #[arg(long, global = true)]
    json: bool,
    /// Write the output here instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    /// `key = value` sweep configuration file.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Engine {
    /// Take beta1_h and the frequencies from a preset.
    #[arg(long)]
    preset: Option<Preset>,
    /// Qubit 1 gap in kHz.
    #[arg(long)]
    nu1: Option<f64>,
    /// Qubit 2 gap in kHz.
    #[arg(long)]
    nu2: Option<f64>,
    /// Qubit 1 inverse temperature in kHz^-1.
    #[arg(long)]
    beta1h: Option<f64>,
    /// Qubit 2 inverse temperature in kHz^-1.
    #[arg(long)]
    beta2h: f64,
}

impl Engine {
    fn params(&self) -> Result<EngineParams, CliError> {
        let b1 = self
            .beta1h
            .or(self.preset.map(Preset::beta1_h))
            .ok_or_else(|| CliError::Usage("give --beta1h or --preset".into()))?;
        Ok(EngineParams::from_raw(
            self.nu1.unwrap_or(NU1_KHZ),
            self.nu2.unwrap_or(NU2_KHZ),
            b1,
            self.beta2h,
        )?)
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Cycle statistics and TUR comparison at one parameter point.
    Point(Engine),
    /// Sweep beta2_h and write one row per grid point.
    Sweep {
        #[arg(long)]
        preset: Option<Preset>,
        #[arg(long)]
        nu1: Option<f64>,
        #[arg(long)]
        nu2: Option<f64>,
        #[arg(long)]
        beta1h: Option<f64>,
        #[arg(long)]
        beta2h_start: Option<f64>,
        #[arg(long)]
        beta2h_end: Option<f64>,
        #[arg(long)]
        points: Option<usize>,
        /// Comma list of csv, json, gnuplot. With --out, JSON goes to
        /// `<out>.json` and the gnuplot script to `<out>.gp`.
        #[arg(long)]
        outputs: Option<Outputs>,
    },
    /// Locate where a TUR violation flag flips as beta2_h varies.
    Threshold {
        /// tur1 or tur2.
        #[arg(long, default_value = "tur1", value_parser = threshold::parse_bound)]
        which: Bound,
        #[arg(long, conflicts_with = "t1_kelvin")]
        beta1h: Option<f64>,
        /// Qubit 1 temperature in kelvin (default 300).
        #[arg(long)]
        t1_kelvin: Option<f64>,
        #[arg(long, default_value_t = NU1_KHZ)]
        nu1: f64,
        #[arg(long, default_value_t = NU2_KHZ)]
        nu2: f64,
        #[arg(long, default_value_t = 1e-3)]
        beta2h_start: f64,
        #[arg(long, default_value_t = 1.0)]
        beta2h_end: f64,
        #[arg(long, default_value_t = DEFAULT_SCAN_POINTS)]
        points: usize,
    },
    /// Sample two-point-measurement trajectories (JSON report).
    Mc {
        #[command(flatten)]
        engine: Engine,
        /// Number of trajectories.
        #[arg(long, default_value_t = 1_000_000)]
        n: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run a gate file on the density-matrix simulator.
    Circuit {
        file: PathBuf,
        /// Reference state for the fidelity.
        #[arg(long)]
        reference: Option<PathBuf>,
    },
    /// Run the invariant suite; exit 1 if any property fails.
    Verify {
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(p) => {
            fs::write(p, text).map_err(|e| CliError::Runtime(format!("{}: {e}", p.display())))
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}

fn json_text(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}

fn with_suffix(p: &Path, suffix: &str) -> PathBuf {
    let mut s = p.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

/// Returns whether the command succeeded (only `verify` can report failure).
fn run(cli: Cli) -> Result<bool, CliError> {
    let out = cli.out.as_deref();
    match cli.command {
        Command::Point(engine) => {
            let r = PointReport::new(engine.params()?);
            emit(
                out,
                &if cli.json {
                    json_text(&r.to_json())
                } else {
                    r.to_text()
                },
            )?;
        }
        Command::Sweep {
            preset,
            nu1,
            nu2,
            beta1h,
            beta2h_start,
            beta2h_end,
            points,
            outputs,
        } => {
            let file = cli
                .config
                .as_deref()
                .map(read)
                .transpose()?
                .map(|t| ConfigPatch::parse(&t))
                .transpose()?;
            let flags = ConfigPatch {
                epsilon1: nu1,
                epsilon2: nu2,
                beta1_h: beta1h,
                beta2_h_start: beta2h_start,
                beta2_h_end: beta2h_end,
                points,
                outputs,
            };
            let mut cfg = file
                .unwrap_or_default()
                .overlay(flags)
                .resolve(preset.map(Preset::config))?;
            if cli.json {
                cfg.outputs.json = true;
                if outputs.is_none() {
                    cfg.outputs.csv = false;
                }
            }
            let rows = sweep::run(&cfg)?;
            match out {
                None => {
                    if cfg.outputs.gnuplot {
                        return Err(CliError::Usage("gnuplot output needs --out".into()));
                    }
                    if cfg.outputs.csv && cfg.outputs.json {
                        return Err(CliError::Usage("csv and json together need --out".into()));
                    }
                    if cfg.outputs.json {
                        emit(None, &json_text(&sweep::to_json(&cfg, &rows)))?;
                    } else {
                        emit(None, &sweep::to_csv(&rows))?;
                    }
                }
                Some(path) => {
                    if cfg.outputs.csv {
                        emit(Some(path), &sweep::to_csv(&rows))?;
                    }
                    if cfg.outputs.json {
                        let target = if cfg.outputs.csv {
                            with_suffix(path, ".json")
                        } else {
                            path.to_path_buf()
                        };
                        emit(Some(&target), &json_text(&sweep::to_json(&cfg, &rows)))?;
                    }
                    if cfg.outputs.gnuplot {
                        if !cfg.outputs.csv {
                            return Err(CliError::Usage(
                                "gnuplot output needs the csv output".into(),
                            ));
                        }
                        emit(
                            Some(&with_suffix(path, ".gp")),
                            &sweep::gnuplot_script(path, &cfg),
                        )?;
                    }
                }
            }
        }
        Command::Threshold {
            which,
            beta1h,
            t1_kelvin,
            nu1,
            nu2,
            beta2h_start,
            beta2h_end,
            points,
        } => {
            let beta1_h = match beta1h {
                Some(b) => b,
                None => units::kelvin_to_beta_h(t1_kelvin.unwrap_or(300.0))?.value(),
            };
            let q = ThresholdQuery {
                which,
                epsilon1: nu1,
                epsilon2: nu2,
                beta1_h,
                beta2_h_start: beta2h_start,
                beta2_h_end: beta2h_end,
                points,
            };
            let r = threshold::run(&q)?;
            emit(
                out,
                &if cli.json {
                    json_text(&r.to_json())
                } else {
                    r.to_text()
                },
            )?;
        }
        Command::Mc { engine, n, seed } => {
            let p = engine.params()?;
            let r = mc::sample_parallel(&p, n, seed)?;
            emit(out, &json_text(&mc::report_json(&p, &r)))?;
        }
        Command::Circuit { file, reference } => {
            let c = circuit::parse(&read(&file)?)?;
            let reference = reference
                .as_deref()
                .map(read)
                .transpose()?
                .map(|t| circuit::parse_reference(&t))
                .transpose()?;
            let r = circuit::run(&c, reference.as_ref())?;
            emit(
                out,
                &if cli.json {
                    json_text(&r.to_json())
                } else {
                    r.to_text()
                },
            )?;
        }
        Command::Verify { inject_fault } => {
            let r = verify::run(verify::Options { inject_fault });
            emit(
                out,
                &if cli.json {
                    json_text(&r.to_json())
                } else {
                    r.to_text()
                },
            )?;
            return Ok(r.passed());
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("swap-tur: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
