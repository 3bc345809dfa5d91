//! Circuit files for the density-matrix simulator.
//!
//! One instruction per line (or several separated by `/`), `#` comments:
//!
//! ```text
//! init basis 0              # |00>, the default
//! init pps 0.8
//! init mixed
//! init gibbs 4.78559 11.81291 0.177 0.02
//! ry 1 1.0472
//! cnot 1 2
//! zz 3.14159
//! dephase
//! swap
//! ```
//!
//! `init` must precede the first gate. A reference state file holds four
//! rows of either four real entries or eight interleaved `re im` entries.

use std::fmt::Write as _;

use serde_json::{json, Value};
use swap_tur_core::density::{self, Matrix4, C64};
use swap_tur_core::{DensityMatrix, EngineParams, Gate, Qubit};

use crate::error::CliError;
use crate::format::{fmt_num, json_num};

#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    pub init: DensityMatrix,
    pub gates: Vec<Gate>,
}

fn parse_err(line: usize, msg: impl std::fmt::Display) -> CliError {
    CliError::Usage(format!("line {line}: {msg}"))
}

fn num(line: usize, tok: Option<&str>, what: &str) -> Result<f64, CliError> {
    let tok = tok.ok_or_else(|| parse_err(line, format!("missing {what}")))?;
    tok.parse::<f64>()
        .ok()
        .filter(|x| x.is_finite())
        .ok_or_else(|| parse_err(line, format!("bad {what} `{tok}`")))
}

fn qubit(line: usize, tok: Option<&str>) -> Result<Qubit, CliError> {
    let tok = tok.ok_or_else(|| parse_err(line, "missing qubit index"))?;
    tok.parse::<u8>()
        .ok()
        .and_then(Qubit::from_index)
        .ok_or_else(|| parse_err(line, format!("qubit must be 1 or 2, got `{tok}`")))
}

fn parse_init<'a>(
    line: usize,
    mut toks: impl Iterator<Item = &'a str>,
) -> Result<DensityMatrix, CliError> {
    let kind = toks
        .next()
        .ok_or_else(|| parse_err(line, "missing init kind"))?;
    let state = match kind {
        "basis" => {
            let k = num(line, toks.next(), "basis index")?;
            if !(k == k.trunc() && (0.0..4.0).contains(&k)) {
                return Err(parse_err(line, "basis index must be 0..3"));
            }
            DensityMatrix::basis(k as usize)
        }
        "pps" => density::pps_state(num(line, toks.next(), "polarization")?)
            .map_err(|e| parse_err(line, e))?,
        "mixed" => DensityMatrix::maximally_mixed(),
        "gibbs" => {
            let mut v = [0.0; 4];
            for (x, what) in v.iter_mut().zip(["nu1", "nu2", "beta1_h", "beta2_h"]) {
                *x = num(line, toks.next(), what)?;
            }
            let p =
                EngineParams::from_raw(v[0], v[1], v[2], v[3]).map_err(|e| parse_err(line, e))?;
            density::gibbs_product(&p)
        }
        other => return Err(parse_err(line, format!("unknown init kind `{other}`"))),
    };
    if let Some(extra) = toks.next() {
        return Err(parse_err(line, format!("unexpected `{extra}`")));
    }
    Ok(state)
}

fn parse_gate<'a>(
    line: usize,
    op: &str,
    mut toks: impl Iterator<Item = &'a str>,
) -> Result<Gate, CliError> {
    let gate = match op {
        "rx" | "ry" | "rz" => {
            let q = qubit(line, toks.next())?;
            let a = num(line, toks.next(), "angle")?;
            match op {
                "rx" => Gate::RotX(q, a),
                "ry" => Gate::RotY(q, a),
                _ => Gate::RotZ(q, a),
            }
        }
        "cnot" => {
            let control = qubit(line, toks.next())?;
            let target = qubit(line, toks.next())?;
            if control == target {
                return Err(parse_err(line, "cnot control and target must differ"));
            }
            Gate::CNot { control, target }
        }
        "swap" => Gate::Swap,
        "zz" => Gate::ZZEvolution(num(line, toks.next(), "angle")?),
        "dephase" => Gate::DephaseAll,
        other => return Err(parse_err(line, format!("unknown instruction `{other}`"))),
    };
    if let Some(extra) = toks.next() {
        return Err(parse_err(line, format!("unexpected `{extra}`")));
    }
    Ok(gate)
}

pub fn parse(src: &str) -> Result<Circuit, CliError> {
    let mut init = None;
    let mut gates = Vec::new();
    for (i, raw) in src.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("");
        for stmt in body.split('/') {
            let mut toks = stmt.split_whitespace();
            let Some(op) = toks.next() else { continue };
            let op = op.to_ascii_lowercase();
            if op == "init" {
                if init.is_some() {
                    return Err(parse_err(line, "duplicate init"));
                }
                if !gates.is_empty() {
                    return Err(parse_err(line, "init must come before the first gate"));
                }
                init = Some(parse_init(line, toks)?);
            } else {
                gates.push(parse_gate(line, &op, toks)?);
            }
        }
    }
    Ok(Circuit {
        init: init.unwrap_or_else(|| DensityMatrix::basis(0)),
        gates,
    })
}

/// Reads a reference density matrix.
pub fn parse_reference(src: &str) -> Result<DensityMatrix, CliError> {
    let mut rows = Vec::new();
    for (i, raw) in src.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("");
        let vals: Vec<f64> = body
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<f64>()
                    .map_err(|_| parse_err(line, format!("bad number `{t}`")))
            })
            .collect::<Result<_, _>>()?;
        if vals.is_empty() {
            continue;
        }
        let row: [C64; 4] = match vals.len() {
            4 => std::array::from_fn(|k| C64::new(vals[k], 0.0)),
            8 => std::array::from_fn(|k| C64::new(vals[2 * k], vals[2 * k + 1])),
            n => {
                return Err(parse_err(
                    line,
                    format!("expected 4 or 8 numbers, found {n}"),
                ))
            }
        };
        if rows.len() == 4 {
            return Err(parse_err(line, "more than 4 rows"));
        }
        rows.push(row);
    }
    let m: [[C64; 4]; 4] = rows.try_into().map_err(|r: Vec<_>| {
        CliError::Usage(format!(
            "reference state: expected 4 rows, found {}",
            r.len()
        ))
    })?;
    DensityMatrix::new(Matrix4(m)).map_err(|e| CliError::Usage(format!("reference state: {e}")))
}

#[derive(Debug, Clone, PartialEq)]
pub struct CircuitReport {
    pub input: DensityMatrix,
    pub output: DensityMatrix,
    pub fidelity: Option<f64>,
}

pub fn run(c: &Circuit, reference: Option<&DensityMatrix>) -> Result<CircuitReport, CliError> {
    let output = density::apply_circuit(&c.init, &c.gates);
    let fidelity = reference
        .map(|r| density::fidelity(&output, r))
        .transpose()?;
    Ok(CircuitReport {
        input: c.init,
        output,
        fidelity,
    })
}

fn cell(z: C64) -> String {
    if z.im == 0.0 {
        fmt_num(z.re)
    } else {
        format!(
            "{}{}{}i",
            fmt_num(z.re),
            if z.im < 0.0 { "-" } else { "+" },
            fmt_num(z.im.abs())
        )
    }
}

impl CircuitReport {
    pub fn to_text(&self) -> String {
        let mut s = String::from("final state:\n");
        for row in self.output.matrix().0 {
            let cells: Vec<String> = row.iter().map(|&z| cell(z)).collect();
            let _ = writeln!(s, "  {}", cells.join("  "));
        }
        let _ = writeln!(s, "purity: {}", fmt_num(self.output.purity()));
        if let Some(f) = self.fidelity {
            let _ = writeln!(s, "fidelity: {}", fmt_num(f));
        }
        s
    }

    pub fn to_json(&self) -> Value {
        let m = self.output.matrix().0;
        json!({
            "re": m.iter().map(|r| r.iter().map(|z| json_num(z.re)).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "im": m.iter().map(|r| r.iter().map(|z| json_num(z.im)).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "diagonal": self.output.diagonal().iter().map(|&x| json_num(x)).collect::<Vec<_>>(),
            "purity": json_num(self.output.purity()),
            "fidelity": self.fidelity.map(json_num),
        })
    }
}
