use std::fmt::Write as _;
use std::process::ExitCode;

use hardy_core::{HardyError, HardyParams};
use serde::Serialize;

/// Failure before a report could be produced.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags, files or parameters.
    Invalid(String),
    /// Quadrature or another numerical step failed.
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Invalid(_) => ExitCode::from(1),
            CliError::Numerical(_) => ExitCode::from(2),
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Invalid(m) | CliError::Numerical(m) => m,
        }
    }
}

impl From<HardyError> for CliError {
    fn from(e: HardyError) -> Self {
        match e {
            HardyError::ConvergenceFailure { .. } => CliError::Numerical(e.to_string()),
            _ => CliError::Invalid(e.to_string()),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub delta: f64,
    pub pass: bool,
}

/// Flat record printed by every subcommand.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    #[serde(rename = "N")]
    pub n: Option<u32>,
    pub s: Option<f64>,
    pub p: Option<f64>,
    pub value: f64,
    pub err: Option<f64>,
    pub method: String,
    pub checks: Vec<Check>,
    /// Human-readable lines shown before the checks in text mode.
    #[serde(skip)]
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(method: impl Into<String>, value: f64) -> Report {
        Report {
            n: None,
            s: None,
            p: None,
            value,
            err: None,
            method: method.into(),
            checks: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn with_params(mut self, params: &HardyParams) -> Report {
        self.n = Some(params.dim());
        self.s = Some(params.s());
        self.p = Some(params.p());
        self
    }

    pub fn with_p(mut self, p: f64) -> Report {
        self.p = Some(p);
        self
    }

    pub fn with_err(mut self, err: f64) -> Report {
        self.err = Some(err);
        self
    }

    pub fn check(&mut self, name: impl Into<String>, delta: f64, pass: bool) {
        self.checks.push(Check {
            name: name.into(),
            delta,
            pass,
        });
    }

    pub fn note(&mut self, line: impl Into<String>) {
        self.notes.push(line.into());
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if let (Some(n), Some(s), Some(p)) = (self.n, self.s, self.p) {
            let _ = writeln!(out, "N = {n}, s = {s}, p = {p}");
        } else if let Some(p) = self.p {
            let _ = writeln!(out, "p = {p}");
        }
        let _ = writeln!(out, "value = {}", text_float(self.value));
        if let Some(err) = self.err {
            let _ = writeln!(out, "error estimate = {err:e}");
        }
        let _ = writeln!(out, "method = {}", self.method);
        for line in &self.notes {
            let _ = writeln!(out, "{line}");
        }
        for c in &self.checks {
            let verdict = if c.pass { "OK" } else { "FAIL" };
            let _ = writeln!(out, "{}: {verdict} (delta = {:e})", c.name, c.delta);
        }
        out
    }
}

/// Shortest round-trip form, in exponent notation far from 1.
pub fn text_float(x: f64) -> String {
    let a = x.abs();
    if a != 0.0 && a.is_finite() && !(1e-4..1e16).contains(&a) {
        format!("{x:e}")
    } else {
        format!("{x}")
    }
}

/// `{:.16e}`: 17 significant digits, enough to round-trip an `f64`.
pub fn csv_float(x: f64) -> String {
    format!("{x:.16e}")
}
