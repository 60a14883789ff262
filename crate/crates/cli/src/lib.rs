//! Runs the verification suites and assembles their reports.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use anyhow::{ensure, Result};
use clap::{Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

pub mod suites;

#[derive(Clone, Debug, Subcommand)]
pub enum Command {
    /// Nine-observable square: commutation, line signs, exhaustive search, parity certificate
    VerifySquare,
    /// Ten-observable star: commutation, line signs, exhaustive search, parity certificate
    VerifyStar,
    /// Decide 101-colorability of the rays in a ray file
    Color {
        rayfile: PathBuf,
        /// Fail unless the search reaches this verdict
        #[arg(long)]
        expect: Option<ExpectColoring>,
    },
    /// Decide a ±1 assignment problem given as a context file
    Solve {
        contextfile: PathBuf,
        /// Treat ids as plain labels even if they parse as Pauli strings
        #[arg(long)]
        opaque: bool,
        /// Fail unless the search reaches this verdict
        #[arg(long)]
        expect: Option<ExpectAssignment>,
    },
    /// Generate the 22.5° ladder with its gadgets and refute every coloring
    BellSet {
        /// Also write the generated rays to this file
        #[arg(long)]
        rays: Option<PathBuf>,
    },
    /// Generate Peres's 33 rays and refute every coloring
    Peres {
        /// Also write the generated rays to this file
        #[arg(long)]
        rays: Option<PathBuf>,
    },
    /// Monte Carlo check of the 2D hidden-variable model against quantum means
    BellModel {
        /// Scalar part of a custom observable
        #[arg(long, allow_hyphen_values = true)]
        a0: Option<f64>,
        /// Vector part of a custom observable, as x,y,z
        #[arg(long, value_parser = parse_vec3, allow_hyphen_values = true)]
        a: Option<[f64; 3]>,
        /// State direction, as x,y,z
        #[arg(long, value_parser = parse_vec3, allow_hyphen_values = true)]
        n: Option<[f64; 3]>,
    },
    /// Additivity of values fails for σx + σy while additivity of means holds
    VonNeumann {
        /// State direction, as x,y,z (default: drawn from the seed)
        #[arg(long, value_parser = parse_vec3, allow_hyphen_values = true)]
        n: Option<[f64; 3]>,
    },
    /// Spin-1 sum rule on random orthonormal triads
    Spin1,
    /// GHZ eigenvalues and the resulting assignment contradiction
    Ghz,
    /// Context independence of marginals and the 4A + 2B + C encoding
    Marginals,
    /// Every suite above that needs no input file
    ReportAll,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::VerifySquare => "verify-square",
            Command::VerifyStar => "verify-star",
            Command::Color { .. } => "color",
            Command::Solve { .. } => "solve",
            Command::BellSet { .. } => "bell-set",
            Command::Peres { .. } => "peres",
            Command::BellModel { .. } => "bell-model",
            Command::VonNeumann { .. } => "von-neumann",
            Command::Spin1 => "spin1",
            Command::Ghz => "ghz",
            Command::Marginals => "marginals",
            Command::ReportAll => "report-all",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ExpectColoring {
    Colorable,
    Uncolorable,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ExpectAssignment {
    Satisfiable,
    Unsat,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
}

pub fn parse_vec3(s: &str) -> Result<[f64; 3], String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(format!("expected x,y,z, got {s:?}"));
    }
    let mut v = [0.0f64; 3];
    for (slot, p) in v.iter_mut().zip(parts) {
        *slot = p.parse().map_err(|e| format!("{p:?}: {e}"))?;
        if !slot.is_finite() {
            return Err(format!("{p:?} is not finite"));
        }
    }
    Ok(v)
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub command: Command,
    /// Orthogonality tolerance for approximate rays.
    pub tolerance: f64,
    pub seed: u64,
    pub samples: u64,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        RunConfig { command, tolerance: 1e-9, seed: 0, samples: 1_000_000 }
    }

    pub fn validate(&self) -> Result<()> {
        ensure!(self.tolerance > 0.0 && self.tolerance.is_finite(), "--tol must be positive, got {}", self.tolerance);
        ensure!(self.samples >= 1, "--samples must be at least 1");
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub check: String,
    pub pass: bool,
    pub detail: String,
}

impl Verdict {
    pub fn new(check: impl Into<String>, pass: bool, detail: impl Into<String>) -> Self {
        Verdict { check: check.into(), pass, detail: detail.into() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub passed: bool,
    pub checks: Vec<Verdict>,
    /// Certificates, assignments, colorings and residuals.
    pub data: serde_json::Value,
}

impl SuiteReport {
    pub fn new(suite: &str, checks: Vec<Verdict>, data: serde_json::Value) -> Self {
        SuiteReport { suite: suite.into(), passed: checks.iter().all(|c| c.pass), checks, data }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub tolerance: f64,
    pub seed: u64,
    pub samples: u64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub input: Option<String>,
}

/// Wall-clock times in milliseconds; the only non-deterministic part of a report.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub total_ms: f64,
    pub suites_ms: BTreeMap<String, f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub config: ConfigEcho,
    pub passed: bool,
    pub suites: Vec<SuiteReport>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub timing: Option<Timing>,
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        if self.passed {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for s in &self.suites {
            let _ = writeln!(out, "== {} ==", s.suite);
            for c in &s.checks {
                let _ = writeln!(out, "[{}] {}: {}", if c.pass { "PASS" } else { "FAIL" }, c.check, c.detail);
            }
        }
        let failed: usize = self.suites.iter().map(|s| s.checks.iter().filter(|c| !c.pass).count()).sum();
        let total: usize = self.suites.iter().map(|s| s.checks.len()).sum();
        let _ = writeln!(
            out,
            "{}: {} ({} of {total} checks passed, seed {})",
            self.command,
            if self.passed { "PASS" } else { "FAIL" },
            total - failed,
            self.config.seed
        );
        if let Some(t) = &self.timing {
            let _ = writeln!(out, "elapsed: {:.1} ms", t.total_ms);
        }
        out
    }

    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Text => Ok(self.to_text()),
            Format::Json => self.to_json(),
        }
    }
}

/// Runs `config.command` and assembles the report. Errors are reserved for
/// bad input; failed checks are reported, not returned as errors.
pub fn run(config: &RunConfig) -> Result<Report> {
    config.validate()?;
    let start = Instant::now();
    let commands = match &config.command {
        Command::ReportAll => suites::report_all_commands(),
        other => vec![other.clone()],
    };
    let timed = suites::run_parallel(&commands, config)?;
    let mut suites_ms = BTreeMap::new();
    let mut reports = Vec::with_capacity(timed.len());
    for (report, ms) in timed {
        suites_ms.insert(report.suite.clone(), ms);
        reports.push(report);
    }
    let input = match &config.command {
        Command::Color { rayfile: p, .. } | Command::Solve { contextfile: p, .. } => Some(p.display().to_string()),
        _ => None,
    };
    Ok(Report {
        command: config.command.name().into(),
        config: ConfigEcho { tolerance: config.tolerance, seed: config.seed, samples: config.samples, input },
        passed: reports.iter().all(|s| s.passed),
        suites: reports,
        timing: Some(Timing { total_ms: start.elapsed().as_secs_f64() * 1e3, suites_ms }),
    })
}
