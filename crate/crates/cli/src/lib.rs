//! Verification runs: build a model, evaluate the registered checks over
//! seeded points, and render the report.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::time::Instant;

use kenmotsu::models::{build_control, build_example_2_2, build_example_2_3, build_warped, WarpedProductSpec};
use kenmotsu::structure::{evaluate_point, merge_checks, registry, sample_points, Bound, CheckSpec, CheckStatus, Group, IdentityCheck};
use kenmotsu::ChartModel;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("unknown model `{0}` (expected example22, example23, warped or control)")]
    UnknownModel(String),
    #[error("unknown check id `{0}`")]
    UnknownCheck(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Model(#[from] kenmotsu::Error),
}

impl CliError {
    /// Every configuration problem is a usage error.
    pub fn exit_code(&self) -> i32 {
        2
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub model: String,
    pub n: usize,
    pub s: usize,
    pub c1: f64,
    pub c2: f64,
    pub k: f64,
    pub points: usize,
    pub seed: u64,
    pub tol: BTreeMap<String, f64>,
    pub checks: Option<Vec<String>>,
    pub format: Format,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            model: "example22".into(),
            n: 2,
            s: 3,
            c1: 1.0,
            c2: 1.0,
            k: 2.0,
            points: 50,
            seed: 42,
            tol: BTreeMap::new(),
            checks: None,
            format: Format::Text,
        }
    }
}

impl RunConfig {
    pub fn for_model(model: &str, n: usize, s: usize) -> Self {
        Self { model: model.into(), n, s, ..Self::default() }
    }

    /// Builds the chart model named by the config.
    pub fn build_model(&self) -> Result<ChartModel, CliError> {
        let model = match self.model.as_str() {
            "example22" => build_example_2_2(self.n, self.s)?,
            "example23" => {
                if (self.n, self.s) != (2, 3) {
                    return Err(CliError::Config(format!("example23 has n = 2, s = 3, got n = {}, s = {}", self.n, self.s)));
                }
                build_example_2_3(self.c1, self.c2)?
            }
            "warped" => build_warped(&WarpedProductSpec::standard(self.n, self.s, self.k))?,
            "control" => build_control(self.n, self.s)?,
            other => return Err(CliError::UnknownModel(other.into())),
        };
        Ok(model)
    }

    /// Registered checks selected by the filter, after validating every id
    /// named in the filter and the tolerance overrides.
    pub fn selected_specs(&self) -> Result<Vec<CheckSpec>, CliError> {
        let all = registry();
        let known: BTreeSet<&str> = all.iter().map(|c| c.id).collect();
        let named = self.checks.iter().flatten().chain(self.tol.keys());
        if let Some(bad) = named.into_iter().find(|id| !known.contains(id.as_str())) {
            return Err(CliError::UnknownCheck(bad.clone()));
        }
        if let Some((id, v)) = self.tol.iter().find(|(_, v)| !(v.is_finite() && **v >= 0.0)) {
            return Err(CliError::Config(format!("tolerance for {id} must be finite and non-negative, got {v}")));
        }
        Ok(match &self.checks {
            None => all,
            Some(ids) => all.into_iter().filter(|c| ids.iter().any(|id| id == c.id)).collect(),
        })
    }

    fn validate(&self) -> Result<(), CliError> {
        if self.points == 0 {
            return Err(CliError::Config("points must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    Fail,
    Error,
    Diagnostic,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointError {
    pub point: usize,
    pub message: String,
}

/// One check in the report. Non-finite residuals serialize as `null`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub id: String,
    pub status: String,
    pub outcome: Outcome,
    pub residual: Option<f64>,
    pub tolerance: Option<f64>,
    pub bound: String,
    pub samples: usize,
    pub notes: String,
    pub error: Option<PointError>,
}

impl From<&IdentityCheck> for CheckRecord {
    fn from(c: &IdentityCheck) -> Self {
        let outcome = match (c.passed(), &c.error) {
            (None, _) => Outcome::Diagnostic,
            (Some(_), Some(_)) => Outcome::Error,
            (Some(true), None) => Outcome::Pass,
            (Some(false), None) => Outcome::Fail,
        };
        Self {
            id: c.id.clone(),
            status: match c.status {
                CheckStatus::Assert => "assert",
                CheckStatus::Diagnostic => "diagnostic",
            }
            .into(),
            outcome,
            residual: c.residual.is_finite().then_some(c.residual),
            tolerance: c.tolerance,
            bound: match c.bound {
                Bound::Upper => "upper",
                Bound::Lower => "lower",
            }
            .into(),
            samples: c.samples,
            notes: c.notes.clone(),
            error: c.error.as_ref().map(|(point, message)| PointError { point: *point, message: message.clone() }),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub asserts_total: usize,
    pub asserts_failed: usize,
    pub diagnostics: usize,
    pub wall_time_seconds: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub config: RunConfig,
    pub checks: Vec<CheckRecord>,
    pub summary: Summary,
}

impl VerificationReport {
    /// 0 when every assert passes, 1 otherwise. Diagnostics never count.
    pub fn exit_code(&self) -> i32 {
        if self.summary.asserts_failed == 0 {
            0
        } else {
            1
        }
    }

    pub fn check(&self, id: &str) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.id == id)
    }
}

/// Evaluates `specs` at every point in parallel and merges by id.
pub fn run_parallel(model: &ChartModel, points: &[Vec<f64>], seed: u64, specs: &[CheckSpec]) -> Vec<IdentityCheck> {
    let per_point: Vec<Vec<IdentityCheck>> = points.par_iter().enumerate().map(|(i, p)| evaluate_point(model, p, i, seed, specs)).collect();
    merge_checks(per_point)
}

/// Runs the configured verification. The finite-difference oracle runs over
/// all points before anything else.
pub fn run_verify(config: &RunConfig) -> Result<VerificationReport, CliError> {
    config.validate()?;
    let model = config.build_model()?;
    let specs = config.selected_specs()?;
    let start = Instant::now();
    let points = sample_points(model.dim(), config.points, config.seed);
    let (oracle, rest): (Vec<CheckSpec>, Vec<CheckSpec>) = specs.into_iter().partition(|c| c.group == Group::Oracle);
    let first = run_parallel(&model, &points, config.seed, &oracle);
    let second = run_parallel(&model, &points, config.seed, &rest);
    let mut merged = merge_checks([first, second]);
    for c in &mut merged {
        if let Some(&t) = config.tol.get(&c.id) {
            c.set_tolerance(t);
        }
    }
    let checks: Vec<CheckRecord> = merged.iter().map(CheckRecord::from).collect();
    let asserts_total = checks.iter().filter(|c| c.outcome != Outcome::Diagnostic).count();
    let asserts_failed = checks.iter().filter(|c| matches!(c.outcome, Outcome::Fail | Outcome::Error)).count();
    let diagnostics = checks.len() - asserts_total;
    Ok(VerificationReport {
        config: config.clone(),
        checks,
        summary: Summary { asserts_total, asserts_failed, diagnostics, wall_time_seconds: start.elapsed().as_secs_f64() },
    })
}

fn sci(v: Option<f64>) -> String {
    v.map_or_else(|| "-".into(), |x| format!("{x:.3e}"))
}

/// Renders the report. JSON is pretty-printed with a trailing newline.
pub fn emit_report(report: &VerificationReport, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("report serializes");
            s.push('\n');
            s
        }
        Format::Text => {
            let c = &report.config;
            let mut out = String::new();
            let _ = writeln!(out, "model {} n={} s={} points={} seed={}", c.model, c.n, c.s, c.points, c.seed);
            let _ =
                writeln!(out, "{:<28} {:<10} {:<10} {:>12} {:>12} {:>8}", "id", "status", "outcome", "residual", "tolerance", "samples");
            for r in &report.checks {
                let outcome = format!("{:?}", r.outcome).to_lowercase();
                let residual = if r.residual.is_none() && r.error.is_none() { "inf".into() } else { sci(r.residual) };
                let _ = writeln!(
                    out,
                    "{:<28} {:<10} {:<10} {:>12} {:>12} {:>8}",
                    r.id,
                    r.status,
                    outcome,
                    residual,
                    sci(r.tolerance),
                    r.samples
                );
                if let Some(e) = &r.error {
                    let _ = writeln!(out, "    error at point {}: {}", e.point, e.message);
                }
            }
            let s = &report.summary;
            let _ = writeln!(
                out,
                "asserts {} failed {} diagnostics {} time {:.2}s",
                s.asserts_total, s.asserts_failed, s.diagnostics, s.wall_time_seconds
            );
            out
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_ids_are_rejected() {
        let mut c = RunConfig::for_model("control", 1, 1);
        c.checks = Some(vec!["eq9".into(), "eq99".into()]);
        assert!(matches!(c.selected_specs(), Err(CliError::UnknownCheck(id)) if id == "eq99"));
        c.checks = None;
        c.tol.insert("nope".into(), 1.0);
        assert!(matches!(c.selected_specs(), Err(CliError::UnknownCheck(_))));
    }

    #[test]
    fn tolerance_override_applies_to_asserts() {
        let mut c = RunConfig::for_model("control", 1, 1);
        c.points = 2;
        c.checks = Some(vec!["gak_d_phi".into()]);
        assert_eq!(run_verify(&c).unwrap().exit_code(), 1);
        c.tol.insert("gak_d_phi".into(), 10.0);
        let r = run_verify(&c).unwrap();
        assert_eq!(r.check("gak_d_phi").unwrap().tolerance, Some(10.0));
        assert_eq!(r.exit_code(), 0);
    }

    #[test]
    fn example23_dimensions_are_fixed() {
        assert!(RunConfig::for_model("example23", 2, 3).build_model().is_ok());
        assert!(matches!(RunConfig::for_model("example23", 1, 1).build_model(), Err(CliError::Config(_))));
    }

    #[test]
    fn zero_points_is_a_usage_error() {
        let c = RunConfig { points: 0, ..RunConfig::default() };
        assert!(run_verify(&c).is_err());
    }
}
