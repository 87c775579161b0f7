use serde::{Deserialize, Serialize};

use crate::profiles::ComparisonProfile;

const MAX_WITNESSES: usize = 16;

/// Outcome of one check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    Skipped,
    /// The manifold fails the curvature hypotheses; the check's numbers are
    /// informational only.
    HypothesesViolated,
}

/// One offending (or, for equality checks, extreme) sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub descriptor: String,
    pub margin: f64,
}

/// A point of a measured-versus-bound curve, kept for plotting.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesPoint {
    pub x: f64,
    pub measured: f64,
    pub bound: f64,
}

/// Margin-quantified result of a single inequality check.
///
/// Margins are `bound - measured`; a sample is a violation when its margin is
/// below `-tolerance` (tolerance is per sample and the field keeps the largest
/// one used).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub sample_count: usize,
    pub violation_count: usize,
    pub worst_margin: Option<f64>,
    pub max_abs_margin: Option<f64>,
    pub tolerance: f64,
    pub equality: bool,
    pub verdict: Verdict,
    pub witnesses: Vec<Witness>,
    pub excluded: Vec<String>,
    pub notes: Vec<String>,
    pub series: Vec<SeriesPoint>,
}

impl CheckResult {
    pub fn skipped(name: &str, reason: impl Into<String>) -> Self {
        Self {
            name: name.to_string(),
            sample_count: 0,
            violation_count: 0,
            worst_margin: None,
            max_abs_margin: None,
            tolerance: 0.0,
            equality: false,
            verdict: Verdict::Skipped,
            witnesses: Vec::new(),
            excluded: Vec::new(),
            notes: vec![reason.into()],
            series: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    /// Downgrades a pass or fail to `HypothesesViolated`.
    pub fn gate(mut self, hypotheses_hold: bool) -> Self {
        if !hypotheses_hold && matches!(self.verdict, Verdict::Pass | Verdict::Fail) {
            self.verdict = Verdict::HypothesesViolated;
            self.equality = false;
            self.notes
                .push("curvature hypotheses violated; margins are informational".to_string());
        }
        self
    }
}

/// Collects samples for a [`CheckResult`].
#[derive(Debug)]
pub struct CheckBuilder {
    name: String,
    samples: usize,
    violations: usize,
    worst: Option<f64>,
    max_abs: Option<f64>,
    tolerance: f64,
    witnesses: Vec<Witness>,
    excluded: Vec<String>,
    notes: Vec<String>,
    series: Vec<SeriesPoint>,
}

impl CheckBuilder {
    pub fn new(name: &str) -> Self {
        Self {
            name: name.to_string(),
            samples: 0,
            violations: 0,
            worst: None,
            max_abs: None,
            tolerance: 0.0,
            witnesses: Vec::new(),
            excluded: Vec::new(),
            notes: Vec::new(),
            series: Vec::new(),
        }
    }

    /// Records `measured <= bound` with the given tolerance. The descriptor is
    /// only built for violations.
    pub fn sample<D: FnOnce() -> String>(&mut self, measured: f64, bound: f64, tol: f64, descriptor: D) -> f64 {
        let margin = bound - measured;
        self.samples += 1;
        self.tolerance = self.tolerance.max(tol);
        self.worst = Some(self.worst.map_or(margin, |w| w.min(margin)));
        self.max_abs = Some(self.max_abs.map_or(margin.abs(), |w| w.max(margin.abs())));
        if margin < -tol || margin.is_nan() {
            self.violations += 1;
            self.push_witness(Witness {
                descriptor: descriptor(),
                margin,
            });
        }
        margin
    }

    fn push_witness(&mut self, w: Witness) {
        self.witnesses.push(w);
        if self.witnesses.len() > 4 * MAX_WITNESSES {
            self.trim_witnesses();
        }
    }

    fn trim_witnesses(&mut self) {
        self.witnesses.sort_by(|a, b| {
            a.margin
                .total_cmp(&b.margin)
                .then_with(|| a.descriptor.cmp(&b.descriptor))
        });
        self.witnesses.truncate(MAX_WITNESSES);
    }

    pub fn series(&mut self, x: f64, measured: f64, bound: f64) {
        self.series.push(SeriesPoint { x, measured, bound });
    }

    pub fn exclude(&mut self, what: impl Into<String>) {
        self.excluded.push(what.into());
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    /// Finishes the check; `equality` is reported only if every sample sits
    /// within `equality_tol` of its bound.
    pub fn finish(mut self, equality_tol: f64) -> CheckResult {
        self.trim_witnesses();
        let verdict = if self.samples == 0 {
            Verdict::Skipped
        } else if self.violations == 0 {
            Verdict::Pass
        } else {
            Verdict::Fail
        };
        if self.samples == 0 && self.notes.is_empty() {
            self.notes.push("no applicable samples".to_string());
        }
        let equality = verdict == Verdict::Pass && self.max_abs.is_some_and(|m| m <= equality_tol);
        CheckResult {
            name: self.name,
            sample_count: self.samples,
            violation_count: self.violations,
            worst_margin: self.worst,
            max_abs_margin: self.max_abs,
            tolerance: self.tolerance,
            equality,
            verdict,
            witnesses: self.witnesses,
            excluded: self.excluded,
            notes: self.notes,
            series: self.series,
        }
    }
}

/// Full record of a verification run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub report_version: u32,
    pub manifold: String,
    pub profile: ComparisonProfile,
    pub hypotheses_hold: bool,
    pub checks: Vec<CheckResult>,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub generator: String,
    pub parameters: std::collections::BTreeMap<String, f64>,
    pub resolution: Option<f64>,
    pub seed: u64,
}

/// Exit status of a run, ordered by severity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Pass,
    Violation,
    HypothesesViolated,
}

impl VerificationReport {
    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn outcome(&self) -> Outcome {
        if !self.hypotheses_hold {
            return Outcome::HypothesesViolated;
        }
        if self.checks.iter().any(|c| c.verdict == Verdict::Fail) {
            Outcome::Violation
        } else {
            Outcome::Pass
        }
    }

    /// Short human-readable table.
    pub fn summary(&self) -> String {
        let mut out = format!(
            "manifold: {}\nprofile: n = {}, H = {:.6}\nhypotheses hold: {}\n",
            self.manifold,
            self.profile.dim(),
            self.profile.mean_curvature(),
            self.hypotheses_hold
        );
        for c in &self.checks {
            let verdict = match c.verdict {
                Verdict::Pass if c.equality => "pass (equality)",
                Verdict::Pass => "pass",
                Verdict::Fail => "FAIL",
                Verdict::Skipped => "skipped",
                Verdict::HypothesesViolated => "hypotheses-violated",
            };
            let worst = c.worst_margin.map_or_else(|| "-".to_string(), |m| format!("{m:.3e}"));
            out.push_str(&format!(
                "  {:<24} {:<22} samples {:>6}  violations {:>5}  worst margin {}\n",
                c.name, verdict, c.sample_count, c.violation_count, worst
            ));
        }
        out
    }
}
