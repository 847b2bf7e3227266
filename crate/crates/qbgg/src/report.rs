//! Uniform result record for every check in the crate.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::time::Instant;

use serde::Serialize;

/// Outcome of a check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    /// The identity holds exactly.
    Pass,
    /// The identity fails; see the defect summary.
    Fail,
    /// Informational probe; never counts as a failure.
    Info,
}

/// How identities in the spectral parameter were compared.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CompareMode {
    /// Polynomials in `x` compared coefficient by coefficient.
    CoefficientWise,
    /// Polynomials compared at sampled values of `x`.
    SampledX,
}

/// One check outcome; serialised as a JSON line by the CLI.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    /// Name of the check (e.g. `"rtt"`).
    pub check: String,
    /// The family or formula being checked.
    pub family: String,
    /// Parameters, already formatted.
    pub params: BTreeMap<String, String>,
    /// Outcome.
    pub status: Status,
    /// Number of non-zero defect coefficients (zero for a pass).
    pub defect_terms: usize,
    /// A few defect descriptions for diagnosis.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub defect_sample: Vec<String>,
    /// Comparison mode for identities in `x`.
    pub mode: CompareMode,
    /// Sampling seed, when random parameters were drawn.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Free-form informational notes.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    /// Wall time; only recorded when timing output is requested, so that
    /// report streams stay byte-identical by default.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

/// Maximal number of defect descriptions kept in a report.
pub const DEFECT_SAMPLE_LIMIT: usize = 5;

impl CheckReport {
    /// Starts a passing report with no parameters.
    pub fn new(check: impl Into<String>, family: impl Into<String>) -> Self {
        CheckReport {
            check: check.into(),
            family: family.into(),
            params: BTreeMap::new(),
            status: Status::Pass,
            defect_terms: 0,
            defect_sample: Vec::new(),
            mode: CompareMode::CoefficientWise,
            seed: None,
            notes: Vec::new(),
            elapsed_ms: None,
        }
    }

    /// Adds a parameter.
    pub fn param(mut self, key: &str, value: impl Display) -> Self {
        self.params.insert(key.to_string(), value.to_string());
        self
    }

    /// Records the sampling seed.
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    /// Records a defect; the report becomes a failure.
    pub fn defect(&mut self, description: impl FnOnce() -> String) {
        self.defect_terms += 1;
        if self.defect_sample.len() < DEFECT_SAMPLE_LIMIT {
            self.defect_sample.push(description());
        }
        if self.status == Status::Pass {
            self.status = Status::Fail;
        }
    }

    /// Adds a note.
    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    /// Marks the report as informational.
    pub fn informational(mut self) -> Self {
        self.status = Status::Info;
        self
    }

    /// Merges the defects of another report into this one.
    pub fn absorb(&mut self, other: &CheckReport) {
        for d in &other.defect_sample {
            if self.defect_sample.len() < DEFECT_SAMPLE_LIMIT {
                self.defect_sample.push(d.clone());
            }
        }
        self.defect_terms += other.defect_terms;
        if other.status == Status::Fail {
            self.status = Status::Fail;
        }
    }

    /// Records an error as a failure.
    pub fn fail_with(&mut self, err: &crate::error::QbggError) {
        self.defect(|| format!("error: {err}"));
    }

    /// True unless the report is a failure.
    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }

    /// Stores the elapsed time since `start`.
    pub fn timed(mut self, start: Instant) -> Self {
        self.elapsed_ms = Some(start.elapsed().as_millis() as u64);
        self
    }

    /// Single-line JSON.
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("reports always serialise")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defects_turn_report_into_failure() {
        let mut r = CheckReport::new("rtt", "A-Verma").param("n", 2);
        assert!(r.passed());
        for i in 0..8 {
            r.defect(|| format!("d{i}"));
        }
        assert!(!r.passed());
        assert_eq!(r.defect_terms, 8);
        assert_eq!(r.defect_sample.len(), DEFECT_SAMPLE_LIMIT);
    }

    #[test]
    fn json_line_is_stable() {
        let r = CheckReport::new("lie", "C").param("r", 2);
        assert_eq!(
            r.to_json_line(),
            r#"{"check":"lie","family":"C","params":{"r":"2"},"status":"pass","defect_terms":0,"mode":"coefficient-wise"}"#
        );
    }
}
