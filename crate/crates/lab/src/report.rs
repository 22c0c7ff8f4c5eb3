//! Report records. Everything here is deterministic given the config;
//! wall-clock data goes into [`RunMetadata`] instead.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::config::Suite;
use crate::params_io::ParamSummary;
use crate::tolerances::{Settings, Tolerances};

// JSON has no NaN/inf; those travel as null.
mod finite {
    use super::*;

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        if x.is_finite() {
            s.serialize_f64(*x)
        } else {
            s.serialize_none()
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::NAN))
    }
}

/// How `measured` is judged against `expected` and `tolerance`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    /// `|measured - expected| <= tolerance`
    Within,
    /// `measured <= tolerance`
    AtMost,
    /// `measured >= tolerance`
    AtLeast,
    /// Reported only; never fails a run.
    Info,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseRecord {
    pub suite: Suite,
    pub case_id: String,
    pub quantity: String,
    #[serde(with = "finite")]
    pub measured: f64,
    #[serde(with = "finite")]
    pub expected: f64,
    #[serde(with = "finite")]
    pub tolerance: f64,
    pub check: Check,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl CaseRecord {
    pub fn new(
        suite: Suite,
        case_id: &str,
        quantity: impl Into<String>,
        measured: f64,
        expected: f64,
        tolerance: f64,
        check: Check,
    ) -> Self {
        let pass = match check {
            Check::Within => (measured - expected).abs() <= tolerance,
            Check::AtMost => measured <= tolerance,
            Check::AtLeast => measured >= tolerance,
            Check::Info => true,
        };
        Self {
            suite,
            case_id: case_id.to_string(),
            quantity: quantity.into(),
            measured,
            expected,
            tolerance,
            check,
            pass,
            detail: None,
        }
    }

    pub fn info(suite: Suite, case_id: &str, quantity: impl Into<String>, measured: f64, expected: f64) -> Self {
        Self::new(suite, case_id, quantity, measured, expected, f64::NAN, Check::Info)
    }

    /// A failed case carrying an error message.
    pub fn error(suite: Suite, case_id: &str, quantity: impl Into<String>, err: impl std::fmt::Display) -> Self {
        let mut r = Self::new(suite, case_id, quantity, f64::NAN, f64::NAN, f64::NAN, Check::AtMost);
        r.pass = false;
        r.detail = Some(err.to_string());
        r
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }

    pub fn asserted(&self) -> bool {
        self.check != Check::Info
    }
}

/// One point of an error-vs-radius series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticPoint {
    pub case_id: String,
    pub m: usize,
    pub which: String,
    pub r: f64,
    #[serde(with = "finite")]
    pub measured: f64,
    pub predicted: f64,
    #[serde(with = "finite")]
    pub rel_err: f64,
}

/// One point of a residual-vs-spacing series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualPoint {
    pub case_id: String,
    pub n: usize,
    pub seed: Option<u64>,
    pub which: String,
    pub h: f64,
    #[serde(with = "finite")]
    pub max_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub pass: bool,
    pub cases: Vec<CaseRecord>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub residual_points: Vec<ResidualPoint>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub asymptotic_points: Vec<AsymptoticPoint>,
}

impl SuiteReport {
    pub fn new(suite: Suite) -> Self {
        Self { suite, pass: true, cases: Vec::new(), residual_points: Vec::new(), asymptotic_points: Vec::new() }
    }

    pub(crate) fn finish(mut self) -> Self {
        self.pass = self.cases.iter().all(|c| c.pass);
        self
    }

    pub fn failures(&self) -> impl Iterator<Item = &CaseRecord> {
        self.cases.iter().filter(|c| !c.pass)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub pass: bool,
    pub tolerances: Tolerances,
    pub settings: Settings,
    pub params: Vec<ParamSummary>,
    pub suites: Vec<SuiteReport>,
}

impl VerificationReport {
    pub fn suite(&self, s: Suite) -> Option<&SuiteReport> {
        self.suites.iter().find(|r| r.suite == s)
    }

    pub fn case_count(&self) -> usize {
        self.suites.iter().map(|s| s.cases.len()).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseTiming {
    pub case_id: String,
    pub runtime_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteTiming {
    pub suite: Suite,
    pub runtime_ms: f64,
    pub cases: Vec<CaseTiming>,
}

/// Timestamps and runtimes, kept apart from the deterministic report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunMetadata {
    pub started_unix_s: u64,
    pub total_runtime_ms: f64,
    pub suites: Vec<SuiteTiming>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn checks() {
        assert!(CaseRecord::new(Suite::Pde, "a", "q", 2.1, 2.0, 0.5, Check::Within).pass);
        assert!(!CaseRecord::new(Suite::Pde, "a", "q", 2.6, 2.0, 0.5, Check::Within).pass);
        assert!(CaseRecord::new(Suite::Pde, "a", "q", 1e-4, 0.0, 1e-3, Check::AtMost).pass);
        assert!(!CaseRecord::new(Suite::Pde, "a", "q", f64::NAN, 0.0, 1e-3, Check::AtMost).pass);
        assert!(!CaseRecord::new(Suite::Pde, "a", "q", 1.2, 0.0, 1.5, Check::AtLeast).pass);
        let i = CaseRecord::info(Suite::Pde, "a", "q", 7.0, 3.0);
        assert!(i.pass && !i.asserted());
        assert!(!CaseRecord::error(Suite::Mass, "a", "q", "boom").pass);
    }

    #[test]
    fn non_finite_values_round_trip_as_null() {
        let r = CaseRecord::info(Suite::Pde, "a", "q", f64::NAN, 1.0);
        let js = serde_json::to_string(&r).unwrap();
        assert!(js.contains("\"measured\":null"));
        let back: CaseRecord = serde_json::from_str(&js).unwrap();
        assert!(back.measured.is_nan() && back.tolerance.is_nan());
        assert_eq!(back.expected, 1.0);
    }
}
