//! Report records and their JSON/CSV serializations. Schema version
//! "frag-lab/1"; CSV columns and JSON fields mirror the record field names.
//!
//! Wall-clock runtimes are kept in memory for console display but excluded
//! from serialized reports: a report is a pure function of its `RunConfig`,
//! bit-identical across runs and thread counts.

use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::HarnessError;

/// Monte Carlo estimate against an exact target: the universal verification
/// record.
#[derive(Debug, Clone, Serialize)]
pub struct MomentReport {
    pub label: String,
    pub estimate: f64,
    pub stderr: f64,
    pub exact: f64,
    pub z: f64,
    pub n: u64,
    pub replicas: u64,
    pub t: f64,
    pub q: f64,
}

impl MomentReport {
    /// Relative deviation from the exact value.
    pub fn rel_err(&self) -> f64 {
        if self.exact == 0.0 {
            self.estimate.abs()
        } else {
            ((self.estimate - self.exact) / self.exact).abs()
        }
    }
}

impl fmt::Display for MomentReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:<40} est {:>12.6} exact {:>12.6} stderr {:>10.3e} z {:>7.2}",
            self.label, self.estimate, self.exact, self.stderr, self.z
        )
    }
}

/// Outcome of one check: statistic plus either an asymptotic p-value or an
/// exact pass flag (p_value = null).
#[derive(Debug, Clone, Serialize)]
pub struct TestVerdict {
    pub name: String,
    pub statistic: f64,
    pub p_value: Option<f64>,
    pub pass: bool,
    /// Wall-clock seconds; console only, never serialized (reports are
    /// deterministic functions of the config).
    #[serde(skip)]
    pub runtime: f64,
    /// Statistical verdicts may fail at rate α under the null; exact ones
    /// never may.
    #[serde(skip)]
    pub statistical: bool,
}

impl TestVerdict {
    pub fn statistical(name: &str, statistic: f64, p_value: f64, pass: bool) -> Self {
        TestVerdict {
            name: name.to_string(),
            statistic,
            p_value: Some(p_value),
            pass,
            runtime: 0.0,
            statistical: true,
        }
    }

    pub fn exact(name: &str, statistic: f64, pass: bool) -> Self {
        TestVerdict {
            name: name.to_string(),
            statistic,
            p_value: None,
            pass,
            runtime: 0.0,
            statistical: false,
        }
    }

    pub fn with_runtime(mut self, seconds: f64) -> Self {
        self.runtime = seconds;
        self
    }
}

impl fmt::Display for TestVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.pass { "PASS" } else { "FAIL" };
        match self.p_value {
            Some(p) => write!(
                f,
                "{status} {:<52} stat {:>10.4e}  p {:>8.5}  [{:.1}s]",
                self.name, self.statistic, p, self.runtime
            ),
            None => write!(
                f,
                "{status} {:<52} stat {:>10.4e}  {}     [{:.1}s]",
                self.name,
                self.statistic,
                if self.statistical { "tol  " } else { "exact" },
                self.runtime
            ),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
}

impl std::str::FromStr for OutputFormat {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            other => Err(format!("unknown format '{other}' (expected json|csv)")),
        }
    }
}

/// Run parameters; identical configs produce bit-identical reports.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub seed: u64,
    pub threads: usize,
    pub n: u64,
    pub replicas: u64,
    pub t_list: Vec<f64>,
    pub q_list: Vec<f64>,
    #[serde(skip)]
    pub out: Option<PathBuf>,
    #[serde(skip)]
    pub format: OutputFormat,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: 42,
            threads: std::thread::available_parallelism().map_or(1, |v| v.get()),
            n: 1_000_000,
            replicas: 2000,
            t_list: vec![0.5, 1.0],
            q_list: vec![1.0, 2.0],
            out: None,
            format: OutputFormat::Json,
        }
    }
}

/// Top-level report envelope.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub seed: u64,
    pub moments: Vec<MomentReport>,
    pub verdicts: Vec<TestVerdict>,
    pub pass: bool,
}

pub const SCHEMA: &str = "frag-lab/1";

impl Report {
    pub fn new(seed: u64) -> Self {
        Report {
            schema: SCHEMA,
            seed,
            moments: Vec::new(),
            verdicts: Vec::new(),
            pass: true,
        }
    }

    pub fn to_json(&self) -> Result<String, HarnessError> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// CSV with one block per record kind, columns mirroring the field names.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        if !self.moments.is_empty() {
            out.push_str("label,estimate,stderr,exact,z,n,replicas,t,q\n");
            for m in &self.moments {
                out.push_str(&format!(
                    "{},{},{},{},{},{},{},{},{}\n",
                    m.label, m.estimate, m.stderr, m.exact, m.z, m.n, m.replicas, m.t, m.q
                ));
            }
        }
        if !self.verdicts.is_empty() {
            if !out.is_empty() {
                out.push('\n');
            }
            out.push_str("name,statistic,p_value,pass\n");
            for v in &self.verdicts {
                let p = v.p_value.map_or(String::new(), |p| p.to_string());
                out.push_str(&format!("{},{},{},{}\n", v.name, v.statistic, p, v.pass));
            }
        }
        out
    }

    pub fn write(&self, path: &Path, format: OutputFormat) -> Result<(), HarnessError> {
        let body = match format {
            OutputFormat::Json => self.to_json()?,
            OutputFormat::Csv => self.to_csv(),
        };
        let mut f = std::fs::File::create(path)?;
        f.write_all(body.as_bytes())?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_has_schema_and_no_runtime() {
        let mut r = Report::new(7);
        r.verdicts
            .push(TestVerdict::exact("demo", 1.5e-9, true).with_runtime(3.25));
        let json = r.to_json().unwrap();
        assert!(json.contains("\"schema\": \"frag-lab/1\""));
        assert!(json.contains("\"p_value\": null"));
        assert!(!json.contains("runtime"));
    }

    #[test]
    fn csv_mirrors_field_names() {
        let mut r = Report::new(7);
        r.moments.push(MomentReport {
            label: "m".into(),
            estimate: 1.0,
            stderr: 0.1,
            exact: 1.05,
            z: -0.5,
            n: 10,
            replicas: 4,
            t: 0.5,
            q: 2.0,
        });
        r.verdicts
            .push(TestVerdict::statistical("k", 0.01, 0.4, true));
        let csv = r.to_csv();
        assert!(csv.starts_with("label,estimate,stderr,exact,z,n,replicas,t,q\n"));
        assert!(csv.contains("name,statistic,p_value,pass\n"));
        assert!(csv.contains("k,0.01,0.4,true"));
    }
}
