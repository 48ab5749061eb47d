//! Check reports, spectrum report JSON and atomic output.

use std::io::Write;
use std::path::Path;

use num_complex::Complex64;
use serde_json::{json, Map, Value};

use crate::error::Result;
use crate::spectra::{SpectrumReport, Witness};
use crate::words::Word;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    /// Reported outcome that is not a pass/fail test.
    Finding,
    Skipped,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Finding => "finding",
            Status::Skipped => "skipped",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckEntry {
    pub name: String,
    pub status: Status,
    pub max_defect: Option<f64>,
    pub tolerance: Option<f64>,
    pub witness: Option<String>,
    pub details: Map<String, Value>,
    pub seconds: Option<f64>,
}

impl CheckEntry {
    /// Passes iff `max_defect <= tolerance`.
    pub fn measured(name: &str, max_defect: f64, tolerance: f64, witness: Option<String>) -> Self {
        CheckEntry {
            name: name.into(),
            status: if max_defect <= tolerance {
                Status::Pass
            } else {
                Status::Fail
            },
            max_defect: Some(max_defect),
            tolerance: Some(tolerance),
            witness,
            details: Map::new(),
            seconds: None,
        }
    }

    pub fn finding(name: &str, details: Map<String, Value>) -> Self {
        CheckEntry {
            name: name.into(),
            status: Status::Finding,
            max_defect: None,
            tolerance: None,
            witness: None,
            details,
            seconds: None,
        }
    }

    pub fn skipped(name: &str, reason: impl Into<String>) -> Self {
        let mut details = Map::new();
        details.insert("reason".into(), Value::String(reason.into()));
        CheckEntry {
            name: name.into(),
            status: Status::Skipped,
            max_defect: None,
            tolerance: None,
            witness: None,
            details,
            seconds: None,
        }
    }

    pub fn with(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.details.insert(key.into(), value.into());
        self
    }

    /// Downgrades a pass to a fail when `ok` is false.
    pub fn require(mut self, ok: bool) -> Self {
        if !ok && self.status == Status::Pass {
            self.status = Status::Fail;
        }
        self
    }

    pub fn failed(&self) -> bool {
        self.status == Status::Fail
    }

    pub fn to_json(&self) -> Value {
        let mut out = Map::new();
        out.insert("name".into(), self.name.clone().into());
        out.insert("status".into(), self.status.as_str().into());
        out.insert("pass".into(), (!self.failed()).into());
        out.insert("max_defect".into(), self.max_defect.map_or(Value::Null, Value::from));
        out.insert("tolerance".into(), self.tolerance.map_or(Value::Null, Value::from));
        out.insert("witness".into(), self.witness.clone().map_or(Value::Null, Value::from));
        if !self.details.is_empty() {
            out.insert("details".into(), Value::Object(self.details.clone()));
        }
        if let Some(s) = self.seconds {
            out.insert("seconds".into(), s.into());
        }
        Value::Object(out)
    }
}

pub fn all_passed(entries: &[CheckEntry]) -> bool {
    entries.iter().all(|e| !e.failed())
}

/// Report skeleton shared by the commands.
pub fn envelope(command: &str, config: Value, entries: &[CheckEntry]) -> Map<String, Value> {
    let mut out = Map::new();
    out.insert("version".into(), env!("CARGO_PKG_VERSION").into());
    out.insert("command".into(), command.into());
    out.insert("config".into(), config);
    out.insert("checks".into(), entries.iter().map(CheckEntry::to_json).collect());
    out.insert("passed".into(), all_passed(entries).into());
    out
}

pub fn complex_json(z: Complex64) -> Value {
    json!([z.re, z.im])
}

pub fn complex_list(zs: &[Complex64]) -> Value {
    zs.iter().copied().map(complex_json).collect()
}

pub fn coefficient_json<'a>(items: impl IntoIterator<Item = &'a (Word, Complex64)>, n: usize) -> Value {
    Value::Object(
        items
            .into_iter()
            .map(|(w, z)| (w.format(n), complex_json(*z)))
            .collect(),
    )
}

fn witness_json(w: &Witness, n: usize) -> Value {
    match w {
        Witness::None => Value::Null,
        Witness::Eigenvector(coeffs) => json!({"kind": "eigenvector", "coeffs": coefficient_json(coeffs, n)}),
        Witness::RightInverse(r) => json!({
            "kind": "right_inverse",
            "lambda_inverse": complex_list(&r.lambda_inverse),
            "factors": complex_list(&r.factors),
        }),
        Witness::Growth(t) => json!({
            "kind": "growth",
            "case": t.case.as_str(),
            "letter": t.letter,
            "component": t.component,
            "assumed_norm": t.assumed_norm,
            "table": t.rows.iter().map(|r| json!([r.k, r.bound])).collect::<Vec<_>>(),
        }),
        Witness::ZeroLeft(z) => json!({
            "kind": "zero_left_inverse",
            "recovered": z.recovered.iter().map(|c| coefficient_json(c, n)).collect::<Vec<_>>(),
        }),
    }
}

/// `{"lambda": [[re, im], …], "mode", "verdict", "defects", "witness"}`.
pub fn spectrum_json(r: &SpectrumReport) -> Map<String, Value> {
    let n = r.lambda.len();
    let mut out = Map::new();
    out.insert("lambda".into(), complex_list(&r.lambda));
    out.insert("mode".into(), r.mode.as_str().into());
    out.insert("verdict".into(), r.verdict.as_str().into());
    out.insert(
        "defects".into(),
        Value::Object(r.defects.iter().map(|(k, v)| (k.clone(), Value::from(*v))).collect()),
    );
    out.insert("witness".into(), witness_json(&r.witness, n));
    if let Some(note) = &r.note {
        out.insert("note".into(), note.clone().into());
    }
    out
}

/// Writes `content` to `path` through a temporary file in the same
/// directory, or to stdout when `path` is `None`.
pub fn write_output(path: Option<&Path>, content: &str) -> Result<()> {
    match path {
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(content.as_bytes())?;
            out.flush()?;
        }
        Some(p) => {
            let dir = p.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
            let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
            tmp.write_all(content.as_bytes())?;
            tmp.flush()?;
            tmp.persist(p).map_err(|e| e.error)?;
        }
    }
    Ok(())
}

/// Pretty JSON with a trailing newline.
pub fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_iff_within_tolerance() {
        assert_eq!(CheckEntry::measured("a", 1e-11, 1e-10, None).status, Status::Pass);
        assert_eq!(CheckEntry::measured("a", 1e-10, 1e-10, None).status, Status::Pass);
        assert_eq!(CheckEntry::measured("a", 2e-10, 1e-10, None).status, Status::Fail);
        assert_eq!(CheckEntry::measured("a", f64::NAN, 1e-10, None).status, Status::Fail);
        assert!(all_passed(&[CheckEntry::skipped("s", "r"), CheckEntry::finding("f", Map::new())]));
    }

    #[test]
    fn atomic_write_replaces_file() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("out.json");
        std::fs::write(&p, "old").unwrap();
        write_output(Some(&p), "new\n").unwrap();
        assert_eq!(std::fs::read_to_string(&p).unwrap(), "new\n");
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }
}
