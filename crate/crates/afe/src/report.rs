//! Stable JSON report emission.
//!
//! Every JSON artifact the toolkit writes shares one envelope:
//! `{schema_version, kind, generated_at, payload}`. The payload shape is
//! selected by `kind` and pinned by the versioned JSON Schema shipped at
//! `schema/afe-report.v1.schema.json` (embedded as [`REPORT_SCHEMA`]).
//! `generated_at` is the only field allowed to differ between two identical
//! runs; [`redact_timestamp`] produces the canonical comparison form
//! determinism checks use.

use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};
use thiserror::Error;

/// Version string stamped into every envelope; bumped on any payload-shape
/// change together with the schema file.
pub const SCHEMA_VERSION: &str = "1";

/// The JSON Schema (draft-07) that all emitted reports validate against.
pub const REPORT_SCHEMA: &str = include_str!("../schema/afe-report.v1.schema.json");

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("report serialization failed: {0}")]
    Json(#[from] serde_json::Error),
    #[error("CSV serialization failed: {0}")]
    Csv(#[from] csv::Error),
}

/// Which payload an envelope carries; `export-data` writes CSV only and has
/// no report kind.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReportKind {
    Rank,
    Importance,
    Benchmark,
}

impl ReportKind {
    pub fn name(self) -> &'static str {
        match self {
            ReportKind::Rank => "rank",
            ReportKind::Importance => "importance",
            ReportKind::Benchmark => "benchmark",
        }
    }
}

/// The fixed outer shape of every emitted JSON report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Envelope<T> {
    pub schema_version: String,
    pub kind: ReportKind,
    /// RFC 3339 UTC wall-clock time of emission — the only run-varying field.
    pub generated_at: String,
    pub payload: T,
}

impl<T: Serialize> Envelope<T> {
    /// Wrap a payload, stamping the current UTC time.
    pub fn new(kind: ReportKind, payload: T) -> Self {
        Self::with_timestamp(kind, payload, now_rfc3339())
    }

    /// Wrap a payload with an explicit timestamp (tests pin this).
    pub fn with_timestamp(kind: ReportKind, payload: T, generated_at: String) -> Self {
        Self {
            schema_version: SCHEMA_VERSION.to_string(),
            kind,
            generated_at,
            payload,
        }
    }

    /// Pretty-printed JSON with a trailing newline; field order follows
    /// struct declaration order, so output is byte-stable for equal inputs.
    pub fn to_json(&self) -> Result<String, ReportError> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    pub fn write(&self, path: &Path) -> Result<(), ReportError> {
        write_text(path, &self.to_json()?)
    }
}

/// Current UTC time in RFC 3339 (second precision).
pub fn now_rfc3339() -> String {
    let now = time::OffsetDateTime::now_utc()
        .replace_millisecond(0)
        .expect("zero millisecond is valid");
    now.format(&time::format_description::well_known::Rfc3339)
        .expect("UTC datetime formats")
}

/// Canonical comparison form of a report: parse, overwrite `generated_at`
/// with a fixed marker, re-serialize with sorted keys. Two runs are
/// considered identical when their redacted forms are byte-equal.
pub fn redact_timestamp(json: &str) -> Result<String, ReportError> {
    let mut value: serde_json::Value = serde_json::from_str(json)?;
    if let Some(obj) = value.as_object_mut() {
        if obj.contains_key("generated_at") {
            obj.insert(
                "generated_at".to_string(),
                serde_json::Value::String("<redacted>".to_string()),
            );
        }
    }
    Ok(serde_json::to_string_pretty(&value)? + "\n")
}

/// Write a string to disk, mapping failures to the offending path.
pub fn write_text(path: &Path, text: &str) -> Result<(), ReportError> {
    std::fs::write(path, text).map_err(|source| ReportError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Two-column `feature,weight` CSV of a sorted ranking, one row per feature.
pub fn ranking_csv(rows: &[(String, f64)]) -> Result<String, ReportError> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(["feature", "weight"])?;
    for (feature, weight) in rows {
        writer.write_record([feature.as_str(), &weight.to_string()])?;
    }
    let bytes = writer.into_inner().expect("Vec sink cannot fail");
    Ok(String::from_utf8(bytes).expect("CSV output is UTF-8"))
}

/// Sibling path with a different extension: `r.json` -> `r.csv`.
pub fn sibling_with_extension(path: &Path, extension: &str) -> PathBuf {
    path.with_extension(extension)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::afe::{importance_vectors, run_afe, AfeConfig};
    use crate::data::synth_dataset;
    use crate::models::Kind;

    fn compiled_schema() -> jsonschema::JSONSchema {
        let schema: serde_json::Value = serde_json::from_str(REPORT_SCHEMA).unwrap();
        jsonschema::JSONSchema::compile(&schema).expect("schema compiles")
    }

    fn assert_valid(schema: &jsonschema::JSONSchema, json: &str) {
        let value: serde_json::Value = serde_json::from_str(json).unwrap();
        let outcome = schema.validate(&value);
        if let Err(errors) = outcome {
            let messages: Vec<String> = errors
                .map(|e| format!("{e} at {}", e.instance_path))
                .collect();
            panic!("schema violations: {messages:?}");
        }
    }

    #[test]
    fn bundled_schema_compiles() {
        compiled_schema();
    }

    #[test]
    fn rank_report_validates_against_schema() {
        let d = synth_dataset(160, 2, 4, 9);
        let report = run_afe(&AfeConfig::new(Kind::Dt, 1), &d).unwrap();
        let envelope = Envelope::new(ReportKind::Rank, &report);
        assert_valid(&compiled_schema(), &envelope.to_json().unwrap());
    }

    #[test]
    fn importance_report_validates_against_schema() {
        let d = synth_dataset(160, 2, 4, 9);
        let bundle = importance_vectors(&AfeConfig::new(Kind::Gnb, 1), &d).unwrap();
        let envelope = Envelope::new(ReportKind::Importance, &bundle);
        assert_valid(&compiled_schema(), &envelope.to_json().unwrap());
    }

    #[test]
    fn tampered_report_fails_validation() {
        let schema = compiled_schema();
        let envelope = Envelope::with_timestamp(
            ReportKind::Rank,
            serde_json::json!({"not": "a report"}),
            "2026-01-01T00:00:00Z".to_string(),
        );
        let value: serde_json::Value =
            serde_json::from_str(&envelope.to_json().unwrap()).unwrap();
        assert!(!schema.is_valid(&value));

        let bad_version = serde_json::json!({
            "schema_version": "999",
            "kind": "rank",
            "generated_at": "2026-01-01T00:00:00Z",
            "payload": {}
        });
        assert!(!schema.is_valid(&bad_version));
    }

    #[test]
    fn redaction_erases_only_the_timestamp() {
        let payload = serde_json::json!({"x": 1});
        let a = Envelope::with_timestamp(ReportKind::Rank, &payload, "2026-01-01T00:00:00Z".into());
        let b = Envelope::with_timestamp(ReportKind::Rank, &payload, "2027-06-15T12:34:56Z".into());
        let (ja, jb) = (a.to_json().unwrap(), b.to_json().unwrap());
        assert_ne!(ja, jb);
        assert_eq!(redact_timestamp(&ja).unwrap(), redact_timestamp(&jb).unwrap());

        let c = Envelope::with_timestamp(
            ReportKind::Rank,
            serde_json::json!({"x": 2}),
            "2026-01-01T00:00:00Z".into(),
        );
        assert_ne!(
            redact_timestamp(&ja).unwrap(),
            redact_timestamp(&c.to_json().unwrap()).unwrap()
        );
    }

    #[test]
    fn timestamp_is_rfc3339() {
        let stamp = now_rfc3339();
        // e.g. 2026-08-25T12:00:00Z
        assert!(stamp.ends_with('Z'), "{stamp}");
        assert_eq!(stamp.len(), 20, "{stamp}");
        assert_eq!(&stamp[4..5], "-");
        assert_eq!(&stamp[10..11], "T");
    }

    #[test]
    fn ranking_csv_shape_and_quoting() {
        let rows = vec![
            ("CHRONIC DISEASE".to_string(), 0.25),
            ("A,B".to_string(), 0.5),
            ("plain".to_string(), 0.125),
        ];
        let csv_text = ranking_csv(&rows).unwrap();
        let lines: Vec<&str> = csv_text.lines().collect();
        assert_eq!(lines[0], "feature,weight");
        assert_eq!(lines.len(), 4);
        assert_eq!(lines[1], "CHRONIC DISEASE,0.25");
        assert_eq!(lines[2], "\"A,B\",0.5");

        let mut reader = csv::Reader::from_reader(csv_text.as_bytes());
        let parsed: Vec<(String, f64)> = reader
            .records()
            .map(|r| {
                let r = r.unwrap();
                (r[0].to_string(), r[1].parse().unwrap())
            })
            .collect();
        assert_eq!(parsed, rows);
    }

    #[test]
    fn envelope_roundtrips_through_json() {
        let envelope = Envelope::with_timestamp(
            ReportKind::Benchmark,
            serde_json::json!({"rows": []}),
            "2026-01-01T00:00:00Z".into(),
        );
        let text = envelope.to_json().unwrap();
        let back: Envelope<serde_json::Value> = serde_json::from_str(&text).unwrap();
        assert_eq!(back, envelope);
        assert_eq!(back.kind.name(), "benchmark");
    }

    #[test]
    fn write_reports_the_failing_path() {
        let envelope =
            Envelope::with_timestamp(ReportKind::Rank, serde_json::json!({}), "t".into());
        let err = envelope
            .write(Path::new("/nonexistent-dir/report.json"))
            .unwrap_err();
        assert!(err.to_string().contains("/nonexistent-dir/report.json"));
    }
}
