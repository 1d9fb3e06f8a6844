//! CSV ingestion and export.
//!
//! Input files are comma-separated UTF-8 with a header row. Encoding rules:
//! binary categoricals map yes/no tokens to 1/0, label strings map to dense
//! 0-based ids in lexicographic order, row order is preserved, and rows with
//! missing cells are rejected with their row index.

use super::schema::{ColumnRole, PlainRole, Schema};
use super::{DataError, DataMatrix};
use ndarray::Array2;
use std::collections::BTreeSet;
use std::io::Write;
use std::path::Path;

pub fn load_csv(path: &Path, schema: &Schema) -> Result<DataMatrix, DataError> {
    let text = std::fs::read_to_string(path).map_err(|source| DataError::Io {
        path: path.display().to_string(),
        source,
    })?;
    load_csv_str(&text, schema, &path.display().to_string())
}

/// Same as [`load_csv`] but over in-memory text; `origin` names the source in
/// errors. Bundled snapshots load through this path.
pub fn load_csv_str(text: &str, schema: &Schema, origin: &str) -> Result<DataMatrix, DataError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());

    let header: Vec<String> = reader
        .headers()
        .map_err(|source| DataError::Csv {
            path: origin.to_string(),
            source,
        })?
        .iter()
        .map(|s| s.to_string())
        .collect();

    let label_name = schema.label_column().to_string();
    let label_col = header
        .iter()
        .position(|c| *c == label_name)
        .ok_or_else(|| DataError::LabelColumnAbsent(label_name.clone()))?;

    // Roles resolved per header position, in file order.
    let mut roles: Vec<(usize, String, ColumnRole)> = Vec::new();
    for (idx, name) in header.iter().enumerate() {
        let role = schema
            .role(name)
            .ok_or_else(|| DataError::Schema(format!("column {name:?} not in schema")))?;
        if idx != label_col {
            if matches!(role, ColumnRole::Plain(PlainRole::Label)) {
                return Err(DataError::Schema(format!(
                    "column {name:?} duplicates the label role"
                )));
            }
            roles.push((idx, name.clone(), role.clone()));
        }
    }

    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut label_strings: Vec<String> = Vec::new();
    for (row_idx, record) in reader.records().enumerate() {
        let record = record.map_err(|source| DataError::Csv {
            path: origin.to_string(),
            source,
        })?;
        let cell = |idx: usize, column: &str| -> Result<&str, DataError> {
            let value = record.get(idx).unwrap_or("");
            if value.is_empty() {
                Err(DataError::MissingCell {
                    row: row_idx,
                    column: column.to_string(),
                })
            } else {
                Ok(value)
            }
        };

        let mut row = Vec::with_capacity(roles.len());
        for (idx, name, role) in &roles {
            let value = cell(*idx, name)?;
            let encoded = match role {
                ColumnRole::Plain(PlainRole::FeatureNumeric) => {
                    value.parse::<f64>().map_err(|_| DataError::NonNumeric {
                        row: row_idx,
                        column: name.clone(),
                        value: value.to_string(),
                    })?
                }
                ColumnRole::Binary { tokens } => {
                    if value == tokens.yes_token {
                        1.0
                    } else if value == tokens.no_token {
                        0.0
                    } else {
                        return Err(DataError::UnmappedValue {
                            row: row_idx,
                            column: name.clone(),
                            value: value.to_string(),
                        });
                    }
                }
                ColumnRole::Plain(PlainRole::Label) => unreachable!("label filtered above"),
            };
            if !encoded.is_finite() {
                return Err(DataError::NonFinite {
                    row: row_idx,
                    column: name.clone(),
                });
            }
            row.push(encoded);
        }
        label_strings.push(cell(label_col, &label_name)?.to_string());
        rows.push(row);
    }

    if rows.is_empty() {
        return Err(DataError::NoDataRows);
    }

    // Dense 0-based label ids, lexicographic over the distinct strings.
    let distinct: BTreeSet<&String> = label_strings.iter().collect();
    let ordered: Vec<&String> = distinct.into_iter().collect();
    let labels: Vec<usize> = label_strings
        .iter()
        .map(|s| ordered.binary_search(&s).expect("label string present"))
        .collect();

    let n_features = roles.len();
    let mut features = Array2::zeros((rows.len(), n_features));
    for (r, row) in rows.iter().enumerate() {
        for (c, v) in row.iter().enumerate() {
            features[[r, c]] = *v;
        }
    }
    let feature_names = roles.into_iter().map(|(_, name, _)| name).collect();
    DataMatrix::with_label_name(features, feature_names, labels, ordered.len(), &label_name)
}

/// Write the encoded matrix back to CSV. Feature values use the shortest
/// round-trip f64 formatting, labels their integer ids, so a reload through
/// an all-numeric schema reproduces the matrix exactly.
pub fn export_csv(d: &DataMatrix, path: &Path, limit: Option<usize>) -> Result<(), DataError> {
    let mut out = String::new();
    let mut header: Vec<&str> = d.feature_names().iter().map(|s| s.as_str()).collect();
    header.push(d.label_name());
    out.push_str(&header.join(","));
    out.push('\n');

    let n = limit.unwrap_or(d.n_rows()).min(d.n_rows());
    for r in 0..n {
        let mut cells: Vec<String> = (0..d.n_features())
            .map(|c| format!("{}", d.features()[[r, c]]))
            .collect();
        cells.push(d.labels()[r].to_string());
        out.push_str(&cells.join(","));
        out.push('\n');
    }

    let mut file = std::fs::File::create(path).map_err(|source| DataError::Write {
        path: path.display().to_string(),
        source,
    })?;
    file.write_all(out.as_bytes()).map_err(|source| DataError::Write {
        path: path.display().to_string(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::schema::Schema;

    fn schema() -> Schema {
        Schema::from_pairs([
            ("AGE".to_string(), ColumnRole::numeric()),
            ("SMOKING".to_string(), ColumnRole::binary("2", "1")),
            ("OUTCOME".to_string(), ColumnRole::label()),
        ])
        .unwrap()
    }

    #[test]
    fn encodes_binary_and_labels() {
        let text = "AGE,SMOKING,OUTCOME\n60,2,YES\n45,1,NO\n";
        let d = load_csv_str(text, &schema(), "test").unwrap();
        assert_eq!(d.n_rows(), 2);
        assert_eq!(d.feature_names(), &["AGE".to_string(), "SMOKING".to_string()]);
        assert_eq!(d.features()[[0, 1]], 1.0);
        assert_eq!(d.features()[[1, 1]], 0.0);
        // "NO" < "YES" lexicographically, so NO -> 0 and YES -> 1.
        assert_eq!(d.labels(), &[1, 0]);
        assert_eq!(d.n_classes(), 2);
    }

    #[test]
    fn header_only_is_no_data_rows() {
        let err = load_csv_str("AGE,SMOKING,OUTCOME\n", &schema(), "test").unwrap_err();
        assert!(matches!(err, DataError::NoDataRows));
    }

    #[test]
    fn missing_cell_reports_row() {
        let text = "AGE,SMOKING,OUTCOME\n60,2,YES\n45,,NO\n";
        let err = load_csv_str(text, &schema(), "test").unwrap_err();
        match err {
            DataError::MissingCell { row, column } => {
                assert_eq!(row, 1);
                assert_eq!(column, "SMOKING");
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn unmapped_token_is_rejected() {
        let text = "AGE,SMOKING,OUTCOME\n60,3,YES\n";
        let err = load_csv_str(text, &schema(), "test").unwrap_err();
        assert!(matches!(err, DataError::UnmappedValue { row: 0, .. }));
    }

    #[test]
    fn absent_label_column_is_rejected() {
        let text = "AGE,SMOKING\n60,2\n";
        let err = load_csv_str(text, &schema(), "test").unwrap_err();
        assert!(matches!(err, DataError::LabelColumnAbsent(_)));
    }

    #[test]
    fn unknown_column_is_rejected() {
        let text = "AGE,SMOKING,EXTRA,OUTCOME\n60,2,1,YES\n";
        let err = load_csv_str(text, &schema(), "test").unwrap_err();
        assert!(matches!(err, DataError::Schema(_)));
    }

    #[test]
    fn export_then_load_roundtrips() {
        let text = "AGE,SMOKING,OUTCOME\n60.25,2,YES\n45,1,NO\n51.5,2,NO\n";
        let d = load_csv_str(text, &schema(), "test").unwrap();
        let dir = std::env::temp_dir().join("afe-csv-roundtrip");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("out.csv");
        export_csv(&d, &path, None).unwrap();
        let numeric = Schema::all_numeric(d.feature_names(), d.label_name());
        let back = load_csv(&path, &numeric).unwrap();
        assert_eq!(d, back);
    }

    #[test]
    fn export_limit_zero_writes_header_only() {
        let text = "AGE,SMOKING,OUTCOME\n60,2,YES\n45,1,NO\n";
        let d = load_csv_str(text, &schema(), "test").unwrap();
        let dir = std::env::temp_dir().join("afe-csv-limit");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("empty.csv");
        export_csv(&d, &path, Some(0)).unwrap();
        let written = std::fs::read_to_string(&path).unwrap();
        assert_eq!(written, "AGE,SMOKING,OUTCOME\n");
    }
}
