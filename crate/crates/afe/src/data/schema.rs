//! Column-role schema for CSV ingestion.
//!
//! A schema file is a JSON map from column name to role:
//!
//! ```json
//! {
//!   "AGE": "feature-numeric",
//!   "SMOKING": { "feature-binary": { "yes_token": "2", "no_token": "1" } },
//!   "LUNG_CANCER": "label"
//! }
//! ```

use super::DataError;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::Path;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BinaryTokens {
    pub yes_token: String,
    pub no_token: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ColumnRole {
    Plain(PlainRole),
    Binary {
        #[serde(rename = "feature-binary")]
        tokens: BinaryTokens,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PlainRole {
    #[serde(rename = "feature-numeric")]
    FeatureNumeric,
    #[serde(rename = "label")]
    Label,
}

impl ColumnRole {
    pub fn numeric() -> Self {
        ColumnRole::Plain(PlainRole::FeatureNumeric)
    }

    pub fn label() -> Self {
        ColumnRole::Plain(PlainRole::Label)
    }

    pub fn binary(yes_token: &str, no_token: &str) -> Self {
        ColumnRole::Binary {
            tokens: BinaryTokens {
                yes_token: yes_token.to_string(),
                no_token: no_token.to_string(),
            },
        }
    }

    fn is_label(&self) -> bool {
        matches!(self, ColumnRole::Plain(PlainRole::Label))
    }
}

/// Ordered column → role map. Exactly one column must carry the label role.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Schema {
    columns: BTreeMap<String, ColumnRole>,
}

impl Schema {
    pub fn new(columns: BTreeMap<String, ColumnRole>) -> Result<Self, DataError> {
        let schema = Self { columns };
        schema.validate()?;
        Ok(schema)
    }

    /// Build from (name, role) pairs; rejects duplicates.
    pub fn from_pairs<I>(pairs: I) -> Result<Self, DataError>
    where
        I: IntoIterator<Item = (String, ColumnRole)>,
    {
        let mut columns = BTreeMap::new();
        for (name, role) in pairs {
            if columns.insert(name.clone(), role).is_some() {
                return Err(DataError::Schema(format!("duplicate column {name:?}")));
            }
        }
        Self::new(columns)
    }

    pub fn load(path: &Path) -> Result<Self, DataError> {
        let text = std::fs::read_to_string(path).map_err(|source| DataError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&text, &path.display().to_string())
    }

    /// Parse schema JSON from an in-memory string; `origin` names the source
    /// in error messages.
    pub fn parse(text: &str, origin: &str) -> Result<Self, DataError> {
        let columns: BTreeMap<String, ColumnRole> =
            serde_json::from_str(text).map_err(|e| DataError::Schema(format!("{origin}: {e}")))?;
        Self::new(columns)
    }

    pub fn save(&self, path: &Path) -> Result<(), DataError> {
        let text = serde_json::to_string_pretty(&self.columns).expect("schema serializes");
        std::fs::write(path, text).map_err(|source| DataError::Write {
            path: path.display().to_string(),
            source,
        })
    }

    fn validate(&self) -> Result<(), DataError> {
        let labels = self.columns.values().filter(|r| r.is_label()).count();
        match labels {
            0 => Err(DataError::Schema("no column has the label role".into())),
            1 => Ok(()),
            n => Err(DataError::Schema(format!("{n} columns carry the label role"))),
        }
    }

    pub fn role(&self, column: &str) -> Option<&ColumnRole> {
        self.columns.get(column)
    }

    pub fn label_column(&self) -> &str {
        self.columns
            .iter()
            .find(|(_, r)| r.is_label())
            .map(|(name, _)| name.as_str())
            .expect("validated schema has a label column")
    }

    /// Schema mapping every feature of an encoded matrix to feature-numeric,
    /// plus the label column. This is what `export_csv` emits alongside data,
    /// so exported files can be reloaded as-is.
    pub fn all_numeric(feature_names: &[String], label_name: &str) -> Self {
        let mut columns: BTreeMap<String, ColumnRole> = feature_names
            .iter()
            .map(|n| (n.clone(), ColumnRole::numeric()))
            .collect();
        columns.insert(label_name.to_string(), ColumnRole::label());
        Self { columns }
    }
}
