//! CSV + JSON schema ingestion.
//!
//! The schema is a JSON object:
//!
//! ```json
//! {
//!   "task": "hmlc",
//!   "features": [
//!     {"name": "x1", "kind": "numeric"},
//!     {"name": "colour", "kind": "nominal", "categories": ["red", "green"]}
//!   ],
//!   "targets": [{"name": "animal", "kind": "binary"}, {"name": "koala", "kind": "binary"}],
//!   "hierarchy": [["animal", "koala"]],
//!   "alpha": 0.75
//! }
//! ```
//!
//! Target kinds: `nominal` (classification), `numeric` (STR/MTR), `binary`
//! (MLC/HMLC label columns holding 0/1). `?` marks a missing value.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{Dataset, FeatureColumn, FeatureKind, Hierarchy, TargetBlock, Task};
use crate::error::{Error, Result};

pub const MISSING: &str = "?";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ColumnSpec {
    pub name: String,
    pub kind: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub categories: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Schema {
    pub task: Task,
    pub features: Vec<ColumnSpec>,
    pub targets: Vec<ColumnSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub hierarchy: Vec<(String, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default = "default_missing")]
    pub missing: String,
}

fn default_missing() -> String {
    MISSING.to_string()
}

const DEFAULT_ALPHA: f64 = 0.75;

impl Schema {
    pub fn from_path(path: &Path) -> Result<Self> {
        let schema: Schema = serde_json::from_reader(BufReader::new(File::open(path)?))?;
        schema.validate()?;
        Ok(schema)
    }

    fn validate(&self) -> Result<()> {
        for f in &self.features {
            match f.kind.as_str() {
                "numeric" => {}
                "nominal" if !f.categories.is_empty() => {}
                "nominal" => return Err(Error::Schema(format!("nominal feature `{}` has no categories", f.name))),
                other => return Err(Error::UnknownKind(other.to_string())),
            }
        }
        let expected = match self.task {
            Task::Classification => "nominal",
            Task::Str | Task::Mtr => "numeric",
            Task::Mlc | Task::Hmlc => "binary",
        };
        for t in &self.targets {
            if !matches!(t.kind.as_str(), "numeric" | "nominal" | "binary") {
                return Err(Error::UnknownKind(t.kind.clone()));
            }
            if t.kind != expected {
                return Err(Error::Schema(format!(
                    "target `{}` has kind `{}`, task {} needs `{expected}`",
                    t.name, t.kind, self.task
                )));
            }
        }
        Ok(())
    }
}

/// Reads a dataset from a CSV file described by a JSON schema.
pub fn load_dataset(data_path: &Path, schema_path: &Path) -> Result<Dataset> {
    let schema = Schema::from_path(schema_path)?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(BufReader::new(File::open(data_path)?));
    let header: Vec<String> = reader.headers()?.iter().map(str::to_string).collect();
    let records: Vec<csv::StringRecord> = reader.records().collect::<std::result::Result<_, _>>()?;
    dataset_from_records(&schema, &header, &records)
}

fn dataset_from_records(schema: &Schema, header: &[String], records: &[csv::StringRecord]) -> Result<Dataset> {
    if records.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let pos: HashMap<&str, usize> = header.iter().enumerate().map(|(i, h)| (h.as_str(), i)).collect();
    let declared: Vec<&str> = schema
        .features
        .iter()
        .chain(&schema.targets)
        .map(|c| c.name.as_str())
        .collect();
    if let Some(h) = header.iter().find(|h| !declared.contains(&h.as_str())) {
        return Err(Error::Schema(format!("column `{h}` is not declared in the schema")));
    }
    let column = |name: &str| -> Result<usize> {
        pos.get(name)
            .copied()
            .ok_or_else(|| Error::Schema(format!("column `{name}` is missing from the data file")))
    };
    let missing = schema.missing.as_str();

    let mut features = Vec::with_capacity(schema.features.len());
    for spec in &schema.features {
        let col = column(&spec.name)?;
        let kind = if spec.kind == "numeric" {
            FeatureKind::Numeric
        } else {
            FeatureKind::Nominal(spec.categories.clone())
        };
        let mut observed = Vec::with_capacity(records.len());
        for (row, rec) in records.iter().enumerate() {
            let raw = rec.get(col).unwrap_or(missing);
            observed.push(if raw == missing {
                None
            } else {
                Some(parse_cell(raw, spec, row)?)
            });
        }
        features.push(FeatureColumn::with_missing(spec.name.clone(), kind, &observed));
    }

    let target_cols: Vec<usize> = schema
        .targets
        .iter()
        .map(|s| column(&s.name))
        .collect::<Result<_>>()?;
    let mut rows = Vec::with_capacity(records.len());
    for (row, rec) in records.iter().enumerate() {
        let raw: Vec<&str> = target_cols.iter().map(|&c| rec.get(c).unwrap_or(missing)).collect();
        let n_missing = raw.iter().filter(|&&r| r == missing).count();
        if n_missing == raw.len() {
            rows.push(None);
        } else if n_missing > 0 {
            return Err(Error::PartialTarget { row });
        } else {
            let vals = raw
                .iter()
                .zip(&schema.targets)
                .map(|(r, spec)| parse_cell(r, spec, row))
                .collect::<Result<Vec<f64>>>()?;
            rows.push(Some(vals));
        }
    }

    let names: Vec<String> = schema.targets.iter().map(|t| t.name.clone()).collect();
    let classes = match schema.task {
        Task::Classification => schema.targets[0].categories.clone(),
        _ => Vec::new(),
    };
    let hierarchy = match schema.task {
        Task::Hmlc => Some(Hierarchy::new(
            names.clone(),
            &schema.hierarchy,
            schema.alpha.unwrap_or(DEFAULT_ALPHA),
        )?),
        _ => None,
    };
    let targets = TargetBlock::new(schema.task, names, classes, hierarchy, &rows)?;
    Dataset::new(features, targets)
}

fn parse_cell(raw: &str, spec: &ColumnSpec, row: usize) -> Result<f64> {
    match spec.kind.as_str() {
        "nominal" => spec
            .categories
            .iter()
            .position(|c| c == raw)
            .map(|i| i as f64)
            .ok_or_else(|| Error::UnknownCategory {
                row,
                column: spec.name.clone(),
                value: raw.to_string(),
            }),
        _ => raw.parse::<f64>().map_err(|_| Error::BadNumber {
            row,
            column: spec.name.clone(),
            value: raw.to_string(),
        }),
    }
}

/// Schema describing `d`.
pub fn schema_of(d: &Dataset) -> Schema {
    let features = d
        .features()
        .iter()
        .map(|f| match &f.kind {
            FeatureKind::Numeric => ColumnSpec {
                name: f.name.clone(),
                kind: "numeric".into(),
                categories: vec![],
            },
            FeatureKind::Nominal(c) => ColumnSpec {
                name: f.name.clone(),
                kind: "nominal".into(),
                categories: c.clone(),
            },
        })
        .collect();
    let t = d.targets();
    let kind = match t.task() {
        Task::Classification => "nominal",
        Task::Str | Task::Mtr => "numeric",
        Task::Mlc | Task::Hmlc => "binary",
    };
    let targets = t
        .names()
        .iter()
        .map(|n| ColumnSpec {
            name: n.clone(),
            kind: kind.into(),
            categories: if t.task() == Task::Classification {
                t.classes().to_vec()
            } else {
                vec![]
            },
        })
        .collect();
    let (hierarchy, alpha) = match (t.task(), t.hierarchy()) {
        (Task::Hmlc, Some(h)) => (h.edges(), Some(h.alpha())),
        _ => (vec![], None),
    };
    Schema {
        task: t.task(),
        features,
        targets,
        hierarchy,
        alpha,
        missing: MISSING.into(),
    }
}

/// Writes `d` as a CSV data file plus its JSON schema.
pub fn write_dataset(d: &Dataset, data_path: &Path, schema_path: &Path) -> Result<()> {
    let schema = schema_of(d);
    let mut sw = BufWriter::new(File::create(schema_path)?);
    serde_json::to_writer_pretty(&mut sw, &schema)?;
    sw.write_all(b"\n")?;
    sw.flush()?;

    let mut w = csv::Writer::from_writer(BufWriter::new(File::create(data_path)?));
    let header: Vec<&str> = schema
        .features
        .iter()
        .chain(&schema.targets)
        .map(|c| c.name.as_str())
        .collect();
    w.write_record(&header)?;
    let t = d.targets();
    for e in 0..d.n_examples() {
        let mut rec: Vec<String> = d
            .features()
            .iter()
            .map(|f| match &f.kind {
                FeatureKind::Numeric => f.values()[e].to_string(),
                FeatureKind::Nominal(c) => c[f.values()[e] as usize].clone(),
            })
            .collect();
        match t.row(e) {
            None => rec.extend(std::iter::repeat_n(MISSING.to_string(), t.n_targets())),
            Some(r) => {
                for &v in r {
                    rec.push(match t.task() {
                        Task::Classification => t.classes()[v as usize].clone(),
                        _ => v.to_string(),
                    });
                }
            }
        }
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}
