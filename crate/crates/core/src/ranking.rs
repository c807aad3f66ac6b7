use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::Result;

/// Per-feature importance scores from one ranking method.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FeatureRanking {
    pub method: String,
    pub names: Vec<String>,
    pub scores: Vec<f64>,
    pub metadata: BTreeMap<String, Value>,
    pub warnings: Vec<String>,
}

impl FeatureRanking {
    pub fn new(method: impl Into<String>, names: Vec<String>, scores: Vec<f64>) -> Self {
        Self {
            method: method.into(),
            names,
            scores,
            metadata: BTreeMap::new(),
            warnings: Vec::new(),
        }
    }

    pub fn with_meta(mut self, key: &str, value: impl Serialize) -> Self {
        self.metadata
            .insert(key.to_string(), serde_json::to_value(value).unwrap_or(Value::Null));
        self
    }

    /// Feature indices by descending score, ties by index.
    pub fn order(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.scores.len()).collect();
        idx.sort_by(|&a, &b| self.scores[b].total_cmp(&self.scores[a]).then(a.cmp(&b)));
        idx
    }

    /// 1-based rank of every feature.
    pub fn ranks(&self) -> Vec<usize> {
        let mut ranks = vec![0; self.scores.len()];
        for (r, i) in self.order().into_iter().enumerate() {
            ranks[i] = r + 1;
        }
        ranks
    }

    /// `feature,score,rank` rows in rank order.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["feature", "score", "rank"])?;
        for (r, i) in self.order().into_iter().enumerate() {
            w.write_record([self.names[i].clone(), self.scores[i].to_string(), (r + 1).to_string()])?;
        }
        let bytes = w.into_inner().map_err(|e| e.into_error())?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    pub fn metadata_json(&self) -> String {
        let doc = serde_json::json!({
            "method": self.method,
            "metadata": self.metadata,
            "warnings": self.warnings,
        });
        serde_json::to_string_pretty(&doc).expect("metadata serializes")
    }

    /// Writes `ranking.csv` and `metadata.json` into `dir`.
    pub fn write(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir)?;
        fs::write(dir.join("ranking.csv"), self.to_csv()?)?;
        fs::write(dir.join("metadata.json"), self.metadata_json() + "\n")?;
        Ok(())
    }
}
