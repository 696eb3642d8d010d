//! Published reference values with their tolerances, loaded from the
//! versioned `data/reference_values.json` bundled into the crate.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::family::Family;

const BUNDLED: &str = include_str!("../data/reference_values.json");

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReferenceData {
    pub version: u32,
    pub entries: Vec<ReferenceEntry>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReferenceEntry {
    pub id: String,
    /// Reproduction target the entry belongs to (`table1`, `d9`, ...).
    pub target: String,
    /// Where the value is published (table name or in-text section).
    pub source: String,
    pub tolerance: f64,
    #[serde(flatten)]
    pub check: Check,
}

/// Subsets are one-based basis positions, as in `B1B2B4`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Check {
    /// `U_m` as an exact fraction such as `"7/5"`.
    UpperBound { dim: usize, m: usize, exact: String },
    /// `L_m` of one subset.
    LowerBound {
        family: Family,
        subset: Vec<usize>,
        value: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        exact: Option<String>,
    },
    /// `L_m` of one subset lies in `[min, max]`.
    LowerBoundRange {
        family: Family,
        subset: Vec<usize>,
        min: f64,
        max: f64,
    },
    /// Full classification of the `m`-subsets: class values ascending with
    /// their multiplicities.
    Classes {
        family: Family,
        m: usize,
        values: Vec<f64>,
        multiplicities: Vec<usize>,
    },
    /// Published class values; `representatives[i]` is a subset attaining
    /// `values[i]`, used when the full scan is skipped. A full scan passes
    /// when every value is matched by some class.
    ClassValues {
        family: Family,
        m: usize,
        values: Vec<f64>,
        representatives: Vec<Vec<usize>>,
    },
}

impl ReferenceData {
    pub fn bundled() -> Result<Self> {
        Self::from_json(BUNDLED)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let data: Self =
            serde_json::from_str(text).map_err(|e| Error::InvalidData(format!("reference values: {e}")))?;
        data.validate()?;
        Ok(data)
    }

    fn validate(&self) -> Result<()> {
        let mut ids = std::collections::HashSet::new();
        for e in &self.entries {
            if !ids.insert(&e.id) {
                return Err(Error::InvalidData(format!("duplicate reference id {}", e.id)));
            }
            if !(e.tolerance >= 0.0) {
                return Err(Error::InvalidData(format!("{}: negative tolerance", e.id)));
            }
            let subsets: Vec<&Vec<usize>> = match &e.check {
                Check::LowerBound { subset, .. } | Check::LowerBoundRange { subset, .. } => vec![subset],
                Check::ClassValues {
                    values,
                    representatives,
                    ..
                } => {
                    if values.len() != representatives.len() {
                        return Err(Error::InvalidData(format!("{}: one representative per value", e.id)));
                    }
                    representatives.iter().collect()
                }
                Check::Classes {
                    values, multiplicities, ..
                } => {
                    if values.len() != multiplicities.len() {
                        return Err(Error::InvalidData(format!("{}: one multiplicity per value", e.id)));
                    }
                    vec![]
                }
                Check::UpperBound { .. } => vec![],
            };
            if subsets.iter().any(|s| s.is_empty() || s.contains(&0)) {
                return Err(Error::InvalidData(format!(
                    "{}: subsets are one-based and non-empty",
                    e.id
                )));
            }
        }
        Ok(())
    }

    pub fn for_target<'a>(&'a self, target: &'a str) -> impl Iterator<Item = &'a ReferenceEntry> + 'a {
        self.entries.iter().filter(move |e| e.target == target)
    }
}

/// One-based subset to zero-based indices.
pub fn zero_based(subset: &[usize]) -> Vec<usize> {
    subset.iter().map(|i| i - 1).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_data_loads() {
        let data = ReferenceData::bundled().unwrap();
        assert!(data.version >= 1);
        for target in ["table1", "table2", "table3", "d6", "d8", "d9"] {
            assert!(data.for_target(target).count() > 0, "{target}");
        }
    }

    #[test]
    fn rejects_malformed_entries() {
        let dup = r#"{"version":1,"entries":[
            {"id":"a","target":"t","source":"s","tolerance":0,"kind":"upper_bound","dim":2,"m":2,"exact":"3/2"},
            {"id":"a","target":"t","source":"s","tolerance":0,"kind":"upper_bound","dim":2,"m":3,"exact":"2"}]}"#;
        assert!(ReferenceData::from_json(dup).is_err());
        let zero = r#"{"version":1,"entries":[
            {"id":"a","target":"t","source":"s","tolerance":0.1,"kind":"lower_bound","family":"hw:2","subset":[0,1],"value":0.5}]}"#;
        assert!(ReferenceData::from_json(zero).is_err());
        assert!(ReferenceData::from_json("{").is_err());
    }
}
