//! Grouping the `m`-element subsets of a MUB set by their lower bound.
//!
//! Subsets with different `L_m` are certainly inequivalent. Subsets whose
//! bounds agree within the clustering tolerance are only indistinguishable
//! by this criterion.

use std::fmt::Write as _;

use itertools::Itertools;
use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::mub::MubSet;
use crate::optimize::{lower_bound, OptimizerConfig};
use crate::witness::upper_bound;

/// Default single-linkage gap separating two classes.
pub const DEFAULT_CLUSTER_TOL: f64 = 5e-3;

/// `B1B2B4` for the zero-based indices `[0, 1, 3]`.
pub fn subset_label(indices: &[usize]) -> String {
    indices.iter().map(|i| format!("B{}", i + 1)).collect()
}

/// Parses `"1,2,4"` (one-based) into zero-based indices.
pub fn parse_subset(text: &str) -> Result<Vec<usize>> {
    text.split(',')
        .map(|t| match t.trim().parse::<usize>() {
            Ok(i) if i >= 1 => Ok(i - 1),
            _ => Err(Error::InvalidData(format!(
                "bad basis index {t:?} (indices start at 1)"
            ))),
        })
        .collect()
}

/// All `m`-element index subsets of `0..n` in lexicographic order.
pub fn enumerate_subsets(n: usize, m: usize) -> impl Iterator<Item = Vec<usize>> {
    (0..n).combinations(m)
}

#[derive(Debug, Clone, Serialize)]
pub struct SubsetFingerprint {
    pub subset: Vec<usize>,
    pub label: String,
    pub lower_bound: f64,
    pub hits: usize,
    pub converged_fraction: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SubsetClass {
    /// Smallest member bound.
    pub value: f64,
    /// Largest minus smallest member bound.
    pub spread: f64,
    pub multiplicity: usize,
    /// First member in lexicographic order.
    pub representative: Vec<usize>,
    pub label: String,
    pub members: Vec<Vec<usize>>,
}

fn ratio_as_text<S: Serializer>(r: &Ratio<u64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassificationReport {
    pub dim: usize,
    pub m: usize,
    pub set_size: usize,
    pub provenance: String,
    #[serde(serialize_with = "ratio_as_text")]
    pub upper_bound: Ratio<u64>,
    pub cluster_tol: f64,
    pub config: OptimizerConfig,
    pub classes: Vec<SubsetClass>,
    pub fingerprints: Vec<SubsetFingerprint>,
}

impl ClassificationReport {
    pub fn multiplicities(&self) -> Vec<usize> {
        self.classes.iter().map(|c| c.multiplicity).collect()
    }

    pub fn values(&self) -> Vec<f64> {
        self.classes.iter().map(|c| c.value).collect()
    }
}

/// Single-linkage clustering of `fingerprints` by lower bound: sorted values
/// closer than `tol` to their neighbour share a class. Classes come out in
/// ascending order of value.
pub fn cluster(fingerprints: &[SubsetFingerprint], tol: f64) -> Vec<SubsetClass> {
    let mut order: Vec<&SubsetFingerprint> = fingerprints.iter().collect();
    order.sort_by(|a, b| {
        a.lower_bound
            .total_cmp(&b.lower_bound)
            .then_with(|| a.subset.cmp(&b.subset))
    });
    let mut groups: Vec<Vec<&SubsetFingerprint>> = Vec::new();
    for fp in order {
        match groups.last_mut() {
            Some(g) if fp.lower_bound - g.last().expect("non-empty").lower_bound < tol => g.push(fp),
            _ => groups.push(vec![fp]),
        }
    }
    groups
        .into_iter()
        .map(|g| {
            let value = g[0].lower_bound;
            let spread = g.last().expect("non-empty").lower_bound - value;
            let mut members: Vec<Vec<usize>> = g.iter().map(|f| f.subset.clone()).collect();
            members.sort();
            let representative = members[0].clone();
            SubsetClass {
                value,
                spread,
                multiplicity: members.len(),
                label: subset_label(&representative),
                representative,
                members,
            }
        })
        .collect()
}

/// Fingerprints the given subsets of `set` with [`lower_bound`].
pub fn fingerprint_subsets(
    set: &MubSet<f64>,
    subsets: &[Vec<usize>],
    config: &OptimizerConfig,
) -> Result<Vec<SubsetFingerprint>> {
    subsets
        .par_iter()
        .map(|s| {
            let est = lower_bound(&set.subset(s)?, config);
            Ok(SubsetFingerprint {
                label: subset_label(s),
                subset: s.clone(),
                lower_bound: est.value,
                hits: est.hits,
                converged_fraction: est.converged_fraction,
            })
        })
        .collect()
}

/// Classifies all `C(len, m)` subsets of `set`.
pub fn classify_subsets(
    set: &MubSet<f64>,
    m: usize,
    config: &OptimizerConfig,
    cluster_tol: f64,
) -> Result<ClassificationReport> {
    if m < 1 || m > set.len() {
        return Err(Error::OutOfRange(format!("m = {m} outside 1..={}", set.len())));
    }
    let subsets: Vec<Vec<usize>> = enumerate_subsets(set.len(), m).collect();
    let fingerprints = fingerprint_subsets(set, &subsets, config)?;
    Ok(ClassificationReport {
        dim: set.dim(),
        m,
        set_size: set.len(),
        provenance: set.provenance().to_string(),
        upper_bound: upper_bound(set.dim(), m)?,
        cluster_tol,
        config: config.clone(),
        classes: cluster(&fingerprints, cluster_tol),
        fingerprints,
    })
}

/// Text table with columns `m`, subset, `L`, `U`; one row per class.
pub fn render_table(reports: &[ClassificationReport]) -> String {
    let rows: Vec<[String; 4]> = reports
        .iter()
        .flat_map(|r| {
            let many = r.classes.len() > 1;
            r.classes.iter().map(move |c| {
                let subset = if many {
                    format!("{} [{} times]", c.label, c.multiplicity)
                } else {
                    c.label.clone()
                };
                [
                    r.m.to_string(),
                    subset,
                    format!("{:.4}", c.value),
                    r.upper_bound.to_string(),
                ]
            })
        })
        .collect();
    let header = ["m".to_string(), "subset".to_string(), "L".to_string(), "U".to_string()];
    let widths: Vec<usize> = (0..4)
        .map(|i| {
            rows.iter()
                .chain([&header])
                .map(|r| r[i].chars().count())
                .max()
                .unwrap_or(0)
        })
        .collect();
    let mut out = String::new();
    for row in std::iter::once(&header).chain(&rows) {
        let cells: Vec<String> = row.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
        let _ = writeln!(out, "{}", cells.join("  ").trim_end());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp(subset: &[usize], l: f64) -> SubsetFingerprint {
        SubsetFingerprint {
            subset: subset.to_vec(),
            label: subset_label(subset),
            lower_bound: l,
            hits: 1,
            converged_fraction: 1.0,
        }
    }

    #[test]
    fn labels_round_trip() {
        assert_eq!(subset_label(&[0, 1, 3]), "B1B2B4");
        assert_eq!(parse_subset("1, 2,4").unwrap(), vec![0, 1, 3]);
        assert!(parse_subset("0,1").is_err());
        assert!(parse_subset("a").is_err());
    }

    #[test]
    fn enumeration_counts_binomials() {
        assert_eq!(enumerate_subsets(6, 3).count(), 20);
        assert_eq!(enumerate_subsets(8, 4).count(), 70);
        assert_eq!(enumerate_subsets(4, 2).next().unwrap(), vec![0, 1]);
    }

    #[test]
    fn single_linkage_chains_close_values() {
        let fps = [
            fp(&[0, 2], 0.3),
            fp(&[0, 1], 0.1),
            fp(&[1, 2], 0.104),
            fp(&[0, 3], 0.108),
        ];
        let classes = cluster(&fps, 5e-3);
        assert_eq!(classes.len(), 2);
        assert_eq!(classes[0].multiplicity, 3);
        assert_eq!(classes[0].value, 0.1);
        assert!((classes[0].spread - 0.008).abs() < 1e-12);
        assert_eq!(classes[0].representative, vec![0, 1]);
        assert_eq!(classes[1].label, "B1B3");
    }

    #[test]
    fn table_marks_multiplicities_only_when_split() {
        let report = |m, classes| ClassificationReport {
            dim: 5,
            m,
            set_size: 6,
            provenance: String::new(),
            upper_bound: upper_bound(5, m).unwrap(),
            cluster_tol: 5e-3,
            config: OptimizerConfig::default(),
            classes,
            fingerprints: vec![],
        };
        let t = render_table(&[
            report(2, cluster(&[fp(&[0, 1], 0.0297)], 5e-3)),
            report(3, cluster(&[fp(&[0, 1, 2], 0.1273), fp(&[0, 1, 3], 0.2764)], 5e-3)),
        ]);
        assert!(t.contains("B1B2  "));
        assert!(t.contains("B1B2B3 [1 times]"));
        assert!(t.contains("0.2764  7/5"));
    }
}
