//! In-memory datasets and CSV ingestion.
//!
//! Input files are comma-separated with a mandatory header row, `.` as the
//! decimal point, and numeric cells only.

use std::io::Read;
use std::path::Path;

use crate::embed::Task;
use crate::error::{Error, Result};
use crate::models::validate_binary_labels;

/// Which CSV column holds the targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TargetColumn<'a> {
    None,
    Named(&'a str),
    /// The rightmost column.
    Last,
}

impl<'a> From<Option<&'a str>> for TargetColumn<'a> {
    fn from(name: Option<&'a str>) -> Self {
        name.map_or(TargetColumn::None, TargetColumn::Named)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub feature_names: Vec<String>,
    pub features: Vec<Vec<f64>>,
    pub targets: Option<Vec<f64>>,
}

impl Dataset {
    /// Validates that the feature matrix is non-empty, rectangular and finite.
    pub fn new(features: Vec<Vec<f64>>, targets: Option<Vec<f64>>) -> Result<Self> {
        let width = features.first().map(Vec::len).ok_or(Error::EmptyData)?;
        if width == 0 {
            return Err(Error::EmptyData);
        }
        if let Some(row) = features.iter().position(|r| r.len() != width) {
            return Err(Error::Data(format!(
                "row {row} has {} features, expected {width}",
                features[row].len()
            )));
        }
        if features.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("features"));
        }
        if let Some(t) = &targets {
            if t.len() != features.len() {
                return Err(Error::Data(format!("{} targets for {} rows", t.len(), features.len())));
            }
            if t.iter().any(|v| !v.is_finite()) {
                return Err(Error::NonFinite("targets"));
            }
        }
        Ok(Self {
            feature_names: (0..width).map(|i| format!("x{i}")).collect(),
            features,
            targets,
        })
    }

    pub fn with_feature_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.n_features() {
            return Err(Error::Data(format!(
                "{} names for {} features",
                names.len(),
                self.n_features()
            )));
        }
        self.feature_names = names;
        Ok(self)
    }

    pub fn n_samples(&self) -> usize {
        self.features.len()
    }

    pub fn n_features(&self) -> usize {
        self.features[0].len()
    }

    pub fn targets(&self) -> Result<&[f64]> {
        self.targets
            .as_deref()
            .ok_or_else(|| Error::Data("task requires a target column".into()))
    }

    /// Read a CSV table. `target` picks the label column, if any; every
    /// other column becomes a feature.
    pub fn from_csv<'a, R: Read>(reader: R, target: impl Into<TargetColumn<'a>>) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(true)
            .delimiter(b',')
            .from_reader(reader);
        let header: Vec<String> = rdr
            .headers()
            .map_err(|e| Error::Data(format!("header: {e}")))?
            .iter()
            .map(|h| h.trim().to_string())
            .collect();
        let target_idx = match target.into() {
            TargetColumn::Named(name) => Some(
                header
                    .iter()
                    .position(|h| h == name)
                    .ok_or_else(|| Error::Data(format!("target column {name:?} not found in {header:?}")))?,
            ),
            TargetColumn::Last => Some(header.len().saturating_sub(1)),
            TargetColumn::None => None,
        };
        let mut features = Vec::new();
        let mut targets = Vec::new();
        for (row, rec) in rdr.records().enumerate() {
            let rec = rec.map_err(|e| Error::Data(format!("row {row}: {e}")))?;
            let mut values = Vec::with_capacity(header.len());
            for (col, cell) in rec.iter().enumerate() {
                let v: f64 = cell.trim().parse().map_err(|_| {
                    Error::Data(format!(
                        "row {row}, column {:?}: {cell:?} is not numeric",
                        header.get(col).map(String::as_str).unwrap_or("?")
                    ))
                })?;
                values.push(v);
            }
            if let Some(t) = target_idx {
                targets.push(values.remove(t));
            }
            features.push(values);
        }
        let names: Vec<String> = header
            .iter()
            .enumerate()
            .filter(|(i, _)| Some(*i) != target_idx)
            .map(|(_, h)| h.clone())
            .collect();
        if names.is_empty() {
            return Err(Error::Data("no feature columns".into()));
        }
        Self::new(features, target_idx.map(|_| targets))?.with_feature_names(names)
    }

    pub fn read_csv<'a>(path: impl AsRef<Path>, target: impl Into<TargetColumn<'a>>) -> Result<Self> {
        let path = path.as_ref();
        let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
        Self::from_csv(std::io::BufReader::new(file), target)
    }

    /// Check that the targets suit `task`: binary {0, 1} labels with both
    /// classes for classification, non-constant values for regression.
    pub fn check_task(&self, task: Task) -> Result<()> {
        match task {
            Task::Classification => validate_binary_labels(self.targets()?),
            Task::Regression => {
                let y = self.targets()?;
                if y.len() < 2 {
                    return Err(Error::EmptyData);
                }
                if y.iter().all(|&v| v == y[0]) {
                    return Err(Error::ConstantTargets);
                }
                Ok(())
            }
            Task::Clustering => Ok(()),
        }
    }

    /// Keep only the named feature columns, in the given order.
    pub fn select_features(&self, names: &[String]) -> Result<Self> {
        let missing: Vec<&String> = names.iter().filter(|n| !self.feature_names.contains(n)).collect();
        if !missing.is_empty() {
            return Err(Error::Data(format!(
                "missing column(s) {missing:?}; data has {:?}",
                self.feature_names
            )));
        }
        let idx: Vec<usize> = names
            .iter()
            .map(|n| self.feature_names.iter().position(|f| f == n).unwrap())
            .collect();
        let features = self
            .features
            .iter()
            .map(|row| idx.iter().map(|&i| row[i]).collect())
            .collect();
        Self::new(features, self.targets.clone())?.with_feature_names(names.to_vec())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_header_and_target() {
        let csv = "a,b,y\n0.5,1,0\n-2e-1,3,1\n";
        let d = Dataset::from_csv(csv.as_bytes(), Some("y")).unwrap();
        assert_eq!(d.feature_names, vec!["a", "b"]);
        assert_eq!(d.features, vec![vec![0.5, 1.0], vec![-0.2, 3.0]]);
        assert_eq!(d.targets, Some(vec![0.0, 1.0]));
    }

    #[test]
    fn diagnostics() {
        let err = Dataset::from_csv("a,y\nfoo,1\n".as_bytes(), Some("y")).unwrap_err();
        assert!(err.to_string().contains("\"a\""), "{err}");
        assert!(Dataset::from_csv("a,b\n1,2\n".as_bytes(), Some("y")).is_err());
        assert!(Dataset::from_csv("a,b\n1,2\n3\n".as_bytes(), None).is_err());
        assert!(matches!(
            Dataset::from_csv("a,b\n".as_bytes(), None),
            Err(Error::EmptyData)
        ));
        assert!(Dataset::from_csv("y\n1\n".as_bytes(), Some("y")).is_err());
    }

    #[test]
    fn select_reports_missing_columns() {
        let d = Dataset::from_csv("a,b\n1,2\n".as_bytes(), None).unwrap();
        let s = d.select_features(&["b".to_string()]).unwrap();
        assert_eq!(s.features, vec![vec![2.0]]);
        let err = d.select_features(&["c".to_string()]).unwrap_err();
        assert!(err.to_string().contains("\"c\""));
    }

    #[test]
    fn last_column_default_and_task_checks() {
        let d = Dataset::from_csv(
            "a,b,label
1,2,0
3,4,1
"
            .as_bytes(),
            TargetColumn::Last,
        )
        .unwrap();
        assert_eq!(d.feature_names, vec!["a", "b"]);
        assert!(d.check_task(Task::Classification).is_ok());
        assert!(d.check_task(Task::Regression).is_ok());
        let d = Dataset::from_csv(
            "a,y
1,2
3,0
"
            .as_bytes(),
            TargetColumn::Last,
        )
        .unwrap();
        assert!(matches!(d.check_task(Task::Classification), Err(Error::NonBinaryLabel(v)) if v == 2.0));
        let d = Dataset::from_csv(
            "a,y
1,1
3,1
"
            .as_bytes(),
            TargetColumn::Last,
        )
        .unwrap();
        assert!(matches!(d.check_task(Task::Classification), Err(Error::SingleClass)));
        assert!(matches!(d.check_task(Task::Regression), Err(Error::ConstantTargets)));
        let d = Dataset::from_csv(
            "a,b
1,2
"
            .as_bytes(),
            None,
        )
        .unwrap();
        assert!(d.check_task(Task::Clustering).is_ok());
        assert!(d.check_task(Task::Classification).is_err());
    }
}
