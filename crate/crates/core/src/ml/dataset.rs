use std::collections::HashSet;
use std::path::Path;

use super::MlError;

/// A numeric table whose columns are ordered `(features..., label)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Dataset {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Dataset {
    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn d(&self) -> usize {
        self.columns.len()
    }

    pub fn feature_names(&self) -> &[String] {
        &self.columns[..self.d() - 1]
    }

    pub fn label_name(&self) -> &str {
        &self.columns[self.d() - 1]
    }

    /// Feature matrix, one row per sample.
    pub fn features(&self) -> Vec<Vec<f64>> {
        let f = self.d() - 1;
        self.rows.iter().map(|r| r[..f].to_vec()).collect()
    }

    pub fn labels(&self) -> Vec<f64> {
        let f = self.d() - 1;
        self.rows.iter().map(|r| r[f]).collect()
    }

    /// Parses CSV text: header line, comma separator, no quoting, every cell
    /// a finite decimal number. Blank lines are skipped.
    pub fn from_csv(text: &str, features: &[&str], label: &str) -> Result<Dataset, MlError> {
        let mut lines = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty());
        let Some((_, header)) = lines.next() else {
            return Err(MlError::Schema("dataset is empty (no header line)".into()));
        };
        let header: Vec<&str> = header.split(',').map(str::trim).collect();
        let mut seen = HashSet::new();
        for name in &header {
            if !seen.insert(*name) {
                return Err(MlError::Schema(format!("duplicate header column `{name}`")));
            }
        }
        let wanted: Vec<&str> = features.iter().copied().chain([label]).collect();
        let mut index = Vec::with_capacity(wanted.len());
        for name in &wanted {
            match header.iter().position(|h| h == name) {
                Some(i) => index.push(i),
                None => return Err(MlError::Schema(format!("missing column `{name}`"))),
            }
        }

        let mut rows = Vec::new();
        for (lineno, line) in lines {
            let cells: Vec<&str> = line.split(',').map(str::trim).collect();
            if cells.len() != header.len() {
                return Err(MlError::Parse {
                    row: lineno + 1,
                    column: cells.len().min(header.len()) + 1,
                    message: format!("expected {} cells, found {}", header.len(), cells.len()),
                });
            }
            let mut values = Vec::with_capacity(cells.len());
            for (c, cell) in cells.iter().enumerate() {
                match cell.parse::<f64>() {
                    Ok(v) if v.is_finite() => values.push(v),
                    _ => {
                        return Err(MlError::Parse {
                            row: lineno + 1,
                            column: c + 1,
                            message: format!("`{cell}` is not a decimal number"),
                        })
                    }
                }
            }
            rows.push(index.iter().map(|&i| values[i]).collect());
        }
        if rows.is_empty() {
            return Err(MlError::Schema("dataset has no data rows".into()));
        }
        Ok(Dataset {
            columns: wanted.iter().map(|s| s.to_string()).collect(),
            rows,
        })
    }
}

pub fn load_dataset(path: &Path, features: &[&str], label: &str) -> Result<Dataset, MlError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| MlError::Io(format!("cannot read dataset {}: {e}", path.display())))?;
    Dataset::from_csv(&text, features, label)
}
