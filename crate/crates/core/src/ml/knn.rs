use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{class_labels, MlError};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KnnModel {
    pub k: usize,
    pub points: Vec<Vec<f64>>,
    pub labels: Vec<i64>,
}

pub fn train_knn(x: &[Vec<f64>], y: &[f64], k: usize) -> Result<KnnModel, MlError> {
    if k == 0 || k > x.len() {
        return Err(MlError::InvalidData(format!(
            "k = {k} must be between 1 and the number of rows ({})",
            x.len()
        )));
    }
    Ok(KnnModel {
        k,
        points: x.to_vec(),
        labels: class_labels(y)?,
    })
}

impl KnnModel {
    /// Majority label among the `k` nearest points by Euclidean distance.
    /// Distance ties go to the lower row index, vote ties to the smallest
    /// label.
    pub fn classify(&self, x: &[f64]) -> i64 {
        let mut order: Vec<(f64, usize)> = self
            .points
            .iter()
            .enumerate()
            .map(|(i, p)| {
                (
                    p.iter().zip(x).map(|(a, b)| (a - b).powi(2)).sum::<f64>(),
                    i,
                )
            })
            .collect();
        // (distance, index) is a total order, so an unstable sort is deterministic
        order.sort_unstable_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        let mut votes: BTreeMap<i64, usize> = BTreeMap::new();
        for &(_, i) in order.iter().take(self.k) {
            *votes.entry(self.labels[i]).or_default() += 1;
        }
        let mut best = (i64::MIN, 0usize);
        // ascending labels: strictly-greater keeps the smallest on ties
        for (label, count) in votes {
            if count > best.1 {
                best = (label, count);
            }
        }
        best.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model(k: usize) -> KnnModel {
        let x = vec![
            vec![0.0, 0.0],
            vec![1.0, 0.0],
            vec![5.0, 5.0],
            vec![6.0, 5.0],
            vec![9.0, 9.0],
        ];
        train_knn(&x, &[2.0, 2.0, 1.0, 1.0, 1.0], k).unwrap()
    }

    #[test]
    fn exact_match_with_k1() {
        assert_eq!(model(1).classify(&[5.0, 5.0]), 1);
        assert_eq!(model(1).classify(&[0.0, 0.0]), 2);
    }

    #[test]
    fn k_equals_n_is_global_majority() {
        assert_eq!(model(5).classify(&[0.0, 0.0]), 1);
        let m = train_knn(&[vec![0.0], vec![1.0]], &[7.0, 3.0], 2).unwrap();
        assert_eq!(m.classify(&[0.0]), 3);
    }

    #[test]
    fn distance_tie_prefers_lower_index() {
        let m = train_knn(&[vec![-1.0], vec![1.0]], &[4.0, 2.0], 1).unwrap();
        assert_eq!(m.classify(&[0.0]), 4);
    }

    #[test]
    fn k_out_of_range() {
        assert_eq!(
            train_knn(&[vec![0.0]], &[0.0], 2).unwrap_err().code(),
            "E-DATA"
        );
    }
}
