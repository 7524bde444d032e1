//! Feature-subset utility with conditional k-nearest-neighbour imputation.
//!
//! For a feature subset `S` and an evaluation point `(x, y)` the `k` training
//! rows closest to `x` on the coordinates in `S` each donate their values for
//! the coordinates outside `S`; the utility is the predicted probability of
//! `y` averaged over those composites and then over the evaluation points.

use std::path::Path;
use std::sync::Arc;

use rayon::prelude::*;

use super::UtilityFn;
use crate::error::{Error, Result};
use crate::poset::PlayerSet;
use crate::rng::{derive_seed, SplitMix64};

/// Rows of numeric features with integer class labels.
#[derive(Debug, Clone, PartialEq)]
pub struct TabularDataset {
    rows: Vec<Vec<f64>>,
    labels: Vec<usize>,
}

impl TabularDataset {
    pub fn new(rows: Vec<Vec<f64>>, labels: Vec<usize>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::DimensionMismatch("dataset has no rows".into()));
        }
        if rows.len() != labels.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} rows but {} labels",
                rows.len(),
                labels.len()
            )));
        }
        let d = rows[0].len();
        if let Some(r) = rows.iter().position(|r| r.len() != d) {
            return Err(Error::DimensionMismatch(format!(
                "row {r} has {} features, expected {d}",
                rows[r].len()
            )));
        }
        Ok(Self { rows, labels })
    }

    /// CSV with a header row; `label_column` names the class column and every
    /// other column is a numeric feature, in file order.
    pub fn from_csv(path: &Path, label_column: &str) -> Result<Self> {
        let parse_err = |e: String| Error::Parse(format!("{}: {e}", path.display()));
        let mut reader = csv::Reader::from_path(path).map_err(|e| parse_err(e.to_string()))?;
        let header = reader.headers().map_err(|e| parse_err(e.to_string()))?.clone();
        let label_idx = header
            .iter()
            .position(|h| h == label_column)
            .ok_or_else(|| parse_err(format!("no column named {label_column:?}")))?;
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        for (line, record) in reader.records().enumerate() {
            let record = record.map_err(|e| parse_err(e.to_string()))?;
            let mut row = Vec::with_capacity(record.len().saturating_sub(1));
            for (c, field) in record.iter().enumerate() {
                let v: f64 = field.trim().parse().map_err(|_| {
                    parse_err(format!("row {}: {field:?} is not numeric", line + 1))
                })?;
                if c == label_idx {
                    if v < 0.0 || v.fract() != 0.0 {
                        return Err(parse_err(format!("row {}: label {v} is not a class index", line + 1)));
                    }
                    labels.push(v as usize);
                } else {
                    row.push(v);
                }
            }
            rows.push(row);
        }
        Self::new(rows, labels)
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn n_features(&self) -> usize {
        self.rows[0].len()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.rows[i]
    }

    pub fn label(&self, i: usize) -> usize {
        self.labels[i]
    }
}

/// `f_y(x)`: predicted probability of class `y` at input `x`.
pub trait Predictor: Send + Sync {
    fn n_classes(&self) -> usize;
    fn predict_proba(&self, x: &[f64], y: usize) -> f64;
}

/// Multinomial logistic scorer: `softmax(W x + b)`. A single weight row with
/// two classes is read as binary logistic regression for class 1.
#[derive(Debug, Clone, PartialEq, serde::Deserialize)]
pub struct LogisticPredictor {
    classes: usize,
    weights: Vec<Vec<f64>>,
    bias: Vec<f64>,
}

impl LogisticPredictor {
    pub fn new(classes: usize, weights: Vec<Vec<f64>>, bias: Vec<f64>) -> Result<Self> {
        let p = Self {
            classes,
            weights,
            bias,
        };
        p.validate()?;
        Ok(p)
    }

    fn validate(&self) -> Result<()> {
        let rows = self.weights.len();
        let binary = self.classes == 2 && rows == 1;
        if self.classes < 2 || !(binary || rows == self.classes) {
            return Err(Error::DimensionMismatch(format!(
                "{rows} weight rows for {} classes",
                self.classes
            )));
        }
        if self.bias.len() != rows {
            return Err(Error::DimensionMismatch(format!(
                "{} biases for {rows} weight rows",
                self.bias.len()
            )));
        }
        let d = self.weights[0].len();
        if self.weights.iter().any(|r| r.len() != d) {
            return Err(Error::DimensionMismatch("ragged weight matrix".into()));
        }
        Ok(())
    }

    /// Coefficient file: `{"classes": m, "weights": [[...], ...], "bias": [...]}`.
    pub fn from_json(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let p: LogisticPredictor = serde_json::from_str(&text)
            .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        p.validate()?;
        Ok(p)
    }

    pub fn n_features(&self) -> usize {
        self.weights[0].len()
    }

    fn score(&self, row: usize, x: &[f64]) -> f64 {
        self.bias[row]
            + self.weights[row]
                .iter()
                .zip(x)
                .map(|(w, v)| w * v)
                .sum::<f64>()
    }
}

impl Predictor for LogisticPredictor {
    fn n_classes(&self) -> usize {
        self.classes
    }

    fn predict_proba(&self, x: &[f64], y: usize) -> f64 {
        if self.weights.len() == 1 {
            let p1 = 1.0 / (1.0 + (-self.score(0, x)).exp());
            return if y == 1 { p1 } else { 1.0 - p1 };
        }
        let scores: Vec<f64> = (0..self.classes).map(|c| self.score(c, x)).collect();
        let m = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let z: f64 = scores.iter().map(|s| (s - m).exp()).sum();
        (scores[y] - m).exp() / z
    }
}

pub struct KnnImputationUtility {
    train: TabularDataset,
    eval: TabularDataset,
    predictor: Arc<dyn Predictor>,
    k: usize,
    eval_indices: Vec<usize>,
    empty_set_neighbors: Vec<usize>,
    with_replacement: bool,
    seed: u64,
}

/// Evaluation points are drawn once here (without replacement when
/// `n_eval <= |eval_points|`), so the utility is a fixed function of `S`.
pub fn knn_imputation_utility(
    train: TabularDataset,
    eval_points: TabularDataset,
    predictor: Arc<dyn Predictor>,
    k: usize,
    n_eval: usize,
    seed: u64,
) -> Result<KnnImputationUtility> {
    if k == 0 || k > train.len() {
        return Err(Error::KTooLarge {
            k,
            rows: train.len(),
        });
    }
    if n_eval == 0 {
        return Err(Error::InvalidConfig("n_eval must be at least 1".into()));
    }
    if train.n_features() != eval_points.n_features() {
        return Err(Error::DimensionMismatch(format!(
            "training rows have {} features, evaluation rows {}",
            train.n_features(),
            eval_points.n_features()
        )));
    }
    if let Some(t) = (0..eval_points.len()).find(|&t| eval_points.label(t) >= predictor.n_classes()) {
        return Err(Error::DimensionMismatch(format!(
            "evaluation row {t} has label {} but the predictor has {} classes",
            eval_points.label(t),
            predictor.n_classes()
        )));
    }

    let m = eval_points.len();
    let mut rng = SplitMix64::new(derive_seed(seed, "knn-eval-points"));
    let with_replacement = n_eval > m;
    let eval_indices = if with_replacement {
        (0..n_eval).map(|_| rng.below(m)).collect()
    } else {
        let mut idx: Vec<usize> = (0..m).collect();
        for i in 0..n_eval {
            let j = i + rng.below(m - i);
            idx.swap(i, j);
        }
        idx.truncate(n_eval);
        idx
    };

    let mut order: Vec<usize> = (0..train.len()).collect();
    SplitMix64::new(derive_seed(seed, "knn-empty-set")).shuffle(&mut order);
    order.truncate(k);

    Ok(KnnImputationUtility {
        train,
        eval: eval_points,
        predictor,
        k,
        eval_indices,
        empty_set_neighbors: order,
        with_replacement,
        seed,
    })
}

impl KnnImputationUtility {
    /// Rows of the evaluation set used by every call, in order.
    pub fn eval_indices(&self) -> &[usize] {
        &self.eval_indices
    }

    /// Training rows used as neighbours when `S = ∅` (all distances tie).
    pub fn empty_set_neighbors(&self) -> &[usize] {
        &self.empty_set_neighbors
    }

    /// True when more evaluation points were requested than exist.
    pub fn with_replacement(&self) -> bool {
        self.with_replacement
    }

    pub fn n_features(&self) -> usize {
        self.train.n_features()
    }

    fn neighbors(&self, x: &[f64], coords: &[usize]) -> Vec<usize> {
        if coords.is_empty() {
            return self.empty_set_neighbors.clone();
        }
        let mut dist: Vec<(f64, usize)> = (0..self.train.len())
            .map(|r| {
                let row = self.train.row(r);
                let d: f64 = coords.iter().map(|&c| (row[c] - x[c]).powi(2)).sum();
                (d, r)
            })
            .collect();
        dist.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        dist.into_iter().take(self.k).map(|(_, r)| r).collect()
    }

    fn point_utility(&self, t: usize, s: &PlayerSet, coords: &[usize]) -> f64 {
        let x = self.eval.row(t);
        let y = self.eval.label(t);
        let mut composite = x.to_vec();
        let mut total = 0.0;
        for r in self.neighbors(x, coords) {
            let donor = self.train.row(r);
            for (c, slot) in composite.iter_mut().enumerate() {
                *slot = if s.contains(c) { x[c] } else { donor[c] };
            }
            total += self.predictor.predict_proba(&composite, y);
        }
        total / self.k as f64
    }
}

impl UtilityFn for KnnImputationUtility {
    fn evaluate(&self, s: &PlayerSet) -> Result<f64> {
        let d = self.n_features();
        s.check_within(d)?;
        let per_point: Vec<f64> = if s.len() == d {
            self.eval_indices
                .iter()
                .map(|&t| self.predictor.predict_proba(self.eval.row(t), self.eval.label(t)))
                .collect()
        } else {
            let coords: Vec<usize> = s.iter().collect();
            self.eval_indices
                .par_iter()
                .map(|&t| self.point_utility(t, s, &coords))
                .collect()
        };
        Ok(per_point.iter().sum::<f64>() / per_point.len() as f64)
    }

    fn descriptor(&self) -> String {
        format!(
            "knn:k={},n_eval={},seed={}",
            self.k,
            self.eval_indices.len(),
            self.seed
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn predictor() -> Arc<dyn Predictor> {
        Arc::new(LogisticPredictor::new(2, vec![vec![1.0, -2.0]], vec![0.5]).unwrap())
    }

    fn data() -> TabularDataset {
        TabularDataset::new(
            vec![vec![0.0, 1.0], vec![1.0, 0.0], vec![2.0, 2.0], vec![-1.0, 0.5]],
            vec![0, 1, 1, 0],
        )
        .unwrap()
    }

    #[test]
    fn full_set_skips_imputation() {
        for k in [1, 3] {
            let u = knn_imputation_utility(data(), data(), predictor(), k, 4, 11).unwrap();
            let want: f64 = (0..4)
                .map(|t| predictor().predict_proba(data().row(t), data().label(t)))
                .sum::<f64>()
                / 4.0;
            let got = u.evaluate(&PlayerSet::full(2)).unwrap();
            assert!((got - want).abs() < 1e-15);
        }
    }

    #[test]
    fn single_training_row_is_forced_neighbor() {
        let train = TabularDataset::new(vec![vec![5.0, -5.0]], vec![1]).unwrap();
        let u = knn_imputation_utility(train, data(), predictor(), 1, 4, 3).unwrap();
        let s = PlayerSet::singleton(0);
        let want: f64 = u
            .eval_indices()
            .iter()
            .map(|&t| predictor().predict_proba(&[data().row(t)[0], -5.0], data().label(t)))
            .sum::<f64>()
            / 4.0;
        assert!((u.evaluate(&s).unwrap() - want).abs() < 1e-15);
    }

    #[test]
    fn construction_errors() {
        assert!(matches!(
            knn_imputation_utility(data(), data(), predictor(), 5, 2, 0),
            Err(Error::KTooLarge { k: 5, rows: 4 })
        ));
        let wide = TabularDataset::new(vec![vec![0.0; 3]], vec![0]).unwrap();
        assert!(matches!(
            knn_imputation_utility(data(), wide, predictor(), 1, 1, 0),
            Err(Error::DimensionMismatch(_))
        ));
        assert!(TabularDataset::new(vec![vec![0.0], vec![0.0, 1.0]], vec![0, 0]).is_err());
    }

    #[test]
    fn eval_point_draws() {
        let u = knn_imputation_utility(data(), data(), predictor(), 2, 3, 9).unwrap();
        let mut idx = u.eval_indices().to_vec();
        idx.sort();
        idx.dedup();
        assert_eq!(idx.len(), 3);
        assert!(!u.with_replacement());
        let u = knn_imputation_utility(data(), data(), predictor(), 2, 10, 9).unwrap();
        assert_eq!(u.eval_indices().len(), 10);
        assert!(u.with_replacement());
    }

    #[test]
    fn softmax_sums_to_one() {
        let p = LogisticPredictor::new(
            3,
            vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![-1.0, 2.0]],
            vec![0.0, 0.1, -0.3],
        )
        .unwrap();
        let x = [0.7, -1.2];
        let total: f64 = (0..3).map(|y| p.predict_proba(&x, y)).sum();
        assert!((total - 1.0).abs() < 1e-12);
        assert!(LogisticPredictor::new(3, vec![vec![1.0]], vec![0.0]).is_err());
    }

    #[test]
    fn dataset_csv() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("d.csv");
        std::fs::write(&path, "a,label,b\n1.5,1,2\n-1,0,0.25\n").unwrap();
        let d = TabularDataset::from_csv(&path, "label").unwrap();
        assert_eq!(d.row(0), &[1.5, 2.0]);
        assert_eq!(d.label(1), 0);
        assert!(TabularDataset::from_csv(&path, "y").is_err());
    }
}
