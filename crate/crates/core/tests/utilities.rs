mod common;

use std::collections::BTreeMap;
use std::sync::Arc;

use common::*;
use pasv::utility::{knn_imputation_utility, lineage_utility, LogisticPredictor, TabularDataset};
use pasv::valuation::exact_value;
use pasv::{PlayerSet, Poset, UtilityFn, Weights};

fn dataset() -> (Vec<Vec<f64>>, Vec<usize>) {
    let rows = vec![
        vec![0.5, -1.0, 2.0],
        vec![1.5, 0.0, -0.5],
        vec![-0.3, 2.2, 1.1],
        vec![2.0, 1.0, 0.0],
        vec![0.0, 0.0, 0.0],
        vec![-1.2, -0.7, 0.9],
        vec![0.8, 1.9, -1.4],
        vec![1.1, -0.2, 0.3],
    ];
    let labels = vec![1, 0, 1, 1, 0, 0, 1, 0];
    (rows, labels)
}

const W: [f64; 3] = [0.7, -1.1, 0.4];
const B: f64 = 0.2;

fn sigmoid_prob(x: &[f64], y: usize) -> f64 {
    let z = B + W[0] * x[0] + W[1] * x[1] + W[2] * x[2];
    let p1 = 1.0 / (1.0 + (-z).exp());
    if y == 1 { p1 } else { 1.0 - p1 }
}

/// Independent re-implementation of the conditional k-NN utility.
fn oracle(rows: &[Vec<f64>], labels: &[usize], eval: &[usize], empty_nbrs: &[usize], k: usize, s: &[usize]) -> f64 {
    let mut total = 0.0;
    for &t in eval {
        let x = &rows[t];
        let nbrs: Vec<usize> = if s.is_empty() {
            empty_nbrs.to_vec()
        } else {
            let mut d: Vec<(f64, usize)> = (0..rows.len())
                .map(|r| (s.iter().map(|&c| (rows[r][c] - x[c]).powi(2)).sum::<f64>(), r))
                .collect();
            d.sort_by(|a, b| a.partial_cmp(b).unwrap());
            d[..k].iter().map(|p| p.1).collect()
        };
        let mut acc = 0.0;
        for r in nbrs {
            let z: Vec<f64> = (0..3).map(|c| if s.contains(&c) { x[c] } else { rows[r][c] }).collect();
            acc += sigmoid_prob(&z, labels[t]);
        }
        total += acc / k as f64;
    }
    total / eval.len() as f64
}

#[test]
fn knn_matches_brute_force() {
    let (rows, labels) = dataset();
    for (k, n_eval, seed) in [(1, 8, 1), (3, 5, 2), (8, 8, 3), (2, 12, 4)] {
        let ds = TabularDataset::new(rows.clone(), labels.clone()).unwrap();
        let f = Arc::new(LogisticPredictor::new(2, vec![W.to_vec()], vec![B]).unwrap());
        let u = knn_imputation_utility(ds.clone(), ds, f, k, n_eval, seed).unwrap();
        for mask in 0u64..8 {
            let s = members(mask, 3);
            let want = oracle(&rows, &labels, u.eval_indices(), u.empty_set_neighbors(), k, &s);
            let got = u.evaluate(&set_from_mask(mask)).unwrap();
            assert!((got - want).abs() < 1e-12, "k={k} S={s:?}: {got} vs {want}");
        }
        let plain: f64 = u.eval_indices().iter().map(|&t| sigmoid_prob(&rows[t], labels[t])).sum::<f64>()
            / u.eval_indices().len() as f64;
        assert!((u.evaluate(&PlayerSet::full(3)).unwrap() - plain).abs() < 1e-12);
    }
}

/// Sources 0,1; clean copies 2 (of 0), 3 (of 1); poisoned copies 4 (of 0), 5 (of 1).
fn market() -> (pasv::utility::LineageUtility, Poset) {
    let u = lineage_utility(
        6,
        &PlayerSet::from_indices([0, 1]),
        &BTreeMap::from([(2, 0), (3, 1), (4, 0), (5, 1)]),
        &BTreeMap::from([(0, 1.0), (1, 2.0)]),
        &BTreeMap::from([(4, 0.3), (5, 0.5)]),
    )
    .unwrap();
    let dag = Poset::new(6, &[(0, 2), (1, 3), (0, 4), (1, 5)]).unwrap();
    (u, dag)
}

#[test]
fn lineage_precedence_removes_copy_credit() {
    let (u, dag) = market();
    let psv = exact_value(&dag, &Weights::uniform(6), &u, 10_000).unwrap();
    assert!(psv.values[2].abs() < 1e-12 && psv.values[3].abs() < 1e-12);
    assert!(psv.values[4] < 0.0 && psv.values[5] < 0.0);
    let sv = exact_value(&Poset::antichain(6), &Weights::uniform(6), &u, 10_000).unwrap();
    assert!(sv.values[2] > 0.0 && sv.values[3] > 0.0);
    assert!(sv.values[0] < psv.values[0]);
}
