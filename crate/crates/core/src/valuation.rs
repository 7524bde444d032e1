//! Random order values: `ψ_i = E_π[U(π^i ∪ {i}) − U(π^i)]`.
//!
//! Each permutation is walked once as a chain of prefixes
//! `∅ = S_0 ⊂ S_1 ⊂ … ⊂ S_n = [n]`, so one sample costs `n` utility calls
//! (plus the shared `U(∅)`) and its marginals telescope to `U([n]) − U(∅)`.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::order_model::{exact_pasv_distribution, OrderDistribution, Weights};
use crate::poset::{Permutation, PlayerSet, Poset};
use crate::utility::{cached, UtilityFn};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValueReport {
    pub values: Vec<f64>,
    /// Per-player Monte Carlo standard errors; zero for exact values.
    pub std_errors: Vec<f64>,
    pub n_samples: usize,
    pub full_value: f64,
    pub empty_value: f64,
    /// `Σ_i ψ_i` as computed.
    pub realized_sum: f64,
    #[serde(skip)]
    sample_marginals: Vec<Vec<f64>>,
}

impl ValueReport {
    pub fn n(&self) -> usize {
        self.values.len()
    }

    /// `U([n]) − U(∅)`.
    pub fn total(&self) -> f64 {
        self.full_value - self.empty_value
    }

    /// `|Σ_i ψ_i − (U([n]) − U(∅))|`.
    pub fn efficiency_gap(&self) -> f64 {
        (self.realized_sum - self.total()).abs()
    }

    /// CSV with columns `player,value,std_error,n_samples`. `labels` names
    /// the players; indices are used when it is empty.
    pub fn to_csv(&self, labels: &[String]) -> String {
        let mut out = String::from("player,value,std_error,n_samples\n");
        for i in 0..self.n() {
            out.push_str(&format!(
                "{},{},{},{}\n",
                csv_field(&player_label(labels, i)),
                self.values[i],
                self.std_errors[i],
                self.n_samples
            ));
        }
        out
    }

    pub fn to_json(&self, labels: &[String]) -> serde_json::Value {
        let players: Vec<_> = (0..self.n())
            .map(|i| {
                serde_json::json!({
                    "player": player_label(labels, i),
                    "value": self.values[i],
                    "std_error": self.std_errors[i],
                })
            })
            .collect();
        serde_json::json!({
            "players": players,
            "n_samples": self.n_samples,
            "total_check": {
                "full_minus_empty": self.total(),
                "realized_sum": self.realized_sum,
            },
        })
    }
}

fn player_label(labels: &[String], i: usize) -> String {
    labels.get(i).cloned().unwrap_or_else(|| i.to_string())
}

pub(crate) fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Marginal gains of every player along one permutation, indexed by player.
fn marginals_along<U: UtilityFn + ?Sized>(u: &U, pi: &Permutation, empty: f64) -> Result<Vec<f64>> {
    let mut out = vec![0.0; pi.len()];
    let mut prefix = PlayerSet::new();
    let mut prev = empty;
    for &x in pi.order() {
        prefix.insert(x);
        let cur = u.evaluate(&prefix)?;
        out[x] = cur - prev;
        prev = cur;
    }
    Ok(out)
}

fn check_samples(samples: &[Permutation]) -> Result<usize> {
    let n = samples.first().ok_or(Error::EmptySamples)?.len();
    if let Some(bad) = samples.iter().position(|p| p.len() != n) {
        return Err(Error::DimensionMismatch(format!(
            "sample {bad} has {} players, expected {n}",
            samples[bad].len()
        )));
    }
    Ok(n)
}

/// Monte Carlo estimate from permutation samples. Utility values are shared
/// across samples through a compute-once cache; per-player reductions run
/// in sample order, so the result does not depend on the thread count.
pub fn rov_estimate<U: UtilityFn + ?Sized>(samples: &[Permutation], u: &U) -> Result<ValueReport> {
    let n = check_samples(samples)?;
    let u = cached(u);
    let empty = u.evaluate(&PlayerSet::new())?;
    let full = u.evaluate(&PlayerSet::full(n))?;
    let marginals = samples
        .par_iter()
        .map(|pi| marginals_along(&u, pi, empty))
        .collect::<Result<Vec<_>>>()?;

    let m = samples.len() as f64;
    let mut values = vec![0.0; n];
    for row in &marginals {
        for (v, x) in values.iter_mut().zip(row) {
            *v += x;
        }
    }
    values.iter_mut().for_each(|v| *v /= m);
    let std_errors = (0..n)
        .map(|i| std_error(marginals.iter().map(|row| row[i]), values[i], samples.len()))
        .collect();
    Ok(ValueReport {
        realized_sum: values.iter().sum(),
        values,
        std_errors,
        n_samples: samples.len(),
        full_value: full,
        empty_value: empty,
        sample_marginals: marginals,
    })
}

fn std_error(xs: impl Iterator<Item = f64>, mean: f64, count: usize) -> f64 {
    if count < 2 {
        return 0.0;
    }
    let ss: f64 = xs.map(|x| (x - mean).powi(2)).sum();
    (ss / (count - 1) as f64).sqrt() / (count as f64).sqrt()
}

/// Expected marginals under an explicit distribution.
pub fn exact_value_from_distribution<U: UtilityFn + ?Sized>(
    d: &OrderDistribution,
    u: &U,
) -> Result<ValueReport> {
    let n = d.n();
    let u = cached(u);
    let empty = u.evaluate(&PlayerSet::new())?;
    let full = u.evaluate(&PlayerSet::full(n))?;
    let marginals = d
        .support()
        .par_iter()
        .map(|pi| marginals_along(&u, pi, empty))
        .collect::<Result<Vec<_>>>()?;
    let mut values = vec![0.0; n];
    for (row, p) in marginals.iter().zip(d.probabilities()) {
        for (v, x) in values.iter_mut().zip(row) {
            *v += p * x;
        }
    }
    Ok(ValueReport {
        realized_sum: values.iter().sum(),
        values,
        std_errors: vec![0.0; n],
        n_samples: d.len(),
        full_value: full,
        empty_value: empty,
        sample_marginals: Vec::new(),
    })
}

/// Exact priority-aware value by enumerating the linear extensions.
pub fn exact_value<U: UtilityFn + ?Sized>(
    poset: &Poset,
    w: &Weights,
    u: &U,
    cap: usize,
) -> Result<ValueReport> {
    let d = exact_pasv_distribution(poset, w, cap)?;
    exact_value_from_distribution(&d, u)
}

/// Assignment of every player to a named group.
#[derive(Debug, Clone, PartialEq)]
pub struct Grouping {
    of_player: Vec<usize>,
    labels: Vec<String>,
}

impl Grouping {
    /// Groups are listed in lexicographic label order.
    pub fn new(n: usize, assignment: &BTreeMap<usize, String>) -> Result<Self> {
        if let Some(&bad) = assignment.keys().find(|&&i| i >= n) {
            return Err(Error::IndexOutOfRange { index: bad, n });
        }
        let labels: Vec<String> = {
            let mut l: Vec<String> = assignment.values().cloned().collect();
            l.sort();
            l.dedup();
            l
        };
        let of_player = (0..n)
            .map(|i| {
                let label = assignment
                    .get(&i)
                    .ok_or_else(|| Error::IncompleteGrouping(i.to_string()))?;
                Ok(labels.binary_search(label).expect("label collected above"))
            })
            .collect::<Result<_>>()?;
        Ok(Self { of_player, labels })
    }

    /// Every player in its own group, labelled by `labels` or by index.
    pub fn singletons(n: usize, labels: &[String]) -> Result<Self> {
        let assignment = (0..n).map(|i| (i, player_label(labels, i))).collect();
        Self::new(n, &assignment)
    }

    pub fn n(&self) -> usize {
        self.of_player.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn group_of(&self, player: usize) -> usize {
        self.of_player[player]
    }

    pub fn members(&self, group: usize) -> PlayerSet {
        (0..self.n()).filter(|&i| self.of_player[i] == group).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroupValue {
    pub group: String,
    pub value: f64,
    pub std_error: f64,
}

/// Summed member values. Standard errors come from the per-sample group
/// sums, so within-permutation correlation between members is kept.
pub fn group_values(r: &ValueReport, grouping: &Grouping) -> Result<Vec<GroupValue>> {
    if grouping.n() != r.n() {
        return Err(Error::IncompleteGrouping(format!(
            "grouping covers {} players, report has {}",
            grouping.n(),
            r.n()
        )));
    }
    let g = grouping.labels().len();
    let mut values = vec![0.0; g];
    for i in 0..r.n() {
        values[grouping.group_of(i)] += r.values[i];
    }
    let mut errors = vec![0.0; g];
    if !r.sample_marginals.is_empty() {
        let sums: Vec<Vec<f64>> = r
            .sample_marginals
            .iter()
            .map(|row| {
                let mut s = vec![0.0; g];
                for (i, x) in row.iter().enumerate() {
                    s[grouping.group_of(i)] += x;
                }
                s
            })
            .collect();
        for (k, e) in errors.iter_mut().enumerate() {
            let mean = sums.iter().map(|s| s[k]).sum::<f64>() / sums.len() as f64;
            *e = std_error(sums.iter().map(|s| s[k]), mean, sums.len());
        }
    }
    Ok(grouping
        .labels()
        .iter()
        .zip(values.into_iter().zip(errors))
        .map(|(label, (value, std_error))| GroupValue {
            group: label.clone(),
            value,
            std_error,
        })
        .collect())
}

/// CSV with columns `group,value,std_error,n_samples`.
pub fn group_values_csv(groups: &[GroupValue], n_samples: usize) -> String {
    let mut out = String::from("group,value,std_error,n_samples\n");
    for g in groups {
        out.push_str(&format!(
            "{},{},{},{n_samples}\n",
            csv_field(&g.group),
            g.value,
            g.std_error
        ));
    }
    out
}

/// Mean marginal gain per (group, number of earlier arrivals).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PositionCurve {
    pub groups: Vec<String>,
    /// `means[g][s]`; zero where `counts[g][s] == 0`.
    pub means: Vec<Vec<f64>>,
    pub counts: Vec<Vec<usize>>,
    pub n_samples: usize,
}

impl PositionCurve {
    /// CSV with columns `group,position,mean,count`, empty cells included.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("group,position,mean,count\n");
        for (g, label) in self.groups.iter().enumerate() {
            for (s, (mean, count)) in self.means[g].iter().zip(&self.counts[g]).enumerate() {
                out.push_str(&format!("{},{s},{mean},{count}\n", csv_field(label)));
            }
        }
        out
    }
}

pub fn marginal_by_position<U: UtilityFn + ?Sized>(
    samples: &[Permutation],
    u: &U,
    grouping: &Grouping,
) -> Result<PositionCurve> {
    let n = check_samples(samples)?;
    if grouping.n() != n {
        return Err(Error::IncompleteGrouping(format!(
            "grouping covers {} players, samples have {n}",
            grouping.n()
        )));
    }
    let u = cached(u);
    let empty = u.evaluate(&PlayerSet::new())?;
    let marginals = samples
        .par_iter()
        .map(|pi| marginals_along(&u, pi, empty))
        .collect::<Result<Vec<_>>>()?;
    let g = grouping.labels().len();
    let mut sums = vec![vec![0.0; n]; g];
    let mut counts = vec![vec![0usize; n]; g];
    for (pi, row) in samples.iter().zip(&marginals) {
        for (s, &x) in pi.order().iter().enumerate() {
            let k = grouping.group_of(x);
            sums[k][s] += row[x];
            counts[k][s] += 1;
        }
    }
    let means = sums
        .iter()
        .zip(&counts)
        .map(|(srow, crow)| {
            srow.iter()
                .zip(crow)
                .map(|(&s, &c)| if c == 0 { 0.0 } else { s / c as f64 })
                .collect()
        })
        .collect();
    Ok(PositionCurve {
        groups: grouping.labels().to_vec(),
        means,
        counts,
        n_samples: samples.len(),
    })
}
