//! The priority-aware order distribution and its reference special cases.
//!
//! For a linear extension `π` with prefixes `S_t = {π_1, ..., π_t}` the
//! unnormalized weight is
//!
//! ```text
//! w(π) = Π_t  λ_{π_t} · |max(S_t)| / Σ_{k ∈ max(S_t)} λ_k
//! ```
//!
//! Dropping the `|max(S_t)|` factor gives the backward sequential (weighted)
//! scheme, which is already normalized on ordered partitions. Products are
//! accumulated as sums of logs so extreme weight ratios never overflow.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::poset::{OrderedPartition, Permutation, PlayerSet, Poset};

/// Strictly positive, finite soft-priority weights, one per player.
#[derive(Debug, Clone, PartialEq)]
pub struct Weights(Vec<f64>);

impl Weights {
    pub fn new(lambda: Vec<f64>) -> Result<Self> {
        if lambda.is_empty() {
            return Err(Error::InvalidWeights("no weights given".into()));
        }
        for (i, &l) in lambda.iter().enumerate() {
            if !(l.is_finite() && l > 0.0) {
                return Err(Error::InvalidWeights(format!(
                    "weight of player {i} is {l}, expected a finite positive number"
                )));
            }
        }
        if !lambda.iter().sum::<f64>().is_finite() {
            return Err(Error::InvalidWeights("sum of weights overflows".into()));
        }
        Ok(Self(lambda))
    }

    pub fn uniform(n: usize) -> Self {
        Self(vec![1.0; n])
    }

    /// `λ_i = base^{c_i}`.
    pub fn from_base_exponents(base: f64, exponents: &[f64]) -> Result<Self> {
        if !(base.is_finite() && base > 0.0) {
            return Err(Error::InvalidWeights(format!("base {base} must be positive")));
        }
        Self::new(exponents.iter().map(|&c| base.powf(c)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> f64 {
        self.0[i]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    /// Copy with the weights of `players` replaced by `value`.
    pub fn with_value(&self, players: &PlayerSet, value: f64) -> Result<Weights> {
        let mut lambda = self.0.clone();
        for i in players.iter() {
            *lambda.get_mut(i).ok_or(Error::IndexOutOfRange {
                index: i,
                n: self.0.len(),
            })? = value;
        }
        Weights::new(lambda)
    }

    pub fn scaled(&self, factor: f64) -> Result<Weights> {
        Weights::new(self.0.iter().map(|l| l * factor).collect())
    }

    pub(crate) fn sum_over(&self, set: &PlayerSet) -> f64 {
        set.iter().map(|i| self.0[i]).sum()
    }

    pub(crate) fn check_len(&self, n: usize) -> Result<()> {
        if self.0.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "{} weights for {n} players",
                self.0.len()
            )));
        }
        Ok(())
    }
}

/// Maximal elements of a growing prefix. Appending `x` to a prefix of a
/// linear extension only evicts the predecessors of `x`.
#[derive(Debug, Clone, Default)]
pub(crate) struct Frontier {
    pub(crate) set: PlayerSet,
}

impl Frontier {
    pub(crate) fn push(&mut self, poset: &Poset, x: usize) {
        self.set.difference_with(poset.predecessors(x));
        self.set.insert(x);
    }

    pub(crate) fn pushed(&self, poset: &Poset, x: usize) -> Frontier {
        let mut f = self.clone();
        f.push(poset, x);
        f
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum StepRule {
    /// `λ_x |M| / Σ_M λ`
    PriorityAware,
    /// `λ_x / Σ_M λ`
    Backward,
}

fn log_product(poset: &Poset, w: &Weights, pi: &Permutation, rule: StepRule) -> Result<f64> {
    let n = poset.n();
    w.check_len(n)?;
    if pi.len() != n {
        return Err(Error::NotLinearExtension);
    }
    let mut placed = PlayerSet::new();
    let mut frontier = Frontier::default();
    let mut total = 0.0;
    for &x in pi.order() {
        if !poset.predecessors(x).is_subset(&placed) {
            return Err(Error::NotLinearExtension);
        }
        placed.insert(x);
        frontier.push(poset, x);
        total += w.get(x).ln() - w.sum_over(&frontier.set).ln();
        if rule == StepRule::PriorityAware {
            total += (frontier.set.len() as f64).ln();
        }
    }
    Ok(total)
}

/// Natural log of the unnormalized priority-aware weight of `pi`.
pub fn pasv_log_weight(poset: &Poset, w: &Weights, pi: &Permutation) -> Result<f64> {
    log_product(poset, w, pi, StepRule::PriorityAware)
}

/// Backward sequential (weighted Shapley) probability of `pi` under an
/// ordered partition.
pub fn wsv_probability(partition: &OrderedPartition, w: &Weights, pi: &Permutation) -> Result<f64> {
    let poset = partition.to_poset();
    Ok(log_product(&poset, w, pi, StepRule::Backward)?.exp())
}

/// `λ_i / Σ_{k ∈ max(S)} λ_k` for a maximal `i` of a feasible `S`.
pub fn choice_factor(poset: &Poset, w: &Weights, i: usize, s: &PlayerSet) -> Result<f64> {
    w.check_len(poset.n())?;
    if !poset.is_feasible(s) {
        return Err(Error::InfeasibleSet);
    }
    if !s.contains(i) {
        return Err(Error::NotMaximalInSet(i));
    }
    let top = poset.maximal_elements(s)?;
    if !top.contains(i) {
        return Err(Error::NotMaximalInSet(i));
    }
    Ok(w.get(i) / w.sum_over(&top))
}

/// A probability distribution on permutations with explicit support.
#[derive(Debug, Clone)]
pub struct OrderDistribution {
    n: usize,
    support: Vec<Permutation>,
    prob: Vec<f64>,
    index: HashMap<Vec<usize>, usize>,
}

impl OrderDistribution {
    pub fn new(n: usize, support: Vec<Permutation>, prob: Vec<f64>) -> Result<Self> {
        if support.len() != prob.len() || support.is_empty() {
            return Err(Error::DimensionMismatch(
                "support and probabilities must be nonempty and parallel".into(),
            ));
        }
        let mut index = HashMap::with_capacity(support.len());
        for (k, pi) in support.iter().enumerate() {
            if pi.len() != n {
                return Err(Error::DimensionMismatch(format!(
                    "permutation of length {} in a distribution over {n} players",
                    pi.len()
                )));
            }
            if index.insert(pi.order().to_vec(), k).is_some() {
                return Err(Error::InvalidPermutation(format!(
                    "{:?} listed twice",
                    pi.order()
                )));
            }
        }
        if prob.iter().any(|&p| !(p >= 0.0 && p.is_finite())) {
            return Err(Error::InvalidWeights("probabilities must be nonnegative".into()));
        }
        Ok(Self {
            n,
            support,
            prob,
            index,
        })
    }

    /// Normalize log-weights with a fixed-order log-sum-exp.
    pub fn from_log_weights(n: usize, support: Vec<Permutation>, log_w: &[f64]) -> Result<Self> {
        let m = log_w.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let mut z = 0.0;
        for &lw in log_w {
            z += (lw - m).exp();
        }
        let log_z = m + z.ln();
        let prob = log_w.iter().map(|&lw| (lw - log_z).exp()).collect();
        Self::new(n, support, prob)
    }

    pub fn point_mass(pi: Permutation) -> Self {
        let n = pi.len();
        Self::new(n, vec![pi], vec![1.0]).expect("single permutation")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn support(&self) -> &[Permutation] {
        &self.support
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.prob
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    /// Probability of `pi`; zero off the support.
    pub fn prob_of(&self, pi: &Permutation) -> f64 {
        self.prob_of_order(pi.order())
    }

    pub fn contains(&self, pi: &Permutation) -> bool {
        self.index.contains_key(pi.order())
    }

    pub fn prob_of_order(&self, order: &[usize]) -> f64 {
        self.index.get(order).map_or(0.0, |&k| self.prob[k])
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Permutation, f64)> {
        self.support.iter().zip(self.prob.iter().copied())
    }
}

/// Exact priority-aware distribution over all linear extensions.
pub fn exact_pasv_distribution(poset: &Poset, w: &Weights, cap: usize) -> Result<OrderDistribution> {
    w.check_len(poset.n())?;
    let support = poset.enumerate_linear_extensions(cap)?;
    let log_w = support
        .par_iter()
        .map(|pi| pasv_log_weight(poset, w, pi))
        .collect::<Result<Vec<_>>>()?;
    OrderDistribution::from_log_weights(poset.n(), support, &log_w)
}

/// Uniform distribution over linear extensions.
pub fn psv_distribution(poset: &Poset, cap: usize) -> Result<OrderDistribution> {
    let support = poset.enumerate_linear_extensions(cap)?;
    let p = 1.0 / support.len() as f64;
    let prob = vec![p; support.len()];
    OrderDistribution::new(poset.n(), support, prob)
}
