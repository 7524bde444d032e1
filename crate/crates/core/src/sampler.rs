//! Sampling arrival orders.
//!
//! [`mh_sample`] runs the adjacent-swap Metropolis–Hastings chain on linear
//! extensions; it works for any poset and only ever needs the maximal sets of
//! two prefixes per step. [`exact_sample`] and
//! [`backward_sequential_sample`] draw i.i.d. permutations and serve as
//! oracles for the chain.

use std::thread;

use crate::error::{Error, Result};
use crate::order_model::{Frontier, OrderDistribution, Weights};
use crate::poset::{OrderedPartition, Permutation, Poset};
use crate::rng::{derive_indexed_seed, SplitMix64};

/// Distribution of the swap position `k` (swapping positions `k`, `k + 1`).
#[derive(Debug, Clone, PartialEq, Default)]
pub enum IndexSampler {
    #[default]
    Uniform,
    /// Probabilities for positions `0..n-1`; must be positive and sum to 1.
    Weighted(Vec<f64>),
}

impl IndexSampler {
    fn cdf(&self, n: usize) -> Result<Option<Vec<f64>>> {
        match self {
            IndexSampler::Uniform => Ok(None),
            IndexSampler::Weighted(p) => {
                if p.len() != n.saturating_sub(1) {
                    return Err(Error::InvalidConfig(format!(
                        "index sampler has {} entries, expected {}",
                        p.len(),
                        n.saturating_sub(1)
                    )));
                }
                if p.iter().any(|&x| !(x > 0.0 && x.is_finite())) {
                    return Err(Error::InvalidConfig(
                        "index sampler probabilities must be positive".into(),
                    ));
                }
                let total: f64 = p.iter().sum();
                if (total - 1.0).abs() > 1e-9 {
                    return Err(Error::InvalidConfig(format!(
                        "index sampler probabilities sum to {total}"
                    )));
                }
                let mut acc = 0.0;
                Ok(Some(
                    p.iter()
                        .map(|x| {
                            acc += x;
                            acc
                        })
                        .collect(),
                ))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MhConfig {
    pub n_mc: usize,
    pub burn_in: usize,
    pub thinning: usize,
    pub seed: u64,
    pub index_sampler: IndexSampler,
}

impl MhConfig {
    pub fn new(n_mc: usize, burn_in: usize, thinning: usize, seed: u64) -> Self {
        Self {
            n_mc,
            burn_in,
            thinning,
            seed,
            index_sampler: IndexSampler::Uniform,
        }
    }

    /// Defaults by problem size: `N_MC = 10,000`, `B = 100,000`, `τ = 10,000`
    /// above 32 players, `N_MC = 3,000`, `B = 10,000`, `τ = 1,000` otherwise.
    pub fn default_for(n: usize) -> Self {
        if n > 32 {
            Self::new(10_000, 100_000, 10_000, 0)
        } else {
            Self::new(3_000, 10_000, 1_000, 0)
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_mc == 0 {
            return Err(Error::InvalidConfig("n_mc must be at least 1".into()));
        }
        if self.thinning == 0 {
            return Err(Error::InvalidConfig("thinning must be at least 1".into()));
        }
        Ok(())
    }

    /// Number of chain steps: `B + τ(N_MC - 1) + 1`.
    pub fn total_steps(&self) -> usize {
        self.burn_in + self.thinning * (self.n_mc - 1) + 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ChainStats {
    pub steps_total: usize,
    /// Steps whose drawn pair was incomparable.
    pub proposals: usize,
    pub accepts: usize,
    pub acceptance_rate: f64,
}

impl ChainStats {
    fn finish(mut self) -> Self {
        self.acceptance_rate = self.accepts as f64 / self.proposals.max(1) as f64;
        self
    }

    fn merge(self, other: ChainStats) -> ChainStats {
        ChainStats {
            steps_total: self.steps_total + other.steps_total,
            proposals: self.proposals + other.proposals,
            accepts: self.accepts + other.accepts,
            acceptance_rate: 0.0,
        }
        .finish()
    }
}

fn mean_weight(w: &Weights, f: &Frontier) -> f64 {
    w.sum_over(&f.set) / f.set.len() as f64
}

fn check_swap(poset: &Poset, pi: &Permutation, k: usize) -> Result<()> {
    if k + 1 >= pi.len() {
        return Err(Error::IndexOutOfRange {
            index: k + 1,
            n: pi.len(),
        });
    }
    if !poset.incomparable(pi.at(k), pi.at(k + 1))? {
        return Err(Error::ComparablePair { position: k });
    }
    Ok(())
}

/// `p(π') / p(π)` where `π'` swaps the players at positions `k` and `k + 1`
/// (0-based). Only the maximal sets of the two length-`k + 1` prefixes enter.
pub fn local_ratio(poset: &Poset, w: &Weights, pi: &Permutation, k: usize) -> Result<f64> {
    w.check_len(poset.n())?;
    if !poset.is_linear_extension(pi) {
        return Err(Error::NotLinearExtension);
    }
    check_swap(poset, pi, k)?;
    let mut before = Frontier::default();
    for t in 0..k {
        before.push(poset, pi.at(t));
    }
    let current = before.pushed(poset, pi.at(k));
    let proposed = before.pushed(poset, pi.at(k + 1));
    Ok(mean_weight(w, &current) / mean_weight(w, &proposed))
}

/// State of one adjacent-swap chain. `frontiers[t]` holds the maximal set of
/// the first `t` players of the current permutation and `means[t]` the mean
/// weight over it; a swap at `k` only changes entry `k + 1`.
pub struct MhChain<'a> {
    poset: &'a Poset,
    w: &'a Weights,
    pi: Permutation,
    frontiers: Vec<Frontier>,
    means: Vec<f64>,
    rng: SplitMix64,
    cdf: Option<Vec<f64>>,
    stats: ChainStats,
}

impl<'a> MhChain<'a> {
    pub fn new(
        poset: &'a Poset,
        w: &'a Weights,
        index_sampler: &IndexSampler,
        seed: u64,
        init: Option<Permutation>,
    ) -> Result<Self> {
        w.check_len(poset.n())?;
        let pi = match init {
            Some(pi) if poset.is_linear_extension(&pi) => pi,
            Some(_) => return Err(Error::InvalidInit),
            None => poset.initial_linear_extension(),
        };
        let mut frontiers = Vec::with_capacity(pi.len() + 1);
        let mut means = Vec::with_capacity(pi.len() + 1);
        let mut f = Frontier::default();
        frontiers.push(f.clone());
        means.push(0.0);
        for &x in pi.order() {
            f.push(poset, x);
            means.push(mean_weight(w, &f));
            frontiers.push(f.clone());
        }
        Ok(Self {
            poset,
            w,
            cdf: index_sampler.cdf(pi.len())?,
            pi,
            frontiers,
            means,
            rng: SplitMix64::new(seed),
            stats: ChainStats::default(),
        })
    }

    pub fn current(&self) -> &Permutation {
        &self.pi
    }

    pub fn stats(&self) -> ChainStats {
        self.stats.finish()
    }

    fn draw_position(&mut self) -> usize {
        let positions = self.pi.len() - 1;
        match &self.cdf {
            None => self.rng.below(positions),
            Some(cdf) => {
                let u = self.rng.next_f64() * cdf[positions - 1];
                cdf.partition_point(|&c| c <= u).min(positions - 1)
            }
        }
    }

    pub fn step(&mut self) {
        self.stats.steps_total += 1;
        if self.pi.len() < 2 {
            return;
        }
        let k = self.draw_position();
        let (a, b) = (self.pi.at(k), self.pi.at(k + 1));
        if self.poset.precedes(a, b) || self.poset.precedes(b, a) {
            return;
        }
        self.stats.proposals += 1;
        let proposed = self.frontiers[k].pushed(self.poset, b);
        let proposed_mean = mean_weight(self.w, &proposed);
        let log_ratio = self.means[k + 1].ln() - proposed_mean.ln();
        let accept = log_ratio >= 0.0 || self.rng.next_f64() < log_ratio.exp().clamp(0.0, 1.0);
        if accept {
            self.stats.accepts += 1;
            self.pi.swap_adjacent(k);
            self.frontiers[k + 1] = proposed;
            self.means[k + 1] = proposed_mean;
        }
    }
}

/// Run the chain for `B + τ(N_MC - 1) + 1` steps, recording the state after
/// step `t` whenever `t > B` and `(t - B - 1) mod τ = 0`.
pub fn mh_sample(
    poset: &Poset,
    w: &Weights,
    cfg: &MhConfig,
    init: Option<Permutation>,
) -> Result<(Vec<Permutation>, ChainStats)> {
    cfg.validate()?;
    let mut chain = MhChain::new(poset, w, &cfg.index_sampler, cfg.seed, init)?;
    let mut samples = Vec::with_capacity(cfg.n_mc);
    for t in 1..=cfg.total_steps() {
        chain.step();
        if t > cfg.burn_in && (t - cfg.burn_in - 1).is_multiple_of(cfg.thinning) {
            samples.push(chain.current().clone());
        }
    }
    Ok((samples, chain.stats()))
}

/// Run `n_chains` independent chains concurrently, chain `c` seeded with
/// `derive_indexed_seed(cfg.seed, "chain", c)`, and concatenate their
/// samples in chain order.
pub fn mh_sample_chains(
    poset: &Poset,
    w: &Weights,
    cfg: &MhConfig,
    n_chains: usize,
) -> Result<(Vec<Permutation>, ChainStats)> {
    let results: Vec<Result<(Vec<Permutation>, ChainStats)>> = thread::scope(|scope| {
        let handles: Vec<_> = (0..n_chains)
            .map(|c| {
                let chain_cfg = MhConfig {
                    seed: derive_indexed_seed(cfg.seed, "chain", c as u64),
                    ..cfg.clone()
                };
                scope.spawn(move || mh_sample(poset, w, &chain_cfg, None))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("chain thread panicked"))
            .collect()
    });
    let mut samples = Vec::with_capacity(cfg.n_mc * n_chains);
    let mut stats = ChainStats::default();
    for r in results {
        let (s, st) = r?;
        samples.extend(s);
        stats = stats.merge(st);
    }
    Ok((samples, stats))
}

/// I.i.d. inverse-CDF draws from an explicit distribution.
pub fn exact_sample(d: &OrderDistribution, n_draws: usize, seed: u64) -> Vec<Permutation> {
    let mut acc = 0.0;
    let cdf: Vec<f64> = d
        .probabilities()
        .iter()
        .map(|p| {
            acc += p;
            acc
        })
        .collect();
    let total = acc;
    let mut rng = SplitMix64::new(seed);
    (0..n_draws)
        .map(|_| {
            let u = rng.next_f64() * total;
            let k = cdf.partition_point(|&c| c <= u).min(cdf.len() - 1);
            d.support()[k].clone()
        })
        .collect()
}

/// Exact draws for an ordered partition: fill the last position first,
/// picking among the unplaced members of the highest unfinished layer with
/// probability proportional to weight.
pub fn backward_sequential_sample(
    partition: &OrderedPartition,
    w: &Weights,
    n_draws: usize,
    seed: u64,
) -> Result<Vec<Permutation>> {
    let n = partition.n();
    w.check_len(n)?;
    let mut rng = SplitMix64::new(seed);
    let mut draws = Vec::with_capacity(n_draws);
    for _ in 0..n_draws {
        let mut order = vec![0usize; n];
        let mut slot = n;
        for layer in partition.layers().iter().rev() {
            let mut pool: Vec<usize> = layer.iter().collect();
            while !pool.is_empty() {
                let total: f64 = pool.iter().map(|&i| w.get(i)).sum();
                let u = rng.next_f64() * total;
                let mut acc = 0.0;
                let mut pick = pool.len() - 1;
                for (idx, &i) in pool.iter().enumerate() {
                    acc += w.get(i);
                    if u < acc {
                        pick = idx;
                        break;
                    }
                }
                slot -= 1;
                order[slot] = pool.remove(pick);
            }
        }
        draws.push(Permutation::new(order).expect("layers partition the players"));
    }
    Ok(draws)
}
