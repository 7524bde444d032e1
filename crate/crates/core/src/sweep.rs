//! Priority sweeps and extreme-weight references.
//!
//! A sweep recomputes values while the weights of a target player or group
//! move along a grid of multipliers. The limit helpers build the hard-order
//! posets that extreme weights converge to and measure how close the soft
//! distribution gets, in total variation.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::order_model::{exact_pasv_distribution, OrderDistribution, Weights};
use crate::poset::{limit_poset_refine, PlayerSet, Poset};
use crate::rng::derive_indexed_seed;
use crate::sampler::{mh_sample, MhConfig};
use crate::utility::{cached, UtilityFn};
use crate::valuation::{csv_field, exact_value, rov_estimate, Grouping, group_values, ValueReport};

/// How values are computed at each weight setting.
#[derive(Debug, Clone, PartialEq)]
pub enum Estimator {
    /// Enumerate the linear extensions; fails above `cap`.
    Exact { cap: usize },
    /// Metropolis–Hastings samples; the config's own seed is replaced by
    /// the caller-supplied seed.
    Mh(MhConfig),
    /// Exact when the extension count is within `cap`, otherwise MH.
    Auto { cap: usize, mh: MhConfig },
}

impl Estimator {
    pub fn label(&self) -> &'static str {
        match self {
            Estimator::Exact { .. } => "exact",
            Estimator::Mh(_) => "mh",
            Estimator::Auto { .. } => "auto",
        }
    }
}

/// Values of `u` under `(poset, w)` with the given estimator and seed.
pub fn estimate<U: UtilityFn + ?Sized>(
    poset: &Poset,
    w: &Weights,
    u: &U,
    estimator: &Estimator,
    seed: u64,
) -> Result<ValueReport> {
    let mh = |cfg: &MhConfig| -> Result<ValueReport> {
        let cfg = cfg.clone().with_seed(seed);
        let (samples, _) = mh_sample(poset, w, &cfg, None)?;
        rov_estimate(&samples, u)
    };
    match estimator {
        Estimator::Exact { cap } => exact_value(poset, w, u, *cap),
        Estimator::Mh(cfg) => mh(cfg),
        Estimator::Auto { cap, mh: cfg } => match poset.count_linear_extensions(*cap) {
            Ok(_) => exact_value(poset, w, u, *cap),
            Err(Error::ExtensionCountExceedsCap { .. }) => mh(cfg),
            Err(e) => Err(e),
        },
    }
}

/// `{2^k : k = -8..=8}`.
pub fn default_grid() -> Vec<f64> {
    (-8..=8).map(|k| 2f64.powi(k)).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub target: PlayerSet,
    /// Positive, strictly increasing multipliers `b`.
    pub grid: Vec<f64>,
    pub baseline: Weights,
    /// Exponent pattern `c`: at grid point `b`, `λ_i = baseline_i · b^{c_i}`.
    /// `None` means `c_i = 1` on the target and `0` elsewhere.
    pub exponents: Option<Vec<f64>>,
    pub estimator: Estimator,
    pub seed: u64,
}

impl SweepSpec {
    pub fn new(target: PlayerSet, grid: Vec<f64>, baseline: Weights, estimator: Estimator) -> Self {
        Self {
            target,
            grid,
            baseline,
            exponents: None,
            estimator,
            seed: 0,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidSweep(m));
        if self.target.is_empty() {
            return bad("target is empty".into());
        }
        self.target.check_within(n)?;
        self.baseline.check_len(n)?;
        if self.grid.is_empty() {
            return bad("grid is empty".into());
        }
        if self.grid.iter().any(|&b| !(b > 0.0 && b.is_finite())) {
            return bad("grid values must be positive and finite".into());
        }
        if self.grid.windows(2).any(|p| p[0] >= p[1]) {
            return bad("grid must be strictly increasing".into());
        }
        if let Some(c) = &self.exponents {
            if c.len() != n || c.iter().any(|x| !x.is_finite()) {
                return bad(format!("exponent pattern must have {n} finite entries"));
            }
        }
        Ok(())
    }

    /// Weights at multiplier `b`, rebuilt from the baseline.
    pub fn weights_at(&self, b: f64) -> Result<Weights> {
        let lambda = (0..self.baseline.len())
            .map(|i| {
                let c = match &self.exponents {
                    Some(c) => c[i],
                    None if self.target.contains(i) => 1.0,
                    None => 0.0,
                };
                if c == 0.0 {
                    self.baseline.get(i)
                } else if c == 1.0 {
                    self.baseline.get(i) * b
                } else {
                    self.baseline.get(i) * b.powf(c)
                }
            })
            .collect();
        Weights::new(lambda)
    }

    /// Seed used at grid index `k`.
    pub fn point_seed(&self, k: usize) -> u64 {
        derive_indexed_seed(self.seed, "sweep-point", k as u64)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub b: f64,
    pub report: ValueReport,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepReport {
    pub target: PlayerSet,
    pub estimator: &'static str,
    pub points: Vec<SweepPoint>,
    /// Limit reference values, emitted as `reference=true` rows.
    pub reference: Option<ValueReport>,
}

impl SweepReport {
    /// CSV with columns `grid_b,player_or_group,value,std_error,reference`.
    /// With a grouping, rows hold group sums instead of player values.
    /// Reference rows leave `grid_b` empty.
    pub fn to_csv(&self, labels: &[String], grouping: Option<&Grouping>) -> Result<String> {
        let mut out = String::from("grid_b,player_or_group,value,std_error,reference\n");
        let mut emit = |b: String, r: &ValueReport, reference: bool| -> Result<()> {
            match grouping {
                Some(g) => {
                    for gv in group_values(r, g)? {
                        out.push_str(&format!(
                            "{b},{},{},{},{reference}\n",
                            csv_field(&gv.group),
                            gv.value,
                            gv.std_error
                        ));
                    }
                }
                None => {
                    for i in 0..r.n() {
                        let name = labels.get(i).cloned().unwrap_or_else(|| i.to_string());
                        out.push_str(&format!(
                            "{b},{},{},{},{reference}\n",
                            csv_field(&name),
                            r.values[i],
                            r.std_errors[i]
                        ));
                    }
                }
            }
            Ok(())
        };
        for p in &self.points {
            emit(p.b.to_string(), &p.report, false)?;
        }
        if let Some(r) = &self.reference {
            emit(String::new(), r, true)?;
        }
        Ok(out)
    }
}

/// Values at every grid point, computed in parallel and assembled in grid
/// order. Utility values are shared across points through one cache.
pub fn run_sweep<U: UtilityFn + ?Sized>(poset: &Poset, spec: &SweepSpec, u: &U) -> Result<SweepReport> {
    spec.validate(poset.n())?;
    let u = cached(u);
    let points = spec
        .grid
        .par_iter()
        .enumerate()
        .map(|(k, &b)| {
            let w = spec.weights_at(b)?;
            let report = estimate(poset, &w, &u, &spec.estimator, spec.point_seed(k))?;
            Ok(SweepPoint { b, report })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepReport {
        target: spec.target.clone(),
        estimator: spec.estimator.label(),
        points,
        reference: None,
    })
}

/// Which extreme-weight construction to apply.
#[derive(Debug, Clone, PartialEq)]
pub enum LimitTarget {
    /// A globally maximal player whose weight goes to infinity.
    Maximal(usize),
    /// A subset of one layer of an ordered partition whose common weight
    /// goes to infinity.
    Refine { layer: usize, group: PlayerSet },
}

impl LimitTarget {
    pub fn players(&self) -> PlayerSet {
        match self {
            LimitTarget::Maximal(i) => PlayerSet::singleton(*i),
            LimitTarget::Refine { group, .. } => group.clone(),
        }
    }
}

/// The modified poset for `target`. Always contains every original pair.
pub fn limit_poset(poset: &Poset, target: &LimitTarget) -> Result<Poset> {
    match target {
        LimitTarget::Maximal(i) => poset.limit_maximal(*i),
        LimitTarget::Refine { layer, group } => {
            let partition = poset
                .detect_ordered_partition()
                .ok_or(Error::NotOrderedPartition)?;
            limit_poset_refine(&partition, *layer, group)
        }
    }
}

/// Modified poset plus weights with the target set to 1 (any positive value
/// gives the same distribution).
pub fn limit_setting(poset: &Poset, w: &Weights, target: &LimitTarget) -> Result<(Poset, Weights)> {
    w.check_len(poset.n())?;
    let p = limit_poset(poset, target)?;
    let w = w.with_value(&target.players(), 1.0)?;
    Ok((p, w))
}

/// Values under the limiting poset.
pub fn limit_reference<U: UtilityFn + ?Sized>(
    poset: &Poset,
    w: &Weights,
    target: &LimitTarget,
    u: &U,
    estimator: &Estimator,
    seed: u64,
) -> Result<ValueReport> {
    let (p, w) = limit_setting(poset, w, target)?;
    estimate(&p, &w, u, estimator, seed)
}

/// `½ Σ_π |d1(π) − d2(π)|` over the union of supports.
pub fn tv_distance(d1: &OrderDistribution, d2: &OrderDistribution) -> Result<f64> {
    if d1.n() != d2.n() {
        return Err(Error::DimensionMismatch(format!(
            "distributions over {} and {} players",
            d1.n(),
            d2.n()
        )));
    }
    let mut total = 0.0;
    for (pi, p) in d1.iter() {
        total += (p - d2.prob_of(pi)).abs();
    }
    for (pi, q) in d2.iter() {
        if !d1.contains(pi) {
            total += q;
        }
    }
    Ok((0.5 * total).clamp(0.0, 1.0))
}

/// Weight levels used by the convergence checks.
pub const LIMIT_LEVELS: [f64; 3] = [1e2, 1e4, 1e6];

/// TV distance between the exact distribution with the target's weights set
/// to each level and the exact distribution of the limiting setting.
pub fn limit_tv_profile(
    poset: &Poset,
    w: &Weights,
    target: &LimitTarget,
    levels: &[f64],
    cap: usize,
) -> Result<Vec<f64>> {
    let (p, w_lim) = limit_setting(poset, w, target)?;
    let reference = exact_pasv_distribution(&p, &w_lim, cap)?;
    let players = target.players();
    levels
        .iter()
        .map(|&level| {
            let d = exact_pasv_distribution(poset, &w.with_value(&players, level)?, cap)?;
            tv_distance(&d, &reference)
        })
        .collect()
}

/// Weight given to the target when approximating the infinite limit.
pub const MISMATCH_LEVEL: f64 = 1e8;

/// TV distance between the near-limit distribution (target weight `1e8`)
/// and the distribution on the poset augmented with `candidate_edges`
/// (target weight 1). A clearly positive result shows the edges do not
/// describe the limit.
pub fn limit_mismatch_demo(
    poset: &Poset,
    w: &Weights,
    target: usize,
    candidate_edges: &[(usize, usize)],
    cap: usize,
) -> Result<f64> {
    let t = PlayerSet::singleton(target);
    let near = exact_pasv_distribution(poset, &w.with_value(&t, MISMATCH_LEVEL)?, cap)?;
    let augmented = poset.with_edges(candidate_edges)?;
    let lim = exact_pasv_distribution(&augmented, &w.with_value(&t, 1.0)?, cap)?;
    tv_distance(&near, &lim)
}
