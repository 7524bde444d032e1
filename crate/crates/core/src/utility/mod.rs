//! Utility functions `U: 2^[n] → ℝ`.
//!
//! Implementations must be deterministic and total on every subset, feasible
//! or not. `U(∅)` need not be zero; the valuation layer subtracts it.

mod external;
mod knn;
mod lineage;

use std::collections::HashMap;
use std::path::Path;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};

pub use external::{external_utility, ExternalUtility};
pub use knn::{knn_imputation_utility, KnnImputationUtility, LogisticPredictor, Predictor, TabularDataset};
pub use lineage::{lineage_utility, LineageUtility};

use crate::error::{Error, Result};
use crate::poset::PlayerSet;

pub trait UtilityFn: Send + Sync {
    fn evaluate(&self, s: &PlayerSet) -> Result<f64>;

    /// Stable identity string, used to label caches and reports.
    fn descriptor(&self) -> String;
}

impl<U: UtilityFn + ?Sized> UtilityFn for &U {
    fn evaluate(&self, s: &PlayerSet) -> Result<f64> {
        (**self).evaluate(s)
    }
    fn descriptor(&self) -> String {
        (**self).descriptor()
    }
}

impl<U: UtilityFn + ?Sized> UtilityFn for Box<U> {
    fn evaluate(&self, s: &PlayerSet) -> Result<f64> {
        (**self).evaluate(s)
    }
    fn descriptor(&self) -> String {
        (**self).descriptor()
    }
}

impl<U: UtilityFn + ?Sized> UtilityFn for Arc<U> {
    fn evaluate(&self, s: &PlayerSet) -> Result<f64> {
        (**self).evaluate(s)
    }
    fn descriptor(&self) -> String {
        (**self).descriptor()
    }
}

/// Lookup table with an optional fallback value.
#[derive(Debug, Clone)]
pub struct TableUtility {
    entries: HashMap<PlayerSet, f64>,
    default: Option<f64>,
    n: usize,
}

pub fn table_utility(
    n: usize,
    entries: HashMap<PlayerSet, f64>,
    default: Option<f64>,
) -> Result<TableUtility> {
    if entries.is_empty() {
        return Err(Error::Parse("utility table has no entries".into()));
    }
    for s in entries.keys() {
        s.check_within(n)?;
    }
    Ok(TableUtility { entries, default, n })
}

impl TableUtility {
    /// Read a CSV with columns `subset` (canonical key) and `value`.
    pub fn from_csv(path: &Path, n: usize, default: Option<f64>) -> Result<TableUtility> {
        #[derive(serde::Deserialize)]
        struct Row {
            subset: String,
            value: f64,
        }
        let mut reader = csv::Reader::from_path(path)
            .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        let mut entries = HashMap::new();
        for row in reader.deserialize::<Row>() {
            let row = row.map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
            entries.insert(PlayerSet::decode(&row.subset, n)?, row.value);
        }
        table_utility(n, entries, default)
    }
}

impl UtilityFn for TableUtility {
    fn evaluate(&self, s: &PlayerSet) -> Result<f64> {
        match self.entries.get(s) {
            Some(&v) => Ok(v),
            None => self
                .default
                .ok_or_else(|| Error::MissingSubset(s.encode(self.n))),
        }
    }

    fn descriptor(&self) -> String {
        format!("table:{}", self.entries.len())
    }
}

/// `u_T(S) = 1{T ⊆ S}`.
#[derive(Debug, Clone)]
pub struct ElementaryGame {
    target: PlayerSet,
}

pub fn elementary_game(target: PlayerSet) -> ElementaryGame {
    ElementaryGame { target }
}

impl UtilityFn for ElementaryGame {
    fn evaluate(&self, s: &PlayerSet) -> Result<f64> {
        Ok(if self.target.is_subset(s) { 1.0 } else { 0.0 })
    }

    fn descriptor(&self) -> String {
        format!("elementary:{:?}", self.target)
    }
}

/// Closure-backed utility.
pub struct FnUtility<F> {
    name: String,
    f: F,
}

pub fn from_fn<F>(name: impl Into<String>, f: F) -> FnUtility<F>
where
    F: Fn(&PlayerSet) -> f64 + Send + Sync,
{
    FnUtility {
        name: name.into(),
        f,
    }
}

impl<F> UtilityFn for FnUtility<F>
where
    F: Fn(&PlayerSet) -> f64 + Send + Sync,
{
    fn evaluate(&self, s: &PlayerSet) -> Result<f64> {
        Ok((self.f)(s))
    }

    fn descriptor(&self) -> String {
        format!("fn:{}", self.name)
    }
}

/// `Σ_k α_k U_k`.
#[derive(Clone)]
pub struct LinearCombination {
    terms: Vec<(f64, Arc<dyn UtilityFn>)>,
}

pub fn linear_combination(terms: Vec<(f64, Arc<dyn UtilityFn>)>) -> LinearCombination {
    LinearCombination { terms }
}

impl UtilityFn for LinearCombination {
    fn evaluate(&self, s: &PlayerSet) -> Result<f64> {
        let mut total = 0.0;
        for (alpha, u) in &self.terms {
            total += alpha * u.evaluate(s)?;
        }
        Ok(total)
    }

    fn descriptor(&self) -> String {
        let parts: Vec<_> = self
            .terms
            .iter()
            .map(|(a, u)| format!("{a}*{}", u.descriptor()))
            .collect();
        format!("sum({})", parts.join("+"))
    }
}

/// Read-through memoization keyed by subset. A value is computed at most
/// once per key even under concurrent callers; failures are not stored.
pub struct Cached<U> {
    inner: U,
    cells: Mutex<HashMap<PlayerSet, Arc<Mutex<Option<f64>>>>>,
    inner_calls: AtomicUsize,
}

pub fn cached<U: UtilityFn>(inner: U) -> Cached<U> {
    Cached {
        inner,
        cells: Mutex::new(HashMap::new()),
        inner_calls: AtomicUsize::new(0),
    }
}

impl<U> Cached<U> {
    pub fn inner_calls(&self) -> usize {
        self.inner_calls.load(Ordering::Relaxed)
    }

    pub fn cached_len(&self) -> usize {
        self.cells
            .lock()
            .expect("cache lock poisoned")
            .values()
            .filter(|c| c.lock().map(|v| v.is_some()).unwrap_or(false))
            .count()
    }
}

impl<U: UtilityFn> UtilityFn for Cached<U> {
    fn evaluate(&self, s: &PlayerSet) -> Result<f64> {
        let cell = {
            let mut cells = self.cells.lock().expect("cache lock poisoned");
            Arc::clone(cells.entry(s.clone()).or_default())
        };
        let mut slot = cell.lock().expect("cache cell poisoned");
        if let Some(v) = *slot {
            return Ok(v);
        }
        self.inner_calls.fetch_add(1, Ordering::Relaxed);
        let v = self.inner.evaluate(s)?;
        *slot = Some(v);
        Ok(v)
    }

    fn descriptor(&self) -> String {
        self.inner.descriptor()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_lookup() {
        let mut entries = HashMap::new();
        entries.insert(PlayerSet::new(), 0.0);
        entries.insert(PlayerSet::singleton(0), 1.0);
        let t = table_utility(2, entries.clone(), None).unwrap();
        assert_eq!(t.evaluate(&PlayerSet::singleton(0)).unwrap(), 1.0);
        assert!(matches!(
            t.evaluate(&PlayerSet::singleton(1)),
            Err(Error::MissingSubset(k)) if k == "2"
        ));
        let t = table_utility(2, entries, Some(-1.0)).unwrap();
        assert_eq!(t.evaluate(&PlayerSet::singleton(1)).unwrap(), -1.0);
        assert!(table_utility(2, HashMap::new(), None).is_err());
    }

    #[test]
    fn full_table_is_total() {
        let entries: HashMap<_, _> = (0u64..8)
            .map(|m| (PlayerSet::from_mask(m), m as f64))
            .collect();
        let t = table_utility(3, entries, None).unwrap();
        for m in 0u64..8 {
            assert_eq!(t.evaluate(&PlayerSet::from_mask(m)).unwrap(), m as f64);
        }
    }

    #[test]
    fn table_from_csv() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("u.csv");
        std::fs::write(&path, "subset,value\n0,0\n1,0.5\n3,2\n").unwrap();
        let t = TableUtility::from_csv(&path, 2, None).unwrap();
        assert_eq!(t.evaluate(&PlayerSet::from_indices([0, 1])).unwrap(), 2.0);
        assert!(t.evaluate(&PlayerSet::singleton(1)).is_err());
    }

    #[test]
    fn elementary_examples() {
        let g = elementary_game(PlayerSet::from_indices([1, 3]));
        assert_eq!(g.evaluate(&PlayerSet::from_indices([1, 3, 4])).unwrap(), 1.0);
        assert_eq!(g.evaluate(&PlayerSet::singleton(1)).unwrap(), 0.0);
        let empty = elementary_game(PlayerSet::new());
        assert_eq!(empty.evaluate(&PlayerSet::new()).unwrap(), 1.0);
    }

    #[test]
    fn cache_counts_inner_calls() {
        let c = cached(elementary_game(PlayerSet::singleton(0)));
        let s = PlayerSet::from_indices([0, 1]);
        assert_eq!(c.evaluate(&s).unwrap(), 1.0);
        assert_eq!(c.evaluate(&s).unwrap(), 1.0);
        assert_eq!(c.inner_calls(), 1);
        assert_eq!(c.evaluate(&PlayerSet::singleton(1)).unwrap(), 0.0);
        assert_eq!(c.inner_calls(), 2);
        assert_eq!(c.cached_len(), 2);
    }

    #[test]
    fn cache_does_not_store_errors() {
        let mut entries = HashMap::new();
        entries.insert(PlayerSet::new(), 0.0);
        let c = cached(table_utility(2, entries, None).unwrap());
        assert!(c.evaluate(&PlayerSet::singleton(0)).is_err());
        assert!(c.evaluate(&PlayerSet::singleton(0)).is_err());
        assert_eq!(c.inner_calls(), 2);
        assert_eq!(c.cached_len(), 0);
    }

    #[test]
    fn cache_computes_once_under_contention() {
        let c = Arc::new(cached(from_fn("slow", |s: &PlayerSet| {
            std::thread::sleep(std::time::Duration::from_millis(5));
            s.len() as f64
        })));
        let s = PlayerSet::from_indices([0, 2]);
        std::thread::scope(|scope| {
            for _ in 0..8 {
                let c = Arc::clone(&c);
                let s = s.clone();
                scope.spawn(move || assert_eq!(c.evaluate(&s).unwrap(), 2.0));
            }
        });
        assert_eq!(c.inner_calls(), 1);
    }

    #[test]
    fn linear_combination_adds() {
        let a: Arc<dyn UtilityFn> = Arc::new(elementary_game(PlayerSet::singleton(0)));
        let b: Arc<dyn UtilityFn> = Arc::new(from_fn("card", |s: &PlayerSet| s.len() as f64));
        let u = linear_combination(vec![(2.0, a), (-0.5, b)]);
        assert_eq!(u.evaluate(&PlayerSet::from_indices([0, 1])).unwrap(), 2.0 - 1.0);
    }
}
