//! Hard priorities: a strict partial order on players `0..n`.
//!
//! The order is stored as its transitive closure, one successor bitset and
//! one predecessor bitset per player, so precedence, feasibility and
//! maximality queries are word-parallel set operations.

mod partition;
mod permutation;
mod set;

use std::cmp::Reverse;
use std::collections::BinaryHeap;

pub use partition::{limit_poset_refine, OrderedPartition};
pub use permutation::Permutation;
pub use set::PlayerSet;

use crate::error::{Error, Result};

/// Default bound on the number of linear extensions materialized by
/// enumeration-based (exact) routines.
pub const DEFAULT_EXTENSION_CAP: usize = 10_000_000;

#[derive(Clone, PartialEq, Eq)]
pub struct Poset {
    n: usize,
    /// `succ[i]` = `{ j : i ≺ j }`
    succ: Vec<PlayerSet>,
    /// `pred[j]` = `{ i : i ≺ j }`
    pred: Vec<PlayerSet>,
}

impl std::fmt::Debug for Poset {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Poset")
            .field("n", &self.n)
            .field("strict_pairs", &self.strict_pairs())
            .finish()
    }
}

impl Poset {
    /// Build the poset generated by `edges`, where `(a, b)` means `a ≺ b`.
    /// Duplicate edges are harmless; self-loops count as cycles.
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptySet);
        }
        let mut direct = vec![PlayerSet::new(); n];
        for &(a, b) in edges {
            for idx in [a, b] {
                if idx >= n {
                    return Err(Error::IndexOutOfRange { index: idx, n });
                }
            }
            if a == b {
                return Err(Error::CycleDetected(a));
            }
            direct[a].insert(b);
        }

        let mut indegree = vec![0usize; n];
        for row in &direct {
            for j in row.iter() {
                indegree[j] += 1;
            }
        }
        let mut ready: Vec<usize> = (0..n).filter(|&i| indegree[i] == 0).collect();
        let mut topo = Vec::with_capacity(n);
        while let Some(i) = ready.pop() {
            topo.push(i);
            for j in direct[i].iter() {
                indegree[j] -= 1;
                if indegree[j] == 0 {
                    ready.push(j);
                }
            }
        }
        if topo.len() < n {
            let stuck = (0..n).find(|&i| indegree[i] > 0).unwrap_or(0);
            return Err(Error::CycleDetected(stuck));
        }

        let mut succ = vec![PlayerSet::new(); n];
        for &i in topo.iter().rev() {
            let mut row = direct[i].clone();
            for j in direct[i].iter() {
                row.union_with(&succ[j]);
            }
            succ[i] = row;
        }
        Ok(Self::from_closure(n, succ))
    }

    fn from_closure(n: usize, succ: Vec<PlayerSet>) -> Self {
        let mut pred = vec![PlayerSet::new(); n];
        for (i, row) in succ.iter().enumerate() {
            for j in row.iter() {
                pred[j].insert(i);
            }
        }
        Self { n, succ, pred }
    }

    pub fn antichain(n: usize) -> Self {
        Self::new(n, &[]).expect("n must be positive")
    }

    /// The total order `0 ≺ 1 ≺ ... ≺ n-1`.
    pub fn chain(n: usize) -> Self {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Self::new(n, &edges).expect("n must be positive")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `i ≺ j`
    pub fn precedes(&self, i: usize, j: usize) -> bool {
        self.succ[i].contains(j)
    }

    pub fn successors(&self, i: usize) -> &PlayerSet {
        &self.succ[i]
    }

    pub fn predecessors(&self, j: usize) -> &PlayerSet {
        &self.pred[j]
    }

    /// All strict pairs `(i, j)` with `i ≺ j`, sorted.
    pub fn strict_pairs(&self) -> Vec<(usize, usize)> {
        self.succ
            .iter()
            .enumerate()
            .flat_map(|(i, row)| row.iter().map(move |j| (i, j)))
            .collect()
    }

    /// Add edges on top of the current relation and re-close.
    pub fn with_edges(&self, extra: &[(usize, usize)]) -> Result<Poset> {
        let mut edges = self.strict_pairs();
        edges.extend_from_slice(extra);
        Poset::new(self.n, &edges)
    }

    pub fn incomparable(&self, i: usize, j: usize) -> Result<bool> {
        for idx in [i, j] {
            if idx >= self.n {
                return Err(Error::IndexOutOfRange { index: idx, n: self.n });
            }
        }
        if i == j {
            return Err(Error::SamePlayer(i));
        }
        Ok(!self.precedes(i, j) && !self.precedes(j, i))
    }

    /// Downward closed: every predecessor of a member is a member.
    pub fn is_feasible(&self, s: &PlayerSet) -> bool {
        s.max_index().is_none_or(|m| m < self.n) && s.iter().all(|i| self.pred[i].is_subset(s))
    }

    /// `{ i ∈ S : no j ∈ S with i ≺ j }`
    pub fn maximal_elements(&self, s: &PlayerSet) -> Result<PlayerSet> {
        if s.is_empty() {
            return Err(Error::EmptySet);
        }
        s.check_within(self.n)?;
        Ok(s.iter().filter(|&i| !self.succ[i].intersects(s)).collect())
    }

    pub fn is_linear_extension(&self, pi: &Permutation) -> bool {
        if pi.len() != self.n {
            return false;
        }
        let mut placed = PlayerSet::new();
        for &x in pi.order() {
            if !self.pred[x].is_subset(&placed) {
                return false;
            }
            placed.insert(x);
        }
        true
    }

    /// Kahn's topological sort, always taking the lowest-index ready player.
    pub fn initial_linear_extension(&self) -> Permutation {
        let mut missing: Vec<usize> = self.pred.iter().map(PlayerSet::len).collect();
        let mut ready: BinaryHeap<Reverse<usize>> = (0..self.n)
            .filter(|&i| missing[i] == 0)
            .map(Reverse)
            .collect();
        let mut order = Vec::with_capacity(self.n);
        while let Some(Reverse(i)) = ready.pop() {
            order.push(i);
            for j in self.succ[i].iter() {
                missing[j] -= 1;
                if missing[j] == 0 {
                    ready.push(Reverse(j));
                }
            }
        }
        Permutation::new(order).expect("closure of an acyclic relation")
    }

    /// All linear extensions in lexicographic order of their order arrays.
    pub fn enumerate_linear_extensions(&self, cap: usize) -> Result<Vec<Permutation>> {
        let mut out = Vec::new();
        self.walk_extensions(cap, &mut |order| {
            out.push(Permutation::new(order.to_vec()).expect("walk yields bijections"));
        })?;
        Ok(out)
    }

    /// `|Π^⪯|`, failing once the count exceeds `cap`.
    pub fn count_linear_extensions(&self, cap: usize) -> Result<usize> {
        self.walk_extensions(cap, &mut |_| {})
    }

    /// `Π_d |L_d|!` over the depth layers `L_d`: every layer-by-layer order
    /// is an extension. Saturates at `usize::MAX`.
    fn extension_lower_bound(&self) -> usize {
        let mut sizes = vec![0usize; self.n];
        for d in self.depths() {
            sizes[d] += 1;
        }
        let mut bound = 1usize;
        for s in sizes {
            for k in 2..=s {
                bound = bound.saturating_mul(k);
            }
        }
        bound
    }

    fn walk_extensions(&self, cap: usize, visit: &mut dyn FnMut(&[usize])) -> Result<usize> {
        if self.extension_lower_bound() > cap {
            return Err(Error::ExtensionCountExceedsCap { cap });
        }
        struct Walk<'a> {
            poset: &'a Poset,
            missing: Vec<usize>,
            placed: Vec<bool>,
            order: Vec<usize>,
            count: usize,
            cap: usize,
        }

        impl Walk<'_> {
            fn descend(&mut self, visit: &mut dyn FnMut(&[usize])) -> Result<()> {
                let n = self.poset.n;
                if self.order.len() == n {
                    self.count += 1;
                    if self.count > self.cap {
                        return Err(Error::ExtensionCountExceedsCap { cap: self.cap });
                    }
                    visit(&self.order);
                    return Ok(());
                }
                for x in 0..n {
                    if self.placed[x] || self.missing[x] != 0 {
                        continue;
                    }
                    self.placed[x] = true;
                    self.order.push(x);
                    for j in self.poset.succ[x].iter() {
                        self.missing[j] -= 1;
                    }
                    let res = self.descend(visit);
                    for j in self.poset.succ[x].iter() {
                        self.missing[j] += 1;
                    }
                    self.order.pop();
                    self.placed[x] = false;
                    res?;
                }
                Ok(())
            }
        }

        let mut walk = Walk {
            poset: self,
            missing: self.pred.iter().map(PlayerSet::len).collect(),
            placed: vec![false; self.n],
            order: Vec::with_capacity(self.n),
            count: 0,
            cap,
        };
        walk.descend(visit)?;
        Ok(walk.count)
    }

    /// Longest-path depth of every player (sources have depth 0).
    pub fn depths(&self) -> Vec<usize> {
        let topo = self.initial_linear_extension();
        let mut depth = vec![0usize; self.n];
        for &x in topo.order() {
            depth[x] = self.pred[x].iter().map(|p| depth[p] + 1).max().unwrap_or(0);
        }
        depth
    }

    /// The layering `(B_1, ..., B_m)` if the order is exactly "earlier layer
    /// precedes later layer", otherwise `None`.
    pub fn detect_ordered_partition(&self) -> Option<OrderedPartition> {
        let depth = self.depths();
        for i in 0..self.n {
            for j in 0..self.n {
                if i != j && self.precedes(i, j) != (depth[i] < depth[j]) {
                    return None;
                }
            }
        }
        let m = depth.iter().max().map_or(0, |d| d + 1);
        let mut layers = vec![PlayerSet::new(); m];
        for (i, &d) in depth.iter().enumerate() {
            layers[d].insert(i);
        }
        OrderedPartition::new(self.n, layers).ok()
    }

    /// Poset with `j ≺ i` added for every other globally maximal `j`: the
    /// hard-order limit of sending `λ_i → ∞`.
    pub fn limit_maximal(&self, i: usize) -> Result<Poset> {
        if i >= self.n {
            return Err(Error::IndexOutOfRange { index: i, n: self.n });
        }
        let top = self.maximal_elements(&PlayerSet::full(self.n))?;
        if !top.contains(i) {
            return Err(Error::NotGloballyMaximal(i));
        }
        let extra: Vec<_> = top.iter().filter(|&j| j != i).map(|j| (j, i)).collect();
        self.with_edges(&extra)
    }
}
