use std::fmt;

use crate::error::{Error, Result};

/// A subset of players stored as a little-endian bitset.
///
/// Trailing zero words are always trimmed, so two sets with the same members
/// compare (and hash) equal regardless of how they were built.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PlayerSet {
    words: Vec<u64>,
}

impl PlayerSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn full(n: usize) -> Self {
        let mut words = vec![u64::MAX; n / 64];
        if !n.is_multiple_of(64) {
            words.push((1u64 << (n % 64)) - 1);
        }
        Self { words }
    }

    pub fn singleton(i: usize) -> Self {
        let mut s = Self::new();
        s.insert(i);
        s
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Self {
        let mut s = Self::new();
        for i in indices {
            s.insert(i);
        }
        s
    }

    pub fn from_mask(mask: u64) -> Self {
        let mut s = Self { words: vec![mask] };
        s.trim();
        s
    }

    fn trim(&mut self) {
        while self.words.last() == Some(&0) {
            self.words.pop();
        }
    }

    pub fn insert(&mut self, i: usize) {
        let w = i / 64;
        if w >= self.words.len() {
            self.words.resize(w + 1, 0);
        }
        self.words[w] |= 1u64 << (i % 64);
    }

    pub fn remove(&mut self, i: usize) {
        let w = i / 64;
        if w < self.words.len() {
            self.words[w] &= !(1u64 << (i % 64));
            self.trim();
        }
    }

    pub fn contains(&self, i: usize) -> bool {
        self.words
            .get(i / 64)
            .is_some_and(|w| w & (1u64 << (i % 64)) != 0)
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// Members in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut bits = w;
            std::iter::from_fn(move || {
                if bits == 0 {
                    return None;
                }
                let b = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(wi * 64 + b)
            })
        })
    }

    pub fn max_index(&self) -> Option<usize> {
        self.words
            .last()
            .map(|&w| (self.words.len() - 1) * 64 + 63 - w.leading_zeros() as usize)
    }

    pub fn is_subset(&self, other: &PlayerSet) -> bool {
        self.words.len() <= other.words.len()
            && self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn intersects(&self, other: &PlayerSet) -> bool {
        self.words.iter().zip(&other.words).any(|(a, b)| a & b != 0)
    }

    pub fn union_with(&mut self, other: &PlayerSet) {
        if other.words.len() > self.words.len() {
            self.words.resize(other.words.len(), 0);
        }
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn intersect_with(&mut self, other: &PlayerSet) {
        self.words.truncate(other.words.len());
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
        self.trim();
    }

    pub fn difference_with(&mut self, other: &PlayerSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
        self.trim();
    }

    pub fn union(&self, other: &PlayerSet) -> PlayerSet {
        let mut s = self.clone();
        s.union_with(other);
        s
    }

    pub fn intersection(&self, other: &PlayerSet) -> PlayerSet {
        let mut s = self.clone();
        s.intersect_with(other);
        s
    }

    pub fn difference(&self, other: &PlayerSet) -> PlayerSet {
        let mut s = self.clone();
        s.difference_with(other);
        s
    }

    /// Fails unless every member is below `n`.
    pub fn check_within(&self, n: usize) -> Result<()> {
        match self.max_index() {
            Some(m) if m >= n => Err(Error::IndexOutOfRange { index: m, n }),
            _ => Ok(()),
        }
    }

    /// Canonical text key: lowercase hex bitmask when `n <= 64`, otherwise the
    /// sorted member list joined by `,` (empty string for the empty set).
    pub fn encode(&self, n: usize) -> String {
        if n <= 64 {
            format!("{:x}", self.words.first().copied().unwrap_or(0))
        } else {
            self.iter()
                .map(|i| i.to_string())
                .collect::<Vec<_>>()
                .join(",")
        }
    }

    /// Inverse of [`PlayerSet::encode`].
    pub fn decode(key: &str, n: usize) -> Result<PlayerSet> {
        let key = key.trim();
        let set = if n <= 64 {
            let digits = key.strip_prefix("0x").unwrap_or(key);
            let mask = u64::from_str_radix(digits, 16)
                .map_err(|e| Error::Parse(format!("subset key {key:?}: {e}")))?;
            PlayerSet::from_mask(mask)
        } else if key.is_empty() {
            PlayerSet::new()
        } else {
            let mut s = PlayerSet::new();
            for part in key.split(',') {
                let i: usize = part
                    .trim()
                    .parse()
                    .map_err(|e| Error::Parse(format!("subset key {key:?}: {e}")))?;
                s.insert(i);
            }
            s
        };
        set.check_within(n)?;
        Ok(set)
    }
}

impl fmt::Debug for PlayerSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl FromIterator<usize> for PlayerSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        PlayerSet::from_indices(iter)
    }
}
