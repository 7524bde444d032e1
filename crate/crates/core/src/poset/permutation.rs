use std::fmt;

use crate::error::{Error, Result};

/// An ordering of all players together with its inverse.
///
/// `order[t]` is the player arriving at (0-based) position `t` and
/// `position[i]` is where player `i` arrives, so `position[i]` is also the
/// size of the predecessor set of `i`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    order: Vec<usize>,
    position: Vec<usize>,
}

impl Permutation {
    pub fn new(order: Vec<usize>) -> Result<Self> {
        let n = order.len();
        let mut position = vec![usize::MAX; n];
        for (t, &p) in order.iter().enumerate() {
            if p >= n {
                return Err(Error::InvalidPermutation(format!(
                    "entry {p} out of range for length {n}"
                )));
            }
            if position[p] != usize::MAX {
                return Err(Error::InvalidPermutation(format!("entry {p} repeated")));
            }
            position[p] = t;
        }
        Ok(Self { order, position })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            order: (0..n).collect(),
            position: (0..n).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn position(&self, player: usize) -> usize {
        self.position[player]
    }

    pub fn at(&self, t: usize) -> usize {
        self.order[t]
    }

    /// Swap the players at positions `k` and `k + 1`.
    pub fn swap_adjacent(&mut self, k: usize) {
        self.order.swap(k, k + 1);
        self.position[self.order[k]] = k;
        self.position[self.order[k + 1]] = k + 1;
    }

    pub fn swapped(&self, k: usize) -> Self {
        let mut p = self.clone();
        p.swap_adjacent(k);
        p
    }

    pub fn into_order(self) -> Vec<usize> {
        self.order
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.order)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_bijections() {
        assert!(Permutation::new(vec![0, 0]).is_err());
        assert!(Permutation::new(vec![0, 2]).is_err());
        assert!(Permutation::new(vec![]).unwrap().is_empty());
    }

    #[test]
    fn swap_keeps_inverse_in_sync() {
        let mut p = Permutation::new(vec![2, 0, 3, 1]).unwrap();
        p.swap_adjacent(1);
        assert_eq!(p.order(), &[2, 3, 0, 1]);
        for t in 0..4 {
            assert_eq!(p.position(p.at(t)), t);
        }
    }
}
