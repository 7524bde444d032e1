use std::collections::BTreeMap;

use super::UtilityFn;
use crate::error::{Error, Result};
use crate::poset::PlayerSet;

/// Additive data-reuse market. Originals add their gain. A copy whose source
/// is absent stands in for the source and adds the source's gain; once the
/// source is present the copy adds `-noise_penalty` (zero for clean copies).
#[derive(Debug, Clone)]
pub struct LineageUtility {
    n: usize,
    copy_of: Vec<Option<usize>>,
    gains: Vec<f64>,
    penalty: Vec<f64>,
}

pub fn lineage_utility(
    n: usize,
    sources: &PlayerSet,
    copies: &BTreeMap<usize, usize>,
    gains: &BTreeMap<usize, f64>,
    noise_penalty: &BTreeMap<usize, f64>,
) -> Result<LineageUtility> {
    let bad = |msg: String| Err(Error::BadCopyMap(msg));
    sources.check_within(n)?;
    let mut copy_of = vec![None; n];
    for (&copy, &source) in copies {
        if copy >= n || source >= n {
            return bad(format!("copy {copy} -> {source} out of range"));
        }
        if copy == source {
            return bad(format!("player {copy} copies itself"));
        }
        if !sources.contains(source) {
            return bad(format!("{source} is not a source player"));
        }
        if sources.contains(copy) {
            return bad(format!("source player {copy} cannot also be a copy"));
        }
        copy_of[copy] = Some(source);
    }
    let mut g = vec![0.0; n];
    for (&i, &v) in gains {
        if i >= n {
            return bad(format!("gain for unknown player {i}"));
        }
        if !(v > 0.0 && v.is_finite()) {
            return bad(format!("gain of player {i} must be positive, got {v}"));
        }
        g[i] = v;
    }
    for s in sources.iter() {
        if !gains.contains_key(&s) {
            return bad(format!("source {s} has no gain"));
        }
    }
    let mut penalty = vec![0.0; n];
    for (&i, &v) in noise_penalty {
        if i >= n || copy_of[i].is_none() {
            return bad(format!("noise penalty given for non-copy {i}"));
        }
        if !(v >= 0.0 && v.is_finite()) {
            return bad(format!("noise penalty of {i} must be nonnegative, got {v}"));
        }
        penalty[i] = v;
    }
    Ok(LineageUtility {
        n,
        copy_of,
        gains: g,
        penalty,
    })
}

impl LineageUtility {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn source_of(&self, i: usize) -> Option<usize> {
        self.copy_of[i]
    }
}

impl UtilityFn for LineageUtility {
    fn evaluate(&self, s: &PlayerSet) -> Result<f64> {
        s.check_within(self.n)?;
        let mut total = 0.0;
        for i in s.iter() {
            total += match self.copy_of[i] {
                None => self.gains[i],
                Some(src) if s.contains(src) => -self.penalty[i],
                Some(src) => self.gains[src],
            };
        }
        Ok(total)
    }

    fn descriptor(&self) -> String {
        format!("lineage:{}", self.n)
    }
}
