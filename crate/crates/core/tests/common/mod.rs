//! Brute-force oracles and random instances shared by the integration tests.
//! The oracles work from raw edge lists and full permutation enumeration and
//! never call into the library's order machinery.
#![allow(dead_code)]

use std::collections::HashMap;

use pasv::rng::SplitMix64;
use pasv::{OrderedPartition, PlayerSet, Poset, Weights};

/// Instance with its raw edge list kept for the oracles.
#[derive(Debug, Clone)]
pub struct Instance {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
    pub poset: Poset,
}

/// Random DAG: a hidden shuffled order, each forward pair an edge with
/// probability `density`.
pub fn random_instance(rng: &mut SplitMix64, n: usize, density: f64) -> Instance {
    let mut hidden: Vec<usize> = (0..n).collect();
    rng.shuffle(&mut hidden);
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if rng.next_f64() < density {
                edges.push((hidden[a], hidden[b]));
            }
        }
    }
    let poset = Poset::new(n, &edges).expect("forward edges are acyclic");
    Instance { n, edges, poset }
}

pub fn random_partition(rng: &mut SplitMix64, n: usize) -> OrderedPartition {
    let mut players: Vec<usize> = (0..n).collect();
    rng.shuffle(&mut players);
    let mut layers: Vec<Vec<usize>> = vec![vec![players[0]]];
    for &p in &players[1..] {
        if rng.next_f64() < 0.4 {
            layers.push(vec![p]);
        } else {
            let k = rng.below(layers.len());
            layers[k].push(p);
        }
    }
    OrderedPartition::from_layers(n, layers).expect("layers cover the players")
}

/// Log-uniform weights in `[2^-8, 2^8]`.
pub fn random_weights(rng: &mut SplitMix64, n: usize) -> Weights {
    random_weights_in(rng, n, 8.0)
}

/// Log-uniform weights in `[2^-e, 2^e]`.
pub fn random_weights_in(rng: &mut SplitMix64, n: usize, e: f64) -> Weights {
    Weights::new((0..n).map(|_| 2f64.powf(e * (2.0 * rng.next_f64() - 1.0))).collect()).unwrap()
}

pub fn all_permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                go(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// `reach[i][j]` iff there is a directed path `i -> j` (Floyd–Warshall).
pub fn reachability(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<bool>> {
    let mut r = vec![vec![false; n]; n];
    for &(a, b) in edges {
        r[a][b] = true;
    }
    for k in 0..n {
        for i in 0..n {
            if r[i][k] {
                for j in 0..n {
                    if r[k][j] {
                        r[i][j] = true;
                    }
                }
            }
        }
    }
    r
}

pub fn respects(reach: &[Vec<bool>], order: &[usize]) -> bool {
    let n = order.len();
    (0..n).all(|a| (a + 1..n).all(|b| !reach[order[b]][order[a]]))
}

/// Members of `set` with no successor inside `set`.
pub fn maximal(reach: &[Vec<bool>], set: &[usize]) -> Vec<usize> {
    set.iter()
        .copied()
        .filter(|&i| !set.iter().any(|&j| reach[i][j]))
        .collect()
}

/// Unnormalized weight `Π_t λ_{π_t} |M_t| / Σ_{M_t} λ` evaluated directly.
pub fn product_weight(reach: &[Vec<bool>], lambda: &[f64], order: &[usize]) -> f64 {
    let mut w = 1.0;
    for t in 0..order.len() {
        let prefix = &order[..=t];
        let m = maximal(reach, prefix);
        let denom: f64 = m.iter().map(|&k| lambda[k]).sum();
        w *= lambda[order[t]] * m.len() as f64 / denom;
    }
    w
}

/// Backward product `Π_t λ_{π_t} / Σ_{M_t} λ`.
pub fn backward_product(reach: &[Vec<bool>], lambda: &[f64], order: &[usize]) -> f64 {
    let mut w = 1.0;
    for t in 0..order.len() {
        let m = maximal(reach, &order[..=t]);
        let denom: f64 = m.iter().map(|&k| lambda[k]).sum();
        w *= lambda[order[t]] / denom;
    }
    w
}

/// Oracle distribution over linear extensions, keyed by order.
pub fn brute_distribution(n: usize, edges: &[(usize, usize)], lambda: &[f64]) -> HashMap<Vec<usize>, f64> {
    let reach = reachability(n, edges);
    let raw: Vec<(Vec<usize>, f64)> = all_permutations(n)
        .into_iter()
        .filter(|o| respects(&reach, o))
        .map(|o| {
            let w = product_weight(&reach, lambda, &o);
            (o, w)
        })
        .collect();
    let z: f64 = raw.iter().map(|(_, w)| w).sum();
    raw.into_iter().map(|(o, w)| (o, w / z)).collect()
}

/// `P(i is the last member of T to arrive)` for every player.
pub fn completion_probabilities(dist: &HashMap<Vec<usize>, f64>, n: usize, t: &[usize]) -> Vec<f64> {
    let mut out = vec![0.0; n];
    if t.is_empty() {
        return out;
    }
    for (order, p) in dist {
        let last = *order.iter().rev().find(|x| t.contains(x)).unwrap();
        out[last] += p;
    }
    out
}

pub fn set_from_mask(mask: u64) -> PlayerSet {
    PlayerSet::from_mask(mask)
}

pub fn members(mask: u64, n: usize) -> Vec<usize> {
    (0..n).filter(|&i| mask >> i & 1 == 1).collect()
}

/// The 4-player example: labels 1..4 with 1→2, 3→2, 3→4 as indices 0..3.
pub fn example_edges() -> Vec<(usize, usize)> {
    vec![(0, 1), (2, 1), (2, 3)]
}

pub fn example() -> Poset {
    Poset::new(4, &example_edges()).unwrap()
}
