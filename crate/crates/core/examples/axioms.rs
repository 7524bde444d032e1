// Exact values on a small game and checks of efficiency, null player and
// linearity.

use std::sync::Arc;

use pasv::utility::{from_fn, linear_combination};
use pasv::{exact_value, PlayerSet, Poset, UtilityFn, Weights};

pub fn run_example() -> pasv::Result<()> {
    let poset = Poset::new(4, &[(0, 1), (2, 3)])?;
    let w = Weights::new(vec![1.0, 2.0, 0.5, 1.0])?;

    let u: Arc<dyn UtilityFn> = Arc::new(from_fn("size-squared", |s: &PlayerSet| {
        (s.len() * s.len()) as f64
    }));
    // player 3 never changes this one
    let v: Arc<dyn UtilityFn> = Arc::new(from_fn("pairs", |s: &PlayerSet| {
        let mut x = 0.0;
        if s.contains(0) && s.contains(1) {
            x += 3.0;
        }
        if s.contains(2) {
            x += 1.0;
        }
        x
    }));

    let ru = exact_value(&poset, &w, &u, 1000)?;
    let rv = exact_value(&poset, &w, &v, 1000)?;
    let sum = linear_combination(vec![(2.0, Arc::clone(&u)), (-1.0, Arc::clone(&v))]);
    let rs = exact_value(&poset, &w, &sum, 1000)?;

    println!("u values {:?}", ru.values);
    println!("efficiency gap {:.2e}", ru.efficiency_gap());
    println!("null player value under v: {:.2e}", rv.values[3]);
    let lin = (0..4)
        .map(|i| (rs.values[i] - 2.0 * ru.values[i] + rv.values[i]).abs())
        .fold(0.0, f64::max);
    println!("linearity residual {lin:.2e}");
    Ok(())
}

fn main() {
    run_example().expect("axioms example");
}
