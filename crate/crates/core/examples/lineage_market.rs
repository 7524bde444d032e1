// Data reuse market: two originals, two exact copies and two noisy copies.
// Precedence puts each source before its copies.

use std::collections::BTreeMap;

use pasv::utility::lineage_utility;
use pasv::{exact_value, PlayerSet, Poset, Weights};

pub fn run_example() -> pasv::Result<()> {
    let sources = PlayerSet::from_indices([0, 1]);
    let copies = BTreeMap::from([(2, 0), (3, 1), (4, 0), (5, 1)]);
    let gains = BTreeMap::from([(0, 1.0), (1, 2.0)]);
    let penalty = BTreeMap::from([(4, 0.3), (5, 0.5)]);
    let u = lineage_utility(6, &sources, &copies, &gains, &penalty)?;

    let edges: Vec<(usize, usize)> = copies.iter().map(|(&c, &s)| (s, c)).collect();
    let aware = exact_value(&Poset::new(6, &edges)?, &Weights::uniform(6), &u, 100_000)?;
    let classical = exact_value(&Poset::antichain(6), &Weights::uniform(6), &u, 100_000)?;

    let names = ["src A", "src B", "copy A", "copy B", "noisy A", "noisy B"];
    println!("{:<8} {:>10} {:>10}", "player", "lineage", "classical");
    for (i, name) in names.iter().enumerate() {
        println!("{name:<8} {:>10.3} {:>10.3}", aware.values[i], classical.values[i]);
    }
    Ok(())
}

fn main() {
    run_example().expect("lineage market example");
}
