// Extreme weights and the hard orders they approach.

use pasv::sweep::{limit_mismatch_demo, limit_tv_profile, LimitTarget, LIMIT_LEVELS};
use pasv::{OrderedPartition, PlayerSet, Poset, Weights};

pub fn run_example() -> pasv::Result<()> {
    let poset = Poset::new(4, &[(0, 1), (2, 1), (2, 3)])?;
    let w = Weights::uniform(4);

    // player 4 is maximal: a huge weight sends it last among the maximal players
    let tv = limit_tv_profile(&poset, &w, &LimitTarget::Maximal(3), &LIMIT_LEVELS, 1000)?;
    for (level, d) in LIMIT_LEVELS.iter().zip(&tv) {
        println!("maximal  lambda {level:>8.0e}  tv {d:.3e}");
    }

    let layers = OrderedPartition::from_layers(5, [vec![0, 1], vec![2, 3, 4]])?;
    let target = LimitTarget::Refine {
        layer: 1,
        group: PlayerSet::from_indices([3, 4]),
    };
    let tv = limit_tv_profile(&layers.to_poset(), &Weights::uniform(5), &target, &LIMIT_LEVELS, 1000)?;
    for (level, d) in LIMIT_LEVELS.iter().zip(&tv) {
        println!("refine   lambda {level:>8.0e}  tv {d:.3e}");
    }

    // player 3 is not globally maximal; the edge 1 -> 3 does not describe its limit
    let gap = limit_mismatch_demo(&poset, &w, 2, &[(0, 2)], 1000)?;
    println!("candidate edge 1->3: tv {gap:.4}");
    Ok(())
}

fn main() {
    run_example().expect("limits example");
}
