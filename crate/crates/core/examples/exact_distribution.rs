// Exact arrival-order distribution on a four-player DAG.
//
// Players 1 and 3 must both arrive before 2, and 3 before 4. Doubling the
// weight of player 4 pushes it towards the end of the order.

use pasv::{exact_pasv_distribution, psv_distribution, Poset, Weights};

pub fn run_example() -> pasv::Result<()> {
    let poset = Poset::new(4, &[(0, 1), (2, 1), (2, 3)])?;
    let w = Weights::new(vec![1.0, 1.0, 1.0, 2.0])?;

    let uniform = psv_distribution(&poset, 100)?;
    let weighted = exact_pasv_distribution(&poset, &w, 100)?;

    println!("{} linear extensions", weighted.len());
    println!("{:<12} {:>9} {:>9}", "order", "uniform", "weighted");
    for (pi, p) in weighted.iter() {
        let order: Vec<String> = pi.order().iter().map(|i| (i + 1).to_string()).collect();
        println!("{:<12} {:>9.4} {:>9.4}", order.join(" "), uniform.prob_of(pi), p);
    }
    Ok(())
}

fn main() {
    run_example().expect("exact distribution example");
}
