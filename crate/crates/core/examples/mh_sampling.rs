use std::collections::BTreeMap;

use pasv::{exact_pasv_distribution, mh_sample, MhConfig, Poset, Weights};

pub fn run_example() -> pasv::Result<()> {
    let poset = Poset::new(5, &[(0, 2), (1, 2), (1, 3)])?;
    let w = Weights::new(vec![0.5, 1.0, 2.0, 1.0, 4.0])?;
    let exact = exact_pasv_distribution(&poset, &w, 10_000)?;

    let cfg = MhConfig::new(100_000, 2_000, 1, 11);
    let (samples, stats) = mh_sample(&poset, &w, &cfg, None)?;

    let mut freq: BTreeMap<Vec<usize>, f64> = BTreeMap::new();
    for s in &samples {
        *freq.entry(s.order().to_vec()).or_default() += 1.0 / samples.len() as f64;
    }
    let tv: f64 = exact
        .iter()
        .map(|(pi, p)| (freq.get(pi.order()).copied().unwrap_or(0.0) - p).abs())
        .sum::<f64>()
        / 2.0;

    println!("{} extensions, {} samples", exact.len(), samples.len());
    println!(
        "proposals {} accepted {} (rate {:.3})",
        stats.proposals, stats.accepts, stats.acceptance_rate
    );
    println!("total variation to exact: {tv:.4}");
    Ok(())
}

fn main() {
    run_example().expect("mh sampling example");
}
