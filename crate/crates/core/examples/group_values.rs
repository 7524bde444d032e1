use std::collections::BTreeMap;

use pasv::utility::from_fn;
use pasv::valuation::{group_values, group_values_csv, marginal_by_position, Grouping};
use pasv::{mh_sample, rov_estimate, MhConfig, PlayerSet, Poset, Weights};

pub fn run_example() -> pasv::Result<()> {
    let n = 6;
    let poset = Poset::new(n, &[(0, 3), (1, 4), (2, 5)])?;
    let w = Weights::from_base_exponents(2.0, &[0.0, 0.0, 0.0, 1.0, 1.0, 1.0])?;
    let u = from_fn("diminishing", |s: &PlayerSet| (s.len() as f64).sqrt());

    let (samples, _) = mh_sample(&poset, &w, &MhConfig::new(20_000, 1_000, 2, 3), None)?;
    let report = rov_estimate(&samples, &u)?;

    let assignment: BTreeMap<usize, String> = (0..n)
        .map(|i| (i, if i < 3 { "upstream" } else { "downstream" }.to_string()))
        .collect();
    let grouping = Grouping::new(n, &assignment)?;
    print!("{}", group_values_csv(&group_values(&report, &grouping)?, report.n_samples));
    print!("{}", marginal_by_position(&samples, &u, &grouping)?.to_csv());
    Ok(())
}

fn main() {
    run_example().expect("group values example");
}
