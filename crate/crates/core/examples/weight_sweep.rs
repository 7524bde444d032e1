use pasv::sweep::{default_grid, run_sweep, Estimator, SweepSpec};
use pasv::utility::from_fn;
use pasv::{PlayerSet, Poset, Weights};

pub fn run_example() -> pasv::Result<()> {
    let poset = Poset::new(4, &[(0, 1)])?;
    let u = from_fn("threshold", |s: &PlayerSet| if s.len() >= 2 { 1.0 } else { 0.0 });
    let spec = SweepSpec::new(
        PlayerSet::singleton(3),
        default_grid(),
        Weights::uniform(4),
        Estimator::Exact { cap: 1000 },
    )
    .with_seed(5);
    let report = run_sweep(&poset, &spec, &u)?;
    let labels: Vec<String> = ["a", "b", "c", "d"].iter().map(|s| s.to_string()).collect();
    print!("{}", report.to_csv(&labels, None)?);
    Ok(())
}

fn main() {
    run_example().expect("weight sweep example");
}
