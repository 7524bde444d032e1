// A utility served by a child process: one JSON list of 0-based players per
// line in, one number per line out.

use std::time::Duration;

use pasv::utility::external_utility;
use pasv::{exact_value, Poset, Weights};

pub fn run_example() -> pasv::Result<()> {
    let script = r#"while read -r l; do case "$l" in *'[]'*) echo 0 ;; *) c=$(printf '%s' "$l" | tr -cd , | wc -c); echo $((c + 1)) ;; esac; done"#;
    let command = vec!["sh".to_string(), "-c".to_string(), script.to_string()];
    let u = external_utility(&command, Duration::from_secs(10))?;

    let poset = Poset::chain(3);
    let report = exact_value(&poset, &Weights::uniform(3), &u, 100)?;
    println!("coalition size game on a chain: {:?}", report.values);
    Ok(())
}

fn main() {
    run_example().expect("external utility example");
}
