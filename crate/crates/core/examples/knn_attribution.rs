// Feature attribution for a logistic model. Missing features are imputed
// from the nearest training rows on the features that are present, and
// a precedence edge says feature 0 is considered before feature 2.

use std::path::PathBuf;
use std::sync::Arc;

use pasv::utility::{knn_imputation_utility, LogisticPredictor, TabularDataset};
use pasv::valuation::exact_value;
use pasv::{Poset, Weights};

pub fn run_example() -> pasv::Result<()> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("examples/data");
    let train = TabularDataset::from_csv(&dir.join("knn_train.csv"), "label")?;
    let eval = TabularDataset::from_csv(&dir.join("knn_eval.csv"), "label")?;
    let model = LogisticPredictor::from_json(&dir.join("knn_model.json"))?;
    let n = train.n_features();

    let u = knn_imputation_utility(train, eval, Arc::new(model), 3, 4, 9)?;
    let poset = Poset::new(n, &[(0, 2)])?;
    let report = exact_value(&poset, &Weights::uniform(n), &u, 1000)?;

    let labels: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
    print!("{}", report.to_csv(&labels));
    println!("sum {:.4} = U(all) - U(none) = {:.4}", report.total(), report.full_value - report.empty_value);
    Ok(())
}

fn main() {
    run_example().expect("knn attribution example");
}
