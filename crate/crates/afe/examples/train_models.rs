//! Train all six classifier families on the bundled heart snapshot with one
//! shared pipeline — stratified split, train-statistics standardization —
//! and score them on the held-out side. Shows the common train/predict
//! contract and the metrics module.
//!
//! ```bash
//! cargo run --release --example train_models
//! ```

use afe::data::{apply_standardize, fit_standardize, heart_snapshot, stratified_split};
use afe::metrics::evaluate;
use afe::models::{train, ClassifierSpec, Kind};

fn main() {
    let data = heart_snapshot().data().expect("bundled snapshot loads");
    let split = stratified_split(&data, 0.7, 0).expect("split");
    let scaler = fit_standardize(&split.train);
    let train_side = apply_standardize(&split.train, &scaler).expect("standardize train");
    let test_side = apply_standardize(&split.test, &scaler).expect("standardize test");

    println!(
        "heart snapshot: {} train / {} test rows, {} features\n",
        train_side.n_rows(),
        test_side.n_rows(),
        train_side.n_features()
    );
    println!(
        "{:<22} {:>9} {:>10} {:>7} {:>7}",
        "model", "accuracy", "precision", "recall", "f1"
    );
    for kind in [Kind::Lr, Kind::Dt, Kind::Gnb, Kind::Rf, Kind::Mlp, Kind::Gb] {
        let spec = ClassifierSpec::with_defaults(kind, 0);
        let model = train(&spec, &train_side).expect("training succeeds");
        let predictions = model.predict(test_side.features()).expect("prediction");
        let m = evaluate(test_side.labels(), &predictions, test_side.n_classes())
            .expect("metrics");
        println!(
            "{:<22} {:>9.4} {:>10.4} {:>7.4} {:>7.4}",
            kind.label(),
            m.accuracy,
            m.precision,
            m.recall,
            m.f1
        );
    }
}
