//! Permutation importance on the bundled heart snapshot: train a gradient
//! boosting model, shuffle each feature column on the held-out side, and
//! rank features by the accuracy they cost when destroyed. Shows both the
//! raw accuracy drops and the normalized shares the fusion stage consumes.
//!
//! ```bash
//! cargo run --release --example permutation_importance
//! ```

use afe::data::{heart_snapshot, stratified_split};
use afe::importance::permutation_importance;
use afe::models::{train, ClassifierSpec, Kind};

fn main() {
    let data = heart_snapshot().data().expect("bundled snapshot loads");
    let split = stratified_split(&data, 0.7, 0).expect("split");
    let model = train(&ClassifierSpec::with_defaults(Kind::Gb, 0), &split.train)
        .expect("training succeeds");

    let repeats = 10;
    let v = permutation_importance(&model, &split.test, repeats, 0).expect("importance");

    // Rank by normalized share; raw drops can be negative when a shuffle
    // accidentally helps, and those clip to zero before normalization.
    let order = v.ranking();
    println!(
        "accuracy cost of shuffling each feature ({} test rows, {repeats} repeats):\n",
        split.test.n_rows()
    );
    println!("{:<16} {:>10} {:>10}", "feature", "raw drop", "share");
    for j in order {
        println!(
            "{:<16} {:>10.4} {:>10.4}",
            v.feature_names[j], v.raw_scores[j], v.scores[j]
        );
    }
    println!(
        "\nshares are clipped-at-zero drops normalized to sum 1 \
         (sum = {:.6})",
        v.scores.iter().sum::<f64>()
    );
}
