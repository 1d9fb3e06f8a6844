//! Export a loaded dataset to an encoded CSV and load it back: binary
//! columns become 0/1, labels become dense class ids, and the round trip
//! reproduces the in-memory matrix exactly (verified here via the dataset
//! digest the provenance block uses).
//!
//! ```bash
//! cargo run --example export_roundtrip
//! ```

use afe::data::{export_csv, load_csv, lung_snapshot, Schema};

fn main() {
    let original = lung_snapshot().data().expect("bundled snapshot loads");
    println!(
        "loaded lung snapshot: {} rows x {} features, digest {}",
        original.n_rows(),
        original.n_features(),
        &original.digest()[..16]
    );

    let dir = std::env::temp_dir();
    let csv_path = dir.join("afe_export_example.csv");
    export_csv(&original, &csv_path, None).expect("export writes");

    // Everything in the export is numeric, so the reload schema marks every
    // feature column numeric and keeps the label column name.
    let schema = Schema::all_numeric(original.feature_names(), original.label_name());
    let reloaded = load_csv(&csv_path, &schema).expect("export loads back");

    println!(
        "reloaded from {}: digest {}",
        csv_path.display(),
        &reloaded.digest()[..16]
    );
    assert_eq!(original.digest(), reloaded.digest(), "round trip is exact");
    println!("round trip is exact: digests match");

    // A truncated export keeps only the first rows (0 = header only).
    let head_path = dir.join("afe_export_example_head.csv");
    export_csv(&original, &head_path, Some(5)).expect("export writes");
    let lines = std::fs::read_to_string(&head_path).unwrap().lines().count();
    println!("limit 5 export has {lines} lines (header + 5 rows)");
}
