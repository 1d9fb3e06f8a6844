//! Rewrite the bundled dataset files under `data/` from their seeded
//! generators.
//!
//! The checked-in CSV and schema files are frozen copies of what the
//! generators in `afe::data` emit; a library test compares them byte for
//! byte, so any drift (edited files, changed generator parameters) fails the
//! suite until this example is re-run:
//!
//! ```bash
//! cargo run --example regenerate_snapshots
//! ```

use afe::data::{covid_snapshot, heart_snapshot, lung_snapshot, Snapshot};
use std::path::PathBuf;

fn main() {
    let data_dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data");
    std::fs::create_dir_all(&data_dir).expect("data directory is writable");

    for snapshot in [lung_snapshot(), heart_snapshot(), covid_snapshot()] {
        let Snapshot { name, csv, .. } = &snapshot;
        let csv_path = data_dir.join(format!("{name}.csv"));
        let schema_path = data_dir.join(format!("{name}.schema.json"));
        std::fs::write(&csv_path, csv).expect("CSV writes");
        std::fs::write(&schema_path, snapshot.schema_json()).expect("schema writes");
        let rows = csv.lines().count() - 1;
        println!("wrote {} ({rows} rows) and {}", csv_path.display(), schema_path.display());
    }
}
