//! Run the full classifier-by-method benchmark grid on the synthetic suite:
//! six classifiers, each scored under baseline (all features), PCT, XAI,
//! GA, and the fused AFE selection. Prints the accuracy table and writes
//! the same CSV artifacts the command-line tool emits.
//!
//! Swap `"synth"` for `"lung"`, `"heart"`, or `"covid"` to benchmark a
//! bundled snapshot (covid is the largest; expect minutes, not seconds).
//!
//! ```bash
//! cargo run --release --example benchmark_suite
//! ```

use afe::afe::AfeConfig;
use afe::bench::{figure_csvs, run_benchmark, table_csv, ALGORITHMS, METHODS};
use afe::models::Kind;

fn main() {
    let base = AfeConfig::new(Kind::Rf, 0);
    let suite = "synth";
    println!("running the {suite} suite (seed {})...\n", base.seed);
    let table = run_benchmark(suite, &base, false).expect("benchmark runs");

    println!(
        "{:<22} {:>9} {:>9} {:>9} {:>9} {:>9}",
        "algorithm", "baseline", "PCT", "XAI", "GA", "AFE"
    );
    for kind in ALGORITHMS {
        let cells: Vec<String> = METHODS
            .iter()
            .map(|&m| format!("{:>9.4}", table.cell(kind, m).expect("complete grid").accuracy))
            .collect();
        println!("{:<22} {}", kind.label(), cells.join(" "));
    }

    let dir = std::env::temp_dir();
    let table_path = dir.join("afe_benchmark_example.csv");
    std::fs::write(&table_path, table_csv(&table)).expect("table writes");
    println!("\nfull table written to {}", table_path.display());
    for (stem, csv) in figure_csvs(&table) {
        let path = dir.join(format!("afe_benchmark_example_{stem}.csv"));
        std::fs::write(&path, csv).expect("figure data writes");
        println!("figure data written to {}", path.display());
    }
}
