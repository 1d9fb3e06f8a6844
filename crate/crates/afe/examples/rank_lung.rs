//! Run the complete evaluator on the bundled lung snapshot and walk through
//! everything it produces: each engine's feature selection and retrained
//! accuracy, the accuracy-derived fusion weights, the combined ranking, and
//! the final model trained on the fused selection. Also writes the same
//! report JSON the command-line tool emits.
//!
//! ```bash
//! cargo run --release --example rank_lung
//! ```

use afe::afe::{run_afe, AfeConfig};
use afe::data::lung_snapshot;
use afe::models::Kind;
use afe::report::{Envelope, ReportKind};

fn main() {
    let data = lung_snapshot().data().expect("bundled snapshot loads");
    let cfg = AfeConfig::new(Kind::Rf, 0);
    println!(
        "evaluating {} rows x {} features with {} (seed {})",
        data.n_rows(),
        data.n_features(),
        cfg.classifier.kind().label(),
        cfg.seed
    );

    let report = run_afe(&cfg, &data).expect("pipeline runs");

    println!("\nper-engine outcomes (each retrained on its own selection):");
    for outcome in &report.per_method {
        println!(
            "  {:<4} kept {:>2} features -> accuracy {:.4}, f1 {:.4}",
            outcome.method.name(),
            outcome.selected_features.len(),
            outcome.accuracy,
            outcome.f1
        );
    }

    println!(
        "\nfusion weights (accuracy shares): PCT {:.4}  SHAP {:.4}  GA {:.4}",
        report.weights.pct, report.weights.shap, report.weights.ga
    );

    println!("\ncombined ranking:");
    for (rank, (feature, weight)) in report.ranking_rows().iter().enumerate() {
        println!("  {:>2}. {:<24} {:.6}", rank + 1, feature, weight);
    }

    println!(
        "\nfused selection ({} features): {:?}",
        report.afe_selected_features.len(),
        report.afe_selected_features
    );
    println!(
        "baseline (all features) accuracy {:.4} -> fused accuracy {:.4}, f1 {:.4}",
        report.baseline_metrics.accuracy, report.afe_metrics.accuracy, report.afe_metrics.f1
    );

    let out = std::env::temp_dir().join("afe_rank_lung_example.json");
    Envelope::new(ReportKind::Rank, &report)
        .write(&out)
        .expect("report writes");
    println!("\nfull report written to {}", out.display());
}
