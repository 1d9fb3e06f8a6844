//! Adaptive feature evaluation for tabular classification.
//!
//! The crate trains several from-scratch classifiers, scores features under
//! three independent lenses — permutation importance, exact Shapley values,
//! and a genetic subset search — and fuses the three rankings into a single
//! accuracy-weighted importance vector. Everything is seeded and
//! deterministic: the same inputs and seed produce byte-identical results
//! regardless of thread count.
//!
//! Modules build on each other bottom-up:
//!
//! * [`data`] — CSV loading/encoding, stratified splits, standardization,
//!   and planted-signal synthetic fixtures.
//! * [`metrics`] — accuracy, precision/recall/F1, and confusion matrices.
//! * [`models`] — six classifiers behind one train/predict contract.
//! * [`importance`] — permutation importance, Shapley values, and the
//!   genetic-algorithm subset search.
//! * [`afe`] — the fused pipeline: per-method selection, retraining,
//!   accuracy weighting, and the combined ranking.
//! * [`report`] — stable JSON reports for every pipeline product.
//! * [`bench`] — bundled dataset suites and the benchmark grid.
//! * [`cli`] — the `afe` command-line tool built on all of the above.

pub mod afe;
pub mod bench;
pub mod cli;
pub mod data;
pub mod importance;
pub mod metrics;
pub mod models;
pub mod report;
pub mod rng;
