//! Shapley attribution on hand-checkable engines: a five-member team-profit
//! game and a linear model. Demonstrates the axioms the implementation
//! guarantees — efficiency, dummy, symmetry — and that the subset
//! enumeration and the ordering average are the same quantity.
//!
//! Member presence is encoded through the instance row (1 = present) versus
//! the background row (0 = absent), so coalition values enumerate team
//! configurations.
//!
//! ```bash
//! cargo run --example shapley_toy
//! ```

use afe::importance::{
    shapley_exact_fn, shapley_permutation_form_fn, BackgroundSet, ImportanceError,
};
use ndarray::arr2;

fn main() {
    // Five-member team: members 0-2 earn 10/20/30 on their own, members 0
    // and 1 earn a 40-unit synergy together, members 3 and 4 contribute
    // nothing at all.
    let profit = |team: &[f64]| {
        Ok::<f64, ImportanceError>(
            10.0 * team[0] + 20.0 * team[1] + 30.0 * team[2] + 40.0 * team[0] * team[1],
        )
    };
    let everyone = [1.0; 5];
    let nobody = BackgroundSet::from_rows(arr2(&[[0.0; 5]])).unwrap();

    let by_subsets = shapley_exact_fn(profit, &everyone, &nobody).unwrap();
    let by_orderings = shapley_permutation_form_fn(profit, &everyone, &nobody).unwrap();

    println!("team-profit game, total profit {}:", by_subsets.fx_full);
    for (member, (a, b)) in by_subsets.phi.iter().zip(&by_orderings.phi).enumerate() {
        println!("  member {member}: share {a:>5.2}  (ordering average {b:>5.2})");
    }

    let paid_out: f64 = by_subsets.phi.iter().sum();
    println!("\nefficiency: shares sum to {paid_out} = profit({everyone:?}) - profit(nobody)");
    println!(
        "dummy: members 3 and 4 never change the profit, so their shares are exactly {} and {}",
        by_subsets.phi[3], by_subsets.phi[4]
    );
    println!(
        "synergy: the 40-unit bonus splits evenly, lifting members 0 and 1 to {} and {}",
        by_subsets.phi[0], by_subsets.phi[1]
    );

    // Linear model: with a single background row the attribution has a
    // closed form, phi_i = w_i * (x_i - b_i).
    let w = [2.0, -3.0, 0.5];
    let linear = move |row: &[f64]| {
        Ok::<f64, ImportanceError>(row.iter().zip(&w).map(|(x, wi)| x * wi).sum::<f64>() + 1.0)
    };
    let x = [1.0, 2.0, -1.5];
    let b = [0.5, -1.0, 0.25];
    let bg = BackgroundSet::from_rows(arr2(&[b])).unwrap();
    let explained = shapley_exact_fn(linear, &x, &bg).unwrap();

    println!("\nlinear model f = w.x + 1 with one background row:");
    for i in 0..3 {
        let closed_form = w[i] * (x[i] - b[i]);
        println!(
            "  phi_{i} = {:>6.3}   w_{i}*(x_{i} - b_{i}) = {closed_form:>6.3}",
            explained.phi[i]
        );
    }
}
