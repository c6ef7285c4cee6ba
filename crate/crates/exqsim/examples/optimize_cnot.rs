// Copyright 2026 the exqsim developers
// SPDX-License-Identifier: Apache-2.0

//! Numeric route to the exact CNOT: multi-start Nelder-Mead over the
//! sixteen local pulse times around the fixed 19-pulse core.
//!
//! A cold start rarely reaches the published 1e-4 cost in a short demo
//! run; this example shows the machinery and then polishes the published
//! times as a warm start.
//!
//! Run with `cargo run --release --example optimize_cnot`.

use exqsim::gates::CanonicalLibrary;
use exqsim::synth::{multi_start_synthesize, nelder_mead, CnotCost, NelderMeadOptions};

fn main() {
    let lib = CanonicalLibrary::load();

    let opts = NelderMeadOptions {
        max_iter: 2000,
        ..Default::default()
    };
    let shots = 24;
    let result = multi_start_synthesize(&lib, shots, 42, &opts).unwrap();
    println!("multi-start with {shots} shots (seed 42):");
    let best_start = result
        .shots
        .iter()
        .map(|s| s.initial_cost)
        .fold(f64::INFINITY, f64::min);
    println!("  best initial cost  {best_start:.4}");
    println!(
        "  after {} iterations  C = {:.6e} (distance {:.3e})",
        result.optimizer.iterations,
        result.cost.total(),
        result.cost.distance
    );

    // warm start from the published optimum
    let cost = CnotCost::new(&lib);
    let table = exqsim::experiments::cnot35_local_times();
    let warm = nelder_mead(
        |x| {
            let mut arr = [0.0f64; 16];
            arr.copy_from_slice(x);
            cost.objective(&arr)
        },
        &table,
        &NelderMeadOptions {
            max_iter: 500,
            initial_step: 1e-4,
            ..Default::default()
        },
    );
    let mut polished = [0.0f64; 16];
    polished.copy_from_slice(&warm.x);
    let eval = cost.eval(&polished);
    println!("\nwarm start from the published table:");
    println!(
        "  distance {:.3e}, leaked probability {:.3e}, objective {:.3e}",
        eval.distance, eval.leakage_prob, warm.fx
    );
}
