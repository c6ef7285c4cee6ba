// Copyright 2026 the exqsim developers
// SPDX-License-Identifier: Apache-2.0

//! Worst-case algorithmic fidelity of the encoded three-qubit
//! Deutsch-Jozsa algorithm: eight oracle versions on nine physical spins.
//!
//! Run with `cargo run --release --example dj_fidelity` (a few minutes at
//! the default trajectory count).

use exqsim::algorithms::{build_dj_circuit, dj_algorithmic_fidelity, DJOracle, DjInputs};
use exqsim::gates::CanonicalLibrary;
use exqsim::mcwf::{NoiseModel, TrajectoryConfig};

fn main() {
    let lib = CanonicalLibrary::load();

    println!("oracle  kind      pulses  t_f");
    for oracle in DJOracle::all() {
        let circuit = build_dj_circuit(oracle, &lib).unwrap();
        println!(
            "{:>6}  {:<8}  {:>6}  {:>7.2}",
            oracle.id,
            if oracle.is_constant() {
                "constant"
            } else {
                "balanced"
            },
            circuit.schedule.len(),
            circuit.total_time()
        );
    }

    let cfg = TrajectoryConfig {
        n_traj: 640,
        seed: 2,
        ..Default::default()
    };
    for gamma in [1e-4, 1e-3] {
        let noise = NoiseModel::dephasing(gamma).unwrap();
        let result = dj_algorithmic_fidelity(&lib, &noise, &cfg, DjInputs::Canonical).unwrap();
        println!("\ngamma_dep = {gamma:.0e}");
        for est in &result.per_oracle {
            println!(
                "  {:<14} F = {:.4} +- {:.4}",
                est.label, est.mean, est.std_error
            );
        }
        println!(
            "  worst case: oracle {} with F = {:.4}",
            result.worst_oracle, result.worst
        );
    }
}
