// Copyright 2026 the exqsim developers
// SPDX-License-Identifier: Apache-2.0

//! Compound-gate compression: the Hadamard-sandwiched CNOT as a 42-pulse
//! serial compilation versus the merged 31-pulse sequence, under the same
//! noise and the same sampled initial states.
//!
//! Run with `cargo run --release --example sandwich_compare`.

use exqsim::algorithms::{sandwich_serial_circuit, sandwiched_cnot_comparison};
use exqsim::gates::CanonicalLibrary;
use exqsim::hilbert::BlochSampler;
use exqsim::mcwf::{NoiseModel, TrajectoryConfig};

fn main() {
    let lib = CanonicalLibrary::load();
    let serial = sandwich_serial_circuit(&lib).unwrap();
    println!(
        "serial: {} pulses, T = {:.3};  merged: {} pulses, T = {:.3}",
        serial.schedule.len(),
        serial.total_time(),
        lib.sandwich31().len(),
        lib.sandwich31().total_time()
    );

    let cfg = TrajectoryConfig {
        n_traj: 400,
        seed: 11,
        ..Default::default()
    };
    println!("\ngamma_dep   F(serial-42)  F(merged-31)  gain");
    for gamma in [3e-4, 1e-3, 3e-3] {
        let cmp = sandwiched_cnot_comparison(
            &lib,
            &NoiseModel::dephasing(gamma).unwrap(),
            &cfg,
            64,
            BlochSampler::SurfaceUniform,
        )
        .unwrap();
        println!(
            "{gamma:9.1e}   {:.4}        {:.4}        {:+.4}",
            cmp.serial.mean,
            cmp.merged.mean,
            cmp.merged.mean - cmp.serial.mean
        );
    }
}
