// Copyright 2026 the exqsim developers
// SPDX-License-Identifier: Apache-2.0

//! Encoded 19-pulse CNOT on six spins versus a bare two-qubit CNOT block
//! of matched duration: more spins dephase, so the encoded gate decays
//! faster.
//!
//! Run with `cargo run --release --example bare_vs_encoded`.

use exqsim::experiments::bare_cnot_baseline;
use exqsim::gates::CanonicalLibrary;
use exqsim::hilbert::{BlochSampler, LogicalCodec};
use exqsim::mcwf::{ensemble_fidelity_sampled, Drive, NoiseModel, TrajectoryConfig};

fn main() {
    let lib = CanonicalLibrary::load();
    let codec = LogicalCodec::new(2);
    let encoded = Drive::from_schedule(lib.core19()).unwrap();
    let cfg = TrajectoryConfig {
        n_traj: 1600,
        seed: 5,
        ..Default::default()
    };

    println!("gamma_dep   F(encoded, 6 spins)  F(bare, 2 qubits)");
    for gamma in [1e-4, 1e-3, 3e-3, 1e-2] {
        let noise = NoiseModel::dephasing(gamma).unwrap();
        let enc = ensemble_fidelity_sampled(
            &codec,
            BlochSampler::SurfaceUniform,
            16,
            &encoded,
            &noise,
            &cfg,
        )
        .unwrap();
        let bare =
            bare_cnot_baseline(&lib, &noise, &cfg, 16, BlochSampler::SurfaceUniform).unwrap();
        println!(
            "{gamma:9.1e}   {:.4}               {:.4}",
            enc.mean, bare.mean
        );
    }
}
