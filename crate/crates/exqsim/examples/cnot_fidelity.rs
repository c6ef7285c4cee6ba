// Copyright 2026 the exqsim developers
// SPDX-License-Identifier: Apache-2.0

//! Monte Carlo wavefunction fidelity of the encoded 30-pulse CNOT under
//! pure dephasing, compared against free evolution of matched duration.
//!
//! Run with `cargo run --release --example cnot_fidelity` (about a minute;
//! scale n_traj up for smoother curves).

use exqsim::gates::CanonicalLibrary;
use exqsim::hilbert::{BlochSampler, LogicalCodec};
use exqsim::mcwf::{ensemble_fidelity_sampled, Drive, NoiseModel, TrajectoryConfig};

fn main() {
    let lib = CanonicalLibrary::load();
    let codec = LogicalCodec::new(2);
    let gate = Drive::from_schedule(lib.cnot30()).unwrap();
    let free = Drive::idle(6, lib.cnot30().total_time());
    let cfg = TrajectoryConfig {
        n_traj: 1600,
        seed: 1,
        ..Default::default()
    };

    println!("gamma_dep     F(gate)              F(free)");
    for gamma in [1e-4, 3e-4, 1e-3, 3e-3, 1e-2] {
        let noise = NoiseModel::dephasing(gamma).unwrap();
        let fg = ensemble_fidelity_sampled(
            &codec,
            BlochSampler::SurfaceUniform,
            16,
            &gate,
            &noise,
            &cfg,
        )
        .unwrap();
        let ff = ensemble_fidelity_sampled(
            &codec,
            BlochSampler::SurfaceUniform,
            16,
            &free,
            &noise,
            &cfg,
        )
        .unwrap();
        println!(
            "{gamma:9.1e}   {:.4} +- {:.4}    {:.4} +- {:.4}",
            fg.mean, fg.std_error, ff.mean, ff.std_error
        );
    }
}
