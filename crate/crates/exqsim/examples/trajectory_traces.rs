// Copyright 2026 the exqsim developers
// SPDX-License-Identifier: Apache-2.0

//! Single quantum trajectories: collapse records, the lifted non-adjacent
//! exchange, and schedule JSON round-tripping.
//!
//! Run with `cargo run --release --example trajectory_traces`.

use exqsim::gates::{lift_nonadjacent, schedule_from_json, schedule_to_json, ExchangePulse};
use exqsim::hilbert::{LogicalCodec, RngStream};
use exqsim::mcwf::{run_trajectory_traced, Drive, NoiseModel, TrajectoryConfig};

fn main() {
    // lift an exchange between sites 1 and 4 into nearest-neighbour pulses
    let pulse = ExchangePulse::new(1, 4, 0.83).unwrap();
    let lifted = lift_nonadjacent(&pulse, 6).unwrap();
    println!(
        "exchange (1,4) lifted to {} nearest-neighbour pulses:",
        lifted.len()
    );
    for p in lifted.pulses() {
        println!("  ({}, {})  t = {:.6}", p.i, p.j, p.t);
    }

    // the schedule file format round-trips
    let text = schedule_to_json(&lifted);
    let back = schedule_from_json(&text).unwrap();
    assert_eq!(back.pulses(), lifted.pulses());
    println!("\nschedule JSON round-trip: ok ({} bytes)", text.len());

    // watch collapses along individual trajectories of an idle encoded pair
    let codec = LogicalCodec::new(2);
    let initial = codec.codeword(2);
    let drive = Drive::idle(6, 50.0);
    let noise = NoiseModel::new(5e-2, 5e-3).unwrap();
    let cfg = TrajectoryConfig {
        steps_per_gate: 2000,
        n_traj: 1,
        seed: 7,
        ..Default::default()
    };
    println!("\ncollapse records over five trajectories (gamma_dep = 5e-2):");
    for stream in 0..5 {
        let (_, events) =
            run_trajectory_traced(&initial, &drive, &noise, &cfg, &RngStream::new(7, stream))
                .unwrap();
        let line: Vec<String> = events
            .iter()
            .map(|e| format!("{:?}@site{}:t={:.1}", e.kind, e.site, e.time))
            .collect();
        println!("  trajectory {stream}: [{}]", line.join(", "));
    }
}
