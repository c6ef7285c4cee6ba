// Copyright 2026 the exqsim developers
// SPDX-License-Identifier: Apache-2.0

//! Verify the canonical gate-time tables: both exact-CNOT schedules and
//! the merged compound gate, against their logical targets.
//!
//! Run with `cargo run --release --example gate_verify`.

use exqsim::gates::{schedule_logical_block, CanonicalLibrary};
use exqsim::hilbert::LogicalCodec;
use exqsim::linalg::{cr, CMat};
use exqsim::synth::{cnot_matrix, is_locally_equivalent, CnotCost};

fn main() {
    let lib = CanonicalLibrary::load();
    let codec = LogicalCodec::new(2);
    let cnot = cnot_matrix();

    let hh = {
        let s = cr(std::f64::consts::FRAC_1_SQRT_2);
        let h = CMat::from_rows(&[&[s, s], &[s, -s]]);
        h.kron(&h)
    };
    let reversed_cnot = hh.mul(&cnot).mul(&hh);

    println!("schedule      pulses  total time  max |U - target|");
    for (sched, target) in [
        (lib.cnot30(), &cnot),
        (lib.cnot35(), &cnot),
        (lib.sandwich31(), &reversed_cnot),
    ] {
        let block = schedule_logical_block(sched, &codec);
        let dev = block.phase_aligned_to(target).max_abs_diff(target);
        println!(
            "{:<12}  {:>6}  {:>10.6}  {:.3e}",
            sched.label.as_deref().unwrap_or("?"),
            sched.len(),
            sched.total_time(),
            dev
        );
    }

    // the 19-pulse core is locally equivalent to CNOT but not equal to it
    let core_block = schedule_logical_block(lib.core19(), &codec);
    let equivalent = is_locally_equivalent(&core_block, &cnot, 1e-3).unwrap();
    println!("\ncore19: locally equivalent to CNOT: {equivalent}");

    // cost components of the 35-pulse table
    let cost = CnotCost::new(&lib);
    let eval = cost.eval(&exqsim::experiments::cnot35_local_times());
    println!(
        "cnot35 cost: distance {:.3e}, leaked probability {:.3e}, leakage sum {:.3e}",
        eval.distance, eval.leakage_prob, eval.leakage
    );
}
