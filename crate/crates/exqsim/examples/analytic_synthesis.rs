// Copyright 2026 the exqsim developers
// SPDX-License-Identifier: Apache-2.0

//! Analytic gate synthesis on the encoded qubit: solve the three-pulse
//! systems for the elementary gates, verify them through the closed-form
//! four-pulse oracle, and assemble the full 30-pulse exact CNOT.
//!
//! Run with `cargo run --release --example analytic_synthesis`.

use exqsim::gates::CanonicalLibrary;
use exqsim::linalg::{cr, CMat, C64};
use exqsim::quat::{
    assemble_analytic_cnot, four_exchange_slots, solve_four_exchange, solve_three_exchange,
    verify_four_exchange, ExchangeAxis, LogicalRotationTarget, Quaternion, ThreePattern,
};
use std::f64::consts::PI;

fn main() {
    // Hadamard and the 60-degree y-rotation live on the E12-E23-E12 pattern
    let s = cr(std::f64::consts::FRAC_1_SQRT_2);
    let hadamard = CMat::from_rows(&[&[s, s], &[s, -s]]);
    let h_times = solve_three_exchange(
        &LogicalRotationTarget::Matrix(hadamard.clone()),
        ThreePattern::E12E23E12,
    )
    .unwrap();
    println!(
        "Hadamard  E12({:.6}) E23({:.6}) E12({:.6})",
        h_times[0], h_times[1], h_times[2]
    );

    let s_rot = LogicalRotationTarget::AxisAngle {
        alpha: PI / 3.0,
        beta: PI,
        gamma: PI,
    };
    let s_times = solve_three_exchange(&s_rot, ThreePattern::E12E23E12).unwrap();
    println!(
        "S (60 y)  E12({:.6}) E23({:.6}) E12({:.6})",
        s_times[0], s_times[1], s_times[2]
    );

    // NOT is out of reach for that pattern (transverse cap sqrt(3)/2) and
    // needs the E23-E12-E23 ordering
    let not_mat = CMat::from_rows(&[&[cr(0.0), cr(1.0)], &[cr(1.0), cr(0.0)]]);
    let not_target = LogicalRotationTarget::Matrix(not_mat);
    match solve_three_exchange(&not_target, ThreePattern::E12E23E12) {
        Err(e) => println!("NOT on E12-E23-E12: {e}"),
        Ok(_) => unreachable!("the NOT gate exceeds the pattern's reachable set"),
    }
    let not_times = solve_three_exchange(&not_target, ThreePattern::E23E12E23).unwrap();
    println!(
        "NOT       E23({:.6}) E12({:.6}) E23({:.6})",
        not_times[0], not_times[1], not_times[2]
    );

    // verify the Hadamard through the closed-form oracle (SU(2) form)
    let slots = four_exchange_slots(
        &[ExchangeAxis::E12, ExchangeAxis::E23, ExchangeAxis::E12],
        &h_times,
    )
    .unwrap();
    let residual = verify_four_exchange(&hadamard.scale(C64::new(0.0, -1.0)), slots);
    println!("Hadamard closed-form residual: {residual:.2e}");

    // any rotation takes at most four pulses
    let axis = {
        let v = [0.2f64, -0.6, 0.78];
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        [v[0] / n, v[1] / n, v[2] / n]
    };
    let arbitrary = Quaternion::from_axis_angle(1.234, axis);
    let four = solve_four_exchange(&LogicalRotationTarget::Matrix(arbitrary.to_su2())).unwrap();
    println!(
        "random rotation: E23({:.4}) E12({:.4}) E23({:.4}) E12({:.4})",
        four[0], four[1], four[2], four[3]
    );

    // assemble the exact CNOT from the analytic parts
    let lib = CanonicalLibrary::load();
    let cnot = assemble_analytic_cnot(&lib).unwrap();
    println!(
        "\nassembled exact CNOT: {} pulses, T = {:.6}",
        cnot.len(),
        cnot.total_time()
    );
    for (k, p) in cnot.pulses().iter().enumerate() {
        println!("  {:>2}  ({}, {})  {:.6}", k + 1, p.i, p.j, p.t);
    }
}
