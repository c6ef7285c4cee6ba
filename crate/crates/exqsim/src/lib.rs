// Copyright 2026 the exqsim developers
// SPDX-License-Identifier: Apache-2.0

//! Exchange-only quantum computation on a linear spin chain.
//!
//! Logical qubits live in three-spin blocks and every gate is a schedule
//! of nearest-neighbour Heisenberg exchange pulses. The crate provides
//!
//! * bitwise state-vector kernels and the three-spin logical encoding
//!   ([`hilbert`]),
//! * the exchange pulse algebra, schedule merging, SWAP-conjugation
//!   lifting and the canonical published gate-time tables ([`gates`]),
//! * analytic single-qubit gate synthesis through quaternions and the
//!   assembly of the 30-pulse exact CNOT ([`quat`]),
//! * Nelder-Mead synthesis of the 35-pulse exact CNOT and Bell-basis
//!   local-equivalence invariants ([`synth`]),
//! * a Monte Carlo wavefunction engine with dephasing and emission jumps
//!   and trajectory-ensemble fidelity estimation ([`mcwf`]),
//! * the encoded three-qubit Deutsch-Jozsa algorithm and compound-gate
//!   compression experiments ([`algorithms`]),
//! * a config-driven experiment runner emitting CSV series and JSON
//!   summaries ([`experiments`]).
//!
//! Times are dimensionless throughout (units of 2 hbar / J0); decoherence
//! rates are the dimensionless ratios hbar Gamma / J0. See the crate
//! examples for end-to-end usage, e.g.
//! `cargo run --release --example gate_verify`.

pub mod algorithms;
pub mod error;
pub mod experiments;
pub mod gates;
pub mod hilbert;
pub mod linalg;
pub mod mcwf;
pub mod quat;
pub mod synth;

pub use algorithms::{
    build_cnot13, build_dj_circuit, compile_logical_circuit, dj_algorithmic_fidelity,
    sandwiched_cnot_comparison, DJOracle, EncodedCircuit, LogicalGate,
};
pub use error::{Error, Result};
pub use gates::{
    apply_exchange, apply_schedule, lift_nonadjacent, schedule_total_time, CanonicalLibrary,
    ExchangePulse, ExchangeSchedule,
};
pub use hilbert::{
    apply_single_spin_op, overlap_fidelity, sample_logical_bloch_state, BlochSampler, LogicalCodec,
    RngStream, SpinOp, StateVector,
};
pub use mcwf::{
    analytic_dephasing_fidelity, conditional_step, ensemble_fidelity, run_trajectory, Backend,
    Drive, FidelityEstimate, NoiseModel, TrajectoryConfig,
};
pub use quat::{
    assemble_analytic_cnot, q_euler, q_from_exchange, solve_phase_system, solve_three_exchange,
    verify_four_exchange, Quaternion,
};
pub use synth::{
    cnot_matrix, is_locally_equivalent, makhlin_class, multi_start_synthesize, nelder_mead,
    CnotCost, CostEvaluation, MakhlinClass,
};
