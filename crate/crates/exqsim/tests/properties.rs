// Copyright 2026 the exqsim developers
// SPDX-License-Identifier: Apache-2.0

//! Randomized invariants of the pulse algebra, the codec and the solvers.

use exqsim::gates::{
    apply_exchange, exchange_unitary_dense, lift_nonadjacent, schedule_from_json, schedule_to_json,
    schedule_unitary_dense, ExchangePulse, ExchangeSchedule,
};
use exqsim::hilbert::{LogicalCodec, StateVector};
use exqsim::linalg::{cr, C64};
use exqsim::quat::{
    compose_gate_quaternion, solve_three_exchange, ExchangeAxis, LogicalRotationTarget, Quaternion,
    ThreePattern,
};
use proptest::prelude::*;
use std::f64::consts::PI;

const N_SITES: usize = 6;

fn pulse_strategy() -> impl Strategy<Value = ExchangePulse> {
    (0..N_SITES - 1, 0.0..PI).prop_map(|(i, t)| ExchangePulse::new(i, i + 1, t).unwrap())
}

fn schedule_strategy(max_len: usize) -> impl Strategy<Value = ExchangeSchedule> {
    proptest::collection::vec(pulse_strategy(), 1..max_len)
        .prop_map(|pulses| ExchangeSchedule::from_pulses(N_SITES, pulses).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Merging same-pair pulses mod pi never changes the unitary beyond a
    /// global phase.
    #[test]
    fn merged_schedule_is_phase_equivalent(sched in schedule_strategy(12)) {
        let merged = ExchangeSchedule::empty(N_SITES)
            .concat_merged(&sched)
            .unwrap();
        let u_raw = schedule_unitary_dense(&sched);
        let u_merged = schedule_unitary_dense(&merged);
        let dev = u_merged.phase_aligned_to(&u_raw).max_abs_diff(&u_raw);
        prop_assert!(dev < 1e-9, "deviation {dev}");
    }

    /// Shifting every pulse time by pi flips only a global sign.
    #[test]
    fn pulse_times_are_periodic_mod_pi(sched in schedule_strategy(6), k in 0usize..64) {
        let state = StateVector::basis(N_SITES, k);
        let mut shifted_pulses = sched.pulses().to_vec();
        shifted_pulses[0].t += PI;
        let shifted = ExchangeSchedule::from_pulses(N_SITES, shifted_pulses).unwrap();
        let a = exqsim::gates::apply_schedule(&state, &sched).unwrap();
        let b = exqsim::gates::apply_schedule(&state, &shifted).unwrap();
        let overlap = a.inner(&b).unwrap().norm();
        prop_assert!((overlap - 1.0).abs() < 1e-12);
    }

    /// Unitarity: schedules preserve the norm of arbitrary states.
    #[test]
    fn schedules_preserve_norm(sched in schedule_strategy(12), seed in 0u64..1000) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let amps: Vec<C64> = (0..(1 << N_SITES))
            .map(|_| C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
            .collect();
        let mut state = StateVector::from_amplitudes(amps).unwrap();
        state.normalize().unwrap();
        let out = exqsim::gates::apply_schedule(&state, &sched).unwrap();
        prop_assert!((out.norm_sqr() - 1.0).abs() < 1e-12);
    }

    /// SWAP-conjugation lifting reproduces the dense exponential for every
    /// pair on chains up to five sites.
    #[test]
    fn lift_matches_dense_exponential(n in 3usize..=5, t in 0.0..PI, pick in any::<u32>()) {
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| ((i + 2)..n).map(move |j| (i, j)))
            .collect();
        prop_assume!(!pairs.is_empty());
        let (i, j) = pairs[pick as usize % pairs.len()];
        let lifted = lift_nonadjacent(&ExchangePulse::new(i, j, t).unwrap(), n).unwrap();
        let dense = exchange_unitary_dense(n, i, j, t);
        let u = schedule_unitary_dense(&lifted);
        let dev = u.phase_aligned_to(&dense).max_abs_diff(&dense);
        prop_assert!(dev < 1e-10, "pair ({i},{j}) deviation {dev}");
    }

    /// Schedule files round-trip exactly.
    #[test]
    fn schedule_json_round_trips(sched in schedule_strategy(16)) {
        let text = schedule_to_json(&sched);
        let back = schedule_from_json(&text).unwrap();
        prop_assert_eq!(back.pulses(), sched.pulses());
    }

    /// The codec is an isometry on random logical vectors.
    #[test]
    fn encode_decode_round_trips(
        n in 1usize..=3,
        parts in proptest::collection::vec(-1.0..1.0f64, 16),
    ) {
        let codec = LogicalCodec::new(n);
        let dim = codec.logical_dim();
        let mut v: Vec<C64> = (0..dim)
            .map(|k| C64::new(parts[2 * k], parts[2 * k + 1]))
            .collect();
        let norm: f64 = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        prop_assume!(norm > 1e-3);
        for c in &mut v {
            *c /= cr(norm);
        }
        let encoded = codec.encode(&v).unwrap();
        prop_assert!((encoded.norm_sqr() - 1.0).abs() < 1e-12);
        let decoded = codec.decode(&encoded).unwrap();
        for (a, b) in decoded.iter().zip(&v) {
            prop_assert!((a - b).norm() < 1e-12);
        }
    }

    /// Within-block pulses never leak encoded states.
    #[test]
    fn local_pulses_preserve_the_code_space(
        choices in proptest::collection::vec((0usize..2, 0usize..2, 0.0..PI), 1..30),
    ) {
        let codec = LogicalCodec::new(2);
        let mut state = codec.codeword(3);
        for (block, pair, t) in choices {
            let base = 3 * block + pair;
            apply_exchange(&mut state, base, base + 1, t).unwrap();
        }
        let (_, w_out) = codec.subspace_weights(&state).unwrap();
        prop_assert!(w_out < 1e-12, "leak {w_out}");
    }

    /// Three-pulse synthesis round-trips every reachable target.
    #[test]
    fn three_pulse_solver_round_trips(alpha in 0.0..(2.0 * PI), z in -1.0..1.0f64, phi in 0.0..(2.0 * PI)) {
        let r = (1.0 - z * z).sqrt();
        let axis = [r * phi.cos(), r * phi.sin(), z];
        let q = Quaternion::from_axis_angle(alpha, axis);
        let target = LogicalRotationTarget::Matrix(q.to_su2());
        let reachable = q.x * q.x + q.y * q.y <= 0.75 - 1e-6;
        match solve_three_exchange(&target, ThreePattern::E12E23E12) {
            Ok(times) => {
                prop_assert!(reachable || q.x * q.x + q.y * q.y <= 0.75 + 1e-9);
                let composed = compose_gate_quaternion(
                    &[ExchangeAxis::E12, ExchangeAxis::E23, ExchangeAxis::E12],
                    &times,
                );
                prop_assert!(composed.dist_up_to_sign(&q) < 1e-9);
            }
            Err(_) => prop_assert!(!reachable),
        }
    }
}
