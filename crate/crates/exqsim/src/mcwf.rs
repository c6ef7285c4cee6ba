// Copyright 2026 the exqsim developers
// SPDX-License-Identifier: Apache-2.0

//! Monte Carlo wavefunction propagation.
//!
//! Open-system dynamics are unravelled into pure-state trajectories: a
//! non-Hermitian conditional Hamiltonian drives deterministic no-jump
//! segments, and collapse operators fire stochastically with per-step
//! probability dt <psi| C^H C |psi>. Ensemble averages of trajectory
//! overlaps recover density-matrix fidelities.
//!
//! Collapse operators are normalized so that a single spin dephases with
//! coherence factor e^{-gamma_dep t} and an excited spin decays with
//! population e^{-gamma_emi t}:
//!   C_dep,i = sqrt(gamma_dep / 2) sigma_z(i),
//!   C_emi,i = sqrt(gamma_emi) sigma_-(i).
//! These make the closed-form single-qubit results (coherence decay and
//! the Bloch-averaged fidelity (2 + e^{-gamma t})/3) exact contracts.

use crate::error::{Error, Result};
use crate::gates::ExchangeSchedule;
use crate::hilbert::{
    sample_logical_bloch_state, BlochSampler, LogicalCodec, RngStream, StateVector,
};
use crate::linalg::{cr, ZERO};
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Dimensionless decoherence rates (hbar Gamma / J0, with time in units of
/// 2 hbar / J0).
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    pub gamma_dep: f64,
    pub gamma_emi: f64,
}

impl NoiseModel {
    pub fn new(gamma_dep: f64, gamma_emi: f64) -> Result<Self> {
        if gamma_dep < 0.0 || !gamma_dep.is_finite() {
            return Err(Error::NegativeRate {
                name: "gamma_dep",
                value: gamma_dep,
            });
        }
        if gamma_emi < 0.0 || !gamma_emi.is_finite() {
            return Err(Error::NegativeRate {
                name: "gamma_emi",
                value: gamma_emi,
            });
        }
        Ok(NoiseModel {
            gamma_dep,
            gamma_emi,
        })
    }

    pub fn noiseless() -> Self {
        NoiseModel {
            gamma_dep: 0.0,
            gamma_emi: 0.0,
        }
    }

    pub fn dephasing(gamma_dep: f64) -> Result<Self> {
        Self::new(gamma_dep, 0.0)
    }

    pub fn emission(gamma_emi: f64) -> Result<Self> {
        Self::new(0.0, gamma_emi)
    }

    /// Dephasing with emission at the quantum-dot ratio
    /// gamma_dep / gamma_emi = 100.
    pub fn with_default_emission(gamma_dep: f64) -> Result<Self> {
        Self::new(gamma_dep, gamma_dep / 100.0)
    }

    pub fn is_noiseless(&self) -> bool {
        self.gamma_dep == 0.0 && self.gamma_emi == 0.0
    }
}

/// Propagation backend for the no-jump step.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Backend {
    #[default]
    Dense,
    Split,
}

/// Trajectory-ensemble configuration.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryConfig {
    /// Time steps per coherent segment (pulse or idle block).
    pub steps_per_gate: usize,
    /// Trajectories per initial state.
    pub n_traj: usize,
    pub seed: u64,
    pub backend: Backend,
    /// Hard ceiling on the per-step collapse probability.
    pub p_tot_guard: f64,
}

impl Default for TrajectoryConfig {
    fn default() -> Self {
        TrajectoryConfig {
            steps_per_gate: 20,
            n_traj: 512,
            seed: 0,
            backend: Backend::Dense,
            p_tot_guard: 0.1,
        }
    }
}

impl TrajectoryConfig {
    pub fn validate(&self) -> Result<()> {
        if self.steps_per_gate == 0 {
            return Err(Error::InvalidConfig("steps_per_gate must be >= 1".into()));
        }
        if self.n_traj == 0 {
            return Err(Error::InvalidConfig("n_traj must be >= 1".into()));
        }
        Ok(())
    }
}

/// Coherent generator active during one segment.
#[derive(Copy, Clone, Debug, PartialEq)]
pub enum Generator {
    /// Decay terms only.
    Idle,
    /// Nearest-neighbour exchange pulse exp(+i t E_ij).
    Exchange { i: usize, j: usize },
    /// Constant-Hamiltonian CNOT block on two physical qubits: the full
    /// segment applies exp(i pi P) = CNOT with P the control-1, target-minus
    /// projector.
    CnotBlock {
        control: usize,
        target: usize,
        /// Total block duration; fixes the Hamiltonian strength pi / T.
        duration: f64,
    },
}

/// One coherent segment of a drive.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct Segment {
    pub generator: Generator,
    pub duration: f64,
}

/// A time-ordered coherent drive over the chain: the executable form of a
/// schedule, an idle wait, or a bare two-qubit CNOT block.
#[derive(Clone, Debug)]
pub struct Drive {
    pub n_sites: usize,
    pub label: String,
    segments: Vec<Segment>,
}

impl Drive {
    pub fn from_schedule(schedule: &ExchangeSchedule) -> Result<Self> {
        let mut segments = Vec::with_capacity(schedule.len());
        for p in schedule.pulses() {
            if !p.is_adjacent() {
                return Err(Error::NonAdjacentPulse { i: p.i, j: p.j });
            }
            segments.push(Segment {
                generator: Generator::Exchange { i: p.i, j: p.j },
                duration: p.t,
            });
        }
        Ok(Drive {
            n_sites: schedule.n_sites,
            label: schedule.label.clone().unwrap_or_default(),
            segments,
        })
    }

    /// Free evolution for `duration` on `n_sites` spins.
    pub fn idle(n_sites: usize, duration: f64) -> Self {
        Drive {
            n_sites,
            label: format!("idle-{duration:.3}"),
            segments: vec![Segment {
                generator: Generator::Idle,
                duration,
            }],
        }
    }

    /// An unencoded two-qubit CNOT driven as a single coherent block.
    pub fn bare_cnot(duration: f64) -> Self {
        Drive {
            n_sites: 2,
            label: "bare-cnot".into(),
            segments: vec![Segment {
                generator: Generator::CnotBlock {
                    control: 0,
                    target: 1,
                    duration,
                },
                duration,
            }],
        }
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn total_time(&self) -> f64 {
        self.segments.iter().map(|s| s.duration).sum()
    }

    /// Noise-free propagation of the full drive (closed form per segment).
    pub fn apply_reference(&self, state: &StateVector) -> Result<StateVector> {
        let mut out = state.clone();
        for seg in &self.segments {
            apply_generator(&mut out, &seg.generator, seg.duration)?;
        }
        Ok(out)
    }
}

/// Apply the coherent part of a generator for time `t` (exactly).
fn apply_generator(state: &mut StateVector, generator: &Generator, t: f64) -> Result<()> {
    match generator {
        Generator::Idle => Ok(()),
        Generator::Exchange { i, j } => crate::gates::apply_exchange(state, *i, *j, t),
        Generator::CnotBlock {
            control,
            target,
            duration,
        } => {
            let theta = std::f64::consts::PI * t / duration;
            apply_cnot_block(state, *control, *target, theta);
            Ok(())
        }
    }
}

/// exp(i theta P) with P projecting onto control = 1, target in |->:
/// at theta = pi this is the CNOT.
fn apply_cnot_block(state: &mut StateVector, control: usize, target: usize, theta: f64) {
    let mc = 1usize << control;
    let mt = 1usize << target;
    let scale = (Complex64::from_polar(1.0, theta) - cr(1.0)) * cr(0.5);
    let amps = state.amplitudes_mut();
    for k in 0..amps.len() {
        if k & mc != 0 && k & mt == 0 {
            let k1 = k | mt;
            let minus = amps[k] - amps[k1];
            let add = scale * minus;
            amps[k] += add;
            amps[k1] -= add;
        }
    }
}

/// Kinds of collapse events.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum JumpKind {
    Dephasing,
    Emission,
}

/// One recorded collapse.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JumpEvent {
    pub time: f64,
    pub site: usize,
    pub kind: JumpKind,
}

/// Weight on the occupied (bit = 1) label per site.
fn site_occupations(state: &StateVector, occ: &mut [f64]) {
    occ.fill(0.0);
    for (k, a) in state.amplitudes().iter().enumerate() {
        let p = a.norm_sqr();
        if p == 0.0 {
            continue;
        }
        let mut bits = k;
        while bits != 0 {
            let site = bits.trailing_zeros() as usize;
            occ[site] += p;
            bits &= bits - 1;
        }
    }
}

fn apply_sigma_z(state: &mut StateVector, site: usize) {
    let m = 1usize << site;
    for (k, a) in state.amplitudes_mut().iter_mut().enumerate() {
        if k & m != 0 {
            *a = -*a;
        }
    }
}

fn apply_sigma_minus(state: &mut StateVector, site: usize) -> Result<()> {
    let m = 1usize << site;
    let amps = state.amplitudes_mut();
    for k in 0..amps.len() {
        if k & m == 0 {
            amps[k] = ZERO;
        } else {
            amps[k & !m] = amps[k];
            amps[k] = ZERO;
        }
    }
    state.normalize()
}

/// Exact no-jump propagator for one step, unnormalized: coherent factor
/// times emission damping times the uniform dephasing decay.
pub fn dense_step(
    state: &StateVector,
    generator: &Generator,
    noise: &NoiseModel,
    dt: f64,
) -> Result<StateVector> {
    let mut out = state.clone();
    apply_generator(&mut out, generator, dt)?;
    apply_decay_factors(&mut out, noise, dt);
    Ok(out)
}

/// Second-order split of the no-jump propagator,
/// exp(-i D dt/2) exp(-i T dt) exp(-i D dt/2), with D the spin-diagonal
/// part (Ising coupling plus dephasing decay) and T the flip-flop part
/// plus emission decay. Unnormalized, no jump test. For this model D and
/// T commute, so the factorization is exact rather than O(dt^3).
pub fn split_step(
    state: &StateVector,
    generator: &Generator,
    noise: &NoiseModel,
    dt: f64,
) -> Result<StateVector> {
    let (i, j) = match generator {
        Generator::Exchange { i, j } => (*i, *j),
        Generator::Idle => {
            let mut out = state.clone();
            apply_decay_factors(&mut out, noise, dt);
            return Ok(out);
        }
        Generator::CnotBlock { .. } => {
            // the projector block has no spin-diagonal/off-diagonal split;
            // fall back to the exact step
            return dense_step(state, generator, noise, dt);
        }
    };
    let n = state.n_sites();
    if i >= n || j >= n {
        return Err(Error::SiteOutOfRange {
            site: i.max(j),
            n_sites: n,
        });
    }
    let mut out = state.clone();
    let mi = 1usize << i;
    let mj = 1usize << j;
    let mask = mi | mj;
    // uniform dephasing decay attached to D (two half steps = one full)
    let dep_decay = (-dt * state.n_sites() as f64 * noise.gamma_dep / 4.0).exp();
    // D: diagonal of the exchange generator; equal-bit states carry phase
    // e^{i dt} split across the two half steps
    let half_phase = Complex64::from_polar(1.0, dt / 2.0);
    let emi = noise.gamma_emi;
    {
        let amps = out.amplitudes_mut();
        // first D half step
        for (k, a) in amps.iter_mut().enumerate() {
            if (k & mi != 0) == (k & mj != 0) {
                *a *= half_phase;
            }
        }
        // T step: flip-flop on the active pair plus emission damping
        let (c, s) = (dt.cos(), dt.sin());
        let is = Complex64::new(0.0, s);
        for k in 0..amps.len() {
            let damp = if emi > 0.0 {
                cr((-dt * emi / 2.0 * (k.count_ones() as f64)).exp())
            } else {
                cr(1.0)
            };
            let bi = k & mi != 0;
            let bj = k & mj != 0;
            if bi == bj {
                amps[k] *= damp;
            } else if bi {
                // occupation is shared inside the block, damping commutes
                let p = k ^ mask;
                let (a, b) = (amps[k], amps[p]);
                amps[k] = (cr(c) * a + is * b) * damp;
                amps[p] = (cr(c) * b + is * a) * damp;
            }
        }
        // second D half step
        for (k, a) in amps.iter_mut().enumerate() {
            if (k & mi != 0) == (k & mj != 0) {
                *a *= half_phase;
            }
        }
        if noise.gamma_dep > 0.0 {
            for a in amps.iter_mut() {
                *a *= cr(dep_decay);
            }
        }
    }
    Ok(out)
}

fn apply_decay_factors(state: &mut StateVector, noise: &NoiseModel, dt: f64) {
    let n = state.n_sites() as f64;
    let uniform = (-dt * n * noise.gamma_dep / 4.0).exp();
    let emi = noise.gamma_emi;
    let amps = state.amplitudes_mut();
    if emi > 0.0 {
        for (k, a) in amps.iter_mut().enumerate() {
            let factor = uniform * (-dt * emi / 2.0 * (k.count_ones() as f64)).exp();
            *a *= cr(factor);
        }
    } else if noise.gamma_dep > 0.0 {
        for a in amps.iter_mut() {
            *a *= cr(uniform);
        }
    }
}

/// One conditional step: Monte Carlo jump test, then either a collapse or
/// the renormalized no-jump propagation. Returns the jump, if any.
pub fn conditional_step(
    state: &mut StateVector,
    generator: &Generator,
    noise: &NoiseModel,
    dt: f64,
    rng: &mut ChaCha8Rng,
    cfg: &TrajectoryConfig,
    occ_scratch: &mut [f64],
) -> Result<Option<(usize, JumpKind)>> {
    let n = state.n_sites();
    let dp_dep = dt * noise.gamma_dep / 2.0;
    let mut p_tot = n as f64 * dp_dep;
    let emissive = noise.gamma_emi > 0.0;
    if emissive {
        site_occupations(state, occ_scratch);
        for &o in occ_scratch.iter() {
            p_tot += dt * noise.gamma_emi * o;
        }
    }
    if p_tot >= cfg.p_tot_guard {
        return Err(Error::StepSizeViolation {
            p_tot,
            guard: cfg.p_tot_guard,
            gamma_dep: noise.gamma_dep,
            gamma_emi: noise.gamma_emi,
            dt,
        });
    }
    let r: f64 = rng.random();
    if p_tot > 0.0 && r < p_tot {
        // second test: pick the collapse channel by cumulative probability
        let s: f64 = rng.random::<f64>() * p_tot;
        let mut acc = 0.0;
        for site in 0..n {
            acc += dp_dep;
            if s < acc {
                apply_sigma_z(state, site);
                return Ok(Some((site, JumpKind::Dephasing)));
            }
        }
        if emissive {
            for (site, occ) in occ_scratch.iter().enumerate() {
                acc += dt * noise.gamma_emi * occ;
                if s < acc {
                    apply_sigma_minus(state, site)?;
                    return Ok(Some((site, JumpKind::Emission)));
                }
            }
        }
        // numerical edge: fall through to the last available channel
        if emissive {
            let site = n - 1;
            apply_sigma_minus(state, site)?;
            return Ok(Some((site, JumpKind::Emission)));
        }
        apply_sigma_z(state, n - 1);
        return Ok(Some((n - 1, JumpKind::Dephasing)));
    }
    // no-jump branch
    match cfg.backend {
        Backend::Dense => {
            if emissive {
                apply_generator(state, generator, dt)?;
                apply_decay_factors(state, noise, dt);
                state.normalize()?;
            } else {
                // dephasing decay is uniform: the normalized no-jump state
                // is exactly the coherent step
                apply_generator(state, generator, dt)?;
            }
        }
        Backend::Split => {
            let next = split_step(state, generator, noise, dt)?;
            *state = next;
            state.normalize()?;
        }
    }
    Ok(None)
}

/// Propagate one trajectory through a drive. Deterministic per stream.
pub fn run_trajectory(
    initial: &StateVector,
    drive: &Drive,
    noise: &NoiseModel,
    cfg: &TrajectoryConfig,
    stream: &RngStream,
) -> Result<StateVector> {
    run_trajectory_impl(initial, drive, noise, cfg, stream, None)
}

/// Same as `run_trajectory`, also recording collapse events.
pub fn run_trajectory_traced(
    initial: &StateVector,
    drive: &Drive,
    noise: &NoiseModel,
    cfg: &TrajectoryConfig,
    stream: &RngStream,
) -> Result<(StateVector, Vec<JumpEvent>)> {
    let mut events = Vec::new();
    let state = run_trajectory_impl(initial, drive, noise, cfg, stream, Some(&mut events))?;
    Ok((state, events))
}

fn run_trajectory_impl(
    initial: &StateVector,
    drive: &Drive,
    noise: &NoiseModel,
    cfg: &TrajectoryConfig,
    stream: &RngStream,
    mut events: Option<&mut Vec<JumpEvent>>,
) -> Result<StateVector> {
    cfg.validate()?;
    if initial.dim() != 1usize << drive.n_sites {
        return Err(Error::DimensionMismatch {
            expected: 1usize << drive.n_sites,
            got: initial.dim(),
        });
    }
    let mut state = initial.clone();
    let mut rng = stream.rng();
    let mut occ = vec![0.0f64; drive.n_sites];
    let mut clock = 0.0f64;
    for seg in drive.segments() {
        let steps = cfg.steps_per_gate.max(1);
        let dt = seg.duration / steps as f64;
        if dt == 0.0 {
            continue;
        }
        for _ in 0..steps {
            let jump = conditional_step(
                &mut state,
                &seg.generator,
                noise,
                dt,
                &mut rng,
                cfg,
                &mut occ,
            )?;
            clock += dt;
            if let (Some(events), Some((site, kind))) = (events.as_deref_mut(), jump) {
                events.push(JumpEvent {
                    time: clock,
                    site,
                    kind,
                });
            }
        }
        // guard against slow drift over long schedules
        if !state.is_normalized(1e-10) {
            state.normalize()?;
        }
    }
    Ok(state)
}

/// Trajectory-ensemble mean fidelity with provenance.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FidelityEstimate {
    pub mean: f64,
    /// Pooled per-trajectory standard error, sample std / sqrt(total).
    pub std_error: f64,
    pub n_traj: usize,
    pub n_initial_states: usize,
    /// True when the first-half mean is within two standard errors of the
    /// full mean (doubling the ensemble no longer moves the estimate).
    pub converged: bool,
    pub label: String,
    pub gamma_dep: f64,
    pub gamma_emi: f64,
    pub backend: Backend,
    pub total_time: f64,
}

/// Ensemble fidelity over explicit initial states: for each state the
/// noise-free reference is propagated once, then `cfg.n_traj` trajectories
/// per state are compared against it at the final time.
pub fn ensemble_fidelity(
    initials: &[StateVector],
    drive: &Drive,
    noise: &NoiseModel,
    cfg: &TrajectoryConfig,
) -> Result<FidelityEstimate> {
    cfg.validate()?;
    if initials.is_empty() {
        return Err(Error::InvalidConfig("no initial states".into()));
    }
    let refs: Vec<StateVector> = initials
        .iter()
        .map(|s| drive.apply_reference(s))
        .collect::<Result<Vec<_>>>()?;
    let n_traj = cfg.n_traj;
    let total = initials.len() * n_traj;
    let fids: Vec<f64> = (0..total)
        .into_par_iter()
        .map(|idx| -> Result<f64> {
            let state_idx = idx / n_traj;
            let stream = RngStream::new(cfg.seed, idx as u64);
            let fin = run_trajectory(&initials[state_idx], drive, noise, cfg, &stream)?;
            Ok(fin.inner(&refs[state_idx])?.norm_sqr())
        })
        .collect::<Result<Vec<_>>>()?;
    // deterministic reduction in trajectory order
    let mean = fids.iter().sum::<f64>() / total as f64;
    let var = if total > 1 {
        fids.iter().map(|f| (f - mean) * (f - mean)).sum::<f64>() / (total - 1) as f64
    } else {
        0.0
    };
    let std_error = (var / total as f64).sqrt();
    let half = total / 2;
    let converged = if half > 0 {
        let half_mean = fids[..half].iter().sum::<f64>() / half as f64;
        (mean - half_mean).abs() < 2.0 * std_error.max(f64::MIN_POSITIVE)
    } else {
        false
    };
    Ok(FidelityEstimate {
        mean,
        std_error,
        n_traj: total,
        n_initial_states: initials.len(),
        converged,
        label: drive.label.clone(),
        gamma_dep: noise.gamma_dep,
        gamma_emi: noise.gamma_emi,
        backend: cfg.backend,
        total_time: drive.total_time(),
    })
}

/// Ensemble fidelity over encoded initial states drawn from the logical
/// Bloch sphere. The state list is generated deterministically from
/// `cfg.seed` (stream indices above the trajectory range).
pub fn ensemble_fidelity_sampled(
    codec: &LogicalCodec,
    sampler: BlochSampler,
    n_states: usize,
    drive: &Drive,
    noise: &NoiseModel,
    cfg: &TrajectoryConfig,
) -> Result<FidelityEstimate> {
    let initials = sampled_initial_states(codec, sampler, n_states, cfg.seed)?;
    ensemble_fidelity(&initials, drive, noise, cfg)
}

/// Deterministic encoded Bloch-sample list for a seed.
pub fn sampled_initial_states(
    codec: &LogicalCodec,
    sampler: BlochSampler,
    n_states: usize,
    seed: u64,
) -> Result<Vec<StateVector>> {
    let mut rng = RngStream::new(seed, u64::MAX / 2).rng();
    (0..n_states)
        .map(|_| {
            let logical = sample_logical_bloch_state(codec.n_logical(), sampler, &mut rng);
            codec.encode(&logical)
        })
        .collect()
}

/// Bloch-averaged single-spin dephasing fidelity, (2 + e^{-gamma t}) / 3.
pub fn analytic_dephasing_fidelity(gamma: f64, t: f64) -> f64 {
    (2.0 + (-gamma * t).exp()) / 3.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates::{apply_schedule, CanonicalLibrary};
    use crate::hilbert::overlap_fidelity;
    use approx::assert_abs_diff_eq;

    fn plus_state() -> StateVector {
        StateVector::from_amplitudes(vec![
            cr(std::f64::consts::FRAC_1_SQRT_2),
            cr(std::f64::consts::FRAC_1_SQRT_2),
        ])
        .unwrap()
    }

    #[test]
    fn noiseless_step_leaves_state_unchanged() {
        let mut s = plus_state();
        let noise = NoiseModel::noiseless();
        let cfg = TrajectoryConfig::default();
        let mut rng = RngStream::new(1, 0).rng();
        let mut occ = vec![0.0; 1];
        let before = s.clone();
        conditional_step(
            &mut s,
            &Generator::Idle,
            &noise,
            0.1,
            &mut rng,
            &cfg,
            &mut occ,
        )
        .unwrap();
        assert_eq!(s, before);
    }

    #[test]
    fn noiseless_pulse_step_matches_exchange_unitary() {
        let mut s = StateVector::basis(2, 0b01);
        let noise = NoiseModel::noiseless();
        let cfg = TrajectoryConfig::default();
        let mut rng = RngStream::new(1, 0).rng();
        let mut occ = vec![0.0; 2];
        let dt = 0.37;
        conditional_step(
            &mut s,
            &Generator::Exchange { i: 0, j: 1 },
            &noise,
            dt,
            &mut rng,
            &cfg,
            &mut occ,
        )
        .unwrap();
        let mut direct = StateVector::basis(2, 0b01);
        crate::gates::apply_exchange(&mut direct, 0, 1, dt).unwrap();
        for (a, b) in s.amplitudes().iter().zip(direct.amplitudes()) {
            assert_abs_diff_eq!((a - b).norm(), 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn forced_dephasing_jump_flips_phase() {
        // gamma and dt chosen so P_tot is just under the guard; stream
        // picked so the first draw forces a jump
        let noise = NoiseModel::dephasing(1.0).unwrap();
        let cfg = TrajectoryConfig {
            steps_per_gate: 1,
            ..Default::default()
        };
        let mut occ = vec![0.0; 1];
        // find a stream whose first uniform draw is tiny
        let mut chosen = None;
        for stream in 0..200u64 {
            let mut rng = RngStream::new(3, stream).rng();
            if rng.random::<f64>() < 0.04 {
                chosen = Some(stream);
                break;
            }
        }
        let stream = chosen.expect("some stream draws small");
        let mut rng = RngStream::new(3, stream).rng();
        let mut s = plus_state();
        let jump = conditional_step(
            &mut s,
            &Generator::Idle,
            &noise,
            0.08,
            &mut rng,
            &cfg,
            &mut occ,
        )
        .unwrap();
        assert_eq!(jump, Some((0, JumpKind::Dephasing)));
        // |+> -> |->
        assert_abs_diff_eq!(
            s.amplitudes()[0].re,
            std::f64::consts::FRAC_1_SQRT_2,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            s.amplitudes()[1].re,
            -std::f64::consts::FRAC_1_SQRT_2,
            epsilon = 1e-12
        );
    }

    #[test]
    fn step_size_guard_fires() {
        let noise = NoiseModel::dephasing(10.0).unwrap();
        let cfg = TrajectoryConfig::default();
        let mut rng = RngStream::new(1, 0).rng();
        let mut occ = vec![0.0; 1];
        let mut s = plus_state();
        let out = conditional_step(
            &mut s,
            &Generator::Idle,
            &noise,
            0.1,
            &mut rng,
            &cfg,
            &mut occ,
        );
        assert!(matches!(out, Err(Error::StepSizeViolation { .. })));
    }

    #[test]
    fn emission_jump_lowers_excited_site() {
        let noise = NoiseModel::emission(1.0).unwrap();
        let cfg = TrajectoryConfig {
            steps_per_gate: 1,
            ..Default::default()
        };
        let mut occ = vec![0.0; 1];
        let mut chosen = None;
        for stream in 0..400u64 {
            let mut rng = RngStream::new(7, stream).rng();
            if rng.random::<f64>() < 0.03 {
                chosen = Some(stream);
                break;
            }
        }
        let mut rng = RngStream::new(7, chosen.unwrap()).rng();
        let mut s = StateVector::basis(1, 1);
        let jump = conditional_step(
            &mut s,
            &Generator::Idle,
            &noise,
            0.05,
            &mut rng,
            &cfg,
            &mut occ,
        )
        .unwrap();
        assert_eq!(jump, Some((0, JumpKind::Emission)));
        assert_abs_diff_eq!(s.amplitudes()[0].norm(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn trajectories_are_reproducible_per_stream() {
        let lib = CanonicalLibrary::load();
        let drive = Drive::from_schedule(lib.cnot30()).unwrap();
        let codec = LogicalCodec::new(2);
        let init = codec.codeword(2);
        let noise = NoiseModel::dephasing(1e-2).unwrap();
        let cfg = TrajectoryConfig::default();
        let a = run_trajectory(&init, &drive, &noise, &cfg, &RngStream::new(42, 7)).unwrap();
        let b = run_trajectory(&init, &drive, &noise, &cfg, &RngStream::new(42, 7)).unwrap();
        assert_eq!(a, b);
        let c = run_trajectory(&init, &drive, &noise, &cfg, &RngStream::new(42, 8)).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn noise_free_trajectory_matches_schedule_application() {
        let lib = CanonicalLibrary::load();
        let drive = Drive::from_schedule(lib.cnot30()).unwrap();
        let codec = LogicalCodec::new(2);
        let init = codec.codeword(1);
        let cfg = TrajectoryConfig::default();
        let out = run_trajectory(
            &init,
            &drive,
            &NoiseModel::noiseless(),
            &cfg,
            &RngStream::new(0, 0),
        )
        .unwrap();
        let direct = apply_schedule(&init, lib.cnot30()).unwrap();
        assert!(overlap_fidelity(&out, &direct).unwrap() > 1.0 - 1e-6);
    }

    #[test]
    fn split_and_dense_steps_agree_on_one_step() {
        let noise = NoiseModel::new(1e-2, 1e-3).unwrap();
        let mut amps = Vec::new();
        let dim = 1 << 9;
        let mut x = 0.123f64;
        for _ in 0..dim {
            x = (x * 9301.0 + 49297.0).rem_euclid(233280.0) / 233280.0;
            let y = (x * 6733.0 + 211.0).rem_euclid(233280.0) / 233280.0;
            amps.push(Complex64::new(x - 0.5, y - 0.5));
        }
        let mut s = StateVector::from_amplitudes(amps).unwrap();
        s.normalize().unwrap();
        let generator = Generator::Exchange { i: 4, j: 5 };
        let a = dense_step(&s, &generator, &noise, 1e-3).unwrap();
        let b = split_step(&s, &generator, &noise, 1e-3).unwrap();
        let diff: f64 = a
            .amplitudes()
            .iter()
            .zip(b.amplitudes())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max);
        assert!(diff < 1e-8, "split/dense deviation {diff}");
    }

    #[test]
    fn bare_cnot_block_applies_cnot_at_full_duration() {
        let drive = Drive::bare_cnot(27.6);
        // |10> (control set) -> |11>
        let init = StateVector::basis(2, 0b01);
        let out = drive.apply_reference(&init).unwrap();
        assert_abs_diff_eq!(out.amplitudes()[0b11].norm(), 1.0, epsilon = 1e-10);
        // |00> untouched
        let out0 = drive.apply_reference(&StateVector::basis(2, 0)).unwrap();
        assert_abs_diff_eq!(out0.amplitudes()[0].norm(), 1.0, epsilon = 1e-10);
    }

    #[test]
    fn zero_noise_ensemble_fidelity_is_exactly_one() {
        let lib = CanonicalLibrary::load();
        let drive = Drive::from_schedule(lib.core19()).unwrap();
        let codec = LogicalCodec::new(2);
        let cfg = TrajectoryConfig {
            n_traj: 4,
            ..Default::default()
        };
        let est = ensemble_fidelity_sampled(
            &codec,
            BlochSampler::SurfaceUniform,
            3,
            &drive,
            &NoiseModel::noiseless(),
            &cfg,
        )
        .unwrap();
        assert_abs_diff_eq!(est.mean, 1.0, epsilon = 1e-12);
        assert_eq!(est.n_traj, 12);
        assert_eq!(est.n_initial_states, 3);
    }

    #[test]
    fn single_spin_coherence_decays_at_the_calibrated_rate() {
        // gamma t = 1: |rho01| should fall to e^{-1} of its initial value
        let noise = NoiseModel::dephasing(0.5).unwrap();
        let drive = Drive::idle(1, 2.0);
        let cfg = TrajectoryConfig {
            steps_per_gate: 100,
            n_traj: 10_000,
            seed: 11,
            ..Default::default()
        };
        let init = plus_state();
        let mut rho01 = 0.0;
        for k in 0..cfg.n_traj {
            let fin = run_trajectory(
                &init,
                &drive,
                &noise,
                &cfg,
                &RngStream::new(cfg.seed, k as u64),
            )
            .unwrap();
            rho01 += (fin.amplitudes()[0].conj() * fin.amplitudes()[1]).re;
        }
        rho01 /= cfg.n_traj as f64;
        let expected = 0.5 * (-1.0f64).exp();
        // binomial-scale error, 3 sigma
        let sigma = 0.5 / (cfg.n_traj as f64).sqrt() * 3.0;
        assert!(
            (rho01 - expected).abs() < sigma.max(0.006),
            "rho01 = {rho01}, expected {expected}"
        );
    }

    #[test]
    fn analytic_dephasing_fidelity_limits() {
        assert_eq!(analytic_dephasing_fidelity(1.0, 0.0), 1.0);
        assert!((analytic_dephasing_fidelity(1.0, 1e9) - 2.0 / 3.0).abs() < 1e-12);
        let f = analytic_dephasing_fidelity(1.0, 3.0f64.ln());
        assert_abs_diff_eq!(f, 7.0 / 9.0, epsilon = 1e-12);
    }

    #[test]
    fn emission_population_decays_exponentially() {
        let noise = NoiseModel::emission(0.5).unwrap();
        let drive = Drive::idle(1, 2.0);
        let cfg = TrajectoryConfig {
            steps_per_gate: 100,
            n_traj: 4000,
            seed: 5,
            ..Default::default()
        };
        let init = StateVector::basis(1, 1);
        let mut pop = 0.0;
        for k in 0..cfg.n_traj {
            let fin = run_trajectory(
                &init,
                &drive,
                &noise,
                &cfg,
                &RngStream::new(cfg.seed, k as u64),
            )
            .unwrap();
            pop += fin.amplitudes()[1].norm_sqr();
        }
        pop /= cfg.n_traj as f64;
        let expected = (-1.0f64).exp();
        assert!(
            (pop - expected).abs() < 0.03,
            "excited population {pop}, expected {expected}"
        );
    }
}
