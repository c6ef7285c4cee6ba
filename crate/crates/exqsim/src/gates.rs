// Copyright 2026 the exqsim developers
// SPDX-License-Identifier: Apache-2.0

//! Exchange pulse algebra: closed-form two-spin exchange unitaries,
//! schedule composition and merging, SWAP-conjugation lifting for
//! non-adjacent pairs, and the canonical gate-time tables.
//!
//! The exchange operator E_ij swaps the spin labels of sites i and j and
//! satisfies E^2 = I, so a pulse of duration t (in units of 2 hbar / J0)
//! applies U(t) = exp(+i t E_ij) = cos(t) I + i sin(t) E_ij. Gate times
//! are physically periodic modulo pi up to a global sign.

use crate::error::{Error, Result};
use crate::hilbert::{LogicalCodec, StateVector};
use crate::linalg::{cr, CMat, I, ONE};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Pulse times this close to 0 (mod pi) are dropped when merging.
const MERGE_EPS: f64 = 1e-9;

/// One exchange pulse: a pair of sites and a duration.
///
/// Durations are kept as given (some canonical table entries exceed pi and
/// the excess matters for decoherence exposure); `normalized_time` gives
/// the mod-pi representative that determines the unitary up to sign.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExchangePulse {
    pub i: usize,
    pub j: usize,
    pub t: f64,
}

impl ExchangePulse {
    pub fn new(i: usize, j: usize, t: f64) -> Result<Self> {
        if i == j {
            return Err(Error::DegeneratePair { i, j });
        }
        if t < 0.0 || !t.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "pulse duration must be finite and non-negative, got {t}"
            )));
        }
        Ok(ExchangePulse { i, j, t })
    }

    pub fn is_adjacent(&self) -> bool {
        self.i.abs_diff(self.j) == 1
    }

    pub fn sites(&self) -> (usize, usize) {
        (self.i.min(self.j), self.i.max(self.j))
    }

    pub fn shares_site_with(&self, other: &ExchangePulse) -> bool {
        self.i == other.i || self.i == other.j || self.j == other.i || self.j == other.j
    }

    /// Duration reduced to [0, pi).
    pub fn normalized_time(&self) -> f64 {
        self.t.rem_euclid(PI)
    }
}

/// Apply exp(+i t E_ij) to a state in place. Works for any site pair.
pub fn apply_exchange(state: &mut StateVector, i: usize, j: usize, t: f64) -> Result<()> {
    let n = state.n_sites();
    if i >= n {
        return Err(Error::SiteOutOfRange {
            site: i,
            n_sites: n,
        });
    }
    if j >= n {
        return Err(Error::SiteOutOfRange {
            site: j,
            n_sites: n,
        });
    }
    if i == j {
        return Err(Error::DegeneratePair { i, j });
    }
    let (c, s) = (t.cos(), t.sin());
    let phase = Complex64::from_polar(1.0, t);
    let is = Complex64::new(0.0, s);
    let mi = 1usize << i;
    let mj = 1usize << j;
    let mask = mi | mj;
    let amps = state.amplitudes_mut();
    for k in 0..amps.len() {
        let bi = k & mi != 0;
        let bj = k & mj != 0;
        if bi == bj {
            amps[k] *= phase;
        } else if bi {
            // handle each (10, 01) pair once, from its bi=1 member
            let p = k ^ mask;
            let (a, b) = (amps[k], amps[p]);
            amps[k] = cr(c) * a + is * b;
            amps[p] = cr(c) * b + is * a;
        }
    }
    Ok(())
}

/// Dense matrix of the exchange operator E_ij on n sites (test oracle and
/// small-block construction; the simulator path never builds it).
pub fn exchange_operator_dense(n: usize, i: usize, j: usize) -> CMat {
    let dim = 1usize << n;
    let mut m = CMat::zeros(dim, dim);
    let mi = 1usize << i;
    let mj = 1usize << j;
    for k in 0..dim {
        if (k & mi != 0) == (k & mj != 0) {
            m[(k, k)] = ONE;
        } else {
            m[(k ^ (mi | mj), k)] = ONE;
        }
    }
    m
}

/// Dense exp(+i t E_ij) via the closed form cos(t) I + i sin(t) E.
pub fn exchange_unitary_dense(n: usize, i: usize, j: usize, t: f64) -> CMat {
    let e = exchange_operator_dense(n, i, j);
    let dim = 1usize << n;
    CMat::identity(dim)
        .scale(cr(t.cos()))
        .add(&e.scale(I * cr(t.sin())))
}

/// An ordered list of exchange pulses on a chain.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExchangeSchedule {
    pub n_sites: usize,
    pub label: Option<String>,
    pulses: Vec<ExchangePulse>,
}

impl ExchangeSchedule {
    pub fn empty(n_sites: usize) -> Self {
        ExchangeSchedule {
            n_sites,
            label: None,
            pulses: Vec::new(),
        }
    }

    pub fn from_pulses(n_sites: usize, pulses: Vec<ExchangePulse>) -> Result<Self> {
        for p in &pulses {
            if p.i >= n_sites || p.j >= n_sites {
                return Err(Error::SiteOutOfRange {
                    site: p.i.max(p.j),
                    n_sites,
                });
            }
        }
        Ok(ExchangeSchedule {
            n_sites,
            label: None,
            pulses,
        })
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn pulses(&self) -> &[ExchangePulse] {
        &self.pulses
    }

    pub fn len(&self) -> usize {
        self.pulses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pulses.is_empty()
    }

    /// Sum of pulse durations.
    pub fn total_time(&self) -> f64 {
        self.pulses.iter().map(|p| p.t).sum()
    }

    pub fn is_executable(&self) -> bool {
        self.pulses.iter().all(ExchangePulse::is_adjacent)
    }

    /// Append a pulse without merging.
    pub fn push(&mut self, pulse: ExchangePulse) {
        self.pulses.push(pulse);
    }

    /// Append a pulse, combining it (mod pi) with the most recent pulse on
    /// the same pair when every pulse in between acts on disjoint sites.
    /// Pulses that reduce to 0 mod pi vanish (their unitary is a global
    /// sign).
    pub fn push_merged(&mut self, pulse: ExchangePulse) {
        let mut target: Option<usize> = None;
        for idx in (0..self.pulses.len()).rev() {
            let prev = &self.pulses[idx];
            if prev.sites() == pulse.sites() {
                target = Some(idx);
                break;
            }
            if prev.shares_site_with(&pulse) {
                break;
            }
        }
        match target {
            Some(idx) => {
                let t = (self.pulses[idx].t + pulse.t).rem_euclid(PI);
                if t < MERGE_EPS || PI - t < MERGE_EPS {
                    self.pulses.remove(idx);
                } else {
                    self.pulses[idx].t = t;
                }
            }
            None => {
                let t = pulse.t.rem_euclid(PI);
                if t >= MERGE_EPS && PI - t >= MERGE_EPS {
                    self.pulses.push(ExchangePulse { t, ..pulse });
                }
            }
        }
    }

    /// Plain concatenation.
    pub fn concat(&self, other: &ExchangeSchedule) -> Result<ExchangeSchedule> {
        if self.n_sites != other.n_sites {
            return Err(Error::DimensionMismatch {
                expected: self.n_sites,
                got: other.n_sites,
            });
        }
        let mut out = self.clone();
        out.label = None;
        out.pulses.extend_from_slice(&other.pulses);
        Ok(out)
    }

    /// Concatenation with same-pair merging applied across the whole result.
    pub fn concat_merged(&self, other: &ExchangeSchedule) -> Result<ExchangeSchedule> {
        if self.n_sites != other.n_sites {
            return Err(Error::DimensionMismatch {
                expected: self.n_sites,
                got: other.n_sites,
            });
        }
        let mut out = ExchangeSchedule::empty(self.n_sites);
        for p in self.pulses.iter().chain(other.pulses.iter()) {
            out.push_merged(*p);
        }
        Ok(out)
    }

    /// The schedule with pulse order reversed (inverse order, not inverse
    /// gate).
    pub fn reversed(&self) -> ExchangeSchedule {
        let mut out = self.clone();
        out.pulses.reverse();
        out
    }

    /// Translate every pulse by `offset` sites on a chain of `n_sites`.
    pub fn shifted(&self, offset: usize, n_sites: usize) -> Result<ExchangeSchedule> {
        let pulses = self
            .pulses
            .iter()
            .map(|p| ExchangePulse {
                i: p.i + offset,
                j: p.j + offset,
                t: p.t,
            })
            .collect();
        let mut s = ExchangeSchedule::from_pulses(n_sites, pulses)?;
        s.label = self.label.clone();
        Ok(s)
    }

    /// The inverse schedule: reversed order with each time negated mod pi.
    pub fn inverse(&self) -> ExchangeSchedule {
        let pulses = self
            .pulses
            .iter()
            .rev()
            .map(|p| ExchangePulse {
                i: p.i,
                j: p.j,
                t: (-p.t).rem_euclid(PI),
            })
            .collect();
        ExchangeSchedule {
            n_sites: self.n_sites,
            label: None,
            pulses,
        }
    }
}

/// Apply a schedule pulse by pulse, left to right. Only nearest-neighbour
/// pulses are executable.
pub fn apply_schedule(state: &StateVector, schedule: &ExchangeSchedule) -> Result<StateVector> {
    if state.dim() != 1usize << schedule.n_sites {
        return Err(Error::DimensionMismatch {
            expected: 1usize << schedule.n_sites,
            got: state.dim(),
        });
    }
    let mut out = state.clone();
    for p in &schedule.pulses {
        if !p.is_adjacent() {
            return Err(Error::NonAdjacentPulse { i: p.i, j: p.j });
        }
        apply_exchange(&mut out, p.i, p.j, p.t)?;
    }
    Ok(out)
}

/// Full 2^N x 2^N unitary of a schedule, built column by column.
/// Adjacency is not required here; this is the dense-composition oracle.
pub fn schedule_unitary_dense(schedule: &ExchangeSchedule) -> CMat {
    let dim = 1usize << schedule.n_sites;
    let mut cols = Vec::with_capacity(dim);
    for k in 0..dim {
        let mut s = StateVector::basis(schedule.n_sites, k);
        for p in &schedule.pulses {
            apply_exchange(&mut s, p.i, p.j, p.t).expect("valid pulse");
        }
        cols.push(s.amplitudes().to_vec());
    }
    CMat::from_cols(&cols)
}

/// The schedule's action restricted to the encoded subspace: W^H U W as a
/// 2^n x 2^n matrix.
pub fn schedule_logical_block(schedule: &ExchangeSchedule, codec: &LogicalCodec) -> CMat {
    assert_eq!(codec.n_physical(), schedule.n_sites);
    let dim = codec.logical_dim();
    let mut cols = Vec::with_capacity(dim);
    for l in 0..dim {
        let mut s = codec.codeword(l);
        for p in &schedule.pulses {
            apply_exchange(&mut s, p.i, p.j, p.t).expect("valid pulse");
        }
        cols.push(codec.decode(&s).expect("dims match"));
    }
    CMat::from_cols(&cols)
}

/// Total time of a schedule (free function mirroring the library surface).
pub fn schedule_total_time(schedule: &ExchangeSchedule) -> f64 {
    schedule.total_time()
}

/// Rewrite a pulse on an arbitrary pair (i, j) as nearest-neighbour pulses
/// by conjugating with chains of SWAPs (pi/2 exchange pulses). The result
/// equals exp(i t E_ij) up to a global sign. Adjacent input passes through.
pub fn lift_nonadjacent(pulse: &ExchangePulse, n_sites: usize) -> Result<ExchangeSchedule> {
    if pulse.i >= n_sites || pulse.j >= n_sites {
        return Err(Error::SiteOutOfRange {
            site: pulse.i.max(pulse.j),
            n_sites,
        });
    }
    let (lo, hi) = pulse.sites();
    let mut sched = ExchangeSchedule::empty(n_sites);
    if hi - lo == 1 {
        sched.push(*pulse);
        return Ok(sched);
    }
    // Bubble site `hi` down next to `lo` with SWAPs, pulse on (lo, lo+1),
    // then undo the SWAPs.
    let swap = PI / 2.0;
    let chain: Vec<(usize, usize)> = (lo + 1..hi).rev().map(|k| (k, k + 1)).collect();
    for &(a, b) in &chain {
        sched.push(ExchangePulse {
            i: a,
            j: b,
            t: swap,
        });
    }
    sched.push(ExchangePulse {
        i: lo,
        j: lo + 1,
        t: pulse.t,
    });
    for &(a, b) in chain.iter().rev() {
        sched.push(ExchangePulse {
            i: a,
            j: b,
            t: swap,
        });
    }
    Ok(sched)
}

/// Nearest-neighbour SWAP network exchanging two three-site blocks
/// (sites `3a..3a+2` and `3b..3b+2` with b = a + 1): nine pi/2 pulses.
pub fn block_swap(a: usize, n_sites: usize) -> Result<ExchangeSchedule> {
    let base = 3 * a;
    if base + 5 >= n_sites {
        return Err(Error::SiteOutOfRange {
            site: base + 5,
            n_sites,
        });
    }
    let swap = PI / 2.0;
    let order = [
        (base + 2, base + 3),
        (base + 1, base + 2),
        (base, base + 1),
        (base + 3, base + 4),
        (base + 2, base + 3),
        (base + 1, base + 2),
        (base + 4, base + 5),
        (base + 3, base + 4),
        (base + 2, base + 3),
    ];
    let pulses = order
        .iter()
        .map(|&(i, j)| ExchangePulse { i, j, t: swap })
        .collect();
    ExchangeSchedule::from_pulses(n_sites, pulses)
}

// ---------------------------------------------------------------------------
// Canonical gate-time tables and the single-logical-qubit gate library.
// ---------------------------------------------------------------------------

/// Closed-form single-qubit gate times (within-block pulses, application
/// order). The within-block pairs are (b, b+1) and (b+1, b+2) for a block
/// starting at site b.
pub mod gate_times {
    use std::f64::consts::PI;

    /// Hadamard: E12(t), E23(s), E12(t) with t = pi - atan(sqrt 2)/2.
    pub fn hadamard() -> [f64; 3] {
        let t = PI - (2.0f64).sqrt().atan() / 2.0;
        let s = (2.0f64 / 3.0).sqrt().asin();
        [t, s, t]
    }

    /// NOT: E23(t), E12(s), E23(t) with t = atan(sqrt 2), s = asin(1/sqrt 3).
    pub fn not() -> [f64; 3] {
        let t = (2.0f64).sqrt().atan();
        let s = (1.0 / 3.0f64.sqrt()).asin();
        [t, s, t]
    }

    /// The 60-degree y-rotation S diagonalizing the 19-pulse core:
    /// E12(t1), E23(t2), E12(t3).
    pub fn s_rotation() -> [f64; 3] {
        let a = (1.0f64 / 3.0).asin() / 2.0;
        let t2 = (1.0 / 3.0f64.sqrt()).asin();
        [a + PI / 4.0, t2, (a - PI / 4.0).rem_euclid(PI)]
    }

    /// T gate (pi/8 z-rotation): a single E12 pulse.
    pub fn t_gate() -> f64 {
        PI / 8.0
    }
}

/// Which within-block generator a pulse uses.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum BlockAxis {
    /// First pair of the block: acts as -sigma_z on the encoded qubit.
    E12,
    /// Second pair: acts as (sqrt(3)/2) sigma_x + (1/2) sigma_z.
    E23,
}

/// Pulses of a named single-qubit gate on logical qubit `q` of an
/// `n_sites` chain, in application order.
pub fn single_qubit_gate(
    axis_pattern: &[BlockAxis],
    times: &[f64],
    q: usize,
    n_sites: usize,
) -> Result<ExchangeSchedule> {
    assert_eq!(axis_pattern.len(), times.len());
    let base = 3 * q;
    if base + 2 >= n_sites {
        return Err(Error::SiteOutOfRange {
            site: base + 2,
            n_sites,
        });
    }
    let pulses = axis_pattern
        .iter()
        .zip(times)
        .map(|(axis, &t)| match axis {
            BlockAxis::E12 => ExchangePulse {
                i: base,
                j: base + 1,
                t,
            },
            BlockAxis::E23 => ExchangePulse {
                i: base + 1,
                j: base + 2,
                t,
            },
        })
        .collect();
    ExchangeSchedule::from_pulses(n_sites, pulses)
}

/// Serialized schedule file: `{n_physical, label, pulses: [{pair, t}]}`
/// with pulses in application order and zero-based site indices.
#[derive(Serialize, Deserialize)]
struct ScheduleFile {
    n_physical: usize,
    label: String,
    pulses: Vec<PulseEntry>,
}

#[derive(Serialize, Deserialize)]
struct PulseEntry {
    pair: [usize; 2],
    t: f64,
}

pub fn schedule_to_json(schedule: &ExchangeSchedule) -> String {
    let file = ScheduleFile {
        n_physical: schedule.n_sites,
        label: schedule.label.clone().unwrap_or_default(),
        pulses: schedule
            .pulses
            .iter()
            .map(|p| PulseEntry {
                pair: [p.i, p.j],
                t: p.t,
            })
            .collect(),
    };
    serde_json::to_string_pretty(&file).expect("schedule serializes")
}

pub fn schedule_from_json(text: &str) -> Result<ExchangeSchedule> {
    let file: ScheduleFile = serde_json::from_str(text)?;
    let pulses = file
        .pulses
        .iter()
        .map(|e| ExchangePulse::new(e.pair[0], e.pair[1], e.t))
        .collect::<Result<Vec<_>>>()?;
    let mut s = ExchangeSchedule::from_pulses(file.n_physical, pulses)?;
    if !file.label.is_empty() {
        s.label = Some(file.label);
    }
    Ok(s)
}

/// The canonical schedules shipped with the crate. Times are stored with
/// the six published decimals; pulse order in the data files is
/// application order.
pub struct CanonicalLibrary {
    core19: ExchangeSchedule,
    cnot30: ExchangeSchedule,
    cnot35: ExchangeSchedule,
    sandwich31: ExchangeSchedule,
}

const CORE19_JSON: &str = include_str!("../data/core19.json");
const CNOT30_JSON: &str = include_str!("../data/cnot30.json");
const CNOT35_JSON: &str = include_str!("../data/cnot35.json");
const SANDWICH31_JSON: &str = include_str!("../data/sandwich31.json");

impl CanonicalLibrary {
    pub fn load() -> Self {
        CanonicalLibrary {
            core19: schedule_from_json(CORE19_JSON).expect("embedded core19"),
            cnot30: schedule_from_json(CNOT30_JSON).expect("embedded cnot30"),
            cnot35: schedule_from_json(CNOT35_JSON).expect("embedded cnot35"),
            sandwich31: schedule_from_json(SANDWICH31_JSON).expect("embedded sandwich31"),
        }
    }

    /// The 19-pulse two-qubit core, locally equivalent to CNOT.
    pub fn core19(&self) -> &ExchangeSchedule {
        &self.core19
    }

    /// 30-pulse exact CNOT (analytic local corrections).
    pub fn cnot30(&self) -> &ExchangeSchedule {
        &self.cnot30
    }

    /// 35-pulse exact CNOT (numerically optimized local corrections).
    pub fn cnot35(&self) -> &ExchangeSchedule {
        &self.cnot35
    }

    /// 31-pulse merged Hadamard-CNOT-Hadamard compound (reversed CNOT).
    pub fn sandwich31(&self) -> &ExchangeSchedule {
        &self.sandwich31
    }

    pub fn hadamard(&self, q: usize, n_sites: usize) -> Result<ExchangeSchedule> {
        use BlockAxis::*;
        single_qubit_gate(&[E12, E23, E12], &gate_times::hadamard(), q, n_sites)
    }

    pub fn not(&self, q: usize, n_sites: usize) -> Result<ExchangeSchedule> {
        use BlockAxis::*;
        single_qubit_gate(&[E23, E12, E23], &gate_times::not(), q, n_sites)
    }

    pub fn t_gate(&self, q: usize, n_sites: usize) -> Result<ExchangeSchedule> {
        single_qubit_gate(&[BlockAxis::E12], &[gate_times::t_gate()], q, n_sites)
    }

    pub fn s_rotation(&self, q: usize, n_sites: usize) -> Result<ExchangeSchedule> {
        use BlockAxis::*;
        single_qubit_gate(&[E12, E23, E12], &gate_times::s_rotation(), q, n_sites)
    }
}

impl Default for CanonicalLibrary {
    fn default() -> Self {
        Self::load()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{C64, ONE};
    use approx::assert_abs_diff_eq;

    #[test]
    fn zero_time_is_identity() {
        let mut s = StateVector::basis(2, 0b01);
        apply_exchange(&mut s, 0, 1, 0.0).unwrap();
        assert_eq!(s.amplitudes()[0b01], ONE);
    }

    #[test]
    fn half_pi_pulse_is_swap_up_to_phase() {
        // compare column by column against the dense SWAP permutation
        let u = exchange_unitary_dense(2, 0, 1, PI / 2.0);
        let mut swap = CMat::zeros(4, 4);
        swap[(0, 0)] = ONE;
        swap[(2, 1)] = ONE;
        swap[(1, 2)] = ONE;
        swap[(3, 3)] = ONE;
        for col in 0..4 {
            let overlap: C64 = (0..4).map(|r| swap[(r, col)].conj() * u[(r, col)]).sum();
            assert_abs_diff_eq!(overlap.norm(), 1.0, epsilon = 1e-12);
        }
        // basis exchange with explicit bits
        let mut s = StateVector::basis(2, 0b01);
        apply_exchange(&mut s, 0, 1, PI / 2.0).unwrap();
        assert_abs_diff_eq!(s.amplitudes()[0b10].norm(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn closed_form_matches_dense_series_exponential() {
        // independent oracle: sum the Taylor series of exp(i t E)
        let n = 3;
        let t = 0.8123;
        let e = exchange_operator_dense(n, 0, 2);
        let dim = 1 << n;
        let mut series = CMat::identity(dim);
        let mut term = CMat::identity(dim);
        for k in 1..40 {
            term = term.mul(&e).scale(I * cr(t / k as f64));
            series = series.add(&term);
        }
        let closed = exchange_unitary_dense(n, 0, 2, t);
        assert!(closed.max_abs_diff(&series) < 1e-13);
    }

    #[test]
    fn schedule_application_and_total_time() {
        let sched = ExchangeSchedule::from_pulses(
            3,
            vec![
                ExchangePulse::new(0, 1, 0.3).unwrap(),
                ExchangePulse::new(1, 2, 0.4).unwrap(),
            ],
        )
        .unwrap();
        assert_abs_diff_eq!(sched.total_time(), 0.7, epsilon = 1e-15);
        let s = StateVector::basis(3, 0b001);
        let out = apply_schedule(&s, &sched).unwrap();
        assert_abs_diff_eq!(out.norm(), 1.0, epsilon = 1e-12);
        let empty = ExchangeSchedule::empty(3);
        assert_eq!(apply_schedule(&s, &empty).unwrap(), s);
    }

    #[test]
    fn non_adjacent_pulse_rejected_in_executable_context() {
        let sched =
            ExchangeSchedule::from_pulses(3, vec![ExchangePulse::new(0, 2, 0.3).unwrap()]).unwrap();
        let s = StateVector::basis(3, 0);
        assert!(matches!(
            apply_schedule(&s, &sched),
            Err(Error::NonAdjacentPulse { .. })
        ));
    }

    #[test]
    fn lift_matches_dense_exponential_up_to_phase() {
        for n in 3..=5 {
            for i in 0..n {
                for j in (i + 2)..n {
                    let t = 0.7431;
                    let pulse = ExchangePulse::new(i, j, t).unwrap();
                    let lifted = lift_nonadjacent(&pulse, n).unwrap();
                    assert!(lifted.is_executable());
                    let udir = exchange_unitary_dense(n, i, j, t);
                    let ulift = schedule_unitary_dense(&lifted);
                    let aligned = ulift.phase_aligned_to(&udir);
                    assert!(
                        aligned.max_abs_diff(&udir) < 1e-10,
                        "pair ({i},{j}) on {n} sites"
                    );
                }
            }
        }
    }

    #[test]
    fn lift_of_adjacent_is_identity_transform() {
        let pulse = ExchangePulse::new(2, 3, 1.1).unwrap();
        let lifted = lift_nonadjacent(&pulse, 5).unwrap();
        assert_eq!(lifted.len(), 1);
        assert_eq!(lifted.pulses()[0], pulse);
    }

    #[test]
    fn merge_rule_combines_across_disjoint_pulses() {
        let mut s = ExchangeSchedule::empty(6);
        s.push_merged(ExchangePulse::new(3, 4, 1.0).unwrap());
        s.push_merged(ExchangePulse::new(0, 1, 0.5).unwrap());
        // (0,1) is disjoint from (3,4): merge reaches past it
        s.push_merged(ExchangePulse::new(3, 4, 0.7).unwrap());
        assert_eq!(s.len(), 2);
        assert_abs_diff_eq!(s.pulses()[0].t, 1.7, epsilon = 1e-12);
        // a shared site blocks merging
        s.push_merged(ExchangePulse::new(4, 5, 0.2).unwrap());
        s.push_merged(ExchangePulse::new(3, 4, 0.3).unwrap());
        assert_eq!(s.len(), 4);
    }

    #[test]
    fn merge_drops_pulses_cancelling_mod_pi() {
        let mut s = ExchangeSchedule::empty(2);
        s.push_merged(ExchangePulse::new(0, 1, 1.0).unwrap());
        s.push_merged(ExchangePulse::new(0, 1, PI - 1.0).unwrap());
        assert!(s.is_empty());
    }

    #[test]
    fn canonical_tables_load_with_expected_shapes() {
        let lib = CanonicalLibrary::load();
        assert_eq!(lib.core19().len(), 19);
        assert_eq!(lib.cnot30().len(), 30);
        assert_eq!(lib.cnot35().len(), 35);
        assert_eq!(lib.sandwich31().len(), 31);
        for s in [lib.core19(), lib.cnot30(), lib.cnot35(), lib.sandwich31()] {
            assert!(s.is_executable());
            assert_eq!(s.n_sites, 6);
        }
    }

    #[test]
    fn schedule_json_round_trip() {
        let lib = CanonicalLibrary::load();
        let text = schedule_to_json(lib.cnot30());
        let back = schedule_from_json(&text).unwrap();
        assert_eq!(&back, lib.cnot30());
    }

    #[test]
    fn block_swap_permutes_blocks() {
        let sched = block_swap(0, 6).unwrap();
        assert_eq!(sched.len(), 9);
        // |100 000> -> |000 100>  (site 0 set -> site 3 set)
        let s = StateVector::basis(6, 1);
        let out = apply_schedule(&s, &sched).unwrap();
        assert_abs_diff_eq!(out.amplitudes()[1 << 3].norm(), 1.0, epsilon = 1e-12);
    }
}
