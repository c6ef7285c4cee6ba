// Copyright 2026 the exqsim developers
// SPDX-License-Identifier: Apache-2.0

//! Numeric synthesis of the exact CNOT: the 35-pulse cost function,
//! Nelder-Mead minimization with multi-start shooting, and local-unitary
//! equivalence testing through Bell-basis invariants.

use crate::error::{Error, Result};
use crate::gates::{apply_exchange, CanonicalLibrary, ExchangePulse, ExchangeSchedule};
use crate::hilbert::{LogicalCodec, RngStream};
use crate::linalg::{c, cr, CMat, C64, ONE, ZERO};
use rand::Rng;
use serde::Serialize;
use std::f64::consts::PI;

/// Components of the synthesis cost.
///
/// `distance` is the element-wise absolute deviation of the logical block
/// from CNOT after global-phase alignment; `distance_raw` is the same sum
/// without alignment. `leakage` is the element-wise absolute sum over the
/// block connecting the encoded subspace to its complement, and
/// `leakage_prob` the corresponding summed probability (squared Frobenius
/// norm), which is independent of the complement basis.
#[derive(Copy, Clone, Debug, Serialize)]
pub struct CostEvaluation {
    pub distance: f64,
    pub distance_raw: f64,
    pub leakage: f64,
    pub leakage_prob: f64,
}

impl CostEvaluation {
    /// The optimization objective: aligned distance plus leakage sum.
    pub fn total(&self) -> f64 {
        self.distance + self.leakage
    }
}

/// The CNOT matrix on the logical basis (qubit 0 is the control).
pub fn cnot_matrix() -> CMat {
    let mut m = CMat::zeros(4, 4);
    m[(0, 0)] = ONE;
    m[(1, 1)] = ONE;
    m[(2, 3)] = ONE;
    m[(3, 2)] = ONE;
    m
}

/// Pair pattern of the eight local pulses on each side of the core:
/// alternating within-block pairs on logical qubits one and two.
const LOCAL_PAIRS: [(usize, usize); 8] = [
    (0, 1),
    (1, 2),
    (0, 1),
    (1, 2),
    (3, 4),
    (4, 5),
    (3, 4),
    (4, 5),
];

/// Evaluator for the 35-pulse construction: eight local pulses, the
/// 19-pulse core, eight more local pulses, compared against CNOT on the
/// encoded block of the 64-dimensional space.
pub struct CnotCost {
    codec: LogicalCodec,
    core: ExchangeSchedule,
    complement: Vec<Vec<C64>>,
    target: CMat,
}

impl CnotCost {
    pub fn new(lib: &CanonicalLibrary) -> Self {
        let codec = LogicalCodec::new(2);
        let complement = complement_basis(&codec);
        CnotCost {
            codec,
            core: lib.core19().clone(),
            complement,
            target: cnot_matrix(),
        }
    }

    /// Assemble the full 35-pulse schedule for a 16-vector of local times.
    /// Layout: `x[0..8]` are the exit-side pulses (applied last, listed
    /// first in the published tables), `x[8..16]` the entry-side pulses.
    pub fn schedule(&self, x: &[f64; 16]) -> ExchangeSchedule {
        let mut pulses = Vec::with_capacity(35);
        // entry side, applied first: table rows 35 down to 28
        for k in (0..8).rev() {
            let (i, j) = LOCAL_PAIRS[k];
            pulses.push(ExchangePulse {
                i,
                j,
                t: x[8 + k].rem_euclid(2.0 * PI),
            });
        }
        pulses.extend_from_slice(self.core.pulses());
        for k in (0..8).rev() {
            let (i, j) = LOCAL_PAIRS[k];
            pulses.push(ExchangePulse {
                i,
                j,
                t: x[k].rem_euclid(2.0 * PI),
            });
        }
        ExchangeSchedule::from_pulses(6, pulses)
            .expect("pairs are in range")
            .with_label("cnot35-candidate")
    }

    /// Cost of a candidate 16-vector.
    pub fn eval(&self, x: &[f64; 16]) -> CostEvaluation {
        let sched = self.schedule(x);
        let mut block = CMat::zeros(4, 4);
        let mut leak_abs = 0.0f64;
        let mut leak_prob = 0.0f64;
        for l in 0..4 {
            let mut s = self.codec.codeword(l);
            for p in sched.pulses() {
                apply_exchange(&mut s, p.i, p.j, p.t).expect("valid pulse");
            }
            let coords = self.codec.decode(&s).expect("dims");
            for (i, v) in coords.iter().enumerate() {
                block[(i, l)] = *v;
            }
            for basis in &self.complement {
                let amp: C64 = basis
                    .iter()
                    .zip(s.amplitudes())
                    .map(|(b, a)| b.conj() * a)
                    .sum();
                leak_abs += amp.norm();
                leak_prob += amp.norm_sqr();
            }
        }
        let distance_raw = block.sub(&self.target).abs_sum();
        let aligned = block.phase_aligned_to(&self.target);
        let distance = aligned.sub(&self.target).abs_sum();
        CostEvaluation {
            distance,
            distance_raw,
            leakage: leak_abs,
            leakage_prob: leak_prob,
        }
    }

    /// The scalar objective used by the optimizer.
    pub fn objective(&self, x: &[f64; 16]) -> f64 {
        self.eval(x).total()
    }
}

/// Orthonormal completion of the codeword set, built by Gram-Schmidt over
/// the standard basis in index order. 60 vectors for two logical qubits.
fn complement_basis(codec: &LogicalCodec) -> Vec<Vec<C64>> {
    let dim = codec.physical_dim();
    let mut basis: Vec<Vec<C64>> = (0..codec.logical_dim())
        .map(|l| codec.codeword(l).amplitudes().to_vec())
        .collect();
    let n_code = basis.len();
    for k in 0..dim {
        let mut v = vec![ZERO; dim];
        v[k] = ONE;
        for u in &basis {
            let ip: C64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (ui, vi) in u.iter().zip(v.iter_mut()) {
                *vi -= ip * ui;
            }
        }
        let n: f64 = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if n > 1e-9 {
            for a in &mut v {
                *a /= cr(n);
            }
            basis.push(v);
        }
    }
    basis.split_off(n_code)
}

// ---------------------------------------------------------------------------
// Nelder-Mead simplex minimization.
// ---------------------------------------------------------------------------

/// Options for the simplex search. Coefficients are the classic choices:
/// reflection 1, expansion 2, contraction 1/2, shrink 1/2.
#[derive(Copy, Clone, Debug)]
pub struct NelderMeadOptions {
    pub max_iter: usize,
    /// Stop when the simplex value spread falls below this.
    pub tol_f: f64,
    /// Stop when the simplex diameter falls below this.
    pub tol_x: f64,
    /// Initial step along each coordinate when building the simplex.
    pub initial_step: f64,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        NelderMeadOptions {
            max_iter: 20_000,
            tol_f: 1e-12,
            tol_x: 1e-10,
            initial_step: 0.1,
        }
    }
}

#[derive(Clone, Debug)]
pub struct NelderMeadResult {
    pub x: Vec<f64>,
    pub fx: f64,
    pub iterations: usize,
    /// True when a tolerance triggered termination; false on max_iter
    /// exhaustion (flagged, not an error).
    pub converged: bool,
    /// Best value after each iteration (non-increasing).
    pub history: Vec<f64>,
}

/// Minimize `f` from `x0` with the Nelder-Mead simplex method.
pub fn nelder_mead(
    f: impl Fn(&[f64]) -> f64,
    x0: &[f64],
    opts: &NelderMeadOptions,
) -> NelderMeadResult {
    let m = x0.len();
    assert!(m >= 1);
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(m + 1);
    simplex.push((x0.to_vec(), f(x0)));
    for i in 0..m {
        let mut x = x0.to_vec();
        x[i] += opts.initial_step;
        let fx = f(&x);
        simplex.push((x, fx));
    }
    let mut history = Vec::new();
    let mut iterations = 0;
    let mut converged = false;
    while iterations < opts.max_iter {
        iterations += 1;
        simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).expect("finite costs"));
        let best = simplex[0].1;
        let worst = simplex[m].1;
        history.push(best);
        let spread = worst - best;
        let diameter = simplex[1..]
            .iter()
            .map(|(x, _)| {
                x.iter()
                    .zip(&simplex[0].0)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max);
        if spread < opts.tol_f || diameter < opts.tol_x {
            converged = true;
            break;
        }
        // centroid of all but the worst vertex
        let mut centroid = vec![0.0; m];
        for (x, _) in &simplex[..m] {
            for (ci, xi) in centroid.iter_mut().zip(x) {
                *ci += xi / m as f64;
            }
        }
        let worst_x = simplex[m].0.clone();
        let second_worst = simplex[m - 1].1;
        let combine = |a: f64, b: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&worst_x)
                .map(|(ci, wi)| a * ci + b * wi)
                .collect()
        };
        let reflected = combine(2.0, -1.0);
        let f_reflected = f(&reflected);
        if f_reflected < simplex[0].1 {
            let expanded = combine(3.0, -2.0);
            let f_expanded = f(&expanded);
            if f_expanded < f_reflected {
                simplex[m] = (expanded, f_expanded);
            } else {
                simplex[m] = (reflected, f_reflected);
            }
        } else if f_reflected < second_worst {
            simplex[m] = (reflected, f_reflected);
        } else {
            let contracted = if f_reflected < simplex[m].1 {
                combine(1.5, -0.5) // outside contraction
            } else {
                combine(0.5, 0.5) // inside contraction
            };
            let f_contracted = f(&contracted);
            if f_contracted < simplex[m].1.min(f_reflected) {
                simplex[m] = (contracted, f_contracted);
            } else {
                // shrink toward the best vertex
                let best_x = simplex[0].0.clone();
                for (x, fx) in simplex.iter_mut().skip(1) {
                    for (xi, bi) in x.iter_mut().zip(&best_x) {
                        *xi = 0.5 * (*xi + bi);
                    }
                    *fx = f(x);
                }
            }
        }
    }
    simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).expect("finite costs"));
    NelderMeadResult {
        x: simplex[0].0.clone(),
        fx: simplex[0].1,
        iterations,
        converged,
        history,
    }
}

/// One multi-start shot record.
#[derive(Clone, Debug, Serialize)]
pub struct ShotRecord {
    pub shot: usize,
    pub initial_cost: f64,
}

#[derive(Clone, Debug)]
pub struct SynthesisResult {
    pub times: [f64; 16],
    pub cost: CostEvaluation,
    pub schedule: ExchangeSchedule,
    pub shots: Vec<ShotRecord>,
    pub optimizer: NelderMeadResult,
}

/// Shoot `n_shots` uniform starting points into the 16-dimensional local
/// time space, then minimize from the best initial cost. Deterministic
/// for a fixed seed.
pub fn multi_start_synthesize(
    lib: &CanonicalLibrary,
    n_shots: usize,
    seed: u64,
    opts: &NelderMeadOptions,
) -> Result<SynthesisResult> {
    if n_shots == 0 {
        return Err(Error::InvalidConfig("n_shots must be >= 1".into()));
    }
    let cost = CnotCost::new(lib);
    let mut rng = RngStream::new(seed, 0).rng();
    let mut shots = Vec::with_capacity(n_shots);
    let mut best_start = [0.0f64; 16];
    let mut best_val = f64::INFINITY;
    for shot in 0..n_shots {
        let mut x = [0.0f64; 16];
        for xi in &mut x {
            *xi = rng.random::<f64>() * PI;
        }
        let v = cost.objective(&x);
        shots.push(ShotRecord {
            shot,
            initial_cost: v,
        });
        if v < best_val {
            best_val = v;
            best_start = x;
        }
    }
    let result = nelder_mead(
        |x| {
            let mut arr = [0.0f64; 16];
            arr.copy_from_slice(x);
            cost.objective(&arr)
        },
        &best_start,
        opts,
    );
    let mut times = [0.0f64; 16];
    times.copy_from_slice(&result.x);
    let eval = cost.eval(&times);
    let schedule = cost.schedule(&times);
    Ok(SynthesisResult {
        times,
        cost: eval,
        schedule,
        shots,
        optimizer: result,
    })
}

// ---------------------------------------------------------------------------
// Bell-basis local-equivalence invariants.
// ---------------------------------------------------------------------------

/// Magic (Bell) basis change. Any fixed convention yields the same
/// equivalence classes; this is the standard one.
fn magic_basis() -> CMat {
    let s = cr(std::f64::consts::FRAC_1_SQRT_2);
    let i = c(0.0, std::f64::consts::FRAC_1_SQRT_2);
    let mut q = CMat::zeros(4, 4);
    q[(0, 0)] = s;
    q[(3, 0)] = s;
    q[(1, 1)] = i;
    q[(2, 1)] = i;
    q[(1, 2)] = s;
    q[(2, 2)] = -s;
    q[(0, 3)] = i;
    q[(3, 3)] = -i;
    q
}

/// Spectral invariants of m = M_B^T M_B with M_B = Q^H U Q: the first four
/// power sums of the spectrum, computed after determinant normalization.
/// Equal power sums (up to the inherent sign ambiguity of the fourth
/// determinant root) characterize local equivalence.
#[derive(Clone, Debug, PartialEq)]
pub struct MakhlinClass {
    power_sums: [C64; 4],
}

impl MakhlinClass {
    pub fn power_sums(&self) -> &[C64; 4] {
        &self.power_sums
    }

    /// Distance between invariant sets, minimized over the determinant
    /// branch (m defined up to an overall sign).
    pub fn distance(&self, other: &MakhlinClass) -> f64 {
        let direct = self
            .power_sums
            .iter()
            .zip(&other.power_sums)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        // p_k(-m) = (-1)^k p_k(m)
        let flipped = self
            .power_sums
            .iter()
            .enumerate()
            .zip(&other.power_sums)
            .map(|((k, a), b)| {
                let sign = if k % 2 == 0 { -ONE } else { ONE };
                (a - sign * b).norm()
            })
            .fold(0.0, f64::max);
        direct.min(flipped)
    }

    pub fn matches(&self, other: &MakhlinClass, tol: f64) -> bool {
        self.distance(other) <= tol
    }
}

fn det4(m: &CMat) -> C64 {
    assert_eq!((m.rows, m.cols), (4, 4));
    let minor3 = |r: [usize; 3], c: [usize; 3]| -> C64 {
        m[(r[0], c[0])] * (m[(r[1], c[1])] * m[(r[2], c[2])] - m[(r[1], c[2])] * m[(r[2], c[1])])
            - m[(r[0], c[1])]
                * (m[(r[1], c[0])] * m[(r[2], c[2])] - m[(r[1], c[2])] * m[(r[2], c[0])])
            + m[(r[0], c[2])]
                * (m[(r[1], c[0])] * m[(r[2], c[1])] - m[(r[1], c[1])] * m[(r[2], c[0])])
    };
    let rows = [1, 2, 3];
    let cols = [[1, 2, 3], [0, 2, 3], [0, 1, 3], [0, 1, 2]];
    let mut det = ZERO;
    let mut sign = ONE;
    for j in 0..4 {
        det += sign * m[(0, j)] * minor3(rows, cols[j]);
        sign = -sign;
    }
    det
}

/// Compute the local-equivalence invariants of a two-qubit unitary.
pub fn makhlin_class(u: &CMat) -> Result<MakhlinClass> {
    if (u.rows, u.cols) != (4, 4) {
        return Err(Error::DimensionMismatch {
            expected: 4,
            got: u.rows,
        });
    }
    let dev = u.unitarity_deviation();
    if dev > 1e-6 {
        return Err(Error::NonUnitary { deviation: dev });
    }
    let det = det4(u);
    let root = det.powf(0.25);
    let un = u.scale(root.conj() / root.norm_sqr().max(1e-300));
    let q = magic_basis();
    let mb = q.dagger().mul(&un).mul(&q);
    let m = mb.transpose().mul(&mb);
    let mut power_sums = [ZERO; 4];
    let mut mk = CMat::identity(4);
    for p in &mut power_sums {
        mk = mk.mul(&m);
        *p = mk.trace();
    }
    Ok(MakhlinClass { power_sums })
}

/// Whether two two-qubit unitaries differ only by local (single-qubit)
/// operations, to tolerance `tol` on the invariant spectrum.
pub fn is_locally_equivalent(u: &CMat, v: &CMat, tol: f64) -> Result<bool> {
    Ok(makhlin_class(u)?.matches(&makhlin_class(v)?, tol))
}
