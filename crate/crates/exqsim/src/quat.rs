// Copyright 2026 the exqsim developers
// SPDX-License-Identifier: Apache-2.0

//! Quaternion synthesis of encoded single-qubit gates.
//!
//! On the encoded qubit the two within-block exchanges generate the
//! rotations E12 = -sigma_z and E23 = (sqrt(3)/2) sigma_x + (1/2) sigma_z,
//! so alternating pulse sequences sweep out SU(2). Representing rotations
//! as quaternions {w, (x, y, z)} <-> w I - i (x sx + y sy + z sz) turns
//! gate equations into trigonometric systems with closed-form solutions.
//!
//! Two quaternion parameterizations appear here:
//! * `gate_quaternion(axis, t)` is the faithful image of the pulse unitary
//!   exp(+i t E); products of these match products of the gates exactly.
//! * `q_from_exchange(axis, t)` is the half-angle form used by the
//!   published closed-form composites; it relates to the former by
//!   `gate_quaternion(axis, t) = q_from_exchange(axis, -2 t)`.

use crate::error::{Error, Result};
use crate::gates::{
    schedule_logical_block, BlockAxis, CanonicalLibrary, ExchangePulse, ExchangeSchedule,
};
use crate::hilbert::LogicalCodec;
use crate::linalg::{c, cr, CMat, C64, ONE, ZERO};
use std::f64::consts::PI;

/// Scalar-plus-vector quaternion.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct Quaternion {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Quaternion {
    pub const IDENTITY: Quaternion = Quaternion {
        w: 1.0,
        x: 0.0,
        y: 0.0,
        z: 0.0,
    };

    pub fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Quaternion { w, x, y, z }
    }

    /// Rotation by `alpha` about the unit axis `(rx, ry, rz)`; the image of
    /// the SU(2) element exp(-i alpha/2 r.sigma).
    pub fn from_axis_angle(alpha: f64, axis: [f64; 3]) -> Self {
        let h = alpha / 2.0;
        let s = h.sin();
        Quaternion::new(h.cos(), s * axis[0], s * axis[1], s * axis[2])
    }

    pub fn norm(&self) -> f64 {
        (self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    pub fn conj(&self) -> Quaternion {
        Quaternion::new(self.w, -self.x, -self.y, -self.z)
    }

    pub fn neg(&self) -> Quaternion {
        Quaternion::new(-self.w, -self.x, -self.y, -self.z)
    }

    /// Hamilton product: {w1 w2 - u1.u2, w1 u2 + w2 u1 + u1 x u2}.
    pub fn mul(&self, rhs: &Quaternion) -> Quaternion {
        Quaternion::new(
            self.w * rhs.w - self.x * rhs.x - self.y * rhs.y - self.z * rhs.z,
            self.w * rhs.x + rhs.w * self.x + self.y * rhs.z - self.z * rhs.y,
            self.w * rhs.y + rhs.w * self.y + self.z * rhs.x - self.x * rhs.z,
            self.w * rhs.z + rhs.w * self.z + self.x * rhs.y - self.y * rhs.x,
        )
    }

    /// Distance to `other` up to overall quaternion sign (-q and q are the
    /// same rotation).
    pub fn dist_up_to_sign(&self, other: &Quaternion) -> f64 {
        let d1 = [
            self.w - other.w,
            self.x - other.x,
            self.y - other.y,
            self.z - other.z,
        ];
        let d2 = [
            self.w + other.w,
            self.x + other.x,
            self.y + other.y,
            self.z + other.z,
        ];
        let m = |d: [f64; 4]| d.iter().map(|v| v.abs()).fold(0.0, f64::max);
        m(d1).min(m(d2))
    }

    /// The SU(2) matrix w I - i (x sx + y sy + z sz).
    pub fn to_su2(&self) -> CMat {
        let mut m = CMat::zeros(2, 2);
        m[(0, 0)] = c(self.w, -self.z);
        m[(0, 1)] = c(-self.y, -self.x);
        m[(1, 0)] = c(self.y, -self.x);
        m[(1, 1)] = c(self.w, self.z);
        m
    }
}

/// Quaternion of a 2x2 unitary after stripping its determinant phase.
/// The sign ambiguity of the double cover is inherent; callers compare
/// with `dist_up_to_sign`.
pub fn quaternion_from_unitary(u: &CMat) -> Result<Quaternion> {
    assert_eq!((u.rows, u.cols), (2, 2));
    let dev = u.unitarity_deviation();
    if dev > 1e-8 {
        return Err(Error::NonUnitary { deviation: dev });
    }
    let det = u[(0, 0)] * u[(1, 1)] - u[(0, 1)] * u[(1, 0)];
    let phase = det.sqrt();
    let un = u.scale(phase.conj() / phase.norm());
    let w = (un[(0, 0)] + un[(1, 1)]).re / 2.0;
    let z = (un[(1, 1)] - un[(0, 0)]).im / 2.0;
    let x = -(un[(0, 1)] + un[(1, 0)]).im / 2.0;
    let y = (un[(1, 0)] - un[(0, 1)]).re / 2.0;
    Ok(Quaternion::new(w, x, y, z))
}

/// Which encoded-qubit generator a pulse drives.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum ExchangeAxis {
    E12,
    E23,
}

impl From<ExchangeAxis> for BlockAxis {
    fn from(a: ExchangeAxis) -> BlockAxis {
        match a {
            ExchangeAxis::E12 => BlockAxis::E12,
            ExchangeAxis::E23 => BlockAxis::E23,
        }
    }
}

/// Published half-angle quaternions of the exchange gates:
/// E12 -> {cos(t/2), 0, 0, -sin(t/2)},
/// E23 -> {cos(t/2), (sqrt(3)/2) sin(t/2), 0, (1/2) sin(t/2)}.
pub fn q_from_exchange(axis: ExchangeAxis, t: f64) -> Quaternion {
    let h = t / 2.0;
    match axis {
        ExchangeAxis::E12 => Quaternion::new(h.cos(), 0.0, 0.0, -h.sin()),
        ExchangeAxis::E23 => {
            Quaternion::new(h.cos(), 3.0f64.sqrt() / 2.0 * h.sin(), 0.0, h.sin() / 2.0)
        }
    }
}

/// Faithful quaternion of the pulse unitary exp(+i t E): products of these
/// compose exactly as the gates do. Equals `q_from_exchange(axis, -2 t)`.
pub fn gate_quaternion(axis: ExchangeAxis, t: f64) -> Quaternion {
    q_from_exchange(axis, -2.0 * t)
}

/// Euler-angle rotation exp(-i Sz phi) exp(-i Sy theta) exp(-i Sz chi) as a
/// quaternion (spin operators S = sigma / 2).
pub fn q_euler(phi: f64, theta: f64, chi: f64) -> Quaternion {
    let (hp, ht, hc) = (phi / 2.0, theta / 2.0, chi / 2.0);
    Quaternion::new(
        ht.cos() * (hp + hc).cos(),
        ht.sin() * (hc - hp).sin(),
        ht.sin() * (hc - hp).cos(),
        ht.cos() * (hp + hc).sin(),
    )
}

/// Alternating three-pulse patterns, named by application order.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum ThreePattern {
    /// E12(t1), E23(t2), E12(t3)
    E12E23E12,
    /// E23(t1), E12(t2), E23(t3)
    E23E12E23,
}

impl ThreePattern {
    pub fn axes(&self) -> [ExchangeAxis; 3] {
        match self {
            ThreePattern::E12E23E12 => [ExchangeAxis::E12, ExchangeAxis::E23, ExchangeAxis::E12],
            ThreePattern::E23E12E23 => [ExchangeAxis::E23, ExchangeAxis::E12, ExchangeAxis::E23],
        }
    }
}

/// Gate quaternion of a pulse sequence given in application order.
pub fn compose_gate_quaternion(axes: &[ExchangeAxis], times: &[f64]) -> Quaternion {
    assert_eq!(axes.len(), times.len());
    let mut q = Quaternion::IDENTITY;
    for (axis, &t) in axes.iter().zip(times) {
        q = gate_quaternion(*axis, t).mul(&q);
    }
    q
}

/// A single-qubit rotation target: either an explicit 2x2 unitary or an
/// axis-angle pair in hyperspherical form (beta, gamma fix the axis).
#[derive(Clone, Debug)]
pub enum LogicalRotationTarget {
    Matrix(CMat),
    AxisAngle { alpha: f64, beta: f64, gamma: f64 },
}

impl LogicalRotationTarget {
    pub fn to_quaternion(&self) -> Result<Quaternion> {
        match self {
            LogicalRotationTarget::Matrix(m) => quaternion_from_unitary(m),
            LogicalRotationTarget::AxisAngle { alpha, beta, gamma } => {
                let axis = [
                    (beta / 2.0).sin() * (gamma / 2.0).cos(),
                    (beta / 2.0).sin() * (gamma / 2.0).sin(),
                    (beta / 2.0).cos(),
                ];
                Ok(Quaternion::from_axis_angle(*alpha, axis))
            }
        }
    }
}

/// Pi rotation exchanging the two pulse axes; conjugation by it maps
/// E23-generated rotations onto E12-generated ones.
fn axis_swap_rotation() -> Quaternion {
    Quaternion::new(0.0, -(3.0f64.sqrt()) / 2.0, 0.0, 0.5)
}

const REACH_EPS: f64 = 1e-12;

/// Solve the three-pulse system for a target rotation. Returned times are
/// in application order, reduced to [0, pi). `NoSolution` when the
/// pattern's reachable set excludes the target (the transverse quaternion
/// magnitude of an E12-E23-E12 composite is capped at sqrt(3)/2).
pub fn solve_three_exchange(
    target: &LogicalRotationTarget,
    pattern: ThreePattern,
) -> Result<[f64; 3]> {
    let q_target = target.to_quaternion()?;
    let q_solve = match pattern {
        ThreePattern::E12E23E12 => q_target,
        ThreePattern::E23E12E23 => {
            let r = axis_swap_rotation();
            // R^-1 * q * R with R^-1 = -R for a pi rotation; signs cancel.
            r.conj().mul(&q_target).mul(&r)
        }
    };
    let times = solve_zkz(&q_solve)?;
    // self-check through the composition oracle
    let composed = compose_gate_quaternion(&pattern.axes(), &times);
    if composed.dist_up_to_sign(&q_target) > 1e-9 {
        return Err(Error::NoSolution(
            "three-pulse solve failed composition check".into(),
        ));
    }
    Ok(times)
}

/// Closed-form solve of g12(t3) g23(t2) g12(t1) = q (up to sign), where
/// g are the gate quaternions. The composite has
///   w =  c2 C + (1/2) s2 S,      x = -(sqrt3/2) s2 cos(t1 - t3),
///   z =  c2 S - (1/2) s2 C,      y =  (sqrt3/2) s2 sin(t1 - t3),
/// with C = cos(t1 + t3), S = sin(t1 + t3), c2/s2 = cos/sin of t2.
fn solve_zkz(q: &Quaternion) -> Result<[f64; 3]> {
    let r2 = q.x * q.x + q.y * q.y;
    if r2 > 0.75 + REACH_EPS {
        return Err(Error::NoSolution(format!(
            "transverse component {:.6} exceeds sqrt(3)/2",
            r2.sqrt()
        )));
    }
    let s2 = (4.0 * r2 / 3.0).min(1.0).sqrt();
    let diff = if s2 < 1e-14 {
        0.0
    } else {
        f64::atan2(q.y, -q.x)
    };
    for c2 in [
        (1.0 - s2 * s2).max(0.0).sqrt(),
        -(1.0 - s2 * s2).max(0.0).sqrt(),
    ] {
        let det = c2 * c2 + s2 * s2 / 4.0;
        if det < 1e-14 {
            continue;
        }
        let big_c = (c2 * q.w - 0.5 * s2 * q.z) / det;
        let big_s = (0.5 * s2 * q.w + c2 * q.z) / det;
        if (big_c * big_c + big_s * big_s - 1.0).abs() > 1e-9 {
            continue;
        }
        let sum = f64::atan2(big_s, big_c);
        let t1 = ((sum + diff) / 2.0).rem_euclid(PI);
        let t3 = ((sum - diff) / 2.0).rem_euclid(PI);
        let t2 = f64::atan2(s2, c2).rem_euclid(PI);
        let composed = compose_gate_quaternion(
            &[ExchangeAxis::E12, ExchangeAxis::E23, ExchangeAxis::E12],
            &[t1, t2, t3],
        );
        if composed.dist_up_to_sign(q) < 1e-9 {
            return Ok([t1, t2, t3]);
        }
    }
    Err(Error::NoSolution("no consistent branch".into()))
}

/// Decompose an arbitrary rotation into E23(t1), E12(t2), E23(t3) plus one
/// trailing E12 phase pulse: at most four exchanges for any SU(2) target.
pub fn solve_four_exchange(target: &LogicalRotationTarget) -> Result<[f64; 4]> {
    let q_target = target.to_quaternion()?;
    // Peel a trailing z-like rotation: q_target = g12(t4) * M, scan t4 until
    // the remainder M is reachable by the E23-E12-E23 pattern.
    const GRID: usize = 96;
    for k in 0..GRID {
        let t4 = k as f64 * PI / GRID as f64;
        let m = gate_quaternion(ExchangeAxis::E12, -t4).mul(&q_target);
        let m_target = LogicalRotationTarget::Matrix(m.to_su2());
        match solve_three_exchange(&m_target, ThreePattern::E23E12E23) {
            Ok([t1, t2, t3]) => {
                let composed = compose_gate_quaternion(
                    &[
                        ExchangeAxis::E23,
                        ExchangeAxis::E12,
                        ExchangeAxis::E23,
                        ExchangeAxis::E12,
                    ],
                    &[t1, t2, t3, t4],
                );
                if composed.dist_up_to_sign(&q_target) < 1e-9 {
                    return Ok([t1, t2, t3, t4]);
                }
            }
            Err(_) => continue,
        }
    }
    Err(Error::NoSolution(
        "no trailing phase admits a solution".into(),
    ))
}

// ---------------------------------------------------------------------------
// Four-pulse closed-form verification oracle.
// ---------------------------------------------------------------------------

/// Evaluate the closed-form matrix of the four-pulse sequence
/// exp(-i t4 E12) exp(-i t3 E23) exp(-i t2 E12) exp(-i t1 E23)
/// on the encoded qubit.
///
/// The A11 element as published carries a sign typo in its first
/// exponent; the form here is the one that matches direct multiplication
/// of the generator exponentials for all times.
pub fn four_exchange_matrix(times: [f64; 4]) -> CMat {
    let [t1, t2, t3, t4] = times;
    let e = |a: f64| C64::from_polar(1.0, a);
    let half = |t: f64| cr(t.cos()) - c(0.0, 0.5) * cr(t.sin());
    let halfc = |t: f64| cr(t.cos()) + c(0.0, 0.5) * cr(t.sin());
    let s1 = cr(t1.sin());
    let s3 = cr(t3.sin());
    let k = c(0.0, -1.0) * cr(3.0f64.sqrt() / 2.0);
    let mut m = CMat::zeros(2, 2);
    m[(0, 0)] = e(t2 + t4) * half(t3) * half(t1) - cr(0.75) * e(t4 - t2) * s1 * s3;
    m[(0, 1)] = k * e(t2 + t4) * s1 * half(t3) + k * e(t4 - t2) * s3 * halfc(t1);
    m[(1, 0)] = k * e(t2 - t4) * s3 * half(t1) + k * e(-(t4 + t2)) * s1 * halfc(t3);
    m[(1, 1)] = -cr(0.75) * e(t2 - t4) * s1 * s3 + e(-(t2 + t4)) * halfc(t3) * halfc(t1);
    m
}

/// Slot times for the verification oracle, from pulses given in
/// application order with the exp(+i t E) convention. Each applied pulse
/// exp(+i t E) equals -exp(-i (pi - t) E), so slots carry pi - t; unused
/// slots are zero. Patterns longer than four pulses are not representable.
pub fn four_exchange_slots(axes: &[ExchangeAxis], times: &[f64]) -> Result<[f64; 4]> {
    assert_eq!(axes.len(), times.len());
    // Slot axes in application order: E23, E12, E23, E12.
    let slot_axes = [
        ExchangeAxis::E23,
        ExchangeAxis::E12,
        ExchangeAxis::E23,
        ExchangeAxis::E12,
    ];
    let mut slots = [0.0f64; 4];
    let mut cursor = 0usize;
    for (axis, &t) in axes.iter().zip(times) {
        while cursor < 4 && slot_axes[cursor] != *axis {
            cursor += 1;
        }
        if cursor == 4 {
            return Err(Error::NoSolution(
                "pulse pattern does not embed in the four-slot template".into(),
            ));
        }
        slots[cursor] = (PI - t).rem_euclid(2.0 * PI);
        cursor += 1;
    }
    Ok(slots)
}

/// Max element deviation of the closed-form four-pulse matrix from a 2x2
/// target, up to overall sign (double cover).
pub fn verify_four_exchange(target: &CMat, times: [f64; 4]) -> f64 {
    let a = four_exchange_matrix(times);
    let d1 = a.max_abs_diff(target);
    let d2 = a.scale(-ONE).max_abs_diff(target);
    d1.min(d2)
}

// ---------------------------------------------------------------------------
// Phase system and the analytic CNOT assembly.
// ---------------------------------------------------------------------------

/// Solution of the diagonal-to-C-PHASE system: z-rotation angles phi (first
/// logical qubit) and theta (second), plus the leftover global phase.
/// The rotations are R_z(x) = exp(-i x sigma_z), realized by an E12 pulse
/// of time x mod pi.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct PhaseSolution {
    pub theta: f64,
    pub phi: f64,
    pub omega: f64,
}

/// Solve exp(i Omega) (Rz(phi) x Rz(theta)) D = C-PHASE for a unitary
/// diagonal D given as its four diagonal entries. `NoSolution` when D is
/// not C-PHASE-equivalent (consistency residual above `tol`).
pub fn solve_phase_system(diag: &[C64; 4], tol: f64) -> Result<PhaseSolution> {
    for d in diag {
        if (d.norm() - 1.0).abs() > 1e-6 {
            return Err(Error::NonUnitary {
                deviation: (d.norm() - 1.0).abs(),
            });
        }
    }
    let delta: Vec<f64> = diag.iter().map(|d| d.arg()).collect();
    let phi = (delta[0] - delta[2]) / 2.0;
    let theta = (delta[0] - delta[1]) / 2.0;
    let omega = phi + theta - delta[0];
    // fourth equation: Omega + phi + theta + Delta11 = pi (mod 2 pi)
    let residual = omega + phi + theta + delta[3] - PI;
    let wrapped = (residual.sin()).atan2(residual.cos()).abs();
    if wrapped > tol {
        return Err(Error::NoSolution(format!(
            "diagonal is not C-PHASE-equivalent (residual {wrapped:.3e})"
        )));
    }
    Ok(PhaseSolution { theta, phi, omega })
}

/// The similarity transform diagonalizing the 19-pulse core on the encoded
/// pair: the identity on the first qubit and a 60-degree y-rotation on the
/// second.
pub fn diagonalizer_local() -> CMat {
    let s = Quaternion::from_axis_angle(PI / 3.0, [0.0, 1.0, 0.0]).to_su2();
    CMat::identity(2).kron(&s)
}

/// Diagonal of S^H U19 S where U19 is the logical block of the 19-pulse
/// core. Returns the four diagonal entries and the largest off-diagonal
/// magnitude (a health check on the construction).
pub fn core19_diagonal(lib: &CanonicalLibrary) -> ([C64; 4], f64) {
    let codec = LogicalCodec::new(2);
    let block = schedule_logical_block(lib.core19(), &codec);
    let s = diagonalizer_local();
    let d = s.dagger().mul(&block).mul(&s);
    let mut diag = [ZERO; 4];
    let mut off = 0.0f64;
    for i in 0..4 {
        for j in 0..4 {
            if i == j {
                diag[i] = d[(i, j)];
            } else {
                off = off.max(d[(i, j)].norm());
            }
        }
    }
    (diag, off)
}

/// Assemble the 30-pulse exact CNOT from analytic parts: Hadamards and the
/// diagonalizing rotation on the second logical qubit around the 19-pulse
/// core, plus two z-rotation pulses from the phase system, merged with the
/// same-pair rule. Reproduces the published 30 gate times.
pub fn assemble_analytic_cnot(lib: &CanonicalLibrary) -> Result<ExchangeSchedule> {
    let n = 6usize;
    let (diag, off) = core19_diagonal(lib);
    if off > 1e-3 {
        return Err(Error::NoSolution(format!(
            "19-pulse core failed to diagonalize (off-diagonal {off:.3e})"
        )));
    }
    let phases = solve_phase_system(&diag, 1e-3)?;

    let h2 = lib.hadamard(1, n)?;
    let s2 = lib.s_rotation(1, n)?;
    let s2_inv = s2.inverse();

    let mut out = ExchangeSchedule::empty(n);
    let extend = |sched: &ExchangeSchedule, out: &mut ExchangeSchedule| {
        for p in sched.pulses() {
            out.push_merged(*p);
        }
    };
    extend(&h2, &mut out);
    extend(&s2, &mut out);
    extend(lib.core19(), &mut out);
    extend(&s2_inv, &mut out);
    // theta on the second qubit's E12 pair, phi on the first qubit's
    out.push_merged(ExchangePulse::new(3, 4, phases.theta.rem_euclid(PI))?);
    out.push_merged(ExchangePulse::new(0, 1, phases.phi.rem_euclid(PI))?);
    extend(&h2, &mut out);
    Ok(out.with_label("cnot30-assembled"))
}

/// Encoded-qubit matrices of the pulse generators: E12 -> -sz,
/// E23 -> (sqrt3/2) sx + (1/2) sz.
pub fn logical_generator(axis: ExchangeAxis) -> CMat {
    let mut m = CMat::zeros(2, 2);
    match axis {
        ExchangeAxis::E12 => {
            m[(0, 0)] = cr(-1.0);
            m[(1, 1)] = cr(1.0);
        }
        ExchangeAxis::E23 => {
            m[(0, 0)] = cr(0.5);
            m[(1, 1)] = cr(-0.5);
            m[(0, 1)] = cr(3.0f64.sqrt() / 2.0);
            m[(1, 0)] = cr(3.0f64.sqrt() / 2.0);
        }
    }
    m
}

/// exp(+i t G) for a logical generator G (G^2 = I for both generators).
pub fn logical_pulse_matrix(axis: ExchangeAxis, t: f64) -> CMat {
    let g = logical_generator(axis);
    CMat::identity(2)
        .scale(cr(t.cos()))
        .add(&g.scale(c(0.0, t.sin())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates::gate_times;
    use approx::assert_abs_diff_eq;

    fn sx() -> CMat {
        CMat::from_rows(&[&[ZERO, ONE], &[ONE, ZERO]])
    }

    fn sz() -> CMat {
        CMat::from_rows(&[&[ONE, ZERO], &[ZERO, -ONE]])
    }

    fn hadamard_mat() -> CMat {
        sx().add(&sz()).scale(cr(1.0 / 2.0f64.sqrt()))
    }

    fn s_target() -> LogicalRotationTarget {
        LogicalRotationTarget::AxisAngle {
            alpha: PI / 3.0,
            beta: PI,  // axis in the x-y plane ... beta/2 = pi/2
            gamma: PI, // gamma/2 = pi/2 -> axis = (0, 1, 0)
        }
    }

    #[test]
    fn quaternion_product_identities() {
        let q = Quaternion::from_axis_angle(0.7, [0.6, 0.0, 0.8]);
        let id = Quaternion::IDENTITY;
        assert!(q.mul(&id).dist_up_to_sign(&q) < 1e-15);
        let qq = q.mul(&q.conj());
        assert!(qq.dist_up_to_sign(&id) < 1e-15);
        // z-rotations compose additively
        let a = Quaternion::from_axis_angle(0.3, [0.0, 0.0, 1.0]);
        let b = Quaternion::from_axis_angle(0.9, [0.0, 0.0, 1.0]);
        let ab = a.mul(&b);
        let direct = Quaternion::from_axis_angle(1.2, [0.0, 0.0, 1.0]);
        assert!(ab.dist_up_to_sign(&direct) < 1e-15);
    }

    #[test]
    fn q_from_exchange_published_forms() {
        let t = 0.83;
        let q1 = q_from_exchange(ExchangeAxis::E12, t);
        assert_abs_diff_eq!(q1.w, (t / 2.0).cos(), epsilon = 1e-15);
        assert_abs_diff_eq!(q1.z, -(t / 2.0).sin(), epsilon = 1e-15);
        assert_eq!((q1.x, q1.y), (0.0, 0.0));
        let q2 = q_from_exchange(ExchangeAxis::E23, t);
        // axis (sqrt3/2, 0, 1/2), unit norm
        assert_abs_diff_eq!(q2.x / (t / 2.0).sin(), 3.0f64.sqrt() / 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(q2.z / (t / 2.0).sin(), 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(q2.norm(), 1.0, epsilon = 1e-15);
        assert!(
            q_from_exchange(ExchangeAxis::E12, 0.0).dist_up_to_sign(&Quaternion::IDENTITY) < 1e-15
        );
    }

    #[test]
    fn gate_quaternion_matches_logical_matrices() {
        for axis in [ExchangeAxis::E12, ExchangeAxis::E23] {
            for &t in &[0.0, 0.37, 1.9, 3.0] {
                let q = gate_quaternion(axis, t);
                let direct = logical_pulse_matrix(axis, t);
                let back = quaternion_from_unitary(&direct).unwrap();
                assert!(q.dist_up_to_sign(&back) < 1e-12, "axis {axis:?}, t = {t}");
            }
        }
    }

    #[test]
    fn euler_closed_form_matches_composition() {
        let (phi, theta, chi) = (0.6, 1.1, -0.4);
        let direct = q_euler(phi, theta, chi);
        let composed = Quaternion::from_axis_angle(phi, [0.0, 0.0, 1.0])
            .mul(&Quaternion::from_axis_angle(theta, [0.0, 1.0, 0.0]))
            .mul(&Quaternion::from_axis_angle(chi, [0.0, 0.0, 1.0]));
        assert!(direct.dist_up_to_sign(&composed) < 1e-13);
        // degenerate angles
        let zrot = q_euler(0.8, 0.0, 0.0);
        assert!(zrot.dist_up_to_sign(&Quaternion::from_axis_angle(0.8, [0.0, 0.0, 1.0])) < 1e-15);
        let yflip = q_euler(0.0, PI, 0.0);
        assert!(yflip.dist_up_to_sign(&Quaternion::new(0.0, 0.0, 1.0, 0.0)) < 1e-15);
    }

    #[test]
    fn s_rotation_solution_matches_closed_form() {
        let times = solve_three_exchange(&s_target(), ThreePattern::E12E23E12).unwrap();
        let expect = gate_times::s_rotation();
        for (a, b) in times.iter().zip(&expect) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-10);
        }
    }

    #[test]
    fn hadamard_solution_matches_closed_form() {
        let target = LogicalRotationTarget::Matrix(hadamard_mat());
        let times = solve_three_exchange(&target, ThreePattern::E12E23E12).unwrap();
        let expect = gate_times::hadamard();
        for (a, b) in times.iter().zip(&expect) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-10);
        }
    }

    #[test]
    fn not_gate_needs_the_other_pattern() {
        let target = LogicalRotationTarget::Matrix(sx());
        assert!(matches!(
            solve_three_exchange(&target, ThreePattern::E12E23E12),
            Err(Error::NoSolution(_))
        ));
        let times = solve_three_exchange(&target, ThreePattern::E23E12E23).unwrap();
        let expect = gate_times::not();
        for (a, b) in times.iter().zip(&expect) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-10);
        }
    }

    #[test]
    fn four_slot_oracle_agrees_with_direct_products_on_random_times() {
        let mut rng_state = 0x9e3779b97f4a7c15u64;
        let mut next = || {
            rng_state = rng_state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            (rng_state >> 11) as f64 / (1u64 << 53) as f64 * PI
        };
        for _ in 0..200 {
            let axes = [
                ExchangeAxis::E23,
                ExchangeAxis::E12,
                ExchangeAxis::E23,
                ExchangeAxis::E12,
            ];
            let times = [next(), next(), next(), next()];
            let mut direct = CMat::identity(2);
            for (axis, &t) in axes.iter().zip(&times) {
                direct = logical_pulse_matrix(*axis, t).mul(&direct);
            }
            let slots = four_exchange_slots(&axes, &times).unwrap();
            let res = verify_four_exchange(&direct, slots);
            assert!(res < 1e-12, "residual {res}");
        }
    }

    #[test]
    fn all_times_zero_is_identity_in_oracle() {
        let id = CMat::identity(2);
        assert!(verify_four_exchange(&id, [0.0; 4]) < 1e-15);
    }

    #[test]
    fn t_gate_is_a_single_eighth_pi_z_pulse() {
        // exp(i pi/8 E12) acts as the pi/8 z-rotation up to phase
        let direct = logical_pulse_matrix(ExchangeAxis::E12, PI / 8.0);
        let mut t_target = CMat::identity(2);
        t_target[(1, 1)] = C64::from_polar(1.0, PI / 4.0);
        let aligned = direct.phase_aligned_to(&t_target);
        assert!(aligned.max_abs_diff(&t_target) < 1e-12);
        let slots = four_exchange_slots(&[ExchangeAxis::E12], &[PI / 8.0]).unwrap();
        let su2 = t_target.scale(C64::from_polar(1.0, -PI / 8.0));
        assert!(verify_four_exchange(&su2, slots) < 1e-12);
    }

    #[test]
    fn hadamard_times_verify_through_the_four_pulse_oracle() {
        let times = gate_times::hadamard();
        let axes = [ExchangeAxis::E12, ExchangeAxis::E23, ExchangeAxis::E12];
        let slots = four_exchange_slots(&axes, &times).unwrap();
        // SU(2) Hadamard: -i H has determinant one
        let target = hadamard_mat().scale(c(0.0, -1.0));
        assert!(verify_four_exchange(&target, slots) < 1e-10);
    }

    #[test]
    fn four_exchange_reaches_haar_targets() {
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let alpha = rng.random::<f64>() * 2.0 * PI;
            let v: [f64; 3] = [
                rng.random::<f64>() - 0.5,
                rng.random::<f64>() - 0.5,
                rng.random::<f64>() - 0.5,
            ];
            let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt().max(1e-9);
            let axis = [v[0] / n, v[1] / n, v[2] / n];
            let q = Quaternion::from_axis_angle(alpha, axis);
            let target = LogicalRotationTarget::Matrix(q.to_su2());
            let times = solve_four_exchange(&target).unwrap();
            let composed = compose_gate_quaternion(
                &[
                    ExchangeAxis::E23,
                    ExchangeAxis::E12,
                    ExchangeAxis::E23,
                    ExchangeAxis::E12,
                ],
                &times,
            );
            assert!(composed.dist_up_to_sign(&q) < 1e-9);
        }
    }

    #[test]
    fn core19_phase_system_gives_published_angles() {
        let lib = CanonicalLibrary::load();
        let (diag, off) = core19_diagonal(&lib);
        assert!(off < 1e-3, "off-diagonal {off}");
        let sol = solve_phase_system(&diag, 1e-3).unwrap();
        assert_abs_diff_eq!(sol.phi, 0.612497, epsilon = 1e-5);
        assert_abs_diff_eq!(sol.theta, -0.547580, epsilon = 1e-5);
    }

    #[test]
    fn analytic_assembly_reproduces_the_30_pulse_table() {
        let lib = CanonicalLibrary::load();
        let assembled = assemble_analytic_cnot(&lib).unwrap();
        assert_eq!(assembled.len(), 30);
        for (a, b) in assembled.pulses().iter().zip(lib.cnot30().pulses()) {
            assert_eq!(a.sites(), b.sites());
            assert_abs_diff_eq!(a.t, b.t, epsilon = 1e-5);
        }
    }

    #[test]
    fn phase_system_on_cphase_itself_is_trivial() {
        let diag = [ONE, ONE, ONE, -ONE];
        let sol = solve_phase_system(&diag, 1e-9).unwrap();
        assert_abs_diff_eq!(sol.theta.rem_euclid(2.0 * PI), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(sol.phi.rem_euclid(2.0 * PI), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn phase_system_rejects_non_cphase_diagonals() {
        let diag = [ONE, ONE, ONE, ONE];
        assert!(matches!(
            solve_phase_system(&diag, 1e-6),
            Err(Error::NoSolution(_))
        ));
    }

    #[test]
    fn phase_system_round_trips_random_cphase_equivalent_diagonals() {
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        for _ in 0..50 {
            let (om, th, ph) = (
                rng.random::<f64>() * 6.0 - 3.0,
                rng.random::<f64>() * 6.0 - 3.0,
                rng.random::<f64>() * 6.0 - 3.0,
            );
            // build D = exp(-i Omega) (Rz(-phi) x Rz(-theta)) CPHASE
            let signs = [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)];
            let mut diag = [ZERO; 4];
            for (k, (sp, st)) in signs.iter().enumerate() {
                let cphase = if k == 3 { PI } else { 0.0 };
                diag[k] = C64::from_polar(1.0, cphase - om + sp * ph + st * th);
            }
            let sol = solve_phase_system(&diag, 1e-9).unwrap();
            // applying the solved rotations must recover C-PHASE
            for (k, (sp, st)) in signs.iter().enumerate() {
                let cphase = if k == 3 { PI } else { 0.0 };
                let recon = sol.omega - sp * sol.phi - st * sol.theta + diag[k].arg();
                let wrapped = (recon - cphase).sin().atan2((recon - cphase).cos());
                assert_abs_diff_eq!(wrapped, 0.0, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn transverse_reachability_bound_holds_for_random_compositions() {
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        let axes = [ExchangeAxis::E12, ExchangeAxis::E23, ExchangeAxis::E12];
        for _ in 0..1000 {
            let times = [
                rng.random::<f64>() * PI,
                rng.random::<f64>() * PI,
                rng.random::<f64>() * PI,
            ];
            let q = compose_gate_quaternion(&axes, &times);
            let transverse = (q.x * q.x + q.y * q.y).sqrt();
            assert!(transverse <= 3.0f64.sqrt() / 2.0 + 1e-12);
        }
    }

    #[test]
    fn quaternion_norm_is_stable_under_long_products() {
        // 10^6 multiplications by varying rotations, no renormalization
        let mut state = 0x243f6a8885a308d3u64;
        let mut next = || {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        let mut q = Quaternion::IDENTITY;
        for _ in 0..1_000_000u32 {
            let alpha = next() * 2.0 * PI;
            let z = 2.0 * next() - 1.0;
            let phi = next() * 2.0 * PI;
            let r = (1.0 - z * z).sqrt();
            let factor = Quaternion::from_axis_angle(alpha, [r * phi.cos(), r * phi.sin(), z]);
            q = factor.mul(&q);
        }
        assert_abs_diff_eq!(q.norm(), 1.0, epsilon = 1e-12);
    }
}
