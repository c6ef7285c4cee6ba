// Copyright 2026 the exqsim developers
// SPDX-License-Identifier: Apache-2.0

//! State vectors over a chain of spin-1/2 sites, bitwise spin operators,
//! the three-spin logical encoding and random logical-state sampling.
//!
//! Basis convention: basis index `k` encodes one spin configuration, with
//! bit `j` of `k` holding the label of site `j` (site 0 is the lowest bit).
//! Bit value 1 is the "occupied" label: `S+` raises 0 -> 1, `S-` lowers
//! 1 -> 0 and `Sz |k> = 1/2 (1 - 2 bit) |k>`. Emission damping therefore
//! counts set bits.

use crate::error::{Error, Result};
use crate::linalg::{cr, C64, ONE, ZERO};
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Dense complex amplitude vector over the 2^N spin basis.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    amps: Vec<C64>,
    n_sites: usize,
}

impl StateVector {
    /// Computational basis state |k> on `n_sites` spins.
    pub fn basis(n_sites: usize, k: usize) -> Self {
        let dim = 1usize << n_sites;
        assert!(k < dim, "basis index out of range");
        let mut amps = vec![ZERO; dim];
        amps[k] = ONE;
        StateVector { amps, n_sites }
    }

    /// Wrap an amplitude vector; the length must be a power of two.
    pub fn from_amplitudes(amps: Vec<C64>) -> Result<Self> {
        let len = amps.len();
        if len == 0 || !len.is_power_of_two() {
            return Err(Error::NotPowerOfTwo { len });
        }
        let n_sites = len.trailing_zeros() as usize;
        Ok(StateVector { amps, n_sites })
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn amplitudes_mut(&mut self) -> &mut [C64] {
        &mut self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Rescale to unit norm. Errors on (numerically) zero vectors.
    pub fn normalize(&mut self) -> Result<()> {
        let n = self.norm();
        if n < 1e-150 {
            return Err(Error::NotNormalized { norm: n });
        }
        let inv = 1.0 / n;
        for a in &mut self.amps {
            *a *= inv;
        }
        Ok(())
    }

    pub fn is_normalized(&self, tol: f64) -> bool {
        (self.norm_sqr() - 1.0).abs() <= tol
    }

    pub fn inner(&self, other: &StateVector) -> Result<C64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: other.dim(),
            });
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Check the site index against the chain length.
    fn check_site(&self, site: usize) -> Result<()> {
        if site >= self.n_sites {
            return Err(Error::SiteOutOfRange {
                site,
                n_sites: self.n_sites,
            });
        }
        Ok(())
    }
}

/// Single-site spin operators in the bitwise basis.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum SpinOp {
    Sz,
    SPlus,
    SMinus,
}

/// Apply a single-site spin operator. The result is generally not
/// normalized; `S+` and `S-` are not unitary.
pub fn apply_single_spin_op(state: &StateVector, site: usize, op: SpinOp) -> Result<StateVector> {
    state.check_site(site)?;
    let dim = state.dim();
    let mask = 1usize << site;
    let mut out = vec![ZERO; dim];
    match op {
        SpinOp::Sz => {
            for (k, a) in state.amps.iter().enumerate() {
                let bit = ((k & mask) != 0) as i32;
                out[k] = a * cr(0.5 * (1 - 2 * bit) as f64);
            }
        }
        SpinOp::SPlus => {
            for (k, a) in state.amps.iter().enumerate() {
                if k & mask == 0 {
                    out[k | mask] = *a;
                }
            }
        }
        SpinOp::SMinus => {
            for (k, a) in state.amps.iter().enumerate() {
                if k & mask != 0 {
                    out[k & !mask] = *a;
                }
            }
        }
    }
    Ok(StateVector {
        amps: out,
        n_sites: state.n_sites,
    })
}

/// |<a|b>|^2 for normalized states of equal dimension.
pub fn overlap_fidelity(a: &StateVector, b: &StateVector) -> Result<f64> {
    Ok(a.inner(b)?.norm_sqr())
}

/// Amplitudes of the two logical codewords on one three-site block,
/// as (block index, amplitude) pairs. Block index bit 0 is the first
/// site of the block.
///
/// The singlet-based |0>_L is taken verbatim; the sign of |1>_L is fixed
/// so that the two within-block exchanges act on the encoded qubit as
/// E12 = -sz and E23 = (sqrt(3)/2) sx + (1/2) sz, which is the convention
/// every gate-time table in this crate is built against.
pub const CODEWORD_ZERO: [(usize, f64); 2] = [
    (0b110, std::f64::consts::FRAC_1_SQRT_2),
    (0b101, -std::f64::consts::FRAC_1_SQRT_2),
];

pub fn codeword_one() -> [(usize, f64); 3] {
    [
        (0b011, -(2.0f64 / 3.0).sqrt()),
        (0b110, 1.0 / 6.0f64.sqrt()),
        (0b101, 1.0 / 6.0f64.sqrt()),
    ]
}

/// Map between `n` logical qubits and `3n` physical sites.
///
/// Logical qubit `i` occupies sites `3i .. 3i+2`; logical basis states are
/// ordered lexicographically with qubit 0 as the most significant bit.
#[derive(Clone, Debug)]
pub struct LogicalCodec {
    n_logical: usize,
    /// Sparse isometry columns: per logical basis state, the list of
    /// (physical index, amplitude).
    columns: Vec<Vec<(usize, f64)>>,
}

impl LogicalCodec {
    pub fn new(n_logical: usize) -> Self {
        assert!(n_logical >= 1);
        let c0: Vec<(usize, f64)> = CODEWORD_ZERO.to_vec();
        let c1: Vec<(usize, f64)> = codeword_one().to_vec();
        let mut columns = Vec::with_capacity(1 << n_logical);
        for l in 0..(1usize << n_logical) {
            let mut col: Vec<(usize, f64)> = vec![(0, 1.0)];
            for q in 0..n_logical {
                let bit = (l >> (n_logical - 1 - q)) & 1;
                let word = if bit == 0 { &c0 } else { &c1 };
                let mut next = Vec::with_capacity(col.len() * word.len());
                for &(k, a) in &col {
                    for &(kb, ab) in word {
                        next.push((k | (kb << (3 * q)), a * ab));
                    }
                }
                col = next;
            }
            columns.push(col);
        }
        LogicalCodec { n_logical, columns }
    }

    pub fn n_logical(&self) -> usize {
        self.n_logical
    }

    pub fn n_physical(&self) -> usize {
        3 * self.n_logical
    }

    pub fn logical_dim(&self) -> usize {
        1 << self.n_logical
    }

    pub fn physical_dim(&self) -> usize {
        1 << self.n_physical()
    }

    /// The physical codeword for logical basis state `l`.
    pub fn codeword(&self, l: usize) -> StateVector {
        let mut amps = vec![ZERO; self.physical_dim()];
        for &(k, a) in &self.columns[l] {
            amps[k] += cr(a);
        }
        StateVector {
            amps,
            n_sites: self.n_physical(),
        }
    }

    /// W . logical: embed a logical amplitude vector into the physical space.
    pub fn encode(&self, logical: &[C64]) -> Result<StateVector> {
        if logical.len() != self.logical_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.logical_dim(),
                got: logical.len(),
            });
        }
        let mut amps = vec![ZERO; self.physical_dim()];
        for (l, c) in logical.iter().enumerate() {
            if *c == ZERO {
                continue;
            }
            for &(k, a) in &self.columns[l] {
                amps[k] += c * cr(a);
            }
        }
        Ok(StateVector {
            amps,
            n_sites: self.n_physical(),
        })
    }

    /// W^H . psi: the logical coordinates of a physical state.
    pub fn decode(&self, state: &StateVector) -> Result<Vec<C64>> {
        if state.dim() != self.physical_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.physical_dim(),
                got: state.dim(),
            });
        }
        Ok(self
            .columns
            .iter()
            .map(|col| col.iter().map(|&(k, a)| cr(a) * state.amps[k]).sum::<C64>())
            .collect())
    }

    /// Weight of `state` inside and outside the encoded subspace.
    pub fn subspace_weights(&self, state: &StateVector) -> Result<(f64, f64)> {
        let logical = self.decode(state)?;
        let w_in: f64 = logical.iter().map(|c| c.norm_sqr()).sum();
        let w_in = w_in.min(1.0);
        Ok((w_in, (1.0 - w_in).max(0.0)))
    }
}

/// Seeded, stream-indexed RNG: one stream per trajectory, reproducible
/// independent of scheduling order.
#[derive(Clone, Debug)]
pub struct RngStream {
    pub seed: u64,
    pub stream: u64,
}

impl RngStream {
    pub fn new(seed: u64, stream: u64) -> Self {
        RngStream { seed, stream }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream);
        rng
    }
}

/// How random logical initial states are drawn.
///
/// `SurfaceUniform` draws uniformly w.r.t. the surface measure of the
/// hypersphere of logical amplitudes; it is the default because the
/// single-qubit dephasing average (2 + e^{-gt})/3 holds exactly under it.
/// `UniformAngles` draws every free hyperspherical angle uniformly on its
/// natural range instead, with the first phase pinned to zero and the
/// pinned polar angle set to pi.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BlochSampler {
    #[default]
    SurfaceUniform,
    UniformAngles,
}

/// Draw a normalized logical amplitude vector of dimension 2^n.
pub fn sample_logical_bloch_state(
    n_logical: usize,
    sampler: BlochSampler,
    rng: &mut impl Rng,
) -> Vec<C64> {
    assert!(n_logical >= 1);
    let dim = 1usize << n_logical;
    match sampler {
        BlochSampler::SurfaceUniform => {
            // Uniform on the unit sphere in C^dim ~ R^(2 dim): normalized
            // standard Gaussian components.
            let mut v: Vec<C64> = (0..dim)
                .map(|_| Complex64::new(gauss(rng), gauss(rng)))
                .collect();
            let n = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
            for a in &mut v {
                *a /= n;
            }
            v
        }
        BlochSampler::UniformAngles => {
            let thetas: Vec<f64> = (0..dim)
                .map(|i| {
                    if i == 0 {
                        std::f64::consts::PI
                    } else {
                        rng.random::<f64>() * std::f64::consts::PI
                    }
                })
                .collect();
            let phis: Vec<f64> = (0..dim)
                .map(|k| {
                    if k == 0 {
                        0.0
                    } else {
                        rng.random::<f64>() * std::f64::consts::TAU
                    }
                })
                .collect();
            uniform_angle_coefficients(&thetas, &phis)
        }
    }
}

/// The product-of-sines-and-cosines chain for given angles:
/// c_k = e^{i phi_k} cos(theta_{D-k-1}) prod_{j=D-k}^{D-1} sin(theta_j),
/// with theta_0 participating only through its (unit-magnitude) cosine.
/// Normalization is identical to one for any angle values.
pub fn uniform_angle_coefficients(thetas: &[f64], phis: &[f64]) -> Vec<C64> {
    let dim = thetas.len();
    assert_eq!(phis.len(), dim);
    let mut coeffs = Vec::with_capacity(dim);
    for k in 0..dim {
        let mut mag = thetas[dim - k - 1].cos();
        for theta in &thetas[dim - k..] {
            mag *= theta.sin();
        }
        coeffs.push(Complex64::from_polar(1.0, phis[k]) * cr(mag));
    }
    coeffs
}

fn gauss(rng: &mut impl Rng) -> f64 {
    // Box-Muller; avoids pulling in rand_distr for one distribution.
    let u1: f64 = loop {
        let u = rng.random::<f64>();
        if u > 0.0 {
            break u;
        }
    };
    let u2: f64 = rng.random();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}
