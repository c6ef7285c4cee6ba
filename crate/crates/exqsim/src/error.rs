// Copyright 2026 the exqsim developers
// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

/// Errors produced by state construction, schedule execution, synthesis and
/// trajectory propagation.
#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    #[error("amplitude vector length {len} is not a power of two")]
    NotPowerOfTwo { len: usize },

    #[error("site index {site} out of range for {n_sites} sites")]
    SiteOutOfRange { site: usize, n_sites: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("state is not normalized (norm = {norm})")]
    NotNormalized { norm: f64 },

    #[error("pulse on ({i}, {j}) is not nearest-neighbour; executable schedules need |i - j| = 1")]
    NonAdjacentPulse { i: usize, j: usize },

    #[error("exchange pulse needs two distinct sites, got ({i}, {j})")]
    DegeneratePair { i: usize, j: usize },

    #[error(
        "collapse probability per step P_tot = {p_tot:.3e} exceeds guard {guard} \
         (gamma_dep = {gamma_dep:.3e}, gamma_emi = {gamma_emi:.3e}, dt = {dt:.3e}); refine the step size"
    )]
    StepSizeViolation {
        p_tot: f64,
        guard: f64,
        gamma_dep: f64,
        gamma_emi: f64,
        dt: f64,
    },

    #[error("target is not reachable: {0}")]
    NoSolution(String),

    #[error("matrix is not unitary (max |U^H U - I| = {deviation:.3e})")]
    NonUnitary { deviation: f64 },

    #[error("negative rate: {name} = {value}")]
    NegativeRate { name: &'static str, value: f64 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("unsupported logical gate: {0}")]
    UnsupportedGate(String),

    #[error("i/o error: {0}")]
    Io(String),

    #[error("malformed schedule or config file: {0}")]
    Parse(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
