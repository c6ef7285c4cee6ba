// Copyright 2026 the exqsim developers
// SPDX-License-Identifier: Apache-2.0

//! Encoded-circuit construction: compilation of logical gate lists to
//! exchange schedules, the three-qubit Deutsch-Jozsa algorithm with all
//! eight oracles, and the merged-versus-serial compound-gate comparison.

use crate::error::{Error, Result};
use crate::gates::{block_swap, CanonicalLibrary, ExchangeSchedule};
use crate::hilbert::{BlochSampler, LogicalCodec, StateVector};
use crate::linalg::{cr, CMat, ONE, ZERO};
use crate::mcwf::{
    ensemble_fidelity, sampled_initial_states, Drive, FidelityEstimate, NoiseModel,
    TrajectoryConfig,
};
use serde::{Deserialize, Serialize};

/// Gates available to compiled logical circuits.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LogicalGate {
    Hadamard(usize),
    Not(usize),
    TGate(usize),
    /// CNOT with arbitrary control and target (lifted through block SWAPs
    /// when the pair is not adjacent, Hadamard-conjugated when reversed).
    Cnot {
        control: usize,
        target: usize,
    },
}

impl LogicalGate {
    fn qubits(&self) -> Vec<usize> {
        match self {
            LogicalGate::Hadamard(q) | LogicalGate::Not(q) | LogicalGate::TGate(q) => vec![*q],
            LogicalGate::Cnot { control, target } => vec![*control, *target],
        }
    }
}

/// A compiled logical circuit: the gate list and its exchange schedule.
#[derive(Clone, Debug)]
pub struct EncodedCircuit {
    pub n_logical: usize,
    pub gates: Vec<LogicalGate>,
    pub schedule: ExchangeSchedule,
}

impl EncodedCircuit {
    pub fn total_time(&self) -> f64 {
        self.schedule.total_time()
    }
}

/// Emit the pulses of one logical gate in application order.
fn gate_pulses(
    gate: &LogicalGate,
    n_logical: usize,
    lib: &CanonicalLibrary,
) -> Result<ExchangeSchedule> {
    let n_sites = 3 * n_logical;
    for q in gate.qubits() {
        if q >= n_logical {
            return Err(Error::UnsupportedGate(format!(
                "{gate:?} addresses qubit {q} of {n_logical}"
            )));
        }
    }
    match gate {
        LogicalGate::Hadamard(q) => lib.hadamard(*q, n_sites),
        LogicalGate::Not(q) => lib.not(*q, n_sites),
        LogicalGate::TGate(q) => lib.t_gate(*q, n_sites),
        LogicalGate::Cnot { control, target } => {
            if control == target {
                return Err(Error::UnsupportedGate(
                    "CNOT needs distinct control and target".into(),
                ));
            }
            if *control > *target {
                // reversed direction: conjugate with Hadamards on both qubits
                let h = lib
                    .hadamard(*control, n_sites)?
                    .concat(&lib.hadamard(*target, n_sites)?)?;
                let inner = gate_pulses(
                    &LogicalGate::Cnot {
                        control: *target,
                        target: *control,
                    },
                    n_logical,
                    lib,
                )?;
                return h.concat(&inner)?.concat(&h);
            }
            if target - control == 1 {
                return lib.cnot30().shifted(3 * control, n_sites);
            }
            // bring the target block adjacent with a block SWAP and recurse
            let swap = block_swap(target - 1, n_sites)?;
            let inner = gate_pulses(
                &LogicalGate::Cnot {
                    control: *control,
                    target: target - 1,
                },
                n_logical,
                lib,
            )?;
            swap.concat(&inner)?.concat(&swap)
        }
    }
}

/// Compile a logical gate list into a single exchange schedule. With
/// `merge` set, consecutive pulses on the same pair are combined mod pi
/// (pulses on disjoint pairs in between do not block the merge).
pub fn compile_logical_circuit(
    gates: &[LogicalGate],
    n_logical: usize,
    lib: &CanonicalLibrary,
    merge: bool,
) -> Result<EncodedCircuit> {
    let n_sites = 3 * n_logical;
    let mut schedule = ExchangeSchedule::empty(n_sites);
    for gate in gates {
        let pulses = gate_pulses(gate, n_logical, lib)?;
        if merge {
            for p in pulses.pulses() {
                schedule.push_merged(*p);
            }
        } else {
            schedule = schedule.concat(&pulses)?;
        }
    }
    Ok(EncodedCircuit {
        n_logical,
        gates: gates.to_vec(),
        schedule,
    })
}

/// Exact matrix of a logical gate on the 2^n logical basis (qubit 0 is
/// the most significant bit). Used to check compilation soundness.
pub fn logical_gate_matrix(gate: &LogicalGate, n_logical: usize) -> CMat {
    let dim = 1usize << n_logical;
    let bitpos = |q: usize| n_logical - 1 - q;
    match gate {
        LogicalGate::Cnot { control, target } => {
            let mut m = CMat::zeros(dim, dim);
            for l in 0..dim {
                let cbit = (l >> bitpos(*control)) & 1;
                let out = if cbit == 1 {
                    l ^ (1 << bitpos(*target))
                } else {
                    l
                };
                m[(out, l)] = ONE;
            }
            m
        }
        _ => {
            let single = match gate {
                LogicalGate::Hadamard(_) => {
                    let s = cr(std::f64::consts::FRAC_1_SQRT_2);
                    CMat::from_rows(&[&[s, s], &[s, -s]])
                }
                LogicalGate::Not(_) => CMat::from_rows(&[&[ZERO, ONE], &[ONE, ZERO]]),
                LogicalGate::TGate(_) => {
                    let mut t = CMat::identity(2);
                    t[(1, 1)] =
                        num_complex::Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4);
                    t
                }
                LogicalGate::Cnot { .. } => unreachable!(),
            };
            let q = gate.qubits()[0];
            let mut m = CMat::identity(1);
            for pos in 0..n_logical {
                let factor = if pos == q {
                    single.clone()
                } else {
                    CMat::identity(2)
                };
                m = m.kron(&factor);
            }
            m
        }
    }
}

/// Logical unitary of a whole gate list.
pub fn logical_circuit_matrix(gates: &[LogicalGate], n_logical: usize) -> CMat {
    let mut m = CMat::identity(1 << n_logical);
    for gate in gates {
        m = logical_gate_matrix(gate, n_logical).mul(&m);
    }
    m
}

/// CNOT between the first and third logical qubits on a nine-site chain:
/// the adjacent 30-pulse CNOT conjugated by one block SWAP on each side,
/// 48 exchanges in total (well under the 76 of four adjacent CNOTs).
pub fn build_cnot13(lib: &CanonicalLibrary) -> Result<ExchangeSchedule> {
    let circuit = compile_logical_circuit(
        &[LogicalGate::Cnot {
            control: 0,
            target: 2,
        }],
        3,
        lib,
        false,
    )?;
    Ok(circuit.schedule.with_label("cnot13"))
}

// ---------------------------------------------------------------------------
// Deutsch-Jozsa.
// ---------------------------------------------------------------------------

/// One of the eight black-box functions f(x1, x2) of the three-qubit
/// algorithm: ids 0..7 enumerate {0, 1, x1, !x1, x2, !x2, x1^x2, !(x1^x2)}.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DJOracle {
    pub id: u8,
}

impl DJOracle {
    pub fn new(id: u8) -> Result<Self> {
        if id > 7 {
            return Err(Error::InvalidConfig(format!("oracle id {id} out of 0..=7")));
        }
        Ok(DJOracle { id })
    }

    pub fn all() -> [DJOracle; 8] {
        core::array::from_fn(|id| DJOracle { id: id as u8 })
    }

    pub fn eval(&self, x1: bool, x2: bool) -> bool {
        let base = match self.id / 2 {
            0 => false,
            1 => x1,
            2 => x2,
            _ => x1 ^ x2,
        };
        base ^ (self.id % 2 == 1)
    }

    pub fn is_constant(&self) -> bool {
        self.id < 2
    }

    /// Function evaluation as gates onto the answer qubit (qubit 2):
    /// CNOTs from the query qubits plus an optional NOT.
    pub fn gates(&self) -> Vec<LogicalGate> {
        let mut g = Vec::new();
        match self.id / 2 {
            0 => {}
            1 => g.push(LogicalGate::Cnot {
                control: 0,
                target: 2,
            }),
            2 => g.push(LogicalGate::Cnot {
                control: 1,
                target: 2,
            }),
            _ => {
                g.push(LogicalGate::Cnot {
                    control: 0,
                    target: 2,
                });
                g.push(LogicalGate::Cnot {
                    control: 1,
                    target: 2,
                });
            }
        }
        if self.id % 2 == 1 {
            g.push(LogicalGate::Not(2));
        }
        g
    }
}

/// The full algorithm circuit: prepare the answer qubit in |1>_L, Hadamard
/// everything, evaluate the oracle, Hadamard the two query qubits. The
/// answer-qubit preparation is part of the timed circuit.
pub fn build_dj_circuit(oracle: DJOracle, lib: &CanonicalLibrary) -> Result<EncodedCircuit> {
    let mut gates = vec![
        LogicalGate::Not(2),
        LogicalGate::Hadamard(0),
        LogicalGate::Hadamard(1),
        LogicalGate::Hadamard(2),
    ];
    gates.extend(oracle.gates());
    gates.push(LogicalGate::Hadamard(0));
    gates.push(LogicalGate::Hadamard(1));
    compile_logical_circuit(&gates, 3, lib, true)
}

/// Probability that a projective measurement of the query qubits returns
/// the logical |00> outcome (any answer-qubit value).
pub fn query_zero_probability(state: &StateVector, codec: &LogicalCodec) -> Result<f64> {
    let coords = codec.decode(state)?;
    // logical indices 0b000 and 0b001: query bits zero
    Ok(coords[0].norm_sqr() + coords[1].norm_sqr())
}

/// Per-oracle fidelities and the worst case over the eight oracles.
#[derive(Clone, Debug, Serialize)]
pub struct DjFidelity {
    pub per_oracle: Vec<FidelityEstimate>,
    pub worst_oracle: u8,
    pub worst: f64,
}

/// Initial-state policy for the algorithmic-fidelity run.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DjInputs {
    /// The algorithm's defined input, encoded |000>_L (the answer-qubit
    /// preparation is part of the circuit).
    Canonical,
    /// Random encoded query states drawn from the logical Bloch sphere.
    Sampled {
        n_states: usize,
        sampler: BlochSampler,
    },
}

/// Worst-case algorithmic fidelity over the eight oracle versions. Each
/// version is propagated for its own total time and compared against its
/// noise-free reference.
pub fn dj_algorithmic_fidelity(
    lib: &CanonicalLibrary,
    noise: &NoiseModel,
    cfg: &TrajectoryConfig,
    inputs: DjInputs,
) -> Result<DjFidelity> {
    let codec = LogicalCodec::new(3);
    let initials: Vec<StateVector> = match inputs {
        DjInputs::Canonical => {
            vec![codec.codeword(0)]
        }
        DjInputs::Sampled { n_states, sampler } => {
            sampled_initial_states(&codec, sampler, n_states, cfg.seed)?
        }
    };
    let mut per_oracle = Vec::with_capacity(8);
    for oracle in DJOracle::all() {
        let circuit = build_dj_circuit(oracle, lib)?;
        let drive = Drive::from_schedule(&circuit.schedule)?;
        let mut est = ensemble_fidelity(&initials, &drive, noise, cfg)?;
        est.label = format!("dj-oracle-{}", oracle.id);
        per_oracle.push(est);
    }
    let (worst_oracle, worst) = per_oracle
        .iter()
        .enumerate()
        .map(|(i, e)| (i as u8, e.mean))
        .min_by(|a, b| a.1.partial_cmp(&b.1).expect("finite fidelity"))
        .expect("eight oracles");
    Ok(DjFidelity {
        per_oracle,
        worst_oracle,
        worst,
    })
}

// ---------------------------------------------------------------------------
// Merged versus serial compound gate.
// ---------------------------------------------------------------------------

/// Fidelity pair for the Hadamard-sandwiched CNOT implemented two ways
/// under identical noise and initial states.
#[derive(Clone, Debug, Serialize)]
pub struct SandwichComparison {
    pub serial: FidelityEstimate,
    pub merged: FidelityEstimate,
}

/// The serial compilation: four three-pulse Hadamards around the 30-pulse
/// CNOT, concatenated without merging (42 pulses).
pub fn sandwich_serial_circuit(lib: &CanonicalLibrary) -> Result<EncodedCircuit> {
    let gates = [
        LogicalGate::Hadamard(0),
        LogicalGate::Hadamard(1),
        LogicalGate::Cnot {
            control: 0,
            target: 1,
        },
        LogicalGate::Hadamard(0),
        LogicalGate::Hadamard(1),
    ];
    compile_logical_circuit(&gates, 2, lib, false)
}

/// Run both realizations of the compound gate on the same sampled states.
pub fn sandwiched_cnot_comparison(
    lib: &CanonicalLibrary,
    noise: &NoiseModel,
    cfg: &TrajectoryConfig,
    n_states: usize,
    sampler: BlochSampler,
) -> Result<SandwichComparison> {
    let codec = LogicalCodec::new(2);
    let initials = sampled_initial_states(&codec, sampler, n_states, cfg.seed)?;
    let serial = sandwich_serial_circuit(lib)?;
    let serial_drive =
        Drive::from_schedule(&serial.schedule.clone().with_label("sandwich-serial-42"))?;
    let merged_drive = Drive::from_schedule(lib.sandwich31())?;
    Ok(SandwichComparison {
        serial: ensemble_fidelity(&initials, &serial_drive, noise, cfg)?,
        merged: ensemble_fidelity(&initials, &merged_drive, noise, cfg)?,
    })
}
