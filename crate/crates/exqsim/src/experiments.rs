// Copyright 2026 the exqsim developers
// SPDX-License-Identifier: Apache-2.0

//! Config-driven experiment runner: gate verification, synthesis jobs,
//! fidelity sweeps, and plot-ready CSV/JSON emission.
//!
//! Every run writes one or more CSV data series, a JSON summary and a
//! run manifest carrying the seed and the config hash; identical configs
//! and seeds produce byte-identical data files.

use crate::algorithms::{dj_algorithmic_fidelity, sandwiched_cnot_comparison, DjInputs};
use crate::error::{Error, Result};
use crate::gates::{schedule_logical_block, schedule_to_json, CanonicalLibrary, ExchangeSchedule};
use crate::hilbert::{
    sample_logical_bloch_state, BlochSampler, LogicalCodec, RngStream, StateVector,
};
use crate::linalg::CMat;
use crate::mcwf::{
    ensemble_fidelity, ensemble_fidelity_sampled, Backend, Drive, FidelityEstimate, NoiseModel,
    TrajectoryConfig,
};
use crate::synth::{cnot_matrix, multi_start_synthesize, CnotCost, NelderMeadOptions};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

/// Trajectory-count presets: `smoke` for fast checks, `figure` for
/// figure-grade statistics.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TrajPreset {
    Smoke,
    Figure,
}

pub const SMOKE_TRAJ: usize = 512;
pub const FIGURE_TRAJ: usize = 25_600;

/// Experiment families exposed by the runner.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    GateVerify,
    Synth,
    CnotFidelity,
    FreeEvolution,
    EmissionFidelity,
    Dj,
    Sandwich,
    BareCnotCompare,
}

impl ExperimentKind {
    pub fn parse(s: &str) -> Result<Self> {
        serde_json::from_value(serde_json::Value::String(s.to_string()))
            .map_err(|_| Error::InvalidConfig(format!("unknown experiment kind '{s}'")))
    }

    pub fn name(&self) -> &'static str {
        match self {
            ExperimentKind::GateVerify => "gate-verify",
            ExperimentKind::Synth => "synth",
            ExperimentKind::CnotFidelity => "cnot-fidelity",
            ExperimentKind::FreeEvolution => "free-evolution",
            ExperimentKind::EmissionFidelity => "emission-fidelity",
            ExperimentKind::Dj => "dj",
            ExperimentKind::Sandwich => "sandwich",
            ExperimentKind::BareCnotCompare => "bare-cnot-compare",
        }
    }
}

/// One noise-grid point.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoisePoint {
    #[serde(default)]
    pub gamma_dep: f64,
    #[serde(default)]
    pub gamma_emi: f64,
}

/// Runner configuration; unspecified fields take kind-appropriate
/// defaults.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    #[serde(default)]
    pub label: String,
    /// Explicit noise grid; empty means the default sweep for the kind.
    #[serde(default)]
    pub noise_grid: Vec<NoisePoint>,
    #[serde(default)]
    pub preset: Option<TrajPreset>,
    #[serde(default)]
    pub n_traj: Option<usize>,
    #[serde(default)]
    pub n_initial_states: Option<usize>,
    #[serde(default)]
    pub steps_per_gate: Option<usize>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub backend: Option<Backend>,
    #[serde(default)]
    pub sampler: Option<BlochSampler>,
    /// Multi-start shot count for synthesis runs.
    #[serde(default)]
    pub n_shots: Option<usize>,
    /// Initial-state policy for Deutsch-Jozsa runs.
    #[serde(default)]
    pub dj_inputs: Option<DjInputs>,
    /// Record collapse events for this many trajectories of the first
    /// grid point (fidelity sweeps only).
    #[serde(default)]
    pub trace_trajectories: Option<usize>,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let config: ExperimentConfig = serde_json::from_str(text)?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        for p in &self.noise_grid {
            if p.gamma_dep < 0.0 || p.gamma_emi < 0.0 {
                return Err(Error::InvalidConfig(
                    "noise grid rates must be zero or positive".into(),
                ));
            }
        }
        if self.n_traj == Some(0) {
            return Err(Error::InvalidConfig("n_traj must be >= 1".into()));
        }
        if self.steps_per_gate == Some(0) {
            return Err(Error::InvalidConfig("steps_per_gate must be >= 1".into()));
        }
        Ok(())
    }

    fn resolved_traj(&self) -> usize {
        self.n_traj.unwrap_or(match self.preset {
            Some(TrajPreset::Figure) => FIGURE_TRAJ,
            _ => SMOKE_TRAJ,
        })
    }

    fn trajectory_config(&self) -> TrajectoryConfig {
        TrajectoryConfig {
            steps_per_gate: self.steps_per_gate.unwrap_or(20),
            n_traj: self.resolved_traj(),
            seed: self.seed.unwrap_or(0),
            backend: self.backend.unwrap_or_default(),
            p_tot_guard: 0.1,
        }
    }

    fn grid(&self) -> Vec<NoisePoint> {
        if !self.noise_grid.is_empty() {
            return self.noise_grid.clone();
        }
        match self.kind {
            ExperimentKind::EmissionFidelity => log_grid(1e-6, 1e-4, 8)
                .into_iter()
                .map(|g| NoisePoint {
                    gamma_dep: 0.0,
                    gamma_emi: g,
                })
                .collect(),
            _ => log_grid(1e-5, 1e-2, 8)
                .into_iter()
                .map(|g| NoisePoint {
                    gamma_dep: g,
                    gamma_emi: 0.0,
                })
                .collect(),
        }
    }
}

/// Logarithmic grid with `per_decade` points per decade, inclusive ends.
pub fn log_grid(lo: f64, hi: f64, per_decade: usize) -> Vec<f64> {
    let decades = (hi / lo).log10();
    let n = (decades * per_decade as f64).round() as usize;
    (0..=n)
        .map(|k| lo * 10f64.powf(k as f64 / per_decade as f64))
        .collect()
}

/// Files produced by a run.
#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub kind: ExperimentKind,
    pub out_dir: PathBuf,
    pub data_files: Vec<PathBuf>,
    pub summary_file: PathBuf,
    pub manifest_file: PathBuf,
}

fn config_hash(config: &ExperimentConfig) -> String {
    let canon = serde_json::to_string(config).expect("config serializes");
    let mut hasher = Sha256::new();
    hasher.update(canon.as_bytes());
    let digest = hasher.finalize();
    let mut out = String::new();
    for b in digest.iter().take(8) {
        let _ = write!(out, "{b:02x}");
    }
    out
}

fn fmt_f(x: f64) -> String {
    format!("{x:.10e}")
}

struct OutputWriter {
    dir: PathBuf,
    stamp: String,
    files: Vec<PathBuf>,
}

impl OutputWriter {
    fn new(dir: &Path, hash: &str, seed: u64) -> Result<Self> {
        std::fs::create_dir_all(dir)?;
        Ok(OutputWriter {
            dir: dir.to_path_buf(),
            stamp: format!("# config={hash} seed={seed}"),
            files: Vec::new(),
        })
    }

    fn write_csv(&mut self, name: &str, header: &str, rows: &[String]) -> Result<PathBuf> {
        let path = self.dir.join(name);
        let mut text = String::new();
        let _ = writeln!(text, "{}", self.stamp);
        let _ = writeln!(text, "{header}");
        for row in rows {
            let _ = writeln!(text, "{row}");
        }
        std::fs::write(&path, text)?;
        self.files.push(path.clone());
        Ok(path)
    }

    fn write_text(&mut self, name: &str, text: &str) -> Result<PathBuf> {
        let path = self.dir.join(name);
        std::fs::write(&path, text)?;
        self.files.push(path.clone());
        Ok(path)
    }
}

fn fidelity_csv_row(kind: &str, est: &FidelityEstimate) -> String {
    format!(
        "{kind},{label},{gd},{ge},{f},{se},{nt},{ns},{tt},{conv}",
        label = est.label,
        gd = fmt_f(est.gamma_dep),
        ge = fmt_f(est.gamma_emi),
        f = fmt_f(est.mean),
        se = fmt_f(est.std_error),
        nt = est.n_traj,
        ns = est.n_initial_states,
        tt = fmt_f(est.total_time),
        conv = est.converged,
    )
}

const FIDELITY_HEADER: &str =
    "series,label,gamma_dep,gamma_emi,fidelity,std_error,n_traj,n_initial_states,total_time,converged";

/// Unencoded two-qubit CNOT baseline: a single coherent block with the
/// same duration as the 19-pulse core, under the same noise.
pub fn bare_cnot_baseline(
    lib: &CanonicalLibrary,
    noise: &NoiseModel,
    cfg: &TrajectoryConfig,
    n_states: usize,
    sampler: BlochSampler,
) -> Result<FidelityEstimate> {
    let duration = lib.core19().total_time();
    let drive = Drive::bare_cnot(duration);
    let mut rng = RngStream::new(cfg.seed, u64::MAX / 3).rng();
    let initials: Vec<StateVector> = (0..n_states.max(1))
        .map(|_| StateVector::from_amplitudes(sample_logical_bloch_state(2, sampler, &mut rng)))
        .collect::<Result<Vec<_>>>()?;
    ensemble_fidelity(&initials, &drive, noise, cfg)
}

/// Execute an experiment and write its report files under `out_dir`.
pub fn run_experiment(config: &ExperimentConfig, out_dir: &Path) -> Result<RunReport> {
    config.validate()?;
    let started = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let wall = Instant::now();
    let pool = thread_pool()?;
    let report = pool.install(|| dispatch(config, out_dir))?;
    let manifest = serde_json::json!({
        "kind": config.kind.name(),
        "label": config.label,
        "config_sha256": config_hash(config),
        "seed": config.seed.unwrap_or(0),
        "version": env!("CARGO_PKG_VERSION"),
        "started_unix_s": started,
        "wall_s": wall.elapsed().as_secs_f64(),
        "outputs": report
            .data_files
            .iter()
            .chain(std::iter::once(&report.summary_file))
            .map(|p| p.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default())
            .collect::<Vec<_>>(),
    });
    let manifest_path = out_dir.join("run_manifest.json");
    std::fs::write(&manifest_path, serde_json::to_string_pretty(&manifest)?)?;
    Ok(RunReport {
        manifest_file: manifest_path,
        ..report
    })
}

fn thread_pool() -> Result<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(value) = std::env::var("EXQSIM_THREADS") {
        let n: usize = value.parse().map_err(|_| {
            Error::InvalidConfig(format!("EXQSIM_THREADS='{value}' is not a count"))
        })?;
        if n > 0 {
            builder = builder.num_threads(n);
        }
    }
    builder
        .build()
        .map_err(|e| Error::InvalidConfig(format!("thread pool: {e}")))
}

fn dispatch(config: &ExperimentConfig, out_dir: &Path) -> Result<RunReport> {
    let hash = config_hash(config);
    let seed = config.seed.unwrap_or(0);
    let mut writer = OutputWriter::new(out_dir, &hash, seed)?;
    let lib = CanonicalLibrary::load();
    let summary = match config.kind {
        ExperimentKind::GateVerify => run_gate_verify(&lib, &mut writer)?,
        ExperimentKind::Synth => run_synth(&lib, config, &mut writer)?,
        ExperimentKind::CnotFidelity => {
            run_fidelity_sweep(&lib, config, &mut writer, FidelitySubject::Cnot30)?
        }
        ExperimentKind::FreeEvolution => {
            run_fidelity_sweep(&lib, config, &mut writer, FidelitySubject::FreeEvolution)?
        }
        ExperimentKind::EmissionFidelity => {
            run_fidelity_sweep(&lib, config, &mut writer, FidelitySubject::Cnot30)?
        }
        ExperimentKind::Dj => run_dj(&lib, config, &mut writer)?,
        ExperimentKind::Sandwich => run_sandwich(&lib, config, &mut writer)?,
        ExperimentKind::BareCnotCompare => run_bare_compare(&lib, config, &mut writer)?,
    };
    let summary_file =
        writer.write_text("summary.json", &serde_json::to_string_pretty(&summary)?)?;
    Ok(RunReport {
        kind: config.kind,
        out_dir: out_dir.to_path_buf(),
        data_files: writer.files[..writer.files.len() - 1].to_vec(),
        summary_file,
        manifest_file: PathBuf::new(),
    })
}

fn aligned_max_dev(block: &CMat, target: &CMat) -> f64 {
    block.phase_aligned_to(target).max_abs_diff(target)
}

fn run_gate_verify(lib: &CanonicalLibrary, writer: &mut OutputWriter) -> Result<serde_json::Value> {
    let codec = LogicalCodec::new(2);
    let cnot = cnot_matrix();
    let reversed_cnot_target = {
        // reversed CNOT: the sandwich target
        let h = CMat::from_rows(&[
            &[
                crate::linalg::cr(std::f64::consts::FRAC_1_SQRT_2),
                crate::linalg::cr(std::f64::consts::FRAC_1_SQRT_2),
            ],
            &[
                crate::linalg::cr(std::f64::consts::FRAC_1_SQRT_2),
                crate::linalg::cr(-std::f64::consts::FRAC_1_SQRT_2),
            ],
        ]);
        let hh = h.kron(&h);
        hh.mul(&cnot).mul(&hh)
    };
    let cost = CnotCost::new(lib);
    let mut rows = Vec::new();
    let mut entries = Vec::new();
    let cases: [(&ExchangeSchedule, &CMat, &str); 3] = [
        (lib.cnot30(), &cnot, "cnot"),
        (lib.cnot35(), &cnot, "cnot"),
        (lib.sandwich31(), &reversed_cnot_target, "reversed-cnot"),
    ];
    for (sched, target, target_name) in cases {
        let block = schedule_logical_block(sched, &codec);
        let dev = aligned_max_dev(&block, target);
        let label = sched.label.clone().unwrap_or_default();
        rows.push(format!(
            "{label},{target_name},{n},{tt},{dev}",
            n = sched.len(),
            tt = fmt_f(sched.total_time()),
            dev = fmt_f(dev),
        ));
        entries.push(serde_json::json!({
            "schedule": label,
            "target": target_name,
            "pulses": sched.len(),
            "total_time": sched.total_time(),
            "max_element_deviation": dev,
        }));
    }
    let cnot35_eval = cost.eval(&cnot35_local_times());
    writer.write_csv(
        "gate_verify.csv",
        "schedule,target,pulses,total_time,max_element_deviation",
        &rows,
    )?;
    Ok(serde_json::json!({
        "schedules": entries,
        "cnot35_cost": {
            "distance": cnot35_eval.distance,
            "distance_raw": cnot35_eval.distance_raw,
            "leakage_abs_sum": cnot35_eval.leakage,
            "leakage_probability": cnot35_eval.leakage_prob,
        },
    }))
}

/// The sixteen local times of the canonical 35-pulse schedule, in the
/// cost layout (exit side first).
pub fn cnot35_local_times() -> [f64; 16] {
    [
        2.462204, 0.977712, 2.209031, 0.977711, 0.690514, 2.837899, 2.298306, 1.411241, 0.727495,
        1.761338, 0.368173, 1.761338, 2.820908, 3.709248, 0.090528, 1.622010,
    ]
}

fn run_synth(
    lib: &CanonicalLibrary,
    config: &ExperimentConfig,
    writer: &mut OutputWriter,
) -> Result<serde_json::Value> {
    let n_shots = config.n_shots.unwrap_or(16);
    let seed = config.seed.unwrap_or(0);
    let opts = NelderMeadOptions::default();
    let result = multi_start_synthesize(lib, n_shots, seed, &opts)?;
    let shot_rows: Vec<String> = result
        .shots
        .iter()
        .map(|s| format!("{},{}", s.shot, fmt_f(s.initial_cost)))
        .collect();
    writer.write_csv("synth_shots.csv", "shot,initial_cost", &shot_rows)?;
    let trace_rows: Vec<String> = result
        .optimizer
        .history
        .iter()
        .enumerate()
        .map(|(i, c)| format!("{i},{}", fmt_f(*c)))
        .collect();
    writer.write_csv("synth_convergence.csv", "iteration,best_cost", &trace_rows)?;
    writer.write_text("best_schedule.json", &schedule_to_json(&result.schedule))?;
    Ok(serde_json::json!({
        "n_shots": n_shots,
        "iterations": result.optimizer.iterations,
        "converged": result.optimizer.converged,
        "cost": {
            "distance": result.cost.distance,
            "distance_raw": result.cost.distance_raw,
            "leakage_abs_sum": result.cost.leakage,
            "leakage_probability": result.cost.leakage_prob,
            "total": result.cost.total(),
        },
    }))
}

enum FidelitySubject {
    Cnot30,
    FreeEvolution,
}

fn run_fidelity_sweep(
    lib: &CanonicalLibrary,
    config: &ExperimentConfig,
    writer: &mut OutputWriter,
    subject: FidelitySubject,
) -> Result<serde_json::Value> {
    let codec = LogicalCodec::new(2);
    let cfg = config.trajectory_config();
    let sampler = config.sampler.unwrap_or_default();
    let n_states = config.n_initial_states.unwrap_or(16);
    let drive = match subject {
        FidelitySubject::Cnot30 => Drive::from_schedule(lib.cnot30())?,
        FidelitySubject::FreeEvolution => Drive::idle(6, lib.cnot30().total_time()),
    };
    let mut rows = Vec::new();
    let mut series = Vec::new();
    for point in config.grid() {
        let noise = NoiseModel::new(point.gamma_dep, point.gamma_emi)?;
        let est = ensemble_fidelity_sampled(&codec, sampler, n_states, &drive, &noise, &cfg)?;
        rows.push(fidelity_csv_row(config.kind.name(), &est));
        series.push(est);
    }
    writer.write_csv("fidelity.csv", FIDELITY_HEADER, &rows)?;
    if let Some(n_traces) = config.trace_trajectories {
        let point = config.grid()[0];
        let noise = NoiseModel::new(point.gamma_dep, point.gamma_emi)?;
        let initial = crate::mcwf::sampled_initial_states(&codec, sampler, 1, cfg.seed)?
            .pop()
            .expect("one state");
        let mut trace_rows = Vec::new();
        for k in 0..n_traces {
            let (_, events) = crate::mcwf::run_trajectory_traced(
                &initial,
                &drive,
                &noise,
                &cfg,
                &RngStream::new(cfg.seed, k as u64),
            )?;
            for e in events {
                trace_rows.push(format!(
                    "{k},{t},{site},{kind}",
                    t = fmt_f(e.time),
                    site = e.site,
                    kind = match e.kind {
                        crate::mcwf::JumpKind::Dephasing => "dephasing",
                        crate::mcwf::JumpKind::Emission => "emission",
                    }
                ));
            }
        }
        writer.write_csv(
            "trajectory_traces.csv",
            "trajectory,time,site,kind",
            &trace_rows,
        )?;
    }
    Ok(serde_json::json!({ "series": series }))
}

fn run_dj(
    lib: &CanonicalLibrary,
    config: &ExperimentConfig,
    writer: &mut OutputWriter,
) -> Result<serde_json::Value> {
    let cfg = config.trajectory_config();
    let inputs = config.dj_inputs.unwrap_or(DjInputs::Canonical);
    let mut rows = Vec::new();
    let mut worst_curve = Vec::new();
    for point in config.grid() {
        let noise = NoiseModel::new(point.gamma_dep, point.gamma_emi)?;
        let result = dj_algorithmic_fidelity(lib, &noise, &cfg, inputs)?;
        for (id, est) in result.per_oracle.iter().enumerate() {
            rows.push(format!(
                "{id},{gd},{ge},{f},{se},{nt},{tf}",
                gd = fmt_f(point.gamma_dep),
                ge = fmt_f(point.gamma_emi),
                f = fmt_f(est.mean),
                se = fmt_f(est.std_error),
                nt = est.n_traj,
                tf = fmt_f(est.total_time),
            ));
        }
        worst_curve.push(serde_json::json!({
            "gamma_dep": point.gamma_dep,
            "gamma_emi": point.gamma_emi,
            "worst_oracle": result.worst_oracle,
            "worst_fidelity": result.worst,
        }));
    }
    writer.write_csv(
        "dj_fidelity.csv",
        "oracle_id,gamma_dep,gamma_emi,fidelity,std_error,n_traj,t_f",
        &rows,
    )?;
    Ok(serde_json::json!({ "worst_case": worst_curve }))
}

fn run_sandwich(
    lib: &CanonicalLibrary,
    config: &ExperimentConfig,
    writer: &mut OutputWriter,
) -> Result<serde_json::Value> {
    let cfg = config.trajectory_config();
    let sampler = config.sampler.unwrap_or_default();
    let n_states = config.n_initial_states.unwrap_or(64);
    let mut rows = Vec::new();
    let mut pairs = Vec::new();
    for point in config.grid() {
        let noise = NoiseModel::new(point.gamma_dep, point.gamma_emi)?;
        let cmp = sandwiched_cnot_comparison(lib, &noise, &cfg, n_states, sampler)?;
        rows.push(fidelity_csv_row("serial-42", &cmp.serial));
        rows.push(fidelity_csv_row("merged-31", &cmp.merged));
        pairs.push(serde_json::json!({
            "gamma_dep": point.gamma_dep,
            "gamma_emi": point.gamma_emi,
            "serial": cmp.serial.mean,
            "merged": cmp.merged.mean,
            "gain": cmp.merged.mean - cmp.serial.mean,
        }));
    }
    writer.write_csv("sandwich.csv", FIDELITY_HEADER, &rows)?;
    Ok(serde_json::json!({ "pairs": pairs }))
}

fn run_bare_compare(
    lib: &CanonicalLibrary,
    config: &ExperimentConfig,
    writer: &mut OutputWriter,
) -> Result<serde_json::Value> {
    let codec = LogicalCodec::new(2);
    let cfg = config.trajectory_config();
    let sampler = config.sampler.unwrap_or_default();
    let n_states = config.n_initial_states.unwrap_or(16);
    let encoded_drive = Drive::from_schedule(lib.core19())?;
    let mut rows = Vec::new();
    let mut pairs = Vec::new();
    for point in config.grid() {
        let noise = NoiseModel::new(point.gamma_dep, point.gamma_emi)?;
        let encoded =
            ensemble_fidelity_sampled(&codec, sampler, n_states, &encoded_drive, &noise, &cfg)?;
        let bare = bare_cnot_baseline(lib, &noise, &cfg, n_states, sampler)?;
        rows.push(fidelity_csv_row("encoded-core19", &encoded));
        rows.push(fidelity_csv_row("bare-cnot", &bare));
        pairs.push(serde_json::json!({
            "gamma_dep": point.gamma_dep,
            "gamma_emi": point.gamma_emi,
            "encoded": encoded.mean,
            "bare": bare.mean,
        }));
    }
    writer.write_csv("bare_compare.csv", FIDELITY_HEADER, &rows)?;
    Ok(serde_json::json!({ "pairs": pairs }))
}
