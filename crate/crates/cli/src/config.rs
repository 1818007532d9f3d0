//! Experiment configuration, read from TOML.
//!
//! Every section and key is optional; missing keys take the defaults below.
//! Unknown keys are rejected.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use treeanneal::circuit::{EdgeSplitting, TwoQubitBasis};
use treeanneal::model::{Branch, Lattice, LatticeKind, Schedule};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    /// Master seed; every generator in a run is derived from it.
    pub seed: u64,
    pub output: PathBuf,
    pub lattice: LatticeConfig,
    pub model: ModelConfig,
    pub digitization: DigitizationConfig,
    pub measurement: MeasurementConfig,
    pub renyi: RenyiConfig,
    pub noise: NoiseConfig,
    pub sweep: SweepConfig,
    pub bound: BoundConfig,
    pub analog: AnalogConfig,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            output: PathBuf::from("out"),
            lattice: LatticeConfig::default(),
            model: ModelConfig::default(),
            digitization: DigitizationConfig::default(),
            measurement: MeasurementConfig::default(),
            renyi: RenyiConfig::default(),
            noise: NoiseConfig::default(),
            sweep: SweepConfig::default(),
            bound: BoundConfig::default(),
            analog: AnalogConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LatticeConfig {
    pub kind: LatticeKind,
    /// Tree generations (used when `kind = "cayley_tree"`).
    pub generations: usize,
    /// Chain length (used when `kind = "linear_chain"`).
    pub sites: usize,
}

impl Default for LatticeConfig {
    fn default() -> Self {
        Self { kind: LatticeKind::CayleyTree, generations: 3, sites: 6 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScheduleKind {
    Linear,
    Brachistochrone,
}

impl ScheduleKind {
    pub fn schedule(self) -> Schedule {
        match self {
            ScheduleKind::Linear => Schedule::Linear,
            ScheduleKind::Brachistochrone => Schedule::Brachistochrone,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Interaction {
    /// Flip-flop coupling on lattice edges.
    NearestNeighbor,
    /// All chain pairs with coupling J0 / |i - j|.
    SlowlyDecaying,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ModelConfig {
    pub omega0: f64,
    pub j0: f64,
    /// Total anneal time in units of 1/J0.
    pub tau: f64,
    pub schedule: ScheduleKind,
    pub interaction: Interaction,
}

impl Default for ModelConfig {
    fn default() -> Self {
        Self {
            omega0: 1.0,
            j0: 1.0,
            tau: 5.0,
            schedule: ScheduleKind::Brachistochrone,
            interaction: Interaction::NearestNeighbor,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SplittingConfig {
    Single,
    Repeated(usize),
    Symmetric(usize),
}

impl SplittingConfig {
    pub fn splitting(self) -> EdgeSplitting {
        match self {
            SplittingConfig::Single => EdgeSplitting::Single,
            SplittingConfig::Repeated(r) => EdgeSplitting::Repeated(r),
            SplittingConfig::Symmetric(r) => EdgeSplitting::Symmetric(r),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DigitizationConfig {
    /// Number of Trotter blocks M.
    pub blocks: usize,
    pub basis: TwoQubitBasis,
    /// `"single"`, `{ repeated = r }` or `{ symmetric = r }`.
    pub edge_splitting: SplittingConfig,
}

impl Default for DigitizationConfig {
    fn default() -> Self {
        Self { blocks: 5, basis: TwoQubitBasis::Cz, edge_splitting: SplittingConfig::Single }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BranchSelection {
    Ground,
    Excited,
    Both,
}

impl BranchSelection {
    pub fn branches(self) -> Vec<Branch> {
        match self {
            BranchSelection::Ground => vec![Branch::Ground],
            BranchSelection::Excited => vec![Branch::Excited],
            BranchSelection::Both => Branch::BOTH.to_vec(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MeasurementConfig {
    pub branch: BranchSelection,
    /// Direction of the measured spin component in the XY plane.
    pub theta: f64,
    /// Reference spin of distance profiles.
    pub reference_spin: usize,
    /// Length of one lattice edge in distance profiles.
    pub spacing: f64,
}

impl Default for MeasurementConfig {
    fn default() -> Self {
        Self { branch: BranchSelection::Both, theta: 0.0, reference_spin: 3, spacing: 1.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RenyiConfig {
    pub n_unitaries: usize,
    pub shots: usize,
}

impl Default for RenyiConfig {
    fn default() -> Self {
        Self { n_unitaries: 100, shots: 10_000 }
    }
}

/// Gate noise. Times are in microseconds; the gate durations are
/// assumptions, not calibrated values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NoiseConfig {
    /// Coherent error angle in radians; 0.01 is a 1% error.
    pub epsilon: f64,
    pub decoherence: bool,
    pub t1: f64,
    pub t2: f64,
    pub single_qubit_duration: f64,
    pub two_qubit_duration: f64,
    /// Per-qubit `[P(0|0), P(1|1)]`; empty for ideal readout.
    pub readout: Vec<[f64; 2]>,
    pub readout_correction: bool,
}

impl Default for NoiseConfig {
    fn default() -> Self {
        let m = treeanneal::circuit::NoiseModel::default();
        Self {
            epsilon: m.epsilon,
            decoherence: m.decoherence,
            t1: m.t1,
            t2: m.t2,
            single_qubit_duration: m.single_qubit_duration,
            two_qubit_duration: m.two_qubit_duration,
            readout: Vec::new(),
            readout_correction: true,
        }
    }
}

impl NoiseConfig {
    pub fn is_enabled(&self) -> bool {
        self.epsilon > 0.0 || self.decoherence || !self.readout.is_empty()
    }

    pub fn model(&self, epsilon: f64, seed: u64) -> treeanneal::circuit::NoiseModel {
        treeanneal::circuit::NoiseModel {
            epsilon,
            decoherence: self.decoherence,
            t1: self.t1,
            t2: self.t2,
            single_qubit_duration: self.single_qubit_duration,
            two_qubit_duration: self.two_qubit_duration,
            readout: self.readout.iter().map(|r| (r[0], r[1])).collect(),
            seed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepConfig {
    pub epsilons: Vec<f64>,
    /// Noise realizations per epsilon.
    pub seeds: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self { epsilons: vec![0.0, 0.005, 0.01, 0.02], seeds: 20 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BoundConfig {
    /// Samples of the gap profile on [0, 1].
    pub grid: usize,
    /// Block counts of the infidelity curve.
    pub blocks: Vec<usize>,
}

impl Default for BoundConfig {
    fn default() -> Self {
        Self { grid: 101, blocks: vec![1, 2, 5, 10, 20, 40] }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AnalogConfig {
    /// Anneal time of the long reference run.
    pub reference_tau: f64,
    /// Integrator cells per unit of anneal time (at least 100 in total).
    pub steps_per_unit_time: f64,
    /// Recorded points on [0, 1] for trajectory outputs.
    pub record_points: usize,
}

impl Default for AnalogConfig {
    fn default() -> Self {
        Self { reference_tau: 100.0, steps_per_unit_time: 20.0, record_points: 11 }
    }
}

impl AnalogConfig {
    pub fn steps_for(&self, tau: f64) -> usize {
        ((self.steps_per_unit_time * tau).ceil() as usize).max(treeanneal::annealing::MIN_ANALOG_STEPS)
    }
}

fn positive(field: &str, v: f64) -> CliResult<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(CliError::Config(format!("{field} must be positive, got {v}")))
    }
}

fn at_least(field: &str, v: usize, min: usize) -> CliResult<()> {
    if v >= min {
        Ok(())
    } else {
        Err(CliError::Config(format!("{field} must be at least {min}, got {v}")))
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> CliResult<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn lattice(&self) -> CliResult<Lattice> {
        let lat = match self.lattice.kind {
            LatticeKind::CayleyTree => Lattice::cayley_tree(self.lattice.generations),
            LatticeKind::LinearChain => Lattice::linear_chain(self.lattice.sites),
        };
        lat.map_err(|e| CliError::Config(format!("lattice: {e}")))
    }

    pub fn validate(&self) -> CliResult<()> {
        match self.lattice.kind {
            LatticeKind::CayleyTree => {
                if !(1..=treeanneal::model::MAX_TREE_GENERATIONS).contains(&self.lattice.generations) {
                    return Err(CliError::Config(format!(
                        "lattice.generations must be in 1..={}, got {}",
                        treeanneal::model::MAX_TREE_GENERATIONS,
                        self.lattice.generations
                    )));
                }
                if self.model.interaction == Interaction::SlowlyDecaying {
                    return Err(CliError::Config(
                        "model.interaction = \"slowly_decaying\" needs lattice.kind = \"linear_chain\"".into(),
                    ));
                }
            }
            LatticeKind::LinearChain => at_least("lattice.sites", self.lattice.sites, 2)?,
        }
        positive("model.omega0", self.model.omega0)?;
        positive("model.j0", self.model.j0)?;
        positive("model.tau", self.model.tau)?;
        at_least("digitization.blocks", self.digitization.blocks, 1)?;
        if let SplittingConfig::Repeated(r) | SplittingConfig::Symmetric(r) = self.digitization.edge_splitting {
            at_least("digitization.edge_splitting", r, 1)?;
        }
        if !self.measurement.theta.is_finite() {
            return Err(CliError::Config("measurement.theta must be finite".into()));
        }
        positive("measurement.spacing", self.measurement.spacing)?;
        let n = self.lattice()?.n_nodes();
        if self.measurement.reference_spin >= n {
            return Err(CliError::Config(format!(
                "measurement.reference_spin must be below the spin count {n}, got {}",
                self.measurement.reference_spin
            )));
        }
        at_least("renyi.n_unitaries", self.renyi.n_unitaries, 1)?;
        at_least("renyi.shots", self.renyi.shots, 2)?;
        let noise = &self.noise;
        if !(noise.epsilon >= 0.0 && noise.epsilon.is_finite()) {
            return Err(CliError::Config(format!("noise.epsilon must be non-negative, got {}", noise.epsilon)));
        }
        positive("noise.t1", noise.t1)?;
        positive("noise.t2", noise.t2)?;
        if noise.t2 > 2.0 * noise.t1 {
            return Err(CliError::Config(format!("noise.t2 ({}) must not exceed 2 * noise.t1 ({})", noise.t2, noise.t1)));
        }
        positive("noise.single_qubit_duration", noise.single_qubit_duration)?;
        positive("noise.two_qubit_duration", noise.two_qubit_duration)?;
        if !noise.readout.is_empty() {
            if noise.readout.len() != n {
                return Err(CliError::Config(format!(
                    "noise.readout needs one entry per spin ({n}), got {}",
                    noise.readout.len()
                )));
            }
            if noise.readout.iter().flatten().any(|f| !(*f > 0.5 && *f <= 1.0)) {
                return Err(CliError::Config("noise.readout fidelities must lie in (0.5, 1]".into()));
            }
        }
        if self.sweep.epsilons.is_empty() || self.sweep.epsilons.iter().any(|e| !(*e >= 0.0 && e.is_finite())) {
            return Err(CliError::Config("sweep.epsilons must be a non-empty list of non-negative values".into()));
        }
        at_least("sweep.seeds", self.sweep.seeds, 1)?;
        at_least("bound.grid", self.bound.grid, treeanneal::annealing::MIN_GAP_GRID)?;
        if self.bound.blocks.is_empty() || self.bound.blocks.contains(&0) {
            return Err(CliError::Config("bound.blocks must be a non-empty list of positive block counts".into()));
        }
        positive("analog.reference_tau", self.analog.reference_tau)?;
        positive("analog.steps_per_unit_time", self.analog.steps_per_unit_time)?;
        at_least("analog.record_points", self.analog.record_points, 2)?;
        Ok(())
    }

    pub fn branches(&self) -> Vec<Branch> {
        self.measurement.branch.branches()
    }
}
