use rayon::prelude::*;
use treeanneal::annealing::{
    adiabatic_time_estimate, analog_evolve, digitized_evolve, gap_profile_with_vectors, make_plan, stdat_step_bound,
    AdiabaticMode, AnnealingProblem, DigitizedPlan,
};
use treeanneal::circuit::{build_digitized_circuit, run_circuit_snapshots, Circuit, NoiseModel};
use treeanneal::measurement::{
    child_seed, confusion_from_fidelities, correlation_matrix, correlation_matrix_measured, corrected_entropy,
    distance_profile, energy_xy, entanglement_witness, randomized_renyi_masks, readout_correct, similarity,
    subsets_of_size, Confusion, CorrelationMatrix,
};
use treeanneal::model::{
    neel_field_hamiltonian, neel_state, slowly_decaying_hamiltonian, xy_hamiltonian, Branch, Lattice,
};
use treeanneal::sim::{renyi2_exact, HamiltonianSpec, QuantumState};

use crate::config::{ExperimentConfig, Interaction};
use crate::error::{CliError, CliResult};
use crate::output::{Cell, Outputs, Table};

/// Largest register simulated as a density matrix or split into all subsystems.
pub const DENSITY_QUBIT_BUDGET: usize = 10;
/// Generations and blocks of the `scale15` run.
pub const SCALE15_GENERATIONS: usize = 4;
pub const SCALE15_BLOCKS: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    /// Energy and magnetization per block for both Néel branches.
    EnergySplit,
    /// Correlation matrices, similarities and distance profiles per block.
    Correlations,
    /// Subsystem Rényi entropies, exact and from randomized measurements.
    Renyi,
    /// Gap profile, adiabatic time, Trotter step bound, infidelity vs blocks.
    Bound,
    /// Similarity under coherent gate error, averaged over noise seeds.
    NoiseSweep,
    /// Four-generation tree (15 spins) with four blocks.
    Scale15,
    /// Analog anneal trajectories and correlation profiles.
    Analog,
    /// Parity and magnetization along the anneal.
    Parity,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::EnergySplit => "energy-split",
            Command::Correlations => "correlations",
            Command::Renyi => "renyi",
            Command::Bound => "bound",
            Command::NoiseSweep => "noise-sweep",
            Command::Scale15 => "scale15",
            Command::Analog => "analog",
            Command::Parity => "parity",
        }
    }
}

pub fn run_command(cmd: Command, cfg: &ExperimentConfig) -> CliResult<Outputs> {
    cfg.validate()?;
    match cmd {
        Command::EnergySplit => energy_split(cfg),
        Command::Correlations => correlations(cfg),
        Command::Renyi => renyi(cfg),
        Command::Bound => bound(cfg),
        Command::NoiseSweep => noise_sweep(cfg),
        Command::Scale15 => scale15(cfg),
        Command::Analog => analog(cfg),
        Command::Parity => parity(cfg),
    }
}

/// Problem, plan and gate circuit for one lattice.
struct Setup {
    lat: Lattice,
    prob: AnnealingProblem,
    plan: DigitizedPlan,
    circuit: Circuit,
}

fn problem(cfg: &ExperimentConfig, lat: &Lattice, j0_tau: f64) -> CliResult<AnnealingProblem> {
    let m = &cfg.model;
    let h_ini = neel_field_hamiltonian(lat, m.omega0)?;
    let h_fin = match m.interaction {
        Interaction::NearestNeighbor => xy_hamiltonian(lat, m.j0)?,
        Interaction::SlowlyDecaying => slowly_decaying_hamiltonian(lat, m.j0)?,
    };
    Ok(AnnealingProblem::new(h_ini, h_fin, m.schedule.schedule(), j0_tau / m.j0)?)
}

impl Setup {
    fn new(cfg: &ExperimentConfig, lat: Lattice, blocks: usize) -> CliResult<Self> {
        let prob = problem(cfg, &lat, cfg.model.tau)?;
        let plan = make_plan(&prob, blocks, cfg.model.omega0, cfg.model.j0)?;
        let circuit =
            build_digitized_circuit(&plan, &lat, cfg.digitization.basis, cfg.digitization.edge_splitting.splitting())?;
        Ok(Self { lat, prob, plan, circuit })
    }

    fn from_config(cfg: &ExperimentConfig) -> CliResult<Self> {
        Self::new(cfg, cfg.lattice()?, cfg.digitization.blocks)
    }

    fn n(&self) -> usize {
        self.lat.n_nodes()
    }

    fn block_points(&self) -> Vec<f64> {
        let m = self.plan.n_blocks();
        (0..=m).map(|k| k as f64 / m as f64).collect()
    }

    fn digitized(&self, branch: Branch) -> CliResult<Vec<QuantumState>> {
        let states = digitized_evolve(&self.prob, &self.plan, &neel_state(&self.lat, branch))?;
        Ok(states.into_iter().map(QuantumState::Pure).collect())
    }

    fn circuit_run(&self, branch: Branch, noise: Option<&NoiseModel>) -> CliResult<Vec<QuantumState>> {
        if noise.is_some_and(|m| m.decoherence) && self.n() > DENSITY_QUBIT_BUDGET {
            return Err(treeanneal::Error::BudgetExceeded { requested: self.n(), limit: DENSITY_QUBIT_BUDGET }.into());
        }
        let psi0 = QuantumState::Pure(neel_state(&self.lat, branch));
        Ok(run_circuit_snapshots(&psi0, &self.circuit, noise)?)
    }
}

fn analog_states(
    cfg: &ExperimentConfig,
    lat: &Lattice,
    j0_tau: f64,
    branch: Branch,
    record: &[f64],
) -> CliResult<Vec<QuantumState>> {
    let prob = problem(cfg, lat, j0_tau)?;
    let traj = analog_evolve(&prob, &neel_state(lat, branch), cfg.analog.steps_for(j0_tau), record)?;
    Ok(traj.states.into_iter().map(QuantumState::Pure).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Series {
    Digitized,
    Circuit,
    CircuitNoisy,
    Analog,
    AnalogReference,
}

impl Series {
    fn name(self) -> &'static str {
        match self {
            Series::Digitized => "digitized",
            Series::Circuit => "circuit",
            Series::CircuitNoisy => "circuit_noisy",
            Series::Analog => "analog",
            Series::AnalogReference => "analog_reference",
        }
    }
}

/// Noise seed of branch `b` in single noisy runs.
fn branch_noise(cfg: &ExperimentConfig, b: usize) -> NoiseModel {
    cfg.noise.model(cfg.noise.epsilon, child_seed(cfg.seed, b as u64))
}

/// Per-block states of each requested series, for every configured branch.
/// Series states are indexed by block, 0 being the initial Néel state.
fn branch_series(
    cfg: &ExperimentConfig,
    setup: &Setup,
    kinds: &[Series],
) -> CliResult<Vec<(Branch, Vec<(Series, Vec<QuantumState>)>)>> {
    let points = setup.block_points();
    cfg.branches()
        .into_par_iter()
        .enumerate()
        .map(|(b, branch)| {
            let series = kinds
                .par_iter()
                .map(|&kind| {
                    let states = match kind {
                        Series::Digitized => setup.digitized(branch)?,
                        Series::Circuit => setup.circuit_run(branch, None)?,
                        Series::CircuitNoisy => setup.circuit_run(branch, Some(&branch_noise(cfg, b)))?,
                        Series::Analog => analog_states(cfg, &setup.lat, cfg.model.tau, branch, &points)?,
                        Series::AnalogReference => {
                            analog_states(cfg, &setup.lat, cfg.analog.reference_tau * cfg.model.j0, branch, &points)?
                        }
                    };
                    Ok((kind, states))
                })
                .collect::<CliResult<Vec<_>>>()?;
            Ok((branch, series))
        })
        .collect()
}

fn figure_series(cfg: &ExperimentConfig) -> Vec<Series> {
    let mut kinds = vec![Series::Digitized, Series::Circuit];
    if cfg.noise.is_enabled() {
        kinds.push(Series::CircuitNoisy);
    }
    kinds.extend([Series::Analog, Series::AnalogReference]);
    kinds
}

struct Observables {
    mz: HamiltonianSpec,
    parity: HamiltonianSpec,
}

impl Observables {
    fn new(n: usize) -> Self {
        Self { mz: HamiltonianSpec::magnetization(n), parity: HamiltonianSpec::parity_z(n) }
    }

    fn mz_parity(&self, state: &QuantumState) -> CliResult<(f64, f64)> {
        Ok((state.expectation(&self.mz)?, state.expectation(&self.parity)?))
    }
}

fn confusions(cfg: &ExperimentConfig) -> Vec<Confusion> {
    cfg.noise.readout.iter().map(|r| confusion_from_fidelities(r[0], r[1])).collect()
}

/// Correlations as measured: exact for noiseless series, through the
/// configured readout (and its correction) for the noisy one.
fn measured_correlations(cfg: &ExperimentConfig, state: &QuantumState, noisy: bool) -> CliResult<CorrelationMatrix> {
    let theta = cfg.measurement.theta;
    if !noisy || cfg.noise.readout.is_empty() {
        return Ok(correlation_matrix(state, theta)?);
    }
    let readout: Vec<(f64, f64)> = cfg.noise.readout.iter().map(|r| (r[0], r[1])).collect();
    let conf = confusions(cfg);
    let correct = |p: &[f64]| readout_correct(p, &conf);
    let post: Option<&dyn Fn(&[f64]) -> treeanneal::Result<Vec<f64>>> =
        if cfg.noise.readout_correction { Some(&correct) } else { None };
    Ok(correlation_matrix_measured(state, theta, &readout, post)?)
}

fn push_matrix(table: &mut Table, prefix: &[Cell], c: &CorrelationMatrix) {
    for i in 0..c.n {
        for j in 0..c.n {
            if i != j {
                let mut row = prefix.to_vec();
                row.extend([i.into(), j.into(), c.get(i, j).into()]);
                table.push(row);
            }
        }
    }
}

fn plan_table(plan: &DigitizedPlan) -> Table {
    let mut t = Table::new(&["block", "s_bar", "ds", "phi_z", "phi_j"]);
    for b in &plan.blocks {
        t.push(vec![b.index.into(), b.s_bar.into(), b.ds.into(), b.phi_z.into(), b.phi_j.into()]);
    }
    t
}

fn energy_split(cfg: &ExperimentConfig) -> CliResult<Outputs> {
    let setup = Setup::from_config(cfg)?;
    let obs = Observables::new(setup.n());
    let points = setup.block_points();
    let runs = branch_series(cfg, &setup, &figure_series(cfg))?;
    let mut t = Table::new(&["branch", "series", "block", "s", "e_eq4", "e_textform", "mz", "parity"]);
    for (branch, series) in &runs {
        for (kind, states) in series {
            for (n, st) in states.iter().enumerate() {
                let (e, e_text) = energy_xy(st, &setup.lat, cfg.model.j0)?;
                let (mz, par) = obs.mz_parity(st)?;
                t.push(vec![
                    branch.name().into(),
                    kind.name().into(),
                    n.into(),
                    points[n].into(),
                    e.into(),
                    e_text.into(),
                    mz.into(),
                    par.into(),
                ]);
            }
        }
    }
    let mut out = Outputs::default();
    out.add("energy_split", t);
    out.add("energy_split_plan", plan_table(&setup.plan));
    Ok(out)
}

fn correlations(cfg: &ExperimentConfig) -> CliResult<Outputs> {
    let setup = Setup::from_config(cfg)?;
    let runs = branch_series(cfg, &setup, &figure_series(cfg))?;
    let mut mats = Table::new(&["branch", "series", "block", "i", "j", "c_value"]);
    let mut sims = Table::new(&["branch", "series", "block", "similarity"]);
    let mut prof = Table::new(&["branch", "series", "block", "r", "mean_c"]);
    for (branch, series) in &runs {
        let mut per_series = Vec::new();
        for (kind, states) in series {
            let cs = states
                .par_iter()
                .map(|st| measured_correlations(cfg, st, *kind == Series::CircuitNoisy))
                .collect::<CliResult<Vec<_>>>()?;
            per_series.push((*kind, cs));
        }
        let reference = &per_series.iter().find(|(k, _)| *k == Series::Digitized).expect("digitized series").1;
        for (kind, cs) in &per_series {
            for (n, c) in cs.iter().enumerate() {
                let prefix: Vec<Cell> = vec![branch.name().into(), kind.name().into(), n.into()];
                push_matrix(&mut mats, &prefix, c);
                let mut row = prefix.clone();
                row.push(similarity(&reference[n], c)?.into());
                sims.push(row);
                for (r, mean) in distance_profile(&setup.lat, c, cfg.measurement.reference_spin, cfg.measurement.spacing)? {
                    let mut row = prefix.clone();
                    row.extend([r.into(), mean.into()]);
                    prof.push(row);
                }
            }
        }
    }
    let mut out = Outputs::default();
    out.add("correlations_matrix", mats);
    out.add("correlations_similarity", sims);
    out.add("correlations_profile", prof);
    Ok(out)
}

/// Analog run at the configured anneal time, sampled at the block boundaries,
/// next to the digitized reference.
fn analog_alongside(cfg: &ExperimentConfig, setup: &Setup) -> CliResult<Table> {
    let obs = Observables::new(setup.n());
    let points = setup.block_points();
    let runs = branch_series(cfg, setup, &[Series::Digitized, Series::Analog])?;
    let mut t = Table::new(&["branch", "block", "s", "e_eq4", "mz", "parity", "similarity_to_digitized"]);
    for (branch, series) in &runs {
        let (dig, ana) = (&series[0].1, &series[1].1);
        for (n, st) in ana.iter().enumerate() {
            let (e, _) = energy_xy(st, &setup.lat, cfg.model.j0)?;
            let (mz, par) = obs.mz_parity(st)?;
            let theta = cfg.measurement.theta;
            let sim = similarity(&correlation_matrix(&dig[n], theta)?, &correlation_matrix(st, theta)?)?;
            t.push(vec![
                branch.name().into(),
                n.into(),
                points[n].into(),
                e.into(),
                mz.into(),
                par.into(),
                sim.into(),
            ]);
        }
    }
    Ok(t)
}

fn renyi(cfg: &ExperimentConfig) -> CliResult<Outputs> {
    let setup = Setup::from_config(cfg)?;
    let n = setup.n();
    if n > DENSITY_QUBIT_BUDGET {
        return Err(treeanneal::Error::BudgetExceeded { requested: n, limit: DENSITY_QUBIT_BUDGET }.into());
    }
    let masks: Vec<Vec<usize>> = (1..=n).flat_map(|k| subsets_of_size(n, k)).collect();
    let mut kinds = vec![Series::Digitized];
    if cfg.noise.epsilon > 0.0 || cfg.noise.decoherence {
        kinds.push(Series::CircuitNoisy);
    }
    let runs = branch_series(cfg, &setup, &kinds)?;
    let blocks = setup.plan.n_blocks() + 1;
    let mut jobs = Vec::new();
    for (b, (branch, series)) in runs.iter().enumerate() {
        for (si, (kind, states)) in series.iter().enumerate() {
            for (block, st) in states.iter().enumerate() {
                let stream = ((b * kinds.len() + si) * blocks + block) as u64;
                jobs.push((*branch, *kind, block, st, child_seed(cfg.seed, stream)));
            }
        }
    }
    let results = jobs
        .par_iter()
        .map(|&(_, _, _, st, seed)| {
            let est = randomized_renyi_masks(st, &masks, cfg.renyi.n_unitaries, cfg.renyi.shots, seed)?;
            let exact = masks
                .iter()
                .map(|m| Ok(renyi2_exact(&st.partial_trace(m)?)))
                .collect::<CliResult<Vec<f64>>>()?;
            Ok((est, exact))
        })
        .collect::<CliResult<Vec<_>>>()?;

    let mut t = Table::new(&[
        "branch",
        "series",
        "block",
        "mask",
        "n_a",
        "mean_bits",
        "stderr_bits",
        "purity_raw",
        "exact_bits",
        "corrected_bits",
        "witness",
        "exact_witness",
    ]);
    let mut cloud = Table::new(&["branch", "series", "block", "n_a", "count", "mean_corrected", "std_corrected", "mean_exact"]);
    for ((branch, kind, block, _, _), (est, exact)) in jobs.iter().zip(&results) {
        let whole = est.last().expect("whole-register mask");
        let exact_whole = *exact.last().expect("whole-register mask");
        let corrected_whole = corrected_entropy(whole.mean_bits, whole.mean_bits, n, n)?;
        let mut by_size: Vec<Vec<(f64, f64)>> = vec![Vec::new(); n + 1];
        for (e, ex) in est.iter().zip(exact) {
            let corrected = corrected_entropy(e.mean_bits, whole.mean_bits, e.n_a(), n)?;
            by_size[e.n_a()].push((corrected, *ex));
            t.push(vec![
                branch.name().into(),
                kind.name().into(),
                (*block).into(),
                e.mask_string(n).into(),
                e.n_a().into(),
                e.mean_bits.into(),
                e.stderr_bits.into(),
                e.purity_raw.into(),
                (*ex).into(),
                corrected.into(),
                entanglement_witness(corrected, corrected_whole, e.stderr_bits).into(),
                entanglement_witness(*ex, exact_whole, 0.0).into(),
            ]);
        }
        for (n_a, pts) in by_size.iter().enumerate().skip(1) {
            let k = pts.len() as f64;
            let mean = pts.iter().map(|p| p.0).sum::<f64>() / k;
            let std = if pts.len() > 1 {
                (pts.iter().map(|p| (p.0 - mean).powi(2)).sum::<f64>() / (k - 1.0)).sqrt()
            } else {
                0.0
            };
            cloud.push(vec![
                branch.name().into(),
                kind.name().into(),
                (*block).into(),
                n_a.into(),
                pts.len().into(),
                mean.into(),
                std.into(),
                (pts.iter().map(|p| p.1).sum::<f64>() / k).into(),
            ]);
        }
    }
    let mut out = Outputs::default();
    out.add("renyi_masks", t);
    out.add("renyi_cloud", cloud);
    out.add("renyi_analog", analog_alongside(cfg, &setup)?);
    Ok(out)
}

fn bound(cfg: &ExperimentConfig) -> CliResult<Outputs> {
    let lat = cfg.lattice()?;
    let prob = problem(cfg, &lat, cfg.model.tau)?;
    let profile = gap_profile_with_vectors(&prob, cfg.bound.grid)?;
    let step = stdat_step_bound(&prob, &profile);
    let mut gap = Table::new(&["s", "delta", "h_norm", "dh_norm"]);
    for smp in &profile.samples {
        gap.push(vec![smp.s.into(), smp.delta.into(), smp.h_norm.into(), smp.dh_norm.into()]);
    }
    let mut summary = Table::new(&["quantity", "value"]);
    for (name, mode) in [
        ("tau_ad_norm_based", AdiabaticMode::NormBased),
        ("tau_ad_nondegenerate", AdiabaticMode::Nondegenerate),
        ("tau_ad_degenerate", AdiabaticMode::Degenerate),
    ] {
        summary.push(vec![name.into(), adiabatic_time_estimate(&profile, mode)?.into()]);
    }
    summary.push(vec!["min_gap".into(), profile.min_gap().into()]);
    summary.push(vec!["delta_s_max".into(), step.delta_s_max.into()]);
    summary.push(vec!["argmin_s".into(), step.argmin_s.unwrap_or(f64::NAN).into()]);
    summary.push(vec!["delta_s_max_tau".into(), step.delta_s_max_tau.into()]);
    summary.push(vec!["commutator_norm".into(), step.commutator_norm.into()]);

    let obs = Observables::new(lat.n_nodes());
    let mut curve = Table::new(&["branch", "m", "ds", "infidelity", "below_bound", "below_bound_tau"]);
    let mut reference = Table::new(&["branch", "e_eq4", "mz", "parity", "convergence_infidelity"]);
    let rows = cfg
        .branches()
        .into_par_iter()
        .map(|branch| {
            let psi0 = neel_state(&lat, branch);
            let traj = analog_evolve(&prob, &psi0, cfg.analog.steps_for(cfg.model.tau), &[1.0])?;
            let target = traj.last().clone();
            let infid = cfg
                .bound
                .blocks
                .par_iter()
                .map(|&m| {
                    let plan = make_plan(&prob, m, cfg.model.omega0, cfg.model.j0)?;
                    let fin = digitized_evolve(&prob, &plan, &psi0)?.pop().expect("final state");
                    Ok((m, 1.0 - fin.fidelity(&target)))
                })
                .collect::<CliResult<Vec<_>>>()?;
            Ok((branch, traj.convergence_infidelity, QuantumState::Pure(target), infid))
        })
        .collect::<CliResult<Vec<_>>>()?;
    for (branch, conv, target, infid) in rows {
        for (m, inf) in infid {
            let ds = 1.0 / m as f64;
            curve.push(vec![
                branch.name().into(),
                m.into(),
                ds.into(),
                inf.into(),
                (ds <= step.delta_s_max).into(),
                (ds <= step.delta_s_max_tau).into(),
            ]);
        }
        let (e, _) = energy_xy(&target, &lat, cfg.model.j0)?;
        let (mz, par) = obs.mz_parity(&target)?;
        reference.push(vec![branch.name().into(), e.into(), mz.into(), par.into(), conv.into()]);
    }
    let mut out = Outputs::default();
    out.add("bound_gap", gap);
    out.add("bound_summary", summary);
    out.add("bound_infidelity", curve);
    out.add("bound_analog", reference);
    Ok(out)
}

fn mean_std(xs: &[f64]) -> (f64, f64) {
    let k = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / k;
    let std = if xs.len() > 1 { (xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (k - 1.0)).sqrt() } else { 0.0 };
    (mean, std)
}

fn noise_sweep(cfg: &ExperimentConfig) -> CliResult<Outputs> {
    let setup = Setup::from_config(cfg)?;
    let seeds: Vec<u64> = (0..cfg.sweep.seeds).map(|k| child_seed(cfg.seed, k as u64)).collect();
    let mut runs = Table::new(&["branch", "epsilon", "seed_index", "seed", "block", "similarity"]);
    let mut agg = Table::new(&["branch", "epsilon", "block", "mean_similarity", "std_similarity", "n_seeds"]);
    for branch in cfg.branches() {
        let ideal = setup
            .circuit_run(branch, None)?
            .iter()
            .map(|st| correlation_matrix(st, cfg.measurement.theta))
            .collect::<treeanneal::Result<Vec<_>>>()?;
        let jobs: Vec<(usize, usize)> =
            (0..cfg.sweep.epsilons.len()).flat_map(|e| (0..seeds.len()).map(move |k| (e, k))).collect();
        // the same seed list for every epsilon, so the error axes are shared across the sweep
        let sims = jobs
            .par_iter()
            .map(|&(e, k)| {
                let model = cfg.noise.model(cfg.sweep.epsilons[e], seeds[k]);
                setup
                    .circuit_run(branch, Some(&model))?
                    .iter()
                    .zip(&ideal)
                    .map(|(st, c)| Ok(similarity(c, &measured_correlations(cfg, st, true)?)?))
                    .collect::<CliResult<Vec<f64>>>()
            })
            .collect::<CliResult<Vec<_>>>()?;
        for (&(e, k), per_block) in jobs.iter().zip(&sims) {
            for (n, s) in per_block.iter().enumerate() {
                runs.push(vec![
                    branch.name().into(),
                    cfg.sweep.epsilons[e].into(),
                    k.into(),
                    Cell::Text(seeds[k].to_string()),
                    n.into(),
                    (*s).into(),
                ]);
            }
        }
        for (e, eps) in cfg.sweep.epsilons.iter().enumerate() {
            for n in 0..ideal.len() {
                let xs: Vec<f64> =
                    jobs.iter().zip(&sims).filter(|((je, _), _)| *je == e).map(|(_, per)| per[n]).collect();
                let (mean, std) = mean_std(&xs);
                agg.push(vec![
                    branch.name().into(),
                    (*eps).into(),
                    n.into(),
                    mean.into(),
                    std.into(),
                    xs.len().into(),
                ]);
            }
        }
    }
    let mut out = Outputs::default();
    out.add("noise_sweep", agg);
    out.add("noise_sweep_runs", runs);
    out.add("noise_sweep_analog", analog_alongside(cfg, &setup)?);
    Ok(out)
}

fn scale15(cfg: &ExperimentConfig) -> CliResult<Outputs> {
    let lat = Lattice::cayley_tree(SCALE15_GENERATIONS)?;
    let n = lat.n_nodes();
    if cfg.noise.decoherence {
        return Err(CliError::Budget(format!(
            "density-matrix simulation of {n} qubits is refused (limit {DENSITY_QUBIT_BUDGET}); disable noise.decoherence"
        )));
    }
    let setup = Setup::new(cfg, lat, SCALE15_BLOCKS)?;
    let obs = Observables::new(n);
    let mut kinds = vec![Series::Circuit, Series::Digitized];
    if cfg.noise.is_enabled() {
        kinds.push(Series::CircuitNoisy);
    }
    kinds.push(Series::Analog);
    let runs = branch_series(cfg, &setup, &kinds)?;
    let mut mats = Table::new(&["branch", "series", "block", "i", "j", "c_value"]);
    let mut summary =
        Table::new(&["branch", "series", "block", "e_eq4", "mz", "parity", "min_edge_c", "max_edge_c"]);
    for (branch, series) in &runs {
        for (kind, states) in series {
            let cs = states
                .par_iter()
                .map(|st| measured_correlations(cfg, st, *kind == Series::CircuitNoisy))
                .collect::<CliResult<Vec<_>>>()?;
            for (block, (st, c)) in states.iter().zip(&cs).enumerate() {
                let prefix: Vec<Cell> = vec![branch.name().into(), kind.name().into(), block.into()];
                push_matrix(&mut mats, &prefix, c);
                let (e, _) = energy_xy(st, &setup.lat, cfg.model.j0)?;
                let (mz, par) = obs.mz_parity(st)?;
                let edge_c: Vec<f64> = setup.lat.edges().iter().map(|&(a, b)| c.get(a, b)).collect();
                let mut row = prefix;
                row.extend([
                    e.into(),
                    mz.into(),
                    par.into(),
                    edge_c.iter().copied().fold(f64::INFINITY, f64::min).into(),
                    edge_c.iter().copied().fold(f64::NEG_INFINITY, f64::max).into(),
                ]);
                summary.push(row);
            }
        }
    }
    let mut out = Outputs::default();
    out.add("scale15_summary", summary);
    out.add("scale15_correlations", mats);
    out.add("scale15_plan", plan_table(&setup.plan));
    Ok(out)
}

fn trajectory_points(cfg: &ExperimentConfig) -> Vec<f64> {
    let k = cfg.analog.record_points - 1;
    (0..=k).map(|i| i as f64 / k as f64).collect()
}

fn analog(cfg: &ExperimentConfig) -> CliResult<Outputs> {
    let lat = cfg.lattice()?;
    let prob = problem(cfg, &lat, cfg.model.tau)?;
    let obs = Observables::new(lat.n_nodes());
    let points = trajectory_points(cfg);
    let runs = cfg
        .branches()
        .into_par_iter()
        .map(|branch| Ok((branch, analog_states(cfg, &lat, cfg.model.tau, branch, &points)?)))
        .collect::<CliResult<Vec<_>>>()?;
    let mut traj = Table::new(&["branch", "s", "e_fin", "e_eq4", "mz", "parity"]);
    let mut prof = Table::new(&["branch", "s", "r", "mean_c"]);
    let mut mats = Table::new(&["branch", "i", "j", "c_value"]);
    for (branch, states) in &runs {
        for (s, st) in points.iter().zip(states) {
            let (e, _) = energy_xy(st, &lat, cfg.model.j0)?;
            let (mz, par) = obs.mz_parity(st)?;
            traj.push(vec![
                branch.name().into(),
                (*s).into(),
                st.expectation(&prob.h_fin)?.into(),
                e.into(),
                mz.into(),
                par.into(),
            ]);
            let c = correlation_matrix(st, cfg.measurement.theta)?;
            for (r, mean) in distance_profile(&lat, &c, cfg.measurement.reference_spin, cfg.measurement.spacing)? {
                prof.push(vec![branch.name().into(), (*s).into(), r.into(), mean.into()]);
            }
        }
        let last = correlation_matrix(states.last().expect("final state"), cfg.measurement.theta)?;
        push_matrix(&mut mats, &[branch.name().into()], &last);
    }
    let mut out = Outputs::default();
    out.add("analog_trajectory", traj);
    out.add("analog_profile", prof);
    out.add("analog_matrix", mats);
    Ok(out)
}

fn parity(cfg: &ExperimentConfig) -> CliResult<Outputs> {
    let setup = Setup::from_config(cfg)?;
    let obs = Observables::new(setup.n());
    let points = trajectory_points(cfg);
    let block_points = setup.block_points();
    let runs = branch_series(cfg, &setup, &[Series::Digitized, Series::Circuit])?;
    let analog_runs = cfg
        .branches()
        .into_par_iter()
        .map(|branch| analog_states(cfg, &setup.lat, cfg.model.tau, branch, &points))
        .collect::<CliResult<Vec<_>>>()?;
    let mut t = Table::new(&["branch", "series", "index", "s", "parity", "mz"]);
    for ((branch, series), ana) in runs.iter().zip(&analog_runs) {
        for (kind, states) in series {
            for (k, st) in states.iter().enumerate() {
                let (mz, par) = obs.mz_parity(st)?;
                t.push(vec![
                    branch.name().into(),
                    kind.name().into(),
                    k.into(),
                    block_points[k].into(),
                    par.into(),
                    mz.into(),
                ]);
            }
        }
        for (k, (s, st)) in points.iter().zip(ana).enumerate() {
            let (mz, par) = obs.mz_parity(st)?;
            t.push(vec![
                branch.name().into(),
                Series::Analog.name().into(),
                k.into(),
                (*s).into(),
                par.into(),
                mz.into(),
            ]);
        }
    }
    let mut out = Outputs::default();
    out.add("parity", t);
    Ok(out)
}
