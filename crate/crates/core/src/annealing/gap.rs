use super::{AnnealingProblem, Subspace};
use crate::error::{Error, Result};
use crate::sim::linalg::{self, eigh, hs_norm, Eigensystem};
use crate::sim::{DMat, C64};

pub const MIN_GAP_GRID: usize = 21;
/// Relative tolerance under which two eigenvalues count as one level.
pub const CLUSTER_RTOL: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct GapSample {
    pub s: f64,
    /// Smallest gap between adjacent distinct levels; infinite for a single level.
    pub delta: f64,
    pub h_norm: f64,
    pub dh_norm: f64,
    pub f: f64,
    pub g: f64,
}

#[derive(Debug, Clone)]
pub struct GapProfile {
    pub samples: Vec<GapSample>,
    /// Present when the profile was built with eigenvectors.
    pub eigensystems: Option<Vec<Eigensystem>>,
    h_ini: DMat,
    h_fin: DMat,
    derivative: Vec<DMat>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AdiabaticMode {
    NormBased,
    Nondegenerate,
    Degenerate,
}

/// Index ranges of eigenvalue clusters in an ascending spectrum.
pub fn cluster_levels(values: &[f64]) -> Vec<std::ops::Range<usize>> {
    let scale = values.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let tol = CLUSTER_RTOL * scale;
    let mut out = Vec::new();
    let mut start = 0;
    for k in 1..=values.len() {
        if k == values.len() || values[k] - values[k - 1] > tol {
            out.push(start..k);
            start = k;
        }
    }
    out
}

fn min_cluster_gap(values: &[f64], clusters: &[std::ops::Range<usize>]) -> f64 {
    clusters
        .windows(2)
        .map(|w| values[w[1].start] - values[w[0].end - 1])
        .fold(f64::INFINITY, f64::min)
}

impl GapProfile {
    pub fn deltas(&self) -> Vec<f64> {
        self.samples.iter().map(|p| p.delta).collect()
    }

    pub fn min_gap(&self) -> f64 {
        self.samples.iter().map(|p| p.delta).fold(f64::INFINITY, f64::min)
    }

    /// Columns `s, delta, h_norm, dh_norm`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("s,delta,h_norm,dh_norm\n");
        for p in &self.samples {
            out.push_str(&format!("{:.16e},{:.16e},{:.16e},{:.16e}\n", p.s, p.delta, p.h_norm, p.dh_norm));
        }
        out
    }
}

/// Spectrum of H(s) on a uniform grid of `grid` points including both ends.
pub fn gap_profile(prob: &AnnealingProblem, grid: usize) -> Result<GapProfile> {
    gap_profile_on(prob, grid, &Subspace::full(prob.n_qubits()), false)
}

/// As [`gap_profile`], keeping eigenvectors for the matrix-element estimates.
pub fn gap_profile_with_vectors(prob: &AnnealingProblem, grid: usize) -> Result<GapProfile> {
    gap_profile_on(prob, grid, &Subspace::full(prob.n_qubits()), true)
}

/// Profile of H(s) compressed onto an invariant subspace. Norms, gaps and the
/// commutator used by [`stdat_step_bound`] are all taken inside `sub`.
pub fn gap_profile_on(prob: &AnnealingProblem, grid: usize, sub: &Subspace, keep_vectors: bool) -> Result<GapProfile> {
    if grid < MIN_GAP_GRID {
        return Err(Error::InvalidArgument(format!("gap grid needs at least {MIN_GAP_GRID} points, got {grid}")));
    }
    let (h_ini, h_fin) = prob.dense_pair_on(sub, linalg::DENSE_QUBIT_BUDGET)?;
    let mut samples = Vec::with_capacity(grid);
    let mut systems = Vec::new();
    let mut derivative = Vec::with_capacity(grid);
    for k in 0..grid {
        let s = k as f64 / (grid - 1) as f64;
        let v = prob.schedule.eval_unchecked(s);
        let h = &h_ini * C64::new(v.f, 0.0) + &h_fin * C64::new(v.g, 0.0);
        let dh = &h_ini * C64::new(v.df, 0.0) + &h_fin * C64::new(v.dg, 0.0);
        let es = eigh(&h);
        let clusters = cluster_levels(&es.values);
        samples.push(GapSample {
            s,
            delta: min_cluster_gap(&es.values, &clusters),
            h_norm: hs_norm(&h),
            dh_norm: hs_norm(&dh),
            f: v.f,
            g: v.g,
        });
        derivative.push(dh);
        if keep_vectors {
            systems.push(es);
        }
    }
    Ok(GapProfile { samples, eigensystems: keep_vectors.then_some(systems), h_ini, h_fin, derivative })
}

/// Adiabatic-time estimate.
///
/// `NormBased` is `max_s ||dH||/Delta^2`. `Nondegenerate` takes one
/// eigenvector per level and maximizes `|<a|dH|b>|/g_ab^2`. `Degenerate`
/// maximizes over whole level subspaces, which is the spectral norm of the
/// block `V_a^dag dH V_b`, so the result does not depend on the basis chosen
/// inside a degenerate level.
pub fn adiabatic_time_estimate(profile: &GapProfile, mode: AdiabaticMode) -> Result<f64> {
    if mode == AdiabaticMode::NormBased {
        return Ok(profile
            .samples
            .iter()
            .filter(|p| p.delta.is_finite())
            .map(|p| p.dh_norm / (p.delta * p.delta))
            .fold(0.0, f64::max));
    }
    let systems = profile
        .eigensystems
        .as_ref()
        .ok_or_else(|| Error::InvalidArgument("matrix-element estimates need a profile with eigenvectors".into()))?;
    let mut best = 0.0f64;
    for (es, dh) in systems.iter().zip(&profile.derivative) {
        let clusters = cluster_levels(&es.values);
        let rotated = es.vectors.adjoint() * dh * &es.vectors;
        for (a, ca) in clusters.iter().enumerate() {
            for cb in clusters.iter().skip(a + 1) {
                let gap = es.values[cb.start] - es.values[ca.start];
                let element = match mode {
                    AdiabaticMode::Nondegenerate => rotated[(ca.start, cb.start)].norm(),
                    _ => {
                        let block = rotated.view((ca.start, cb.start), (ca.len(), cb.len())).into_owned();
                        linalg::spectral_norm(&block)
                    }
                };
                best = best.max(element / (gap * gap));
            }
        }
    }
    Ok(best)
}

#[derive(Debug, Clone)]
pub struct StepBound {
    /// `min_s 2 Delta^2 ||H|| / (|f g| ||dH|| ||[H_fin, H_ini]||)`, +inf when the pair commutes.
    pub delta_s_max: f64,
    /// Interior sample attaining the minimum.
    pub argmin_s: Option<f64>,
    /// Per-block form with `tau` explicit: `min_s 2 ||H|| / (tau |f g| ||[H_fin, H_ini]||)`.
    pub delta_s_max_tau: f64,
    pub commutator_norm: f64,
}

pub fn stdat_step_bound(prob: &AnnealingProblem, profile: &GapProfile) -> StepBound {
    let comm = hs_norm(&linalg::commutator(&profile.h_fin, &profile.h_ini));
    let mut bound = StepBound {
        delta_s_max: f64::INFINITY,
        argmin_s: None,
        delta_s_max_tau: f64::INFINITY,
        commutator_norm: comm,
    };
    if comm == 0.0 {
        return bound;
    }
    for p in &profile.samples {
        let fg = (p.f * p.g).abs();
        if fg == 0.0 {
            continue;
        }
        if p.delta.is_finite() && p.dh_norm > 0.0 {
            let v = 2.0 * p.delta * p.delta * p.h_norm / (fg * p.dh_norm * comm);
            if v < bound.delta_s_max {
                bound.delta_s_max = v;
                bound.argmin_s = Some(p.s);
            }
        }
        bound.delta_s_max_tau = bound.delta_s_max_tau.min(2.0 * p.h_norm / (prob.tau * fg * comm));
    }
    bound
}
