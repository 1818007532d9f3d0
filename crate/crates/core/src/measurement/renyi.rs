use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand::distr::weighted::WeightedIndex;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sim::{DMat, Mat2, QuantumState, C64};

/// Haar-random `dim x dim` unitary: QR of a complex Ginibre matrix with the
/// phases of `R`'s diagonal moved into `Q`.
pub fn cue_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DMat {
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    let z = DMatrix::from_fn(dim, dim, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        C64::new(re * scale, im * scale)
    });
    let qr = z.qr();
    let (mut q, r) = qr.unpack();
    for k in 0..dim {
        let d = r[(k, k)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { C64::new(1.0, 0.0) };
        for row in 0..dim {
            q[(row, k)] *= phase;
        }
    }
    q
}

/// Generator for randomized-measurement instance `index` under `master`:
/// ChaCha8 seeded with `master`, on stream `index`.
pub fn instance_rng(master: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(index);
    rng
}

/// Seed for child run `index`: the first word of [`instance_rng`]`(master, index)`.
pub fn child_seed(master: u64, index: u64) -> u64 {
    instance_rng(master, index).random()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RenyiEstimate {
    /// Sorted qubit indices of the subsystem.
    pub mask: Vec<usize>,
    pub mean_bits: f64,
    pub stderr_bits: f64,
    pub purity_raw: f64,
    pub purity_stderr: f64,
    pub n_unitaries: usize,
    pub shots: usize,
}

impl RenyiEstimate {
    pub fn n_a(&self) -> usize {
        self.mask.len()
    }

    /// Mask as a bitstring over `n` qubits, qubit 0 first.
    pub fn mask_string(&self, n: usize) -> String {
        (0..n).map(|q| if self.mask.contains(&q) { '1' } else { '0' }).collect()
    }
}

/// Counts of `shots` full-register bitstrings after local Haar rotations.
fn sample_instance(state: &QuantumState, shots: usize, rng: &mut ChaCha8Rng) -> Result<Vec<u32>> {
    let n = state.n_qubits();
    let mut rotated = state.clone();
    for q in 0..n {
        let u = cue_unitary(2, rng);
        rotated.apply_1q(q, &Mat2::from_fn(|r, c| u[(r, c)]));
    }
    let probs: Vec<f64> = rotated.probabilities().into_iter().map(|p| p.max(0.0)).collect();
    let dist = WeightedIndex::new(&probs).map_err(|e| Error::InvalidArgument(format!("Born distribution: {e}")))?;
    let mut counts = vec![0u32; probs.len()];
    for _ in 0..shots {
        counts[dist.sample(rng)] += 1;
    }
    Ok(counts)
}

fn marginal(counts: &[u32], n: usize, mask: &[usize]) -> Vec<f64> {
    let mut out = vec![0.0; 1usize << mask.len()];
    for (i, &c) in counts.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let mut a = 0;
        for &q in mask {
            a = (a << 1) | ((i >> (n - 1 - q)) & 1);
        }
        out[a] += c as f64;
    }
    out
}

/// `2^{N_A} sum_{s,s'} (-2)^{-D(s,s')} [n_s n_s' - delta_ss' n_s] / (S (S-1))`.
fn purity_from_counts(n_s: &[f64], shots: usize) -> f64 {
    let na = n_s.len().trailing_zeros() as usize;
    let mut w = n_s.to_vec();
    for q in 0..na {
        let bit = 1usize << q;
        for i in 0..w.len() {
            if i & bit == 0 {
                let (a, b) = (w[i], w[i | bit]);
                w[i] = a - 0.5 * b;
                w[i | bit] = b - 0.5 * a;
            }
        }
    }
    let quad: f64 = n_s.iter().zip(&w).map(|(a, b)| a * b).sum();
    let s = shots as f64;
    (1u64 << na) as f64 * (quad - s) / (s * (s - 1.0))
}

/// Randomized-measurement second Rényi entropy for every subsystem in `masks`.
///
/// Instance `k` draws its local unitaries and shots from
/// [`instance_rng`]`(master_seed, k)`, and every mask is evaluated on the same
/// samples.
pub fn randomized_renyi_masks(
    state: &QuantumState,
    masks: &[Vec<usize>],
    n_unitaries: usize,
    shots: usize,
    master_seed: u64,
) -> Result<Vec<RenyiEstimate>> {
    let n = state.n_qubits();
    if shots < 2 {
        return Err(Error::InvalidArgument(format!("at least 2 shots are needed, got {shots}")));
    }
    if n_unitaries == 0 {
        return Err(Error::InvalidArgument("need at least one unitary".into()));
    }
    for m in masks {
        if m.is_empty() {
            return Err(Error::EmptySubset);
        }
        if m.iter().any(|&q| q >= n) {
            return Err(Error::InvalidTargets { targets: m.clone(), n_qubits: n });
        }
    }
    let per_instance: Vec<Vec<f64>> = (0..n_unitaries)
        .into_par_iter()
        .map(|k| {
            let mut rng = instance_rng(master_seed, k as u64);
            let counts = sample_instance(state, shots, &mut rng)?;
            Ok(masks.iter().map(|m| purity_from_counts(&marginal(&counts, n, m), shots)).collect())
        })
        .collect::<Result<_>>()?;
    let u = n_unitaries as f64;
    Ok(masks
        .iter()
        .enumerate()
        .map(|(idx, m)| {
            let xs: Vec<f64> = per_instance.iter().map(|row| row[idx]).collect();
            let mean = xs.iter().sum::<f64>() / u;
            let var = if n_unitaries > 1 { xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (u - 1.0) } else { 0.0 };
            let se = (var / u).sqrt();
            RenyiEstimate {
                mask: m.clone(),
                mean_bits: -mean.log2(),
                stderr_bits: se / (mean * std::f64::consts::LN_2),
                purity_raw: mean,
                purity_stderr: se,
                n_unitaries,
                shots,
            }
        })
        .collect())
}

/// Single-subsystem form; the master seed is drawn from `rng`.
pub fn randomized_renyi<R: Rng + ?Sized>(
    state: &QuantumState,
    subsystem: &[usize],
    n_unitaries: usize,
    shots: usize,
    rng: &mut R,
) -> Result<RenyiEstimate> {
    let master = rng.random::<u64>();
    let mut sorted = subsystem.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    Ok(randomized_renyi_masks(state, &[sorted], n_unitaries, shots, master)?.remove(0))
}

/// `S_A - S_whole * N_A / N`.
pub fn corrected_entropy(s_sub: f64, s_whole: f64, n_a: usize, n: usize) -> Result<f64> {
    if n == 0 || n_a > n {
        return Err(Error::InvalidArgument(format!("need 0 < N and N_A <= N, got N_A = {n_a}, N = {n}")));
    }
    Ok(s_sub - s_whole * n_a as f64 / n as f64)
}

/// Floor on the margin so exact entropies that differ only by rounding never fire.
pub const WITNESS_FLOOR: f64 = 1e-9;

/// True when the subsystem entropy exceeds the whole-system entropy by more
/// than `stderr` (and at least [`WITNESS_FLOOR`]).
pub fn entanglement_witness(s_sub: f64, s_whole: f64, stderr: f64) -> bool {
    s_sub - s_whole > stderr.max(WITNESS_FLOOR)
}

/// All `C(n, k)` subsets of `0..n` of size `k`, in lexicographic order.
pub fn subsets_of_size(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for q in start..n {
            cur.push(q);
            rec(q + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_formula_matches_pairwise_sum() {
        let counts = [5.0, 1.0, 0.0, 3.0];
        let shots = 9;
        let mut direct = 0.0;
        for (s, a) in counts.iter().enumerate() {
            for (t, b) in counts.iter().enumerate() {
                let d = (s ^ t).count_ones() as i32;
                let pair = if s == t { a * (a - 1.0) } else { a * b };
                direct += (-2.0f64).powi(-d) * pair;
            }
        }
        direct *= 4.0 / (shots as f64 * (shots as f64 - 1.0));
        assert!((purity_from_counts(&counts, shots) - direct).abs() < 1e-14);
    }

    #[test]
    fn subset_counts() {
        assert_eq!(subsets_of_size(7, 3).len(), 35);
        assert_eq!(subsets_of_size(4, 0), vec![Vec::<usize>::new()]);
    }
}
