use super::{AnnealingProblem, Subspace};
use crate::error::{Error, Result};
use crate::sim::linalg::{self, expm_hermitian, hs_norm};
use crate::sim::{expm_multiply, DMat, StateVector, C64};

/// Largest register for dense block exponentials.
pub const DENSE_BLOCK_BUDGET: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanBlock {
    /// 1-based block number.
    pub index: usize,
    pub s_bar: f64,
    pub ds: f64,
    pub f: f64,
    pub g: f64,
    pub phi_z: f64,
    pub phi_j: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DigitizedPlan {
    pub tau: f64,
    pub omega0: f64,
    pub j0: f64,
    pub blocks: Vec<PlanBlock>,
}

impl DigitizedPlan {
    pub fn n_blocks(&self) -> usize {
        self.blocks.len()
    }

    /// Block `n`, 1-based.
    pub fn block(&self, n: usize) -> Result<&PlanBlock> {
        if n == 0 || n > self.blocks.len() {
            return Err(Error::InvalidArgument(format!("block {n} outside 1..={}", self.blocks.len())));
        }
        Ok(&self.blocks[n - 1])
    }

    /// Columns `block, s_bar, ds, phi_z, phi_j`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("block,s_bar,ds,phi_z,phi_j\n");
        for b in &self.blocks {
            out.push_str(&format!("{},{:.16e},{:.16e},{:.16e},{:.16e}\n", b.index, b.s_bar, b.ds, b.phi_z, b.phi_j));
        }
        out
    }
}

/// Uniform digitization into `m` blocks with midpoint angles
/// `phi_z = omega0 tau f(s_bar) ds`, `phi_j = j0 tau g(s_bar) ds`.
pub fn make_plan(prob: &AnnealingProblem, m: usize, omega0: f64, j0: f64) -> Result<DigitizedPlan> {
    if m == 0 {
        return Err(Error::InvalidArgument("block count must be at least 1".into()));
    }
    let ds = 1.0 / m as f64;
    let blocks = (1..=m)
        .map(|n| {
            let s_bar = (n as f64 - 0.5) / m as f64;
            let v = prob.schedule.eval_unchecked(s_bar);
            PlanBlock {
                index: n,
                s_bar,
                ds,
                f: v.f,
                g: v.g,
                phi_z: omega0 * prob.tau * v.f * ds,
                phi_j: j0 * prob.tau * v.g * ds,
            }
        })
        .collect();
    Ok(DigitizedPlan { tau: prob.tau, omega0, j0, blocks })
}

/// exp(-i tau ds g H_fin) exp(-i tau ds f H_ini) for block `n` (1-based).
pub fn block_reference_unitary(prob: &AnnealingProblem, plan: &DigitizedPlan, n: usize) -> Result<DMat> {
    let b = plan.block(n)?;
    block_split_unitary(prob, b.s_bar, b.ds)
}

/// Trotter-split block frozen at `s_bar` with width `ds`.
pub fn block_split_unitary(prob: &AnnealingProblem, s_bar: f64, ds: f64) -> Result<DMat> {
    let (hi, hf) = prob.dense_pair(DENSE_BLOCK_BUDGET)?;
    let v = prob.schedule.eval(s_bar)?;
    let t = prob.tau * ds;
    Ok(expm_hermitian(&(hf * C64::new(v.g, 0.0)), t) * expm_hermitian(&(hi * C64::new(v.f, 0.0)), t))
}

/// Unsplit block exp(-i tau ds H(s_bar)).
pub fn block_exact_unitary(prob: &AnnealingProblem, s_bar: f64, ds: f64) -> Result<DMat> {
    let (hi, hf) = prob.dense_pair(DENSE_BLOCK_BUDGET)?;
    let v = prob.schedule.eval(s_bar)?;
    Ok(expm_hermitian(&(hi * C64::new(v.f, 0.0) + hf * C64::new(v.g, 0.0)), prob.tau * ds))
}

/// Hilbert-Schmidt distance between the exact and split block.
pub fn splitting_error(prob: &AnnealingProblem, s_bar: f64, ds: f64) -> Result<f64> {
    splitting_error_on(prob, &Subspace::full(prob.n_qubits()), s_bar, ds)
}

/// [`splitting_error`] restricted to an invariant subspace.
pub fn splitting_error_on(prob: &AnnealingProblem, sub: &Subspace, s_bar: f64, ds: f64) -> Result<f64> {
    let (hi, hf) = prob.dense_pair_on(sub, DENSE_BLOCK_BUDGET)?;
    let v = prob.schedule.eval(s_bar)?;
    let t = prob.tau * ds;
    let a = hi * C64::new(0.0, -t * v.f);
    let b = hf * C64::new(0.0, -t * v.g);
    if hs_norm(&a) + hs_norm(&b) > 1.0 {
        let exact = expm_hermitian(&((&a + &b) * C64::new(0.0, 1.0)), 1.0);
        let split = expm_hermitian(&(&b * C64::new(0.0, 1.0)), 1.0) * expm_hermitian(&(&a * C64::new(0.0, 1.0)), 1.0);
        return Ok(hs_norm(&(exact - split)));
    }
    Ok(hs_norm(&exp_difference(&a, &b)))
}

/// exp(A + B) - exp(B) exp(A) summed order by order, so the leading
/// `[A, B] / 2` survives even when both exponentials round to the identity.
fn exp_difference(a: &DMat, b: &DMat) -> DMat {
    let dim = a.nrows();
    let sum = a + b;
    let mut pa = vec![linalg::identity(dim)];
    let mut pb = vec![linalg::identity(dim)];
    let mut joint = linalg::identity(dim);
    let mut out = DMat::zeros(dim, dim);
    for k in 1..=40 {
        let kc = C64::new(k as f64, 0.0);
        pa.push(&pa[k - 1] * a / kc);
        pb.push(&pb[k - 1] * b / kc);
        joint = &joint * &sum / kc;
        let mut term = joint.clone();
        for j in 0..=k {
            term -= &pb[j] * &pa[k - j];
        }
        let size = hs_norm(&term);
        out += term;
        if k > 2 && size <= 1e-18 * hs_norm(&out) {
            break;
        }
    }
    out
}

/// Matrix-free digitized evolution. Returns `M + 1` states: the input
/// followed by the state after each block.
pub fn digitized_evolve(prob: &AnnealingProblem, plan: &DigitizedPlan, psi0: &StateVector) -> Result<Vec<StateVector>> {
    if psi0.n_qubits() != prob.n_qubits() {
        return Err(Error::DimensionMismatch { expected: prob.n_qubits(), found: psi0.n_qubits() });
    }
    let mut out = Vec::with_capacity(plan.n_blocks() + 1);
    out.push(psi0.clone());
    let mut psi = psi0.clone();
    for b in &plan.blocks {
        let t = plan.tau * b.ds;
        psi = expm_multiply(&[(&prob.h_ini, b.f)], &psi, t);
        psi = expm_multiply(&[(&prob.h_fin, b.g)], &psi, t);
        out.push(psi.clone());
    }
    Ok(out)
}

/// Product of all block reference unitaries, last block leftmost.
pub fn digitized_unitary(prob: &AnnealingProblem, plan: &DigitizedPlan) -> Result<DMat> {
    linalg::check_budget(prob.n_qubits(), DENSE_BLOCK_BUDGET)?;
    let mut u = linalg::identity(1 << prob.n_qubits());
    for n in 1..=plan.n_blocks() {
        u = block_reference_unitary(prob, plan, n)? * u;
    }
    Ok(u)
}
