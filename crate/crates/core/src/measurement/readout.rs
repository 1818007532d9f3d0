use crate::error::{Error, Result};

/// Column-stochastic 2x2 confusion `[[P(0|0), P(0|1)], [P(1|0), P(1|1)]]`.
pub type Confusion = [[f64; 2]; 2];

pub fn confusion_from_fidelities(f0: f64, f1: f64) -> Confusion {
    [[f0, 1.0 - f1], [1.0 - f0, f1]]
}

/// Applies `m_q` along qubit `q` of a 2^n vector (qubit 0 most significant).
fn apply_per_qubit(v: &[f64], mats: &[Confusion]) -> Vec<f64> {
    let n = mats.len();
    let mut out = v.to_vec();
    for (q, m) in mats.iter().enumerate() {
        let bit = 1usize << (n - 1 - q);
        for i in 0..out.len() {
            if i & bit == 0 {
                let (a, b) = (out[i], out[i | bit]);
                out[i] = m[0][0] * a + m[0][1] * b;
                out[i | bit] = m[1][0] * a + m[1][1] * b;
            }
        }
    }
    out
}

fn transpose(m: &Confusion) -> Confusion {
    [[m[0][0], m[1][0]], [m[0][1], m[1][1]]]
}

fn check_len(p: &[f64], n: usize) -> Result<()> {
    if p.len() != 1usize << n {
        return Err(Error::DimensionMismatch { expected: 1usize << n, found: p.len() });
    }
    Ok(())
}

/// Distribution seen through per-qubit readout fidelities `(P(0|0), P(1|1))`.
pub fn apply_confusion(p: &[f64], fidelities: &[(f64, f64)]) -> Result<Vec<f64>> {
    check_len(p, fidelities.len())?;
    let mats: Vec<Confusion> = fidelities.iter().map(|&(a, b)| confusion_from_fidelities(a, b)).collect();
    Ok(apply_per_qubit(p, &mats))
}

/// Euclidean projection onto the probability simplex.
fn project_simplex(v: &[f64]) -> Vec<f64> {
    let mut u = v.to_vec();
    u.sort_by(|a, b| b.total_cmp(a));
    let mut cum = 0.0;
    let mut shift = 0.0;
    for (k, x) in u.iter().enumerate() {
        cum += x;
        let t = (cum - 1.0) / (k + 1) as f64;
        if x - t > 0.0 {
            shift = t;
        }
    }
    v.iter().map(|x| (x - shift).max(0.0)).collect()
}

/// Readout mitigation: `argmin_{q in simplex} ||C q - p||_2` with `C` the
/// tensor product of per-qubit confusion matrices.
///
/// When `C^-1 p` is already a distribution it is returned directly;
/// otherwise accelerated projected gradient runs from that point.
pub fn readout_correct(p: &[f64], confusion: &[Confusion]) -> Result<Vec<f64>> {
    let n = confusion.len();
    check_len(p, n)?;
    let total: f64 = p.iter().sum();
    if (total - 1.0).abs() > 1e-9 || p.iter().any(|x| *x < 0.0) {
        return Err(Error::InvalidArgument(format!("measured distribution must sum to 1, got {total}")));
    }
    let mut inverses = Vec::with_capacity(n);
    let mut lipschitz = 1.0;
    for (q, m) in confusion.iter().enumerate() {
        let stochastic = (m[0][0] + m[1][0] - 1.0).abs() < 1e-9 && (m[0][1] + m[1][1] - 1.0).abs() < 1e-9;
        if !stochastic || m.iter().flatten().any(|x| !(0.0..=1.0).contains(x)) {
            return Err(Error::InvalidArgument(format!("confusion matrix of qubit {q} is not column-stochastic")));
        }
        if m[0][0] <= 0.5 || m[1][1] <= 0.5 {
            return Err(Error::SingularConfusion { qubit: q });
        }
        let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        inverses.push([[m[1][1] / det, -m[0][1] / det], [-m[1][0] / det, m[0][0] / det]]);
        // largest singular value squared of the 2x2 block
        let fro2: f64 = m.iter().flatten().map(|x| x * x).sum();
        lipschitz *= 0.5 * (fro2 + (fro2 * fro2 - 4.0 * det * det).max(0.0).sqrt());
    }
    let direct = apply_per_qubit(p, &inverses);
    if direct.iter().all(|x| *x >= -1e-12) {
        let clipped: Vec<f64> = direct.iter().map(|x| x.max(0.0)).collect();
        let s: f64 = clipped.iter().sum();
        return Ok(clipped.into_iter().map(|x| x / s).collect());
    }
    let transposed: Vec<Confusion> = confusion.iter().map(transpose).collect();
    let step = 1.0 / lipschitz;
    let mut x = project_simplex(&direct);
    let mut y = x.clone();
    let mut t = 1.0f64;
    for _ in 0..20_000 {
        let resid: Vec<f64> = apply_per_qubit(&y, confusion).iter().zip(p).map(|(a, b)| a - b).collect();
        let grad = apply_per_qubit(&resid, &transposed);
        let next = project_simplex(&y.iter().zip(&grad).map(|(a, g)| a - step * g).collect::<Vec<_>>());
        let t_next = 0.5 * (1.0 + (1.0 + 4.0 * t * t).sqrt());
        let change: f64 = next.iter().zip(&x).map(|(a, b)| (a - b).abs()).sum();
        y = next.iter().zip(&x).map(|(a, b)| a + (t - 1.0) / t_next * (a - b)).collect();
        x = next;
        t = t_next;
        if change < 1e-15 {
            break;
        }
    }
    let s: f64 = x.iter().sum();
    Ok(x.into_iter().map(|v| v / s).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simplex_projection_of_a_distribution_is_identity() {
        let v = [0.2, 0.3, 0.5];
        let p = project_simplex(&v);
        for (a, b) in p.iter().zip(v) {
            assert!((a - b).abs() < 1e-15);
        }
        let q = project_simplex(&[2.0, -1.0]);
        assert_eq!(q, vec![1.0, 0.0]);
    }

    #[test]
    fn constrained_solution_on_inconsistent_input() {
        let c = confusion_from_fidelities(0.9, 0.9);
        // C^-1 of (1, 0) has a negative entry, so the constrained optimum sits on the boundary
        let q = readout_correct(&[1.0, 0.0], &[c]).unwrap();
        assert!((q[0] - 1.0).abs() < 1e-9 && q[1].abs() < 1e-9, "{q:?}");
    }
}
