use super::{HamiltonianSpec, StateVector, C64};

/// exp(-i t sum_k c_k H_k) psi without forming any matrix.
///
/// The interval is cut into substeps with ||t H|| <= 2 (using the sum of
/// absolute coefficients as the norm bound) and each substep is a Taylor
/// series truncated once the next term drops below 1e-17 relative.
pub fn expm_multiply(parts: &[(&HamiltonianSpec, f64)], psi: &StateVector, t: f64) -> StateVector {
    let bound: f64 = parts.iter().map(|(h, c)| h.norm_bound() * c.abs()).sum::<f64>() * t.abs();
    if bound == 0.0 {
        return psi.clone();
    }
    let substeps = (bound / 2.0).ceil().max(1.0) as usize;
    let dt = t / substeps as f64;
    let mut v = psi.amplitudes().to_vec();
    let mut term = vec![C64::new(0.0, 0.0); v.len()];
    let mut next = vec![C64::new(0.0, 0.0); v.len()];
    for _ in 0..substeps {
        term.copy_from_slice(&v);
        let mut acc = v.clone();
        for k in 1..=60 {
            next.iter_mut().for_each(|z| *z = C64::new(0.0, 0.0));
            let scale = C64::new(0.0, -dt / k as f64);
            for (h, c) in parts {
                if *c != 0.0 {
                    h.apply_add(&term, scale * *c, &mut next);
                }
            }
            std::mem::swap(&mut term, &mut next);
            let mut tn = 0.0;
            for (a, b) in acc.iter_mut().zip(&term) {
                *a += b;
                tn += b.norm_sqr();
            }
            if tn.sqrt() < 1e-17 {
                break;
            }
        }
        v = acc;
    }
    StateVector::from_raw(psi.n_qubits(), v)
}
