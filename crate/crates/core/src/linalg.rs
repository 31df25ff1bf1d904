//! Small dense linear-algebra helpers.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{Matrix, Vector};

const POWER_MAX_ITER: usize = 100;
const POWER_REL_TOL: f64 = 1e-10;

/// Largest singular value of `m`, by power iteration on `mᵀm`.
///
/// Stops after 100 iterations or when the Rayleigh quotient changes by less
/// than `1e-10` relatively. The start vector is a fixed pseudo-random vector,
/// so the result is deterministic.
pub fn spectral_norm(m: &Matrix) -> f64 {
    spectral_norm_with(m, POWER_MAX_ITER, POWER_REL_TOL)
}

/// [`spectral_norm`] with explicit iteration cap and relative tolerance.
pub fn spectral_norm_with(m: &Matrix, max_iter: usize, rel_tol: f64) -> f64 {
    let n = m.ncols();
    if n == 0 || m.nrows() == 0 {
        return 0.0;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x005e_ed0f_9043);
    let mut v = Vector::from_fn(n, |_, _| rng.random_range(0.5..1.5));
    v /= v.norm();

    let mut lambda = 0.0_f64;
    for _ in 0..max_iter {
        let mv = m * &v;
        let w = m.tr_mul(&mv);
        let next = mv.norm_squared();
        let wn = w.norm();
        if wn == 0.0 {
            // v lies in the null space of mᵀm; with a generic start this means m = 0.
            return next.sqrt();
        }
        v = w / wn;
        let done = (next - lambda).abs() <= rel_tol * next.abs();
        lambda = next;
        if done {
            break;
        }
    }
    // Final Rayleigh quotient with the last normalized vector.
    let last = (m * &v).norm_squared();
    lambda.max(last).sqrt()
}

/// Smallest eigenvalue of a symmetric matrix.
pub fn min_eigenvalue(m: &Matrix) -> f64 {
    if m.nrows() == 0 {
        return 0.0;
    }
    m.clone()
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

/// Max absolute asymmetry `|m_ij - m_ji|`.
pub fn asymmetry(m: &Matrix) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0_f64;
    for i in 0..n {
        for j in (i + 1)..n {
            worst = worst.max((m[(i, j)] - m[(j, i)]).abs());
        }
    }
    worst
}

/// PSD test with the floor `λ_min ≥ -1e-8 · (1 + ‖m‖)`.
pub fn is_psd(m: &Matrix) -> bool {
    min_eigenvalue(m) >= -psd_floor(m)
}

pub(crate) fn psd_floor(m: &Matrix) -> f64 {
    1e-8 * (1.0 + m.norm())
}
