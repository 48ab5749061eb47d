//! Small numerical helpers shared by the checks.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::fock::GradedOperator;

pub const POWER_TOL: f64 = 1e-10;
pub const POWER_MAX_ITER: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NormEstimate {
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
}

pub(crate) fn norm2(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).fold(0.0, |a, b| a + b).sqrt()
}

/// Spectral norm by power iteration on `X^* X`, started from the normalized
/// all-ones vector. Stops when the Rayleigh quotient changes by at most
/// `tol` relative to itself.
pub fn spectral_norm(x: &GradedOperator, tol: f64, max_iter: usize) -> NormEstimate {
    let dim = x.dimension();
    if dim == 0 {
        return NormEstimate {
            value: 0.0,
            iterations: 0,
            converged: true,
        };
    }
    let xa = x.adjoint();
    let mut v = vec![Complex64::new(1.0 / (dim as f64).sqrt(), 0.0); dim];
    let mut prev = f64::NAN;
    for it in 1..=max_iter {
        let y = x.apply(&v);
        let rq = norm2(&y).powi(2);
        let z = xa.apply(&y);
        let nz = norm2(&z);
        if nz == 0.0 || (rq - prev).abs() <= tol * rq {
            return NormEstimate {
                value: rq.sqrt(),
                iterations: it,
                converged: true,
            };
        }
        prev = rq;
        v = z.into_iter().map(|c| c / nz).collect();
    }
    NormEstimate {
        value: prev.sqrt(),
        iterations: max_iter,
        converged: false,
    }
}

/// Singular values of a dense matrix, largest first, with the right singular
/// vectors as rows of the returned matrix (same order).
pub(crate) fn svd_sorted(m: DMatrix<Complex64>) -> (Vec<f64>, DMatrix<Complex64>) {
    let svd = m.svd(false, true);
    let vt = svd.v_t.expect("requested right singular vectors");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let values = order.iter().map(|&k| svd.singular_values[k]).collect();
    let rows = DMatrix::from_fn(order.len(), vt.ncols(), |r, c| vt[(order[r], c)]);
    (values, rows)
}

/// Dimension of the null space of `m` (columns), counting singular values at
/// most `rel_tol` times the largest, plus the columns beyond the row count.
pub(crate) fn nullity(m: DMatrix<Complex64>, rel_tol: f64) -> (usize, DMatrix<Complex64>) {
    let cols = m.ncols();
    let (values, vt) = svd_sorted(m);
    let top = values.first().copied().unwrap_or(0.0);
    let rank = values.iter().filter(|&&s| s > rel_tol * top).count();
    (cols - rank, vt)
}
