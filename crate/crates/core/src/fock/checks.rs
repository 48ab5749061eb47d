use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{nullity, spectral_norm, NormEstimate, POWER_MAX_ITER, POWER_TOL};
use crate::weights::{MuSystem, WeightSystem};
use crate::words::Word;

use super::{build_shift, GradedOperator, ShiftKind, TruncatedFock, MAX_DENSE_DIM};

/// Largest `‖(T_i S_j − S_j T_i) ξ_w‖` over `|w| <= depth − 2`.
#[derive(Clone, Debug, PartialEq)]
pub struct CommutationReport {
    pub max_defect: f64,
    /// `(i, j, w)` attaining the maximum.
    pub witness: Option<(u8, u8, Word)>,
    pub depth: usize,
}

/// Commutation defect of the compressed `T_i` and `S_j` on the levels where
/// both products stay inside the truncation.
pub fn commutation_defect(ws: &WeightSystem, mu: &MuSystem, depth: usize) -> Result<CommutationReport> {
    let n = ws.n();
    if mu.n() != n {
        return Err(Error::domain("left and right weights use different alphabets"));
    }
    let space = TruncatedFock::new(n, depth)?;
    let t: Vec<_> = (1..=n as u8)
        .map(|i| build_shift(&space, ShiftKind::Left(ws), i))
        .collect::<Result<_>>()?;
    let s: Vec<_> = (1..=n as u8)
        .map(|j| build_shift(&space, ShiftKind::Right(mu), j))
        .collect::<Result<_>>()?;
    let mut report = CommutationReport {
        max_defect: 0.0,
        witness: None,
        depth,
    };
    if depth < 2 {
        return Ok(report);
    }
    for (i, ti) in t.iter().enumerate() {
        for (j, sj) in s.iter().enumerate() {
            let defect = ti.mul(sj)?.sub(&sj.mul(ti)?)?.restrict_columns(depth - 2);
            let (norm, col) = defect.max_column_norm();
            if norm > report.max_defect {
                report.max_defect = norm;
                report.witness = Some((i as u8 + 1, j as u8 + 1, space.basis().word_at(col)));
            }
        }
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq)]
pub struct NormEntry {
    pub letter: u8,
    /// Power-iteration estimate of `‖T_i‖` on the truncation.
    pub computed: NormEstimate,
    /// `max_{|w| < depth} λ_{i,w}`.
    pub expected: f64,
    pub gap: f64,
}

/// Compares `‖T_i‖` on the truncation with the largest weight it carries.
pub fn norm_check(ws: &WeightSystem, depth: usize) -> Result<Vec<NormEntry>> {
    if depth == 0 {
        return Err(Error::domain("depth must be at least 1"));
    }
    let space = TruncatedFock::new(ws.n(), depth)?;
    let maxima = ws.letter_maxima_up_to(depth - 1);
    (1..=ws.n() as u8)
        .map(|i| {
            let t = build_shift(&space, ShiftKind::Left(ws), i)?;
            let computed = spectral_norm(&t, POWER_TOL, POWER_MAX_ITER);
            let expected = maxima[i as usize - 1];
            Ok(NormEntry {
                letter: i,
                computed,
                expected,
                gap: (computed.value - expected).abs(),
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct VacuumReport {
    /// Numerical dimension of `∩ ker T_i^*` on the truncation.
    pub kernel_dimension: usize,
    /// `|⟨v, ξ_e⟩|` for the unit kernel vector `v` (1 when the kernel is `span ξ_e`).
    pub vacuum_overlap: f64,
    /// Largest entry of `I − Σ L_i L_i^* − P_e` on levels `<= depth − 1`.
    pub projection_defect: f64,
}

/// Joint kernel of the `T_i^*` and the vacuum projection identity.
pub fn vacuum_kernel_check(ws: &WeightSystem, depth: usize) -> Result<VacuumReport> {
    let n = ws.n();
    let space = TruncatedFock::new(n, depth)?;
    let dim = space.dimension();
    if dim * n > MAX_DENSE_DIM * 2 {
        return Err(Error::Size(format!("stacked adjoint of size {}x{dim} is too large", dim * n)));
    }
    let mut stacked = DMatrix::<Complex64>::zeros(n * dim, dim);
    for i in 1..=n as u8 {
        let ta = build_shift(&space, ShiftKind::Left(ws), i)?.adjoint();
        let off = (i as usize - 1) * dim;
        for c in 0..dim {
            for &(r, v) in ta.column(c) {
                stacked[(off + r, c)] = v;
            }
        }
    }
    let (kernel_dimension, vt) = nullity(stacked, 1e-10);
    let vacuum_overlap = if kernel_dimension == 1 {
        vt[(vt.nrows() - 1, 0)].norm()
    } else {
        0.0
    };
    let mut sum = GradedOperator::zeros(&space);
    for i in 1..=n as u8 {
        let l = build_shift(&space, ShiftKind::LeftUnweighted, i)?;
        sum = sum.add(&l.mul(&l.adjoint())?)?;
    }
    let vacuum = GradedOperator::diagonal(&space, |c| Complex64::new(if c == 0 { 1.0 } else { 0.0 }, 0.0));
    let projection_defect = GradedOperator::identity(&space)
        .sub(&sum)?
        .sub(&vacuum)?
        .restrict_to_levels(depth.saturating_sub(1))
        .max_abs();
    Ok(VacuumReport {
        kernel_dimension,
        vacuum_overlap,
        projection_defect,
    })
}
