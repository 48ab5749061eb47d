//! Joint right and left spectra of the unweighted left creation tuple
//! `L = (L_1, …, L_n)`.
//!
//! Inside the open ball `L^*` has joint eigenvectors, so no right inverse
//! exists; outside the closed ball the resolvent series gives one. Left
//! spectrum membership for `n = 2` is certified by the growth of any
//! hypothetical left inverse along the words `j^k`.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::eigen::{eigen_residual, eigenvector_coeffs};
use crate::error::{Error, Result};
use crate::fock::{build_shift, GradedOperator, ShiftKind, TruncatedFock};
use crate::weights::WeightSystem;
use crate::words::{truncated_dimension, Word};

/// Width of the band around the unit sphere where no verdict is issued.
pub const BOUNDARY_TOL: f64 = 1e-9;
/// Largest truncated dimension used by the resolvent checks.
pub const MAX_SPECTRA_DIM: usize = 1 << 15;
/// Largest truncated dimension of the dense least-squares solve.
pub const MAX_LSQ_DIM: usize = 1024;

fn zero() -> Complex64 {
    Complex64::default()
}

fn one() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

pub fn lambda_norm(lambda: &[Complex64]) -> f64 {
    lambda.iter().map(|z| z.norm_sqr()).fold(0.0, |a, b| a + b).sqrt()
}

fn check_lambda(lambda: &[Complex64]) -> Result<()> {
    crate::words::check_alphabet(lambda.len())?;
    if lambda.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Err(Error::domain("λ must be finite"));
    }
    Ok(())
}

fn space_for(n: usize, depth: usize, limit: usize) -> Result<TruncatedFock> {
    if depth == 0 {
        return Err(Error::domain("depth must be at least 1"));
    }
    match truncated_dimension(n, depth) {
        Some(d) if d <= limit => TruncatedFock::new(n, depth),
        _ => Err(Error::Size(format!("n = {n}, depth {depth} exceeds {limit} basis vectors"))),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpectrumMode {
    Right,
    LeftGrowth,
    ZeroLeftInverse,
}

impl SpectrumMode {
    pub fn as_str(self) -> &'static str {
        match self {
            SpectrumMode::Right => "right",
            SpectrumMode::LeftGrowth => "left_growth",
            SpectrumMode::ZeroLeftInverse => "zero_left_inverse",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpectrumVerdict {
    InSpectrum,
    NotInSpectrum,
    Inconclusive,
    Unknown,
}

impl SpectrumVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            SpectrumVerdict::InSpectrum => "in_spectrum",
            SpectrumVerdict::NotInSpectrum => "not_in_spectrum",
            SpectrumVerdict::Inconclusive => "inconclusive",
            SpectrumVerdict::Unknown => "unknown",
        }
    }
}

/// Norms of `(I − Σ conj(λ_i) L_i) B − I` for `B = Σ_{|w| < depth} conj(w(λ)) L_w`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ResolventReport {
    pub depth: usize,
    /// Frobenius norm on rows at levels `<= depth − 1`.
    pub low_defect: f64,
    /// Frobenius norm on the top level, `‖λ‖^depth` in exact arithmetic.
    pub top_defect: f64,
}

/// `Σ_{|w| < depth} conj(w(λ)) L_w` on the truncation.
fn resolvent_series(space: &TruncatedFock, lambda: &[Complex64]) -> Result<GradedOperator> {
    let depth = space.depth();
    let unw = WeightSystem::unweighted(space.n())?;
    let coeffs = eigenvector_coeffs(&unw, lambda, depth - 1)?.coeffs;
    let basis = space.basis();
    GradedOperator::from_columns(space, |col| {
        let v = basis.letters_at(col);
        let top = (depth - 1).min(depth - v.len());
        (0..basis.levels_up_to(top).len())
            .map(|idx| {
                let mut wv = basis.letters_at(idx);
                wv.extend_from_slice(&v);
                (basis.index_of_letters(&wv).expect("within depth"), coeffs[idx])
            })
            .collect()
    })
}

fn defect_split(space: &TruncatedFock, product: &GradedOperator) -> Result<(f64, f64)> {
    let d = product.sub(&GradedOperator::identity(space))?;
    let top = space.depth();
    let low = d.restrict_rows(top - 1).frobenius_norm();
    let high = d.filter(|r, _| space.level_of(r) == top).frobenius_norm();
    Ok((low, high))
}

fn left_shifts(space: &TruncatedFock) -> Result<Vec<GradedOperator>> {
    (1..=space.n() as u8)
        .map(|i| build_shift(space, ShiftKind::LeftUnweighted, i))
        .collect()
}

pub fn resolvent_check(lambda: &[Complex64], depth: usize) -> Result<ResolventReport> {
    check_lambda(lambda)?;
    let norm = lambda_norm(lambda);
    if norm >= 1.0 {
        return Err(Error::precondition(format!(
            "the resolvent series needs ‖λ‖ < 1, got {norm}"
        )));
    }
    let space = space_for(lambda.len(), depth, MAX_SPECTRA_DIM)?;
    let b = resolvent_series(&space, lambda)?;
    let mut m = GradedOperator::identity(&space);
    for (li, l) in lambda.iter().zip(left_shifts(&space)?) {
        m = m.combine(one(), &l, -li.conj())?;
    }
    let (low_defect, top_defect) = defect_split(&space, &m.mul(&b)?)?;
    Ok(ResolventReport {
        depth,
        low_defect,
        top_defect,
    })
}

/// One row of a left growth table: a lower bound on `‖A ξ_{j^k}‖`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GrowthRow {
    pub k: usize,
    pub bound: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GrowthCase {
    /// `|λ_j| = 1`: `A_j ξ_{j^k}` contains `k` orthonormal tail vectors.
    Unimodular,
    /// `|λ_j| > 1`: the other component is multiplied by `λ_j` at each step.
    Expanding,
}

impl GrowthCase {
    pub fn as_str(self) -> &'static str {
        match self {
            GrowthCase::Unimodular => "unimodular",
            GrowthCase::Expanding => "expanding",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GrowthTable {
    pub case: GrowthCase,
    /// Letter `j` with `|λ_j| >= 1`; the bounds are along `ξ_{j^k}`.
    pub letter: u8,
    /// Index of the left inverse component whose growth is bounded.
    pub component: u8,
    pub assumed_norm: f64,
    pub rows: Vec<GrowthRow>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RightInverse {
    /// `λ / ‖λ‖²`.
    pub lambda_inverse: Vec<Complex64>,
    /// `conj(λ_i) / ‖λ‖²`, so that `B_i = factor_i Σ_w conj(w(λ^{-1})) L_w`.
    pub factors: Vec<Complex64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ZeroLeftReport {
    /// `max_{i,j} ‖A_i L_j − δ_ij I‖` on columns at levels `<= depth − 1`.
    pub identity_defect: f64,
    /// `‖X L − Y‖` for the least-squares solutions.
    pub solve_residual: f64,
    /// `‖X − L_i^* − (X ξ_e) ξ_e^*‖`, worst over `i`.
    pub reconstruction_residual: f64,
    /// `X_i ξ_e` of the least-squares solutions, as sparse coefficients.
    pub recovered: Vec<Vec<(Word, Complex64)>>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Witness {
    None,
    /// Leading coefficients of `ν_λ`.
    Eigenvector(Vec<(Word, Complex64)>),
    RightInverse(RightInverse),
    Growth(GrowthTable),
    ZeroLeft(ZeroLeftReport),
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumReport {
    pub lambda: Vec<Complex64>,
    pub mode: SpectrumMode,
    pub verdict: SpectrumVerdict,
    pub defects: BTreeMap<String, f64>,
    pub witness: Witness,
    /// Reason when no verdict could be certified.
    pub note: Option<String>,
}

/// Levels of `ν_λ` kept in a report.
const WITNESS_LEVELS: usize = 2;

/// Right spectrum membership of `L` at `λ`.
pub fn right_membership(lambda: &[Complex64], depth: usize) -> Result<SpectrumReport> {
    check_lambda(lambda)?;
    let n = lambda.len();
    let norm = lambda_norm(lambda);
    let mut report = SpectrumReport {
        lambda: lambda.to_vec(),
        mode: SpectrumMode::Right,
        verdict: SpectrumVerdict::Inconclusive,
        defects: BTreeMap::new(),
        witness: Witness::None,
        note: None,
    };
    if norm <= 1.0 - BOUNDARY_TOL {
        let unw = WeightSystem::unweighted(n)?;
        space_for(n, depth, MAX_SPECTRA_DIM)?;
        let residual = eigen_residual(&unw, lambda, depth)?;
        let cand = eigenvector_coeffs(&unw, lambda, depth.min(WITNESS_LEVELS))?;
        let witness = cand
            .space
            .basis()
            .words()
            .zip(cand.coeffs)
            .filter(|(_, c)| *c != zero())
            .collect();
        report.verdict = SpectrumVerdict::InSpectrum;
        report.defects.insert("eigen_residual".into(), residual.max_residual);
        report.witness = Witness::Eigenvector(witness);
    } else if norm >= 1.0 + BOUNDARY_TOL {
        let space = space_for(n, depth, MAX_SPECTRA_DIM)?;
        let n2 = norm * norm;
        let lambda_inverse: Vec<Complex64> = lambda.iter().map(|z| z / n2).collect();
        let factors: Vec<Complex64> = lambda.iter().map(|z| z.conj() / n2).collect();
        let series = resolvent_series(&space, &lambda_inverse)?;
        let mut sum = GradedOperator::zeros(&space);
        for ((l, li), fi) in left_shifts(&space)?.iter().zip(lambda).zip(&factors) {
            let shifted = GradedOperator::identity(&space).combine(*li, l, -one())?;
            sum = sum.add(&shifted.mul(&series.scale(*fi))?)?;
        }
        let (low, top) = defect_split(&space, &sum)?;
        report.verdict = SpectrumVerdict::NotInSpectrum;
        report.defects.insert("right_inverse_low".into(), low);
        report.defects.insert("right_inverse_top".into(), top);
        report.witness = Witness::RightInverse(RightInverse {
            lambda_inverse,
            factors,
        });
    } else {
        report.note = Some(format!("‖λ‖ = {norm} lies within {BOUNDARY_TOL:e} of the unit sphere"));
    }
    Ok(report)
}

/// Lower bounds on the growth of a hypothetical left inverse of `L − λ`
/// along `ξ_{j^k}`, `k = 1..=k_max`.
///
/// With `|λ_j| = 1`, `assumed_norm` bounds `‖A_j ξ_e‖` from above; with
/// `|λ_j| > 1` it is `‖A_{j′} ξ_e‖` for the other index `j′`.
pub fn left_growth_certificate(lambda: &[Complex64], k_max: usize, assumed_norm: f64) -> Result<GrowthTable> {
    check_lambda(lambda)?;
    if lambda.len() != 2 {
        return Err(Error::domain("growth certificates are implemented for n = 2"));
    }
    if !(assumed_norm >= 0.0 && assumed_norm.is_finite()) {
        return Err(Error::domain("the assumed norm must be finite and nonnegative"));
    }
    let moduli = [lambda[0].norm(), lambda[1].norm()];
    let Some(j) = (0..2).find(|&j| moduli[j] >= 1.0 - BOUNDARY_TOL) else {
        return Err(Error::precondition(format!(
            "no component of λ has modulus >= 1 (|λ_1| = {}, |λ_2| = {})",
            moduli[0], moduli[1]
        )));
    };
    let r = moduli[j];
    let case = if r <= 1.0 + BOUNDARY_TOL {
        GrowthCase::Unimodular
    } else {
        GrowthCase::Expanding
    };
    let mut rows = Vec::with_capacity(k_max);
    match case {
        GrowthCase::Unimodular => {
            // ‖Σ_{i<k} λ_j^{k-1-i} ξ_{j^i}‖², built one step at a time
            let mut tail_sq = 0.0f64;
            let r2 = r * r;
            for k in 1..=k_max {
                tail_sq = tail_sq * r2 + 1.0;
                rows.push(GrowthRow {
                    k,
                    bound: tail_sq.sqrt() - assumed_norm,
                });
            }
        }
        GrowthCase::Expanding => {
            if assumed_norm == 0.0 {
                return Err(Error::precondition(
                    "with |λ_j| > 1 the certificate needs A_{j′} ξ_e ≠ 0; the case A_{j′} ξ_e = 0 is not covered",
                ));
            }
            let mut bound = assumed_norm;
            for k in 1..=k_max {
                bound *= r;
                rows.push(GrowthRow { k, bound });
            }
        }
    }
    let letter = j as u8 + 1;
    Ok(GrowthTable {
        case,
        letter,
        component: match case {
            GrowthCase::Unimodular => letter,
            GrowthCase::Expanding => 3 - letter,
        },
        assumed_norm,
        rows,
    })
}

/// Left spectrum report: a growth certificate where one exists, `Unknown`
/// for `λ` outside the closed ball with every `|λ_i| < 1`.
pub fn left_membership(lambda: &[Complex64], k_max: usize, assumed_norm: f64) -> Result<SpectrumReport> {
    check_lambda(lambda)?;
    let mut report = SpectrumReport {
        lambda: lambda.to_vec(),
        mode: SpectrumMode::LeftGrowth,
        verdict: SpectrumVerdict::Unknown,
        defects: BTreeMap::new(),
        witness: Witness::None,
        note: None,
    };
    let all_small = lambda.iter().all(|z| z.norm() < 1.0 - BOUNDARY_TOL);
    if lambda.len() == 2 && all_small && lambda_norm(lambda) > 1.0 {
        report.note = Some("every |λ_i| < 1 < ‖λ‖: no growth certificate is known".into());
        return Ok(report);
    }
    let table = left_growth_certificate(lambda, k_max, assumed_norm)?;
    let monotone = table.rows.windows(2).all(|w| w[1].bound >= w[0].bound);
    report.verdict = if monotone {
        SpectrumVerdict::InSpectrum
    } else {
        SpectrumVerdict::Inconclusive
    };
    report.witness = Witness::Growth(table);
    Ok(report)
}

fn to_dense(op: &GradedOperator) -> Result<DMatrix<Complex64>> {
    op.to_dense()
}

/// Checks the rank-one left inverses `A_i = L_i^* + η_i ξ_e^*` of `(L_1, L_2)`
/// and that least-squares solutions of `X L_j = δ_ij I` all have this form.
pub fn zero_left_inverses(
    eta1: &BTreeMap<Word, Complex64>,
    eta2: &BTreeMap<Word, Complex64>,
    depth: usize,
) -> Result<ZeroLeftReport> {
    let space = space_for(2, depth, MAX_LSQ_DIM)?;
    let dim = space.dimension();
    let vec_of = |eta: &BTreeMap<Word, Complex64>| -> Result<Vec<Complex64>> {
        let mut v = vec![zero(); dim];
        for (w, c) in eta {
            let idx = space
                .index_of(w)
                .ok_or_else(|| Error::domain(format!("η is supported on {} beyond depth {depth}", w.format(2))))?;
            v[idx] = *c;
        }
        Ok(v)
    };
    let etas = [vec_of(eta1)?, vec_of(eta2)?];
    let l = left_shifts(&space)?;
    let vacuum = space.basis_vector(&Word::empty())?;
    let low = depth - 1;

    let mut identity_defect = 0.0f64;
    for (i, eta) in etas.iter().enumerate() {
        let a = l[i].adjoint().add(&GradedOperator::outer(&space, eta, &vacuum))?;
        for (j, lj) in l.iter().enumerate() {
            let mut d = a.mul(lj)?;
            if i == j {
                d = d.sub(&GradedOperator::identity(&space))?;
            }
            identity_defect = identity_defect.max(d.restrict_columns(low).frobenius_norm());
        }
    }

    // X [L_1 L_2] = [δ_1j I, δ_2j I] on the columns where the truncation is faithful
    let cols = space.basis().levels_up_to(low).len();
    let dense: Vec<DMatrix<Complex64>> = l.iter().map(to_dense).collect::<Result<_>>()?;
    let mut lmat = DMatrix::<Complex64>::zeros(dim, 2 * cols);
    for (j, lj) in dense.iter().enumerate() {
        lmat.view_mut((0, j * cols), (dim, cols)).copy_from(&lj.columns(0, cols));
    }
    let pinv = lmat
        .clone()
        .pseudo_inverse(1e-12)
        .map_err(|e| Error::domain(format!("pseudo-inverse failed: {e}")))?;
    let complement = DMatrix::<Complex64>::identity(dim, dim) - &lmat * &pinv;
    // a fixed dense perturbation, so the solution is not the minimum-norm one
    let z = DMatrix::from_fn(dim, dim, |r, c| {
        Complex64::new(((r * 7 + c * 13) % 17) as f64 / 17.0 - 0.5, ((r * 5 + c * 3) % 11) as f64 / 11.0 - 0.5)
    });
    let mut solve_residual = 0.0f64;
    let mut reconstruction_residual = 0.0f64;
    let mut recovered = Vec::with_capacity(2);
    for i in 0..2 {
        let mut y = DMatrix::<Complex64>::zeros(dim, 2 * cols);
        for c in 0..cols {
            y[(c, i * cols + c)] = one();
        }
        let x = &y * &pinv + &z * &complement;
        solve_residual = solve_residual.max((&x * &lmat - &y).norm());
        let x_e = x.column(0).clone_owned();
        let mut form = dense[i].adjoint();
        for r in 0..dim {
            form[(r, 0)] += x_e[r];
        }
        let diff = (&x - &form).norm();
        reconstruction_residual = reconstruction_residual.max(diff);
        recovered.push(
            (0..dim)
                .filter(|&r| x_e[r].norm() > 0.0)
                .map(|r| (space.basis().word_at(r), x_e[r]))
                .collect(),
        );
    }
    Ok(ZeroLeftReport {
        identity_defect,
        solve_residual,
        reconstruction_residual,
        recovered,
    })
}
