//! Joint eigenvectors of the adjoint shifts and the series deciding which
//! `λ ∈ ℂ^n` carry one.
//!
//! For `λ ∈ ℂ^n` the candidate `ν_λ = Σ_w conj(w(λ)) W(e,w)^{-1} ξ_w`
//! satisfies `T_i^* ν_λ = conj(λ_i) ν_λ`; it lies in the Fock space exactly
//! when `Σ_w |w(λ)|² W(e,w)^{-2}` converges. That series depends only on the
//! moduli `r_i = |λ_i|` and is summed here level by level.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{build_shift, ShiftKind, TruncatedFock};
use crate::linalg::nullity;
use crate::weights::WeightSystem;
use crate::words::{truncated_dimension, Word};

/// Largest truncated dimension the exact level computations accept.
pub const MAX_EIGEN_DIM: usize = 1 << 21;
/// Default verdict margin.
pub const DEFAULT_EPS: f64 = 0.02;
/// Partial sums beyond `2^OVERFLOW_EXP2` count as divergence.
const OVERFLOW_EXP2: i64 = 1000;

fn check_size(n: usize, depth: usize) -> Result<()> {
    match truncated_dimension(n, depth) {
        Some(d) if d <= MAX_EIGEN_DIM => Ok(()),
        _ => Err(Error::Size(format!(
            "n = {n}, depth {depth} exceeds {MAX_EIGEN_DIM} words; lower the depth"
        ))),
    }
}

fn check_lambda_len(ws: &WeightSystem, len: usize) -> Result<()> {
    if len != ws.n() {
        return Err(Error::domain(format!("expected {} components, got {len}", ws.n())));
    }
    Ok(())
}

/// `2^e` for `|e| <= 1022`, exactly.
fn pow2(e: i64) -> f64 {
    debug_assert!(e.abs() <= 1022);
    f64::from_bits(((e + 1023) as u64) << 52)
}

/// `m · 2^e` without intermediate overflow.
fn ldexp(m: f64, e: i64) -> f64 {
    let mut m = m;
    let mut e = e;
    while e > 1000 {
        m *= pow2(1000);
        e -= 1000;
    }
    while e < -1000 {
        m *= pow2(-1000);
        e += 1000;
    }
    m * pow2(e)
}

/// Truncated joint eigenvector candidate, normalized so that `⟨ν, ξ_e⟩ = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenCandidate {
    pub lambda: Vec<Complex64>,
    pub space: TruncatedFock,
    /// Coordinates in the graded basis.
    pub coeffs: Vec<Complex64>,
}

impl EigenCandidate {
    pub fn depth(&self) -> usize {
        self.space.depth()
    }

    pub fn coeff(&self, w: &Word) -> Option<Complex64> {
        self.space.index_of(w).map(|i| self.coeffs[i])
    }
}

/// `ν_λ` on words of length `<= depth`: coefficient `conj(w(λ)) / W(e,w)`.
pub fn eigenvector_coeffs(ws: &WeightSystem, lambda: &[Complex64], depth: usize) -> Result<EigenCandidate> {
    check_lambda_len(ws, lambda.len())?;
    check_size(ws.n(), depth)?;
    ws.ensure_defined_up_to(depth.saturating_sub(1))?;
    let space = TruncatedFock::new(ws.n(), depth)?;
    let basis = space.basis();
    let mut coeffs = vec![Complex64::default(); space.dimension()];
    coeffs[0] = Complex64::new(1.0, 0.0);
    for idx in basis.levels_up_to(depth.saturating_sub(1)) {
        let w = basis.letters_at(idx);
        for i in 1..=ws.n() as u8 {
            let target = basis.prepend_index(i, idx).expect("below depth");
            coeffs[target] = lambda[i as usize - 1].conj() * coeffs[idx] / ws.weight(i, &w);
        }
    }
    Ok(EigenCandidate {
        lambda: lambda.to_vec(),
        space,
        coeffs,
    })
}

/// `max_i ‖(T_i^* − conj(λ_i)) ν‖` on levels `<= depth − 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct ResidualReport {
    pub max_residual: f64,
    pub per_letter: Vec<f64>,
    /// `(i, w)` with the largest single-coordinate residual.
    pub witness: Option<(u8, Word)>,
}

/// Residual of an arbitrary candidate vector.
pub fn candidate_residual(ws: &WeightSystem, cand: &EigenCandidate) -> Result<ResidualReport> {
    check_lambda_len(ws, cand.lambda.len())?;
    let space = &cand.space;
    let top = space.depth().saturating_sub(1);
    let mut report = ResidualReport {
        max_residual: 0.0,
        per_letter: Vec::with_capacity(ws.n()),
        witness: None,
    };
    let mut worst = 0.0f64;
    for i in 1..=ws.n() as u8 {
        let ta = build_shift(space, ShiftKind::Left(ws), i)?.adjoint();
        let mut y = ta.apply(&cand.coeffs);
        let li = cand.lambda[i as usize - 1].conj();
        let mut sq = 0.0;
        for (r, yr) in y.iter_mut().enumerate() {
            if space.level_of(r) > top {
                break;
            }
            *yr -= li * cand.coeffs[r];
            sq += yr.norm_sqr();
            if yr.norm() > worst {
                worst = yr.norm();
                report.witness = Some((i, space.basis().word_at(r)));
            }
        }
        report.per_letter.push(sq.sqrt());
    }
    report.max_residual = report.per_letter.iter().copied().fold(0.0, f64::max);
    Ok(report)
}

pub fn eigen_residual(ws: &WeightSystem, lambda: &[Complex64], depth: usize) -> Result<ResidualReport> {
    candidate_residual(ws, &eigenvector_coeffs(ws, lambda, depth)?)
}

/// Numerical dimension of the joint solution space of
/// `(T_i^* − conj(λ_i)) ν = 0` on levels `<= depth − 1`.
pub fn eigenspace_dimension(ws: &WeightSystem, lambda: &[Complex64], depth: usize) -> Result<usize> {
    check_lambda_len(ws, lambda.len())?;
    if depth == 0 {
        return Err(Error::domain("depth must be at least 1"));
    }
    let space = TruncatedFock::new(ws.n(), depth)?;
    let dim = space.dimension();
    if dim > crate::fock::MAX_DENSE_DIM {
        return Err(Error::Size(format!("dense eigenspace solve of dimension {dim} is too large")));
    }
    let rows_per = space.basis().levels_up_to(depth - 1).len();
    let n = ws.n();
    let mut m = nalgebra::DMatrix::<Complex64>::zeros(n * rows_per, dim);
    for i in 1..=n as u8 {
        let ta = build_shift(&space, ShiftKind::Left(ws), i)?.adjoint();
        let off = (i as usize - 1) * rows_per;
        for c in 0..dim {
            for &(r, v) in ta.column(c) {
                if r < rows_per {
                    m[(off + r, c)] += v;
                }
            }
        }
        for r in 0..rows_per {
            m[(off + r, r)] -= lambda[i as usize - 1].conj();
        }
    }
    Ok(nullity(m, 1e-10).0)
}

/// `σ_k = Σ_{|w|=k} r(w)² W(e,w)^{-2}` stored as `mantissa[k] · 2^{exp2[k]}`.
#[derive(Clone, Debug, PartialEq)]
pub struct LevelSums {
    pub mantissa: Vec<f64>,
    pub exp2: Vec<i64>,
}

impl LevelSums {
    pub fn levels(&self) -> usize {
        self.mantissa.len()
    }

    /// `σ_k` as a float (may be infinite).
    pub fn sigma(&self, k: usize) -> f64 {
        ldexp(self.mantissa[k], self.exp2[k])
    }

    pub fn sigmas(&self) -> Vec<f64> {
        (0..self.levels()).map(|k| self.sigma(k)).collect()
    }

    pub fn partial_sum(&self) -> f64 {
        self.sigmas().iter().sum()
    }

    /// `log2 σ_k`, or `-inf` for a zero level.
    pub fn log2_sigma(&self, k: usize) -> f64 {
        if self.mantissa[k] == 0.0 {
            f64::NEG_INFINITY
        } else {
            self.mantissa[k].log2() + self.exp2[k] as f64
        }
    }

    /// `σ_{k+1} / σ_k`, with `0` for a vanishing level.
    pub fn ratio(&self, k: usize) -> f64 {
        if self.mantissa[k] == 0.0 {
            return 0.0;
        }
        ldexp(self.mantissa[k + 1] / self.mantissa[k], self.exp2[k + 1] - self.exp2[k])
    }

    /// True when `σ_k(self) <= σ_k(other)` for the given level, compared
    /// without rounding the exponents away.
    pub fn dominated_at(&self, other: &LevelSums, k: usize) -> bool {
        let (a, b) = (self.mantissa[k], other.mantissa[k]);
        if a == 0.0 {
            return true;
        }
        if b == 0.0 {
            return false;
        }
        let shift = self.exp2[k] - other.exp2[k];
        ldexp(a, shift) <= b
    }

    fn overflowed(&self) -> bool {
        (0..self.levels()).any(|k| self.mantissa[k] > 0.0 && self.log2_sigma(k) > OVERFLOW_EXP2 as f64)
            || !self.partial_sum().is_finite()
    }
}

/// Level sums `σ_0, …, σ_depth` for the moduli `r`.
pub fn level_sums(ws: &WeightSystem, r: &[f64], depth: usize) -> Result<LevelSums> {
    check_lambda_len(ws, r.len())?;
    if r.iter().any(|&x| !(x >= 0.0 && x.is_finite())) {
        return Err(Error::domain("moduli must be finite and nonnegative"));
    }
    check_size(ws.n(), depth)?;
    ws.ensure_defined_up_to(depth.saturating_sub(1))?;
    let n = ws.n();
    let r2: Vec<f64> = r.iter().map(|x| x * x).collect();
    let mut mantissa = vec![1.0];
    let mut exp2 = vec![0i64];
    // terms of the current level, in lexicographic order, scaled by 2^-e
    let mut level = vec![1.0f64];
    let mut e = 0i64;
    let mut words: Vec<Vec<u8>> = vec![Vec::new()];
    for _k in 1..=depth {
        let mut next = Vec::with_capacity(level.len() * n);
        let mut next_words = Vec::with_capacity(level.len() * n);
        for i in 1..=n as u8 {
            let factor = r2[i as usize - 1];
            for (w, &t) in words.iter().zip(&level) {
                let lam = ws.weight(i, w);
                next.push(t * factor / (lam * lam));
                let mut iw = Vec::with_capacity(w.len() + 1);
                iw.push(i);
                iw.extend_from_slice(w);
                next_words.push(iw);
            }
        }
        let top = next.iter().copied().fold(0.0f64, f64::max);
        if top > 0.0 && top.is_finite() {
            let shift = top.log2().floor() as i64;
            if shift != 0 {
                let s = pow2(-shift.clamp(-1022, 1022));
                next.iter_mut().for_each(|t| *t *= s);
                e += shift.clamp(-1022, 1022);
            }
        }
        mantissa.push(next.iter().sum());
        exp2.push(e);
        level = next;
        words = next_words;
    }
    Ok(LevelSums { mantissa, exp2 })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Membership {
    Inside,
    Outside,
    Inconclusive,
}

impl Membership {
    pub fn as_str(self) -> &'static str {
        match self {
            Membership::Inside => "inside",
            Membership::Outside => "outside",
            Membership::Inconclusive => "inconclusive",
        }
    }
}

/// Tail-ratio test on the last quartile of `σ_{k+1}/σ_k`. Returns the
/// verdict and the last ratio.
pub fn membership_verdict(sums: &LevelSums, eps: f64) -> Result<(Membership, f64)> {
    let levels = sums.levels();
    if levels < 4 {
        return Err(Error::domain("at least 4 levels are needed for a verdict"));
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::domain("eps must lie in (0, 1)"));
    }
    let ratios = levels - 1;
    let window = (ratios / 4).max(1);
    let tail: Vec<f64> = (ratios - window..ratios).map(|k| sums.ratio(k)).collect();
    let last = *tail.last().expect("window is nonempty");
    let verdict = if sums.overflowed() || tail.iter().all(|&q| q >= 1.0 + eps) {
        Membership::Outside
    } else if tail.iter().all(|&q| q <= 1.0 - eps) {
        Membership::Inside
    } else {
        Membership::Inconclusive
    };
    Ok((verdict, last))
}

/// `Σ r_i² / c_i² < 1` with `c_i = inf_w λ_{i,w}`.
#[derive(Clone, Debug, PartialEq)]
pub struct Ellipse {
    pub inside: bool,
    pub value: f64,
    pub c: Vec<f64>,
    /// False when `c` was only minimized over `|w| <= depth_for_inf`.
    pub exact: bool,
}

pub fn ellipse_predicate(ws: &WeightSystem, r: &[f64], depth_for_inf: usize) -> Result<Ellipse> {
    check_lambda_len(ws, r.len())?;
    let (c, exact) = ws.letter_infima(depth_for_inf);
    if let Some(k) = c.iter().position(|&ci| ci <= 1e-12) {
        return Err(Error::precondition(format!(
            "weights for letter {} are not bounded away from zero (inf = {})",
            k + 1,
            c[k]
        )));
    }
    let value: f64 = r.iter().zip(&c).map(|(ri, ci)| (ri / ci).powi(2)).sum();
    Ok(Ellipse {
        inside: value < 1.0,
        value,
        c,
        exact,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct HereditaryReport {
    pub holds: bool,
    /// First level with `σ_k(r′) > σ_k(r)`.
    pub first_violation: Option<usize>,
}

/// Checks `σ_k(r′) <= σ_k(r)` level by level for `r′ <= r`.
pub fn hereditary_check(ws: &WeightSystem, r: &[f64], r_small: &[f64], depth: usize) -> Result<HereditaryReport> {
    check_lambda_len(ws, r.len())?;
    check_lambda_len(ws, r_small.len())?;
    if r_small.iter().zip(r).any(|(a, b)| a > b) {
        return Err(Error::domain("r′ must be dominated by r componentwise"));
    }
    let big = level_sums(ws, r, depth)?;
    let small = level_sums(ws, r_small, depth)?;
    let first_violation = (0..big.levels()).find(|&k| !small.dominated_at(&big, k));
    Ok(HereditaryReport {
        holds: first_violation.is_none(),
        first_violation,
    })
}

/// Grid `lo, lo + step, …, <= hi` applied to every modulus.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec {
    pub lo: f64,
    pub hi: f64,
    pub step: f64,
}

impl GridSpec {
    pub fn new(lo: f64, hi: f64, step: f64) -> Result<Self> {
        if !(lo >= 0.0 && hi >= lo && lo.is_finite() && hi.is_finite()) {
            return Err(Error::domain("grid bounds must satisfy 0 <= lo <= hi"));
        }
        if !(step > 0.0 && step.is_finite()) && hi > lo {
            return Err(Error::domain("grid step must be positive"));
        }
        Ok(GridSpec { lo, hi, step })
    }

    /// Parses `lo:hi:step`.
    pub fn parse(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(Error::domain(format!("grid {s:?} is not lo:hi:step")));
        }
        let num = |p: &str| {
            p.trim()
                .parse::<f64>()
                .map_err(|_| Error::domain(format!("grid {s:?}: {p:?} is not a number")))
        };
        Self::new(num(parts[0])?, num(parts[1])?, num(parts[2])?)
    }

    pub fn points(&self) -> Vec<f64> {
        if self.hi == self.lo {
            return vec![self.lo];
        }
        let count = ((self.hi - self.lo) / self.step + 1e-9).floor() as usize + 1;
        (0..count).map(|k| self.lo + k as f64 * self.step).collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RegionSample {
    pub moduli: Vec<f64>,
    pub sums: LevelSums,
    pub partial_sum: f64,
    pub tail_ratio: f64,
    pub verdict: Membership,
}

pub fn sample_point(ws: &WeightSystem, r: &[f64], depth: usize, eps: f64) -> Result<RegionSample> {
    let sums = level_sums(ws, r, depth)?;
    let (verdict, tail_ratio) = membership_verdict(&sums, eps)?;
    Ok(RegionSample {
        moduli: r.to_vec(),
        partial_sum: sums.partial_sum(),
        sums,
        tail_ratio,
        verdict,
    })
}

/// One sample per grid point, rows in lexicographic order of the moduli.
pub fn region_sample(ws: &WeightSystem, grid: &GridSpec, depth: usize, eps: f64) -> Result<Vec<RegionSample>> {
    let axis = grid.points();
    let n = ws.n();
    let total = axis
        .len()
        .checked_pow(n as u32)
        .filter(|&t| t <= 1 << 22)
        .ok_or_else(|| Error::Size("grid has too many points".into()))?;
    let point = |mut k: usize| {
        let mut r = vec![0.0; n];
        for slot in r.iter_mut().rev() {
            *slot = axis[k % axis.len()];
            k /= axis.len();
        }
        r
    };
    #[cfg(feature = "parallel")]
    let rows: Vec<Result<RegionSample>> = {
        use rayon::prelude::*;
        (0..total)
            .into_par_iter()
            .map(|k| sample_point(ws, &point(k), depth, eps))
            .collect()
    };
    #[cfg(not(feature = "parallel"))]
    let rows: Vec<Result<RegionSample>> = (0..total).map(|k| sample_point(ws, &point(k), depth, eps)).collect();
    rows.into_iter().collect()
}

/// `%.17g`-style formatting.
pub fn format_g17(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.16e}", x);
    let (mant, exp) = sci.split_once('e').expect("scientific form");
    let exp: i32 = exp.parse().expect("exponent");
    let negative = mant.starts_with('-');
    let digits: String = mant.chars().filter(char::is_ascii_digit).collect();
    let sign = if negative { "-" } else { "" };
    if (-5..17).contains(&exp) {
        let s = if exp >= 0 {
            let split = exp as usize + 1;
            format!("{}.{}", &digits[..split], &digits[split..])
        } else {
            format!("0.{}{}", "0".repeat((-exp - 1) as usize), digits)
        };
        let s = s.trim_end_matches('0').trim_end_matches('.');
        format!("{sign}{s}")
    } else {
        let frac = digits[1..].trim_end_matches('0');
        let m = if frac.is_empty() {
            digits[..1].to_string()
        } else {
            format!("{}.{}", &digits[..1], frac)
        };
        let esign = if exp < 0 { '-' } else { '+' };
        format!("{sign}{m}e{esign}{:02}", exp.abs())
    }
}

/// CSV with header `r1,…,rn,levels,partial_sum,tail_ratio,verdict`.
pub fn region_csv(rows: &[RegionSample], n: usize) -> String {
    let mut out = String::new();
    for i in 1..=n {
        out.push_str(&format!("r{i},"));
    }
    out.push_str("levels,partial_sum,tail_ratio,verdict\n");
    for row in rows {
        for r in &row.moduli {
            out.push_str(&format_g17(*r));
            out.push(',');
        }
        out.push_str(&format!(
            "{},{},{},{}\n",
            row.sums.levels(),
            format_g17(row.partial_sum),
            format_g17(row.tail_ratio),
            row.verdict.as_str()
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn eigenvector_examples() {
        let unw = WeightSystem::unweighted(2).unwrap();
        let cand = eigenvector_coeffs(&unw, &[c(0.0), c(0.0)], 4).unwrap();
        assert_eq!(cand.coeffs.iter().filter(|z| z.norm() > 0.0).count(), 1);
        let z = Complex64::new(0.3, 0.4);
        let cand = eigenvector_coeffs(&unw, &[z, c(0.0)], 5).unwrap();
        for k in 0..=5 {
            let w = Word::repeat_letter(1, k);
            assert!((cand.coeff(&w).unwrap() - z.conj().powu(k as u32)).norm() < 1e-15);
        }
        assert_eq!(cand.coeff(&Word::parse("12", 2).unwrap()).unwrap(), c(0.0));
        let p = WeightSystem::periodic2(1.0, 1.0, 2.0, 2.0, 2.0, 2.0).unwrap();
        let cand = eigenvector_coeffs(&p, &[c(0.5), c(0.5)], 3).unwrap();
        assert!((cand.coeff(&Word::parse("21", 2).unwrap()).unwrap() - c(0.125)).norm() < 1e-15);
    }

    #[test]
    fn residual_vanishes_below_top_level() {
        let p = WeightSystem::periodic2(1.0, 1.0, 2.0, 2.0, 2.0, 2.0).unwrap();
        let lam = [Complex64::new(0.3, -0.2), Complex64::new(0.1, 0.5)];
        let r = eigen_residual(&p, &lam, 7).unwrap();
        assert!(r.max_residual <= 1e-12);
        let mut cand = eigenvector_coeffs(&p, &lam, 7).unwrap();
        let idx = cand.space.index_of(&Word::parse("12", 2).unwrap()).unwrap();
        cand.coeffs[idx] *= 1.01;
        let r = candidate_residual(&p, &cand).unwrap();
        assert!(r.max_residual > 1e-6);
        assert!(r.witness.is_some());
    }

    #[test]
    fn geometric_level_sums() {
        let unw = WeightSystem::unweighted(2).unwrap();
        let s = level_sums(&unw, &[0.5, 0.5], 10).unwrap();
        for k in 0..=10 {
            assert!((s.sigma(k) - 0.5f64.powi(k as i32)).abs() <= 1e-13);
        }
        assert!((s.partial_sum() - 1.9990234375).abs() <= 1e-12);
        let z = level_sums(&unw, &[0.0, 0.0], 5).unwrap();
        assert_eq!(z.sigmas(), vec![1.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn verdicts() {
        let unw = WeightSystem::unweighted(2).unwrap();
        let h = 0.5f64.sqrt();
        let v = |r: f64| membership_verdict(&level_sums(&unw, &[r * h, r * h], 12).unwrap(), 0.05).unwrap().0;
        assert_eq!(v(0.5f64.sqrt()), Membership::Inside);
        assert_eq!(v(2f64.sqrt()), Membership::Outside);
        assert_eq!(v(1.0), Membership::Inconclusive);
        let zero = level_sums(&unw, &[0.0, 0.0], 8).unwrap();
        assert_eq!(membership_verdict(&zero, 0.02).unwrap().0, Membership::Inside);
        assert!(membership_verdict(&level_sums(&unw, &[0.1, 0.1], 2).unwrap(), 0.02).is_err());
    }

    #[test]
    fn huge_moduli_overflow_to_outside() {
        let unw = WeightSystem::unweighted(2).unwrap();
        let s = level_sums(&unw, &[1e100, 1e100], 10).unwrap();
        assert_eq!(membership_verdict(&s, 0.02).unwrap().0, Membership::Outside);
    }

    #[test]
    fn ellipse_examples() {
        let ws = WeightSystem::scaled(vec![2.0, 3.0]).unwrap();
        let e = ellipse_predicate(&ws, &[1.0, 1.0], 4).unwrap();
        assert!(e.inside && e.exact);
        assert!((e.value - (0.25 + 1.0 / 9.0)).abs() < 1e-15);
        let p = WeightSystem::periodic2(1.0, 1.0, 2.0, 2.0, 2.0, 2.0).unwrap();
        assert_eq!(ellipse_predicate(&p, &[0.1, 0.1], 4).unwrap().c, vec![1.0, 1.0]);
    }

    #[test]
    fn hereditary_examples() {
        let p = WeightSystem::periodic2(1.0, 1.0, 2.0, 2.0, 2.0, 2.0).unwrap();
        assert!(hereditary_check(&p, &[0.9, 0.4], &[0.0, 0.0], 8).unwrap().holds);
        assert!(hereditary_check(&p, &[0.9, 0.4], &[0.45, 0.2], 8).unwrap().holds);
        assert!(hereditary_check(&p, &[0.9, 0.4], &[0.9, 0.4], 8).unwrap().holds);
        assert!(hereditary_check(&p, &[0.9, 0.4], &[1.0, 0.2], 8).is_err());
    }

    #[test]
    fn grid_and_csv() {
        let g = GridSpec::parse("0:1.2:0.1").unwrap();
        assert_eq!(g.points().len(), 13);
        let unw = WeightSystem::unweighted(2).unwrap();
        let origin = region_sample(&unw, &GridSpec::new(0.0, 0.0, 0.1).unwrap(), 8, 0.02).unwrap();
        assert_eq!(origin.len(), 1);
        assert_eq!(origin[0].verdict, Membership::Inside);
        let csv = region_csv(&origin, 2);
        assert_eq!(csv, "r1,r2,levels,partial_sum,tail_ratio,verdict\n0,0,9,1,0,inside\n");
    }

    #[test]
    fn g17() {
        assert_eq!(format_g17(0.1), "0.10000000000000001");
        assert_eq!(format_g17(1.9990234375), "1.9990234375");
        assert_eq!(format_g17(-2.5e-7), "-2.4999999999999999e-07");
        assert_eq!(format_g17(1e20), "1e+20");
        assert_eq!(format_g17(123.0), "123");
        for x in [0.3, 1.0 / 3.0, 6.02e23, 5e-324] {
            assert_eq!(format_g17(x).parse::<f64>().unwrap(), x);
        }
    }
}
