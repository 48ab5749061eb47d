//! Elements of the algebra generated by a weighted shift, written through
//! their Fourier coefficients `a_w = ⟨A ξ_e, ξ_w⟩`.
//!
//! An element acts by
//! `A ξ_v = W_μ(e,v)^{-1} Σ_w a_w W_μ(w,v) ξ_{wv}`,
//! equivalently `A = Σ_w a_w W(e,w)^{-1} T_w`.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::fock::{build_shift, GradedOperator, ShiftKind, TruncatedFock};
use crate::weights::schema::{as_f64, field, object, reject_unknown};
use crate::weights::{MuSystem, WeightSystem};
use crate::words::Word;

/// Tolerance of the commutation pre-check in [`commutant_extract`].
pub const COMMUTATION_TOL: f64 = 1e-9;

pub type Coefficients = BTreeMap<Word, Complex64>;

/// A finitely supported Fourier series `Σ_w a_w ξ_w` standing for the
/// element `A` with `A ξ_e = Σ_w a_w ξ_w`.
#[derive(Clone, Debug, PartialEq)]
pub struct FourierElement {
    n: usize,
    coeffs: Coefficients,
}

impl FourierElement {
    /// Zero coefficients are dropped.
    pub fn new(n: usize, coeffs: impl IntoIterator<Item = (Word, Complex64)>) -> Result<Self> {
        crate::words::check_alphabet(n)?;
        let mut map = Coefficients::new();
        for (w, a) in coeffs {
            if w.max_letter() as usize > n {
                return Err(Error::domain(format!("word {w} has a letter outside 1..={n}")));
            }
            if !(a.re.is_finite() && a.im.is_finite()) {
                return Err(Error::domain(format!("coefficient of {w} is not finite")));
            }
            if a != Complex64::default() {
                *map.entry(w).or_default() += a;
            }
        }
        Ok(FourierElement { n, coeffs: map })
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::new(n, [(Word::empty(), Complex64::new(1.0, 0.0))])
    }

    /// `T_u` itself: `a_u = W(e,u)`.
    pub fn shift_word(ws: &WeightSystem, u: &Word) -> Result<Self> {
        Self::new(ws.n(), [(u.clone(), Complex64::new(ws.left_weight(&Word::empty(), u), 0.0))])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coeffs(&self) -> &Coefficients {
        &self.coeffs
    }

    pub fn coeff(&self, w: &Word) -> Complex64 {
        self.coeffs.get(w).copied().unwrap_or_default()
    }

    /// Longest support word length (0 for the zero element).
    pub fn support_len(&self) -> usize {
        self.coeffs.keys().map(Word::len).max().unwrap_or(0)
    }

    /// The first support word of minimal length in graded order.
    pub fn min_support_word(&self) -> Option<&Word> {
        self.coeffs.keys().next()
    }

    /// Parses `{"coeffs": {"w": [re, im], ...}}`.
    pub fn from_json(v: &Value, n: usize, path: &str) -> Result<Self> {
        let obj = object(v, path)?;
        reject_unknown(obj, &["coeffs"], path)?;
        let coeffs = object(field(obj, "coeffs", path)?, &format!("{path}.coeffs"))?;
        let mut out = Vec::with_capacity(coeffs.len());
        for (key, val) in coeffs {
            let p = format!("{path}.coeffs.{key}");
            let w = Word::parse(key, n).map_err(|e| Error::config(&p, e.to_string()))?;
            let pair = val
                .as_array()
                .filter(|a| a.len() == 2)
                .ok_or_else(|| Error::config(&p, "expected [re, im]"))?;
            let z = Complex64::new(as_f64(&pair[0], &format!("{p}[0]"))?, as_f64(&pair[1], &format!("{p}[1]"))?);
            out.push((w, z));
        }
        Self::new(n, out).map_err(|e| Error::config(format!("{path}.coeffs"), e.to_string()))
    }

    pub fn to_json(&self) -> Value {
        let coeffs: Map<String, Value> = self
            .coeffs
            .iter()
            .map(|(w, a)| (w.format(self.n), Value::from(vec![a.re, a.im])))
            .collect();
        let mut out = Map::new();
        out.insert("coeffs".into(), Value::Object(coeffs));
        Value::Object(out)
    }
}

fn check_alphabets(a: &FourierElement, mu: &MuSystem) -> Result<()> {
    if a.n != mu.n() {
        return Err(Error::domain("element and weights use different alphabets"));
    }
    Ok(())
}

/// `A ξ_v` truncated to `depth`. Errors unless `|v| + support_len <= depth`.
pub fn apply_fourier(a: &FourierElement, mu: &MuSystem, v: &Word, depth: usize) -> Result<Coefficients> {
    check_alphabets(a, mu)?;
    if v.max_letter() as usize > a.n {
        return Err(Error::domain(format!("word {v} has a letter outside 1..={}", a.n)));
    }
    if v.len() + a.support_len() > depth {
        return Err(Error::domain(format!(
            "|v| + support length = {} exceeds depth {depth}",
            v.len() + a.support_len()
        )));
    }
    crate::fock::refuse_diverging(mu)?;
    mu.ensure_defined_up_to(depth)?;
    Ok(apply_unchecked(a, mu, &[(v.clone(), Complex64::new(1.0, 0.0))], depth))
}

/// `A x` for `x = Σ x_u ξ_u`, dropping words longer than `depth`.
fn apply_unchecked(a: &FourierElement, mu: &MuSystem, x: &[(Word, Complex64)], depth: usize) -> Coefficients {
    let mut out = Coefficients::new();
    for (u, xu) in x {
        let scale = *xu / mu.right_weight_letters(&[], u.letters());
        for (w, aw) in &a.coeffs {
            if w.len() + u.len() > depth {
                continue;
            }
            let value = aw * scale * mu.right_weight_letters(w.letters(), u.letters());
            *out.entry(w.concat(u)).or_default() += value;
        }
    }
    out
}

/// `A = Σ_w a_w W(e,w)^{-1} T_w` compressed to the space.
pub fn to_operator(a: &FourierElement, ws: &WeightSystem, space: &TruncatedFock) -> Result<GradedOperator> {
    weighted_polynomial(a, ws, space, |_| 1.0)
}

/// `p_k(A) = Σ_{|w|<k} (1 − |w|/k) a_w W(e,w)^{-1} T_w`.
pub fn pk_polynomial(a: &FourierElement, ws: &WeightSystem, k: usize, space: &TruncatedFock) -> Result<GradedOperator> {
    if k == 0 {
        return Err(Error::domain("summation order must be at least 1"));
    }
    weighted_polynomial(a, ws, space, |len| {
        if len < k {
            1.0 - len as f64 / k as f64
        } else {
            0.0
        }
    })
}

fn weighted_polynomial(
    a: &FourierElement,
    ws: &WeightSystem,
    space: &TruncatedFock,
    fejer: impl Fn(usize) -> f64 + Sync + Send,
) -> Result<GradedOperator> {
    if a.n != ws.n() || space.n() != ws.n() {
        return Err(Error::domain("element, weights and space use different alphabets"));
    }
    ws.ensure_defined_up_to(space.depth())?;
    let depth = space.depth();
    let basis = space.basis();
    let terms: Vec<(Vec<u8>, Complex64)> = a
        .coeffs
        .iter()
        .filter(|(w, _)| w.len() <= depth && fejer(w.len()) != 0.0)
        .map(|(w, aw)| {
            let c = aw * fejer(w.len()) / ws.left_weight_letters(&[], w.letters());
            (w.letters().to_vec(), c)
        })
        .collect();
    GradedOperator::from_columns(space, |col| {
        let v = basis.letters_at(col);
        terms
            .iter()
            .filter(|(w, _)| w.len() + v.len() <= depth)
            .map(|(w, c)| {
                let mut wv = w.clone();
                wv.extend_from_slice(&v);
                let row = basis.index_of_letters(&wv).expect("within depth");
                (row, c * ws.left_weight_letters(&v, w))
            })
            .collect()
    })
}

/// `Φ_j(X) = Σ_k Q_k X Q_{k+j}`: the entries with `level(col) − level(row) = j`.
pub fn phi_band(x: &GradedOperator, j: i64) -> Result<GradedOperator> {
    let levels = x.space().depth() as i64 + 1;
    if j.abs() >= levels {
        return Err(Error::domain(format!("band {j} outside ±{}", levels - 1)));
    }
    let sp = x.space();
    Ok(x.filter(|r, c| sp.level_of(c) as i64 - sp.level_of(r) as i64 == j))
}

/// `Σ_k(X) = Σ_{|j|<k} (1 − |j|/k) Φ_j(X)`.
pub fn cesaro_sum(x: &GradedOperator, k: usize) -> Result<GradedOperator> {
    if k == 0 {
        return Err(Error::domain("summation order must be at least 1"));
    }
    let sp = x.space();
    let mut out = GradedOperator::zeros(sp);
    for j in x.bands() {
        if j.unsigned_abs() as usize >= k {
            continue;
        }
        let weight = 1.0 - j.unsigned_abs() as f64 / k as f64;
        out = out.add(&phi_band(x, j)?.scale(Complex64::new(weight, 0.0)))?;
    }
    Ok(out)
}

/// Result of reading an operator back as a Fourier series.
#[derive(Clone, Debug, PartialEq)]
pub struct Extraction {
    pub element: FourierElement,
    /// `max_v ‖X ξ_v − A ξ_v‖` over `|v| <= depth − support_len`.
    pub residual: f64,
    /// Word attaining the residual.
    pub residual_witness: Word,
    /// Largest entry of `X S_j − S_j X` on columns at levels `<= depth − 2`.
    pub commutation_defect: f64,
}

/// Reads `a_w = ⟨X ξ_e, ξ_w⟩` from an operator commuting with the right
/// shifts and measures how well the series reproduces `X`.
pub fn commutant_extract(x: &GradedOperator, mu: &MuSystem) -> Result<Extraction> {
    let space = x.space();
    let n = space.n();
    let depth = space.depth();
    if mu.n() != n {
        return Err(Error::domain("operator and weights use different alphabets"));
    }
    let mut commutation_defect = 0.0f64;
    for j in 1..=n as u8 {
        let s = build_shift(space, ShiftKind::Right(mu), j)?;
        let d = x.mul(&s)?.sub(&s.mul(x)?)?.restrict_columns(depth.saturating_sub(2));
        if let Some((r, c, v)) = d.argmax_abs() {
            commutation_defect = commutation_defect.max(v);
            if v > COMMUTATION_TOL {
                return Err(Error::Precondition {
                    message: "operator does not commute with the right shifts".into(),
                    certificate: Some(format!(
                        "|<(X S_{j} - S_{j} X) xi_{}, xi_{}>| = {v:e}",
                        space.basis().word_at(c).format(n),
                        space.basis().word_at(r).format(n)
                    )),
                });
            }
        }
    }
    let element = FourierElement::new(
        n,
        x.column(0).iter().map(|&(r, v)| (space.basis().word_at(r), v)),
    )?;
    let top = depth - element.support_len();
    let mut residual = 0.0f64;
    let mut residual_witness = Word::empty();
    for col in space.basis().levels_up_to(top) {
        let v = space.basis().word_at(col);
        let series = apply_unchecked(&element, mu, &[(v.clone(), Complex64::new(1.0, 0.0))], depth);
        let mut diff = x.column_vector(col);
        for (w, c) in series {
            diff[space.index_of(&w).expect("within depth")] -= c;
        }
        let norm = crate::linalg::norm2(&diff);
        if norm > residual {
            residual = norm;
            residual_witness = v;
        }
    }
    Ok(Extraction {
        element,
        residual,
        residual_witness,
        commutation_defect,
    })
}

/// `⟨A ξ, ξ_{v1 v2}⟩` computed from the action of `A` and from the closed
/// form `a_{v1} b_{v2} W_μ(e,v2)^{-1} W_μ(v1,v2)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Pairing {
    pub computed: Complex64,
    pub closed_form: Complex64,
}

fn is_min_support(coeffs: &Coefficients, v: &Word) -> bool {
    coeffs.get(v).is_some_and(|c| *c != Complex64::default()) && coeffs.keys().all(|w| w.len() >= v.len())
}

pub fn injectivity_pairing(
    a: &FourierElement,
    mu: &MuSystem,
    xi: &Coefficients,
    v1: &Word,
    v2: &Word,
) -> Result<Pairing> {
    check_alphabets(a, mu)?;
    if !is_min_support(&a.coeffs, v1) {
        return Err(Error::domain(format!("{v1} is not a minimal-length support word of A")));
    }
    if !is_min_support(xi, v2) {
        return Err(Error::domain(format!("{v2} is not a minimal-length support word of the vector")));
    }
    crate::fock::refuse_diverging(mu)?;
    let depth = a.support_len() + xi.keys().map(Word::len).max().unwrap_or(0);
    mu.ensure_defined_up_to(depth)?;
    let x: Vec<(Word, Complex64)> = xi.iter().map(|(w, c)| (w.clone(), *c)).collect();
    let image = apply_unchecked(a, mu, &x, depth);
    let target = v1.concat(v2);
    let computed = image.get(&target).copied().unwrap_or_default();
    let closed_form =
        a.coeff(v1) * xi[v2] * (mu.right_weight(v1, v2) / mu.right_weight(&Word::empty(), v2));
    Ok(Pairing { computed, closed_form })
}

/// One row of [`spectral_radius_lower`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RadiusBound {
    pub k: usize,
    /// `⟨A^k ξ_e, ξ_{v^k}⟩` from repeated application of `A`.
    pub coefficient: Complex64,
    /// `|coefficient|^{1/k}`, a lower bound for `‖A^k‖^{1/k}`.
    pub bound: f64,
    /// `a_v^k W_μ(e,v)^{-k} W_μ(e,v^k)`.
    pub closed_form: Complex64,
    /// `a_v^k W_μ(e,v)^{-k} W_μ(v,v^{k-1})`, which agrees with `closed_form`
    /// when `|v| <= 1` and differs from it by the factor `W_μ(e,v)` otherwise.
    pub short_word_form: Complex64,
    /// Shortest word length carrying a nonzero coefficient of `A^k ξ_e`.
    pub min_length: usize,
}

/// Lower bounds `|⟨A^k ξ_e, ξ_{v^k}⟩|^{1/k}` on the spectral radius, for
/// `k = 1..=k_max`. `v` must be a minimal-length support word of `A`.
pub fn spectral_radius_lower(
    a: &FourierElement,
    mu: &MuSystem,
    v: &Word,
    k_max: usize,
    depth: usize,
) -> Result<Vec<RadiusBound>> {
    check_alphabets(a, mu)?;
    if !is_min_support(&a.coeffs, v) {
        return Err(Error::domain(format!("{v} is not a minimal-length support word of A")));
    }
    if v.len() * k_max > depth {
        return Err(Error::domain(format!("|v| * k_max = {} exceeds depth {depth}", v.len() * k_max)));
    }
    crate::fock::refuse_diverging(mu)?;
    mu.ensure_defined_up_to(depth)?;
    let av = a.coeff(v);
    let wv = mu.right_weight(&Word::empty(), v);
    let mut x: Vec<(Word, Complex64)> = vec![(Word::empty(), Complex64::new(1.0, 0.0))];
    let mut out = Vec::with_capacity(k_max);
    for k in 1..=k_max {
        let image = apply_unchecked(a, mu, &x, depth);
        let vk = v.pow(k);
        let coefficient = image.get(&vk).copied().unwrap_or_default();
        let lead = av.powu(k as u32) / wv.powi(k as i32);
        let min_length = image
            .iter()
            .filter(|(_, c)| **c != Complex64::default())
            .map(|(w, _)| w.len())
            .min()
            .unwrap_or(0);
        out.push(RadiusBound {
            k,
            coefficient,
            bound: coefficient.norm().powf(1.0 / k as f64),
            closed_form: lead * mu.right_weight(&Word::empty(), &vk),
            short_word_form: lead * mu.right_weight(v, &v.pow(k - 1)),
            min_length,
        });
        x = image.into_iter().collect();
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        Word::parse(s, 2).unwrap()
    }

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn identity_acts_trivially() {
        let ws = WeightSystem::periodic2(1.0, 1.0, 2.0, 2.0, 2.0, 2.0).unwrap();
        let a = FourierElement::identity(2).unwrap();
        let r = apply_fourier(&a, &ws.mu_system(), &w("21"), 4).unwrap();
        assert_eq!(r, Coefficients::from([(w("21"), c(1.0))]));
    }

    #[test]
    fn shift_word_element_is_t_u() {
        let ws = WeightSystem::periodic2(1.0, 1.0, 2.0, 2.0, 2.0, 2.0).unwrap();
        let u = w("12");
        let a = FourierElement::shift_word(&ws, &u).unwrap();
        for v in ["", "1", "21", "112"] {
            let v = w(v);
            let r = apply_fourier(&a, &ws.mu_system(), &v, 6).unwrap();
            let expect = ws.left_weight(&v, &u);
            assert_eq!(r.len(), 1);
            assert!((r[&u.concat(&v)] - c(expect)).norm() < 1e-14);
        }
    }

    #[test]
    fn out_of_depth_support_is_rejected() {
        let ws = WeightSystem::unweighted(2).unwrap();
        let a = FourierElement::new(2, [(w("121"), c(1.0))]).unwrap();
        assert!(apply_fourier(&a, &ws.mu_system(), &w("22"), 4).is_err());
    }

    #[test]
    fn bands_of_l1() {
        let sp = TruncatedFock::new(2, 3).unwrap();
        let l1 = build_shift(&sp, ShiftKind::LeftUnweighted, 1).unwrap();
        assert_eq!(phi_band(&l1, -1).unwrap(), l1);
        assert_eq!(phi_band(&l1, 0).unwrap().nnz(), 0);
        assert_eq!(cesaro_sum(&l1, 2).unwrap(), l1.scale(c(0.5)));
        let id = GradedOperator::identity(&sp);
        assert_eq!(cesaro_sum(&id, 5).unwrap(), id);
        assert!(phi_band(&l1, 4).is_err());
    }

    #[test]
    fn pk_examples() {
        let ws = WeightSystem::periodic2(1.0, 1.0, 2.0, 2.0, 2.0, 2.0).unwrap();
        let sp = TruncatedFock::new(2, 3).unwrap();
        let id = FourierElement::identity(2).unwrap();
        assert_eq!(pk_polynomial(&id, &ws, 3, &sp).unwrap(), GradedOperator::identity(&sp));
        let t1 = FourierElement::shift_word(&ws, &w("1")).unwrap();
        let shift = build_shift(&sp, ShiftKind::Left(&ws), 1).unwrap();
        assert_eq!(pk_polynomial(&t1, &ws, 2, &sp).unwrap(), shift.scale(c(0.5)));
    }

    #[test]
    fn extract_identity_and_reject_adjoint() {
        let ws = WeightSystem::unweighted(2).unwrap();
        let sp = TruncatedFock::new(2, 4).unwrap();
        let ex = commutant_extract(&GradedOperator::identity(&sp), &ws.mu_system()).unwrap();
        assert_eq!(ex.element, FourierElement::identity(2).unwrap());
        assert_eq!(ex.residual, 0.0);
        let l1a = build_shift(&sp, ShiftKind::LeftUnweighted, 1).unwrap().adjoint();
        let err = commutant_extract(&l1a, &ws.mu_system()).unwrap_err();
        assert!(matches!(err, Error::Precondition { certificate: Some(_), .. }));
    }

    #[test]
    fn pairing_examples() {
        let ws = WeightSystem::unweighted(2).unwrap();
        let mu = ws.mu_system();
        let id = FourierElement::identity(2).unwrap();
        let e = Coefficients::from([(Word::empty(), c(1.0))]);
        let p = injectivity_pairing(&id, &mu, &e, &Word::empty(), &Word::empty()).unwrap();
        assert_eq!(p.computed, c(1.0));
        let a = FourierElement::new(2, [(w("1"), c(1.0)), (w("22"), c(3.0))]).unwrap();
        let xi = Coefficients::from([(w("2"), c(1.0))]);
        let p = injectivity_pairing(&a, &mu, &xi, &w("1"), &w("2")).unwrap();
        assert_eq!(p.computed, c(1.0));
        assert_eq!(p.closed_form, c(1.0));
        assert!(injectivity_pairing(&a, &mu, &xi, &w("22"), &w("2")).is_err());
    }

    #[test]
    fn radius_of_scaled_shift() {
        let ws = WeightSystem::unweighted(2).unwrap();
        let a = FourierElement::new(2, [(w("1"), c(0.7))]).unwrap();
        let rows = spectral_radius_lower(&a, &ws.mu_system(), &w("1"), 5, 6).unwrap();
        for r in rows {
            assert!((r.bound - 0.7).abs() < 1e-14);
            assert_eq!(r.min_length, r.k);
        }
    }

    #[test]
    fn json_round_trip() {
        let a = FourierElement::new(2, [(w("12"), Complex64::new(0.5, -1.0)), (Word::empty(), c(2.0))]).unwrap();
        let back = FourierElement::from_json(&a.to_json(), 2, "$").unwrap();
        assert_eq!(a, back);
        let bad = serde_json::json!({"coeffs": {"13": [1, 0]}});
        assert!(matches!(FourierElement::from_json(&bad, 2, "$"), Err(Error::Config { .. })));
    }
}
