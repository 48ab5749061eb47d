use crate::error::{Error, Result};
use crate::words::{for_each_word_of_length, Word};

use super::condition::{commutant_sup, Verdict};
use super::right::commutant_ratio;
use super::{MuSystem, WeightSystem};

/// Depth of the sweep used to refuse diverging systems.
const PRECONDITION_DEPTH: usize = 6;

/// Largest relative defect of an identity over an enumerated range.
#[derive(Clone, Debug, PartialEq)]
pub struct DefectReport {
    pub max_defect: f64,
    /// The words attaining `max_defect`, in the order the identity names them.
    pub witness: Option<Vec<Word>>,
    /// Letter attaining `max_defect`, for identities quantified over a letter.
    pub letter: Option<u8>,
    pub checked: usize,
}

impl DefectReport {
    fn new() -> Self {
        DefectReport {
            max_defect: 0.0,
            witness: None,
            letter: None,
            checked: 0,
        }
    }

    fn record(&mut self, lhs: f64, rhs: f64, letter: Option<u8>, words: impl FnOnce() -> Vec<Word>) {
        self.checked += 1;
        let d = relative_defect(lhs, rhs);
        if d > self.max_defect || (self.witness.is_none() && d >= self.max_defect) {
            self.max_defect = d;
            self.letter = letter;
            self.witness = Some(words());
        }
    }
}

fn relative_defect(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

/// Defects of `W(u, vw) = W(wu, v) W(u, w)` and of
/// `W_μ(u, vw) = W_μ(u, v) W_μ(uv, w)`.
#[derive(Clone, Debug, PartialEq)]
pub struct CocycleReport {
    pub left: DefectReport,
    pub right: DefectReport,
}

impl CocycleReport {
    pub fn max_defect(&self) -> f64 {
        self.left.max_defect.max(self.right.max_defect)
    }
}

/// Visits every `(u, v, w)` with `|u| + |v| + |w| <= depth`.
fn for_each_triple(n: usize, depth: usize, mut f: impl FnMut(&[u8], &[u8], &[u8])) {
    for lu in 0..=depth {
        for lv in 0..=depth - lu {
            for lw in 0..=depth - lu - lv {
                for_each_word_of_length(n, lu, |u| {
                    for_each_word_of_length(n, lv, |v| {
                        for_each_word_of_length(n, lw, |w| f(u, v, w));
                    });
                });
            }
        }
    }
}

fn cat(a: &[u8], b: &[u8]) -> Vec<u8> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    out.extend_from_slice(a);
    out.extend_from_slice(b);
    out
}

fn raw(w: &[u8]) -> Word {
    Word::from_raw(w.to_vec())
}

/// Checks both cocycle identities on all triples with total length `<= depth`.
pub fn check_cocycles(ws: &WeightSystem, mu: &MuSystem, depth: usize) -> Result<CocycleReport> {
    if ws.n() != mu.n() {
        return Err(Error::domain("left and right weights use different alphabets"));
    }
    ws.ensure_defined_up_to(depth)?;
    mu.ensure_defined_up_to(depth)?;
    let mut left = DefectReport::new();
    let mut right = DefectReport::new();
    for_each_triple(ws.n(), depth, |u, v, w| {
        let vw = cat(v, w);
        let lhs = ws.left_weight_letters(u, &vw);
        let rhs = ws.left_weight_letters(&cat(w, u), v) * ws.left_weight_letters(u, w);
        left.record(lhs, rhs, None, || vec![raw(u), raw(v), raw(w)]);
        let lhs = mu.right_weight_letters(u, &vw);
        let rhs = mu.right_weight_letters(u, v) * mu.right_weight_letters(&cat(u, v), w);
        right.record(lhs, rhs, None, || vec![raw(u), raw(v), raw(w)]);
    });
    Ok(CocycleReport { left, right })
}

/// Defect of `μ_{i,v} W(vi, w) = μ_{i,wv} W(v, w)` over `|v| + |w| + 1 <= depth`,
/// with `μ` the commutant weights of `ws`.
pub fn check_intertwining(ws: &WeightSystem, depth: usize) -> Result<DefectReport> {
    ws.ensure_defined_up_to(depth)?;
    let n = ws.n();
    let mut report = DefectReport::new();
    if depth == 0 {
        return Ok(report);
    }
    for lv in 0..depth {
        for lw in 0..depth - lv {
            for_each_word_of_length(n, lv, |v| {
                for_each_word_of_length(n, lw, |w| {
                    for i in 1..=n as u8 {
                        let vi = cat(v, &[i]);
                        let wv = cat(w, v);
                        let lhs = commutant_ratio(ws, i, v) * ws.left_weight_letters(&vi, w);
                        let rhs = commutant_ratio(ws, i, &wv) * ws.left_weight_letters(v, w);
                        report.record(lhs, rhs, Some(i), || vec![raw(v), raw(w)]);
                    }
                });
            });
        }
    }
    Ok(report)
}

/// Finite-range estimate of
/// `inf_v W_μ(e,v)^{-1} liminf_k W_μ(v, v^{k-1})^{1/k}`.
#[derive(Clone, Debug, PartialEq)]
pub struct SemisimpleEstimate {
    pub value: f64,
    /// The `v` attaining the minimum.
    pub witness: Word,
    pub max_v_len: usize,
    /// The `k` over which the liminf was replaced by a minimum.
    pub k_range: (usize, usize),
}

/// Estimates the semisimplicity constant of the commutant weights of `ws`:
/// minimum over `1 <= |v| <= max_v_len` of
/// `W_μ(e,v)^{-1} min_{K/2 <= k <= K} W_μ(v, v^{k-1})^{1/k}` with `K = max_k`.
pub fn semisimple_estimate(ws: &WeightSystem, max_v_len: usize, max_k: usize) -> Result<SemisimpleEstimate> {
    if max_v_len == 0 || max_k == 0 {
        return Err(Error::domain("max_v_len and max_k must be at least 1"));
    }
    let verdict = commutant_sup(ws, PRECONDITION_DEPTH.min(ws.table_depth().unwrap_or(usize::MAX)).max(1))?;
    if verdict.verdict == Verdict::Diverging {
        let cert = verdict.certificate.as_ref().map(|c| {
            format!(
                "ratio for letter {} grows by {} per repetition of {}",
                c.letter, c.growth_per_cycle, c.cycle
            )
        });
        return Err(Error::Precondition {
            message: "the commutant weights are unbounded".into(),
            certificate: cert,
        });
    }
    let mu = ws.mu_system();
    mu.ensure_defined_up_to(max_v_len * max_k)?;
    let k_lo = (max_k / 2).max(1);
    let mut best = (f64::INFINITY, Word::empty());
    for len in 1..=max_v_len {
        for_each_word_of_length(ws.n(), len, |v| {
            // W_μ(v, v^k) = W_μ(v, v^{k-1}) W_μ(v^k, v)
            let mut power = v.to_vec();
            let mut acc = 1.0f64;
            let mut tail_min = f64::INFINITY;
            for k in 1..=max_k {
                if k >= k_lo {
                    tail_min = tail_min.min(acc.powf(1.0 / k as f64));
                }
                acc *= mu.right_weight_letters(&power, v);
                power.extend_from_slice(v);
            }
            let value = tail_min / mu.right_weight_letters(&[], v);
            if value < best.0 {
                best = (value, raw(v));
            }
        });
    }
    Ok(SemisimpleEstimate {
        value: best.0,
        witness: best.1,
        max_v_len,
        k_range: (k_lo, max_k),
    })
}
