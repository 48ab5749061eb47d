use crate::error::{Error, Result};
use crate::words::{check_alphabet, graded_index, truncated_dimension, Word};

use super::{check_letter, check_positive, fill_table, path_product, WeightSystem};

/// Tolerance on the normalization `μ_{i,e} = 1`.
const NORMALIZATION_TOL: f64 = 1e-12;

/// An explicit table of right weights `μ_{i,w}`: arbitrary on `|w| <= cutoff`,
/// `tail[i-1]` beyond.
#[derive(Clone, Debug, PartialEq)]
pub struct RightWeights {
    n: usize,
    cutoff: usize,
    table: Vec<f64>,
    tail: Vec<f64>,
}

impl RightWeights {
    /// Builds the table; entries not listed take the tail value. Errors
    /// unless `μ_{i,e} = 1` for every letter.
    pub fn new(
        cutoff: usize,
        entries: impl IntoIterator<Item = ((u8, Word), f64)>,
        tail: Vec<f64>,
    ) -> Result<Self> {
        let n = tail.len();
        check_alphabet(n)?;
        for (k, &t) in tail.iter().enumerate() {
            check_positive(t, &format!("right tail {}", k + 1))?;
        }
        let table = fill_table(n, cutoff, entries, |i| Some(tail[i as usize - 1]), "right weight")?;
        let rw = RightWeights { n, cutoff, table, tail };
        for i in 1..=n as u8 {
            let v = rw.mu(i, &[]);
            if (v - 1.0).abs() > NORMALIZATION_TOL {
                return Err(Error::domain(format!(
                    "right weights must be normalized with mu_{{{i},e}} = 1, got {v}"
                )));
            }
        }
        Ok(rw)
    }

    /// `μ ≡ 1`: the right creation operators.
    pub fn unweighted(n: usize) -> Result<Self> {
        Self::new(0, [], vec![1.0; n])
    }

    /// Tabulates `mu` on `|w| <= depth`, with tail 1.
    pub fn from_mu_system(mu: &MuSystem, depth: usize) -> Result<Self> {
        let n = mu.n();
        let dim = truncated_dimension(n, depth).ok_or_else(|| Error::Size("right weight table too large".into()))?;
        let basis = crate::words::BasisEnumeration::new(n, depth)?;
        let mut entries = Vec::with_capacity(dim * n);
        for idx in 0..dim {
            let w = basis.word_at(idx);
            for i in 1..=n as u8 {
                entries.push(((i, w.clone()), mu.mu(i, w.letters())));
            }
        }
        Self::new(depth, entries, vec![1.0; n])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn tail(&self) -> &[f64] {
        &self.tail
    }

    #[inline]
    pub(crate) fn mu(&self, i: u8, w: &[u8]) -> f64 {
        let slot = i as usize - 1;
        if w.len() > self.cutoff {
            self.tail[slot]
        } else {
            self.table[graded_index(self.n, w) * self.n + slot]
        }
    }

    /// `sup_{i,w} μ_{i,w}`.
    pub fn sup(&self) -> (f64, u8, Word) {
        let mut best = (f64::NEG_INFINITY, 1u8, Word::empty());
        let basis = crate::words::BasisEnumeration::new(self.n, self.cutoff).expect("table exists");
        for (slot, &v) in self.table.iter().enumerate() {
            if v > best.0 {
                best = (v, (slot % self.n) as u8 + 1, basis.word_at(slot / self.n));
            }
        }
        for (slot, &t) in self.tail.iter().enumerate() {
            if t > best.0 {
                best = (t, slot as u8 + 1, Word::repeat_letter(1, self.cutoff + 1));
            }
        }
        best
    }
}

/// A source of right weights `μ_{i,w}`.
#[derive(Clone, Debug, PartialEq)]
pub enum MuSystem {
    /// The commutant weights `W(i,w) / W(e,w)` of a left weight system.
    Commutant(WeightSystem),
    /// An explicit table.
    Explicit(RightWeights),
    /// `base` with the single weight `μ_{letter,word}` multiplied by `factor`.
    Perturbed {
        base: Box<MuSystem>,
        letter: u8,
        word: Word,
        factor: f64,
    },
}

impl MuSystem {
    pub fn n(&self) -> usize {
        match self {
            MuSystem::Commutant(ws) => ws.n(),
            MuSystem::Explicit(rw) => rw.n(),
            MuSystem::Perturbed { base, .. } => base.n(),
        }
    }

    /// Multiplies one weight by `factor`.
    pub fn perturbed(self, letter: u8, word: Word, factor: f64) -> Result<MuSystem> {
        check_letter(letter, self.n())?;
        check_positive(factor, "perturbation factor")?;
        Ok(MuSystem::Perturbed {
            base: Box::new(self),
            letter,
            word,
            factor,
        })
    }

    /// `μ_{i,w}`, validated.
    pub fn mu_of(&self, i: u8, w: &Word) -> Result<f64> {
        check_letter(i, self.n())?;
        if w.max_letter() as usize > self.n() {
            return Err(Error::domain(format!("word {w} has a letter outside 1..={}", self.n())));
        }
        self.ensure_defined_up_to(w.len())?;
        Ok(self.mu(i, w.letters()))
    }

    /// Errors unless every `μ_{i,w}` with `|w| <= max_len` is defined.
    pub fn ensure_defined_up_to(&self, max_len: usize) -> Result<()> {
        match self {
            MuSystem::Commutant(ws) => ws.ensure_defined_up_to(max_len),
            MuSystem::Explicit(_) => Ok(()),
            MuSystem::Perturbed { base, .. } => base.ensure_defined_up_to(max_len),
        }
    }

    #[inline]
    pub(crate) fn mu(&self, i: u8, w: &[u8]) -> f64 {
        match self {
            MuSystem::Commutant(ws) => commutant_ratio(ws, i, w),
            MuSystem::Explicit(rw) => rw.mu(i, w),
            MuSystem::Perturbed {
                base,
                letter,
                word,
                factor,
            } => {
                let v = base.mu(i, w);
                if i == *letter && w == word.letters() {
                    v * factor
                } else {
                    v
                }
            }
        }
    }

    /// `W_μ(v, w)`: the product of right weights on the path from `ξ_v` to `ξ_{vw}`.
    pub fn right_weight(&self, v: &Word, w: &Word) -> f64 {
        self.right_weight_letters(v.letters(), w.letters())
    }

    pub(crate) fn right_weight_letters(&self, v: &[u8], w: &[u8]) -> f64 {
        if w.is_empty() {
            return 1.0;
        }
        let mut full = Vec::with_capacity(v.len() + w.len());
        full.extend_from_slice(v);
        full.extend_from_slice(w);
        path_product(w.len(), |j| self.mu(w[j], &full[..v.len() + j]))
    }
}

/// `W(i,w) / W(e,w)` with both products formed before dividing.
#[inline]
pub(crate) fn commutant_ratio(ws: &WeightSystem, i: u8, w: &[u8]) -> f64 {
    ws.left_weight_letters(&[i], w) / ws.left_weight_letters(&[], w)
}

/// The commutant weight `μ_{i,w} = W(i,w) / W(e,w)`.
pub fn commutant_mu(ws: &WeightSystem, i: u8, w: &Word) -> Result<f64> {
    check_letter(i, ws.n())?;
    if w.max_letter() as usize > ws.n() {
        return Err(Error::domain(format!("word {w} has a letter outside 1..={}", ws.n())));
    }
    ws.ensure_defined_up_to(w.len())?;
    Ok(commutant_ratio(ws, i, w.letters()))
}

/// `W_μ(v, w)` for any source of right weights.
pub fn right_weight(mu: &MuSystem, v: &Word, w: &Word) -> Result<f64> {
    let n = mu.n();
    if v.max_letter() as usize > n || w.max_letter() as usize > n {
        return Err(Error::domain(format!("letters must lie in 1..={n}")));
    }
    mu.ensure_defined_up_to(v.len() + w.len())?;
    Ok(mu.right_weight(v, w))
}

/// The left weights whose commutant is generated by the given right weights:
/// `λ_{i,w} = W_μ(i,w) / W_μ(e,w)`, tabulated for `|w| <= depth`.
///
/// The ratio is bounded for every table with a constant tail, since the
/// factors past the cutoff cancel, so no divergence can occur here.
pub fn lambda_from_mu(mu: &RightWeights, depth: usize) -> Result<WeightSystem> {
    let n = mu.n();
    let system = MuSystem::Explicit(mu.clone());
    let basis = crate::words::BasisEnumeration::new(n, depth)?;
    let entries = (0..basis.dimension()).flat_map(|idx| {
        let w = basis.letters_at(idx);
        let system = &system;
        (1..=n as u8).map(move |i| {
            let value = system.right_weight_letters(&[i], &w) / system.right_weight_letters(&[], &w);
            ((i, Word::from_raw(w.clone())), value)
        })
    });
    let table = fill_table(n, depth, entries, |_| None, "lambda")?;
    Ok(WeightSystem::tabulated(n, depth, table, Some(mu.clone())))
}
