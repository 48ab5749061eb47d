//! Weight systems `Λ = {λ_{i,w}}`, the left weight function `W`, the
//! commutant weights `μ`, the right weight function `W_μ`, and the checks
//! built on them.

mod condition;
mod identities;
mod right;
pub mod schema;

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::words::{check_alphabet, for_each_word_of_length, graded_index, truncated_dimension, Word};

pub use condition::{commutant_sup, CommutantSup, GrowthCertificate, Verdict};
pub use identities::{
    check_cocycles, check_intertwining, semisimple_estimate, CocycleReport, DefectReport, SemisimpleEstimate,
};
pub use right::{commutant_mu, lambda_from_mu, right_weight, MuSystem, RightWeights};

/// Products over more factors than this are accumulated as sums of logs.
pub(crate) const LOG_SPACE_THRESHOLD: usize = 32;

/// Largest table (entries) a finite family may carry.
const MAX_TABLE_ENTRIES: usize = 1 << 22;

/// Positive weights `λ_{i,w}` attached to the edges `ξ_w → ξ_{iw}`.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightSystem {
    n: usize,
    family: Family,
}

/// The closed families a weight system can be drawn from.
#[derive(Clone, Debug, PartialEq)]
pub enum Family {
    /// `λ_{i,w} = value` everywhere.
    Constant { value: f64 },
    /// `λ_{i,w} = scales[i-1]`.
    Scaled { scales: Vec<f64> },
    /// Arbitrary weights on words of length `<= cutoff`, `tail[i-1]` beyond.
    /// `table` is indexed by `graded_index(w) * n + (i - 1)`.
    FinitePerturbation {
        cutoff: usize,
        table: Vec<f64>,
        tail: Vec<f64>,
    },
    /// `λ_{i,w} = λ_{i,u}` where `u` is the prefix of `w` of length
    /// `|w| mod period`. `remainders` is indexed like the perturbation table
    /// over words of length `< period`.
    Periodic { period: usize, remainders: Vec<f64> },
    /// Two letters: `λ_{1,1^k} = 1/m`, `λ_{1,1^k 2} = m^{-1/2}`, all others `c`.
    TwoLetterM { m: f64, c: f64 },
    /// Weights tabulated on words of length `<= depth`, produced from a
    /// right weight table. `source` is that table.
    Tabulated {
        depth: usize,
        table: Vec<f64>,
        source: Option<RightWeights>,
    },
}

fn check_positive(value: f64, what: &str) -> Result<()> {
    if !(value.is_finite() && value > 0.0) {
        return Err(Error::domain(format!(
            "{what} = {value}: weights must be finite and strictly positive"
        )));
    }
    Ok(())
}

fn check_letter(i: u8, n: usize) -> Result<()> {
    if i == 0 || i as usize > n {
        return Err(Error::domain(format!("letter {i} outside 1..={n}")));
    }
    Ok(())
}

/// Dense `(i, w)` table over all words of length `<= depth`, filled from
/// explicit entries with `default(i)` elsewhere.
pub(crate) fn fill_table(
    n: usize,
    depth: usize,
    entries: impl IntoIterator<Item = ((u8, Word), f64)>,
    default: impl Fn(u8) -> Option<f64>,
    what: &str,
) -> Result<Vec<f64>> {
    let dim = truncated_dimension(n, depth)
        .filter(|d| d.saturating_mul(n) <= MAX_TABLE_ENTRIES)
        .ok_or_else(|| Error::Size(format!("{what} table for n = {n}, depth {depth} is too large")))?;
    let mut table = vec![f64::NAN; dim * n];
    for ((i, w), v) in entries {
        check_letter(i, n)?;
        if w.max_letter() as usize > n {
            return Err(Error::domain(format!("{what} key {i}:{w} has a letter outside 1..={n}")));
        }
        if w.len() > depth {
            return Err(Error::domain(format!(
                "{what} key {i}:{w} has length {} > {depth}",
                w.len()
            )));
        }
        check_positive(v, &format!("{what} {i}:{w}"))?;
        table[graded_index(n, w.letters()) * n + (i as usize - 1)] = v;
    }
    for (slot, v) in table.iter_mut().enumerate() {
        if v.is_nan() {
            let i = (slot % n) as u8 + 1;
            *v = default(i).ok_or_else(|| {
                let widx = slot / n;
                let w = crate::words::BasisEnumeration::new(n, depth)
                    .map(|b| b.word_at(widx).format(n))
                    .unwrap_or_default();
                Error::domain(format!("{what} is missing the entry {i}:{w}"))
            })?;
        }
    }
    Ok(table)
}

impl WeightSystem {
    /// `λ_{i,w} = value` for all `i, w`.
    pub fn constant(n: usize, value: f64) -> Result<Self> {
        check_alphabet(n)?;
        check_positive(value, "value")?;
        Ok(WeightSystem {
            n,
            family: Family::Constant { value },
        })
    }

    /// The left creation operators: all weights 1.
    pub fn unweighted(n: usize) -> Result<Self> {
        Self::constant(n, 1.0)
    }

    /// `T_i = c_i L_i`.
    pub fn scaled(scales: Vec<f64>) -> Result<Self> {
        check_alphabet(scales.len())?;
        for (k, &c) in scales.iter().enumerate() {
            check_positive(c, &format!("scale c_{}", k + 1))?;
        }
        Ok(WeightSystem {
            n: scales.len(),
            family: Family::Scaled { scales },
        })
    }

    /// Weights from `entries` on words of length `<= cutoff`, `tail[i-1]`
    /// everywhere else. Entries missing from the table take the tail value.
    pub fn finite_perturbation(
        cutoff: usize,
        entries: impl IntoIterator<Item = ((u8, Word), f64)>,
        tail: Vec<f64>,
    ) -> Result<Self> {
        let n = tail.len();
        check_alphabet(n)?;
        for (k, &c) in tail.iter().enumerate() {
            check_positive(c, &format!("tail c_{}", k + 1))?;
        }
        let table = fill_table(n, cutoff, entries, |i| Some(tail[i as usize - 1]), "perturbation")?;
        Ok(WeightSystem {
            n,
            family: Family::FinitePerturbation { cutoff, table, tail },
        })
    }

    /// Periodic weights of the given period. `entries` must name every
    /// `(i, u)` with `|u| < period`.
    pub fn periodic(
        n: usize,
        period: usize,
        entries: impl IntoIterator<Item = ((u8, Word), f64)>,
    ) -> Result<Self> {
        check_alphabet(n)?;
        if period == 0 {
            return Err(Error::domain("period must be at least 1"));
        }
        let remainders = fill_table(n, period - 1, entries, |_| None, "remainder")?;
        Ok(WeightSystem {
            n,
            family: Family::Periodic { period, remainders },
        })
    }

    /// The two-letter family with `λ_{1,1^k} = 1/m`, `λ_{1,1^k 2} = m^{-1/2}`
    /// and every other weight equal to `c`.
    pub fn two_letter_m(m: f64, c: f64) -> Result<Self> {
        check_positive(m, "m")?;
        check_positive(c, "c")?;
        Ok(WeightSystem {
            n: 2,
            family: Family::TwoLetterM { m, c },
        })
    }

    /// Two-periodic, two-letter weights from the six remainder scalars
    /// `λ_{1,e}, λ_{2,e}, λ_{1,1}, λ_{2,1}, λ_{1,2}, λ_{2,2}`.
    pub fn periodic2(a: f64, b: f64, c: f64, d: f64, e: f64, f: f64) -> Result<Self> {
        let entries = [
            ((1u8, Word::empty()), a),
            ((2, Word::empty()), b),
            ((1, Word::letter(1)), c),
            ((2, Word::letter(1)), d),
            ((1, Word::letter(2)), e),
            ((2, Word::letter(2)), f),
        ];
        Self::periodic(2, 2, entries)
    }

    pub(crate) fn tabulated(n: usize, depth: usize, table: Vec<f64>, source: Option<RightWeights>) -> Self {
        WeightSystem {
            n,
            family: Family::Tabulated { depth, table, source },
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    /// Short family name as used in the JSON schema.
    pub fn family_name(&self) -> &'static str {
        match self.family {
            Family::Constant { .. } => "constant",
            Family::Scaled { .. } => "scaled",
            Family::FinitePerturbation { .. } => "finite_perturbation",
            Family::Periodic { .. } => "periodic",
            Family::TwoLetterM { .. } => "two_letter_m",
            Family::Tabulated { .. } => "tabulated",
        }
    }

    /// For tabulated systems, the longest base word with a known weight.
    pub fn table_depth(&self) -> Option<usize> {
        match self.family {
            Family::Tabulated { depth, .. } => Some(depth),
            _ => None,
        }
    }

    /// Errors unless every weight `λ_{i,w}` with `|w| <= max_len` is defined.
    pub fn ensure_defined_up_to(&self, max_len: usize) -> Result<()> {
        match self.table_depth() {
            Some(d) if max_len > d => Err(Error::domain(format!(
                "tabulated weights are known for |w| <= {d}, but |w| = {max_len} is needed"
            ))),
            _ => Ok(()),
        }
    }

    /// `λ_{i,w}`.
    pub fn lambda_of(&self, i: u8, w: &Word) -> Result<f64> {
        check_letter(i, self.n)?;
        if w.max_letter() as usize > self.n {
            return Err(Error::domain(format!("word {w} has a letter outside 1..={}", self.n)));
        }
        self.ensure_defined_up_to(w.len())?;
        Ok(self.weight(i, w.letters()))
    }

    /// `λ_{i,w}` without validation.
    ///
    /// # Panics
    /// On a tabulated system, if `|w|` exceeds the table depth.
    #[inline]
    pub(crate) fn weight(&self, i: u8, w: &[u8]) -> f64 {
        let n = self.n;
        let slot = i as usize - 1;
        match &self.family {
            Family::Constant { value } => *value,
            Family::Scaled { scales } => scales[slot],
            Family::FinitePerturbation { cutoff, table, tail } => {
                if w.len() > *cutoff {
                    tail[slot]
                } else {
                    table[graded_index(n, w) * n + slot]
                }
            }
            Family::Periodic { period, remainders } => {
                let u = &w[..w.len() % period];
                remainders[graded_index(n, u) * n + slot]
            }
            Family::TwoLetterM { m, c } => {
                if i != 1 {
                    return *c;
                }
                match w.split_last() {
                    None => 1.0 / m,
                    Some((&1, rest)) if rest.iter().all(|&l| l == 1) => 1.0 / m,
                    Some((&2, rest)) if rest.iter().all(|&l| l == 1) => 1.0 / m.sqrt(),
                    _ => *c,
                }
            }
            Family::Tabulated { depth, table, .. } => {
                assert!(
                    w.len() <= *depth,
                    "tabulated weight requested at |w| = {} beyond table depth {depth}",
                    w.len()
                );
                table[graded_index(n, w) * n + slot]
            }
        }
    }

    /// `W(u, w)`: the product of weights on the path from `ξ_u` to `ξ_{wu}`.
    pub fn left_weight(&self, u: &Word, w: &Word) -> f64 {
        self.left_weight_letters(u.letters(), w.letters())
    }

    pub(crate) fn left_weight_letters(&self, u: &[u8], w: &[u8]) -> f64 {
        if w.is_empty() {
            return 1.0;
        }
        let mut full = Vec::with_capacity(w.len() + u.len());
        full.extend_from_slice(w);
        full.extend_from_slice(u);
        // letter w[j] acts on the base word full[j+1..]; rightmost letter first
        let factor = |j: usize| self.weight(full[j], &full[j + 1..]);
        path_product(w.len(), |t| factor(w.len() - 1 - t))
    }

    /// Infimum of `λ_{i,w}` over `w` for each letter `i`. The flag is true
    /// when the value is the exact infimum over all words; otherwise only
    /// words with `|w| <= depth` were inspected.
    pub fn letter_infima(&self, depth: usize) -> (Vec<f64>, bool) {
        let n = self.n;
        let min_by_letter = |table: &[f64]| {
            let mut out = vec![f64::INFINITY; n];
            for (slot, &v) in table.iter().enumerate() {
                out[slot % n] = out[slot % n].min(v);
            }
            out
        };
        match &self.family {
            Family::Constant { value } => (vec![*value; n], true),
            Family::Scaled { scales } => (scales.clone(), true),
            Family::FinitePerturbation { table, tail, .. } => {
                let mut out = min_by_letter(table);
                for (o, &t) in out.iter_mut().zip(tail) {
                    *o = o.min(t);
                }
                (out, true)
            }
            Family::Periodic { remainders, .. } => (min_by_letter(remainders), true),
            Family::TwoLetterM { m, c } => (vec![(1.0 / m).min(1.0 / m.sqrt()).min(*c), *c], true),
            Family::Tabulated { depth: td, table, .. } => {
                let d = depth.min(*td);
                let dim = truncated_dimension(n, d).unwrap_or(0);
                (min_by_letter(&table[..dim * n]), false)
            }
        }
    }

    /// Largest `λ_{i,w}` over `|w| <= max_len`, per letter, by enumeration.
    pub fn letter_maxima_up_to(&self, max_len: usize) -> Vec<f64> {
        let mut out = vec![0.0f64; self.n];
        for k in 0..=max_len {
            for_each_word_of_length(self.n, k, |w| {
                for (slot, o) in out.iter_mut().enumerate() {
                    *o = o.max(self.weight(slot as u8 + 1, w));
                }
            });
        }
        out
    }

    /// The commutant weights of this system as a [`MuSystem`]. Tabulated
    /// systems built from a right table hand back that table.
    pub fn mu_system(&self) -> MuSystem {
        match &self.family {
            Family::Tabulated { source: Some(src), .. } => MuSystem::Explicit(src.clone()),
            _ => MuSystem::Commutant(self.clone()),
        }
    }

    /// Explicit `(i, w) ↦ λ_{i,w}` listing over `|w| <= depth` (for reports).
    pub fn table_up_to(&self, depth: usize) -> BTreeMap<(u8, Word), f64> {
        let mut out = BTreeMap::new();
        for k in 0..=depth {
            for_each_word_of_length(self.n, k, |w| {
                for i in 1..=self.n as u8 {
                    out.insert((i, Word::from_raw(w.to_vec())), self.weight(i, w));
                }
            });
        }
        out
    }
}

/// Product of `len` positive factors, in log space for long paths.
pub(crate) fn path_product(len: usize, factor: impl Fn(usize) -> f64) -> f64 {
    if len <= LOG_SPACE_THRESHOLD {
        (0..len).map(factor).product()
    } else {
        (0..len).map(|t| factor(t).ln()).sum::<f64>().exp()
    }
}
