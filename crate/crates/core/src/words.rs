//! Words of the free semigroup on `n` letters and the graded enumeration of
//! the truncated Fock basis.
//!
//! A word is stored left-to-right as written: the word `i_k ⋯ i_1` is the
//! byte string `[i_k, …, i_1]`. Prepending a letter is the action of a left
//! creation operator (`ξ_w ↦ ξ_{iw}`) and appending one is the action of a
//! right creation operator (`ξ_w ↦ ξ_{wi}`). Plain concatenation of the byte
//! strings is the semigroup product.

use std::cmp::Ordering;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest supported alphabet.
pub const MAX_LETTERS: usize = 255;

/// A finite word over the letters `1..=n`. The empty word is the unit `e`.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Word(Vec<u8>);

impl Word {
    /// The unit word `e`.
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    /// Builds a word from letters, checking each lies in `1..=n`.
    pub fn from_letters(letters: impl Into<Vec<u8>>, n: usize) -> Result<Self> {
        let letters = letters.into();
        check_alphabet(n)?;
        if let Some(&bad) = letters.iter().find(|&&l| l == 0 || l as usize > n) {
            return Err(Error::domain(format!("letter {bad} outside 1..={n}")));
        }
        Ok(Word(letters))
    }

    /// Builds a word without range checks. Callers guarantee letters are valid.
    pub(crate) fn from_raw(letters: Vec<u8>) -> Self {
        Word(letters)
    }

    /// The single-letter word `i`.
    pub fn letter(i: u8) -> Self {
        Word(vec![i])
    }

    /// `i` repeated `k` times.
    pub fn repeat_letter(i: u8, k: usize) -> Self {
        Word(vec![i; k])
    }

    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Largest letter, 0 for the unit word.
    pub fn max_letter(&self) -> u8 {
        self.0.iter().copied().max().unwrap_or(0)
    }

    /// Semigroup product `self · other`.
    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// The word `i · self`.
    pub fn prepend(&self, i: u8) -> Word {
        let mut v = Vec::with_capacity(self.len() + 1);
        v.push(i);
        v.extend_from_slice(&self.0);
        Word(v)
    }

    /// The word `self · i`.
    pub fn append(&self, i: u8) -> Word {
        let mut v = self.0.clone();
        v.push(i);
        Word(v)
    }

    /// `self` concatenated with itself `k` times; `pow(0)` is `e`.
    pub fn pow(&self, k: usize) -> Word {
        Word(self.0.repeat(k))
    }

    /// Parses the string syntax: `e` for the unit word, digit characters when
    /// `n <= 9`, dot-separated decimal letters otherwise. Dots are accepted
    /// for any `n`.
    pub fn parse(s: &str, n: usize) -> Result<Self> {
        check_alphabet(n)?;
        let s = s.trim();
        if s == "e" || s.is_empty() {
            return Ok(Word::empty());
        }
        let letters: Vec<u8> = if s.contains('.') || n > 9 {
            s.split('.')
                .map(|tok| {
                    tok.parse::<u16>()
                        .ok()
                        .filter(|&l| l >= 1 && l as usize <= n)
                        .map(|l| l as u8)
                        .ok_or_else(|| Error::domain(format!("bad letter {tok:?} in word {s:?} (n = {n})")))
                })
                .collect::<Result<_>>()?
        } else {
            s.chars()
                .map(|c| {
                    c.to_digit(10)
                        .filter(|&d| d >= 1 && d as usize <= n)
                        .map(|d| d as u8)
                        .ok_or_else(|| Error::domain(format!("bad letter {c:?} in word {s:?} (n = {n})")))
                })
                .collect::<Result<_>>()?
        };
        Ok(Word(letters))
    }

    /// String form for an alphabet of size `n`.
    pub fn format(&self, n: usize) -> String {
        if self.is_empty() {
            return "e".to_string();
        }
        if n <= 9 {
            self.0.iter().map(|l| char::from(b'0' + l)).collect()
        } else {
            self.0.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(".")
        }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format(self.max_letter() as usize))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

/// Graded lexicographic order: shorter words first, then letter by letter.
impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<Word> for Vec<u8> {
    fn from(w: Word) -> Self {
        w.0
    }
}

pub(crate) fn check_alphabet(n: usize) -> Result<()> {
    if n == 0 || n > MAX_LETTERS {
        return Err(Error::domain(format!("alphabet size must lie in 1..={MAX_LETTERS}, got {n}")));
    }
    Ok(())
}

/// `u · w` with both words validated against an alphabet of size `n`.
pub fn concat(n: usize, u: &Word, w: &Word) -> Result<Word> {
    for x in [u, w] {
        if x.max_letter() as usize > n {
            return Err(Error::domain(format!("word {x} has a letter outside 1..={n}")));
        }
    }
    check_alphabet(n)?;
    Ok(u.concat(w))
}

/// `w(λ)`: the product of `λ_i` over the letters of `w`; `e(λ) = 1`.
pub fn eval_word(w: &Word, lambda: &[Complex64]) -> Result<Complex64> {
    if w.max_letter() as usize > lambda.len() {
        return Err(Error::domain(format!(
            "word {w} uses letter {} but λ has {} coordinates",
            w.max_letter(),
            lambda.len()
        )));
    }
    Ok(eval_letters(w.letters(), lambda))
}

pub(crate) fn eval_letters(w: &[u8], lambda: &[Complex64]) -> Complex64 {
    w.iter().fold(Complex64::new(1.0, 0.0), |acc, &l| acc * lambda[l as usize - 1])
}

/// Number of words of length at most `depth`, or `None` on overflow.
pub fn truncated_dimension(n: usize, depth: usize) -> Option<usize> {
    let mut total = 0usize;
    let mut level = 1usize;
    for k in 0..=depth {
        if k > 0 {
            level = level.checked_mul(n)?;
        }
        total = total.checked_add(level)?;
    }
    Some(total)
}

/// Graded-lex index of `w` among all words over `n` letters (no depth bound).
pub(crate) fn graded_index(n: usize, w: &[u8]) -> usize {
    let mut offset = 0usize;
    let mut p = 1usize;
    for _ in 0..w.len() {
        offset += p;
        p *= n;
    }
    offset + lex_rank(n, w)
}

fn lex_rank(n: usize, w: &[u8]) -> usize {
    w.iter().fold(0usize, |acc, &l| acc * n + (l as usize - 1))
}

/// The words of length at most `depth` over `n` letters in graded
/// lexicographic order, with an index↔word bijection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisEnumeration {
    n: usize,
    depth: usize,
    /// `offsets[k]` is the index of the first word of length `k`;
    /// `offsets[depth + 1]` is the dimension.
    offsets: Vec<usize>,
    powers: Vec<usize>,
}

impl BasisEnumeration {
    pub fn new(n: usize, depth: usize) -> Result<Self> {
        check_alphabet(n)?;
        let dim = truncated_dimension(n, depth)
            .ok_or_else(|| Error::Size(format!("dimension overflows for n = {n}, depth = {depth}")))?;
        let mut offsets = Vec::with_capacity(depth + 2);
        let mut powers = Vec::with_capacity(depth + 1);
        let mut acc = 0usize;
        let mut p = 1usize;
        for k in 0..=depth {
            if k > 0 {
                p *= n;
            }
            offsets.push(acc);
            powers.push(p);
            acc += p;
        }
        offsets.push(acc);
        debug_assert_eq!(acc, dim);
        Ok(BasisEnumeration { n, depth, offsets, powers })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn dimension(&self) -> usize {
        self.offsets[self.depth + 1]
    }

    /// Index range of the words of length `k`.
    pub fn level_range(&self, k: usize) -> std::ops::Range<usize> {
        assert!(k <= self.depth, "level {k} beyond depth {}", self.depth);
        self.offsets[k]..self.offsets[k + 1]
    }

    /// Index range of the words of length at most `k`.
    pub fn levels_up_to(&self, k: usize) -> std::ops::Range<usize> {
        0..self.offsets[k.min(self.depth) + 1]
    }

    pub fn level_size(&self, k: usize) -> usize {
        self.powers[k]
    }

    /// Word length of the basis vector at `index`.
    pub fn level_of(&self, index: usize) -> usize {
        debug_assert!(index < self.dimension());
        // offsets is sorted; partition_point gives the first offset > index.
        self.offsets.partition_point(|&o| o <= index) - 1
    }

    pub fn index_of(&self, w: &Word) -> Option<usize> {
        self.index_of_letters(w.letters())
    }

    pub fn index_of_letters(&self, w: &[u8]) -> Option<usize> {
        if w.len() > self.depth || w.iter().any(|&l| l == 0 || l as usize > self.n) {
            return None;
        }
        Some(self.offsets[w.len()] + lex_rank(self.n, w))
    }

    pub fn word_at(&self, index: usize) -> Word {
        Word(self.letters_at(index))
    }

    pub fn letters_at(&self, index: usize) -> Vec<u8> {
        let k = self.level_of(index);
        let mut rank = index - self.offsets[k];
        let mut letters = vec![0u8; k];
        for slot in letters.iter_mut().rev() {
            *slot = (rank % self.n) as u8 + 1;
            rank /= self.n;
        }
        letters
    }

    /// Index of `i · w` where `w` is the word at `index`, if within depth.
    pub fn prepend_index(&self, i: u8, index: usize) -> Option<usize> {
        let k = self.level_of(index);
        if k >= self.depth {
            return None;
        }
        let rank = index - self.offsets[k];
        Some(self.offsets[k + 1] + (i as usize - 1) * self.powers[k] + rank)
    }

    /// Index of `w · i` where `w` is the word at `index`, if within depth.
    pub fn append_index(&self, index: usize, i: u8) -> Option<usize> {
        let k = self.level_of(index);
        if k >= self.depth {
            return None;
        }
        let rank = index - self.offsets[k];
        Some(self.offsets[k + 1] + rank * self.n + (i as usize - 1))
    }

    /// All words in index order.
    pub fn words(&self) -> impl Iterator<Item = Word> + '_ {
        (0..self.dimension()).map(move |i| self.word_at(i))
    }
}

/// Enumerates all words of length at most `depth` over `n` letters.
pub fn enumerate_basis(n: usize, depth: usize) -> Result<BasisEnumeration> {
    BasisEnumeration::new(n, depth)
}

/// Calls `f` on every word of exactly length `k`, in lexicographic order,
/// reusing one buffer.
pub(crate) fn for_each_word_of_length(n: usize, k: usize, mut f: impl FnMut(&[u8])) {
    let mut buf = vec![1u8; k];
    loop {
        f(&buf);
        // increment as a base-n counter, last letter fastest
        let mut pos = k;
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            if (buf[pos] as usize) < n {
                buf[pos] += 1;
                for b in &mut buf[pos + 1..] {
                    *b = 1;
                }
                break;
            }
        }
    }
}
