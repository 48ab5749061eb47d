//! Operators on the Fock space compressed to words of length `<= depth`.

mod checks;
mod shifts;

use std::collections::BTreeSet;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::words::{BasisEnumeration, Word};

pub use checks::{commutation_defect, norm_check, vacuum_kernel_check, CommutationReport, NormEntry, VacuumReport};
pub(crate) use shifts::refuse_diverging;
pub use shifts::{build_shift, ShiftKind};

/// Dense conversions are refused above this dimension.
pub const MAX_DENSE_DIM: usize = 4096;

/// The span of `ξ_w`, `|w| <= depth`, indexed in graded order.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedFock {
    basis: Arc<BasisEnumeration>,
}

impl TruncatedFock {
    pub fn new(n: usize, depth: usize) -> Result<Self> {
        Ok(TruncatedFock {
            basis: Arc::new(BasisEnumeration::new(n, depth)?),
        })
    }

    pub fn basis(&self) -> &BasisEnumeration {
        &self.basis
    }

    pub fn n(&self) -> usize {
        self.basis.n()
    }

    pub fn depth(&self) -> usize {
        self.basis.depth()
    }

    pub fn dimension(&self) -> usize {
        self.basis.dimension()
    }

    pub fn level_of(&self, index: usize) -> usize {
        self.basis.level_of(index)
    }

    pub fn index_of(&self, w: &Word) -> Option<usize> {
        self.basis.index_of(w)
    }

    /// The basis vector `ξ_w` as a coordinate vector.
    pub fn basis_vector(&self, w: &Word) -> Result<Vec<Complex64>> {
        let idx = self
            .index_of(w)
            .ok_or_else(|| Error::domain(format!("word {w} is outside the truncation")))?;
        let mut v = vec![Complex64::new(0.0, 0.0); self.dimension()];
        v[idx] = Complex64::new(1.0, 0.0);
        Ok(v)
    }
}

type Column = Vec<(usize, Complex64)>;

/// A sparse operator on a [`TruncatedFock`], stored by columns with rows
/// sorted and zero entries dropped.
#[derive(Clone, Debug, PartialEq)]
pub struct GradedOperator {
    space: TruncatedFock,
    cols: Vec<Column>,
}

fn map_columns<F>(count: usize, f: F) -> Vec<Column>
where
    F: Fn(usize) -> Column + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..count).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..count).map(f).collect()
    }
}

fn normalize(mut col: Column) -> Column {
    col.sort_by_key(|&(r, _)| r);
    let mut out: Column = Vec::with_capacity(col.len());
    for (r, v) in col {
        match out.last_mut() {
            Some((lr, lv)) if *lr == r => *lv += v,
            _ => out.push((r, v)),
        }
    }
    out.retain(|&(_, v)| v != Complex64::new(0.0, 0.0));
    out
}

impl GradedOperator {
    pub fn zeros(space: &TruncatedFock) -> Self {
        GradedOperator {
            space: space.clone(),
            cols: vec![Vec::new(); space.dimension()],
        }
    }

    pub fn identity(space: &TruncatedFock) -> Self {
        Self::diagonal(space, |_| Complex64::new(1.0, 0.0))
    }

    pub fn diagonal(space: &TruncatedFock, f: impl Fn(usize) -> Complex64) -> Self {
        let cols = (0..space.dimension()).map(|c| normalize(vec![(c, f(c))])).collect();
        GradedOperator {
            space: space.clone(),
            cols,
        }
    }

    /// Builds an operator column by column; `f(c)` lists `(row, value)`.
    pub fn from_columns<F>(space: &TruncatedFock, f: F) -> Result<Self>
    where
        F: Fn(usize) -> Vec<(usize, Complex64)> + Sync + Send,
    {
        let dim = space.dimension();
        let cols = map_columns(dim, |c| normalize(f(c)));
        if cols.iter().flatten().any(|&(r, _)| r >= dim) {
            return Err(Error::domain("row index outside the truncation"));
        }
        Ok(GradedOperator {
            space: space.clone(),
            cols,
        })
    }

    /// Rank-one operator `x y^*`.
    pub fn outer(space: &TruncatedFock, x: &[Complex64], y: &[Complex64]) -> Self {
        let cols = (0..space.dimension())
            .map(|c| normalize(x.iter().enumerate().map(|(r, &xr)| (r, xr * y[c].conj())).collect()))
            .collect();
        GradedOperator {
            space: space.clone(),
            cols,
        }
    }

    pub fn space(&self) -> &TruncatedFock {
        &self.space
    }

    pub fn dimension(&self) -> usize {
        self.cols.len()
    }

    pub fn column(&self, c: usize) -> &[(usize, Complex64)] {
        &self.cols[c]
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(Vec::len).sum()
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.cols[c]
            .binary_search_by_key(&r, |&(row, _)| row)
            .map(|k| self.cols[c][k].1)
            .unwrap_or_default()
    }

    /// `X ξ_c` as a coordinate vector.
    pub fn column_vector(&self, c: usize) -> Vec<Complex64> {
        let mut out = vec![Complex64::default(); self.dimension()];
        for &(r, v) in &self.cols[c] {
            out[r] = v;
        }
        out
    }

    pub fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        let mut y = vec![Complex64::default(); self.dimension()];
        for (c, col) in self.cols.iter().enumerate() {
            let xc = x[c];
            if xc == Complex64::default() {
                continue;
            }
            for &(r, v) in col {
                y[r] += v * xc;
            }
        }
        y
    }

    fn same_space(&self, other: &Self) -> Result<()> {
        if self.space != other.space {
            return Err(Error::domain("operators act on different truncations"));
        }
        Ok(())
    }

    /// `self · other`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_space(other)?;
        let cols = map_columns(self.dimension(), |c| {
            let mut acc: Column = Vec::new();
            for &(k, b) in &other.cols[c] {
                for &(r, a) in &self.cols[k] {
                    acc.push((r, a * b));
                }
            }
            normalize(acc)
        });
        Ok(GradedOperator {
            space: self.space.clone(),
            cols,
        })
    }

    pub fn adjoint(&self) -> Self {
        let mut cols: Vec<Column> = vec![Vec::new(); self.dimension()];
        for (c, col) in self.cols.iter().enumerate() {
            for &(r, v) in col {
                cols[r].push((c, v.conj()));
            }
        }
        GradedOperator {
            space: self.space.clone(),
            cols: cols.into_iter().map(normalize).collect(),
        }
    }

    /// `a · self + b · other`.
    pub fn combine(&self, a: Complex64, other: &Self, b: Complex64) -> Result<Self> {
        self.same_space(other)?;
        let cols = self
            .cols
            .iter()
            .zip(&other.cols)
            .map(|(x, y)| {
                let mut col: Column = x.iter().map(|&(r, v)| (r, a * v)).collect();
                col.extend(y.iter().map(|&(r, v)| (r, b * v)));
                normalize(col)
            })
            .collect();
        Ok(GradedOperator {
            space: self.space.clone(),
            cols,
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.combine(Complex64::new(1.0, 0.0), other, Complex64::new(1.0, 0.0))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.combine(Complex64::new(1.0, 0.0), other, Complex64::new(-1.0, 0.0))
    }

    pub fn scale(&self, a: Complex64) -> Self {
        GradedOperator {
            space: self.space.clone(),
            cols: self
                .cols
                .iter()
                .map(|col| normalize(col.iter().map(|&(r, v)| (r, a * v)).collect()))
                .collect(),
        }
    }

    /// Keeps the entries for which `keep(row, col)` holds.
    pub fn filter(&self, keep: impl Fn(usize, usize) -> bool) -> Self {
        let cols = self
            .cols
            .iter()
            .enumerate()
            .map(|(c, col)| col.iter().copied().filter(|&(r, _)| keep(r, c)).collect())
            .collect();
        GradedOperator {
            space: self.space.clone(),
            cols,
        }
    }

    /// Compression to rows and columns at levels `<= level`.
    pub fn restrict_to_levels(&self, level: usize) -> Self {
        let sp = &self.space;
        self.filter(|r, c| sp.level_of(r) <= level && sp.level_of(c) <= level)
    }

    /// Keeps only rows at levels `<= level`.
    pub fn restrict_rows(&self, level: usize) -> Self {
        let sp = &self.space;
        self.filter(|r, _| sp.level_of(r) <= level)
    }

    /// Keeps only columns at levels `<= level`.
    pub fn restrict_columns(&self, level: usize) -> Self {
        let sp = &self.space;
        self.filter(|_, c| sp.level_of(c) <= level)
    }

    /// The set of `j = level(column) - level(row)` over nonzero entries.
    pub fn bands(&self) -> BTreeSet<i64> {
        let sp = &self.space;
        self.cols
            .iter()
            .enumerate()
            .flat_map(|(c, col)| col.iter().map(move |&(r, _)| sp.level_of(c) as i64 - sp.level_of(r) as i64))
            .collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.cols.iter().flatten().map(|(_, v)| v.norm()).fold(0.0, f64::max)
    }

    /// Largest entry with its `(row, col)`.
    pub fn argmax_abs(&self) -> Option<(usize, usize, f64)> {
        let mut best: Option<(usize, usize, f64)> = None;
        for (c, col) in self.cols.iter().enumerate() {
            for &(r, v) in col {
                if best.is_none_or(|b| v.norm() > b.2) {
                    best = Some((r, c, v.norm()));
                }
            }
        }
        best
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.cols.iter().flatten().map(|(_, v)| v.norm_sqr()).fold(0.0, |a, b| a + b).sqrt()
    }

    /// Largest column norm with its column index.
    pub fn max_column_norm(&self) -> (f64, usize) {
        self.cols
            .iter()
            .enumerate()
            .map(|(c, col)| (col.iter().map(|(_, v)| v.norm_sqr()).fold(0.0, |a, b| a + b).sqrt(), c))
            .fold((0.0, 0), |a, b| if b.0 > a.0 { b } else { a })
    }

    pub fn to_dense(&self) -> Result<DMatrix<Complex64>> {
        let dim = self.dimension();
        if dim > MAX_DENSE_DIM {
            return Err(Error::Size(format!("dense form of dimension {dim} exceeds {MAX_DENSE_DIM}")));
        }
        let mut m = DMatrix::zeros(dim, dim);
        for (c, col) in self.cols.iter().enumerate() {
            for &(r, v) in col {
                m[(r, c)] = v;
            }
        }
        Ok(m)
    }

    pub fn from_dense(space: &TruncatedFock, m: &DMatrix<Complex64>) -> Result<Self> {
        let dim = space.dimension();
        if m.nrows() != dim || m.ncols() != dim {
            return Err(Error::domain("matrix shape does not match the truncation"));
        }
        Self::from_columns(space, |c| (0..dim).map(|r| (r, m[(r, c)])).collect())
    }
}
