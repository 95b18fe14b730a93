//! Exact Gaussian elimination over [`FieldSpec`] scalars.
//!
//! Every routine ends in the reduced row-echelon form of the row space, which
//! is unique, so dense and sparse elimination produce identical output. The
//! dense path walks columns left to right and takes the topmost nonzero entry
//! as pivot; the sparse path reduces rows one at a time into a [`SpanBasis`].

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};

/// Matrices with fewer columns than this are eliminated densely.
pub const DENSE_CUTOFF: usize = 64;

pub(crate) type SparseRow = BTreeMap<usize, Scalar>;

pub(crate) fn add_entry(row: &mut SparseRow, i: usize, s: Scalar) {
    let sum = match row.remove(&i) {
        Some(t) => &t + &s,
        None => s,
    };
    if !sum.is_zero() {
        row.insert(i, sum);
    }
}

/// `target += a * x`, dropping entries that cancel.
pub(crate) fn axpy(target: &mut SparseRow, a: &Scalar, x: &SparseRow) {
    if a.is_zero() {
        return;
    }
    for (&i, xi) in x {
        let prod = a * xi;
        match target.get_mut(&i) {
            Some(t) => {
                let s = &*t + &prod;
                if s.is_zero() {
                    target.remove(&i);
                } else {
                    *t = s;
                }
            }
            None => {
                target.insert(i, prod);
            }
        }
    }
}

fn scale(row: &mut SparseRow, a: &Scalar) {
    for v in row.values_mut() {
        *v = &*v * a;
    }
}

/// A coordinate vector of fixed dimension with sparse storage.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoordVec {
    dim: usize,
    entries: SparseRow,
}

impl CoordVec {
    pub fn zero(dim: usize) -> Self {
        CoordVec {
            dim,
            entries: SparseRow::new(),
        }
    }

    pub fn from_dense(values: &[Scalar]) -> Self {
        let entries = values
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(i, v)| (i, v.clone()))
            .collect();
        CoordVec {
            dim: values.len(),
            entries,
        }
    }

    /// Builds a vector from `(index, value)` pairs; repeated indices add up.
    pub fn from_entries(
        dim: usize,
        entries: impl IntoIterator<Item = (usize, Scalar)>,
    ) -> Result<Self> {
        let mut v = CoordVec::zero(dim);
        for (i, s) in entries {
            if i >= dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: i + 1,
                });
            }
            add_entry(&mut v.entries, i, s);
        }
        Ok(v)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize) -> Option<&Scalar> {
        self.entries.get(&i)
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, &Scalar)> {
        self.entries.iter().map(|(&i, s)| (i, s))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn to_dense(&self, field: FieldSpec) -> Vec<Scalar> {
        (0..self.dim)
            .map(|i| self.entries.get(&i).cloned().unwrap_or_else(|| field.zero()))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    entries: BTreeMap<(usize, usize), Scalar>,
}

impl Matrix {
    pub fn new(field: FieldSpec, rows: usize, cols: usize) -> Self {
        Matrix {
            field,
            rows,
            cols,
            entries: BTreeMap::new(),
        }
    }

    pub fn from_i64_rows(field: FieldSpec, rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = Matrix::new(field, rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged rows");
            for (c, &v) in row.iter().enumerate() {
                m.set(r, c, field.from_i64(v));
            }
        }
        m
    }

    /// Stacks coordinate vectors as rows.
    pub fn from_rows(field: FieldSpec, cols: usize, rows: &[CoordVec]) -> Result<Self> {
        let mut m = Matrix::new(field, rows.len(), cols);
        for (r, v) in rows.iter().enumerate() {
            if v.dim != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    found: v.dim,
                });
            }
            for (&c, s) in &v.entries {
                m.entries.insert((r, c), s.clone());
            }
        }
        Ok(m)
    }

    /// Uses vectors as columns.
    pub fn from_columns(field: FieldSpec, rows: usize, cols: &[CoordVec]) -> Result<Self> {
        let mut m = Matrix::new(field, rows, cols.len());
        for (c, v) in cols.iter().enumerate() {
            if v.dim != rows {
                return Err(Error::DimensionMismatch {
                    expected: rows,
                    found: v.dim,
                });
            }
            for (&r, s) in &v.entries {
                m.entries.insert((r, c), s.clone());
            }
        }
        Ok(m)
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Sets an entry; zero removes it. Panics on out-of-range indices.
    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        assert!(r < self.rows && c < self.cols, "index out of range");
        if v.is_zero() {
            self.entries.remove(&(r, c));
        } else {
            self.entries.insert((r, c), v);
        }
    }

    pub fn get(&self, r: usize, c: usize) -> Scalar {
        self.entries
            .get(&(r, c))
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn mul_vec(&self, v: &CoordVec) -> Result<CoordVec> {
        if v.dim != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: v.dim,
            });
        }
        let mut out = SparseRow::new();
        for (&(r, c), a) in &self.entries {
            if let Some(x) = v.entries.get(&c) {
                add_entry(&mut out, r, a * x);
            }
        }
        Ok(CoordVec {
            dim: self.rows,
            entries: out,
        })
    }

    fn sparse_rows(&self) -> Vec<SparseRow> {
        let mut rows = vec![SparseRow::new(); self.rows];
        for (&(r, c), v) in &self.entries {
            rows[r].insert(c, v.clone());
        }
        rows
    }

    /// Reduced row-echelon form of the row space.
    pub fn rref(&self) -> SpanBasis {
        if self.cols < DENSE_CUTOFF {
            self.rref_dense()
        } else {
            self.rref_sparse()
        }
    }

    pub(crate) fn rref_sparse(&self) -> SpanBasis {
        let mut basis = SpanBasis::new(self.field, self.cols);
        for row in self.sparse_rows() {
            basis.insert_row(row);
        }
        basis
    }

    pub(crate) fn rref_dense(&self) -> SpanBasis {
        let zero = self.field.zero();
        let mut a: Vec<Vec<Scalar>> = vec![vec![zero.clone(); self.cols]; self.rows];
        for (&(r, c), v) in &self.entries {
            a[r][c] = v.clone();
        }
        let mut pivots = Vec::new();
        let mut top = 0;
        for col in 0..self.cols {
            if top == a.len() {
                break;
            }
            let Some(found) = (top..a.len()).find(|&r| !a[r][col].is_zero()) else {
                continue;
            };
            a.swap(top, found);
            let inv = a[top][col].inv().expect("nonzero pivot");
            for x in a[top].iter_mut() {
                *x = &*x * &inv;
            }
            let pivot_row = a[top].clone();
            for (r, row) in a.iter_mut().enumerate() {
                if r == top || row[col].is_zero() {
                    continue;
                }
                let factor = -&row[col];
                for (x, p) in row.iter_mut().zip(&pivot_row) {
                    if !p.is_zero() {
                        *x = &*x + &(&factor * p);
                    }
                }
            }
            pivots.push(col);
            top += 1;
        }
        let rows = a
            .into_iter()
            .take(pivots.len())
            .map(|row| {
                row.into_iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .collect()
            })
            .collect();
        SpanBasis {
            field: self.field,
            dim: self.cols,
            rows,
            pivots,
            tracking: None,
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank()
    }

    /// Basis of `{x : self * x = 0}`: one vector per free column in increasing
    /// column order, carrying 1 at its own free column and 0 at the others.
    pub fn kernel_basis(&self) -> Vec<CoordVec> {
        self.rref().complement_kernel()
    }
}

pub fn rank(m: &Matrix) -> usize {
    m.rank()
}

pub fn kernel_basis(m: &Matrix) -> Vec<CoordVec> {
    m.kernel_basis()
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Tracking {
    accepted: usize,
    combos: Vec<SparseRow>,
}

/// Outcome of [`SpanBasis::insert`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Insertion {
    /// The vector enlarged the span; carries the new rank.
    Added { rank: usize },
    /// The vector already lay in the span; carries its coordinates against
    /// the current reduced rows.
    InSpan { coefficients: Vec<Scalar> },
}

/// An incrementally maintained row space in reduced row-echelon form.
///
/// Pivots are strictly increasing, every pivot entry is 1 and every other row
/// vanishes in each pivot column. When built with [`SpanBasis::with_tracking`]
/// the basis also remembers how each reduced row combines the accepted
/// generators, which lets [`SpanBasis::express`] return coordinates against
/// the vectors in insertion order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpanBasis {
    field: FieldSpec,
    dim: usize,
    rows: Vec<SparseRow>,
    pivots: Vec<usize>,
    tracking: Option<Tracking>,
}

impl SpanBasis {
    pub fn new(field: FieldSpec, dim: usize) -> Self {
        SpanBasis {
            field,
            dim,
            rows: Vec::new(),
            pivots: Vec::new(),
            tracking: None,
        }
    }

    pub fn with_tracking(field: FieldSpec, dim: usize) -> Self {
        SpanBasis {
            tracking: Some(Tracking {
                accepted: 0,
                combos: Vec::new(),
            }),
            ..SpanBasis::new(field, dim)
        }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn vectors(&self) -> Vec<CoordVec> {
        self.rows
            .iter()
            .map(|r| CoordVec {
                dim: self.dim,
                entries: r.clone(),
            })
            .collect()
    }

    fn check_dim(&self, v: &CoordVec) -> Result<()> {
        if v.dim != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: v.dim,
            });
        }
        Ok(())
    }

    /// Reduces `v` against the rows; returns the residual and the coordinates
    /// that were subtracted.
    fn reduce(&self, v: &SparseRow) -> (SparseRow, Vec<Scalar>) {
        let mut residual = v.clone();
        let mut coefficients = Vec::with_capacity(self.rows.len());
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let c = residual.get(&p).cloned().unwrap_or_else(|| self.field.zero());
            if !c.is_zero() {
                axpy(&mut residual, &-&c, row);
            }
            coefficients.push(c);
        }
        (residual, coefficients)
    }

    /// Coordinates of `v` against the reduced rows, or `None` when `v` is
    /// outside the span.
    pub fn in_span(&self, v: &CoordVec) -> Result<Option<Vec<Scalar>>> {
        self.check_dim(v)?;
        let (residual, coefficients) = self.reduce(&v.entries);
        Ok(residual.is_empty().then_some(coefficients))
    }

    /// Coordinates of `v` against the accepted generators in insertion order.
    /// Requires a tracking basis; returns `Ok(None)` when `v` is outside the
    /// span.
    pub fn express(&self, v: &CoordVec) -> Result<Option<Vec<Scalar>>> {
        let tracking = self
            .tracking
            .as_ref()
            .expect("express() needs SpanBasis::with_tracking");
        let Some(coefficients) = self.in_span(v)? else {
            return Ok(None);
        };
        let mut out = SparseRow::new();
        for (c, combo) in coefficients.iter().zip(&tracking.combos) {
            axpy(&mut out, c, combo);
        }
        Ok(Some(
            (0..tracking.accepted)
                .map(|i| out.get(&i).cloned().unwrap_or_else(|| self.field.zero()))
                .collect(),
        ))
    }

    pub fn insert(&mut self, v: &CoordVec) -> Result<Insertion> {
        self.check_dim(v)?;
        Ok(self.insert_row(v.entries.clone()))
    }

    fn insert_row(&mut self, v: SparseRow) -> Insertion {
        let (mut residual, coefficients) = self.reduce(&v);
        let Some((&lead, lead_value)) = residual.iter().next() else {
            return Insertion::InSpan { coefficients };
        };
        let inv = lead_value.inv().expect("nonzero lead");
        scale(&mut residual, &inv);

        let mut new_combo = None;
        if let Some(t) = &self.tracking {
            let mut combo = SparseRow::from([(t.accepted, self.field.one())]);
            for (c, old) in coefficients.iter().zip(&t.combos) {
                axpy(&mut combo, &-c, old);
            }
            scale(&mut combo, &inv);
            new_combo = Some(combo);
        }

        for (k, row) in self.rows.iter_mut().enumerate() {
            if let Some(f) = row.get(&lead).cloned() {
                axpy(row, &-&f, &residual);
                if let (Some(t), Some(nc)) = (self.tracking.as_mut(), new_combo.as_ref()) {
                    axpy(&mut t.combos[k], &-&f, nc);
                }
            }
        }

        let at = self.pivots.partition_point(|&p| p < lead);
        self.pivots.insert(at, lead);
        self.rows.insert(at, residual);
        if let (Some(t), Some(nc)) = (self.tracking.as_mut(), new_combo) {
            t.combos.insert(at, nc);
            t.accepted += 1;
        }
        Insertion::Added {
            rank: self.rows.len(),
        }
    }

    /// Kernel of the linear map whose rows are this basis.
    pub fn complement_kernel(&self) -> Vec<CoordVec> {
        let mut is_pivot = vec![false; self.dim];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.dim)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut entries = SparseRow::from([(f, self.field.one())]);
                for (row, &p) in self.rows.iter().zip(&self.pivots) {
                    if let Some(x) = row.get(&f) {
                        entries.insert(p, -x);
                    }
                }
                CoordVec {
                    dim: self.dim,
                    entries,
                }
            })
            .collect()
    }

    /// Checks the reduced row-echelon invariants.
    pub fn is_reduced(&self) -> bool {
        self.pivots.windows(2).all(|w| w[0] < w[1])
            && self.rows.len() == self.pivots.len()
            && self.rows.iter().zip(&self.pivots).all(|(row, &p)| {
                row.iter().next().map(|(&i, v)| i == p && v.is_one()) == Some(true)
            })
            && self.rows.iter().enumerate().all(|(k, row)| {
                self.pivots
                    .iter()
                    .enumerate()
                    .all(|(j, p)| j == k || !row.contains_key(p))
            })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Scalar {
        FieldSpec::Rationals.from_i64(n)
    }

    #[test]
    fn rank_examples() {
        let f2 = FieldSpec::Prime(2);
        assert_eq!(Matrix::new(FieldSpec::Rationals, 3, 3).rank(), 0);
        let id: Vec<Vec<i64>> = (0..4)
            .map(|i| (0..4).map(|j| i64::from(i == j)).collect())
            .collect();
        assert_eq!(Matrix::from_i64_rows(f2, &id).rank(), 4);
        assert_eq!(Matrix::from_i64_rows(f2, &[vec![1, 1], vec![1, 1]]).rank(), 1);
    }

    #[test]
    fn kernel_examples() {
        let id: Vec<Vec<i64>> = (0..3)
            .map(|i| (0..3).map(|j| i64::from(i == j)).collect())
            .collect();
        assert!(Matrix::from_i64_rows(FieldSpec::Rationals, &id)
            .kernel_basis()
            .is_empty());

        let f2 = FieldSpec::Prime(2);
        let k = Matrix::from_i64_rows(f2, &[vec![1, 1], vec![1, 1]]).kernel_basis();
        assert_eq!(k.len(), 1);
        assert_eq!(k[0].to_dense(f2), vec![f2.one(), f2.one()]);

        let k = Matrix::from_i64_rows(FieldSpec::Rationals, &[vec![1, 2, 3]]).kernel_basis();
        let dense: Vec<_> = k
            .iter()
            .map(|v| v.to_dense(FieldSpec::Rationals))
            .collect();
        assert_eq!(dense, vec![vec![q(-2), q(1), q(0)], vec![q(-3), q(0), q(1)]]);
    }

    #[test]
    fn span_examples() {
        let f = FieldSpec::Rationals;
        let mut b = SpanBasis::new(f, 2);
        b.insert(&CoordVec::from_dense(&[q(1), q(1)])).unwrap();
        assert_eq!(
            b.in_span(&CoordVec::zero(2)).unwrap(),
            Some(vec![q(0)])
        );
        assert_eq!(
            b.in_span(&CoordVec::from_dense(&[q(2), q(2)])).unwrap(),
            Some(vec![q(2)])
        );

        let mut b = SpanBasis::new(f, 2);
        b.insert(&CoordVec::from_dense(&[q(0), q(1)])).unwrap();
        assert_eq!(b.in_span(&CoordVec::from_dense(&[q(1), q(0)])).unwrap(), None);
        assert!(matches!(
            b.in_span(&CoordVec::zero(3)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn tracking_expresses_against_generators() {
        let f = FieldSpec::Rationals;
        let mut b = SpanBasis::with_tracking(f, 3);
        let g0 = CoordVec::from_dense(&[q(1), q(2), q(0)]);
        let g1 = CoordVec::from_dense(&[q(0), q(1), q(1)]);
        b.insert(&g0).unwrap();
        b.insert(&g1).unwrap();
        // 3*g0 - 2*g1
        let v = CoordVec::from_dense(&[q(3), q(4), q(-2)]);
        assert_eq!(b.express(&v).unwrap(), Some(vec![q(3), q(-2)]));
        assert!(b.is_reduced());
    }

    #[test]
    fn dense_and_sparse_paths_agree() {
        let f = FieldSpec::Prime(5);
        let m = Matrix::from_i64_rows(
            f,
            &[vec![0, 2, 4, 1], vec![1, 0, 3, 3], vec![1, 2, 2, 4], vec![0, 0, 0, 0]],
        );
        assert_eq!(m.rref_dense(), m.rref_sparse());
        assert!(m.rref_dense().is_reduced());
    }
}
