//! Exact sparse linear algebra over a [`Field`].
//!
//! Vectors are sorted lists of `(index, value)` pairs with no stored zeros.
//! Elimination always pivots on the smallest column; among candidate rows the
//! sparsest one wins, so results depend only on the input.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::scalars::Field;

/// A sparse vector: strictly increasing indices, nonzero values.
pub type SparseVec<E> = Vec<(usize, E)>;

/// Below this size (in both dimensions) rank uses dense elimination.
pub const DENSE_CUTOFF: usize = 64;

/// `a - c * b` on sparse vectors.
pub fn axpy<F: Field>(field: &F, a: &SparseVec<F::Elem>, c: &F::Elem, b: &SparseVec<F::Elem>) -> SparseVec<F::Elem> {
    if field.is_zero(c) {
        return a.clone();
    }
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i].clone());
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            out.push((b[j].0, field.neg(&field.mul(c, &b[j].1))));
            j += 1;
        } else {
            let v = field.sub_mul(&a[i].1, c, &b[j].1);
            if !field.is_zero(&v) {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

fn scale_vec<F: Field>(field: &F, c: &F::Elem, v: &SparseVec<F::Elem>) -> SparseVec<F::Elem> {
    v.iter().map(|(k, x)| (*k, field.mul(c, x))).collect()
}

/// Sparse vector from a dense one.
pub fn sparsify<F: Field>(field: &F, dense: &[F::Elem]) -> SparseVec<F::Elem> {
    dense
        .iter()
        .enumerate()
        .filter(|(_, x)| !field.is_zero(x))
        .map(|(k, x)| (k, x.clone()))
        .collect()
}

pub fn densify<F: Field>(field: &F, v: &SparseVec<F::Elem>, dim: usize) -> Vec<F::Elem> {
    let mut out = vec![field.zero(); dim];
    for (k, x) in v {
        out[*k] = x.clone();
    }
    out
}

/// An exact sparse matrix stored by rows.
#[derive(Clone, Debug)]
pub struct SparseMatrix<F: Field> {
    field: F,
    ncols: usize,
    rows: Vec<SparseVec<F::Elem>>,
    row_labels: Option<Vec<String>>,
    col_labels: Option<Vec<String>>,
}

impl<F: Field> SparseMatrix<F> {
    pub fn zeros(field: F, nrows: usize, ncols: usize) -> Self {
        Self {
            field,
            ncols,
            rows: vec![Vec::new(); nrows],
            row_labels: None,
            col_labels: None,
        }
    }

    /// Rows must be sorted by column, zero-free and within `ncols`.
    pub fn from_rows(field: F, ncols: usize, rows: Vec<SparseVec<F::Elem>>) -> Result<Self> {
        for row in &rows {
            if row.windows(2).any(|w| w[0].0 >= w[1].0) {
                return Err(Error::InvalidArgument("row indices not increasing".into()));
            }
            if let Some((k, _)) = row.last() {
                if *k >= ncols {
                    return Err(Error::DimensionMismatch {
                        expected: ncols,
                        got: k + 1,
                    });
                }
            }
            if row.iter().any(|(_, x)| field.is_zero(x)) {
                return Err(Error::InvalidArgument("stored zero entry".into()));
            }
        }
        Ok(Self {
            field,
            ncols,
            rows,
            row_labels: None,
            col_labels: None,
        })
    }

    pub fn from_dense(field: F, dense: &[Vec<F::Elem>]) -> Result<Self> {
        let ncols = dense.first().map_or(0, |r| r.len());
        if let Some(bad) = dense.iter().find(|r| r.len() != ncols) {
            return Err(Error::DimensionMismatch {
                expected: ncols,
                got: bad.len(),
            });
        }
        let rows = dense.iter().map(|r| sparsify(&field, r)).collect();
        Ok(Self {
            field,
            ncols,
            rows,
            row_labels: None,
            col_labels: None,
        })
    }

    pub fn from_i64(field: F, dense: &[Vec<i64>]) -> Result<Self> {
        let conv: Vec<Vec<F::Elem>> = dense
            .iter()
            .map(|r| r.iter().map(|&x| field.from_i64(x)).collect())
            .collect();
        Self::from_dense(field, &conv)
    }

    /// Attaches basis labels; they must be unique and match the dimensions.
    pub fn with_labels(mut self, rows: Vec<String>, cols: Vec<String>) -> Result<Self> {
        if rows.len() != self.nrows() {
            return Err(Error::DimensionMismatch {
                expected: self.nrows(),
                got: rows.len(),
            });
        }
        if cols.len() != self.ncols {
            return Err(Error::DimensionMismatch {
                expected: self.ncols,
                got: cols.len(),
            });
        }
        for labels in [&rows, &cols] {
            let mut seen = HashSet::new();
            if let Some(dup) = labels.iter().find(|l| !seen.insert(l.as_str())) {
                return Err(Error::InvalidArgument(format!("duplicate label {dup}")));
            }
        }
        self.row_labels = Some(rows);
        self.col_labels = Some(cols);
        Ok(self)
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rows(&self) -> &[SparseVec<F::Elem>] {
        &self.rows
    }

    pub fn row_labels(&self) -> Option<&[String]> {
        self.row_labels.as_deref()
    }

    pub fn col_labels(&self) -> Option<&[String]> {
        self.col_labels.as_deref()
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(|r| r.len()).sum()
    }

    pub fn get(&self, r: usize, c: usize) -> F::Elem {
        match self.rows[r].binary_search_by_key(&c, |e| e.0) {
            Ok(pos) => self.rows[r][pos].1.clone(),
            Err(_) => self.field.zero(),
        }
    }

    /// Adds `x` to entry `(r, c)`.
    pub fn add_entry(&mut self, r: usize, c: usize, x: F::Elem) {
        assert!(c < self.ncols, "column {c} out of range");
        let row = &mut self.rows[r];
        match row.binary_search_by_key(&c, |e| e.0) {
            Ok(pos) => {
                let v = self.field.add(&row[pos].1, &x);
                if self.field.is_zero(&v) {
                    row.remove(pos);
                } else {
                    row[pos].1 = v;
                }
            }
            Err(pos) => {
                if !self.field.is_zero(&x) {
                    row.insert(pos, (c, x));
                }
            }
        }
    }

    pub fn transpose(&self) -> Self {
        let mut cols: Vec<SparseVec<F::Elem>> = vec![Vec::new(); self.ncols];
        for (r, row) in self.rows.iter().enumerate() {
            for (c, x) in row {
                cols[*c].push((r, x.clone()));
            }
        }
        Self {
            field: self.field.clone(),
            ncols: self.rows.len(),
            rows: cols,
            row_labels: self.col_labels.clone(),
            col_labels: self.row_labels.clone(),
        }
    }

    /// `M · v` for a sparse column vector `v`.
    pub fn mul_vec(&self, v: &SparseVec<F::Elem>) -> Result<SparseVec<F::Elem>> {
        if let Some((k, _)) = v.last() {
            if *k >= self.ncols {
                return Err(Error::DimensionMismatch {
                    expected: self.ncols,
                    got: k + 1,
                });
            }
        }
        let mut out = Vec::new();
        for (r, row) in self.rows.iter().enumerate() {
            let mut acc = self.field.zero();
            let (mut i, mut j) = (0, 0);
            while i < row.len() && j < v.len() {
                match row[i].0.cmp(&v[j].0) {
                    std::cmp::Ordering::Less => i += 1,
                    std::cmp::Ordering::Greater => j += 1,
                    std::cmp::Ordering::Equal => {
                        acc = self.field.add(&acc, &self.field.mul(&row[i].1, &v[j].1));
                        i += 1;
                        j += 1;
                    }
                }
            }
            if !self.field.is_zero(&acc) {
                out.push((r, acc));
            }
        }
        Ok(out)
    }

    /// Exact rank.
    pub fn rank(&self) -> usize {
        if self.rows.is_empty() || self.ncols == 0 {
            return 0;
        }
        if self.rows.len() < DENSE_CUTOFF && self.ncols < DENSE_CUTOFF {
            return dense_rank(&self.field, self.ncols, &self.rows);
        }
        let mut order: Vec<usize> = (0..self.rows.len()).collect();
        order.sort_by_key(|&r| (self.rows[r].len(), r));
        let mut basis = EchelonBasis::new(self.field.clone(), self.ncols);
        for r in order {
            basis.insert(self.rows[r].clone());
            if basis.rank() == self.ncols {
                break;
            }
        }
        basis.rank()
    }

    /// Basis of the right kernel `{v : M v = 0}`, one vector per free column,
    /// in increasing order of that column.
    pub fn kernel_basis(&self) -> Vec<SparseVec<F::Elem>> {
        let field = &self.field;
        let mut basis = EchelonBasis::new(field.clone(), self.ncols);
        for row in &self.rows {
            basis.insert(row.clone());
        }
        let reduced = basis.reduced_rows();
        let pivot_cols: Vec<usize> = reduced.iter().map(|r| r[0].0).collect();
        let is_pivot: HashSet<usize> = pivot_cols.iter().copied().collect();
        // column f of the reduced matrix, restricted to pivot rows
        let mut by_col: Vec<Vec<(usize, F::Elem)>> = vec![Vec::new(); self.ncols];
        for (ri, row) in reduced.iter().enumerate() {
            for (c, x) in row.iter().skip(1) {
                by_col[*c].push((ri, x.clone()));
            }
        }
        let mut out = Vec::new();
        #[allow(clippy::needless_range_loop)]
        for f in 0..self.ncols {
            if is_pivot.contains(&f) {
                continue;
            }
            let mut v: SparseVec<F::Elem> = by_col[f]
                .iter()
                .map(|(ri, x)| (pivot_cols[*ri], field.neg(x)))
                .collect();
            v.push((f, field.one()));
            v.sort_by_key(|e| e.0);
            out.push(v);
        }
        out
    }
}

fn dense_rank<F: Field>(field: &F, ncols: usize, rows: &[SparseVec<F::Elem>]) -> usize {
    let mut m: Vec<Vec<F::Elem>> = rows.iter().map(|r| densify(field, r, ncols)).collect();
    let mut rank = 0;
    for col in 0..ncols {
        if rank == m.len() {
            break;
        }
        let mut best: Option<(usize, usize)> = None;
        for (r, row) in m.iter().enumerate().skip(rank) {
            if !field.is_zero(&row[col]) {
                let nnz = row.iter().filter(|x| !field.is_zero(x)).count();
                if best.is_none_or(|(_, b)| nnz < b) {
                    best = Some((r, nnz));
                }
            }
        }
        let Some((p, _)) = best else { continue };
        m.swap(rank, p);
        let inv = field.inv(&m[rank][col]).expect("pivot is nonzero");
        for r in rank + 1..m.len() {
            if field.is_zero(&m[r][col]) {
                continue;
            }
            let factor = field.mul(&m[r][col], &inv);
            #[allow(clippy::needless_range_loop)]
            for c in col..ncols {
                let v = field.sub_mul(&m[r][c], &factor, &m[rank][c]);
                m[r][c] = v;
            }
        }
        rank += 1;
    }
    rank
}

/// An incrementally built row-echelon basis of a subspace of `K^dim`.
///
/// Stored rows have leading coefficient one and no entries in the pivot
/// columns of earlier rows. With tracking enabled, every stored row also
/// remembers its expression in the inserted vectors.
#[derive(Clone, Debug)]
pub struct EchelonBasis<F: Field> {
    field: F,
    dim: usize,
    pivot_row: Vec<Option<usize>>,
    rows: Vec<SparseVec<F::Elem>>,
    combos: Option<Vec<SparseVec<F::Elem>>>,
    inserted: usize,
}

impl<F: Field> EchelonBasis<F> {
    pub fn new(field: F, dim: usize) -> Self {
        Self {
            field,
            dim,
            pivot_row: vec![None; dim],
            rows: Vec::new(),
            combos: None,
            inserted: 0,
        }
    }

    /// A basis that can express members in terms of the inserted vectors.
    pub fn tracking(field: F, dim: usize) -> Self {
        let mut b = Self::new(field, dim);
        b.combos = Some(Vec::new());
        b
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn num_inserted(&self) -> usize {
        self.inserted
    }

    pub fn rows(&self) -> &[SparseVec<F::Elem>] {
        &self.rows
    }

    fn check(&self, v: &SparseVec<F::Elem>) -> Result<()> {
        match v.last() {
            Some((k, _)) if *k >= self.dim => Err(Error::DimensionMismatch {
                expected: self.dim,
                got: k + 1,
            }),
            _ => Ok(()),
        }
    }

    /// Reduces `v` against the stored rows; returns the residue and, when
    /// `combo` is given, updates it so that `v = residue + Σ combo·inserted`.
    fn reduce_inner(
        &self,
        mut v: SparseVec<F::Elem>,
        mut combo: Option<&mut SparseVec<F::Elem>>,
    ) -> SparseVec<F::Elem> {
        let mut pos = 0;
        while pos < v.len() {
            let (c, x) = (v[pos].0, v[pos].1.clone());
            match self.pivot_row[c] {
                Some(r) => {
                    v = axpy(&self.field, &v, &x, &self.rows[r]);
                    if let (Some(acc), Some(combos)) = (combo.as_deref_mut(), &self.combos) {
                        // v_old = v_new + x * row_r
                        let neg = self.field.neg(&x);
                        *acc = axpy(&self.field, acc, &neg, &combos[r]);
                    }
                    // entries before `pos` are untouched: row r starts at c
                }
                None => pos += 1,
            }
        }
        v
    }

    /// The residue of `v` modulo the span.
    pub fn reduce(&self, v: SparseVec<F::Elem>) -> Result<SparseVec<F::Elem>> {
        self.check(&v)?;
        Ok(self.reduce_inner(v, None))
    }

    pub fn contains(&self, v: &SparseVec<F::Elem>) -> Result<bool> {
        Ok(self.reduce(v.clone())?.is_empty())
    }

    /// Inserts `v`; returns whether it enlarged the span.
    pub fn insert(&mut self, v: SparseVec<F::Elem>) -> bool {
        self.try_insert(v).expect("vector index out of range")
    }

    pub fn try_insert(&mut self, v: SparseVec<F::Elem>) -> Result<bool> {
        self.check(&v)?;
        let idx = self.inserted;
        self.inserted += 1;
        let mut combo: SparseVec<F::Elem> = Vec::new();
        let tracking = self.combos.is_some();
        let residue = if tracking {
            self.reduce_inner(v, Some(&mut combo))
        } else {
            self.reduce_inner(v, None)
        };
        if residue.is_empty() {
            return Ok(false);
        }
        // residue = v - Σ combo·inserted, so residue expressed = e_idx - combo
        let lead = residue[0].0;
        let inv = self.field.inv(&residue[0].1).expect("nonzero lead");
        let row = scale_vec(&self.field, &inv, &residue);
        if let Some(combos) = self.combos.as_mut() {
            let mut expr: SparseVec<F::Elem> = combo.iter().map(|(k, x)| (*k, self.field.neg(x))).collect();
            expr.push((idx, self.field.one()));
            combos.push(scale_vec(&self.field, &inv, &expr));
        }
        self.pivot_row[lead] = Some(self.rows.len());
        self.rows.push(row);
        Ok(true)
    }

    /// Coefficients expressing `v` in the inserted vectors (dependent ones get
    /// coefficient zero), or `None` if `v` is outside the span. Requires a
    /// tracking basis.
    pub fn express(&self, v: &SparseVec<F::Elem>) -> Result<Option<Vec<F::Elem>>> {
        if self.combos.is_none() {
            return Err(Error::InvalidArgument("basis was built without tracking".into()));
        }
        self.check(v)?;
        let mut combo = Vec::new();
        let residue = self.reduce_inner(v.clone(), Some(&mut combo));
        if !residue.is_empty() {
            return Ok(None);
        }
        let mut out = vec![self.field.zero(); self.inserted];
        for (k, x) in combo {
            out[k] = x;
        }
        Ok(Some(out))
    }

    /// Fully reduced rows (reduced row-echelon form), ordered by pivot column.
    pub fn reduced_rows(&self) -> Vec<SparseVec<F::Elem>> {
        let mut order: Vec<usize> = (0..self.rows.len()).collect();
        order.sort_by_key(|&r| self.rows[r][0].0);
        let mut rows: Vec<SparseVec<F::Elem>> = order.iter().map(|&r| self.rows[r].clone()).collect();
        let pivots: Vec<usize> = rows.iter().map(|r| r[0].0).collect();
        // back substitution from the last pivot upward
        for i in (0..rows.len()).rev() {
            let pc = pivots[i];
            let pivot = rows[i].clone();
            for row in rows.iter_mut().take(i) {
                if let Ok(pos) = row.binary_search_by_key(&pc, |e| e.0) {
                    let x = row[pos].1.clone();
                    *row = axpy(&self.field, row, &x, &pivot);
                }
            }
        }
        rows
    }
}

/// Whether `target` lies in the span of `vectors` (all of length `dim`);
/// returns expressing coefficients when it does.
pub fn in_span<F: Field>(
    field: &F,
    dim: usize,
    vectors: &[SparseVec<F::Elem>],
    target: &SparseVec<F::Elem>,
) -> Result<Option<Vec<F::Elem>>> {
    let mut basis = EchelonBasis::tracking(field.clone(), dim);
    for v in vectors {
        basis.try_insert(v.clone())?;
    }
    basis.express(target)
}

/// Dense-vector form of [`in_span`]; every vector must have the target's length.
pub fn in_span_dense<F: Field>(
    field: &F,
    vectors: &[Vec<F::Elem>],
    target: &[F::Elem],
) -> Result<Option<Vec<F::Elem>>> {
    let dim = target.len();
    if let Some(bad) = vectors.iter().find(|v| v.len() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: bad.len(),
        });
    }
    let sparse: Vec<_> = vectors.iter().map(|v| sparsify(field, v)).collect();
    in_span(field, dim, &sparse, &sparsify(field, target))
}
