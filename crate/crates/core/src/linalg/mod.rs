//! Exact linear algebra over [`Field`]: sparse vectors, echelon bases and the
//! matrix kernel (rank, kernel, solve) everything else reduces to.

mod dense;
mod sparse;

pub use sparse::{Accumulator, Echelon, SparseVec};

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};

/// Matrices whose density is at most this fraction use sparse column storage.
pub const DEFAULT_SPARSE_THRESHOLD: f64 = 0.25;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Storage {
    /// Row-major entries.
    Dense(Vec<Scalar>),
    /// One sparse vector per column.
    Sparse(Vec<SparseVec>),
}

/// A `rows × cols` matrix over a single field.
///
/// Column `j` is the image of the `j`-th source basis vector. Storage is
/// chosen by density; every operation returns identical results for both.
#[derive(Clone, Debug)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    storage: Storage,
}

/// Outcome of [`Matrix::solve`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Solution {
    /// `m · x = b`, with `x` supported on pivot columns.
    Particular(SparseVec),
    /// A left null vector `v` (`v · m = 0`) with `v · b ≠ 0`.
    Inconsistent { witness: SparseVec },
}

impl PartialEq for Matrix {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field
            && self.rows == other.rows
            && self.cols == other.cols
            && self.columns() == other.columns()
    }
}

impl Eq for Matrix {}

impl Matrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        Matrix {
            field,
            rows,
            cols,
            storage: Storage::Sparse(vec![SparseVec::new(); cols]),
        }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let cols = (0..n).map(|i| SparseVec::unit(i, field)).collect();
        Self::from_columns_unchecked(field, n, cols)
    }

    /// Builds from columns, validating indices and the field of every entry.
    pub fn from_columns(field: Field, rows: usize, columns: Vec<SparseVec>) -> Result<Self> {
        Self::from_columns_with_threshold(field, rows, columns, DEFAULT_SPARSE_THRESHOLD)
    }

    pub fn from_columns_with_threshold(
        field: Field,
        rows: usize,
        columns: Vec<SparseVec>,
        threshold: f64,
    ) -> Result<Self> {
        for col in &columns {
            if let Some(m) = col.max_index() {
                if m >= rows {
                    return Err(Error::Dimension(format!(
                        "entry in row {m} of a matrix with {rows} rows"
                    )));
                }
            }
            for (_, v) in col.iter() {
                field.check(v)?;
            }
        }
        let cols = columns.len();
        let mut m = Matrix {
            field,
            rows,
            cols,
            storage: Storage::Sparse(columns),
        };
        m.choose_storage(threshold);
        Ok(m)
    }

    pub(crate) fn from_columns_unchecked(field: Field, rows: usize, columns: Vec<SparseVec>) -> Self {
        debug_assert!(columns.iter().all(|c| c.max_index().is_none_or(|m| m < rows)));
        let cols = columns.len();
        let mut m = Matrix {
            field,
            rows,
            cols,
            storage: Storage::Sparse(columns),
        };
        m.choose_storage(DEFAULT_SPARSE_THRESHOLD);
        m
    }

    pub fn from_triplets(
        field: Field,
        rows: usize,
        cols: usize,
        triplets: Vec<(usize, usize, Scalar)>,
    ) -> Result<Self> {
        let mut per_col: Vec<Vec<(usize, Scalar)>> = vec![Vec::new(); cols];
        for (r, c, v) in triplets {
            if c >= cols {
                return Err(Error::Dimension(format!(
                    "entry in column {c} of a matrix with {cols} columns"
                )));
            }
            field.check(&v)?;
            per_col[c].push((r, v));
        }
        let columns = per_col.into_iter().map(SparseVec::from_entries).collect();
        Self::from_columns(field, rows, columns)
    }

    pub fn from_rows(field: Field, cols: usize, rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let nrows = rows.len();
        let mut triplets = Vec::new();
        for (r, row) in rows.into_iter().enumerate() {
            if row.len() != cols {
                return Err(Error::Dimension(format!(
                    "row {r} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            for (c, v) in row.into_iter().enumerate() {
                if !v.is_zero() {
                    triplets.push((r, c, v));
                } else {
                    field.check(&v)?;
                }
            }
        }
        Self::from_triplets(field, nrows, cols, triplets)
    }

    /// Small integer matrices, mostly for tests and examples.
    pub fn from_i64_rows(field: Field, rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&x| field.from_i64(x)).collect())
            .collect();
        Self::from_rows(field, cols, rows).expect("well-formed integer matrix")
    }

    fn choose_storage(&mut self, threshold: f64) {
        let cells = self.rows * self.cols;
        let density = if cells == 0 {
            0.0
        } else {
            self.nnz() as f64 / cells as f64
        };
        if density <= threshold {
            self.make_sparse();
        } else {
            self.make_dense();
        }
    }

    pub fn make_sparse(&mut self) {
        if let Storage::Dense(_) = self.storage {
            self.storage = Storage::Sparse(self.columns());
        }
    }

    pub fn make_dense(&mut self) {
        if let Storage::Sparse(cols) = &self.storage {
            let mut data = vec![self.field.zero(); self.rows * self.cols];
            for (c, col) in cols.iter().enumerate() {
                for (r, v) in col.iter() {
                    data[r * self.cols + c] = v.clone();
                }
            }
            self.storage = Storage::Dense(data);
        }
    }

    pub fn is_sparse(&self) -> bool {
        matches!(self.storage, Storage::Sparse(_))
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        match &self.storage {
            Storage::Dense(d) => d.iter().filter(|v| !v.is_zero()).count(),
            Storage::Sparse(c) => c.iter().map(|c| c.nnz()).sum(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.nnz() == 0
    }

    pub fn get(&self, r: usize, c: usize) -> Scalar {
        match &self.storage {
            Storage::Dense(d) => d[r * self.cols + c].clone(),
            Storage::Sparse(cols) => cols[c].get(r).cloned().unwrap_or_else(|| self.field.zero()),
        }
    }

    pub fn column(&self, c: usize) -> SparseVec {
        match &self.storage {
            Storage::Dense(d) => SparseVec::from_sorted_unchecked(
                (0..self.rows)
                    .filter_map(|r| {
                        let v = &d[r * self.cols + c];
                        (!v.is_zero()).then(|| (r, v.clone()))
                    })
                    .collect(),
            ),
            Storage::Sparse(cols) => cols[c].clone(),
        }
    }

    pub fn columns(&self) -> Vec<SparseVec> {
        match &self.storage {
            Storage::Sparse(cols) => cols.clone(),
            Storage::Dense(_) => (0..self.cols).map(|c| self.column(c)).collect(),
        }
    }

    pub fn dense_rows(&self) -> Vec<Vec<Scalar>> {
        match &self.storage {
            Storage::Dense(d) => d.chunks(self.cols.max(1)).take(self.rows).map(|r| r.to_vec()).collect(),
            Storage::Sparse(cols) => {
                let mut rows = vec![vec![self.field.zero(); self.cols]; self.rows];
                for (c, col) in cols.iter().enumerate() {
                    for (r, v) in col.iter() {
                        rows[*r][c] = v.clone();
                    }
                }
                rows
            }
        }
    }

    pub fn to_triplets(&self) -> Vec<(usize, usize, Scalar)> {
        let mut out = Vec::new();
        for c in 0..self.cols {
            for (r, v) in self.column(c).iter() {
                out.push((*r, c, v.clone()));
            }
        }
        out.sort_by_key(|(r, c, _)| (*r, *c));
        out
    }

    /// `m · x` for a column vector `x`.
    pub fn mul_vec(&self, x: &SparseVec) -> SparseVec {
        let mut acc = SparseVec::new();
        for (j, c) in x.iter() {
            if *j < self.cols {
                acc.axpy(c, &self.column(*j));
            }
        }
        acc
    }

    /// `v · m` for a row vector `v`.
    pub fn left_mul_vec(&self, v: &SparseVec) -> SparseVec {
        let entries = (0..self.cols)
            .map(|c| (c, v.dot(&self.column(c), self.field)))
            .filter(|(_, x)| !x.is_zero())
            .collect();
        SparseVec::from_sorted_unchecked(entries)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot compose {}×{} after {}×{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let cols = (0..other.cols).map(|c| self.mul_vec(&other.column(c))).collect();
        Ok(Matrix::from_columns_unchecked(self.field, self.rows, cols))
    }

    pub fn transpose(&self) -> Matrix {
        let mut per_col: Vec<Vec<(usize, Scalar)>> = vec![Vec::new(); self.rows];
        for c in 0..self.cols {
            for (r, v) in self.column(c).iter() {
                per_col[*r].push((c, v.clone()));
            }
        }
        let cols = per_col.into_iter().map(SparseVec::from_sorted_unchecked).collect();
        Matrix::from_columns_unchecked(self.field, self.cols, cols)
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Dimension("matrix sum of different shapes".into()));
        }
        let cols = (0..self.cols)
            .map(|c| self.column(c).add(&other.column(c), self.field))
            .collect();
        Ok(Matrix::from_columns_unchecked(self.field, self.rows, cols))
    }

    pub fn scale(&self, s: &Scalar) -> Matrix {
        let cols = self.columns().iter().map(|c| c.scale(s)).collect();
        Matrix::from_columns_unchecked(self.field, self.rows, cols)
    }

    /// Column reduction with lowest-index pivots, tracking column combinations.
    ///
    /// Returns the echelon of reduced columns (payload = combination of
    /// original columns) and the canonical kernel basis.
    fn column_reduce(&self, want_kernel: bool) -> (Echelon, Vec<SparseVec>) {
        let mut ech = Echelon::new(self.field);
        let mut kernel = Vec::new();
        for j in 0..self.cols {
            let col = self.column(j);
            let (res, acc) = ech.reduce(&col);
            if res.is_zero() {
                if want_kernel {
                    let mut k = SparseVec::unit(j, self.field);
                    k.axpy(&self.field.from_i64(-1), &acc);
                    kernel.push(k);
                }
            } else {
                let mut p = SparseVec::unit(j, self.field);
                p.axpy(&self.field.from_i64(-1), &acc);
                ech.insert_reduced(res, p);
            }
        }
        (ech, kernel)
    }

    pub fn rank(&self) -> usize {
        match &self.storage {
            Storage::Dense(_) => dense::rank(self.field, self.dense_rows(), self.cols),
            Storage::Sparse(_) => self.column_reduce(false).0.len(),
        }
    }

    /// Canonical basis of the null space: for each free column `j` (a column
    /// in the span of the columns before it) the unique kernel vector with a 1
    /// at `j` and zeros at all other free columns.
    pub fn kernel_basis(&self) -> Vec<SparseVec> {
        match &self.storage {
            Storage::Dense(_) => dense::kernel(self.field, self.dense_rows(), self.cols)
                .iter()
                .map(|v| SparseVec::from_dense(v))
                .collect(),
            Storage::Sparse(_) => self.column_reduce(true).1,
        }
    }

    /// Basis of the column space, reduced (not the original columns).
    pub fn image_echelon(&self) -> Echelon {
        self.column_reduce(false).0
    }

    pub fn solve(&self, b: &SparseVec) -> Result<Solution> {
        if b.max_index().is_some_and(|m| m >= self.rows) {
            return Err(Error::Dimension(format!(
                "right-hand side longer than the {} rows",
                self.rows
            )));
        }
        if !b.all_in_field(self.field) {
            return Err(Error::FieldMismatch {
                expected: self.field,
                found: b.iter().next().map(|(_, v)| v.field()).unwrap_or(self.field),
            });
        }
        let particular = match &self.storage {
            Storage::Dense(_) => dense::solve(
                self.field,
                self.dense_rows(),
                self.cols,
                &b.to_dense(self.rows, self.field),
            )
            .map(|x| SparseVec::from_dense(&x)),
            Storage::Sparse(_) => {
                let (ech, _) = self.column_reduce(false);
                let (res, acc) = ech.reduce(b);
                res.is_zero().then_some(acc)
            }
        };
        match particular {
            Some(x) => Ok(Solution::Particular(x)),
            None => {
                let witness = self
                    .transpose()
                    .kernel_basis()
                    .into_iter()
                    .find(|v| !v.dot(b, self.field).is_zero())
                    .ok_or_else(|| Error::Internal("inconsistent system without witness".into()))?;
                Ok(Solution::Inconsistent { witness })
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp() -> Field {
        Field::Prime(101)
    }

    #[test]
    fn empty_and_identity() {
        assert_eq!(Matrix::zeros(fp(), 0, 0).rank(), 0);
        assert_eq!(Matrix::identity(fp(), 3).rank(), 3);
        assert!(Matrix::identity(fp(), 3).kernel_basis().is_empty());
        assert_eq!(Matrix::zeros(fp(), 2, 3).kernel_basis().len(), 3);
    }

    #[test]
    fn mixed_fields_rejected() {
        let cols = vec![SparseVec::unit(0, Field::Prime(7))];
        assert!(matches!(
            Matrix::from_columns(fp(), 1, cols),
            Err(Error::FieldMismatch { .. })
        ));
    }

    #[test]
    fn solve_identity_and_inconsistent() {
        let b = SparseVec::from_entries(vec![(0, fp().from_i64(3)), (2, fp().from_i64(5))]);
        assert_eq!(
            Matrix::identity(fp(), 3).solve(&b).unwrap(),
            Solution::Particular(b.clone())
        );
        match Matrix::zeros(fp(), 3, 2).solve(&b).unwrap() {
            Solution::Inconsistent { witness } => assert!(!witness.dot(&b, fp()).is_zero()),
            other => panic!("expected inconsistency, got {other:?}"),
        }
        assert!(Matrix::identity(fp(), 2).solve(&b).is_err());
    }

    #[test]
    fn dense_and_sparse_paths_agree() {
        let m = Matrix::from_i64_rows(fp(), &[&[1, 2, 3, 4], &[2, 4, 6, 8], &[0, 1, 1, 0]]);
        let mut d = m.clone();
        d.make_dense();
        let mut s = m.clone();
        s.make_sparse();
        assert_eq!(d.rank(), 2);
        assert_eq!(s.rank(), 2);
        assert_eq!(d.kernel_basis(), s.kernel_basis());
        let b = m.mul_vec(&SparseVec::from_entries(vec![(3, fp().one())]));
        assert_eq!(d.solve(&b).unwrap(), s.solve(&b).unwrap());
    }
}
