//! Dense square and rectangular matrices over a [`Field`], plus matrices whose
//! entries are polynomials in one formal parameter.

use crate::error::{Error, Result};
use crate::linalg;
use crate::scalars::{Elem, Field};
use crate::univariate::UniPoly;

/// Row-major dense matrix. The field is supplied by the caller on every
/// operation so that matrices can serve directly as hash keys.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Elem>) -> Result<Matrix> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch { expected: rows * cols, got: data.len() });
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<Elem>>) -> Result<Matrix> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::DimensionMismatch { expected: c, got: row.len() });
            }
            data.extend(row);
        }
        Ok(Matrix { rows: r, cols: c, data })
    }

    pub fn zero(field: &Field, rows: usize, cols: usize) -> Matrix {
        Matrix { rows, cols, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: &Field, n: usize) -> Matrix {
        let mut m = Matrix::zero(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = field.one();
        }
        m
    }

    pub fn scalar(field: &Field, n: usize, c: &Elem) -> Matrix {
        let mut m = Matrix::zero(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = c.clone();
        }
        m
    }

    /// Permutation matrix sending basis vector `e_i` to `e_{images[i]}`.
    pub fn permutation(field: &Field, images: &[usize]) -> Result<Matrix> {
        let n = images.len();
        let mut seen = vec![false; n];
        let mut m = Matrix::zero(field, n, n);
        for (i, &j) in images.iter().enumerate() {
            if j >= n || seen[j] {
                return Err(Error::InvalidModule(format!("{:?} is not a permutation", images)));
            }
            seen[j] = true;
            m.data[j * n + i] = field.one();
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Elem {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Elem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Elem>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn entries(&self) -> &[Elem] {
        &self.data
    }

    pub fn mul(&self, field: &Field, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix product dimension mismatch");
        let mut out = Matrix::zero(field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if field.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if field.is_zero(b) {
                        continue;
                    }
                    let idx = i * other.cols + j;
                    out.data[idx] = field.add(&out.data[idx], &field.mul(a, b));
                }
            }
        }
        out
    }

    pub fn apply(&self, field: &Field, v: &[Elem]) -> Vec<Elem> {
        assert_eq!(self.cols, v.len(), "matrix-vector dimension mismatch");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(field.zero(), |acc, (a, x)| field.add(&acc, &field.mul(a, x)))
            })
            .collect()
    }

    pub fn sub(&self, field: &Field, other: &Matrix) -> Matrix {
        let data = self.data.iter().zip(&other.data).map(|(a, b)| field.sub(a, b)).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn is_identity(&self, field: &Field) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let x = self.get(i, j);
                    if i == j {
                        field.is_one(x)
                    } else {
                        field.is_zero(x)
                    }
                })
            })
    }

    pub fn rank(&self, field: &Field) -> usize {
        linalg::rank(field, &self.to_rows(), self.cols)
    }

    pub fn inverse(&self, field: &Field) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::Singular);
        }
        let n = self.rows;
        let mut aug: Vec<Vec<Elem>> = (0..n)
            .map(|i| {
                let mut row = self.row(i).to_vec();
                row.extend((0..n).map(|j| if i == j { field.one() } else { field.zero() }));
                row
            })
            .collect();
        let pivots = linalg::rref(field, &mut aug, 2 * n);
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::Singular);
        }
        let rows = aug.into_iter().map(|r| r[n..].to_vec()).collect();
        Matrix::from_rows(rows)
    }

    pub fn pow(&self, field: &Field, e: u64) -> Matrix {
        let mut acc = Matrix::identity(field, self.rows);
        for _ in 0..e {
            acc = acc.mul(field, self);
        }
        acc
    }

    /// When every row has exactly one nonzero entry, returns `(column, value)`
    /// per row.
    pub fn monomial_rows(&self, field: &Field) -> Option<Vec<(usize, Elem)>> {
        (0..self.rows)
            .map(|i| {
                let mut nz = self.row(i).iter().enumerate().filter(|(_, x)| !field.is_zero(x));
                let first = nz.next()?;
                if nz.next().is_some() {
                    return None;
                }
                Some((first.0, first.1.clone()))
            })
            .collect()
    }

    /// Re-expresses the entries in a larger field.
    pub fn embed(&self, from: &Field, to: &Field) -> Result<Matrix> {
        let data = self.data.iter().map(|x| to.embed(from, x)).collect::<Result<Vec<_>>>()?;
        Ok(Matrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn block_diagonal(field: &Field, blocks: &[Matrix]) -> Matrix {
        let n: usize = blocks.iter().map(|b| b.rows).sum();
        let mut m = Matrix::zero(field, n, n);
        let mut off = 0;
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    m.set(off + i, off + j, b.get(i, j).clone());
                }
            }
            off += b.rows;
        }
        m
    }
}

/// Square matrix whose entries are polynomials in a formal parameter `s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParamMatrix {
    n: usize,
    entries: Vec<UniPoly>,
}

impl ParamMatrix {
    pub fn new(n: usize, entries: Vec<UniPoly>) -> Result<ParamMatrix> {
        if entries.len() != n * n {
            return Err(Error::DimensionMismatch { expected: n * n, got: entries.len() });
        }
        Ok(ParamMatrix { n, entries })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &UniPoly {
        &self.entries[i * self.n + j]
    }

    /// Largest power of `s` occurring in any entry.
    pub fn s_degree(&self) -> usize {
        self.entries.iter().filter_map(UniPoly::degree).max().unwrap_or(0)
    }

    pub fn specialize(&self, field: &Field, s: &Elem) -> Matrix {
        let data = self.entries.iter().map(|e| e.eval(field, s)).collect();
        Matrix { rows: self.n, cols: self.n, data }
    }

    pub fn block_diagonal(blocks: &[ParamMatrix]) -> ParamMatrix {
        let n: usize = blocks.iter().map(|b| b.n).sum();
        let mut entries = vec![UniPoly::zero(); n * n];
        let mut off = 0;
        for b in blocks {
            for i in 0..b.n {
                for j in 0..b.n {
                    entries[(off + i) * n + off + j] = b.get(i, j).clone();
                }
            }
            off += b.n;
        }
        ParamMatrix { n, entries }
    }
}
