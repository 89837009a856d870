//! Gaussian elimination over a [`Field`]: reduced row echelon form, rank,
//! nullspace and span membership.

use crate::scalars::{Elem, Field};

/// Reduces `rows` in place to reduced row echelon form and returns the pivot
/// columns. Zero rows are dropped.
pub fn rref(field: &Field, rows: &mut Vec<Vec<Elem>>, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r >= rows.len() {
            break;
        }
        let Some(found) = (r..rows.len()).find(|&i| !field.is_zero(&rows[i][col])) else {
            continue;
        };
        rows.swap(r, found);
        let inv = field.inv(&rows[r][col]).expect("pivot is nonzero");
        if !field.is_one(&inv) {
            for x in rows[r][col..].iter_mut() {
                *x = field.mul(x, &inv);
            }
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || field.is_zero(&row[col]) {
                continue;
            }
            let factor = row[col].clone();
            for j in col..ncols {
                if !field.is_zero(&pivot_row[j]) {
                    row[j] = field.sub(&row[j], &field.mul(&factor, &pivot_row[j]));
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

pub fn rank(field: &Field, rows: &[Vec<Elem>], ncols: usize) -> usize {
    let mut m = rows.to_vec();
    rref(field, &mut m, ncols).len()
}

/// Basis of `{x : A x = 0}`, one vector per free column, in RREF-canonical form.
pub fn nullspace(field: &Field, rows: &[Vec<Elem>], ncols: usize) -> Vec<Vec<Elem>> {
    let mut m = rows.to_vec();
    let pivots = rref(field, &mut m, ncols);
    let mut is_pivot = vec![false; ncols];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    (0..ncols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![field.zero(); ncols];
            v[free] = field.one();
            for (row, &pc) in m.iter().zip(&pivots) {
                v[pc] = field.neg(&row[free]);
            }
            v
        })
        .collect()
}

/// Incremental row space, used for span membership tests.
#[derive(Clone, Debug)]
pub struct RowSpace {
    field: Field,
    ncols: usize,
    /// Rows in echelon form, each with its pivot column (pivot entry is 1).
    rows: Vec<(usize, Vec<Elem>)>,
}

impl RowSpace {
    pub fn new(field: &Field, ncols: usize) -> Self {
        RowSpace { field: field.clone(), ncols, rows: Vec::new() }
    }

    pub fn dimension(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, v: &[Elem]) -> Vec<Elem> {
        let f = &self.field;
        let mut v = v.to_vec();
        for (pc, row) in &self.rows {
            if f.is_zero(&v[*pc]) {
                continue;
            }
            let factor = v[*pc].clone();
            for j in 0..self.ncols {
                if !f.is_zero(&row[j]) {
                    v[j] = f.sub(&v[j], &f.mul(&factor, &row[j]));
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[Elem]) -> bool {
        self.reduce(v).iter().all(|x| self.field.is_zero(x))
    }

    /// Adds `v`; returns false when it was already in the span.
    pub fn insert(&mut self, v: &[Elem]) -> bool {
        let f = self.field.clone();
        let r = self.reduce(v);
        let Some(pc) = r.iter().position(|x| !f.is_zero(x)) else {
            return false;
        };
        let inv = f.inv(&r[pc]).expect("nonzero");
        let r: Vec<Elem> = r.iter().map(|x| f.mul(x, &inv)).collect();
        self.rows.push((pc, r));
        true
    }
}

/// Solves `sum_j c_j columns[j] = target`, returning the coefficients when a
/// solution exists. Columns must be linearly independent for uniqueness.
pub fn solve_in_span(field: &Field, columns: &[Vec<Elem>], target: &[Elem]) -> Option<Vec<Elem>> {
    let nrows = target.len();
    let ncols = columns.len();
    // augmented system [columns | target]
    let mut m: Vec<Vec<Elem>> = (0..nrows)
        .map(|i| {
            let mut row: Vec<Elem> = columns.iter().map(|c| c[i].clone()).collect();
            row.push(target[i].clone());
            row
        })
        .collect();
    let pivots = rref(field, &mut m, ncols + 1);
    if pivots.last() == Some(&ncols) {
        return None;
    }
    let mut x = vec![field.zero(); ncols];
    for (row, &pc) in m.iter().zip(&pivots) {
        x[pc] = row[ncols].clone();
    }
    Some(x)
}
