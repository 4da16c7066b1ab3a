//! Dense Gaussian elimination over F_q.

use crate::field::{FieldElement, FieldSpec};

pub type Row = Vec<FieldElement>;

/// Reduced row echelon form of a row set: nonzero rows only, each pivot 1
/// and the only nonzero entry of its column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Echelon {
    pub rows: Vec<Row>,
    pub pivots: Vec<usize>,
    pub ncols: usize,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Residual of `v` after eliminating every pivot column.
    pub fn reduce(&self, field: &FieldSpec, v: &[FieldElement]) -> Row {
        let mut v = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let c = v[p];
            if !c.is_zero() {
                axpy(field, &mut v, field.neg(c), row);
            }
        }
        v
    }

    pub fn contains(&self, field: &FieldSpec, v: &[FieldElement]) -> bool {
        self.reduce(field, v).iter().all(|c| c.is_zero())
    }
}

/// `dst += s * src`.
#[inline]
pub fn axpy(field: &FieldSpec, dst: &mut [FieldElement], s: FieldElement, src: &[FieldElement]) {
    if s.is_zero() {
        return;
    }
    for (d, &x) in dst.iter_mut().zip(src) {
        if !x.is_zero() {
            *d = field.add(*d, field.mul(s, x));
        }
    }
}

pub fn rref(field: &FieldSpec, rows: &[Row], ncols: usize) -> Echelon {
    let mut m: Vec<Row> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        let Some(sel) = (r..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(r, sel);
        let inv = field.inv(m[r][col]).expect("pivot is nonzero");
        for x in m[r].iter_mut() {
            *x = field.mul(*x, inv);
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[col].is_zero() {
                let c = field.neg(row[col]);
                axpy(field, row, c, &pivot_row);
            }
        }
        pivots.push(col);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    m.truncate(r);
    Echelon {
        rows: m,
        pivots,
        ncols,
    }
}

pub fn rank(field: &FieldSpec, rows: &[Row], ncols: usize) -> usize {
    rref(field, rows, ncols).rank()
}

/// Basis of { v : <row, v> = 0 for every row }.
pub fn null_space(field: &FieldSpec, rows: &[Row], ncols: usize) -> Vec<Row> {
    let ech = rref(field, rows, ncols);
    let mut is_pivot = vec![false; ncols];
    for &p in &ech.pivots {
        is_pivot[p] = true;
    }
    (0..ncols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![field.zero(); ncols];
            v[free] = field.one();
            for (row, &p) in ech.rows.iter().zip(&ech.pivots) {
                v[p] = field.neg(row[free]);
            }
            v
        })
        .collect()
}

pub fn transpose(rows: &[Row], ncols: usize) -> Vec<Row> {
    (0..ncols).map(|c| rows.iter().map(|r| r[c]).collect()).collect()
}

/// Basis of the coefficient vectors c with sum c_i rows_i = 0.
pub fn left_kernel(field: &FieldSpec, rows: &[Row], ncols: usize) -> Vec<Row> {
    let t = transpose(rows, ncols);
    null_space(field, &t, rows.len())
}

/// Some x with A x = b, where A is given by its rows (each of length `ncols`).
pub fn solve(field: &FieldSpec, a: &[Row], ncols: usize, b: &[FieldElement]) -> Option<Row> {
    let aug: Vec<Row> = a
        .iter()
        .zip(b)
        .map(|(row, &bi)| {
            let mut r = row.clone();
            r.push(bi);
            r
        })
        .collect();
    let ech = rref(field, &aug, ncols + 1);
    if ech.pivots.last() == Some(&ncols) {
        return None;
    }
    let mut x = vec![field.zero(); ncols];
    for (row, &p) in ech.rows.iter().zip(&ech.pivots) {
        x[p] = row[ncols];
    }
    Some(x)
}

/// Coefficients c with sum c_i rows_i = target, if target is in the span.
pub fn express(field: &FieldSpec, rows: &[Row], ncols: usize, target: &[FieldElement]) -> Option<Row> {
    let t = transpose(rows, ncols);
    solve(field, &t, rows.len(), target)
}

pub fn same_row_space(field: &FieldSpec, a: &[Row], b: &[Row], ncols: usize) -> bool {
    rref(field, a, ncols) == rref(field, b, ncols)
}
