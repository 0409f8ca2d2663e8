//! Exact rational vectors and matrices: determinants, ranks, Gram volumes
//! and Cramer coefficients.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{dot, int, Rational};

/// Dense row-major rational matrix. Row `i` is `row(i)`, column `j` is `column(j)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RatMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Rational>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = int(1);
        }
        m
    }

    /// Builds a matrix from row vectors; `cols` is needed for the zero-row case.
    pub fn from_rows(rows: Vec<Vec<Rational>>, cols: usize) -> Result<Self> {
        let n_rows = rows.len();
        let mut data = Vec::with_capacity(n_rows * cols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != cols {
                return Err(Error::Dimension(format!(
                    "row {i} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            data.extend(row);
        }
        Ok(Self {
            rows: n_rows,
            cols,
            data,
        })
    }

    pub fn from_ints<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let rows = rows
            .iter()
            .map(|r| r.as_ref().iter().map(|&v| int(v)).collect())
            .collect();
        Self::from_rows(rows, cols).expect("ragged integer rows")
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

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Rational) {
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [Rational] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn entries(&self) -> &[Rational] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, rhs: &RatMatrix) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        let idx = i * out.cols + j;
                        out.data[idx] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        if v.len() != self.cols {
            return Err(Error::Dimension(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok((0..self.rows).map(|i| dot(self.row(i), v)).collect())
    }

    pub fn select_rows(&self, indices: &[usize]) -> Self {
        let mut data = Vec::with_capacity(indices.len() * self.cols);
        for &i in indices {
            data.extend_from_slice(self.row(i));
        }
        Self {
            rows: indices.len(),
            cols: self.cols,
            data,
        }
    }

    /// Horizontal concatenation `[self | rhs]`.
    pub fn hcat(&self, rhs: &RatMatrix) -> Result<Self> {
        if self.rows != rhs.rows {
            return Err(Error::Dimension(format!(
                "cannot concatenate {} rows with {} rows",
                self.rows, rhs.rows
            )));
        }
        let cols = self.cols + rhs.cols;
        let mut data = Vec::with_capacity(self.rows * cols);
        for i in 0..self.rows {
            data.extend_from_slice(self.row(i));
            data.extend_from_slice(rhs.row(i));
        }
        Ok(Self {
            rows: self.rows,
            cols,
            data,
        })
    }

    pub fn is_nonnegative(&self) -> bool {
        self.data.iter().all(|v| !v.is_negative())
    }

    /// Largest absolute entry (the entrywise infinity norm); zero when empty.
    pub fn max_abs(&self) -> Rational {
        crate::rational::max_abs(&self.data)
    }

    pub fn rank(&self) -> usize {
        row_echelon(self.to_rows(), self.cols).pivots.len()
    }
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for i in 0..self.rows {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str("[")?;
            for (j, v) in self.row(i).iter().enumerate() {
                if j > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{v}")?;
            }
            f.write_str("]")?;
        }
        f.write_str("]")
    }
}

pub(crate) struct Echelon {
    /// Rows in reduced row echelon form; only the first `pivots.len()` are nonzero.
    pub rows: Vec<Vec<Rational>>,
    pub pivots: Vec<usize>,
}

/// Gauss-Jordan elimination to reduced row echelon form.
pub(crate) fn row_echelon(mut rows: Vec<Vec<Rational>>, cols: usize) -> Echelon {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for v in rows[r].iter_mut() {
            if !v.is_zero() {
                *v *= &inv;
            }
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let factor = row[c].clone();
            for (v, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v -= &factor * p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    Echelon { rows, pivots }
}

/// Exact determinant by Gaussian elimination.
pub fn det(m: &RatMatrix) -> Result<Rational> {
    if !m.is_square() {
        return Err(Error::Dimension(format!(
            "determinant of a non-square {}x{} matrix",
            m.rows, m.cols
        )));
    }
    let n = m.rows;
    let mut a = m.to_rows();
    let mut result = int(1);
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return Ok(Rational::zero());
        };
        if p != c {
            a.swap(p, c);
            result = -result;
        }
        let pivot = a[c][c].clone();
        result *= &pivot;
        for i in c + 1..n {
            if a[i][c].is_zero() {
                continue;
            }
            let factor = &a[i][c] / &pivot;
            for j in c..n {
                if !a[c][j].is_zero() {
                    let delta = &factor * &a[c][j];
                    a[i][j] -= delta;
                }
            }
        }
    }
    Ok(result)
}

fn check_lengths(vectors: &[Vec<Rational>]) -> Result<usize> {
    let m = vectors.first().map_or(0, Vec::len);
    if let Some(v) = vectors.iter().find(|v| v.len() != m) {
        return Err(Error::Dimension(format!(
            "vectors of lengths {m} and {}",
            v.len()
        )));
    }
    Ok(m)
}

pub fn gram_matrix(vectors: &[Vec<Rational>]) -> RatMatrix {
    let k = vectors.len();
    let mut g = RatMatrix::zeros(k, k);
    for i in 0..k {
        for j in i..k {
            let v = dot(&vectors[i], &vectors[j]);
            g.set(j, i, v.clone());
            g.set(i, j, v);
        }
    }
    g
}

/// Squared k-volume of the parallelepiped spanned by `vectors`, i.e. `det(W Wᵀ)`
/// with the vectors as rows of `W`. Zero exactly when they are dependent.
pub fn gram_volume_sq(vectors: &[Vec<Rational>]) -> Result<Rational> {
    check_lengths(vectors)?;
    det(&gram_matrix(vectors))
}

/// Coefficients `λ` with `target = Σ λ_i basis_i`.
pub fn cramer_coefficients(basis: &[Vec<Rational>], target: &[Rational]) -> Result<Vec<Rational>> {
    let m = check_lengths(basis)?;
    if !basis.is_empty() && target.len() != m {
        return Err(Error::Dimension(format!(
            "target of length {} against basis vectors of length {m}",
            target.len()
        )));
    }
    let k = basis.len();
    // Normal equations G λ = B t, solved by Gauss-Jordan on [G | B t].
    let g = gram_matrix(basis);
    let mut aug: Vec<Vec<Rational>> = (0..k)
        .map(|i| {
            let mut row = g.row(i).to_vec();
            row.push(dot(&basis[i], target));
            row
        })
        .collect();
    let ech = row_echelon(core::mem::take(&mut aug), k + 1);
    if ech.pivots.len() < k || ech.pivots.iter().any(|&p| p >= k) {
        return Err(Error::RankDeficient);
    }
    let lambda: Vec<Rational> = (0..k).map(|i| ech.rows[i][k].clone()).collect();
    let mut recon = vec![Rational::zero(); target.len()];
    for (l, b) in lambda.iter().zip(basis) {
        for (r, x) in recon.iter_mut().zip(b) {
            *r += l * x;
        }
    }
    if recon.as_slice() != target {
        return Err(Error::NotInSpan);
    }
    Ok(lambda)
}
