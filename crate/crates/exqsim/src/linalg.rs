// Copyright 2026 the exqsim developers
// SPDX-License-Identifier: Apache-2.0

//! Small dense complex matrices.
//!
//! The spaces in this crate top out at 2^9 = 512 dimensions and most matrix
//! work happens on 2x2 and 4x4 logical blocks, so a plain row-major buffer
//! is all that is needed.

use num_complex::Complex64;

pub type C64 = Complex64;

pub const ZERO: C64 = Complex64::new(0.0, 0.0);
pub const ONE: C64 = Complex64::new(1.0, 0.0);
pub const I: C64 = Complex64::new(0.0, 1.0);

/// Row-major complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct CMat {
    pub rows: usize,
    pub cols: usize,
    data: Vec<C64>,
}

impl CMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMat {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = CMat::zeros(n, n);
        for k in 0..n {
            m[(k, k)] = ONE;
        }
        m
    }

    pub fn from_rows(rows: &[&[C64]]) -> Self {
        let r = rows.len();
        let c = rows[0].len();
        let mut m = CMat::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c);
            for (j, v) in row.iter().enumerate() {
                m[(i, j)] = *v;
            }
        }
        m
    }

    /// Build a matrix whose j-th column is `cols[j]`.
    pub fn from_cols(cols: &[Vec<C64>]) -> Self {
        let c = cols.len();
        let r = cols[0].len();
        let mut m = CMat::zeros(r, c);
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), r);
            for i in 0..r {
                m[(i, j)] = col[i];
            }
        }
        m
    }

    pub fn col(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn mul(&self, other: &CMat) -> CMat {
        assert_eq!(self.cols, other.rows);
        let mut out = CMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn dagger(&self) -> CMat {
        let mut out = CMat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn transpose(&self) -> CMat {
        let mut out = CMat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)];
            }
        }
        out
    }

    pub fn scale(&self, s: C64) -> CMat {
        let mut out = self.clone();
        for v in &mut out.data {
            *v *= s;
        }
        out
    }

    pub fn add(&self, other: &CMat) -> CMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (v, w) in out.data.iter_mut().zip(&other.data) {
            *v += w;
        }
        out
    }

    pub fn sub(&self, other: &CMat) -> CMat {
        self.add(&other.scale(-ONE))
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|k| self[(k, k)]).sum()
    }

    pub fn kron(&self, other: &CMat) -> CMat {
        let mut out = CMat::zeros(self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self[(i, j)];
                if a == ZERO {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        out[(i * other.rows + k, j * other.cols + l)] = a * other[(k, l)];
                    }
                }
            }
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn abs_sum(&self) -> f64 {
        self.data.iter().map(|v| v.norm()).sum()
    }

    pub fn frobenius_sq(&self) -> f64 {
        self.data.iter().map(|v| v.norm_sqr()).sum()
    }

    pub fn max_abs_diff(&self, other: &CMat) -> f64 {
        self.sub(other).max_abs()
    }

    /// Deviation of `self` from unitarity, max |U^H U - I|.
    pub fn unitarity_deviation(&self) -> f64 {
        self.dagger()
            .mul(self)
            .max_abs_diff(&CMat::identity(self.cols))
    }

    /// Global phase that best matches `self` onto `target` in the Frobenius
    /// sense: the phase of tr(target^H self).
    pub fn alignment_phase(&self, target: &CMat) -> C64 {
        let t = target.dagger().mul(self).trace();
        let n = t.norm();
        if n < 1e-300 {
            ONE
        } else {
            t / n
        }
    }

    /// `self` rescaled so its Frobenius-optimal global phase against
    /// `target` is one.
    pub fn phase_aligned_to(&self, target: &CMat) -> CMat {
        let lam = self.alignment_phase(target);
        self.scale(lam.conj())
    }
}

impl std::ops::Index<(usize, usize)> for CMat {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

pub fn c(re: f64, im: f64) -> C64 {
    Complex64::new(re, im)
}

pub fn cr(re: f64) -> C64 {
    Complex64::new(re, 0.0)
}
