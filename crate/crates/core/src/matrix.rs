// Copyright 2026 The photonic-shor Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! Small dense complex matrices.
//!
//! Mode counts on the chip stay in the tens, so a row-major `Vec` is all
//! that is needed here.

use std::ops::{Index, IndexMut, Mul};

use num_complex::Complex64;

/// Row-major dense complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ComplexMatrix {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Builds a matrix from row slices. Panics if the rows are ragged.
    pub fn from_rows<R: AsRef<[Complex64]>>(rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            assert_eq!(r.len(), cols, "ragged rows");
            data.extend_from_slice(r);
        }
        ComplexMatrix {
            rows: rows.len(),
            cols,
            data,
        }
    }

    /// Builds a matrix from real row slices.
    pub fn from_real_rows<R: AsRef<[f64]>>(rows: &[R]) -> Self {
        let complex: Vec<Vec<Complex64>> = rows
            .iter()
            .map(|r| r.as_ref().iter().map(|&x| Complex64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&complex)
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

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    /// Matrix with rows and columns picked (with repetition) from `self`.
    pub fn select(&self, row_idx: &[usize], col_idx: &[usize]) -> Self {
        let mut out = Self::zeros(row_idx.len(), col_idx.len());
        for (i, &r) in row_idx.iter().enumerate() {
            for (j, &c) in col_idx.iter().enumerate() {
                out[(i, j)] = self[(r, c)];
            }
        }
        out
    }

    /// Largest elementwise deviation of `self† · self` from the identity.
    /// Returns infinity for non-square matrices.
    pub fn unitarity_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let product = &self.adjoint() * self;
        let mut worst = 0.0f64;
        for i in 0..self.rows {
            for j in 0..self.cols {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((product[(i, j)] - target).norm());
            }
        }
        worst
    }

    /// Largest elementwise distance to `other`. Shapes must agree.
    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.cols, rhs.rows, "inner dimensions differ");
        let mut out = ComplexMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        out
    }
}
