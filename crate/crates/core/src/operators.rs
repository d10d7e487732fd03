//! Sparse complex operators on a finite Hilbert space, with dense
//! conversion for desk-scale diagonalization and unitary evolution.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest dimension we will densify for eigen decompositions.
pub const DENSE_LIMIT: usize = 4096;

/// Row-major sparse complex matrix. Columns within a row are kept sorted
/// and duplicates merged.
#[derive(Debug, Clone)]
pub struct QOperator {
    dim: usize,
    rows: Vec<Vec<(usize, Complex64)>>,
}

impl QOperator {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            rows: vec![Vec::new(); dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let rows = (0..dim).map(|i| vec![(i, Complex64::new(1.0, 0.0))]).collect();
        Self { dim, rows }
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let rows = diag
            .iter()
            .enumerate()
            .map(|(i, &d)| vec![(i, Complex64::new(d, 0.0))])
            .collect();
        Self {
            dim: diag.len(),
            rows,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(|r| r.len()).sum()
    }

    /// Accumulate `value` into element (row, col).
    pub fn add_element(&mut self, row: usize, col: usize, value: Complex64) {
        if value == Complex64::new(0.0, 0.0) {
            return;
        }
        let r = &mut self.rows[row];
        match r.binary_search_by_key(&col, |&(c, _)| c) {
            Ok(idx) => r[idx].1 += value,
            Err(idx) => r.insert(idx, (col, value)),
        }
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        match self.rows[row].binary_search_by_key(&col, |&(c, _)| c) {
            Ok(idx) => self.rows[row][idx].1,
            Err(_) => Complex64::new(0.0, 0.0),
        }
    }

    pub fn row(&self, row: usize) -> &[(usize, Complex64)] {
        &self.rows[row]
    }

    /// Entries (row, value) of one column; linear scan over rows.
    pub fn column(&self, col: usize) -> Vec<(usize, Complex64)> {
        let mut out = Vec::new();
        for r in 0..self.dim {
            let v = self.get(r, col);
            if v.norm() != 0.0 {
                out.push((r, v));
            }
        }
        out
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.dim);
        self.rows
            .iter()
            .map(|r| r.iter().map(|&(c, a)| a * v[c]).sum())
            .collect()
    }

    pub fn scaled(&self, s: Complex64) -> Self {
        let rows = self
            .rows
            .iter()
            .map(|r| r.iter().map(|&(c, a)| (c, a * s)).collect())
            .collect();
        Self {
            dim: self.dim,
            rows,
        }
    }

    pub fn add(&self, other: &QOperator) -> Self {
        assert_eq!(self.dim, other.dim);
        let mut out = self.clone();
        for (i, r) in other.rows.iter().enumerate() {
            for &(c, a) in r {
                out.add_element(i, c, a);
            }
        }
        out
    }

    pub fn sub(&self, other: &QOperator) -> Self {
        self.add(&other.scaled(Complex64::new(-1.0, 0.0)))
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.dim);
        for (i, r) in self.rows.iter().enumerate() {
            for &(c, a) in r {
                out.add_element(c, i, a.conj());
            }
        }
        out
    }

    pub fn matmul(&self, other: &QOperator) -> Self {
        assert_eq!(self.dim, other.dim);
        let mut out = Self::zeros(self.dim);
        for (i, r) in self.rows.iter().enumerate() {
            for &(k, a) in r {
                for &(j, b) in &other.rows[k] {
                    out.add_element(i, j, a * b);
                }
            }
        }
        out
    }

    pub fn commutator(&self, other: &QOperator) -> Self {
        self.matmul(other).sub(&other.matmul(self))
    }

    pub fn max_abs(&self) -> f64 {
        self.rows
            .iter()
            .flat_map(|r| r.iter().map(|(_, a)| a.norm()))
            .fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &QOperator) -> f64 {
        self.sub(other).max_abs()
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.max_abs_diff(&self.adjoint()) < tol
    }

    pub fn to_dense(&self) -> Result<DMatrix<Complex64>> {
        if self.dim > DENSE_LIMIT {
            return Err(Error::TooLargeForDense(self.dim, DENSE_LIMIT));
        }
        let mut m = DMatrix::from_element(self.dim, self.dim, Complex64::new(0.0, 0.0));
        for (i, r) in self.rows.iter().enumerate() {
            for &(c, a) in r {
                m[(i, c)] = a;
            }
        }
        Ok(m)
    }

    /// Eigen decomposition assuming Hermiticity: returns (eigenvalues,
    /// column eigenvectors).
    pub fn hermitian_eigen(&self) -> Result<(Vec<f64>, DMatrix<Complex64>)> {
        let dense = self.to_dense()?;
        let eig = dense.symmetric_eigen();
        Ok((eig.eigenvalues.iter().copied().collect(), eig.eigenvectors))
    }
}

/// Unitary evolution exp(-i H t) |v> from a precomputed Hermitian eigen
/// decomposition of H.
pub struct HermitianPropagator {
    eigenvalues: Vec<f64>,
    eigenvectors: DMatrix<Complex64>,
}

impl HermitianPropagator {
    pub fn new(h: &QOperator) -> Result<Self> {
        let (eigenvalues, eigenvectors) = h.hermitian_eigen()?;
        Ok(Self {
            eigenvalues,
            eigenvectors,
        })
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn evolve(&self, v: &[Complex64], t: f64) -> Vec<Complex64> {
        let dim = self.eigenvalues.len();
        let vin = nalgebra::DVector::from_column_slice(v);
        let coeffs = self.eigenvectors.adjoint() * &vin;
        let phased = nalgebra::DVector::from_iterator(
            dim,
            coeffs
                .iter()
                .zip(&self.eigenvalues)
                .map(|(c, &e)| c * Complex64::from_polar(1.0, -e * t)),
        );
        let out = &self.eigenvectors * phased;
        out.iter().copied().collect()
    }

    /// Dense exp(-i H t) as a matrix.
    pub fn matrix(&self, t: f64) -> DMatrix<Complex64> {
        let dim = self.eigenvalues.len();
        let phases = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            dim,
            self.eigenvalues
                .iter()
                .map(|&e| Complex64::from_polar(1.0, -e * t)),
        ));
        &self.eigenvectors * phases * self.eigenvectors.adjoint()
    }
}
