//! Discretization substrate: periodic 1D grids, real and spinor fields,
//! central differences, discrete Fourier modes and quadrature.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Uniform periodic lattice on `[0, L)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D {
    n_sites: usize,
    length: f64,
}

impl Grid1D {
    pub fn new(n_sites: usize, length: f64) -> Result<Self> {
        if n_sites < 4 {
            return Err(Error::GridTooCoarse(n_sites));
        }
        if !(length > 0.0) {
            return Err(Error::NonPositiveLength(length));
        }
        Ok(Self { n_sites, length })
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn dx(&self) -> f64 {
        self.length / self.n_sites as f64
    }

    /// Coordinate of site `j`.
    pub fn x(&self, j: usize) -> f64 {
        j as f64 * self.dx()
    }

    /// Wavenumber of integer mode `n`: q_n = 2 pi n / L.
    pub fn wavenumber(&self, n: i64) -> f64 {
        2.0 * std::f64::consts::PI * n as f64 / self.length
    }

    /// Integer mode indices carried by the grid, n in (-N/2, N/2].
    pub fn mode_indices(&self) -> impl Iterator<Item = i64> + '_ {
        let n = self.n_sites as i64;
        (0..n).map(move |k| if k <= n / 2 { k } else { k - n })
    }

    pub fn same_grid(&self, other: &Grid1D) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::GridMismatch(self.n_sites, other.n_sites))
        }
    }
}

/// One real value per site.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    grid: Grid1D,
    values: Vec<f64>,
}

impl ScalarField {
    pub fn zeros(grid: Grid1D) -> Self {
        Self {
            grid,
            values: vec![0.0; grid.n_sites()],
        }
    }

    pub fn constant(grid: Grid1D, c: f64) -> Self {
        Self {
            grid,
            values: vec![c; grid.n_sites()],
        }
    }

    pub fn from_fn(grid: Grid1D, f: impl Fn(f64) -> f64) -> Self {
        let values = (0..grid.n_sites()).map(|j| f(grid.x(j))).collect();
        Self { grid, values }
    }

    pub fn from_values(grid: Grid1D, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.n_sites() {
            return Err(Error::GridMismatch(grid.n_sites(), values.len()));
        }
        Ok(Self { grid, values })
    }

    pub fn grid(&self) -> Grid1D {
        self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self {
            grid: self.grid,
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn zip_map(&self, other: &ScalarField, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        self.grid.same_grid(&other.grid)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(&a, &b)| f(a, b))
            .collect();
        Ok(Self {
            grid: self.grid,
            values,
        })
    }

    pub fn scaled(&self, s: f64) -> Self {
        self.map(|v| s * v)
    }

    pub fn add(&self, other: &ScalarField) -> Result<Self> {
        self.zip_map(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &ScalarField) -> Result<Self> {
        self.zip_map(other, |a, b| a - b)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Second-order central difference with periodic wraparound.
    pub fn central_derivative(&self) -> Self {
        let n = self.grid.n_sites();
        let inv2dx = 0.5 / self.grid.dx();
        let v = &self.values;
        let values = (0..n)
            .map(|j| (v[(j + 1) % n] - v[(j + n - 1) % n]) * inv2dx)
            .collect();
        Self {
            grid: self.grid,
            values,
        }
    }

    /// Compact 3-point second difference (the discrete Laplacian in 1D).
    pub fn second_derivative(&self) -> Self {
        let n = self.grid.n_sites();
        let inv_dx2 = 1.0 / (self.grid.dx() * self.grid.dx());
        let v = &self.values;
        let values = (0..n)
            .map(|j| (v[(j + 1) % n] - 2.0 * v[j] + v[(j + n - 1) % n]) * inv_dx2)
            .collect();
        Self {
            grid: self.grid,
            values,
        }
    }

    /// Riemann sum of f over one period.
    pub fn integrate(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.grid.dx()
    }

    /// Discrete Fourier amplitudes c_n at q_n = 2 pi n / L, n in (-N/2, N/2],
    /// with f_j = sum_n c_n exp(i q_n x_j).
    pub fn dft_modes(&self) -> Vec<(f64, Complex64)> {
        dft_modes_complex(
            self.grid,
            &self
                .values
                .iter()
                .map(|&v| Complex64::new(v, 0.0))
                .collect::<Vec<_>>(),
        )
    }
}

/// Forward DFT in the mode ordering n in (-N/2, N/2].
pub fn dft_modes_complex(grid: Grid1D, samples: &[Complex64]) -> Vec<(f64, Complex64)> {
    let n = grid.n_sites();
    let norm = 1.0 / n as f64;
    grid.mode_indices()
        .map(|mode| {
            let q = grid.wavenumber(mode);
            let mut acc = Complex64::new(0.0, 0.0);
            for (j, &f) in samples.iter().enumerate() {
                let phase = -q * grid.x(j);
                acc += f * Complex64::from_polar(1.0, phase);
            }
            (q, acc * norm)
        })
        .collect()
}

/// Inverse of [`ScalarField::dft_modes`]; drops the imaginary residue.
pub fn inverse_dft(grid: Grid1D, modes: &[(f64, Complex64)]) -> ScalarField {
    let values = (0..grid.n_sites())
        .map(|j| {
            let x = grid.x(j);
            modes
                .iter()
                .map(|&(q, c)| (c * Complex64::from_polar(1.0, q * x)).re)
                .sum()
        })
        .collect();
    ScalarField {
        grid,
        values,
    }
}

/// Two-component complex wavefunction per site (Pauli spinor).
#[derive(Debug, Clone, PartialEq)]
pub struct SpinorField {
    grid: Grid1D,
    values: Vec<[Complex64; 2]>,
}

impl SpinorField {
    pub fn zeros(grid: Grid1D) -> Self {
        Self {
            grid,
            values: vec![[Complex64::new(0.0, 0.0); 2]; grid.n_sites()],
        }
    }

    pub fn from_fn(grid: Grid1D, f: impl Fn(f64) -> [Complex64; 2]) -> Self {
        let values = (0..grid.n_sites()).map(|j| f(grid.x(j))).collect();
        Self { grid, values }
    }

    /// Plane wave exp(ikx) times a fixed spinor, unit density.
    pub fn plane_wave(grid: Grid1D, k: f64, chi: [Complex64; 2]) -> Self {
        Self::from_fn(grid, |x| {
            let ph = Complex64::from_polar(1.0, k * x);
            [chi[0] * ph, chi[1] * ph]
        })
    }

    pub fn grid(&self) -> Grid1D {
        self.grid
    }

    pub fn values(&self) -> &[[Complex64; 2]] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [[Complex64; 2]] {
        &mut self.values
    }

    pub fn map(&self, f: impl Fn([Complex64; 2]) -> [Complex64; 2]) -> Self {
        Self {
            grid: self.grid,
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn central_derivative(&self) -> Self {
        let n = self.grid.n_sites();
        let inv2dx = 0.5 / self.grid.dx();
        let v = &self.values;
        let values = (0..n)
            .map(|j| {
                let up = (v[(j + 1) % n][0] - v[(j + n - 1) % n][0]) * inv2dx;
                let dn = (v[(j + 1) % n][1] - v[(j + n - 1) % n][1]) * inv2dx;
                [up, dn]
            })
            .collect();
        Self {
            grid: self.grid,
            values,
        }
    }

    /// Integral of psi^dag psi.
    pub fn norm_squared(&self) -> f64 {
        self.values
            .iter()
            .map(|v| v[0].norm_sqr() + v[1].norm_sqr())
            .sum::<f64>()
            * self.grid.dx()
    }

    pub fn normalized(&self) -> Self {
        let n = self.norm_squared().sqrt();
        self.map(|v| [v[0] / n, v[1] / n])
    }

    /// Grid 2-norm of the pointwise difference.
    pub fn distance(&self, other: &SpinorField) -> Result<f64> {
        self.grid.same_grid(&other.grid)?;
        let s: f64 = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a[0] - b[0]).norm_sqr() + (a[1] - b[1]).norm_sqr())
            .sum();
        Ok((s * self.grid.dx()).sqrt())
    }

    pub fn sub(&self, other: &SpinorField) -> Result<Self> {
        self.grid.same_grid(&other.grid)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| [a[0] - b[0], a[1] - b[1]])
            .collect();
        Ok(Self {
            grid: self.grid,
            values,
        })
    }
}

/// Least-squares slope of log(y) against log(x).
pub fn log_log_slope(xs: &[f64], ys: &[f64]) -> f64 {
    assert_eq!(xs.len(), ys.len());
    let lx: Vec<f64> = xs.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|v| v.ln()).collect();
    linear_fit(&lx, &ly).0
}

/// Least-squares (slope, intercept).
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (&x, &y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    #[test]
    fn grid_construction() {
        let g = Grid1D::new(8, 8.0).unwrap();
        assert_eq!(g.dx(), 1.0);
        assert_eq!(g.x(3), 3.0);
        let g = Grid1D::new(4, 2.0 * PI).unwrap();
        assert_abs_diff_eq!(g.dx(), PI / 2.0, epsilon = 1e-15);
        assert!(Grid1D::new(3, 1.0).is_err());
        assert!(Grid1D::new(8, 0.0).is_err());
        assert!(Grid1D::new(8, -1.0).is_err());
    }

    #[test]
    fn derivative_of_constant_is_zero() {
        let g = Grid1D::new(16, 3.0).unwrap();
        let f = ScalarField::constant(g, 4.2);
        assert_eq!(f.central_derivative().max_abs(), 0.0);
    }

    #[test]
    fn derivative_of_sine_matches_analytic() {
        let g = Grid1D::new(256, 5.0).unwrap();
        let q = 2.0 * PI / 5.0;
        let f = ScalarField::from_fn(g, |x| (q * x).sin());
        let df = f.central_derivative();
        let exact = ScalarField::from_fn(g, |x| q * (q * x).cos());
        let err = df.sub(&exact).unwrap().max_abs();
        // O(dx^2) bound with the leading q^3 dx^2 / 6 coefficient
        assert!(err < q.powi(3) * g.dx() * g.dx() / 6.0 * 1.1);
    }

    #[test]
    fn derivative_stencil_eigenvalue_on_plane_wave() {
        let g = Grid1D::new(32, 2.0 * PI).unwrap();
        let q = g.wavenumber(5);
        let psi = SpinorField::plane_wave(g, q, [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.5)]);
        let dpsi = psi.central_derivative();
        let lambda = Complex64::new(0.0, (q * g.dx()).sin() / g.dx());
        for (d, p) in dpsi.values().iter().zip(psi.values()) {
            assert!((d[0] - lambda * p[0]).norm() < 1e-12);
            assert!((d[1] - lambda * p[1]).norm() < 1e-12);
        }
    }

    #[test]
    fn derivative_convergence_order_two() {
        let mut dxs = Vec::new();
        let mut errs = Vec::new();
        for &n in &[32usize, 64, 128, 256] {
            let g = Grid1D::new(n, 2.0 * PI).unwrap();
            let q = 3.0;
            let f = ScalarField::from_fn(g, |x| (q * x).sin());
            let exact = ScalarField::from_fn(g, |x| q * (q * x).cos());
            dxs.push(g.dx());
            errs.push(f.central_derivative().sub(&exact).unwrap().max_abs());
        }
        let slope = log_log_slope(&dxs, &errs);
        assert!((slope - 2.0).abs() < 0.1, "slope {slope}");
    }

    #[test]
    fn dft_constant_is_zero_mode_only() {
        let g = Grid1D::new(16, 4.0).unwrap();
        let f = ScalarField::constant(g, 2.5);
        for (q, c) in f.dft_modes() {
            if q == 0.0 {
                assert_abs_diff_eq!(c.re, 2.5, epsilon = 1e-12);
            } else {
                assert!(c.norm() < 1e-12);
            }
        }
    }

    #[test]
    fn dft_single_mode_peaks() {
        let g = Grid1D::new(32, 2.0 * PI).unwrap();
        let q1 = g.wavenumber(1);
        let f = ScalarField::from_fn(g, |x| (q1 * x).sin());
        let modes = f.dft_modes();
        for &(q, c) in &modes {
            if (q - q1).abs() < 1e-12 || (q + q1).abs() < 1e-12 {
                assert_abs_diff_eq!(c.norm(), 0.5, epsilon = 1e-12);
            } else {
                assert!(c.norm() < 1e-12);
            }
        }
    }

    #[test]
    fn dft_roundtrip_and_parseval() {
        use rand::prelude::*;
        let g = Grid1D::new(64, 3.7).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let f = ScalarField::from_values(g, (0..64).map(|_| rng.gen_range(-1.0..1.0)).collect())
            .unwrap();
        let modes = f.dft_modes();
        let back = inverse_dft(g, &modes);
        assert!(f.sub(&back).unwrap().max_abs() < 1e-12);
        let lhs: f64 = f.values().iter().map(|v| v * v).sum::<f64>() * g.dx();
        let rhs: f64 = modes.iter().map(|(_, c)| c.norm_sqr()).sum::<f64>() * g.length();
        assert_abs_diff_eq!(lhs, rhs, epsilon = 1e-10);
    }

    #[test]
    fn integrate_examples() {
        let g = Grid1D::new(128, 3.0).unwrap();
        assert_abs_diff_eq!(ScalarField::constant(g, 2.0).integrate(), 6.0, epsilon = 1e-12);
        let q = 2.0 * PI / 3.0;
        let s = ScalarField::from_fn(g, |x| (q * x).sin());
        assert!(s.integrate().abs() < 1e-12);
        let s2 = ScalarField::from_fn(g, |x| (q * x).sin().powi(2));
        assert_abs_diff_eq!(s2.integrate(), 1.5, epsilon = 1e-10);
    }

    #[test]
    fn integral_of_derivative_vanishes() {
        use rand::prelude::*;
        let g = Grid1D::new(48, 2.0).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let f = ScalarField::from_values(g, (0..48).map(|_| rng.gen_range(-2.0..2.0)).collect())
            .unwrap();
        assert!(f.central_derivative().integrate().abs() < 1e-12);
    }
}
