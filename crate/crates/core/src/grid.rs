//! Periodic grids, field snapshots and FFT-based differentiation.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::params::DimensionlessCoefficients;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GridError {
    #[error("number of grid points must be a power of two, got {0}")]
    NotPowerOfTwo(usize),
    #[error("domain length must be positive and finite, got {0}")]
    BadLength(f64),
    #[error("field has {got} samples but the grid has {expected}")]
    LengthMismatch { expected: usize, got: usize },
}

/// Uniform periodic grid `ξ_j = −L/2 + j·L/n`, `j = 0..n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    n: usize,
    length: f64,
}

impl Grid {
    pub fn new(n: usize, length: f64) -> Result<Self, GridError> {
        if n < 2 || !n.is_power_of_two() {
            return Err(GridError::NotPowerOfTwo(n));
        }
        if !(length > 0.0 && length.is_finite()) {
            return Err(GridError::BadLength(length));
        }
        Ok(Self { n, length })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn spacing(&self) -> f64 {
        self.length / self.n as f64
    }

    pub fn point(&self, j: usize) -> f64 {
        -0.5 * self.length + j as f64 * self.spacing()
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n).map(|j| self.point(j)).collect()
    }

    /// Angular wavenumbers in FFT order. The Nyquist mode carries `−n/2`.
    pub fn wavenumbers(&self) -> Vec<f64> {
        let dk = 2.0 * PI / self.length;
        let n = self.n as isize;
        (0..n)
            .map(|j| if j < n / 2 { j } else { j - n } as f64 * dk)
            .collect()
    }

    /// Maps `x` into `[−L/2, L/2)`.
    pub fn wrap(&self, x: f64) -> f64 {
        let l = self.length;
        x - l * ((x + 0.5 * l) / l).floor()
    }
}

/// Dimensionless field `Ψ(ξ, τ)` on a periodic grid.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldState {
    pub grid: Grid,
    pub tau: f64,
    pub psi: Vec<Complex64>,
    pub scales: DimensionlessCoefficients,
}

impl FieldState {
    pub fn new(
        grid: Grid,
        tau: f64,
        psi: Vec<Complex64>,
        scales: DimensionlessCoefficients,
    ) -> Result<Self, GridError> {
        if psi.len() != grid.n() {
            return Err(GridError::LengthMismatch {
                expected: grid.n(),
                got: psi.len(),
            });
        }
        Ok(Self {
            grid,
            tau,
            psi,
            scales,
        })
    }

    pub fn density(&self) -> Vec<f64> {
        self.psi.iter().map(|z| z.norm_sqr()).collect()
    }

    /// `F = |Ψ|² − 1`, the surface deviation relative to `ζ₀`.
    pub fn deviation(&self) -> Vec<f64> {
        self.psi.iter().map(|z| z.norm_sqr() - 1.0).collect()
    }
}

/// Forward/inverse FFT pair with the grid's wavenumbers.
#[derive(Clone)]
pub struct Spectral {
    n: usize,
    kappa: Vec<f64>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for Spectral {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Spectral").field("n", &self.n).finish()
    }
}

impl Spectral {
    pub fn new(grid: &Grid) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            n: grid.n(),
            kappa: grid.wavenumbers(),
            forward: planner.plan_fft_forward(grid.n()),
            inverse: planner.plan_fft_inverse(grid.n()),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kappa(&self) -> &[f64] {
        &self.kappa
    }

    pub fn forward(&self, buf: &mut [Complex64]) {
        self.forward.process(buf);
    }

    /// Inverse transform including the `1/n` normalization.
    pub fn inverse(&self, buf: &mut [Complex64]) {
        self.inverse.process(buf);
        let s = 1.0 / self.n as f64;
        buf.iter_mut().for_each(|z| *z *= s);
    }

    /// Multiplier `(iκ)^order`; odd orders drop the Nyquist mode.
    pub fn derivative_symbol(&self, order: u32) -> Vec<Complex64> {
        let nyquist = self.n / 2;
        self.kappa
            .iter()
            .enumerate()
            .map(|(j, &k)| {
                if order % 2 == 1 && j == nyquist {
                    Complex64::new(0.0, 0.0)
                } else {
                    Complex64::new(0.0, k).powu(order)
                }
            })
            .collect()
    }

    /// Derivatives of a real periodic field for each requested order.
    pub fn derivatives(&self, f: &[f64], orders: &[u32]) -> Vec<Vec<f64>> {
        let mut hat: Vec<Complex64> = f.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        self.forward(&mut hat);
        orders
            .iter()
            .map(|&order| {
                let symbol = self.derivative_symbol(order);
                let mut buf: Vec<Complex64> = hat.iter().zip(&symbol).map(|(a, b)| a * b).collect();
                self.inverse(&mut buf);
                buf.into_iter().map(|z| z.re).collect()
            })
            .collect()
    }

    pub fn derivative(&self, f: &[f64], order: u32) -> Vec<f64> {
        self.derivatives(f, &[order]).pop().unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validates_size_and_length() {
        assert!(Grid::new(100, 1.0).is_err());
        assert!(Grid::new(1, 1.0).is_err());
        assert!(Grid::new(64, 0.0).is_err());
        assert!(Grid::new(64, f64::INFINITY).is_err());
        let g = Grid::new(64, 8.0).unwrap();
        assert_eq!(g.spacing(), 0.125);
        assert_eq!(g.point(0), -4.0);
        assert_eq!(g.point(32), 0.0);
    }

    #[test]
    fn wavenumbers_in_fft_order() {
        let g = Grid::new(8, 2.0 * PI).unwrap();
        assert_eq!(
            g.wavenumbers(),
            vec![0.0, 1.0, 2.0, 3.0, -4.0, -3.0, -2.0, -1.0]
        );
    }

    #[test]
    fn wrap_is_periodic() {
        let g = Grid::new(16, 10.0).unwrap();
        assert!((g.wrap(7.0) + 3.0).abs() < 1e-15);
        assert!((g.wrap(-5.0) + 5.0).abs() < 1e-15);
        assert!((g.wrap(5.0) + 5.0).abs() < 1e-15);
    }

    #[test]
    fn spectral_derivatives_of_trig_polynomial() {
        let g = Grid::new(64, 2.0 * PI).unwrap();
        let s = Spectral::new(&g);
        let x = g.points();
        let f: Vec<f64> = x
            .iter()
            .map(|&x| (3.0 * x).sin() + (5.0 * x).cos())
            .collect();
        let d = s.derivatives(&f, &[1, 2, 4]);
        for (j, &x) in x.iter().enumerate() {
            assert!((d[0][j] - (3.0 * (3.0 * x).cos() - 5.0 * (5.0 * x).sin())).abs() < 1e-11);
            assert!((d[1][j] - (-9.0 * (3.0 * x).sin() - 25.0 * (5.0 * x).cos())).abs() < 1e-10);
            assert!((d[2][j] - (81.0 * (3.0 * x).sin() + 625.0 * (5.0 * x).cos())).abs() < 1e-8);
        }
    }

    #[test]
    fn round_trip_is_identity() {
        let g = Grid::new(32, 3.0).unwrap();
        let s = Spectral::new(&g);
        let orig: Vec<Complex64> = (0..32)
            .map(|j| Complex64::new(j as f64, -(j as f64).sqrt()))
            .collect();
        let mut buf = orig.clone();
        s.forward(&mut buf);
        s.inverse(&mut buf);
        for (a, b) in buf.iter().zip(&orig) {
            assert!((a - b).norm() < 1e-12);
        }
    }
}
