//! Dispersion relations: the linearized quantum film, the two-fluid
//! generalization with a roton term, the classical gravity-wave limit and the
//! phonon-roton excitation spectrum `E(k) = (Λ₁k² + Λ₂k⁴ + Λ₃k⁶)^{1/2}`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::params::{
    ClassicalCoefficients, FilmParameters, HydroParameters, PhysicalCoefficients, ANGSTROM,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DispersionError {
    #[error("E(k)² is negative at k = {0:e} 1/m; inputs are outside the model's validity window")]
    NegativeRadicand(f64),
    #[error(
        "4c_s²ħ²k₀² − 12Δ² = {0:e} is not positive; the roton minimum is not locally quadratic"
    )]
    NonPositiveDenominator(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    /// Built from `G, β, σ` and the linearized film equations.
    FromCoefficients,
    /// Built from `c_s, Δ, k₀` by imposing the phonon slope and the roton minimum.
    FromRotonInputs,
}

/// `E(k)²` in wavenumber form (`Λₙ`) and momentum form (`λₙ = Λₙ ħ^{-2n}`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DispersionModel {
    big_lambda: [f64; 3],
    lambda: [f64; 3],
    hbar: f64,
    provenance: Provenance,
}

impl DispersionModel {
    fn from_big_lambda(big_lambda: [f64; 3], hbar: f64, provenance: Provenance) -> Self {
        let h2 = hbar * hbar;
        let lambda = [
            big_lambda[0] / h2,
            big_lambda[1] / (h2 * h2),
            big_lambda[2] / (h2 * h2 * h2),
        ];
        Self {
            big_lambda,
            lambda,
            hbar,
            provenance,
        }
    }

    pub fn from_coefficients(c: &PhysicalCoefficients, p: &FilmParameters) -> Self {
        let (hbar, m, z0) = (p.hbar(), p.mass(), p.zeta0());
        let h2 = hbar * hbar;
        let big = [
            c.g * z0 * h2 / m,
            h2 * h2 / (4.0 * m * m) - c.beta * z0 * h2 / m,
            c.sigma * z0 * h2 / m,
        ];
        Self::from_big_lambda(big, hbar, Provenance::FromCoefficients)
    }

    pub fn from_roton_inputs(p: &FilmParameters) -> Self {
        let ch2 = (p.c_s() * p.hbar()).powi(2);
        let d2 = p.delta() * p.delta();
        let k2 = p.k0() * p.k0();
        let big = [
            ch2,
            3.0 * d2 / (k2 * k2) - 2.0 * ch2 / k2,
            ch2 / (k2 * k2) - 2.0 * d2 / (k2 * k2 * k2),
        ];
        Self::from_big_lambda(big, p.hbar(), Provenance::FromRotonInputs)
    }

    /// `Λ₁, Λ₂, Λ₃` (J²m², J²m⁴, J²m⁶).
    pub fn big_lambda(&self) -> [f64; 3] {
        self.big_lambda
    }

    /// `λ₁, λ₂, λ₃` for `ε(p)² = λ₁p² + λ₂p⁴ + λ₃p⁶`.
    pub fn lambda(&self) -> [f64; 3] {
        self.lambda
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn energy_squared(&self, k: f64) -> f64 {
        let [l1, l2, l3] = self.big_lambda;
        let k2 = k * k;
        k2 * (l1 + k2 * (l2 + k2 * l3))
    }

    pub fn energy(&self, k: f64) -> Result<f64, DispersionError> {
        let e2 = self.energy_squared(k);
        if e2 < 0.0 {
            Err(DispersionError::NegativeRadicand(k))
        } else {
            Ok(e2.sqrt())
        }
    }

    /// `ε(p)` with `p = ħk` in momentum units.
    pub fn energy_of_momentum(&self, p: f64) -> Result<f64, DispersionError> {
        let [l1, l2, l3] = self.lambda;
        let p2 = p * p;
        let e2 = p2 * (l1 + p2 * (l2 + p2 * l3));
        if e2 < 0.0 {
            Err(DispersionError::NegativeRadicand(p / self.hbar))
        } else {
            Ok(e2.sqrt())
        }
    }

    /// First `k` in a uniform scan of `[0, k_max]` where `E²` turns negative.
    pub fn first_negative_radicand(&self, k_max: f64, samples: usize) -> Option<f64> {
        (0..=samples)
            .map(|i| k_max * i as f64 / samples as f64)
            .find(|&k| self.energy_squared(k) < 0.0)
    }
}

/// `ω²` of the linearized film equations for arbitrary `G, β, σ`.
pub fn quantum_omega_squared(c: &PhysicalCoefficients, p: &FilmParameters, k: f64) -> f64 {
    let (hbar, m, z0) = (p.hbar(), p.mass(), p.zeta0());
    let x = k * z0;
    let x2 = x * x;
    c.g / (m * z0) * x2
        + (hbar * hbar / (4.0 * m * m * z0.powi(4)) - c.beta / (m * z0.powi(3))) * x2 * x2
        + c.sigma / (m * z0.powi(5)) * x2 * x2 * x2
}

/// Two-fluid dispersion with the roton term, evaluated with the full `tanh`.
pub fn generalized_omega_squared(p: &FilmParameters, h: &HydroParameters, k: f64) -> f64 {
    let z0 = p.zeta0();
    (p.c_s().powi(2) * k / z0
        + h.q * h.gamma * k.powi(3) / h.rho
        + h.q * h.f_r * z0.powi(4) * k.powi(5))
        * (k * z0).tanh()
}

/// Classical surface waves, `(gk + γk³/ρ) tanh(kζ₀)`.
pub fn gravity_wave_omega_squared(gravity: f64, h: &HydroParameters, zeta0: f64, k: f64) -> f64 {
    (gravity * k + h.gamma * k.powi(3) / h.rho) * (k * zeta0).tanh()
}

/// Truncated long-wave polynomial with the classical coefficients.
pub fn classical_omega_squared(cc: &ClassicalCoefficients, zeta0: f64, k: f64) -> f64 {
    let x2 = (k * zeta0).powi(2);
    cc.g0 / zeta0 * x2 - cc.beta0 / zeta0.powi(3) * x2 * x2
        + cc.sigma0 / zeta0.powi(5) * x2 * x2 * x2
}

/// Phonon-roton energy from `c_s, Δ, k₀` alone.
pub fn excitation_energy(p: &FilmParameters, k: f64) -> Result<f64, DispersionError> {
    DispersionModel::from_roton_inputs(p).energy(k)
}

/// `Ẽ(k)/k_B = (Ak² + Bk⁴ + Ck⁶)^{1/2}` with `k` in Å⁻¹ and `Ẽ` in kelvin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DispersionTableCoefficients {
    /// K²Å²
    pub a: f64,
    /// K²Å⁴
    pub b: f64,
    /// K²Å⁶
    pub c: f64,
}

impl DispersionTableCoefficients {
    pub fn energy_kelvin(&self, k_per_angstrom: f64) -> Result<f64, DispersionError> {
        let k2 = k_per_angstrom * k_per_angstrom;
        let e2 = k2 * (self.a + k2 * (self.b + k2 * self.c));
        if e2 < 0.0 {
            Err(DispersionError::NegativeRadicand(k_per_angstrom / ANGSTROM))
        } else {
            Ok(e2.sqrt())
        }
    }
}

pub fn dispersion_table_coefficients(p: &FilmParameters) -> DispersionTableCoefficients {
    let a = (p.c_s() * p.hbar() / p.constants().k_b).powi(2) * 1e20;
    let d = p.delta_kelvin();
    let k = p.k0() * ANGSTROM;
    let k2 = k * k;
    DispersionTableCoefficients {
        a,
        b: 3.0 * d * d / (k2 * k2) - 2.0 * a / k2,
        c: a / (k2 * k2) - 2.0 * d * d / (k2 * k2 * k2),
    }
}

/// `m_r = ħ²k₀²Δ / (4c_s²ħ²k₀² − 12Δ²)`.
pub fn roton_effective_mass(p: &FilmParameters) -> Result<f64, DispersionError> {
    let hk2 = (p.hbar() * p.k0()).powi(2);
    let denom = 4.0 * p.c_s().powi(2) * hk2 - 12.0 * p.delta().powi(2);
    if denom <= 0.0 {
        return Err(DispersionError::NonPositiveDenominator(denom));
    }
    Ok(hk2 * p.delta() / denom)
}

/// `Δ + ħ²(k − k₀)²/(2m_r)`.
pub fn roton_expansion(p: &FilmParameters, k: f64) -> Result<f64, DispersionError> {
    let m_r = roton_effective_mass(p)?;
    Ok(p.delta() + (p.hbar() * (k - p.k0())).powi(2) / (2.0 * m_r))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub k_per_angstrom: f64,
    /// `None` where the radicand is negative.
    pub e_over_kb: Option<f64>,
}

pub const DEFAULT_TABLE_K_MAX: f64 = 2.5;
pub const DEFAULT_TABLE_POINTS: usize = 501;

/// `Ẽ(k)` on `points` evenly spaced wavenumbers in `[k_min, k_max]` Å⁻¹.
pub fn dispersion_table(
    t: &DispersionTableCoefficients,
    k_min: f64,
    k_max: f64,
    points: usize,
) -> Vec<TableRow> {
    let rows = points.max(1);
    (0..rows)
        .map(|i| {
            let k = if rows == 1 {
                k_min
            } else {
                k_min + (k_max - k_min) * i as f64 / (rows - 1) as f64
            };
            TableRow {
                k_per_angstrom: k,
                e_over_kb: t.energy_kelvin(k).ok(),
            }
        })
        .collect()
}
