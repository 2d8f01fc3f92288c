//! Physical inputs and every coefficient set derived from them.
//!
//! The film is described by the third-sound speed `c_s`, the roton gap `Δ`,
//! the roton wavenumber `k₀` and the ground-state superfluid thickness `ζ₀`.
//! From these we derive
//!
//! ```text
//! G = m c_s² / ζ₀
//! β = ħ²/(4mζ₀) + 2 m c_s²/(ζ₀ k₀²) − 3 m Δ²/(ζ₀ ħ² k₀⁴)
//! σ = m c_s²/(ζ₀ k₀⁴) − 2 m Δ²/(ζ₀ ħ² k₀⁶)
//! ```
//!
//! and the dimensionless `a₀..a₃` used by the spectral solver. The
//! hydrodynamic route (surface tension, superfluid fraction, roton force) and
//! the classical gravity-wave coefficients live here as well.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// One ångström in metres.
pub const ANGSTROM: f64 = 1e-10;

/// Film thickness used by the built-in presets when none is given.
pub const DEFAULT_ZETA0: f64 = 30.0 * ANGSTROM;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParamError {
    #[error("{field} must be {requirement}, got {value}")]
    OutOfRange {
        field: &'static str,
        requirement: &'static str,
        value: f64,
    },
}

fn require(
    field: &'static str,
    value: f64,
    ok: bool,
    requirement: &'static str,
) -> Result<(), ParamError> {
    if ok && value.is_finite() {
        Ok(())
    } else {
        Err(ParamError::OutOfRange {
            field,
            requirement,
            value,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalConstants {
    pub hbar: f64,
    pub k_b: f64,
    pub m_he4: f64,
}

impl PhysicalConstants {
    /// CODATA 2018 values; the helium mass is the ⁴He atomic mass.
    pub const CODATA_2018: Self = Self {
        hbar: 1.054_571_817e-34,
        k_b: 1.380_649e-23,
        m_he4: 6.646_473_1e-27,
    };

    pub fn new(hbar: f64, k_b: f64, m_he4: f64) -> Result<Self, ParamError> {
        require("hbar", hbar, hbar > 0.0, "positive")?;
        require("k_b", k_b, k_b > 0.0, "positive")?;
        require("m_he4", m_he4, m_he4 > 0.0, "positive")?;
        Ok(Self { hbar, k_b, m_he4 })
    }
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::CODATA_2018
    }
}

/// Roton gap with an explicit unit. Kelvin means `Δ/k_B`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "unit", content = "value", rename_all = "lowercase")]
pub enum GapEnergy {
    Kelvin(f64),
    Joules(f64),
}

impl GapEnergy {
    pub fn to_joules(self, constants: &PhysicalConstants) -> f64 {
        match self {
            GapEnergy::Kelvin(t) => t * constants.k_b,
            GapEnergy::Joules(e) => e,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ParamWarning {
    /// `c_s²ħ²k₀² ≤ 3Δ²`: the curvature at the roton minimum is not positive,
    /// so the effective roton mass is undefined. `E(k)` is still evaluable.
    RotonMassNotPositive { ratio: f64 },
}

impl fmt::Display for ParamWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamWarning::RotonMassNotPositive { ratio } => write!(
                f,
                "3Δ²/(c_s²ħ²k₀²) = {ratio:.6} ≥ 1: roton minimum is not locally quadratic-positive"
            ),
        }
    }
}

/// Measurable inputs describing one film. All values are SI internally.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FilmParameters {
    c_s: f64,
    delta: f64,
    k0: f64,
    zeta0: f64,
    zeta_n: f64,
    constants: PhysicalConstants,
}

impl FilmParameters {
    pub fn new(c_s: f64, gap: GapEnergy, k0: f64, zeta0: f64) -> Result<Self, ParamError> {
        Self::with_constants(c_s, gap, k0, zeta0, PhysicalConstants::CODATA_2018)
    }

    pub fn with_constants(
        c_s: f64,
        gap: GapEnergy,
        k0: f64,
        zeta0: f64,
        constants: PhysicalConstants,
    ) -> Result<Self, ParamError> {
        let delta = gap.to_joules(&constants);
        require("c_s", c_s, c_s > 0.0, "positive")?;
        require("delta", delta, delta > 0.0, "positive")?;
        require("k0", k0, k0 > 0.0, "positive")?;
        require("zeta0", zeta0, zeta0 > 0.0, "positive")?;
        Ok(Self {
            c_s,
            delta,
            k0,
            zeta0,
            zeta_n: 0.0,
            constants,
        })
    }

    /// Thickness of the normal component. It only enters the total film
    /// thickness `ζ_n + ζ`, never the dynamics.
    pub fn with_normal_thickness(mut self, zeta_n: f64) -> Result<Self, ParamError> {
        require("zeta_n", zeta_n, zeta_n >= 0.0, "non-negative")?;
        self.zeta_n = zeta_n;
        Ok(self)
    }

    pub fn with_zeta0(mut self, zeta0: f64) -> Result<Self, ParamError> {
        require("zeta0", zeta0, zeta0 > 0.0, "positive")?;
        self.zeta0 = zeta0;
        Ok(self)
    }

    pub fn c_s(&self) -> f64 {
        self.c_s
    }

    /// Roton gap in joules.
    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn delta_kelvin(&self) -> f64 {
        self.delta / self.constants.k_b
    }

    pub fn k0(&self) -> f64 {
        self.k0
    }

    pub fn zeta0(&self) -> f64 {
        self.zeta0
    }

    pub fn zeta_n(&self) -> f64 {
        self.zeta_n
    }

    /// Full ground-state film thickness `ζ_n + ζ₀`.
    pub fn total_thickness(&self) -> f64 {
        self.zeta_n + self.zeta0
    }

    pub fn constants(&self) -> &PhysicalConstants {
        &self.constants
    }

    pub fn hbar(&self) -> f64 {
        self.constants.hbar
    }

    pub fn mass(&self) -> f64 {
        self.constants.m_he4
    }

    /// `α = ħ²/2m`.
    pub fn alpha(&self) -> f64 {
        self.hbar() * self.hbar() / (2.0 * self.mass())
    }

    /// `Δ²/(c_s²ħ²k₀²)`, the gap relative to the phonon energy at `k₀`.
    pub fn gap_ratio_squared(&self) -> f64 {
        let phonon = self.c_s * self.hbar() * self.k0;
        (self.delta / phonon).powi(2)
    }

    pub fn warnings(&self) -> Vec<ParamWarning> {
        let ratio = 3.0 * self.gap_ratio_squared();
        if ratio >= 1.0 {
            vec![ParamWarning::RotonMassNotPositive { ratio }]
        } else {
            Vec::new()
        }
    }
}

/// The two measured parameter sets used for the published figures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Preset {
    /// `c_s = 59.36 m/s`, `Δ/k_B = 5.22 K`, `k₀ = 2 Å⁻¹`.
    Case1,
    /// `c_s = 63.4 m/s`, `Δ/k_B = 2.4 K`, `k₀ = 0.8 Å⁻¹`.
    Case2,
}

impl Preset {
    pub fn from_index(index: u8) -> Option<Self> {
        match index {
            1 => Some(Preset::Case1),
            2 => Some(Preset::Case2),
            _ => None,
        }
    }

    pub fn film(self, zeta0: f64) -> Result<FilmParameters, ParamError> {
        let (c_s, gap_k, k0_per_angstrom) = match self {
            Preset::Case1 => (59.36, 5.22, 2.0),
            Preset::Case2 => (63.4, 2.4, 0.8),
        };
        FilmParameters::new(
            c_s,
            GapEnergy::Kelvin(gap_k),
            k0_per_angstrom / ANGSTROM,
            zeta0,
        )
    }
}

/// Coefficients of the potential `G|ψ|² − G|ψ₀|² + β∇²|ψ|² + σ∇⁴|ψ|²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalCoefficients {
    /// J/m
    pub g: f64,
    /// J·m
    pub beta: f64,
    /// J·m³
    pub sigma: f64,
}

/// Two-fluid inputs for the generalized dispersion relation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HydroParameters {
    /// Surface tension, N/m.
    pub gamma: f64,
    /// Total mass density, kg/m³.
    pub rho: f64,
    /// Superfluid fraction `ρ_s/ρ`.
    pub q: f64,
    /// Characteristic roton acceleration, m/s².
    pub f_r: f64,
}

impl HydroParameters {
    pub fn new(gamma: f64, rho: f64, q: f64, f_r: f64) -> Result<Self, ParamError> {
        require("gamma", gamma, gamma >= 0.0, "non-negative")?;
        require("rho", rho, rho > 0.0, "positive")?;
        require("q", q, q > 0.0 && q <= 1.0, "in (0, 1]")?;
        require("f_r", f_r, true, "finite")?;
        Ok(Self { gamma, rho, q, f_r })
    }
}

/// Classical (gravity-wave) coefficients per unit mass.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassicalCoefficients {
    /// m/s²
    pub g0: f64,
    /// m³/s²
    pub beta0: f64,
    /// m⁵/s²
    pub sigma0: f64,
    /// m/s²
    pub gravity: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DimensionlessCoefficients {
    pub a0: f64,
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
    /// Time unit `δ`, seconds.
    pub delta_scale: f64,
    /// Length unit `l`, metres.
    pub l_scale: f64,
}

/// `G, β, σ` from the roton minimum (`c_s`, `Δ`, `k₀`).
pub fn coefficients_from_roton(p: &FilmParameters) -> PhysicalCoefficients {
    let m = p.mass();
    let hbar = p.hbar();
    let (c2, z0, k0, d2) = (p.c_s() * p.c_s(), p.zeta0(), p.k0(), p.delta() * p.delta());
    let k0_2 = k0 * k0;
    let g = m * c2 / z0;
    let beta = hbar * hbar / (4.0 * m * z0) + 2.0 * m * c2 / (z0 * k0_2)
        - 3.0 * m * d2 / (z0 * hbar * hbar * k0_2 * k0_2);
    let sigma =
        m * c2 / (z0 * k0_2 * k0_2) - 2.0 * m * d2 / (z0 * hbar * hbar * k0_2 * k0_2 * k0_2);
    PhysicalCoefficients { g, beta, sigma }
}

/// `G, β, σ` from long-wave matching of the two-fluid dispersion relation.
pub fn coefficients_from_hydro(p: &FilmParameters, h: &HydroParameters) -> PhysicalCoefficients {
    let m = p.mass();
    let hbar = p.hbar();
    let (c2, z0) = (p.c_s() * p.c_s(), p.zeta0());
    let g = m * c2 / z0;
    let beta = hbar * hbar / (4.0 * m * z0) - m * h.q * h.gamma / h.rho + m * z0 * c2 / 3.0;
    let sigma = m * h.q * h.f_r * z0.powi(4) + 2.0 / 15.0 * m * c2 * z0.powi(3)
        - m * h.q * h.gamma * z0 * z0 / (3.0 * h.rho);
    PhysicalCoefficients { g, beta, sigma }
}

/// Gravity-wave coefficients matched to the shallow-water expansion of
/// `ω² = (gk + γk³/ρ) tanh(kζ₀)`.
pub fn classical_coefficients(
    gravity: f64,
    h: &HydroParameters,
    zeta0: f64,
) -> Result<ClassicalCoefficients, ParamError> {
    require("gravity", gravity, gravity > 0.0, "positive")?;
    require("zeta0", zeta0, zeta0 > 0.0, "positive")?;
    let tension = h.gamma / h.rho;
    Ok(ClassicalCoefficients {
        g0: gravity,
        beta0: gravity * zeta0 * zeta0 / 3.0 - tension,
        sigma0: 2.0 * gravity * zeta0.powi(4) / 15.0 - tension * zeta0 * zeta0 / 3.0,
        gravity,
    })
}

/// Time and length units `δ = ħ/(m c_s²)`, `l = 1/k₀`.
pub fn natural_scales(p: &FilmParameters) -> (f64, f64) {
    (p.hbar() / (p.mass() * p.c_s() * p.c_s()), 1.0 / p.k0())
}

/// `a₀..a₃` in the natural scales, written directly in terms of `c_s, Δ, k₀`.
pub fn dimensionless_coefficients(p: &FilmParameters) -> DimensionlessCoefficients {
    let (delta_scale, l_scale) = natural_scales(p);
    let m = p.mass();
    let hk = p.hbar() * p.k0();
    let kinetic = hk * hk / (m * m * p.c_s() * p.c_s());
    let gap = p.gap_ratio_squared();
    DimensionlessCoefficients {
        a0: kinetic / 2.0,
        a1: 1.0,
        a2: 2.0 + kinetic / 4.0 - 3.0 * gap,
        a3: 1.0 - 2.0 * gap,
        delta_scale,
        l_scale,
    }
}

/// Nondimensionalizes arbitrary `G, β, σ` with user-chosen time and length
/// units. With the natural scales and roton coefficients this reproduces
/// [`dimensionless_coefficients`].
pub fn nondimensionalize(
    c: &PhysicalCoefficients,
    p: &FilmParameters,
    delta_scale: f64,
    l_scale: f64,
) -> DimensionlessCoefficients {
    let hbar = p.hbar();
    let z0 = p.zeta0();
    let l2 = l_scale * l_scale;
    DimensionlessCoefficients {
        a0: hbar * delta_scale / (2.0 * p.mass() * l2),
        a1: c.g * z0 * delta_scale / hbar,
        a2: c.beta * z0 * delta_scale / (hbar * l2),
        a3: c.sigma * z0 * delta_scale / (hbar * l2 * l2),
        delta_scale,
        l_scale,
    }
}
