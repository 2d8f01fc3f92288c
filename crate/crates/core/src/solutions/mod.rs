//! Closed-form traveling waves of the weakly nonlinear film equation
//!
//! ```text
//! ση'''' + νη'' + 2μηη'' + μη'² + Qη² + Rη + F = 0
//! ν = β − α/(2ζ₀)    μ = α/(4ζ₀²)    Q = 3mC₀²/(2ζ₀⁴)
//! R = G − mC₀²/ζ₀³   F = mC₀²/(2ζ₀²) − mv²/2
//! ```
//!
//! with `s = x − vt` and `α = ħ²/2m`. Builders take an explicit root `Q`
//! from the matching `solve_*_q` function rather than picking one.
//!
//! The integration constant is fixed as `C₀ = −sign(v)·|C₀|`, so the
//! superfluid far from a soliton is at rest.

mod cnoidal;
mod cosine;
mod field;
mod quartic;

pub use cnoidal::{build_elliptic_wave, solve_elliptic_q, MODULUS_SINGULAR_TOL};
pub use cosine::{build_cosine_wave, cosine_threshold_speed, solve_cosine_q};
pub use field::{
    cosine_state, dimensionless_cosine, materialize, phase_profile, pulse_state, CosineBranch,
    MaterializeOptions,
};
pub use quartic::{
    build_quartic_soliton, quartic_feasibility, solve_quartic_q, QuarticFeasibility,
};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::elliptic::{EllipticError, EllipticModulus};
use crate::grid::GridError;
use crate::params::{FilmParameters, PhysicalCoefficients};
use crate::profile::{AnalyticProfile, Profile};

/// Above this `|amplitude|/ζ₀` a solution is flagged as extrapolated.
pub const WEAK_EXCITATION_THRESHOLD: f64 = 0.2;

/// Relative tolerance on the internal algebraic re-checks of a root.
pub const ROOT_CHECK_TOL: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolutionError {
    #[error("σ = 0: the amplitude equation degenerates")]
    SigmaZero,
    #[error("infeasible Q = {q:e}: {condition} violated (value {value:e})")]
    InfeasibleQ {
        q: f64,
        condition: &'static str,
        value: f64,
    },
    #[error("Q = {q:e} does not satisfy {relation}: relative residual {relative:e}")]
    NotARoot {
        q: f64,
        relation: &'static str,
        relative: f64,
    },
    #[error("no positive Q solves the cosine-wave amplitude equation")]
    NoPositiveQ,
    #[error("speed is below the cosine-wave threshold: v²/v₀² = {ratio}")]
    SubcriticalVelocity { ratio: f64 },
    #[error("modulus k = {k} makes 2k² − 1 vanish")]
    ModulusSingular { k: f64 },
    #[error("modulus k = {0} must lie strictly between 0 and 1")]
    ModulusOutOfRange(f64),
    #[error("elliptic-wave speed squared is not positive: v² = {0:e}")]
    NegativeVelocitySquared(f64),
    #[error("film thickness ζ₀ + η is not positive at s = {0:e}")]
    NonPositiveThickness(f64),
    #[error("|amplitude|/ζ₀ = {0:.3} exceeds the weak-excitation threshold; pass allow_extrapolated to override")]
    ExtrapolatedRegime(f64),
    #[error("a₂² < 4a₁a₃: no real q₀²")]
    NoRealRoot,
    #[error("selected branch gives q₀² = {0} ≤ 0")]
    NegativeQ0Squared(f64),
    #[error(transparent)]
    Elliptic(#[from] EllipticError),
    #[error(transparent)]
    Grid(#[from] GridError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WaveKind {
    QuarticSoliton,
    DarkQuarticSoliton,
    Cosine,
    EllipticCn2,
}

/// Sign choice for `v = ±|v|`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    #[default]
    Plus,
    Minus,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExcitationRegime {
    Valid,
    Extrapolated,
}

impl ExcitationRegime {
    pub fn classify(relative_amplitude: f64) -> Self {
        if relative_amplitude.abs() <= WEAK_EXCITATION_THRESHOLD {
            ExcitationRegime::Valid
        } else {
            ExcitationRegime::Extrapolated
        }
    }
}

/// The `Q`-independent part of the traveling-wave equation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OdeCore {
    pub sigma: f64,
    pub nu: f64,
    pub mu: f64,
    pub g: f64,
    pub zeta0: f64,
    pub mass: f64,
}

impl OdeCore {
    pub fn new(p: &FilmParameters, c: &PhysicalCoefficients) -> Self {
        let alpha = p.alpha();
        let z0 = p.zeta0();
        Self {
            sigma: c.sigma,
            nu: c.beta - alpha / (2.0 * z0),
            mu: alpha / (4.0 * z0 * z0),
            g: c.g,
            zeta0: z0,
            mass: p.mass(),
        }
    }

    /// `R = G − (2/3)ζ₀Q`.
    pub fn r(&self, q: f64) -> f64 {
        self.g - 2.0 / 3.0 * self.zeta0 * q
    }

    /// `|C₀| = ζ₀²·√(2Q/3m)`.
    pub fn c0_magnitude(&self, q: f64) -> f64 {
        self.zeta0 * self.zeta0 * (2.0 * q / (3.0 * self.mass)).sqrt()
    }
}

/// All coefficients of the traveling-wave equation for one `(C₀, v)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OdeParameters {
    pub sigma: f64,
    pub nu: f64,
    pub mu: f64,
    pub q: f64,
    pub r: f64,
    pub f: f64,
    pub alpha: f64,
    pub c0: f64,
    pub v: f64,
    pub zeta0: f64,
    pub mass: f64,
}

impl OdeParameters {
    pub fn new(p: &FilmParameters, c: &PhysicalCoefficients, c0: f64, v: f64) -> Self {
        let core = OdeCore::new(p, c);
        let m = p.mass();
        let z0 = p.zeta0();
        Self {
            sigma: core.sigma,
            nu: core.nu,
            mu: core.mu,
            q: 3.0 * m * c0 * c0 / (2.0 * z0.powi(4)),
            r: c.g - m * c0 * c0 / z0.powi(3),
            f: m * c0 * c0 / (2.0 * z0 * z0) - 0.5 * m * v * v,
            alpha: p.alpha(),
            c0,
            v,
            zeta0: z0,
            mass: m,
        }
    }

    /// The seven terms of the equation at one point, given `[η, η', η'', η''', η'''']`.
    pub fn terms(&self, d: &[f64; 5]) -> [f64; 7] {
        let [eta, e1, e2, _, e4] = *d;
        [
            self.sigma * e4,
            self.nu * e2,
            2.0 * self.mu * eta * e2,
            self.mu * e1 * e1,
            self.q * eta * eta,
            self.r * eta,
            self.f,
        ]
    }
}

/// An internal algebraic re-check recorded with a solution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelationCheck {
    pub relation: String,
    pub relative_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TravelingWaveSolution {
    pub kind: WaveKind,
    /// `A`, `B` or `D` in metres.
    pub amplitude: f64,
    /// `p` or `q` in 1/m.
    pub wavenumber: f64,
    pub modulus: Option<EllipticModulus>,
    pub q: f64,
    pub c0: f64,
    pub v: f64,
    pub s0: f64,
    pub theta0: f64,
    pub zeta0: f64,
    pub relative_amplitude: f64,
    pub regime: ExcitationRegime,
    pub ode: OdeParameters,
    pub coefficients: PhysicalCoefficients,
    pub checks: Vec<RelationCheck>,
}

impl TravelingWaveSolution {
    pub fn profile(&self) -> AnalyticProfile {
        match self.kind {
            WaveKind::QuarticSoliton | WaveKind::DarkQuarticSoliton => {
                AnalyticProfile::SechSquared {
                    amplitude: self.amplitude,
                    p: self.wavenumber,
                    s0: self.s0,
                }
            }
            WaveKind::Cosine => AnalyticProfile::Cosine {
                amplitude: self.amplitude,
                q: self.wavenumber,
                s0: self.s0,
            },
            WaveKind::EllipticCn2 => AnalyticProfile::CnSquared {
                amplitude: self.amplitude,
                p: self.wavenumber,
                k: self.modulus.expect("elliptic solution carries a modulus"),
                s0: self.s0,
            },
        }
    }

    pub fn eta(&self, s: f64) -> f64 {
        self.profile().value(s)
    }

    pub fn period(&self) -> Option<f64> {
        self.profile().period()
    }

    pub fn with_offset(mut self, s0: f64, theta0: f64) -> Self {
        self.s0 = s0;
        self.theta0 = theta0;
        self
    }

    pub fn is_soliton(&self) -> bool {
        matches!(
            self.kind,
            WaveKind::QuarticSoliton | WaveKind::DarkQuarticSoliton
        )
    }
}

/// Real roots of `a x² + b x + c = 0` in ascending order, computed without
/// cancellation. A vanishing `a` falls back to the linear root.
pub(crate) fn real_quadratic_roots(a: f64, b: f64, c: f64) -> Vec<f64> {
    if a == 0.0 {
        return if b == 0.0 { Vec::new() } else { vec![-c / b] };
    }
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        return Vec::new();
    }
    let t = -0.5 * (b + b.signum() * disc.sqrt());
    let mut roots = if t == 0.0 {
        vec![0.0, 0.0]
    } else {
        vec![t / a, c / t]
    };
    roots.sort_by(f64::total_cmp);
    roots
}

/// `|Σ terms| / max|term|`.
pub(crate) fn relative_sum(terms: &[f64]) -> f64 {
    let scale = terms.iter().fold(0.0_f64, |m, t| m.max(t.abs()));
    if scale == 0.0 {
        0.0
    } else {
        terms.iter().sum::<f64>().abs() / scale
    }
}

/// Case-1 film with `G` kept and `ν = 0.1G/k₀²`, `σ = ±0.1G/k₀⁴`.
///
/// The case-1 roton coefficients admit no elliptic wave below `k ≈ 0.7`;
/// this film admits one for every modulus used in the checks.
pub fn synthetic_film(sigma_sign: f64) -> (FilmParameters, PhysicalCoefficients) {
    let p = crate::params::Preset::Case1
        .film(crate::params::DEFAULT_ZETA0)
        .expect("case-1 preset is valid");
    let c = crate::params::coefficients_from_roton(&p);
    let k0 = p.k0();
    let nu = 0.1 * c.g / (k0 * k0);
    let beta = nu + p.alpha() / (2.0 * p.zeta0());
    let sigma = sigma_sign * 0.1 * c.g / k0.powi(4);
    (
        p,
        PhysicalCoefficients {
            g: c.g,
            beta,
            sigma,
        },
    )
}

#[cfg(test)]
pub(crate) mod testing {
    use crate::params::{
        coefficients_from_roton, FilmParameters, PhysicalCoefficients, Preset, DEFAULT_ZETA0,
    };

    pub use super::synthetic_film as synthetic;

    pub fn case1() -> (FilmParameters, PhysicalCoefficients) {
        let p = Preset::Case1.film(DEFAULT_ZETA0).unwrap();
        let c = coefficients_from_roton(&p);
        (p, c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_roots() {
        assert_eq!(real_quadratic_roots(1.0, -3.0, 2.0), vec![1.0, 2.0]);
        assert!(real_quadratic_roots(1.0, 0.0, 1.0).is_empty());
        assert_eq!(real_quadratic_roots(0.0, 2.0, -4.0), vec![2.0]);
        let r = real_quadratic_roots(1.0, -1e8, 1.0);
        assert!((r[0] - 1e-8).abs() < 1e-22);
    }

    #[test]
    fn regime_threshold() {
        assert_eq!(ExcitationRegime::classify(0.2), ExcitationRegime::Valid);
        assert_eq!(
            ExcitationRegime::classify(-0.21),
            ExcitationRegime::Extrapolated
        );
    }

    #[test]
    fn r_through_q_equals_r_through_c0() {
        let (p, c) = testing::case1();
        let core = OdeCore::new(&p, &c);
        for q in [1e-6, 3.7e-3, 2.0] {
            let c0 = core.c0_magnitude(q);
            let op = OdeParameters::new(&p, &c, c0, 1.0);
            assert!((op.q - q).abs() <= 1e-14 * q);
            assert!((op.r - core.r(q)).abs() <= 1e-13 * c.g.max(p.zeta0() * q));
        }
    }

    #[test]
    fn ode_coefficients_case1() {
        let (p, c) = testing::case1();
        let core = OdeCore::new(&p, &c);
        let alpha = p.hbar().powi(2) / (2.0 * p.mass());
        assert!((core.mu - alpha / (4.0 * 9e-18)).abs() < 1e-12 * core.mu);
        assert!((core.nu - (c.beta - alpha / 6e-9)).abs() < 1e-12 * c.beta.abs());
        assert!(core.mu > 0.0);
    }
}
