//! `η = B cos(q(s − s₀))` with `q² = Q/(3μ)`.

use super::{
    real_quadratic_roots, relative_sum, ExcitationRegime, OdeCore, OdeParameters, RelationCheck,
    SolutionError, TravelingWaveSolution, WaveKind, ROOT_CHECK_TOL,
};
use crate::params::{FilmParameters, PhysicalCoefficients};

/// Below this relative margin `v² < v₀²` is treated as the threshold itself.
const THRESHOLD_TOL: f64 = 1e-12;

/// Positive roots of `(σ/3μ²)Q² − (ν/μ + 2ζ₀)Q + 3G = 0`.
pub fn solve_cosine_q(core: &OdeCore) -> Result<Vec<f64>, SolutionError> {
    let (s, n, m) = (core.sigma, core.nu, core.mu);
    let roots: Vec<f64> =
        real_quadratic_roots(s / (3.0 * m * m), -(n / m + 2.0 * core.zeta0), 3.0 * core.g)
            .into_iter()
            .filter(|&q| q > 0.0)
            .collect();
    if roots.is_empty() {
        Err(SolutionError::NoPositiveQ)
    } else {
        Ok(roots)
    }
}

/// `v₀ = ζ₀√(2Q/3m)`, the slowest cosine wave for a given root.
pub fn cosine_threshold_speed(core: &OdeCore, q: f64) -> f64 {
    core.zeta0 * (2.0 * q / (3.0 * core.mass)).sqrt()
}

/// `amplitude_sign` picks `B = ±ζ₀√(v²/v₀² − 1)`; the sign of `v` sets the
/// propagation direction.
pub fn build_cosine_wave(
    p: &FilmParameters,
    c: &PhysicalCoefficients,
    q: f64,
    v: f64,
    amplitude_sign: f64,
) -> Result<TravelingWaveSolution, SolutionError> {
    let core = OdeCore::new(p, c);
    if q <= 0.0 {
        return Err(SolutionError::InfeasibleQ {
            q,
            condition: "Q > 0",
            value: q,
        });
    }
    let (s, n, mu) = (core.sigma, core.nu, core.mu);
    let q2 = q / (3.0 * mu);
    let r = core.r(q);
    let dispersion = relative_sum(&[s * q2 * q2, -n * q2, r]);
    if dispersion > ROOT_CHECK_TOL {
        return Err(SolutionError::NotARoot {
            q,
            relation: "σq⁴ − νq² + R = 0",
            relative: dispersion,
        });
    }
    let v0 = cosine_threshold_speed(&core, q);
    let ratio = (v / v0).powi(2);
    if ratio < 1.0 - THRESHOLD_TOL {
        return Err(SolutionError::SubcriticalVelocity { ratio });
    }
    let amplitude = amplitude_sign.signum() * core.zeta0 * (ratio - 1.0).max(0.0).sqrt();
    let c0 = -v.signum() * core.c0_magnitude(q);
    let ode = OdeParameters::new(p, c, c0, v);
    // μq²B² + F = 0 closes the constant balance.
    let constant = relative_sum(&[mu * q2 * amplitude * amplitude, ode.f]);
    let relative_amplitude = amplitude / core.zeta0;
    Ok(TravelingWaveSolution {
        kind: WaveKind::Cosine,
        amplitude,
        wavenumber: q2.sqrt(),
        modulus: None,
        q,
        c0,
        v,
        s0: 0.0,
        theta0: 0.0,
        zeta0: core.zeta0,
        relative_amplitude,
        regime: ExcitationRegime::classify(relative_amplitude),
        ode,
        coefficients: *c,
        checks: vec![
            RelationCheck {
                relation: "σq⁴ − νq² + R = 0".into(),
                relative_residual: dispersion,
            },
            RelationCheck {
                relation: "μq²B² + mC₀²/(2ζ₀²) − mv²/2 = 0".into(),
                relative_residual: constant,
            },
        ],
    })
}

#[cfg(test)]
mod tests {
    use super::super::testing::case1;
    use super::*;

    fn setup() -> (FilmParameters, PhysicalCoefficients, OdeCore, Vec<f64>) {
        let (p, c) = case1();
        let core = OdeCore::new(&p, &c);
        let roots = solve_cosine_q(&core).unwrap();
        (p, c, core, roots)
    }

    #[test]
    fn roots_solve_the_quadratic() {
        let (_, _, core, roots) = setup();
        let (s, n, m) = (core.sigma, core.nu, core.mu);
        for q in roots {
            let terms = [
                s / (3.0 * m * m) * q * q,
                -(n / m + 2.0 * core.zeta0) * q,
                3.0 * core.g,
            ];
            assert!(relative_sum(&terms) < 1e-12);
        }
    }

    #[test]
    fn threshold_speed_gives_flat_state() {
        let (p, c, core, roots) = setup();
        let v0 = cosine_threshold_speed(&core, roots[0]);
        let sol = build_cosine_wave(&p, &c, roots[0], v0, 1.0).unwrap();
        assert_eq!(sol.amplitude, 0.0);
    }

    #[test]
    fn one_percent_above_threshold() {
        let (p, c, core, roots) = setup();
        for &q in &roots {
            let v0 = cosine_threshold_speed(&core, q);
            let sol = build_cosine_wave(&p, &c, q, v0 * 1.01_f64.sqrt(), -1.0).unwrap();
            assert!((sol.relative_amplitude + 0.1).abs() < 1e-12);
            assert_eq!(sol.regime, ExcitationRegime::Valid);
            // Constant-term identity by direct substitution.
            let m = p.mass();
            let z = p.zeta0();
            let lhs = core.mu * sol.wavenumber.powi(2) * sol.amplitude.powi(2)
                + m * sol.c0.powi(2) / (2.0 * z * z)
                - 0.5 * m * sol.v.powi(2);
            assert!(lhs.abs() <= 1e-12 * 0.5 * m * sol.v.powi(2));
            // C₀² = 2ζ₀⁴Q/3m.
            assert!(
                (sol.c0.powi(2) - 2.0 * z.powi(4) * q / (3.0 * m)).abs() <= 1e-14 * sol.c0.powi(2)
            );
        }
    }

    #[test]
    fn subcritical_speed_is_rejected() {
        let (p, c, core, roots) = setup();
        let v0 = cosine_threshold_speed(&core, roots[0]);
        assert!(matches!(
            build_cosine_wave(&p, &c, roots[0], 0.9 * v0, 1.0),
            Err(SolutionError::SubcriticalVelocity { .. })
        ));
    }

    #[test]
    fn no_positive_root() {
        let (_, _, mut core, _) = setup();
        // All coefficients positive: both roots are negative.
        core.nu = -3.0 * core.zeta0 * core.mu;
        core.sigma = core.sigma.abs();
        assert_eq!(solve_cosine_q(&core), Err(SolutionError::NoPositiveQ));
    }
}
