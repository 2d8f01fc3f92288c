//! `η = D cn²(p(s − s₀), k)`.
//!
//! Matching powers of `cn²` gives four relations for `(D, p, Q, v)`. With
//! `a = 1−k²`, `b = 2k²−1` and `P = Q/(4μ) − ν/(5σ)`:
//!
//! ```text
//! p² = P/b                     D = 15σk²p²/(2μ)
//! 4σ(4 − 19k² + 19k⁴)P²/b² + 4νP + G − (2/3)ζ₀Q = 0
//! mv²/2 = 8σDp⁴ab + 2νDp²a + ζ₀²Q/3
//! ```
//!
//! The linear-in-`cn²` balance is re-evaluated in both its raw form and its
//! reduced form and the residuals are stored with the solution.

use super::{
    real_quadratic_roots, relative_sum, Branch, ExcitationRegime, OdeCore, OdeParameters,
    RelationCheck, SolutionError, TravelingWaveSolution, WaveKind, ROOT_CHECK_TOL,
};
use crate::elliptic::EllipticModulus;
use crate::params::{FilmParameters, PhysicalCoefficients};

/// `|2k² − 1|` below this is rejected as singular.
pub const MODULUS_SINGULAR_TOL: f64 = 1e-4;

fn check_modulus(m: EllipticModulus) -> Result<(f64, f64, f64), SolutionError> {
    let k = m.k();
    if k <= 0.0 || k >= 1.0 {
        return Err(SolutionError::ModulusOutOfRange(k));
    }
    let k2 = k * k;
    let b = 2.0 * k2 - 1.0;
    if b.abs() < MODULUS_SINGULAR_TOL {
        return Err(SolutionError::ModulusSingular { k });
    }
    Ok((k2, 1.0 - k2, b))
}

fn p_of_q(core: &OdeCore, q: f64) -> f64 {
    q / (4.0 * core.mu) - core.nu / (5.0 * core.sigma)
}

/// Admissible roots `Q` (positive, with real `p`), ascending.
pub fn solve_elliptic_q(
    core: &OdeCore,
    modulus: EllipticModulus,
) -> Result<Vec<f64>, SolutionError> {
    if core.sigma == 0.0 {
        return Err(SolutionError::SigmaZero);
    }
    let (k2, _, b) = check_modulus(modulus)?;
    let (s, n, mu, z) = (core.sigma, core.nu, core.mu, core.zeta0);
    // Quadratic in P, with Q = 4μ(P + ν/(5σ)).
    let c2 = 4.0 * s * (4.0 - 19.0 * k2 + 19.0 * k2 * k2) / (b * b);
    let c1 = 4.0 * n - 2.0 / 3.0 * z * 4.0 * mu;
    let c0 = core.g - 2.0 / 3.0 * z * 4.0 * mu * n / (5.0 * s);
    Ok(real_quadratic_roots(c2, c1, c0)
        .into_iter()
        .map(|pp| 4.0 * mu * (pp + n / (5.0 * s)))
        .filter(|&q| q > 0.0 && p_of_q(core, q) / b > 0.0)
        .collect())
}

pub fn build_elliptic_wave(
    p: &FilmParameters,
    c: &PhysicalCoefficients,
    modulus: EllipticModulus,
    q: f64,
    branch: Branch,
) -> Result<TravelingWaveSolution, SolutionError> {
    let core = OdeCore::new(p, c);
    if core.sigma == 0.0 {
        return Err(SolutionError::SigmaZero);
    }
    let (k2, a, b) = check_modulus(modulus)?;
    if q <= 0.0 {
        return Err(SolutionError::InfeasibleQ {
            q,
            condition: "Q > 0",
            value: q,
        });
    }
    let big_p = p_of_q(&core, q);
    let p2 = big_p / b;
    if p2 <= 0.0 {
        return Err(SolutionError::InfeasibleQ {
            q,
            condition: "(Q/(4μ) − ν/(5σ))/(2k² − 1) > 0",
            value: p2,
        });
    }
    let (s, n, mu, z, m) = (core.sigma, core.nu, core.mu, core.zeta0, core.mass);
    let r = core.r(q);
    let reduced = [
        4.0 * s * p2 * p2 * (4.0 - 19.0 * k2 + 19.0 * k2 * k2),
        4.0 * n * p2 * b,
        core.g,
        -2.0 / 3.0 * z * q,
    ];
    let reduced_residual = relative_sum(&reduced);
    if reduced_residual > ROOT_CHECK_TOL {
        return Err(SolutionError::NotARoot {
            q,
            relation: "4σp⁴(4 − 19k² + 19k⁴) + 4νp²(2k² − 1) + G − (2/3)ζ₀Q = 0",
            relative: reduced_residual,
        });
    }
    let amplitude = 15.0 * s * k2 * p2 / (2.0 * mu);
    let raw = [
        8.0 * s * p2 * p2 * (2.0 - 17.0 * k2 + 17.0 * k2 * k2),
        4.0 * n * p2 * b,
        8.0 * mu * amplitude * p2 * a,
        r,
    ];
    let width = relative_sum(&[p2, -2.0 * mu * amplitude / (15.0 * s * k2)]);
    let quadratic = relative_sum(&[
        -120.0 * s * p2 * p2 * k2 * b,
        -6.0 * n * p2 * k2,
        12.0 * mu * amplitude * p2 * b,
        amplitude * q,
    ]);
    let kinetic =
        8.0 * s * amplitude * p2 * p2 * a * b + 2.0 * n * amplitude * p2 * a + z * z * q / 3.0;
    let v2 = 2.0 * kinetic / m;
    if v2 <= 0.0 {
        return Err(SolutionError::NegativeVelocitySquared(v2));
    }
    let v = branch.sign() * v2.sqrt();
    let c0 = -v.signum() * core.c0_magnitude(q);
    let relative_amplitude = amplitude / z;
    Ok(TravelingWaveSolution {
        kind: WaveKind::EllipticCn2,
        amplitude,
        wavenumber: p2.sqrt(),
        modulus: Some(modulus),
        q,
        c0,
        v,
        s0: 0.0,
        theta0: 0.0,
        zeta0: z,
        relative_amplitude,
        regime: ExcitationRegime::classify(relative_amplitude),
        ode: OdeParameters::new(p, c, c0, v),
        coefficients: *c,
        checks: vec![
            RelationCheck {
                relation: "8σp⁴(2 − 17k² + 17k⁴) + 4νp²(2k² − 1) + 8μDp²(1 − k²) + R = 0".into(),
                relative_residual: relative_sum(&raw),
            },
            RelationCheck {
                relation: "4σp⁴(4 − 19k² + 19k⁴) + 4νp²(2k² − 1) + G − (2/3)ζ₀Q = 0".into(),
                relative_residual: reduced_residual,
            },
            RelationCheck {
                relation: "p² = 2μD/(15σk²)".into(),
                relative_residual: width,
            },
            RelationCheck {
                relation: "−120σp⁴k²(2k² − 1) − 6νp²k² + 12μDp²(2k² − 1) + DQ = 0".into(),
                relative_residual: quadratic,
            },
        ],
    })
}

#[cfg(test)]
mod tests {
    use super::super::quartic::{build_quartic_soliton, solve_quartic_q};
    use super::super::testing::{case1, synthetic};
    use super::*;

    fn m(k: f64) -> EllipticModulus {
        EllipticModulus::new(k).unwrap()
    }

    #[test]
    #[allow(clippy::approx_constant)]
    fn singular_and_degenerate_moduli() {
        let (p, c) = case1();
        let core = OdeCore::new(&p, &c);
        assert!(matches!(
            solve_elliptic_q(&core, m(0.7071)),
            Err(SolutionError::ModulusSingular { .. })
        ));
        assert!(matches!(
            solve_elliptic_q(&core, m(1.0)),
            Err(SolutionError::ModulusOutOfRange(_))
        ));
        assert!(matches!(
            solve_elliptic_q(&core, m(0.0)),
            Err(SolutionError::ModulusOutOfRange(_))
        ));
    }

    #[test]
    fn case1_feasibility_by_modulus() {
        let (p, c) = case1();
        let core = OdeCore::new(&p, &c);
        assert!(solve_elliptic_q(&core, m(0.6)).unwrap().is_empty());
        for k in [0.9, 0.99] {
            let roots = solve_elliptic_q(&core, m(k)).unwrap();
            assert!(!roots.is_empty(), "k = {k}");
            for q in roots {
                let sol = build_elliptic_wave(&p, &c, m(k), q, Branch::Plus).unwrap();
                for check in &sol.checks {
                    assert!(
                        check.relative_residual < 1e-10,
                        "{}: {}",
                        check.relation,
                        check.relative_residual
                    );
                }
            }
        }
    }

    #[test]
    fn synthetic_film_supports_all_test_moduli() {
        let (p, c) = synthetic(1.0);
        let core = OdeCore::new(&p, &c);
        for k in [0.6, 0.9, 0.99] {
            let roots = solve_elliptic_q(&core, m(k)).unwrap();
            assert!(!roots.is_empty(), "k = {k}");
            let sol = build_elliptic_wave(&p, &c, m(k), roots[0], Branch::Plus).unwrap();
            assert!(sol.v > 0.0 && sol.c0 < 0.0);
            assert!(
                (sol.c0.powi(2) - 2.0 * p.zeta0().powi(4) * sol.q / (3.0 * p.mass())).abs()
                    <= 1e-14 * sol.c0.powi(2)
            );
        }
    }

    #[test]
    fn reduces_to_soliton_as_modulus_tends_to_one() {
        let (p, c) = case1();
        let core = OdeCore::new(&p, &c);
        let qs = solve_quartic_q(&core).unwrap();
        let sol = build_quartic_soliton(&p, &c, qs[0], Branch::Plus).unwrap();
        let k = m(1.0 - 1e-6);
        let roots = solve_elliptic_q(&core, k).unwrap();
        let q = *roots
            .iter()
            .min_by(|a, b| (*a - qs[0]).abs().total_cmp(&(*b - qs[0]).abs()))
            .unwrap();
        let ell = build_elliptic_wave(&p, &c, k, q, Branch::Plus).unwrap();
        for (x, y) in [
            (ell.amplitude, sol.amplitude),
            (ell.wavenumber, sol.wavenumber),
            (ell.v, sol.v),
            (ell.q, sol.q),
        ] {
            assert!(((x - y) / y).abs() < 1e-4, "{x} vs {y}");
        }
    }

    #[test]
    fn wrong_root_is_rejected() {
        let (p, c) = case1();
        let core = OdeCore::new(&p, &c);
        let q = solve_elliptic_q(&core, m(0.9)).unwrap()[0];
        assert!(matches!(
            build_elliptic_wave(&p, &c, m(0.9), q * 1.05, Branch::Plus),
            Err(SolutionError::NotARoot { .. })
        ));
    }
}
