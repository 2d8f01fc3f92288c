//! `η = A sech²(p(s − s₀))` with `F = 0`.

use serde::{Deserialize, Serialize};

use super::{
    real_quadratic_roots, relative_sum, Branch, ExcitationRegime, OdeCore, OdeParameters,
    RelationCheck, SolutionError, TravelingWaveSolution, WaveKind, ROOT_CHECK_TOL,
};
use crate::params::{FilmParameters, PhysicalCoefficients};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuarticFeasibility {
    pub q_positive: bool,
    /// `Q/(4μ) − ν/(5σ)`, which must be positive for a real width.
    pub p_squared: f64,
}

impl QuarticFeasibility {
    pub fn admissible(&self) -> bool {
        self.q_positive && self.p_squared > 0.0
    }
}

pub fn quartic_feasibility(core: &OdeCore, q: f64) -> QuarticFeasibility {
    QuarticFeasibility {
        q_positive: q > 0.0,
        p_squared: q / (4.0 * core.mu) - core.nu / (5.0 * core.sigma),
    }
}

/// Admissible roots of `(σ/μ²)Q² − (3ν/5μ + 2ζ₀/3)Q + G − 4ν²/(25σ) = 0`.
pub fn solve_quartic_q(core: &OdeCore) -> Result<Vec<f64>, SolutionError> {
    if core.sigma == 0.0 {
        return Err(SolutionError::SigmaZero);
    }
    let (s, n, m) = (core.sigma, core.nu, core.mu);
    let a = s / (m * m);
    let b = -(3.0 * n / (5.0 * m) + 2.0 * core.zeta0 / 3.0);
    let c = core.g - 4.0 * n * n / (25.0 * s);
    Ok(real_quadratic_roots(a, b, c)
        .into_iter()
        .filter(|&q| quartic_feasibility(core, q).admissible())
        .collect())
}

pub fn build_quartic_soliton(
    p: &FilmParameters,
    c: &PhysicalCoefficients,
    q: f64,
    branch: Branch,
) -> Result<TravelingWaveSolution, SolutionError> {
    let core = OdeCore::new(p, c);
    if core.sigma == 0.0 {
        return Err(SolutionError::SigmaZero);
    }
    let feas = quartic_feasibility(&core, q);
    if !feas.q_positive {
        return Err(SolutionError::InfeasibleQ {
            q,
            condition: "Q > 0",
            value: q,
        });
    }
    if feas.p_squared <= 0.0 {
        return Err(SolutionError::InfeasibleQ {
            q,
            condition: "Q/(4μ) − ν/(5σ) > 0",
            value: feas.p_squared,
        });
    }
    let p2 = feas.p_squared;
    let (s, n, mu) = (core.sigma, core.nu, core.mu);
    let r = core.r(q);
    let width_relation = relative_sum(&[16.0 * s * p2 * p2, 4.0 * n * p2, r]);
    if width_relation > ROOT_CHECK_TOL {
        return Err(SolutionError::NotARoot {
            q,
            relation: "16σp⁴ + 4νp² + R = 0",
            relative: width_relation,
        });
    }
    let amplitude = 15.0 * s * q / (8.0 * mu * mu) - 3.0 * n / (2.0 * mu);
    let v = branch.sign() * core.zeta0 * (2.0 * q / (3.0 * core.mass)).sqrt();
    let c0 = -v * core.zeta0;
    let relative_amplitude = amplitude / core.zeta0;
    Ok(TravelingWaveSolution {
        kind: if amplitude > 0.0 {
            WaveKind::QuarticSoliton
        } else {
            WaveKind::DarkQuarticSoliton
        },
        amplitude,
        wavenumber: p2.sqrt(),
        modulus: None,
        q,
        c0,
        v,
        s0: 0.0,
        theta0: 0.0,
        zeta0: core.zeta0,
        relative_amplitude,
        regime: ExcitationRegime::classify(relative_amplitude),
        ode: OdeParameters::new(p, c, c0, v),
        coefficients: *c,
        checks: vec![RelationCheck {
            relation: "16σp⁴ + 4νp² + R = 0".into(),
            relative_residual: width_relation,
        }],
    })
}

#[cfg(test)]
mod tests {
    use super::super::testing::{case1, synthetic};
    use super::*;

    fn core_case1() -> OdeCore {
        let (p, c) = case1();
        OdeCore::new(&p, &c)
    }

    #[test]
    fn sigma_zero_is_an_error() {
        let mut core = core_case1();
        core.sigma = 0.0;
        assert_eq!(solve_quartic_q(&core), Err(SolutionError::SigmaZero));
    }

    #[test]
    fn nu_zero_roots_follow_closed_form() {
        let mut core = core_case1();
        core.nu = 0.0;
        core.sigma = core.mu * core.mu * core.zeta0 * core.zeta0 / (20.0 * core.g);
        let (m2, z) = (core.mu * core.mu / core.sigma, 2.0 * core.zeta0 / 3.0);
        let disc = (z * z - 4.0 * core.sigma * core.g / (core.mu * core.mu)).sqrt();
        let expect = [m2 * (z - disc) / 2.0, m2 * (z + disc) / 2.0];
        let roots = solve_quartic_q(&core).unwrap();
        assert_eq!(roots.len(), 2);
        for (r, e) in roots.iter().zip(expect) {
            assert!((r - e).abs() < 1e-12 * e);
        }
    }

    #[test]
    fn negative_discriminant_gives_no_roots() {
        let mut core = core_case1();
        core.nu = 0.0;
        core.sigma = core.mu * core.mu * core.zeta0 * core.zeta0 / core.g;
        assert!(solve_quartic_q(&core).unwrap().is_empty());
    }

    #[test]
    fn case1_roots_match_sign_change_scan() {
        let core = core_case1();
        let (s, n, m) = (core.sigma, core.nu, core.mu);
        let f = |q: f64| {
            s / (m * m) * q * q - (3.0 * n / (5.0 * m) + 2.0 * core.zeta0 / 3.0) * q + core.g
                - 4.0 * n * n / (25.0 * s)
        };
        // Both roots of the quadratic lie below the vertex doubled.
        let q_max = 2.0 * (3.0 * n / (5.0 * m) + 2.0 * core.zeta0 / 3.0) * m * m / s;
        let steps = 1_000_000;
        let mut scanned = Vec::new();
        let mut prev = f(0.0);
        for i in 1..=steps {
            let q = q_max * i as f64 / steps as f64;
            let cur = f(q);
            if prev.signum() != cur.signum() {
                scanned.push(q);
            }
            prev = cur;
        }
        let admissible: Vec<f64> = scanned
            .iter()
            .copied()
            .filter(|&q| quartic_feasibility(&core, q).admissible())
            .collect();
        let roots = solve_quartic_q(&core).unwrap();
        assert_eq!(roots.len(), admissible.len());
        assert_eq!(roots.len(), 1);
        for (r, a) in roots.iter().zip(&admissible) {
            assert!((r - a).abs() <= 2.0 * q_max / steps as f64);
        }
        // Q/(μk₀²) is ζ₀-free and frozen from the independent prototype.
        let (p, _) = case1();
        let ratio = roots[0] / (core.mu * p.k0() * p.k0());
        assert!((ratio - 8.673).abs() < 5e-3, "{ratio}");
    }

    #[test]
    fn case1_soliton_parameters() {
        let (p, c) = case1();
        let q = solve_quartic_q(&OdeCore::new(&p, &c)).unwrap()[0];
        let sol = build_quartic_soliton(&p, &c, q, Branch::Plus).unwrap();
        assert_eq!(sol.kind, WaveKind::QuarticSoliton);
        assert!((sol.relative_amplitude - 1.1129).abs() < 1e-3);
        assert!((sol.wavenumber / p.k0() - 1.2537).abs() < 1e-3);
        assert!((sol.v / p.c_s() - 4.545).abs() < 1e-3);
        assert_eq!(sol.regime, ExcitationRegime::Extrapolated);
        // v² = C₀²/ζ₀² and C₀² = 2ζ₀⁴Q/3m.
        let z = p.zeta0();
        assert!((sol.v * sol.v - sol.c0 * sol.c0 / (z * z)).abs() <= 1e-14 * sol.v * sol.v);
        assert!(
            (sol.c0 * sol.c0 - 2.0 * z.powi(4) * q / (3.0 * p.mass())).abs()
                <= 1e-14 * sol.c0 * sol.c0
        );
        assert!(sol.ode.f.abs() <= 1e-14 * 0.5 * p.mass() * sol.v * sol.v);
        let minus = build_quartic_soliton(&p, &c, q, Branch::Minus).unwrap();
        assert_eq!(minus.v, -sol.v);
        assert_eq!(minus.c0, -sol.c0);
    }

    #[test]
    fn negative_sigma_gives_dark_soliton() {
        let (p, c) = synthetic(-1.0);
        let roots = solve_quartic_q(&OdeCore::new(&p, &c)).unwrap();
        assert_eq!(roots.len(), 1);
        let sol = build_quartic_soliton(&p, &c, roots[0], Branch::Plus).unwrap();
        assert_eq!(sol.kind, WaveKind::DarkQuarticSoliton);
        assert!(sol.amplitude < 0.0);
    }

    #[test]
    fn width_boundary_is_rejected() {
        let (p, c) = case1();
        let core = OdeCore::new(&p, &c);
        let q_edge = 4.0 * core.mu * core.nu / (5.0 * core.sigma);
        let err = build_quartic_soliton(&p, &c, q_edge, Branch::Plus).unwrap_err();
        assert!(
            matches!(
                err,
                SolutionError::InfeasibleQ { .. } | SolutionError::NotARoot { .. }
            ),
            "{err}"
        );
        assert!(matches!(
            build_quartic_soliton(&p, &c, -1.0, Branch::Plus),
            Err(SolutionError::InfeasibleQ {
                condition: "Q > 0",
                ..
            })
        ));
    }

    #[test]
    fn arbitrary_q_is_not_a_root() {
        let (p, c) = case1();
        let q = solve_quartic_q(&OdeCore::new(&p, &c)).unwrap()[0];
        assert!(matches!(
            build_quartic_soliton(&p, &c, 1.1 * q, Branch::Plus),
            Err(SolutionError::NotARoot { .. })
        ));
    }
}
