//! Phase integration and conversion of traveling waves into dimensionless
//! fields `Ψ(ξ, τ) = ζ₀^{-1/2} ψ(lξ, δτ)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{ExcitationRegime, SolutionError, TravelingWaveSolution};
use crate::grid::{FieldState, Grid};
use crate::params::{natural_scales, nondimensionalize, DimensionlessCoefficients, FilmParameters};
use crate::profile::Profile;

/// `Θ(s) = Θ₀ + mvs + mC₀∫ζ⁻¹ds` on ascending samples `s`, by cumulative
/// trapezoid from `s[0]`, where `Θ = Θ₀`. Units of action (J·s).
pub fn phase_profile(
    sol: &TravelingWaveSolution,
    p: &FilmParameters,
    s: &[f64],
) -> Result<Vec<f64>, SolutionError> {
    let m = p.mass();
    let profile = sol.profile();
    let slope = s
        .iter()
        .map(|&x| {
            let zeta = sol.zeta0 + profile.value(x);
            if zeta > 0.0 {
                Ok(m * sol.v + m * sol.c0 / zeta)
            } else {
                Err(SolutionError::NonPositiveThickness(x))
            }
        })
        .collect::<Result<Vec<f64>, _>>()?;
    let mut theta = Vec::with_capacity(s.len());
    let mut acc = sol.theta0;
    for i in 0..s.len() {
        if i > 0 {
            acc += 0.5 * (s[i] - s[i - 1]) * (slope[i] + slope[i - 1]);
        }
        theta.push(acc);
    }
    Ok(theta)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MaterializeOptions {
    /// Build the field even when `|amplitude|/ζ₀` exceeds the weak-excitation threshold.
    pub allow_extrapolated: bool,
    /// Remove the part of the phase winding that is not a multiple of 2π
    /// with a uniform ramp, so the field is continuous across the box edge.
    pub close_phase: bool,
}

impl Default for MaterializeOptions {
    fn default() -> Self {
        Self {
            allow_extrapolated: false,
            close_phase: true,
        }
    }
}

/// Samples the traveling wave at physical time `t` on a dimensionless grid
/// with the natural units `δ = ħ/(mc_s²)`, `l = 1/k₀`.
///
/// The box is periodic: the wave is centred at `s₀ + vt` wrapped into the box
/// and the phase is integrated from the sample furthest behind the centre.
pub fn materialize(
    sol: &TravelingWaveSolution,
    p: &FilmParameters,
    grid: &Grid,
    t: f64,
    opts: MaterializeOptions,
) -> Result<FieldState, SolutionError> {
    if sol.regime == ExcitationRegime::Extrapolated && !opts.allow_extrapolated {
        return Err(SolutionError::ExtrapolatedRegime(sol.relative_amplitude));
    }
    let (delta, l) = natural_scales(p);
    let scales = nondimensionalize(&sol.coefficients, p, delta, l);
    let n = grid.n();
    let length = grid.length() * l;
    let h = grid.spacing() * l;
    let center = sol.s0 + sol.v * t;
    let wrap = |x: f64| x - length * ((x + 0.5 * length) / length).floor();
    let offsets: Vec<f64> = (0..n).map(|j| wrap(grid.point(j) * l - center)).collect();
    let start = (0..n)
        .min_by(|&a, &b| offsets[a].total_cmp(&offsets[b]))
        .unwrap();
    let profile = sol.profile();
    let m = p.mass();
    let hbar = p.hbar();

    let mut eta = vec![0.0; n];
    let mut slope = vec![0.0; n];
    for j in 0..n {
        let e = profile.value(sol.s0 + offsets[j]);
        let zeta = sol.zeta0 + e;
        if zeta <= 0.0 {
            return Err(SolutionError::NonPositiveThickness(sol.s0 + offsets[j]));
        }
        eta[j] = e;
        slope[j] = (m * sol.v + m * sol.c0 / zeta) / hbar;
    }

    let mut phase = vec![0.0; n];
    let mut acc = sol.theta0 / hbar;
    for i in 0..n {
        let j = (start + i) % n;
        if i > 0 {
            let prev = (start + i - 1) % n;
            acc += 0.5 * h * (slope[j] + slope[prev]);
        }
        phase[j] = acc;
    }
    if opts.close_phase {
        close_winding(&mut phase, &slope, h, start);
    }

    let psi = eta
        .iter()
        .zip(&phase)
        .map(|(&e, &ph)| Complex64::from_polar((1.0 + e / sol.zeta0).sqrt(), ph))
        .collect();
    Ok(FieldState::new(*grid, t / delta, psi, scales)?)
}

/// Subtracts a uniform ramp so the total winding `h·Σφ'` over the box is a
/// multiple of 2π. `start` is the index where the integration began.
fn close_winding(phase: &mut [f64], slope: &[f64], h: f64, start: usize) {
    let n = phase.len();
    let winding = h * slope.iter().sum::<f64>();
    let excess = winding - 2.0 * PI * (winding / (2.0 * PI)).round();
    for i in 0..n {
        phase[(start + i) % n] -= excess * i as f64 / n as f64;
    }
}

/// Dimensionless pulse `F = A sech²(p̃(ξ − ξ₀))` carrying the traveling-wave
/// phase for speed `ṽ` with the fluid at rest far away:
/// `φ' = ṽF / (2a₀(1 + F))`. Any `A > −1` is accepted, so this also builds
/// inputs that are not exact solutions.
pub fn pulse_state(
    grid: &Grid,
    a: &DimensionlessCoefficients,
    amplitude: f64,
    p_tilde: f64,
    v_tilde: f64,
    xi0: f64,
) -> Result<FieldState, SolutionError> {
    let n = grid.n();
    let h = grid.spacing();
    let f: Vec<f64> = (0..n)
        .map(|j| amplitude / (p_tilde * grid.wrap(grid.point(j) - xi0)).cosh().powi(2))
        .collect();
    if let Some(j) = f.iter().position(|&x| x <= -1.0) {
        return Err(SolutionError::NonPositiveThickness(grid.point(j)));
    }
    let slope: Vec<f64> = f
        .iter()
        .map(|&x| v_tilde * x / (2.0 * a.a0 * (1.0 + x)))
        .collect();
    let start = (0..n)
        .min_by(|&i, &j| {
            grid.wrap(grid.point(i) - xi0)
                .total_cmp(&grid.wrap(grid.point(j) - xi0))
        })
        .unwrap();
    let mut phase = vec![0.0; n];
    let mut acc = 0.0;
    for i in 1..n {
        let (j, prev) = ((start + i) % n, (start + i - 1) % n);
        acc += 0.5 * h * (slope[j] + slope[prev]);
        phase[j] = acc;
    }
    close_winding(&mut phase, &slope, h, start);
    let psi = f
        .iter()
        .zip(&phase)
        .map(|(&x, &ph)| Complex64::from_polar((1.0 + x).sqrt(), ph))
        .collect();
    Ok(FieldState::new(*grid, 0.0, psi, *a)?)
}

/// Which root of `a₃q₀⁴ − a₂q₀² + a₁ = 0` to take for `q₀²`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CosineBranch {
    Plus,
    #[default]
    Minus,
}

/// `(q₀, Ω₀)` for the exact solution `Ψ = √(1 + cos q₀ξ)·e^{−iΩ₀τ}`, with
/// `Ω₀ = a₀q₀²/4`.
pub fn dimensionless_cosine(
    a: &DimensionlessCoefficients,
    branch: CosineBranch,
) -> Result<(f64, f64), SolutionError> {
    let disc = a.a2 * a.a2 - 4.0 * a.a1 * a.a3;
    if disc < 0.0 {
        return Err(SolutionError::NoRealRoot);
    }
    let x = if a.a3 == 0.0 {
        match branch {
            CosineBranch::Minus if a.a2 != 0.0 => a.a1 / a.a2,
            _ => return Err(SolutionError::NoRealRoot),
        }
    } else {
        let t = 0.5 * (a.a2 + a.a2.signum() * disc.sqrt());
        let (big, small) = if t == 0.0 {
            (0.0, 0.0)
        } else {
            (t / a.a3, a.a1 / t)
        };
        let (plus, minus) = if a.a2 >= 0.0 {
            (big, small)
        } else {
            (small, big)
        };
        match branch {
            CosineBranch::Plus => plus,
            CosineBranch::Minus => minus,
        }
    };
    if x <= 0.0 {
        return Err(SolutionError::NegativeQ0Squared(x));
    }
    Ok((x.sqrt(), 0.25 * a.a0 * x))
}

/// `√2·cos(q₀(ξ − ξ₀)/2)·e^{−iΩ₀τ}`: the smooth branch of `√(1 + cos q₀ξ)`.
/// The box must hold a whole number of periods `4π/q₀` to stay smooth.
pub fn cosine_state(
    grid: &Grid,
    a: &DimensionlessCoefficients,
    q0: f64,
    xi0: f64,
    tau: f64,
) -> FieldState {
    let omega0 = 0.25 * a.a0 * q0 * q0;
    let rot = Complex64::from_polar(1.0, -omega0 * tau);
    let psi = grid
        .points()
        .iter()
        .map(|&x| rot * (2.0_f64.sqrt() * (0.5 * q0 * (x - xi0)).cos()))
        .collect();
    FieldState::new(*grid, tau, psi, *a).expect("length matches grid")
}

#[cfg(test)]
mod tests {
    use super::super::testing::case1;
    use super::super::*;
    use super::*;
    use crate::params::dimensionless_coefficients;

    fn soliton() -> (FilmParameters, TravelingWaveSolution) {
        let (p, c) = case1();
        let q = solve_quartic_q(&OdeCore::new(&p, &c)).unwrap()[0];
        (p, build_quartic_soliton(&p, &c, q, Branch::Plus).unwrap())
    }

    #[test]
    fn flat_profile_has_linear_phase() {
        let (p, mut sol) = soliton();
        sol.amplitude = 0.0;
        sol.theta0 = 0.3;
        let s: Vec<f64> = (0..50).map(|i| i as f64 * 1e-10).collect();
        let th = phase_profile(&sol, &p, &s).unwrap();
        let slope = p.mass() * sol.v + p.mass() * sol.c0 / sol.zeta0;
        for (x, t) in s.iter().zip(&th) {
            assert!((t - (0.3 + slope * x)).abs() < 1e-12 * (0.3 + (slope * x).abs()));
        }
        sol.c0 = 0.0;
        let th = phase_profile(&sol, &p, &s).unwrap();
        assert!((th[49] - 0.3 - p.mass() * sol.v * s[49]).abs() < 1e-12);
    }

    #[test]
    fn superfluid_velocity_from_phase() {
        let (p, sol) = soliton();
        let h = 0.01 / sol.wavenumber;
        let s: Vec<f64> = (0..2001).map(|i| (i as f64 - 1000.0) * h).collect();
        let th = phase_profile(&sol, &p, &s).unwrap();
        for i in (1..2000).step_by(97) {
            let u = (th[i + 1] - th[i - 1]) / (2.0 * h) / p.mass();
            let expect = sol.v + sol.c0 / (sol.zeta0 + sol.eta(s[i]));
            assert!((u - expect).abs() < 1e-4 * sol.v.abs(), "{u} vs {expect}");
        }
    }

    #[test]
    fn thin_film_is_rejected() {
        let (p, mut sol) = soliton();
        sol.amplitude = -2.0 * sol.zeta0;
        assert!(matches!(
            phase_profile(&sol, &p, &[0.0]),
            Err(SolutionError::NonPositiveThickness(_))
        ));
    }

    #[test]
    fn extrapolated_needs_override() {
        let (p, sol) = soliton();
        let g = Grid::new(256, 40.0).unwrap();
        assert!(matches!(
            materialize(&sol, &p, &g, 0.0, MaterializeOptions::default()),
            Err(SolutionError::ExtrapolatedRegime(_))
        ));
    }

    #[test]
    fn materialized_density_reproduces_profile() {
        let (p, sol) = soliton();
        let opts = MaterializeOptions {
            allow_extrapolated: true,
            close_phase: true,
        };
        let pt = sol.wavenumber / p.k0();
        let g = Grid::new(256, 40.0 / pt).unwrap();
        let state = materialize(&sol, &p, &g, 0.0, opts).unwrap();
        for (j, f) in state.deviation().iter().enumerate() {
            let xi = g.point(j);
            let y = (sol.amplitude.signum()) / (pt * xi).cosh().powi(2);
            assert!((f * sol.zeta0 / sol.amplitude.abs() - y).abs() < 1e-12);
        }
    }

    #[test]
    fn materialized_field_translates() {
        let (p, sol) = soliton();
        let opts = MaterializeOptions {
            allow_extrapolated: true,
            close_phase: true,
        };
        let pt = sol.wavenumber / p.k0();
        let g = Grid::new(256, 40.0 / pt).unwrap();
        let (delta, l) = natural_scales(&p);
        // Move by exactly five cells.
        let t = 5.0 * g.spacing() * l / sol.v;
        let a = materialize(&sol, &p, &g, 0.0, opts).unwrap();
        let b = materialize(&sol, &p, &g, t, opts).unwrap();
        assert!((b.tau - t / delta).abs() < 1e-12 * b.tau);
        let (da, db) = (a.density(), b.density());
        for j in 0..256 {
            assert!((db[(j + 5) % 256] - da[j]).abs() < 1e-12);
        }
        // Phase differences are preserved too.
        for j in 1..256 {
            let pa = (a.psi[j] * a.psi[j - 1].conj()).arg();
            let pb = (b.psi[(j + 5) % 256] * b.psi[(j + 4) % 256].conj()).arg();
            assert!((pa - pb).abs() < 1e-9);
        }
    }

    #[test]
    fn closed_phase_is_periodic() {
        let (p, sol) = soliton();
        let opts = MaterializeOptions {
            allow_extrapolated: true,
            close_phase: true,
        };
        let pt = sol.wavenumber / p.k0();
        let g = Grid::new(256, 40.0 / pt).unwrap();
        let s = materialize(&sol, &p, &g, 0.0, opts).unwrap();
        let jump = (s.psi[0] * s.psi[255].conj()).arg();
        let interior = (s.psi[1] * s.psi[0].conj()).arg();
        assert!((jump - interior).abs() < 1e-6);
    }

    #[test]
    fn dimensionless_cosine_branches() {
        let mut a = dimensionless_coefficients(&case1().0);
        let (q_minus, w_minus) = dimensionless_cosine(&a, CosineBranch::Minus).unwrap();
        let (q_plus, _) = dimensionless_cosine(&a, CosineBranch::Plus).unwrap();
        let disc = (a.a2 * a.a2 - 4.0 * a.a1 * a.a3).sqrt();
        assert!((q_minus.powi(2) - (a.a2 - disc) / (2.0 * a.a3)).abs() < 1e-12);
        assert!((q_plus.powi(2) - (a.a2 + disc) / (2.0 * a.a3)).abs() < 1e-12);
        assert!((w_minus - a.a0 * q_minus.powi(2) / 4.0).abs() < 1e-15);
        assert!((q_minus - 0.351_17).abs() < 1e-5);

        a.a1 = 1.0;
        a.a2 = 2.0;
        a.a3 = 1.0;
        let (q, w) = dimensionless_cosine(&a, CosineBranch::Plus).unwrap();
        assert!((q - 1.0).abs() < 1e-15 && (w - a.a0 / 4.0).abs() < 1e-15);

        a.a2 = 1.0;
        assert_eq!(
            dimensionless_cosine(&a, CosineBranch::Plus),
            Err(SolutionError::NoRealRoot)
        );
        a.a2 = -3.0;
        assert!(matches!(
            dimensionless_cosine(&a, CosineBranch::Minus),
            Err(SolutionError::NegativeQ0Squared(_))
        ));
    }

    #[test]
    fn pulse_matches_materialized_soliton() {
        let (p, sol) = soliton();
        let opts = MaterializeOptions {
            allow_extrapolated: true,
            close_phase: true,
        };
        let pt = sol.wavenumber / p.k0();
        let g = Grid::new(256, 40.0 / pt).unwrap();
        let m = materialize(&sol, &p, &g, 0.0, opts).unwrap();
        let (delta, l) = natural_scales(&p);
        let a = nondimensionalize(&sol.coefficients, &p, delta, l);
        let vt = sol.v * delta / l;
        let s = pulse_state(&g, &a, sol.relative_amplitude, pt, vt, 0.0).unwrap();
        // Same density, and the same phase up to a constant.
        let offset = (s.psi[0] * m.psi[0].conj()).arg();
        for (x, y) in s.psi.iter().zip(&m.psi) {
            assert!((x - y * Complex64::from_polar(1.0, offset)).norm() < 1e-9);
        }
        assert!(matches!(
            pulse_state(&g, &a, -1.5, pt, vt, 0.0),
            Err(SolutionError::NonPositiveThickness(_))
        ));
    }

    #[test]
    fn cosine_state_density() {
        let a = dimensionless_coefficients(&case1().0);
        let (q0, _) = dimensionless_cosine(&a, CosineBranch::Minus).unwrap();
        let g = Grid::new(64, 4.0 * PI / q0).unwrap();
        let s = cosine_state(&g, &a, q0, 0.0, 0.7);
        for (j, d) in s.density().iter().enumerate() {
            assert!((d - (1.0 + (q0 * g.point(j)).cos())).abs() < 1e-14);
        }
    }
}
