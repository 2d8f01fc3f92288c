//! Ready-made initial states and solver settings for the standard runs.

use std::f64::consts::PI;

use crate::grid::{FieldState, Grid};
use crate::params::{
    coefficients_from_roton, dimensionless_coefficients, DimensionlessCoefficients, FilmParameters,
};
use crate::solutions::{
    build_quartic_soliton, cosine_state, dimensionless_cosine, materialize, pulse_state,
    solve_quartic_q, Branch, CosineBranch, MaterializeOptions, OdeCore, SolutionError,
    TravelingWaveSolution,
};
use crate::spectral::{stable_dtau, Dealiasing, SolverConfig};

pub const DEFAULT_POINTS: usize = 256;
pub const DEFAULT_STEPS: usize = 10_000;
/// Distance travelled over a run, in pulse widths `1/p̃`.
pub const DEFAULT_TRAVEL_WIDTHS: f64 = 10.0;
pub const DARK_AMPLITUDE: f64 = -0.5;
/// Dark pulse speed as a fraction of the dimensionless sound speed `√(2a₀)`.
pub const DARK_SPEED_FRACTION: f64 = 0.5;

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub initial: FieldState,
    pub coeffs: DimensionlessCoefficients,
    pub config: SolverConfig,
    /// The traveling wave the state was sampled from, when there is one.
    pub solution: Option<TravelingWaveSolution>,
}

/// Smallest-`Q` bright quartic soliton of the roton coefficients, moving
/// in `+x`.
pub fn quartic_soliton(p: &FilmParameters) -> Result<TravelingWaveSolution, SolutionError> {
    let c = coefficients_from_roton(p);
    let q = solve_quartic_q(&OdeCore::new(p, &c))?[0];
    build_quartic_soliton(p, &c, q, Branch::Plus)
}

/// Quartic soliton sampled on a box of 40 widths.
pub fn quartic(
    p: &FilmParameters,
    n_points: usize,
    n_steps: usize,
) -> Result<Scenario, SolutionError> {
    let sol = quartic_soliton(p)?;
    let a = dimensionless_coefficients(p);
    let p_tilde = sol.wavenumber * a.l_scale;
    let v_tilde = sol.v * a.delta_scale / a.l_scale;
    let config = SolverConfig::for_soliton(
        &a,
        p_tilde,
        v_tilde,
        n_points,
        DEFAULT_TRAVEL_WIDTHS,
        n_steps,
    );
    let grid = Grid::new(n_points, config.domain_length)?;
    let opts = MaterializeOptions {
        allow_extrapolated: true,
        close_phase: true,
    };
    let initial = materialize(&sol, p, &grid, 0.0, opts)?;
    Ok(Scenario {
        coeffs: initial.scales,
        initial,
        config,
        solution: Some(sol),
    })
}

/// Depression `F = A sech²(ξ)` moving at half the sound speed.
pub fn dark(
    p: &FilmParameters,
    n_points: usize,
    n_steps: usize,
) -> Result<Scenario, SolutionError> {
    let a = dimensionless_coefficients(p);
    let v_tilde = DARK_SPEED_FRACTION * (2.0 * a.a0).sqrt();
    let config =
        SolverConfig::for_soliton(&a, 1.0, v_tilde, n_points, DEFAULT_TRAVEL_WIDTHS, n_steps);
    let grid = Grid::new(n_points, config.domain_length)?;
    let initial = pulse_state(&grid, &a, DARK_AMPLITUDE, 1.0, v_tilde, 0.0)?;
    Ok(Scenario {
        initial,
        coeffs: a,
        config,
        solution: None,
    })
}

/// Exact rotating cosine over two periods, run at half the stable step.
pub fn cosine(
    p: &FilmParameters,
    n_points: usize,
    n_steps: usize,
) -> Result<Scenario, SolutionError> {
    let a = dimensionless_coefficients(p);
    let (q0, _) = dimensionless_cosine(&a, CosineBranch::Minus)?;
    let grid = Grid::new(n_points, 4.0 * PI / q0)?;
    let config = SolverConfig {
        n_points,
        domain_length: grid.length(),
        dtau: 0.5 * stable_dtau(&a, &grid),
        n_steps,
        output_stride: (n_steps / 100).max(1),
        dealiasing: Dealiasing::None,
    };
    Ok(Scenario {
        initial: cosine_state(&grid, &a, q0, 0.0, 0.0),
        coeffs: a,
        config,
        solution: None,
    })
}
