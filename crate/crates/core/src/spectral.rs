//! Split-step Fourier integration of
//! `iΨ_τ = −a₀Ψ'' + [a₁(|Ψ|² − 1) + a₂(|Ψ|²)'' + a₃(|Ψ|²)'''']Ψ`.
//!
//! Each step is kinetic(dτ/2), potential(dτ), kinetic(dτ/2). The potential
//! depends only on `|Ψ|²`, which its own phase rotation leaves unchanged, so
//! the potential substep is exact.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::grid::{FieldState, Grid, GridError, Spectral};
use crate::params::DimensionlessCoefficients;

/// Kinetic phase `a₀κ²_max·dτ` allowed by [`stable_dtau`].
pub const KINETIC_PHASE_LIMIT: f64 = 0.5;
pub const MIN_POINTS: usize = 64;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Dealiasing {
    #[default]
    None,
    /// Drop modes of `|Ψ|²` above two thirds of the Nyquist wavenumber
    /// before forming the potential.
    TwoThirds,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub n_points: usize,
    pub domain_length: f64,
    pub dtau: f64,
    pub n_steps: usize,
    pub output_stride: usize,
    #[serde(default)]
    pub dealiasing: Dealiasing,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolverError {
    #[error("invalid solver config: {0}")]
    InvalidConfig(String),
    #[error("state grid does not match the solver grid")]
    GridMismatch,
    #[error("non-finite field at step {step} (τ = {tau})")]
    NonFinite {
        step: usize,
        tau: f64,
        last_good: Box<FieldState>,
    },
    #[error(transparent)]
    Grid(#[from] GridError),
}

impl SolverConfig {
    pub fn validate(&self) -> Result<(), SolverError> {
        let bad = |m: String| Err(SolverError::InvalidConfig(m));
        if self.n_points < MIN_POINTS || !self.n_points.is_power_of_two() {
            return bad(format!(
                "n_points = {} must be a power of two ≥ {MIN_POINTS}",
                self.n_points
            ));
        }
        if !(self.domain_length > 0.0 && self.domain_length.is_finite()) {
            return bad(format!(
                "domain_length = {} must be positive",
                self.domain_length
            ));
        }
        if !(self.dtau > 0.0 && self.dtau.is_finite()) {
            return bad(format!("dtau = {} must be positive", self.dtau));
        }
        if self.output_stride == 0 {
            return bad("output_stride must be at least 1".into());
        }
        Ok(())
    }

    pub fn grid(&self) -> Result<Grid, SolverError> {
        Ok(Grid::new(self.n_points, self.domain_length)?)
    }

    /// Box of 40 widths `1/p̃` with the time step set so the pulse moves
    /// `widths` widths in `n_steps` steps, capped by [`stable_dtau`].
    pub fn for_soliton(
        a: &DimensionlessCoefficients,
        p_tilde: f64,
        v_tilde: f64,
        n_points: usize,
        widths: f64,
        n_steps: usize,
    ) -> Self {
        let domain_length = 40.0 / p_tilde;
        let travel = widths / (p_tilde * v_tilde.abs());
        let grid = Grid::new(n_points, domain_length).ok();
        let cap = grid.map_or(f64::INFINITY, |g| stable_dtau(a, &g));
        Self {
            n_points,
            domain_length,
            dtau: (travel / n_steps as f64).min(cap),
            n_steps,
            output_stride: (n_steps / 100).max(1),
            dealiasing: Dealiasing::TwoThirds,
        }
    }

    pub fn total_time(&self) -> f64 {
        self.dtau * self.n_steps as f64
    }
}

/// Largest `dτ` with `a₀κ²_max·dτ ≤ 0.5`.
pub fn stable_dtau(a: &DimensionlessCoefficients, grid: &Grid) -> f64 {
    let kmax = std::f64::consts::PI * grid.n() as f64 / grid.length();
    KINETIC_PHASE_LIMIT / (a.a0 * kmax * kmax)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Observables {
    pub tau: f64,
    /// `∫|Ψ|²dξ`
    pub norm: f64,
    pub max_f: f64,
    pub min_f: f64,
}

/// Norm by the periodic trapezoid rule (spectrally accurate) and extrema of
/// `F = |Ψ|² − 1`.
pub fn observables(state: &FieldState) -> Observables {
    let rho = state.density();
    let (lo, hi) = rho
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &r| {
            (lo.min(r), hi.max(r))
        });
    Observables {
        tau: state.tau,
        norm: state.grid.spacing() * rho.iter().sum::<f64>(),
        max_f: hi - 1.0,
        min_f: lo - 1.0,
    }
}

/// Precomputed operators for one grid, coefficient set and time step.
pub struct SplitStep {
    grid: Grid,
    spec: Spectral,
    coeffs: DimensionlessCoefficients,
    dtau: f64,
    half_kinetic: Vec<Complex64>,
    /// `−a₂κ² + a₃κ⁴` with the dealiasing mask folded in.
    potential_symbol: Vec<f64>,
    buf: Vec<Complex64>,
    rho_hat: Vec<Complex64>,
}

impl SplitStep {
    /// Any finite non-zero `dtau` is accepted, so the scheme can be run
    /// backwards.
    pub fn new(
        grid: Grid,
        coeffs: DimensionlessCoefficients,
        dtau: f64,
        dealiasing: Dealiasing,
    ) -> Self {
        let spec = Spectral::new(&grid);
        let kmax = spec.kappa().iter().fold(0.0_f64, |m, k| m.max(k.abs()));
        let half_kinetic = spec
            .kappa()
            .iter()
            .map(|&k| Complex64::from_polar(1.0, -coeffs.a0 * k * k * 0.5 * dtau))
            .collect();
        let potential_symbol = spec
            .kappa()
            .iter()
            .map(|&k| {
                let keep = match dealiasing {
                    Dealiasing::None => true,
                    Dealiasing::TwoThirds => k.abs() <= 2.0 / 3.0 * kmax,
                };
                if keep {
                    -coeffs.a2 * k * k + coeffs.a3 * k.powi(4)
                } else {
                    0.0
                }
            })
            .collect();
        let n = grid.n();
        Self {
            grid,
            spec,
            coeffs,
            dtau,
            half_kinetic,
            potential_symbol,
            buf: vec![Complex64::new(0.0, 0.0); n],
            rho_hat: vec![Complex64::new(0.0, 0.0); n],
        }
    }

    pub fn dtau(&self) -> f64 {
        self.dtau
    }

    fn kinetic(&mut self, psi: &mut [Complex64]) {
        self.buf.copy_from_slice(psi);
        self.spec.forward(&mut self.buf);
        for (z, m) in self.buf.iter_mut().zip(&self.half_kinetic) {
            *z *= m;
        }
        self.spec.inverse(&mut self.buf);
        psi.copy_from_slice(&self.buf);
    }

    fn potential(&mut self, psi: &mut [Complex64]) {
        for (r, z) in self.rho_hat.iter_mut().zip(psi.iter()) {
            *r = Complex64::new(z.norm_sqr(), 0.0);
        }
        self.spec.forward(&mut self.rho_hat);
        for (r, s) in self.rho_hat.iter_mut().zip(&self.potential_symbol) {
            *r *= s;
        }
        self.spec.inverse(&mut self.rho_hat);
        let a1 = self.coeffs.a1;
        for (z, d) in psi.iter_mut().zip(&self.rho_hat) {
            let v = a1 * (z.norm_sqr() - 1.0) + d.re;
            *z *= Complex64::from_polar(1.0, -v * self.dtau);
        }
    }

    /// Advances `state` by one step in place.
    pub fn advance(&mut self, state: &mut FieldState) -> Result<(), SolverError> {
        if state.grid != self.grid {
            return Err(SolverError::GridMismatch);
        }
        self.kinetic(&mut state.psi);
        self.potential(&mut state.psi);
        self.kinetic(&mut state.psi);
        state.tau += self.dtau;
        Ok(())
    }
}

/// One step of the configured scheme.
pub fn step(
    state: &FieldState,
    coeffs: &DimensionlessCoefficients,
    cfg: &SolverConfig,
) -> Result<FieldState, SolverError> {
    cfg.validate()?;
    let mut next = state.clone();
    if next.grid != cfg.grid()? {
        return Err(SolverError::GridMismatch);
    }
    SplitStep::new(next.grid, *coeffs, cfg.dtau, cfg.dealiasing).advance(&mut next)?;
    Ok(next)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub final_state: FieldState,
    pub series: Vec<Observables>,
}

/// Applies `n_steps` steps. Observables are recorded and `sink` is called at
/// step 0, at every multiple of `output_stride` and at the last step.
pub fn run<S>(
    initial: &FieldState,
    coeffs: &DimensionlessCoefficients,
    cfg: &SolverConfig,
    mut sink: S,
) -> Result<RunOutput, SolverError>
where
    S: FnMut(usize, &FieldState, &Observables),
{
    cfg.validate()?;
    if initial.grid != cfg.grid()? {
        return Err(SolverError::GridMismatch);
    }
    let mut state = initial.clone();
    let mut series = Vec::with_capacity(cfg.n_steps / cfg.output_stride + 2);
    let first = observables(&state);
    sink(0, &state, &first);
    series.push(first);
    if cfg.n_steps == 0 {
        return Ok(RunOutput {
            final_state: state,
            series,
        });
    }
    let mut scheme = SplitStep::new(state.grid, *coeffs, cfg.dtau, cfg.dealiasing);
    let mut last_good = state.clone();
    for i in 1..=cfg.n_steps {
        scheme.advance(&mut state)?;
        let emit = i % cfg.output_stride == 0 || i == cfg.n_steps;
        if !state
            .psi
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
        {
            return Err(SolverError::NonFinite {
                step: i,
                tau: state.tau,
                last_good: Box::new(last_good),
            });
        }
        if emit {
            let obs = observables(&state);
            sink(i, &state, &obs);
            series.push(obs);
            last_good.clone_from(&state);
        }
    }
    Ok(RunOutput {
        final_state: state,
        series,
    })
}

/// Compares `F` against a reference pulse by cross-correlation, with the
/// shift refined below the grid spacing by Newton iteration on the
/// spectral correlation.
pub struct ShapeTracker {
    spec: Spectral,
    grid: Grid,
    reference_hat: Vec<Complex64>,
    reference_peak: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShapeMatch {
    /// Displacement of the pulse relative to the reference, wrapped into the box.
    pub shift: f64,
    /// `max|F − F_ref(· − shift)| / max|F_ref|`
    pub drift: f64,
}

impl ShapeTracker {
    pub fn new(reference: &FieldState) -> Self {
        let spec = Spectral::new(&reference.grid);
        let f = reference.deviation();
        let reference_peak = f.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
        let mut reference_hat: Vec<Complex64> = f.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        spec.forward(&mut reference_hat);
        Self {
            spec,
            grid: reference.grid,
            reference_hat,
            reference_peak,
        }
    }

    /// Reference shifted by `s`, by spectral interpolation.
    pub fn shifted_reference(&self, s: f64) -> Vec<f64> {
        let mut buf: Vec<Complex64> = self
            .reference_hat
            .iter()
            .zip(self.spec.kappa())
            .map(|(z, &k)| z * Complex64::from_polar(1.0, -k * s))
            .collect();
        let nyq = self.grid.n() / 2;
        buf[nyq] = Complex64::new(buf[nyq].re, 0.0);
        self.spec.inverse(&mut buf);
        buf.into_iter().map(|z| z.re).collect()
    }

    pub fn compare(&self, state: &FieldState) -> Result<ShapeMatch, SolverError> {
        if state.grid != self.grid {
            return Err(SolverError::GridMismatch);
        }
        let f = state.deviation();
        let mut hat: Vec<Complex64> = f.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        self.spec.forward(&mut hat);
        let cross: Vec<Complex64> = hat
            .iter()
            .zip(&self.reference_hat)
            .map(|(a, b)| a * b.conj())
            .collect();
        // Correlation at whole-cell shifts.
        let mut corr = cross.clone();
        self.spec.inverse(&mut corr);
        let n = self.grid.n();
        let h = self.grid.spacing();
        let best = (0..n)
            .max_by(|&a, &b| corr[a].re.total_cmp(&corr[b].re))
            .unwrap();
        let mut s = best as f64 * h;
        for _ in 0..20 {
            let (mut d1, mut d2) = (0.0, 0.0);
            for (c, &k) in cross.iter().zip(self.spec.kappa()) {
                let e = c * Complex64::from_polar(1.0, k * s);
                d1 -= k * e.im;
                d2 -= k * k * e.re;
            }
            if d2 >= 0.0 {
                break;
            }
            let ds = -d1 / d2;
            s += ds;
            if ds.abs() < 1e-14 * self.grid.length() {
                break;
            }
        }
        let shift = self.grid.wrap(s);
        let r = self.shifted_reference(shift);
        let diff = f
            .iter()
            .zip(&r)
            .fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()));
        Ok(ShapeMatch {
            shift,
            drift: if self.reference_peak > 0.0 {
                diff / self.reference_peak
            } else {
                diff
            },
        })
    }
}
