use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use serde::Serialize;

use he4film::config::FilmConfig;
use he4film::dispersion::{dispersion_table, dispersion_table_coefficients, roton_effective_mass};
use he4film::elliptic::EllipticModulus;
use he4film::grid::FieldState;
use he4film::io::{
    read_checkpoint, write_checkpoint, write_dispersion_csv, write_observables_csv,
    write_snapshots_csv, write_surface_csv,
};
use he4film::params::{
    coefficients_from_hydro, coefficients_from_roton, dimensionless_coefficients,
    DimensionlessCoefficients, FilmParameters, PhysicalCoefficients,
};
use he4film::scenario::{self, Scenario};
use he4film::solutions::{
    build_cosine_wave, build_elliptic_wave, build_quartic_soliton, cosine_threshold_speed,
    solve_cosine_q, solve_elliptic_q, solve_quartic_q, Branch, OdeCore, SolutionError,
    TravelingWaveSolution,
};
use he4film::spectral::{
    observables, run, stable_dtau, Dealiasing, Observables, ShapeTracker, SolverConfig, SolverError,
};
use he4film::suite::{run_suite, SuiteOptions};
use he4film::verify::{traveling_wave_residual, Differentiation, ResidualReport, SampleWindow};

use crate::manifest::RunManifest;
use crate::{
    Cli, CoefficientSource, Command, Direction, DispersionArgs, Initial, Kind, SimulateArgs,
    SolveArgs, VerifyArgs,
};

/// Exit 2 for bad input, 1 for a physics or verification failure.
#[derive(Debug)]
pub struct CliError {
    pub source: anyhow::Error,
    input: bool,
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(if self.input { 2 } else { 1 })
    }
}

trait Classify<T> {
    fn input(self) -> Result<T, CliError>;
    fn failure(self) -> Result<T, CliError>;
}

impl<T, E: Into<anyhow::Error>> Classify<T> for Result<T, E> {
    fn input(self) -> Result<T, CliError> {
        self.map_err(|e| CliError {
            source: e.into(),
            input: true,
        })
    }
    fn failure(self) -> Result<T, CliError> {
        self.map_err(|e| CliError {
            source: e.into(),
            input: false,
        })
    }
}

type CmdResult = Result<ExitCode, CliError>;

pub fn dispatch(cli: &Cli) -> CmdResult {
    match &cli.command {
        Command::Coefficients => coefficients(cli),
        Command::Dispersion(a) => dispersion(cli, a),
        Command::Solve(a) => solve(cli, a),
        Command::Simulate(a) => simulate(cli, a),
        Command::Verify(a) => verify(cli, a),
    }
}

/// Config file, then `--case` and `--zeta0` on top. Without a file the case
/// defaults to 1.
fn film_config(cli: &Cli) -> Result<FilmConfig, CliError> {
    let mut cfg = match &cli.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))
                .input()?;
            FilmConfig::from_json(&text)
                .with_context(|| path.display().to_string())
                .input()?
        }
        None => FilmConfig::preset(cli.case.unwrap_or(1)),
    };
    if let Some(c) = cli.case {
        cfg.case = Some(c);
    }
    if let Some(z) = cli.zeta0 {
        cfg.zeta0_angstrom = Some(z);
    }
    Ok(cfg)
}

fn film(cli: &Cli) -> Result<(FilmConfig, FilmParameters), CliError> {
    let cfg = film_config(cli)?;
    let p = cfg.film().input()?;
    Ok((cfg.resolved().input()?, p))
}

struct Output<'a> {
    dir: &'a Path,
    manifest: RunManifest,
}

impl<'a> Output<'a> {
    fn new(
        cli: &'a Cli,
        command: &str,
        resolved: Option<FilmConfig>,
        options: impl Serialize,
    ) -> Result<Self, CliError> {
        fs::create_dir_all(&cli.out)
            .with_context(|| format!("creating {}", cli.out.display()))
            .input()?;
        let options = serde_json::to_value(options).failure()?;
        Ok(Self {
            dir: &cli.out,
            manifest: RunManifest::new(command, cli.config.as_deref(), resolved, options),
        })
    }

    fn create(&mut self, name: &str) -> Result<BufWriter<File>, CliError> {
        let path = self.dir.join(name);
        let f = File::create(&path)
            .with_context(|| format!("creating {}", path.display()))
            .failure()?;
        self.manifest.outputs.push(path);
        Ok(BufWriter::new(f))
    }

    fn json(&mut self, name: &str, value: &impl Serialize) -> Result<String, CliError> {
        let text = serde_json::to_string_pretty(value).failure()? + "\n";
        let path = self.dir.join(name);
        fs::write(&path, &text)
            .with_context(|| format!("writing {}", path.display()))
            .failure()?;
        self.manifest.outputs.push(path);
        Ok(text)
    }

    fn finish(self) -> Result<PathBuf, CliError> {
        self.manifest.write(self.dir).failure()
    }
}

#[derive(Serialize)]
struct TableAbc {
    #[serde(rename = "A")]
    a: f64,
    #[serde(rename = "B")]
    b: f64,
    #[serde(rename = "C")]
    c: f64,
}

#[derive(Serialize)]
struct CoefficientsReport {
    parameters: FilmConfig,
    physical: PhysicalCoefficients,
    physical_from_hydro: Option<PhysicalCoefficients>,
    dimensionless: DimensionlessCoefficients,
    dispersion_table: TableAbc,
    roton_effective_mass_kg: Option<f64>,
    warnings: Vec<String>,
}

fn coefficients(cli: &Cli) -> CmdResult {
    let (resolved, p) = film(cli)?;
    let hydro = film_config(cli)?.hydro().input()?;
    let t = dispersion_table_coefficients(&p);
    let mut warnings: Vec<String> = p.warnings().iter().map(ToString::to_string).collect();
    let m_r = match roton_effective_mass(&p) {
        Ok(m) => Some(m),
        Err(e) => {
            warnings.push(e.to_string());
            None
        }
    };
    let report = CoefficientsReport {
        parameters: resolved.clone(),
        physical: coefficients_from_roton(&p),
        physical_from_hydro: hydro.map(|h| coefficients_from_hydro(&p, &h)),
        dimensionless: dimensionless_coefficients(&p),
        dispersion_table: TableAbc {
            a: t.a,
            b: t.b,
            c: t.c,
        },
        roton_effective_mass_kg: m_r,
        warnings,
    };
    let mut out = Output::new(cli, "coefficients", Some(resolved), serde_json::Value::Null)?;
    print!("{}", out.json("coefficients.json", &report)?);
    out.finish()?;
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct DispersionSummary {
    rows: usize,
    /// Rows where `Ẽ²` is negative; their energy cell is empty.
    gaps: usize,
    /// First interior local minimum, `(k in Å⁻¹, Ẽ/k_B in K)`.
    local_minimum: Option<(f64, f64)>,
}

fn dispersion(cli: &Cli, a: &DispersionArgs) -> CmdResult {
    if !(a.k_min.is_finite() && a.k_max.is_finite() && a.k_min >= 0.0 && a.k_max >= a.k_min) {
        return Err(anyhow!(
            "need 0 ≤ k_min ≤ k_max, got [{}, {}]",
            a.k_min,
            a.k_max
        ))
        .input();
    }
    if a.points == 0 {
        return Err(anyhow!("points must be at least 1")).input();
    }
    let (resolved, p) = film(cli)?;
    let points = if a.k_min == a.k_max { 1 } else { a.points };
    let rows = dispersion_table(&dispersion_table_coefficients(&p), a.k_min, a.k_max, points);
    let gaps = rows.iter().filter(|r| r.e_over_kb.is_none()).count();
    if gaps > 0 {
        eprintln!("warning: {gaps} rows have a negative radicand and are left blank");
    }
    let local_minimum =
        rows.windows(3)
            .find_map(|w| match (w[0].e_over_kb, w[1].e_over_kb, w[2].e_over_kb) {
                (Some(l), Some(m), Some(r)) if m < l && m <= r => Some((w[1].k_per_angstrom, m)),
                _ => None,
            });
    let mut out = Output::new(cli, "dispersion", Some(resolved), a)?;
    write_dispersion_csv(out.create("dispersion.csv")?, &rows, cli.precision).failure()?;
    let summary = DispersionSummary {
        rows: rows.len(),
        gaps,
        local_minimum,
    };
    print!("{}", out.json("dispersion_summary.json", &summary)?);
    out.finish()?;
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct SolveReport {
    solution: TravelingWaveSolution,
    residual: ResidualReport,
    analytic_residual: ResidualReport,
}

fn build_solution(
    p: &FilmParameters,
    c: &PhysicalCoefficients,
    a: &SolveArgs,
) -> Result<TravelingWaveSolution, CliError> {
    let core = OdeCore::new(p, c);
    let branch = match a.direction {
        Direction::Plus => Branch::Plus,
        Direction::Minus => Branch::Minus,
    };
    let pick = |roots: Vec<f64>| -> Result<f64, CliError> {
        let n = roots.len();
        roots
            .get(a.root)
            .copied()
            .ok_or_else(|| anyhow!("root index {} out of range: {n} admissible roots", a.root))
            .failure()
    };
    match a.kind {
        Kind::Quartic | Kind::Dark => {
            let want_bright = a.kind == Kind::Quartic;
            let mut last_err = None;
            let mut found = Vec::new();
            for q in solve_quartic_q(&core).failure()? {
                match build_quartic_soliton(p, c, q, branch) {
                    Ok(s) if (s.amplitude > 0.0) == want_bright => found.push(s),
                    Ok(_) => {}
                    Err(e) => last_err = Some(e),
                }
            }
            let n = found.len();
            if n == 0 {
                let what = if want_bright { "bright" } else { "dark" };
                return Err(match last_err {
                    Some(e) => anyhow!(e).context(format!("no {what} quartic soliton")),
                    None => anyhow!("no {what} quartic soliton for these coefficients"),
                })
                .failure();
            }
            if a.root >= n {
                return Err(anyhow!(
                    "root index {} out of range: {n} admissible solitons",
                    a.root
                ))
                .failure();
            }
            Ok(found.swap_remove(a.root))
        }
        Kind::Cosine => {
            if !(a.v_ratio.is_finite() && a.v_ratio > 0.0) {
                return Err(anyhow!("v-ratio must be positive, got {}", a.v_ratio)).input();
            }
            let q = pick(solve_cosine_q(&core).failure()?)?;
            let v = branch.sign() * a.v_ratio * cosine_threshold_speed(&core, q);
            let sign = if a.negative_amplitude { -1.0 } else { 1.0 };
            build_cosine_wave(p, c, q, v, sign).failure()
        }
        Kind::Elliptic => {
            let m = EllipticModulus::new(a.modulus).input()?;
            let q = pick(solve_elliptic_q(&core, m).failure()?)?;
            build_elliptic_wave(p, c, m, q, branch).failure()
        }
    }
}

fn solve(cli: &Cli, a: &SolveArgs) -> CmdResult {
    if a.points < 2 {
        return Err(anyhow!("points must be at least 2")).input();
    }
    let (resolved, p) = film(cli)?;
    let c = match a.coefficients {
        CoefficientSource::Roton => coefficients_from_roton(&p),
        CoefficientSource::Hydro => {
            let h = film_config(cli)?
                .hydro()
                .input()?
                .ok_or_else(|| anyhow!("config has no `hydro` section"))
                .input()?;
            coefficients_from_hydro(&p, &h)
        }
    };
    let sol = build_solution(&p, &c, a)?;
    let width = 1.0 / sol.wavenumber;
    let (window, method, span) = match sol.period() {
        Some(t) => (
            SampleWindow::resolved_period(t, width),
            Differentiation::Spectral,
            (0.0, 2.0 * t),
        ),
        None => (
            SampleWindow::decaying(sol.s0, width, 4096),
            Differentiation::Central8,
            (sol.s0 - 20.0 * width, sol.s0 + 20.0 * width),
        ),
    };
    let residual = traveling_wave_residual(&sol.profile(), &sol.ode, &window, method).failure()?;
    let analytic_residual =
        traveling_wave_residual(&sol.profile(), &sol.ode, &window, Differentiation::Analytic)
            .failure()?;
    let passed = residual.passed && analytic_residual.passed;

    let s: Vec<f64> = (0..a.points)
        .map(|i| span.0 + (span.1 - span.0) * i as f64 / (a.points - 1) as f64)
        .collect();
    let eta: Vec<f64> = s.iter().map(|&x| sol.eta(x)).collect();
    let mut out = Output::new(cli, "solve", Some(resolved), a)?;
    write_surface_csv(out.create("profile.csv")?, &s, &eta, cli.precision).failure()?;
    let report = SolveReport {
        solution: sol,
        residual,
        analytic_residual,
    };
    print!("{}", out.json("solution.json", &report)?);
    out.finish()?;
    if passed {
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!("residual gate failed");
        Ok(ExitCode::from(1))
    }
}

fn file_scenario(
    a: &SimulateArgs,
    coeffs: DimensionlessCoefficients,
) -> Result<Scenario, CliError> {
    let path = a
        .checkpoint
        .as_ref()
        .ok_or_else(|| anyhow!("--initial file needs --checkpoint"))
        .input()?;
    let f = File::open(path)
        .with_context(|| format!("opening {}", path.display()))
        .input()?;
    let initial = read_checkpoint(std::io::BufReader::new(f), coeffs)
        .with_context(|| path.display().to_string())
        .input()?;
    let config = SolverConfig {
        n_points: initial.grid.n(),
        domain_length: initial.grid.length(),
        dtau: 0.5 * stable_dtau(&coeffs, &initial.grid),
        n_steps: a.steps,
        output_stride: (a.steps / 100).max(1),
        dealiasing: Dealiasing::TwoThirds,
    };
    Ok(Scenario {
        initial,
        coeffs,
        config,
        solution: None,
    })
}

/// Grid errors come from the flags; anything else is physics.
fn scenario_error(e: SolutionError) -> CliError {
    let input = matches!(e, SolutionError::Grid(_));
    CliError {
        source: e.into(),
        input,
    }
}

#[derive(Serialize)]
struct SimulationSummary {
    config: SolverConfig,
    total_time: f64,
    steps_completed: usize,
    norm_relative_drift: f64,
    max_shape_drift: Option<f64>,
    largest_min_f: f64,
    max_abs_f: f64,
    error: Option<String>,
}

fn simulate(cli: &Cli, a: &SimulateArgs) -> CmdResult {
    let (resolved, p) = film(cli)?;
    let mut sc = match a.initial {
        Initial::File => file_scenario(a, dimensionless_coefficients(&p))?,
        Initial::Quartic => scenario::quartic(&p, a.points, a.steps).map_err(scenario_error)?,
        Initial::Dark => scenario::dark(&p, a.points, a.steps).map_err(scenario_error)?,
        Initial::Cosine => scenario::cosine(&p, a.points, a.steps).map_err(scenario_error)?,
    };
    if let Some(dt) = a.dtau {
        sc.config.dtau = dt;
    }
    if let Some(s) = a.stride {
        sc.config.output_stride = s;
    }
    sc.config.validate().input()?;
    let limit = stable_dtau(&sc.coeffs, &sc.initial.grid);
    if sc.config.dtau > limit {
        eprintln!(
            "warning: dtau = {:e} exceeds the stability limit {limit:e}",
            sc.config.dtau
        );
    }

    let tracker = matches!(a.initial, Initial::Quartic | Initial::Dark)
        .then(|| ShapeTracker::new(&sc.initial));
    let norm0 = observables(&sc.initial).norm;
    let mut snapshots: Vec<FieldState> = Vec::new();
    let mut series: Vec<Observables> = Vec::new();
    let mut shape = tracker.as_ref().map(|_| 0.0_f64);
    let mut steps_completed = 0;
    let result = run(&sc.initial, &sc.coeffs, &sc.config, |i, st, obs| {
        snapshots.push(st.clone());
        series.push(*obs);
        steps_completed = i;
        if let (Some(t), Some(d)) = (&tracker, shape.as_mut()) {
            if let Ok(m) = t.compare(st) {
                *d = d.max(m.drift);
            }
        }
    });

    let mut out = Output::new(cli, "simulate", Some(resolved), a)?;
    write_observables_csv(out.create("observables.csv")?, &series, cli.precision).failure()?;
    write_snapshots_csv(out.create("snapshots.csv")?, &snapshots, cli.precision).failure()?;
    let error = match &result {
        Ok(r) => {
            write_checkpoint(out.create("final.he4f")?, &r.final_state).failure()?;
            None
        }
        Err(SolverError::NonFinite { last_good, .. }) => {
            write_checkpoint(out.create("last_good.he4f")?, last_good).failure()?;
            result.as_ref().err().map(ToString::to_string)
        }
        Err(e) => return Err(anyhow!(e.clone())).input(),
    };
    let summary = SimulationSummary {
        config: sc.config,
        total_time: sc.config.total_time(),
        steps_completed,
        norm_relative_drift: series
            .iter()
            .map(|o| ((o.norm - norm0) / norm0).abs())
            .fold(0.0, f64::max),
        max_shape_drift: shape,
        largest_min_f: series
            .iter()
            .map(|o| o.min_f)
            .fold(f64::NEG_INFINITY, f64::max),
        max_abs_f: series
            .iter()
            .map(|o| o.max_f.abs().max(o.min_f.abs()))
            .fold(0.0, f64::max),
        error: error.clone(),
    };
    print!("{}", out.json("summary.json", &summary)?);
    out.finish()?;
    match error {
        None => Ok(ExitCode::SUCCESS),
        Some(e) => Err(anyhow!(e).context("run aborted; last good state saved")).failure(),
    }
}

fn verify(cli: &Cli, a: &VerifyArgs) -> CmdResult {
    if !(a.tamper_a2.is_finite() && a.tamper_a2 > 0.0) {
        return Err(anyhow!("tamper-a2 must be positive")).input();
    }
    let report = run_suite(&SuiteOptions {
        groups: a.groups.clone(),
        a2_scale: a.tamper_a2,
    });
    for c in &report.checks {
        eprintln!("{} {}", if c.passed { "PASS" } else { "FAIL" }, c.id);
    }
    let mut out = Output::new(cli, "verify", None, a)?;
    print!("{}", out.json("verify.json", &report)?);
    out.finish()?;
    Ok(if report.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use he4film::params::ANGSTROM;

    #[test]
    fn case_flag_overrides_config_default() {
        let cli = <Cli as clap::Parser>::parse_from([
            "he4film",
            "--case",
            "2",
            "--zeta0",
            "40",
            "coefficients",
        ]);
        let (cfg, p) = film(&cli).unwrap();
        assert_eq!(cfg.case, Some(2));
        assert!((p.zeta0() - 40.0 * ANGSTROM).abs() < 1e-20);
    }

    #[test]
    fn error_classes_map_to_exit_codes() {
        let e: Result<(), _> = Err(anyhow!("x"));
        assert_eq!(e.input().unwrap_err().exit_code(), ExitCode::from(2));
        let e: Result<(), _> = Err(anyhow!("x"));
        assert_eq!(e.failure().unwrap_err().exit_code(), ExitCode::from(1));
    }
}
