//! Long runs of weak traveling waves, where the field equation and the
//! traveling-wave equation agree to second order in amplitude.

use he4film::grid::Grid;
use he4film::params::coefficients_from_roton;
use he4film::params::{
    natural_scales, nondimensionalize, PhysicalCoefficients, Preset, DEFAULT_ZETA0,
};
use he4film::solutions::{
    build_quartic_soliton, materialize, solve_quartic_q, Branch, ExcitationRegime,
    MaterializeOptions, OdeCore,
};
use he4film::spectral::{observables, run, ShapeTracker, SolverConfig};

/// Drift after ten widths of travel for a bright soliton of the film with
/// `ν = nf·G/k₀²`, `σ = sf·G/k₀⁴`, and its relative amplitude.
fn drift(nf: f64, sf: f64) -> (f64, f64, f64) {
    let p = Preset::Case1.film(DEFAULT_ZETA0).unwrap();
    let g0 = coefficients_from_roton(&p).g;
    let k0 = p.k0();
    let c = PhysicalCoefficients {
        g: g0,
        beta: nf * g0 / (k0 * k0) + p.alpha() / (2.0 * p.zeta0()),
        sigma: sf * g0 / k0.powi(4),
    };
    let q = solve_quartic_q(&OdeCore::new(&p, &c)).unwrap()[0];
    let sol = build_quartic_soliton(&p, &c, q, Branch::Plus).unwrap();
    assert_eq!(sol.regime, ExcitationRegime::Valid);
    let (delta, l) = natural_scales(&p);
    let a = nondimensionalize(&c, &p, delta, l);
    let cfg =
        SolverConfig::for_soliton(&a, sol.wavenumber * l, sol.v * delta / l, 256, 10.0, 10_000);
    let grid = Grid::new(256, cfg.domain_length).unwrap();
    let start = materialize(&sol, &p, &grid, 0.0, MaterializeOptions::default()).unwrap();
    let tracker = ShapeTracker::new(&start);
    let norm0 = observables(&start).norm;
    let (mut worst, mut norm) = (0.0_f64, 0.0_f64);
    run(&start, &a, &cfg, |_, s, o| {
        worst = worst.max(tracker.compare(s).unwrap().drift);
        norm = norm.max(((o.norm - norm0) / norm0).abs());
    })
    .unwrap();
    (sol.relative_amplitude, worst, norm)
}

#[test]
fn weak_bright_solitons_keep_their_shape() {
    let mut prev = f64::INFINITY;
    // Ordered by decreasing amplitude.
    for (nf, sf) in [(0.03, 0.3), (-0.03, 0.1), (0.03, 0.1)] {
        let (amp, d, norm) = drift(nf, sf);
        assert!(amp < prev);
        prev = amp;
        assert!(d < 0.01, "A/ζ₀ = {amp}: drift {d}");
        assert!(norm < 1e-10, "norm drift {norm}");
    }
}
