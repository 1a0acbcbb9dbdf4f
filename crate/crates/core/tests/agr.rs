mod common;

use belllab::quantum::correlations;
use belllab::{
    correlation_matrix, estimate_e, estimate_probabilities, estimate_s, joint_probabilities, simulate_run,
    ExperimentConfig, MeasurementSettings, TwoQubitState, UnitVector3,
};
use common::*;
use num_complex::Complex64;
use std::f64::consts::PI;

fn optimal() -> MeasurementSettings {
    MeasurementSettings::coplanar_xz(0.0, PI / 4.0, PI / 2.0, 3.0 * PI / 4.0).unwrap()
}

/// Mean cosine of a tilt whose angle is Rayleigh distributed with scale `sigma`,
/// by Simpson quadrature.
fn mean_cos_tilt(sigma: f64) -> f64 {
    if sigma == 0.0 {
        return 1.0;
    }
    let upper = 12.0 * sigma;
    let n = 20_000;
    let h = upper / n as f64;
    let f = |r: f64| r.cos() * r / (sigma * sigma) * (-r * r / (2.0 * sigma * sigma)).exp();
    let mut acc = f(0.0) + f(upper);
    for k in 1..n {
        acc += f(k as f64 * h) * if k % 2 == 1 { 4.0 } else { 2.0 };
    }
    acc * h / 3.0
}

#[test]
fn ideal_runs_converge_to_the_quantum_correlation() {
    let mut rng = rng(31);
    for k in 0..20 {
        let state = random_state(&mut rng);
        let a = random_unit(&mut rng);
        let b = random_unit(&mut rng);
        let cfg = ExperimentConfig::ideal(state, optimal(), 10_000_000, k);
        let counts = simulate_run(&cfg, &a, &b).unwrap();
        assert_eq!(counts.coincidences(), counts.n_pairs);
        let e = estimate_e(&counts).unwrap();
        let want = correlation_matrix(&state, &a, &b);
        assert!((e.value - want).abs() <= 5.0 * e.std_error, "{e:?} vs {want}");
    }
}

#[test]
fn probability_identity_and_born_oracle() {
    let state = TwoQubitState::singlet();
    let b = UnitVector3::from_spherical(PI / 4.0, 0.0).unwrap();
    let cfg = ExperimentConfig::ideal(state, optimal(), 1_000_000, 8);
    let counts = simulate_run(&cfg, &UnitVector3::Z, &b).unwrap();
    let p = estimate_probabilities(&counts).unwrap();
    let e = estimate_e(&counts).unwrap();
    assert!((p.p_pp + p.p_mm - p.p_pm - p.p_mp - e.value).abs() < 4.0 * f64::EPSILON);
    assert!((p.total() - 1.0).abs() < 1e-12);
    let born = joint_probabilities(&state, &UnitVector3::Z, &b).p_pp;
    let sigma = (born * (1.0 - born) / counts.coincidences() as f64).sqrt();
    assert!((p.p_pp - born).abs() <= 3.0 * sigma, "{} vs {born}", p.p_pp);
}

#[test]
fn misalignment_damps_as_the_mean_tilt_cosine_squared() {
    let ladder = [0.0, 0.05, 0.1, 0.2, 0.4];
    let mut previous: Option<(f64, f64)> = None;
    for (k, sigma) in ladder.into_iter().enumerate() {
        let mut cfg = ExperimentConfig::ideal(TwoQubitState::singlet(), optimal(), 400_000, 100 + k as u64);
        cfg.misalignment_sigma = sigma;
        let est = estimate_s(&cfg).unwrap();
        let want = -2.0 * 2f64.sqrt() * mean_cos_tilt(sigma).powi(2);
        assert!((est.s_value - want).abs() <= 5.0 * est.std_error, "σ={sigma}: {} vs {want}", est.s_value);
        if let Some((s_prev, err_prev)) = previous {
            let tol = 5.0 * (err_prev.powi(2) + est.std_error.powi(2)).sqrt();
            assert!(est.s_value.abs() <= s_prev + tol);
        }
        previous = Some((est.s_value.abs(), est.std_error));
    }
}

#[test]
fn visibility_scales_correlations() {
    let mut cfg = ExperimentConfig::ideal(TwoQubitState::singlet(), optimal(), 1_000_000, 12);
    cfg.visibility = 0.5;
    let est = estimate_s(&cfg).unwrap();
    let ideal = correlations(&cfg.state, &cfg.settings);
    for (got, q) in est.correlations.iter().zip(ideal) {
        assert!((got.value - 0.5 * q).abs() <= 5.0 * got.std_error);
    }
}

#[test]
fn efficiency_thins_coincidences_without_bias() {
    let mut cfg = ExperimentConfig::ideal(TwoQubitState::singlet(), optimal(), 2_000_000, 13);
    cfg.efficiency = 0.7;
    let b = UnitVector3::from_spherical(PI / 3.0, 0.0).unwrap();
    let c = simulate_run(&cfg, &UnitVector3::Z, &b).unwrap();
    let frac = c.coincidences() as f64 / c.n_pairs as f64;
    let sd = (0.49 * 0.51 / c.n_pairs as f64).sqrt();
    assert!((frac - 0.49).abs() <= 5.0 * sd, "{frac}");
    let e = estimate_e(&c).unwrap();
    assert!((e.value + 0.5).abs() <= 5.0 * e.std_error);
}

#[test]
fn product_state_stays_classical() {
    let up = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)];
    let down = [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)];
    let state = TwoQubitState::product(up, down).unwrap();
    let cfg = ExperimentConfig::ideal(state, optimal(), 500_000, 14);
    let est = estimate_s(&cfg).unwrap();
    assert!(est.s_value.abs() <= 2.0 + 3.0 * est.std_error);
}

#[test]
fn counts_do_not_depend_on_thread_count() {
    let mut cfg = ExperimentConfig::ideal(TwoQubitState::singlet(), optimal(), 500_000, 15);
    cfg.efficiency = 0.9;
    cfg.visibility = 0.95;
    cfg.misalignment_sigma = 0.02;
    let run = |threads| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| estimate_s(&cfg).unwrap())
    };
    let one = run(1);
    let three = run(3);
    assert_eq!(one.counts, three.counts);
    assert_eq!(one.s_value.to_bits(), three.s_value.to_bits());
}
