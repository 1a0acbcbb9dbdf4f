use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};

use belllab::lhv::{sample_sphere, BOUND_SIGMAS};
use belllab::sampling::{stream_rng, StreamRng};
use belllab::scan::coefficients_for_concurrence;
use belllab::{
    canonical_state, chsh_lhv, chsh_value, chsh_value_symmetric, correlation_closed, correlation_matrix, estimate_s,
    gisin_settings, max_violation, scan_region, BuiltinModel, ExperimentConfig, MeasurementSettings, Plane,
    TwoQubitState,
};

use crate::args::SelftestArgs;
use crate::error::{CliError, Result};

struct Check {
    name: &'static str,
    pass: bool,
    detail: String,
}

fn random_coefficients(rng: &mut StreamRng) -> (f64, f64) {
    loop {
        let v = sample_sphere(rng);
        let r = v.x().hypot(v.y());
        if r > 1e-6 && (v.x() * v.y()).abs() / (r * r) > 1e-3 {
            return (v.x() / r, v.y() / r);
        }
    }
}

fn gisin(seed: u64) -> Check {
    let mut rng = stream_rng(seed, 100, 0);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let (c1, c2) = random_coefficients(&mut rng);
        let state = canonical_state(c1, c2).expect("entangled");
        let s = gisin_settings(c1, c2).expect("entangled");
        worst = worst.max((chsh_value(&state, &s) - max_violation(c1, c2)).abs());
    }
    Check {
        name: "optimal settings reach 2(1+4(c1c2)^2)^(1/2)",
        pass: worst < 1e-9,
        detail: format!("max |Δ| = {worst:.2e}"),
    }
}

fn closed_vs_matrix(seed: u64) -> Check {
    let mut rng = stream_rng(seed, 101, 0);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let (c1, c2) = random_coefficients(&mut rng);
        let (a, b) = (sample_sphere(&mut rng), sample_sphere(&mut rng));
        let state = canonical_state(c1, c2).expect("entangled");
        let closed = correlation_closed(c1, c2, &a, &b).expect("normalized");
        worst = worst.max((closed - correlation_matrix(&state, &a, &b)).abs());
    }
    Check {
        name: "closed form equals matrix expectation",
        pass: worst < 1e-12,
        detail: format!("max |Δ| = {worst:.2e}"),
    }
}

fn tsirelson(seed: u64) -> Check {
    let mut rng = stream_rng(seed, 102, 0);
    let mut best = f64::MIN;
    for _ in 0..2000 {
        let (c1, c2) = random_coefficients(&mut rng);
        let state = canonical_state(c1, c2).expect("entangled");
        let s = MeasurementSettings::new(
            sample_sphere(&mut rng),
            sample_sphere(&mut rng),
            sample_sphere(&mut rng),
            sample_sphere(&mut rng),
        );
        best = best.max(chsh_value_symmetric(&state, &s));
    }
    Check {
        name: "random settings stay below 2√2",
        pass: best <= 2.0 * SQRT_2 + 1e-6,
        detail: format!("max S = {best:.6}"),
    }
}

fn lhv_bound(seed: u64) -> Check {
    let s = gisin_settings(FRAC_1_SQRT_2, FRAC_1_SQRT_2).expect("entangled");
    let mut pass = true;
    let mut detail = Vec::new();
    for model in [BuiltinModel::BellSign, BuiltinModel::AveragedLinear] {
        let est = chsh_lhv(&model, &s, 100_000, seed).expect("n > 0");
        pass &= est.within_bound(BOUND_SIGMAS);
        detail.push(format!("{} S = {:.4} ± {:.4}", model.name(), est.value, est.std_error));
    }
    Check { name: "hidden-variable models obey S ≤ 2", pass, detail: detail.join(", ") }
}

fn scan_fraction() -> Check {
    let (c1, c2) = coefficients_for_concurrence(1.0).expect("in range");
    let n = 128;
    let g = scan_region(Plane::Xy, c1, c2, n).expect("normalized");
    let pass = (g.violating_fraction - 0.25).abs() <= 2.0 / n as f64;
    Check {
        name: "xy region covers a quarter at C = 1",
        pass,
        detail: format!("fraction = {:.6}", g.violating_fraction),
    }
}

fn agr_ideal(seed: u64) -> Check {
    let settings = MeasurementSettings::coplanar_xz(0.0, PI / 4.0, PI / 2.0, 3.0 * PI / 4.0).expect("finite");
    let cfg = ExperimentConfig::ideal(TwoQubitState::singlet(), settings, 100_000, seed);
    let est = estimate_s(&cfg).expect("valid config");
    let pass = (est.s_value.abs() - 2.0 * SQRT_2).abs() <= 5.0 * est.std_error;
    Check {
        name: "ideal simulated run gives |S| = 2√2",
        pass,
        detail: format!("S = {:.4} ± {:.4}", est.s_value, est.std_error),
    }
}

pub fn run(args: SelftestArgs) -> Result<()> {
    println!("belllab {} selftest seed={}", belllab::VERSION, args.seed);
    let checks = [
        gisin(args.seed),
        closed_vs_matrix(args.seed),
        tsirelson(args.seed),
        lhv_bound(args.seed),
        scan_fraction(),
        agr_ideal(args.seed),
    ];
    let mut failed = 0;
    for c in &checks {
        println!("{} {} ({})", if c.pass { "PASS" } else { "FAIL" }, c.name, c.detail);
        failed += usize::from(!c.pass);
    }
    if failed > 0 {
        return Err(CliError::CheckFailed(format!("{failed} of {} checks failed", checks.len())));
    }
    Ok(())
}
