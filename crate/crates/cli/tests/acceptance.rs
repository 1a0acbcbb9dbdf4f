//! Acceptance suite. Every criterion prints one PASS/FAIL line with its
//! measured figures, elapsed time and time budget. The process exits with a
//! non-zero status if any criterion fails.

use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use belllab::lhv::{sample_sphere, BOUND_SIGMAS};
use belllab::scan::{coefficients_for_concurrence, xy_band_width};
use belllab::{
    bell1964_check, canonical_state, chsh_lhv, chsh_value, chsh_value_symmetric, correlation_closed,
    correlation_matrix, estimate_correlation, estimate_s, gisin_settings, scan_region, BellSign, BuiltinModel,
    ExperimentConfig, MeasurementSettings, Plane, TwoQubitState, UnitVector3,
};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TSIRELSON: f64 = 2.0 * SQRT_2;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_coefficients(rng: &mut ChaCha8Rng) -> (f64, f64) {
    loop {
        let (s, c) = (rng.random::<f64>() * 2.0 * PI).sin_cos();
        if (s * c).abs() > 1e-6 {
            return (c, s);
        }
    }
}

fn random_settings(rng: &mut ChaCha8Rng) -> MeasurementSettings {
    MeasurementSettings::new(sample_sphere(rng), sample_sphere(rng), sample_sphere(rng), sample_sphere(rng))
}

fn random_state(rng: &mut ChaCha8Rng) -> TwoQubitState {
    let amps = [0; 4].map(|_| Complex64::new(rng.random::<f64>() * 2.0 - 1.0, rng.random::<f64>() * 2.0 - 1.0));
    TwoQubitState::normalized(amps).expect("nonzero amplitudes")
}

fn polar(theta: f64) -> UnitVector3 {
    UnitVector3::from_spherical(theta, 0.0).expect("finite angle")
}

fn gisin_maximum() -> Outcome {
    let mut rng = rng(1);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let (c1, c2) = random_coefficients(&mut rng);
        let state = canonical_state(c1, c2).unwrap();
        let s = chsh_value(&state, &gisin_settings(c1, c2).unwrap());
        let want = 2.0 * (1.0 + 4.0 * (c1 * c2).powi(2)).sqrt();
        worst = worst.max((s - want).abs());
    }
    let h = FRAC_1_SQRT_2;
    let at_half = chsh_value(&canonical_state(h, h).unwrap(), &gisin_settings(h, h).unwrap());
    let pass = worst < 1e-9 && (at_half - TSIRELSON).abs() < 1e-9 && (at_half - 2.828427).abs() < 5e-7;
    outcome(pass, format!("max |S − 2(1+4(c1c2)²)^½| = {worst:.1e} over 100 states; S(|c1c2|=½) = {at_half:.6}"))
}

fn closed_vs_matrix() -> Outcome {
    let mut rng = rng(2);
    let mut worst = 0.0f64;
    for _ in 0..10_000 {
        let (c1, c2) = random_coefficients(&mut rng);
        let (a, b) = (sample_sphere(&mut rng), sample_sphere(&mut rng));
        let closed = correlation_closed(c1, c2, &a, &b).unwrap();
        let matrix = correlation_matrix(&canonical_state(c1, c2).unwrap(), &a, &b);
        worst = worst.max((closed - matrix).abs());
    }
    outcome(worst < 1e-12, format!("max |Δ| = {worst:.1e} over 10⁴ inputs"))
}

fn tsirelson_ceiling() -> Outcome {
    let mut rng = rng(3);
    let mut best_random = f64::MIN;
    for _ in 0..100_000 {
        let state = random_state(&mut rng);
        best_random = best_random.max(chsh_value_symmetric(&state, &random_settings(&mut rng)));
    }
    // Coarse grid: 5 polar × 6 azimuthal angles per direction, all 8 angles swept.
    let mut dirs = Vec::new();
    for i in 0..5 {
        for j in 0..6 {
            dirs.push(UnitVector3::from_spherical(PI * i as f64 / 4.0, 2.0 * PI * j as f64 / 6.0).unwrap());
        }
    }
    let mut best_grid = f64::MIN;
    for state in [TwoQubitState::singlet(), canonical_state(0.8, 0.6).unwrap()] {
        for a in &dirs {
            for b in &dirs {
                for ap in &dirs {
                    for bp in &dirs {
                        let s = MeasurementSettings::new(*a, *b, *ap, *bp);
                        best_grid = best_grid.max(chsh_value_symmetric(&state, &s));
                    }
                }
            }
        }
    }
    let ceiling = TSIRELSON + 1e-6;
    outcome(
        best_random <= ceiling && best_grid <= ceiling,
        format!("max S: random sweep {best_random:.6}, 8-angle grid {best_grid:.6}; ceiling 2√2 = {TSIRELSON:.6}"),
    )
}

fn lhv_bound() -> Outcome {
    let mut rng = rng(4);
    let mut worst_excess = f64::MIN;
    let mut violations = 0;
    for model in [BuiltinModel::BellSign, BuiltinModel::AveragedLinear] {
        for k in 0..1000 {
            let s = random_settings(&mut rng);
            let est = chsh_lhv(&model, &s, 100_000, k).unwrap();
            if !est.within_bound(BOUND_SIGMAS) {
                violations += 1;
            }
            let z = if est.std_error > 0.0 { (est.value - 2.0) / est.std_error } else { f64::NEG_INFINITY };
            worst_excess = worst_excess.max(z);
        }
    }
    let mut worst_angle = 0.0f64;
    for (k, theta) in [PI / 6.0, PI / 4.0, PI / 3.0, PI / 2.0, 2.0 * PI / 3.0].into_iter().enumerate() {
        let e = estimate_correlation(&BellSign, &UnitVector3::Z, &polar(theta), 1_000_000, 40 + k as u64).unwrap();
        let want = -1.0 + 2.0 * theta / PI;
        worst_angle = worst_angle.max((e.value - want).abs() / e.std_error);
    }
    outcome(
        violations == 0 && worst_angle <= 3.0,
        format!(
            "{violations} of 2000 quadruples above 2 + 5σ (max (S−2)/σ = {worst_excess:.2}); \
             E(θ) vs −1+2θ/π worst {worst_angle:.2}σ"
        ),
    )
}

fn bell_1964() -> Outcome {
    let mut rng = rng(5);
    let mut failures = 0;
    let mut worst = f64::MIN;
    for k in 0..100 {
        let [t1, t2, t3] = [0; 3].map(|_| rng.random::<f64>() * 2.0 * PI);
        let c = bell1964_check(&BellSign, &polar(t1), &polar(t2), &polar(t3), 1_000_000, k).unwrap();
        if !c.holds(BOUND_SIGMAS) {
            failures += 1;
        }
        worst = worst.max(c.lhs - c.rhs);
    }
    outcome(failures == 0, format!("{failures} of 100 triples fail; max lhs − rhs = {worst:.4}"))
}

fn agr_reproduction() -> Outcome {
    let settings = MeasurementSettings::coplanar_xz(0.0, PI / 4.0, PI / 2.0, 3.0 * PI / 4.0).unwrap();
    let ideal = ExperimentConfig::ideal(TwoQubitState::singlet(), settings, 10_000_000, 6);
    let est = estimate_s(&ideal).unwrap();
    let ideal_ok = (est.s_value.abs() - TSIRELSON).abs() <= 3.0 * est.std_error;
    let mut damped = ideal;
    damped.visibility = 0.955;
    let d = estimate_s(&damped).unwrap();
    let damped_ok = (2.65..=2.75).contains(&d.s_value.abs());
    outcome(
        ideal_ok && damped_ok,
        format!(
            "ideal |S| = {:.4} ± {:.4} (2√2 = {TSIRELSON:.4}); damped 0.955 |S| = {:.4} ± {:.4}, window [2.65, 2.75]",
            est.s_value.abs(),
            est.std_error,
            d.s_value.abs(),
            d.std_error
        ),
    )
}

fn xy_regions() -> Outcome {
    let n = 1024;
    let cell = 1.0 / n as f64;
    let mut pass = true;
    let mut parts = Vec::new();
    let mut fractions = Vec::new();
    for (c, nominal) in [(1.0, 0.25), (0.8, 0.155), (8.0 / 11.0, 0.075)] {
        let (c1, c2) = coefficients_for_concurrence(c).unwrap();
        let f = scan_region(Plane::Xy, c1, c2, n).unwrap().violating_fraction;
        let analytic = xy_band_width(c) / (2.0 * PI);
        pass &= (f - analytic).abs() <= 2.0 * cell;
        pass &= (f - nominal).abs() < 0.001;
        parts.push(format!("C={c:.4}: {f:.5} (band {analytic:.5})"));
        fractions.push(f);
    }
    pass &= fractions.windows(2).all(|w| w[1] < w[0]);
    let (c1, c2) = coefficients_for_concurrence(0.6).unwrap();
    let low = scan_region(Plane::Xy, c1, c2, n).unwrap().violating_fraction;
    pass &= low == 0.0;
    parts.push(format!("C=0.6: {low}"));
    outcome(pass, parts.join("; "))
}

fn run_cli(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_belllab")).args(args).env_remove("BELLLAB_SEED").output().expect("binary runs")
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let runs: [(&str, Vec<&str>); 3] = [
        (
            "agr",
            vec![
                "agr",
                "--pairs",
                "200000",
                "--efficiency",
                "0.8",
                "--visibility",
                "0.95",
                "--misalignment",
                "2",
                "--seed",
                "17",
            ],
        ),
        (
            "lhv",
            vec![
                "lhv",
                "--model",
                "bell-sign",
                "--samples",
                "200000",
                "--seed",
                "17",
                "--angles",
                "0",
                "30",
                "90",
                "120",
            ],
        ),
        ("scan", vec!["scan", "--plane", "xy", "--concurrence", "0.8", "--grid", "128", "--format", "json"]),
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, args) in runs {
        let files: Vec<Vec<u8>> = ["a", "b", "c"]
            .iter()
            .map(|tag| {
                let path = dir.path().join(format!("{name}-{tag}.out"));
                let mut full = args.clone();
                let p = path.to_str().unwrap().to_string();
                if *tag == "c" {
                    full.splice(0..0, ["--threads", "3"]);
                }
                let mut full: Vec<String> = full.iter().map(|s| s.to_string()).collect();
                full.extend(["--out".to_string(), p]);
                let refs: Vec<&str> = full.iter().map(String::as_str).collect();
                let out = run_cli(&refs);
                if !out.status.success() {
                    return Vec::new();
                }
                std::fs::read(Path::new(&path)).unwrap_or_default()
            })
            .collect();
        let same = !files[0].is_empty() && files.iter().all(|f| f == &files[0]);
        pass &= same;
        parts.push(format!("{name}: {} bytes {}", files[0].len(), if same { "identical" } else { "DIFFER" }));
    }
    outcome(pass, parts.join("; ") + " (third run with --threads 3)")
}

fn main() {
    type Criterion = (&'static str, Duration, fn() -> Outcome);
    let criteria: [Criterion; 8] = [
        ("Gisin maximal violation", Duration::from_secs(1), gisin_maximum),
        ("closed form equals matrix route", Duration::from_secs(5), closed_vs_matrix),
        ("Tsirelson ceiling", Duration::from_secs(120), tsirelson_ceiling),
        ("local hidden-variable bound", Duration::from_secs(300), lhv_bound),
        ("three-setting reduction", Duration::from_secs(60), bell_1964),
        ("simulated two-channel experiment", Duration::from_secs(120), agr_reproduction),
        ("xy violation regions", Duration::from_secs(30), xy_regions),
        ("bit-identical reruns", Duration::from_secs(60), determinism),
    ];
    let mut failed = 0;
    for (i, (name, budget, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let on_time = elapsed <= *budget;
        let pass = result.pass && on_time;
        failed += usize::from(!pass);
        println!(
            "{} [{}] {name}: {} ({:.2} s, budget {} s{})",
            if pass { "PASS" } else { "FAIL" },
            i + 1,
            result.detail,
            elapsed.as_secs_f64(),
            budget.as_secs(),
            if on_time { "" } else { ", over budget" }
        );
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
