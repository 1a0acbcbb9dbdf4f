use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt::Write as _;

use belllab::agr::SettingsReport;
use belllab::lhv::BOUND_SIGMAS;
use belllab::{chsh_lhv, gisin_angles, gisin_settings, BuiltinModel, CorrelationEstimate};
use serde::Serialize;

use super::{coplanar, emit, labelled, normalize_input, AngleEcho, Labelled};
use crate::args::LhvArgs;
use crate::error::{CliError, Result};

#[derive(Debug, Serialize)]
struct LhvReport {
    command: &'static str,
    version: &'static str,
    model: BuiltinModel,
    seed: u64,
    samples: u64,
    settings_source: String,
    angles: AngleEcho,
    settings: SettingsReport,
    #[serde(rename = "E")]
    e: Vec<Labelled<CorrelationEstimate>>,
    #[serde(rename = "S")]
    s: f64,
    stderr: f64,
    bound: f64,
    tolerance_sigmas: f64,
    pass: bool,
}

pub fn run(args: LhvArgs) -> Result<()> {
    let (settings, angles, source) = match (&args.gisin_for, &args.angles) {
        (_, Some(a)) => {
            let (s, echo) = coplanar(a, args.radians)?;
            (s, echo, "angles".to_string())
        }
        (gisin_for, None) => {
            let (c1, c2) = match gisin_for.as_deref() {
                Some([c1, c2]) => normalize_input(*c1, *c2)?,
                Some(_) => return Err(CliError::Usage("--gisin-for takes two coefficients".into())),
                None => (FRAC_1_SQRT_2, FRAC_1_SQRT_2),
            };
            let g = gisin_angles(c1, c2)?;
            let echo = AngleEcho::from_radians(&[g.alpha, g.beta, g.alpha_prime, g.beta_prime]);
            (gisin_settings(c1, c2)?, echo, format!("gisin c1={c1:.7} c2={c2:.7}"))
        }
    };

    let est = chsh_lhv(&args.model, &settings, args.samples, args.seed)?;
    let pass = est.within_bound(BOUND_SIGMAS);
    let report = LhvReport {
        command: "lhv",
        version: belllab::VERSION,
        model: args.model,
        seed: args.seed,
        samples: args.samples,
        settings_source: source,
        angles,
        settings: SettingsReport::from(&settings),
        e: labelled(&est.correlations),
        s: est.value,
        stderr: est.std_error,
        bound: 2.0,
        tolerance_sigmas: BOUND_SIGMAS,
        pass,
    };

    let mut text = String::new();
    writeln!(
        text,
        "belllab {} lhv model={} seed={} samples={}",
        report.version,
        args.model.name(),
        args.seed,
        args.samples
    )
    .unwrap();
    writeln!(text, "settings  {} (a, b, a', b'; {})", report.angles.text(), report.settings_source).unwrap();
    for l in &report.e {
        writeln!(text, "{:<8} = {:+.6} ± {:.6}", format!("E({})", l.setting), l.value.value, l.value.std_error)
            .unwrap();
    }
    writeln!(text, "S        = {:.6} ± {:.6}", report.s, report.stderr).unwrap();
    writeln!(text, "bound    S <= 2 + {}σ: {}", BOUND_SIGMAS, if pass { "PASS" } else { "FAIL" }).unwrap();
    emit(&args.output, &text, &report)?;
    if pass {
        Ok(())
    } else {
        Err(CliError::CheckFailed(format!("S = {:.6} exceeds the local bound", est.value)))
    }
}
