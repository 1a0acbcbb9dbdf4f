use std::fmt::Write as _;

use belllab::{canonical_state_permissive, estimate_s, AgrReport, ExperimentConfig, TwoQubitState};
use num_complex::Complex64;
use serde::Serialize;

use super::{coplanar, emit, normalize_input, to_radians, AngleEcho};
use crate::args::{AgrArgs, StateKind};
use crate::error::{CliError, Result};

const DEFAULT_ANGLES_DEG: [f64; 4] = [0.0, 45.0, 90.0, 135.0];

#[derive(Debug, Serialize)]
struct AgrCliReport {
    command: &'static str,
    state_kind: &'static str,
    angles: AngleEcho,
    misalignment: AngleEcho,
    #[serde(flatten)]
    report: AgrReport,
}

fn build_state(args: &AgrArgs) -> Result<TwoQubitState> {
    match args.state {
        StateKind::Singlet => Ok(TwoQubitState::singlet()),
        StateKind::Product => {
            let one = Complex64::new(1.0, 0.0);
            let zero = Complex64::new(0.0, 0.0);
            Ok(TwoQubitState::product([one, zero], [zero, one])?)
        }
        StateKind::Canonical => match (args.c1, args.c2) {
            (Some(c1), Some(c2)) => {
                let (c1, c2) = normalize_input(c1, c2)?;
                Ok(canonical_state_permissive(c1, c2)?)
            }
            _ => Err(CliError::Usage("--state canonical needs --c1 and --c2".into())),
        },
    }
}

pub fn run(args: AgrArgs) -> Result<()> {
    let state = build_state(&args)?;
    let (settings, angles) = match &args.angles {
        Some(a) => coplanar(a, args.radians)?,
        None => coplanar(&DEFAULT_ANGLES_DEG, false)?,
    };
    let sigma = to_radians(args.misalignment, args.radians);
    let cfg = ExperimentConfig {
        state,
        settings,
        n_pairs: args.pairs,
        efficiency: args.efficiency,
        visibility: args.visibility,
        misalignment_sigma: sigma,
        seed: args.seed,
    };
    let est = estimate_s(&cfg)?;
    let report = AgrCliReport {
        command: "agr",
        state_kind: match args.state {
            StateKind::Singlet => "singlet",
            StateKind::Product => "product",
            StateKind::Canonical => "canonical",
        },
        angles,
        misalignment: AngleEcho::from_radians(&[sigma]),
        report: AgrReport::new(&cfg, &est),
    };

    let mut text = String::new();
    writeln!(
        text,
        "belllab {} agr state={} seed={} pairs={} efficiency={} visibility={} misalignment={:.4} deg",
        belllab::VERSION,
        report.state_kind,
        args.seed,
        args.pairs,
        args.efficiency,
        args.visibility,
        sigma.to_degrees()
    )
    .unwrap();
    writeln!(text, "settings  {} (a, b, a', b')", report.angles.text()).unwrap();
    for (l, e) in report.report.counts.iter().zip(&report.report.e) {
        let c = &l.counts;
        writeln!(
            text,
            "{:<8} = {:+.6} ± {:.6}   R++={} R+-={} R-+={} R--={}",
            format!("E({})", l.setting),
            e.value,
            e.std_error,
            c.r_pp,
            c.r_pm,
            c.r_mp,
            c.r_mm
        )
        .unwrap();
    }
    writeln!(text, "S        = {:.6} ± {:.6}", est.s_value, est.std_error).unwrap();
    emit(&args.output, &text, &report)
}
