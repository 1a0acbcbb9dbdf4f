use std::fmt::Write as _;

use belllab::agr::SettingsReport;
use belllab::quantum::correlations;
use belllab::{
    canonical_state, canonical_state_permissive, chsh_value, chsh_value_symmetric, gisin_angles, max_violation,
};
use serde::Serialize;

use super::{coplanar, emit, labelled, normalize_input, AngleEcho, Labelled};
use crate::args::ChshArgs;
use crate::error::Result;

#[derive(Debug, Clone, Serialize)]
struct Value {
    value: f64,
}

#[derive(Debug, Serialize)]
struct ChshReport {
    command: &'static str,
    version: &'static str,
    c1: f64,
    c2: f64,
    concurrence: f64,
    settings_source: &'static str,
    angles: AngleEcho,
    settings: SettingsReport,
    #[serde(rename = "P")]
    p: Vec<Labelled<Value>>,
    #[serde(rename = "S")]
    s: f64,
    s_symmetric: f64,
    max_violation: f64,
    violated: bool,
}

pub fn run(args: ChshArgs) -> Result<()> {
    let (c1, c2) = normalize_input(args.c1, args.c2)?;
    let state = if args.permissive { canonical_state_permissive(c1, c2)? } else { canonical_state(c1, c2)? };

    let (settings, angles, source) = match &args.source.angles {
        Some(a) => {
            let (s, echo) = coplanar(a, args.radians)?;
            (s, echo, "angles")
        }
        None => {
            let g = gisin_angles(c1, c2)?;
            let s = belllab::gisin_settings(c1, c2)?;
            let echo = AngleEcho::from_radians(&[g.alpha, g.beta, g.alpha_prime, g.beta_prime]);
            (s, echo, "gisin")
        }
    };

    let p = correlations(&state, &settings);
    let s = chsh_value(&state, &settings);
    let report = ChshReport {
        command: "chsh",
        version: belllab::VERSION,
        c1,
        c2,
        concurrence: 2.0 * (c1 * c2).abs(),
        settings_source: source,
        angles,
        settings: SettingsReport::from(&settings),
        p: labelled(&p.map(|value| Value { value })),
        s,
        s_symmetric: chsh_value_symmetric(&state, &settings),
        max_violation: max_violation(c1, c2),
        violated: s > 2.0 + belllab::scan::BOUNDARY_TOL,
    };

    let mut text = String::new();
    writeln!(text, "belllab {} chsh", report.version).unwrap();
    writeln!(text, "state          c1={:.7} c2={:.7} concurrence={:.6}", c1, c2, report.concurrence).unwrap();
    writeln!(text, "settings       {} (a, b, a', b'; {})", report.angles.text(), source).unwrap();
    for l in &report.p {
        writeln!(text, "{:<14} = {:+.6}", format!("P({})", l.setting), l.value.value).unwrap();
    }
    writeln!(text, "S              = {:.6}", report.s).unwrap();
    writeln!(text, "S (symmetric)  = {:.6}", report.s_symmetric).unwrap();
    writeln!(text, "max_violation  = {:.6}", report.max_violation).unwrap();
    writeln!(text, "violated       = {}", report.violated).unwrap();
    emit(&args.output, &text, &report)
}
