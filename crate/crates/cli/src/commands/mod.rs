mod agr;
mod chsh;
mod lhv;
mod scan;
mod selftest;

use std::fs;
use std::path::Path;

use belllab::agr::SETTING_LABELS;
use belllab::MeasurementSettings;
use serde::Serialize;

use crate::args::{Command, Format, OutputArgs};
use crate::error::{CliError, Result};

pub fn run(command: Command) -> Result<()> {
    match command {
        Command::Chsh(a) => chsh::run(a),
        Command::Scan(a) => scan::run(a),
        Command::Lhv(a) => lhv::run(a),
        Command::Agr(a) => agr::run(a),
        Command::Selftest(a) => selftest::run(a),
    }
}

/// Largest accepted `|c1² + c2² − 1|` on the command line. Inputs such as
/// `0.7071068` are rescaled onto the unit circle before use.
pub const INPUT_NORM_TOL: f64 = 1e-6;

pub fn normalize_input(c1: f64, c2: f64) -> Result<(f64, f64)> {
    let n = c1 * c1 + c2 * c2;
    if !n.is_finite() || (n - 1.0).abs() > INPUT_NORM_TOL {
        return Err(CliError::Usage(format!("coefficients not normalized: c1^2 + c2^2 = {n}")));
    }
    let r = n.sqrt();
    Ok((c1 / r, c2 / r))
}

pub fn to_radians(v: f64, radians: bool) -> f64 {
    if radians {
        v
    } else {
        v.to_radians()
    }
}

/// The same angles in both units.
#[derive(Debug, Clone, Serialize)]
pub struct AngleEcho {
    pub degrees: Vec<f64>,
    pub radians: Vec<f64>,
}

impl AngleEcho {
    pub fn from_radians(rad: &[f64]) -> Self {
        Self { degrees: rad.iter().map(|r| r.to_degrees()).collect(), radians: rad.to_vec() }
    }

    pub fn text(&self) -> String {
        let deg: Vec<String> = self.degrees.iter().map(|d| format!("{d:.4}")).collect();
        let rad: Vec<String> = self.radians.iter().map(|r| format!("{r:.6}")).collect();
        format!("[{}] deg = [{}] rad", deg.join(", "), rad.join(", "))
    }
}

/// Four polar angles in the xz-plane, converted to settings.
pub fn coplanar(angles: &[f64], radians: bool) -> Result<(MeasurementSettings, AngleEcho)> {
    let rad: Vec<f64> = angles.iter().map(|&v| to_radians(v, radians)).collect();
    if rad.len() != 4 || rad.iter().any(|r| !r.is_finite()) {
        return Err(CliError::Usage("expected four finite angles".into()));
    }
    let s = MeasurementSettings::coplanar_xz(rad[0], rad[1], rad[2], rad[3])?;
    Ok((s, AngleEcho::from_radians(&rad)))
}

#[derive(Debug, Clone, Serialize)]
pub struct Labelled<T> {
    pub setting: &'static str,
    #[serde(flatten)]
    pub value: T,
}

pub fn labelled<T: Clone>(values: &[T; 4]) -> Vec<Labelled<T>> {
    SETTING_LABELS.iter().zip(values).map(|(l, v)| Labelled { setting: l, value: v.clone() }).collect()
}

pub fn write_file(path: &Path, contents: &[u8]) -> Result<()> {
    fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

/// Prints `text` or the JSON document, or writes the JSON document to
/// `--out` and prints `text`.
pub fn emit<T: Serialize>(out: &OutputArgs, text: &str, report: &T) -> Result<()> {
    if out.format == Format::Csv {
        return Err(CliError::Usage("csv output is only available for scan".into()));
    }
    let json = || serde_json::to_string_pretty(report).expect("report serializes") + "\n";
    match (&out.out, out.format) {
        (Some(path), _) => {
            write_file(path, json().as_bytes())?;
            print!("{text}");
            println!("report written to {}", path.display());
        }
        (None, Format::Json) => print!("{}", json()),
        (None, _) => print!("{text}"),
    }
    Ok(())
}
