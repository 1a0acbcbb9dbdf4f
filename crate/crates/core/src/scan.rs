//! Two-angle families of orthogonal polarizer settings and grid scans of the
//! region where the CHSH left-hand side exceeds 2.
//!
//! In every plane the settings satisfy `â·â′ = 0 = b̂·b̂′`. In the xy-plane the
//! exact left-hand side equals `C(ψ)·f(φ₁ − φ₂)`, so the violating band is
//! `f > 2/C` and shrinks as the concurrence drops; it vanishes for
//! `C ≤ 1/√2`.

use std::f64::consts::PI;
use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::algebra::{normalized_coefficients, UnitVector3};
use crate::error::{invalid, BellError, Result};
use crate::quantum::{bell_lhs, correlation_closed_unchecked, MeasurementSettings};

/// Cells count as violating only above `2 + BOUNDARY_TOL`; analytic equality
/// with 2 is non-violating.
pub const BOUNDARY_TOL: f64 = 1e-12;
pub const DEFAULT_GRID: usize = 512;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Plane {
    Xz,
    Xy,
    Yz,
}

impl Plane {
    pub const ALL: [Plane; 3] = [Plane::Xz, Plane::Xy, Plane::Yz];

    pub fn name(&self) -> &'static str {
        match self {
            Plane::Xz => "xz",
            Plane::Xy => "xy",
            Plane::Yz => "yz",
        }
    }

    /// Names of the two scanned angles.
    pub fn axis_names(&self) -> (&'static str, &'static str) {
        match self {
            Plane::Xy => ("phi1", "phi2"),
            Plane::Xz | Plane::Yz => ("theta1", "theta2"),
        }
    }
}

impl fmt::Display for Plane {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Plane {
    type Err = BellError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "xz" => Ok(Plane::Xz),
            "xy" => Ok(Plane::Xy),
            "yz" => Ok(Plane::Yz),
            other => Err(invalid(format!("unknown plane '{other}'"))),
        }
    }
}

/// Sign of `2c₁c₂` in the maximally entangled cases `2c₁c₂ = ±1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SignCase {
    Plus,
    Minus,
}

impl SignCase {
    pub fn value(&self) -> f64 {
        match self {
            SignCase::Plus => 1.0,
            SignCase::Minus => -1.0,
        }
    }

    pub fn of(product: f64) -> SignCase {
        if product < 0.0 {
            SignCase::Minus
        } else {
            SignCase::Plus
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScenarioId {
    pub plane: Plane,
    pub sign_case: SignCase,
}

/// The orthogonal-pair settings for one plane.
///
/// xz: `â = (sinθ₁, 0, cosθ₁)`, `â′ = (cosθ₁, 0, −sinθ₁)`, likewise b̂ with θ₂.
/// xy: `â = (cosφ₁, sinφ₁, 0)`, `â′ = (−sinφ₁, cosφ₁, 0)`, likewise b̂ with φ₂.
/// yz: the xz family with x and y exchanged.
pub fn scenario_settings(plane: Plane, angle1: f64, angle2: f64) -> Result<MeasurementSettings> {
    let (s1, c1) = angle1.sin_cos();
    let (s2, c2) = angle2.sin_cos();
    let v = |x, y, z| UnitVector3::normalize(x, y, z);
    Ok(match plane {
        Plane::Xz => MeasurementSettings {
            a: v(s1, 0.0, c1)?,
            b: v(s2, 0.0, c2)?,
            a_prime: v(c1, 0.0, -s1)?,
            b_prime: v(c2, 0.0, -s2)?,
        },
        Plane::Xy => MeasurementSettings {
            a: v(c1, s1, 0.0)?,
            b: v(c2, s2, 0.0)?,
            a_prime: v(-s1, c1, 0.0)?,
            b_prime: v(-s2, c2, 0.0)?,
        },
        Plane::Yz => MeasurementSettings {
            a: v(0.0, s1, c1)?,
            b: v(0.0, s2, c2)?,
            a_prime: v(0.0, c1, -s1)?,
            b_prime: v(0.0, c2, -s2)?,
        },
    })
}

/// Closed-form left-hand side for `2c₁c₂ = ±1`.
///
/// xz/yz, `+1`: `|cos s + sin s| + cos s + sin s` with `s = θ₁ + θ₂`.
/// xz/yz, `−1`: `|cos d − sin d| − (cos d − sin d)` with `d = θ₁ − θ₂`.
/// xy, `±1`: `|cos x − sin x| ± (cos x − sin x)` with `x = φ₁ − φ₂`.
pub fn scenario_f(plane: Plane, sign_case: SignCase, angle1: f64, angle2: f64) -> f64 {
    match (plane, sign_case) {
        (Plane::Xz | Plane::Yz, SignCase::Plus) => {
            let s = angle1 + angle2;
            let g = s.cos() + s.sin();
            g.abs() + g
        }
        (Plane::Xz | Plane::Yz, SignCase::Minus) | (Plane::Xy, _) => {
            let d = angle1 - angle2;
            let g = d.cos() - d.sin();
            g.abs() + sign_case.value() * g
        }
    }
}

/// Real coefficients `c1 ≥ c2 ≥ 0` with `2c₁c₂ = concurrence`.
pub fn coefficients_for_concurrence(concurrence: f64) -> Result<(f64, f64)> {
    if !(0.0..=1.0).contains(&concurrence) {
        return Err(invalid(format!("concurrence {concurrence} outside [0, 1]")));
    }
    let r = (1.0 - concurrence * concurrence).max(0.0).sqrt();
    let c1 = ((1.0 + r) / 2.0).sqrt();
    let c2 = ((1.0 - r) / 2.0).max(0.0).sqrt();
    Ok((c1, c2))
}

/// Width in radians of the xy violating band `C·f(x) > 2`, over one period `2π`.
pub fn xy_band_width(concurrence: f64) -> f64 {
    let t = 1.0 / (concurrence * std::f64::consts::SQRT_2);
    if t >= 1.0 {
        0.0
    } else {
        2.0 * t.acos()
    }
}

/// Left-hand side values over a uniform cell-centred grid on `[0, 2π)²`.
///
/// `values` and `scaled_f` are row-major: row `i` is `axis1[i]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ViolationGrid {
    pub plane: Plane,
    pub c1: f64,
    pub c2: f64,
    pub concurrence: f64,
    pub axis1: Vec<f64>,
    pub axis2: Vec<f64>,
    pub values: Vec<f64>,
    /// `C(ψ)·f` for the sign case of `c₁c₂`.
    pub scaled_f: Vec<f64>,
    pub threshold: f64,
    pub violating_fraction: f64,
}

impl ViolationGrid {
    pub fn grid_n(&self) -> usize {
        self.axis1.len()
    }

    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.axis2.len() + j]
    }

    pub fn is_violated(&self, i: usize, j: usize) -> bool {
        is_violation(self.value(i, j), self.threshold)
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    fn metadata(&self) -> String {
        format!(
            "plane={} c1={} c2={} concurrence={} grid_n={} threshold={} violating_fraction={} version={}",
            self.plane,
            self.c1,
            self.c2,
            self.concurrence,
            self.grid_n(),
            self.threshold,
            self.violating_fraction,
            crate::VERSION
        )
    }

    /// `# metadata` line, then `angle1,angle2,bell_lhs,violated` rows.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "# {}", self.metadata())?;
        writeln!(w, "angle1,angle2,bell_lhs,violated")?;
        for (i, a1) in self.axis1.iter().enumerate() {
            for (j, a2) in self.axis2.iter().enumerate() {
                let v = self.value(i, j);
                writeln!(w, "{a1},{a2},{v},{}", u8::from(is_violation(v, self.threshold)))?;
            }
        }
        Ok(())
    }

    /// JSON document with the axes and the value matrix as nested rows.
    pub fn to_json_value(&self) -> GridJson<'_> {
        let n2 = self.axis2.len();
        GridJson {
            meta: GridMeta {
                plane: self.plane,
                c1: self.c1,
                c2: self.c2,
                concurrence: self.concurrence,
                grid_n: self.grid_n(),
                threshold: self.threshold,
                violating_fraction: self.violating_fraction,
                version: crate::VERSION,
            },
            axis1: &self.axis1,
            axis2: &self.axis2,
            values: self.values.chunks(n2).collect(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct GridMeta {
    pub plane: Plane,
    pub c1: f64,
    pub c2: f64,
    pub concurrence: f64,
    pub grid_n: usize,
    pub threshold: f64,
    pub violating_fraction: f64,
    pub version: &'static str,
}

#[derive(Debug, Serialize)]
pub struct GridJson<'a> {
    pub meta: GridMeta,
    pub axis1: &'a [f64],
    pub axis2: &'a [f64],
    pub values: Vec<&'a [f64]>,
}

fn is_violation(value: f64, threshold: f64) -> bool {
    value > threshold + BOUNDARY_TOL
}

/// Cell centres `(k + ½)·2π/n`.
pub fn grid_axis(n: usize) -> Vec<f64> {
    let step = 2.0 * PI / n as f64;
    (0..n).map(|k| (k as f64 + 0.5) * step).collect()
}

/// Exact left-hand side `|P(a,b) − P(a,b′)| + P(a′,b) + P(a′,b′)` for
/// `c1|01⟩ + c2|10⟩` at one grid point.
pub fn bell_lhs_at(plane: Plane, c1: f64, c2: f64, angle1: f64, angle2: f64) -> Result<f64> {
    let (c1, c2) = normalized_coefficients(c1, c2)?;
    let s = scenario_settings(plane, angle1, angle2)?;
    Ok(lhs_unchecked(2.0 * c1 * c2, &s))
}

fn lhs_unchecked(two_c1c2: f64, s: &MeasurementSettings) -> f64 {
    bell_lhs(s.pairs().map(|(x, y)| correlation_closed_unchecked(two_c1c2, &x, &y)))
}

fn scan_row(plane: Plane, two_c1c2: f64, a1: f64, axis2: &[f64]) -> Vec<(f64, f64)> {
    let conc = two_c1c2.abs();
    let case = SignCase::of(two_c1c2);
    axis2
        .iter()
        .map(|&a2| {
            let s = scenario_settings(plane, a1, a2).expect("finite grid angles");
            (lhs_unchecked(two_c1c2, &s), conc * scenario_f(plane, case, a1, a2))
        })
        .collect()
}

pub fn scan_region(plane: Plane, c1: f64, c2: f64, grid_n: usize) -> Result<ViolationGrid> {
    if grid_n < 2 {
        return Err(invalid("grid_n must be at least 2"));
    }
    let (c1, c2) = normalized_coefficients(c1, c2)?;
    let two_c1c2 = 2.0 * c1 * c2;
    let axis = grid_axis(grid_n);

    #[cfg(feature = "parallel")]
    let rows: Vec<Vec<(f64, f64)>> = {
        use rayon::prelude::*;
        axis.par_iter().map(|&a1| scan_row(plane, two_c1c2, a1, &axis)).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let rows: Vec<Vec<(f64, f64)>> = axis.iter().map(|&a1| scan_row(plane, two_c1c2, a1, &axis)).collect();

    let (values, scaled_f): (Vec<f64>, Vec<f64>) = rows.into_iter().flatten().unzip();
    let threshold = 2.0;
    let violating = values.iter().filter(|&&v| is_violation(v, threshold)).count();
    Ok(ViolationGrid {
        plane,
        c1,
        c2,
        concurrence: two_c1c2.abs(),
        axis1: axis.clone(),
        axis2: axis,
        violating_fraction: violating as f64 / values.len() as f64,
        values,
        scaled_f,
        threshold,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, SQRT_2};

    #[test]
    fn xy_settings_at_origin() {
        let s = scenario_settings(Plane::Xy, 0.0, 0.0).unwrap();
        assert_eq!(s.a.components(), [1.0, 0.0, 0.0]);
        assert_eq!(s.b.components(), [1.0, 0.0, 0.0]);
        assert_eq!(s.a_prime.components(), [-0.0, 1.0, 0.0]);
        assert_eq!(s.b_prime.components(), [-0.0, 1.0, 0.0]);
    }

    #[test]
    fn xz_settings_at_origin() {
        let s = scenario_settings(Plane::Xz, 0.0, 0.0).unwrap();
        assert_eq!(s.a.components(), [0.0, 0.0, 1.0]);
        assert_eq!(s.b.components(), [0.0, 0.0, 1.0]);
        assert_eq!(s.a_prime.components(), [1.0, 0.0, -0.0]);
        assert_eq!(s.b_prime.components(), [1.0, 0.0, -0.0]);
    }

    #[test]
    fn settings_pairs_are_orthogonal() {
        for plane in Plane::ALL {
            for (t1, t2) in [(0.3, 1.7), (2.5, -0.4), (4.0, 6.0)] {
                let s = scenario_settings(plane, t1, t2).unwrap();
                assert!(s.a.dot(&s.a_prime).abs() < 1e-12);
                assert!(s.b.dot(&s.b_prime).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn closed_form_f_values() {
        assert!((scenario_f(Plane::Xy, SignCase::Plus, -FRAC_PI_4, 0.0) - 2.0 * SQRT_2).abs() < 1e-12);
        assert!(scenario_f(Plane::Xy, SignCase::Plus, FRAC_PI_2, 0.0).abs() < 1e-12);
        assert!((scenario_f(Plane::Xz, SignCase::Plus, FRAC_PI_4, 0.0) - 2.0 * SQRT_2).abs() < 1e-12);
        assert!((scenario_f(Plane::Xz, SignCase::Plus, 0.1, FRAC_PI_4 - 0.1) - 2.0 * SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn concurrence_coefficients() {
        let (c1, c2) = coefficients_for_concurrence(0.8).unwrap();
        assert!((c1 - 0.8f64.sqrt()).abs() < 1e-15 && (c2 - 0.2f64.sqrt()).abs() < 1e-15);
        let (c1, c2) = coefficients_for_concurrence(8.0 / 11.0).unwrap();
        assert!((c1 - (0.5 + 57f64.sqrt() / 22.0).sqrt()).abs() < 1e-15);
        assert!((2.0 * c1 * c2 - 8.0 / 11.0).abs() < 1e-15);
        assert!(coefficients_for_concurrence(1.5).is_err());
    }

    #[test]
    fn band_widths() {
        assert!((xy_band_width(1.0) - FRAC_PI_2).abs() < 1e-12);
        assert!((xy_band_width(0.8) - 0.973_389_910_149_547).abs() < 1e-12);
        assert_eq!(xy_band_width(0.6), 0.0);
        // Analytically zero; rounding in 1/(C√2) leaves a sliver of order √ε.
        assert!(xy_band_width(std::f64::consts::FRAC_1_SQRT_2) < 1e-7);
    }

    #[test]
    fn scan_rejects_bad_input() {
        assert!(scan_region(Plane::Xy, 0.5, 0.5, 64).is_err());
        assert!(scan_region(Plane::Xy, 0.6, 0.8, 1).is_err());
    }

    #[test]
    fn small_scan_matches_band() {
        let (c1, c2) = coefficients_for_concurrence(1.0).unwrap();
        let g = scan_region(Plane::Xy, c1, c2, 64).unwrap();
        assert_eq!(g.values.len(), 64 * 64);
        assert!((g.violating_fraction - 0.25).abs() <= 2.0 / 64.0);
        assert!(g.max_value() <= 2.0 * SQRT_2 + 1e-9);
    }

    #[test]
    fn csv_layout() {
        let g = scan_region(Plane::Xz, 0.6, 0.8, 4).unwrap();
        let mut buf = Vec::new();
        g.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert!(lines[0].starts_with("# plane=xz"));
        assert_eq!(lines[1], "angle1,angle2,bell_lhs,violated");
        assert_eq!(lines.len(), 2 + 16);
        assert_eq!(lines[2].split(',').count(), 4);
    }
}
