//! Browser bindings: violation-region scan, a CHSH explorer over the two
//! second-side angles, and local versus quantum correlation curves.
//!
//! The plain functions return `Result<_, String>` so they run in native
//! tests; the `#[wasm_bindgen]` wrappers turn errors into JS exceptions.

use std::f64::consts::PI;

use belllab::quantum::correlations;
use belllab::scan::coefficients_for_concurrence;
use belllab::{
    canonical_state_permissive, chsh_value, estimate_correlation, gisin_angles, max_violation, scan_region,
    BuiltinModel, MeasurementSettings, Plane, UnitVector3,
};
use wasm_bindgen::prelude::*;

fn coefficients(concurrence: f64, negative: bool) -> Result<(f64, f64), String> {
    let (c1, c2) = coefficients_for_concurrence(concurrence).map_err(|e| e.to_string())?;
    Ok((c1, if negative { -c2 } else { c2 }))
}

#[wasm_bindgen]
pub struct Region {
    grid_n: usize,
    values: Vec<f64>,
    fraction: f64,
    max_value: f64,
}

#[wasm_bindgen]
impl Region {
    #[wasm_bindgen(getter)]
    pub fn grid_n(&self) -> usize {
        self.grid_n
    }

    /// Row-major left-hand side values.
    #[wasm_bindgen(getter)]
    pub fn values(&self) -> Vec<f64> {
        self.values.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn violating_fraction(&self) -> f64 {
        self.fraction
    }

    #[wasm_bindgen(getter)]
    pub fn max_value(&self) -> f64 {
        self.max_value
    }
}

pub fn region(plane: &str, concurrence: f64, negative: bool, grid_n: usize) -> Result<Region, String> {
    let plane: Plane = plane.parse().map_err(|e: belllab::BellError| e.to_string())?;
    let (c1, c2) = coefficients(concurrence, negative)?;
    let g = scan_region(plane, c1, c2, grid_n).map_err(|e| e.to_string())?;
    Ok(Region { grid_n, max_value: g.max_value(), fraction: g.violating_fraction, values: g.values })
}

#[wasm_bindgen(js_name = scanRegion)]
pub fn scan_region_js(plane: &str, concurrence: f64, negative: bool, grid_n: usize) -> Result<Region, JsError> {
    region(plane, concurrence, negative, grid_n).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
#[derive(Debug, Clone, Copy)]
pub struct ChshPoint {
    correlations: [f64; 4],
    s: f64,
    max: f64,
    optimal_beta: f64,
    optimal_beta_prime: f64,
}

#[wasm_bindgen]
impl ChshPoint {
    /// `P(a,b), P(a,b′), P(a′,b), P(a′,b′)`.
    #[wasm_bindgen(getter)]
    pub fn correlations(&self) -> Vec<f64> {
        self.correlations.to_vec()
    }

    #[wasm_bindgen(getter)]
    pub fn s(&self) -> f64 {
        self.s
    }

    #[wasm_bindgen(getter)]
    pub fn max(&self) -> f64 {
        self.max
    }

    /// Optimal β in degrees, NaN for a separable state.
    #[wasm_bindgen(getter)]
    pub fn optimal_beta(&self) -> f64 {
        self.optimal_beta
    }

    #[wasm_bindgen(getter)]
    pub fn optimal_beta_prime(&self) -> f64 {
        self.optimal_beta_prime
    }
}

/// `a = ẑ`, `a′ = ±x̂` and `b`, `b′` at polar angles `beta`, `beta_prime`
/// (degrees) in the xz-plane.
pub fn chsh_point(concurrence: f64, beta: f64, beta_prime: f64) -> Result<ChshPoint, String> {
    let (c1, c2) = coefficients(concurrence, false)?;
    let state = canonical_state_permissive(c1, c2).map_err(|e| e.to_string())?;
    let settings = MeasurementSettings::coplanar_xz(0.0, beta.to_radians(), PI / 2.0, beta_prime.to_radians())
        .map_err(|e| e.to_string())?;
    let (optimal_beta, optimal_beta_prime) = match gisin_angles(c1, c2) {
        Ok(g) => (g.beta.to_degrees(), g.beta_prime.to_degrees()),
        Err(_) => (f64::NAN, f64::NAN),
    };
    Ok(ChshPoint {
        correlations: correlations(&state, &settings),
        s: chsh_value(&state, &settings),
        max: max_violation(c1, c2),
        optimal_beta,
        optimal_beta_prime,
    })
}

#[wasm_bindgen(js_name = chshPoint)]
pub fn chsh_point_js(concurrence: f64, beta: f64, beta_prime: f64) -> Result<ChshPoint, JsError> {
    chsh_point(concurrence, beta, beta_prime).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub struct Curves {
    angles: Vec<f64>,
    quantum: Vec<f64>,
    lhv: Vec<f64>,
    lhv_error: Vec<f64>,
}

#[wasm_bindgen]
impl Curves {
    /// Relative angles in degrees.
    #[wasm_bindgen(getter)]
    pub fn angles(&self) -> Vec<f64> {
        self.angles.clone()
    }

    /// Singlet correlation `−cos θ`.
    #[wasm_bindgen(getter)]
    pub fn quantum(&self) -> Vec<f64> {
        self.quantum.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn lhv(&self) -> Vec<f64> {
        self.lhv.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn lhv_error(&self) -> Vec<f64> {
        self.lhv_error.clone()
    }
}

pub fn curves(model: &str, points: usize, samples: u32, seed: u64) -> Result<Curves, String> {
    let model: BuiltinModel = model.parse().map_err(|e: belllab::BellError| e.to_string())?;
    if points < 2 {
        return Err("need at least two points".into());
    }
    let mut out = Curves { angles: vec![], quantum: vec![], lhv: vec![], lhv_error: vec![] };
    for k in 0..points {
        let theta = PI * k as f64 / (points - 1) as f64;
        let b = UnitVector3::from_spherical(theta, 0.0).map_err(|e| e.to_string())?;
        let e = estimate_correlation(&model, &UnitVector3::Z, &b, samples as u64, seed).map_err(|e| e.to_string())?;
        out.angles.push(theta.to_degrees());
        out.quantum.push(-theta.cos());
        out.lhv.push(e.value);
        out.lhv_error.push(e.std_error);
    }
    Ok(out)
}

#[wasm_bindgen(js_name = correlationCurves)]
pub fn curves_js(model: &str, points: usize, samples: u32, seed: u64) -> Result<Curves, JsError> {
    curves(model, points, samples, seed).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn version() -> String {
    belllab::VERSION.to_string()
}
