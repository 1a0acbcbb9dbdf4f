#![allow(dead_code)]

use belllab::linalg::Matrix2;
use belllab::{MeasurementSettings, TwoQubitState, UnitVector3};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gauss(rng: &mut ChaCha8Rng) -> f64 {
    rng.sample(StandardNormal)
}

pub fn random_unit(rng: &mut ChaCha8Rng) -> UnitVector3 {
    loop {
        let v = [gauss(rng), gauss(rng), gauss(rng)];
        if let Ok(u) = UnitVector3::normalize(v[0], v[1], v[2]) {
            return u;
        }
    }
}

pub fn random_settings(rng: &mut ChaCha8Rng) -> MeasurementSettings {
    MeasurementSettings::new(random_unit(rng), random_unit(rng), random_unit(rng), random_unit(rng))
}

/// Haar-distributed pure state from complex Gaussian amplitudes.
pub fn random_state(rng: &mut ChaCha8Rng) -> TwoQubitState {
    let amps = [0; 4].map(|_| Complex64::new(gauss(rng), gauss(rng)));
    TwoQubitState::normalized(amps).unwrap()
}

pub fn random_real_state(rng: &mut ChaCha8Rng) -> TwoQubitState {
    let amps = [0; 4].map(|_| Complex64::new(gauss(rng), 0.0));
    TwoQubitState::normalized(amps).unwrap()
}

pub fn random_unitary(rng: &mut ChaCha8Rng) -> Matrix2 {
    let a = Complex64::new(gauss(rng), gauss(rng));
    let b = Complex64::new(gauss(rng), gauss(rng));
    let n = (a.norm_sqr() + b.norm_sqr()).sqrt();
    let (a, b) = (a / n, b / n);
    let phase = Complex64::from_polar(1.0, rng.random::<f64>() * std::f64::consts::TAU);
    Matrix2::new([[a, b], [-b.conj(), a.conj()]]).scale(phase)
}

/// Random signed coefficients with c1² + c2² = 1 and both nonzero.
pub fn random_coefficients(rng: &mut ChaCha8Rng) -> (f64, f64) {
    loop {
        let t: f64 = rng.random::<f64>() * std::f64::consts::TAU;
        let (s, c) = t.sin_cos();
        if (s * c).abs() > 1e-3 {
            return (c, s);
        }
    }
}
