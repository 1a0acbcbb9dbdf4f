//! Quantum spin correlations, the CHSH functional and the optimal polarizer
//! construction for `c1|01⟩ + c2|10⟩`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::{
    normalized_coefficients, pauli_combination, tensor_observable, TwoQubitState, UnitVector3, ENTANGLED_TOL,
};
use crate::error::{BellError, Result};
use crate::linalg::{Matrix2, ZERO};

/// The orientations `(â, b̂, â′, b̂′)`. Primed vectors are the alternate settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasurementSettings {
    pub a: UnitVector3,
    pub b: UnitVector3,
    pub a_prime: UnitVector3,
    pub b_prime: UnitVector3,
}

impl MeasurementSettings {
    pub fn new(a: UnitVector3, b: UnitVector3, a_prime: UnitVector3, b_prime: UnitVector3) -> Self {
        Self { a, b, a_prime, b_prime }
    }

    /// All four orientations in the xz-plane, given as polar angles from ẑ.
    pub fn coplanar_xz(a: f64, b: f64, a_prime: f64, b_prime: f64) -> Result<Self> {
        Ok(Self {
            a: UnitVector3::from_spherical(a, 0.0)?,
            b: UnitVector3::from_spherical(b, 0.0)?,
            a_prime: UnitVector3::from_spherical(a_prime, 0.0)?,
            b_prime: UnitVector3::from_spherical(b_prime, 0.0)?,
        })
    }

    /// The four (first side, second side) pairs in the order
    /// `(a,b), (a,b′), (a′,b), (a′,b′)`.
    pub fn pairs(&self) -> [(UnitVector3, UnitVector3); 4] {
        [(self.a, self.b), (self.a, self.b_prime), (self.a_prime, self.b), (self.a_prime, self.b_prime)]
    }
}

/// Orthogonal projector `(I + n̂·σ⃗)/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Projector2(Matrix2);

impl Projector2 {
    pub fn matrix(&self) -> &Matrix2 {
        &self.0
    }
}

pub fn projector(n: &UnitVector3) -> Projector2 {
    let half = Complex64::new(0.5, 0.0);
    Projector2((Matrix2::identity() + pauli_combination(n.components())).scale(half))
}

/// `ab = ¼[(1 + â·b̂) I + (â + b̂)·σ⃗ + i(â × b̂)·σ⃗]`.
pub fn projector_product(a: &UnitVector3, b: &UnitVector3) -> Matrix2 {
    let quarter = Complex64::new(0.25, 0.0);
    let sum = [a.x() + b.x(), a.y() + b.y(), a.z() + b.z()];
    let cross = pauli_combination(a.cross(b)).scale(Complex64::new(0.0, 1.0));
    let scalar = Matrix2::identity().scale(Complex64::new(1.0 + a.dot(b), 0.0));
    (scalar + pauli_combination(sum) + cross).scale(quarter)
}

/// Probabilities of the outcome pairs `(+,+), (+,−), (−,+), (−,−)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JointProbabilities {
    pub p_pp: f64,
    pub p_pm: f64,
    pub p_mp: f64,
    pub p_mm: f64,
}

impl JointProbabilities {
    pub fn as_array(&self) -> [f64; 4] {
        [self.p_pp, self.p_pm, self.p_mp, self.p_mm]
    }

    /// `P₊₊ + P₋₋ − P₊₋ − P₋₊`.
    pub fn correlation(&self) -> f64 {
        self.p_pp + self.p_mm - self.p_pm - self.p_mp
    }

    pub fn total(&self) -> f64 {
        self.p_pp + self.p_pm + self.p_mp + self.p_mm
    }
}

/// `⟨ψ|(â·σ⃗)⊗(b̂·σ⃗)|ψ⟩`.
pub fn correlation_matrix(state: &TwoQubitState, a: &UnitVector3, b: &UnitVector3) -> f64 {
    let e = tensor_observable(a, b).expectation(state);
    debug_assert!(e.im.abs() < 1e-10, "imaginary part {} of a Hermitian expectation", e.im);
    e.re
}

/// `2c₁c₂(aₓbₓ + a_y b_y) − a_z b_z`, valid for `c1|01⟩ + c2|10⟩`.
pub fn correlation_closed(c1: f64, c2: f64, a: &UnitVector3, b: &UnitVector3) -> Result<f64> {
    let (c1, c2) = normalized_coefficients(c1, c2)?;
    Ok(correlation_closed_unchecked(2.0 * c1 * c2, a, b))
}

/// Closed form with the product `s = 2c₁c₂` already computed.
pub(crate) fn correlation_closed_unchecked(s: f64, a: &UnitVector3, b: &UnitVector3) -> f64 {
    s * (a.x() * b.x() + a.y() * b.y()) - a.z() * b.z()
}

/// Born-rule probabilities for `Π±(â) ⊗ Π±(b̂)` with `Π₋(n̂) = Π₊(−n̂)`.
pub fn joint_probabilities(state: &TwoQubitState, a: &UnitVector3, b: &UnitVector3) -> JointProbabilities {
    let pa = [projector(a), projector(&-*a)];
    let pb = [projector(b), projector(&-*b)];
    let psi = state.amplitudes();
    let mut p = [[0.0; 2]; 2];
    for (j, proj_b) in pb.iter().enumerate() {
        // (I ⊗ Π_j) ψ
        let mut phi = [ZERO; 4];
        for i in 0..2 {
            let v = proj_b.0.mul_vec([psi[2 * i], psi[2 * i + 1]]);
            phi[2 * i] = v[0];
            phi[2 * i + 1] = v[1];
        }
        for (i, proj_a) in pa.iter().enumerate() {
            let mut norm2 = 0.0;
            for col in 0..2 {
                let v = proj_a.0.mul_vec([phi[col], phi[2 + col]]);
                norm2 += v[0].norm_sqr() + v[1].norm_sqr();
            }
            p[i][j] = norm2;
        }
    }
    JointProbabilities { p_pp: p[0][0], p_pm: p[0][1], p_mp: p[1][0], p_mm: p[1][1] }
}

/// `[P(a,b), P(a,b′), P(a′,b), P(a′,b′)]`.
pub fn correlations(state: &TwoQubitState, s: &MeasurementSettings) -> [f64; 4] {
    s.pairs().map(|(x, y)| correlation_matrix(state, &x, &y))
}

/// `|P(a,b) − P(a,b′)| + P(a′,b) + P(a′,b′)`.
pub fn chsh_value(state: &TwoQubitState, s: &MeasurementSettings) -> f64 {
    bell_lhs(correlations(state, s))
}

/// `|P(a,b) − P(a,b′)| + |P(a′,b′) + P(a′,b)|`.
pub fn chsh_value_symmetric(state: &TwoQubitState, s: &MeasurementSettings) -> f64 {
    chsh_symmetric(correlations(state, s))
}

pub(crate) fn bell_lhs(p: [f64; 4]) -> f64 {
    (p[0] - p[1]).abs() + p[2] + p[3]
}

pub(crate) fn chsh_symmetric(p: [f64; 4]) -> f64 {
    (p[0] - p[1]).abs() + (p[3] + p[2]).abs()
}

/// Polar angles of the optimal xz-plane settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GisinAngles {
    pub alpha: f64,
    pub alpha_prime: f64,
    pub beta: f64,
    pub beta_prime: f64,
}

/// `α = 0`, `α′ = ±π/2` with the sign of `c₁c₂`,
/// `cos β = −cos β′ = (1 + 4|c₁c₂|²)^(−1/2)` and `β′ ∈ (π/2, π)`.
pub fn gisin_angles(c1: f64, c2: f64) -> Result<GisinAngles> {
    let (c1, c2) = normalized_coefficients(c1, c2)?;
    let prod = c1 * c2;
    if prod.abs() <= ENTANGLED_TOL {
        return Err(BellError::Separable);
    }
    let k = 2.0 * prod.abs();
    let beta = k.atan2(1.0);
    Ok(GisinAngles {
        alpha: 0.0,
        alpha_prime: prod.signum() * std::f64::consts::FRAC_PI_2,
        beta,
        beta_prime: std::f64::consts::PI - beta,
    })
}

pub fn gisin_settings(c1: f64, c2: f64) -> Result<MeasurementSettings> {
    let g = gisin_angles(c1, c2)?;
    Ok(MeasurementSettings {
        a: UnitVector3::Z,
        a_prime: UnitVector3::normalize(g.alpha_prime.signum(), 0.0, 0.0)?,
        b: UnitVector3::from_spherical(g.beta, 0.0)?,
        b_prime: UnitVector3::from_spherical(g.beta_prime, 0.0)?,
    })
}

/// `2(1 + 4(c₁c₂)²)^(1/2)`.
pub fn max_violation(c1: f64, c2: f64) -> f64 {
    2.0 * (1.0 + 4.0 * (c1 * c2).powi(2)).sqrt()
}
