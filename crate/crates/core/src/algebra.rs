//! Two-qubit states, Pauli observables and the Schmidt decomposition.
//!
//! Amplitudes are ordered `|00⟩, |01⟩, |10⟩, |11⟩`; the first tensor factor is
//! the first qubit. The amplitude matrix has the first qubit as row index.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::linalg::{Matrix2, Matrix4, I, ONE, ZERO};

/// Tolerance on `|‖v‖ - 1|` for unit vectors and on `Σ|ψ_k|² - 1` for states.
pub const NORM_TOL: f64 = 1e-12;
/// Tolerance on `c1² + c2² - 1` accepted for caller-supplied Schmidt coefficients.
pub const COEFF_TOL: f64 = 1e-9;
/// Singular values at or below this are treated as zero.
pub const ENTANGLED_TOL: f64 = 1e-10;

/// A measurement orientation on the unit sphere.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnitVector3 {
    x: f64,
    y: f64,
    z: f64,
}

impl UnitVector3 {
    pub const X: UnitVector3 = UnitVector3 { x: 1.0, y: 0.0, z: 0.0 };
    pub const Y: UnitVector3 = UnitVector3 { x: 0.0, y: 1.0, z: 0.0 };
    pub const Z: UnitVector3 = UnitVector3 { x: 0.0, y: 0.0, z: 1.0 };

    /// Accepts components whose norm is already 1 within [`NORM_TOL`].
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        if !(x.is_finite() && y.is_finite() && z.is_finite()) {
            return Err(invalid("unit vector components must be finite"));
        }
        let norm = (x * x + y * y + z * z).sqrt();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(invalid(format!("vector norm {norm} is not 1")));
        }
        Ok(Self { x, y, z })
    }

    /// Rescales any finite nonzero vector onto the sphere.
    pub fn normalize(x: f64, y: f64, z: f64) -> Result<Self> {
        let norm = (x * x + y * y + z * z).sqrt();
        if !norm.is_finite() || norm == 0.0 {
            return Err(invalid("cannot normalize a zero or non-finite vector"));
        }
        Ok(Self { x: x / norm, y: y / norm, z: z / norm })
    }

    /// `(sinθ cosφ, sinθ sinφ, cosθ)`.
    pub fn from_spherical(theta: f64, phi: f64) -> Result<Self> {
        if !(theta.is_finite() && phi.is_finite()) {
            return Err(invalid("spherical angles must be finite"));
        }
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        Ok(Self { x: st * cp, y: st * sp, z: ct })
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    pub fn z(&self) -> f64 {
        self.z
    }

    pub fn components(&self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    pub fn dot(&self, other: &UnitVector3) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn cross(&self, other: &UnitVector3) -> [f64; 3] {
        [self.y * other.z - self.z * other.y, self.z * other.x - self.x * other.z, self.x * other.y - self.y * other.x]
    }

    /// Angle between the two orientations, in `[0, π]`.
    pub fn angle_to(&self, other: &UnitVector3) -> f64 {
        self.dot(other).clamp(-1.0, 1.0).acos()
    }

    /// Some unit vector orthogonal to `self`.
    pub fn orthogonal(&self) -> UnitVector3 {
        // Cross with the axis least aligned with self.
        let axis = if self.x.abs() <= self.y.abs() && self.x.abs() <= self.z.abs() {
            UnitVector3::X
        } else if self.y.abs() <= self.z.abs() {
            UnitVector3::Y
        } else {
            UnitVector3::Z
        };
        let [x, y, z] = self.cross(&axis);
        let n = (x * x + y * y + z * z).sqrt();
        UnitVector3 { x: x / n, y: y / n, z: z / n }
    }
}

impl std::ops::Neg for UnitVector3 {
    type Output = UnitVector3;

    fn neg(self) -> UnitVector3 {
        UnitVector3 { x: -self.x, y: -self.y, z: -self.z }
    }
}

impl fmt::Display for UnitVector3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:.6}, {:.6}, {:.6})", self.x, self.y, self.z)
    }
}

pub fn make_unit_vector(theta: f64, phi: f64) -> Result<UnitVector3> {
    UnitVector3::from_spherical(theta, phi)
}

/// Single-qubit Hermitian observable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Observable2(Matrix2);

impl Observable2 {
    pub fn matrix(&self) -> &Matrix2 {
        &self.0
    }
}

/// Two-qubit Hermitian observable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Observable4(Matrix4);

impl Observable4 {
    pub fn matrix(&self) -> &Matrix4 {
        &self.0
    }

    pub fn expectation(&self, state: &TwoQubitState) -> Complex64 {
        self.0.expectation(&state.amplitudes)
    }
}

pub fn sigma_x() -> Matrix2 {
    Matrix2::new([[ZERO, ONE], [ONE, ZERO]])
}

pub fn sigma_y() -> Matrix2 {
    Matrix2::new([[ZERO, -I], [I, ZERO]])
}

pub fn sigma_z() -> Matrix2 {
    Matrix2::new([[ONE, ZERO], [ZERO, -ONE]])
}

/// `n·σ⃗` for an arbitrary real 3-vector (not necessarily unit).
pub(crate) fn pauli_combination(n: [f64; 3]) -> Matrix2 {
    let [x, y, z] = n;
    Matrix2::new([[Complex64::new(z, 0.0), Complex64::new(x, -y)], [Complex64::new(x, y), Complex64::new(-z, 0.0)]])
}

/// `nₓσₓ + n_yσ_y + n_zσ_z`.
pub fn pauli_dot(n: &UnitVector3) -> Observable2 {
    Observable2(pauli_combination(n.components()))
}

/// `(â·σ⃗) ⊗ (b̂·σ⃗)`.
pub fn tensor_observable(a: &UnitVector3, b: &UnitVector3) -> Observable4 {
    Observable4(pauli_dot(a).0.kron(&pauli_dot(b).0))
}

/// A normalized pure two-qubit state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoQubitState {
    amplitudes: [Complex64; 4],
}

impl TwoQubitState {
    /// Accepts amplitudes whose squared norm is 1 within [`NORM_TOL`].
    pub fn new(amplitudes: [Complex64; 4]) -> Result<Self> {
        if amplitudes.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(invalid("amplitudes must be finite"));
        }
        let norm2: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm2 - 1.0).abs() > NORM_TOL {
            return Err(invalid(format!("state norm² {norm2} is not 1")));
        }
        Ok(Self { amplitudes })
    }

    pub fn normalized(amplitudes: [Complex64; 4]) -> Result<Self> {
        let norm2: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if !norm2.is_finite() || norm2 == 0.0 {
            return Err(invalid("cannot normalize a zero or non-finite state"));
        }
        let s = norm2.sqrt().recip();
        Ok(Self { amplitudes: amplitudes.map(|a| a * s) })
    }

    pub fn from_real(amplitudes: [f64; 4]) -> Result<Self> {
        Self::new(amplitudes.map(|a| Complex64::new(a, 0.0)))
    }

    /// `|α⟩ ⊗ |β⟩`; both factors are normalized first.
    pub fn product(alpha: [Complex64; 2], beta: [Complex64; 2]) -> Result<Self> {
        let mut amps = [ZERO; 4];
        for i in 0..2 {
            for j in 0..2 {
                amps[2 * i + j] = alpha[i] * beta[j];
            }
        }
        Self::normalized(amps)
    }

    /// `(|01⟩ - |10⟩)/√2`.
    pub fn singlet() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Self { amplitudes: [ZERO, Complex64::new(h, 0.0), Complex64::new(-h, 0.0), ZERO] }
    }

    pub fn amplitudes(&self) -> &[Complex64; 4] {
        &self.amplitudes
    }

    /// Row index is the first qubit, column index the second.
    pub fn amplitude_matrix(&self) -> Matrix2 {
        let a = &self.amplitudes;
        Matrix2::new([[a[0], a[1]], [a[2], a[3]]])
    }

    pub fn is_real(&self) -> bool {
        self.amplitudes.iter().all(|a| a.im.abs() <= NORM_TOL)
    }

    /// `(U₁ ⊗ U₂)|ψ⟩`.
    pub fn apply_local(&self, u1: &Matrix2, u2: &Matrix2) -> TwoQubitState {
        TwoQubitState { amplitudes: u1.kron(u2).mul_vec(&self.amplitudes) }
    }

    pub fn with_global_phase(&self, phase: f64) -> TwoQubitState {
        let p = Complex64::from_polar(1.0, phase);
        TwoQubitState { amplitudes: self.amplitudes.map(|a| a * p) }
    }

    /// Largest amplitude difference after aligning the global phase of `other`.
    pub fn distance_up_to_phase(&self, other: &TwoQubitState) -> f64 {
        let overlap: Complex64 = other.amplitudes.iter().zip(self.amplitudes.iter()).map(|(o, s)| o.conj() * s).sum();
        let phase = if overlap.norm() > 0.0 { overlap / overlap.norm() } else { ONE };
        self.amplitudes.iter().zip(other.amplitudes.iter()).map(|(s, o)| (s - o * phase).norm()).fold(0.0, f64::max)
    }
}

/// Validates and renormalizes a pair of real Schmidt-like coefficients.
pub(crate) fn normalized_coefficients(c1: f64, c2: f64) -> Result<(f64, f64)> {
    if !(c1.is_finite() && c2.is_finite()) {
        return Err(invalid("coefficients must be finite"));
    }
    let n2 = c1 * c1 + c2 * c2;
    if (n2 - 1.0).abs() > COEFF_TOL {
        return Err(invalid(format!("c1² + c2² = {n2}, expected 1")));
    }
    let n = n2.sqrt();
    Ok((c1 / n, c2 / n))
}

/// `c1|01⟩ + c2|10⟩`, rejecting the separable case `c1·c2 = 0`.
pub fn canonical_state(c1: f64, c2: f64) -> Result<TwoQubitState> {
    let (c1, c2) = normalized_coefficients(c1, c2)?;
    if (c1 * c2).abs() <= ENTANGLED_TOL {
        return Err(invalid(
            "canonical state needs both coefficients nonzero; use canonical_state_permissive for the separable limit",
        ));
    }
    Ok(canonical_unchecked(c1, c2))
}

/// Like [`canonical_state`] but also accepts `c1·c2 = 0`.
pub fn canonical_state_permissive(c1: f64, c2: f64) -> Result<TwoQubitState> {
    let (c1, c2) = normalized_coefficients(c1, c2)?;
    Ok(canonical_unchecked(c1, c2))
}

fn canonical_unchecked(c1: f64, c2: f64) -> TwoQubitState {
    TwoQubitState { amplitudes: [ZERO, Complex64::new(c1, 0.0), Complex64::new(c2, 0.0), ZERO] }
}

/// `|ψ⟩ = c1 |a₁⟩|b₁⟩ + c2 |a₂⟩|b₂⟩` with `c1 ≥ c2 ≥ 0`.
///
/// `basis_a` and `basis_b` hold the local vectors as columns. For real input
/// states `sign` is the sign of `c1·c2` once the state is rotated by real local
/// rotations into `c1|01⟩ + c2|10⟩`; it is `+1` otherwise. Complex relative
/// phases live in `basis_b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchmidtForm {
    pub c1: f64,
    pub c2: f64,
    pub sign: f64,
    pub basis_a: Matrix2,
    pub basis_b: Matrix2,
}

impl SchmidtForm {
    pub fn reconstruct(&self) -> TwoQubitState {
        let mut amps = [ZERO; 4];
        for (k, c) in [self.c1, self.c2].into_iter().enumerate() {
            let a = self.basis_a.column(k);
            let b = self.basis_b.column(k);
            for i in 0..2 {
                for j in 0..2 {
                    amps[2 * i + j] += a[i] * b[j] * c;
                }
            }
        }
        TwoQubitState { amplitudes: amps }
    }

    /// `sign · c1 · c2`, the signed product used by the canonical-form formulas.
    pub fn signed_product(&self) -> f64 {
        self.sign * self.c1 * self.c2
    }

    pub fn is_entangled(&self) -> bool {
        self.c2 > ENTANGLED_TOL
    }

    pub fn concurrence(&self) -> f64 {
        concurrence(self)
    }
}

/// Rotates `v` so its first component with modulus above `1e-14` is real positive.
fn fix_phase(v: [Complex64; 2]) -> [Complex64; 2] {
    let lead = if v[0].norm() > 1e-14 { v[0] } else { v[1] };
    if lead.norm() == 0.0 {
        return v;
    }
    let p = lead.conj() / lead.norm();
    v.map(|x| x * p)
}

fn normalize2(v: [Complex64; 2]) -> [Complex64; 2] {
    let n = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
    v.map(|x| x / n)
}

fn complement(v: [Complex64; 2]) -> [Complex64; 2] {
    [-v[1].conj(), v[0].conj()]
}

/// Schmidt decomposition via the singular values of the amplitude matrix.
pub fn schmidt_decompose(state: &TwoQubitState) -> SchmidtForm {
    let m = state.amplitude_matrix();
    let det = m.determinant();
    let frob2: f64 = state.amplitudes.iter().map(|a| a.norm_sqr()).sum();

    // c1² + c2² = ‖M‖_F², c1·c2 = |det M|.
    let d = det.norm();
    let disc = (frob2 * frob2 - 4.0 * d * d).max(0.0).sqrt();
    let c1 = ((frob2 + disc) / 2.0).sqrt();
    let c2 = if c1 > 0.0 { d / c1 } else { 0.0 };
    let lambda1 = c1 * c1;

    // Leading eigenvector of H = M†M.
    let h = m.adjoint() * m;
    let p = h.0[0][0].re;
    let r = h.0[1][1].re;
    let q = h.0[0][1];
    let cand1 = [q, Complex64::new(lambda1 - p, 0.0)];
    let cand2 = [Complex64::new(lambda1 - r, 0.0), q.conj()];
    let n1 = cand1[0].norm_sqr() + cand1[1].norm_sqr();
    let n2 = cand2[0].norm_sqr() + cand2[1].norm_sqr();
    let degenerate = c1 - c2 <= NORM_TOL || n1.max(n2) <= 1e-28;
    let v1 = if degenerate {
        [ONE, ZERO]
    } else if n1 >= n2 {
        fix_phase(normalize2(cand1))
    } else {
        fix_phase(normalize2(cand2))
    };
    let v2 = fix_phase(complement(v1));

    let u1 = m.mul_vec(v1).map(|x| x / c1);
    // u2 is fixed up to phase by orthogonality; take the phase from M v2.
    let mv2 = m.mul_vec(v2);
    let comp = complement(u1);
    let overlap = comp[0].conj() * mv2[0] + comp[1].conj() * mv2[1];
    let u2 = if overlap.norm() > 0.0 {
        let ph = overlap / overlap.norm();
        comp.map(|x| x * ph)
    } else {
        fix_phase(comp)
    };

    let sign = if state.is_real() && d > ENTANGLED_TOL {
        // c1|01⟩ + c2|10⟩ has det = -c1·c2.
        -det.re.signum()
    } else {
        1.0
    };

    SchmidtForm {
        c1,
        c2,
        sign,
        basis_a: Matrix2::from_columns(u1, u2),
        basis_b: Matrix2::from_columns(v1.map(|x| x.conj()), v2.map(|x| x.conj())),
    }
}

/// `2·c1·c2`, in `[0, 1]`.
pub fn concurrence(form: &SchmidtForm) -> f64 {
    (2.0 * form.c1 * form.c2).clamp(0.0, 1.0)
}
