mod common;

use belllab::algebra::{sigma_x, sigma_y, sigma_z};
use belllab::linalg::{Matrix2, Matrix4};
use belllab::{concurrence, pauli_dot, schmidt_decompose, tensor_observable, TwoQubitState, UnitVector3};
use common::*;
use nalgebra::{Complex, Matrix2 as NaMatrix2};
use num_complex::Complex64;
use proptest::prelude::*;

fn cx(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// The 4×4 matrix of (â·σ⃗)⊗(b̂·σ⃗) written out entry by entry.
fn tensor_by_entries(a: &UnitVector3, b: &UnitVector3) -> Matrix4 {
    let (ax, ay, az) = (a.x(), a.y(), a.z());
    let (bx, by, bz) = (b.x(), b.y(), b.z());
    let am = cx(ax, -ay);
    let ap = cx(ax, ay);
    let bm = cx(bx, -by);
    let bp = cx(bx, by);
    let r = |x: f64| cx(x, 0.0);
    Matrix4([
        [r(az * bz), bm * az, am * bz, am * bm],
        [bp * az, r(-az * bz), am * bp, -am * bz],
        [ap * bz, ap * bm, r(-az * bz), -bm * az],
        [ap * bp, -ap * bz, -bp * az, r(az * bz)],
    ])
}

#[test]
fn tensor_observable_matches_explicit_entries() {
    let mut rng = rng(1);
    for _ in 0..2000 {
        let a = random_unit(&mut rng);
        let b = random_unit(&mut rng);
        let t = tensor_observable(&a, &b);
        assert!(t.matrix().max_abs_diff(&tensor_by_entries(&a, &b)) < 1e-15);
        assert!(t.matrix().is_hermitian(1e-15));
        assert!(t.matrix().trace().norm() < 1e-15);
    }
}

#[test]
fn schmidt_coefficients_match_svd_oracle() {
    let mut rng = rng(2);
    for _ in 0..2000 {
        let s = random_state(&mut rng);
        let a = s.amplitudes();
        let na = NaMatrix2::new(
            Complex::new(a[0].re, a[0].im),
            Complex::new(a[1].re, a[1].im),
            Complex::new(a[2].re, a[2].im),
            Complex::new(a[3].re, a[3].im),
        );
        let sv = na.singular_values();
        let (hi, lo) = if sv[0] >= sv[1] { (sv[0], sv[1]) } else { (sv[1], sv[0]) };
        let f = schmidt_decompose(&s);
        assert!((f.c1 - hi).abs() < 1e-12, "{} vs {}", f.c1, hi);
        assert!((f.c2 - lo).abs() < 1e-12, "{} vs {}", f.c2, lo);
        assert!((f.c1 * f.c1 + f.c2 * f.c2 - 1.0).abs() < 1e-12);
    }
}

#[test]
fn schmidt_reconstruction_round_trip() {
    let mut rng = rng(3);
    for i in 0..10_000 {
        let s = if i % 2 == 0 { random_state(&mut rng) } else { random_real_state(&mut rng) };
        let f = schmidt_decompose(&s);
        assert!(f.c1 >= f.c2 && f.c2 >= 0.0);
        assert!(f.basis_a.is_unitary(1e-12) && f.basis_b.is_unitary(1e-12));
        let err = f.reconstruct().distance_up_to_phase(&s);
        assert!(err < 1e-10, "state {i}: reconstruction error {err}");
    }
}

#[test]
fn schmidt_reconstruction_near_product_states() {
    let mut rng = rng(4);
    for eps in [1e-3, 1e-6, 1e-9, 1e-11, 1e-13, 0.0] {
        let u1 = random_unitary(&mut rng);
        let u2 = random_unitary(&mut rng);
        let c2: f64 = eps;
        let c1 = (1.0 - c2 * c2).sqrt();
        let s = TwoQubitState::from_real([0.0, c1, c2, 0.0]).unwrap().apply_local(&u1, &u2);
        let f = schmidt_decompose(&s);
        assert!((f.c2 - eps).abs() < 1e-12);
        assert!(f.reconstruct().distance_up_to_phase(&s) < 1e-10);
    }
}

#[test]
fn real_state_sign_tracks_canonical_product() {
    let mut rng = rng(5);
    for _ in 0..500 {
        let (c1, c2) = random_coefficients(&mut rng);
        let s = belllab::canonical_state(c1, c2).unwrap();
        // Real rotations keep the sign of the canonical product.
        let t1: f64 = rand::Rng::random::<f64>(&mut rng) * 6.0;
        let t2: f64 = rand::Rng::random::<f64>(&mut rng) * 6.0;
        let rot = |t: f64| {
            let (s, c) = t.sin_cos();
            Matrix2::new([[cx(c, 0.0), cx(-s, 0.0)], [cx(s, 0.0), cx(c, 0.0)]])
        };
        let rotated = s.apply_local(&rot(t1), &rot(t2));
        let f = schmidt_decompose(&rotated);
        assert_eq!(f.sign, (c1 * c2).signum());
        assert!((f.signed_product() - c1 * c2).abs() < 1e-12);
    }
}

#[test]
fn concurrence_is_local_unitary_invariant() {
    let mut rng = rng(6);
    for _ in 0..5000 {
        let s = random_state(&mut rng);
        let before = concurrence(&schmidt_decompose(&s));
        let u1 = random_unitary(&mut rng);
        let u2 = random_unitary(&mut rng);
        let after = concurrence(&schmidt_decompose(&s.apply_local(&u1, &u2)));
        assert!((before - after).abs() < 1e-10);
        // Independent route: C = 2|ψ00 ψ11 − ψ01 ψ10|.
        let a = s.amplitudes();
        let direct = 2.0 * (a[0] * a[3] - a[1] * a[2]).norm();
        assert!((before - direct).abs() < 1e-12);
    }
}

fn unit_from_angles(theta: f64, phi: f64) -> UnitVector3 {
    UnitVector3::from_spherical(theta, phi).unwrap()
}

proptest! {
    #[test]
    fn spherical_vectors_are_unit(theta in 0.0..std::f64::consts::PI, phi in 0.0..std::f64::consts::TAU) {
        let v = unit_from_angles(theta, phi);
        prop_assert!((v.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn pauli_product_identity(t1 in 0.0..3.2f64, p1 in 0.0..6.3f64, t2 in 0.0..3.2f64, p2 in 0.0..6.3f64) {
        let a = unit_from_angles(t1, p1);
        let b = unit_from_angles(t2, p2);
        let lhs = *pauli_dot(&a).matrix() * *pauli_dot(&b).matrix();
        let [cx_, cy, cz] = a.cross(&b);
        let i = Complex64::new(0.0, 1.0);
        let rhs = Matrix2::identity().scale(cx(a.dot(&b), 0.0))
            + sigma_x().scale(i * cx_)
            + sigma_y().scale(i * cy)
            + sigma_z().scale(i * cz);
        prop_assert!(lhs.max_abs_diff(&rhs) < 1e-12);
    }

    #[test]
    fn pauli_dot_is_an_involution(t in 0.0..3.2f64, p in 0.0..6.3f64) {
        let m = *pauli_dot(&unit_from_angles(t, p)).matrix();
        prop_assert!((m * m).max_abs_diff(&Matrix2::identity()) < 1e-12);
        prop_assert!(m.is_hermitian(1e-15));
        prop_assert!(m.trace().norm() < 1e-15);
    }
}
