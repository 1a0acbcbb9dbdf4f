//! Local hidden-variable models and Monte Carlo estimates of their
//! correlation coefficients.
//!
//! A model only ever sees one setting and the hidden variable when producing
//! a response, so Bell locality holds by construction of [`LhvModel`].

use std::f64::consts::PI;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::UnitVector3;
use crate::error::{invalid, BellError, Result};
use crate::quantum::MeasurementSettings;
use crate::sampling::{chunked, Moments};

/// Combined statistical tolerance, in standard errors, for bound checks.
pub const BOUND_SIGMAS: f64 = 5.0;

pub trait LhvModel: Sync {
    type Hidden;

    fn sample_hidden<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Hidden;

    /// Outcome (or averaged outcome) on the first side, in `[-1, 1]`.
    fn response_a(&self, a: &UnitVector3, hidden: &Self::Hidden) -> f64;

    /// Outcome (or averaged outcome) on the second side, in `[-1, 1]`.
    fn response_b(&self, b: &UnitVector3, hidden: &Self::Hidden) -> f64;
}

/// Uniform direction on S²: `z` uniform in `[-1, 1]`, azimuth uniform in `[0, 2π)`.
pub fn sample_sphere<R: Rng + ?Sized>(rng: &mut R) -> UnitVector3 {
    let z: f64 = 2.0 * rng.random::<f64>() - 1.0;
    let phi: f64 = 2.0 * PI * rng.random::<f64>();
    let r = (1.0 - z * z).max(0.0).sqrt();
    let (s, c) = phi.sin_cos();
    UnitVector3::normalize(r * c, r * s, z).expect("nonzero sphere sample")
}

/// `sign(x)` with the tie `x = 0` resolved to `+1`.
fn sign(x: f64) -> f64 {
    if x >= 0.0 {
        1.0
    } else {
        -1.0
    }
}

/// `A = sign(â·λ̂)`, `B = −sign(b̂·λ̂)`, `λ̂` uniform on the sphere.
/// Gives `E(θ) = −1 + 2θ/π`.
#[derive(Debug, Clone, Copy, Default)]
pub struct BellSign;

impl LhvModel for BellSign {
    type Hidden = UnitVector3;

    fn sample_hidden<R: Rng + ?Sized>(&self, rng: &mut R) -> UnitVector3 {
        sample_sphere(rng)
    }

    fn response_a(&self, a: &UnitVector3, hidden: &UnitVector3) -> f64 {
        sign(a.dot(hidden))
    }

    fn response_b(&self, b: &UnitVector3, hidden: &UnitVector3) -> f64 {
        -sign(b.dot(hidden))
    }
}

/// `Ā = â·λ̂`, `B̄ = −b̂·λ̂`. Gives `E = −â·b̂ / 3`.
#[derive(Debug, Clone, Copy, Default)]
pub struct AveragedLinear;

impl LhvModel for AveragedLinear {
    type Hidden = UnitVector3;

    fn sample_hidden<R: Rng + ?Sized>(&self, rng: &mut R) -> UnitVector3 {
        sample_sphere(rng)
    }

    fn response_a(&self, a: &UnitVector3, hidden: &UnitVector3) -> f64 {
        a.dot(hidden)
    }

    fn response_b(&self, b: &UnitVector3, hidden: &UnitVector3) -> f64 {
        -b.dot(hidden)
    }
}

/// The shipped models, selectable by name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BuiltinModel {
    BellSign,
    AveragedLinear,
}

impl BuiltinModel {
    pub fn name(&self) -> &'static str {
        match self {
            BuiltinModel::BellSign => "bell-sign",
            BuiltinModel::AveragedLinear => "averaged-linear",
        }
    }
}

impl FromStr for BuiltinModel {
    type Err = BellError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bell-sign" | "bell_sign" => Ok(BuiltinModel::BellSign),
            "averaged-linear" | "averaged_linear" => Ok(BuiltinModel::AveragedLinear),
            other => Err(invalid(format!("unknown model '{other}'"))),
        }
    }
}

impl LhvModel for BuiltinModel {
    type Hidden = UnitVector3;

    fn sample_hidden<R: Rng + ?Sized>(&self, rng: &mut R) -> UnitVector3 {
        sample_sphere(rng)
    }

    fn response_a(&self, a: &UnitVector3, hidden: &UnitVector3) -> f64 {
        match self {
            BuiltinModel::BellSign => BellSign.response_a(a, hidden),
            BuiltinModel::AveragedLinear => AveragedLinear.response_a(a, hidden),
        }
    }

    fn response_b(&self, b: &UnitVector3, hidden: &UnitVector3) -> f64 {
        match self {
            BuiltinModel::BellSign => BellSign.response_b(b, hidden),
            BuiltinModel::AveragedLinear => AveragedLinear.response_b(b, hidden),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrelationEstimate {
    pub value: f64,
    pub std_error: f64,
    pub n_samples: u64,
}

/// Sums and cross sums of `N` per-sample products.
#[derive(Debug, Clone, Copy)]
struct JointSums<const N: usize> {
    count: u64,
    sum: [f64; N],
    cross: [[f64; N]; N],
}

impl<const N: usize> JointSums<N> {
    fn new() -> Self {
        Self { count: 0, sum: [0.0; N], cross: [[0.0; N]; N] }
    }

    fn push(&mut self, x: &[f64; N]) {
        self.count += 1;
        for i in 0..N {
            self.sum[i] += x[i];
            for j in i..N {
                self.cross[i][j] += x[i] * x[j];
            }
        }
    }

    fn merge(&mut self, other: &Self) {
        self.count += other.count;
        for i in 0..N {
            self.sum[i] += other.sum[i];
            for j in i..N {
                self.cross[i][j] += other.cross[i][j];
            }
        }
    }

    fn mean(&self, i: usize) -> f64 {
        self.sum[i] / self.count as f64
    }

    /// Standard error of the sample mean of `Σ w_i x_i`.
    fn std_error_of(&self, w: &[f64; N]) -> f64 {
        let n = self.count as f64;
        if self.count < 2 {
            return 0.0;
        }
        let mut var = 0.0;
        for i in 0..N {
            for j in 0..N {
                let (lo, hi) = if i <= j { (i, j) } else { (j, i) };
                let cov = (self.cross[lo][hi] - self.sum[lo] * self.sum[hi] / n) / (n - 1.0);
                var += w[i] * w[j] * cov;
            }
        }
        (var.max(0.0) / n).sqrt()
    }

    fn estimate(&self, i: usize) -> CorrelationEstimate {
        let mut w = [0.0; N];
        w[i] = 1.0;
        CorrelationEstimate { value: self.mean(i), std_error: self.std_error_of(&w), n_samples: self.count }
    }
}

/// Samples `n` hidden variables and records `A(x_k, λ) B(y_k, λ)` for every pair.
fn sample_products<M: LhvModel, const N: usize>(
    model: &M,
    pairs: &[(UnitVector3, UnitVector3); N],
    n: u64,
    seed: u64,
) -> Result<JointSums<N>> {
    if n == 0 {
        return Err(invalid("sample count must be at least 1"));
    }
    let parts = chunked(n, seed, 0, |rng, len| {
        let mut acc = JointSums::<N>::new();
        let mut x = [0.0; N];
        for _ in 0..len {
            let hidden = model.sample_hidden(rng);
            for (k, (sa, sb)) in pairs.iter().enumerate() {
                let ra = model.response_a(sa, &hidden);
                let rb = model.response_b(sb, &hidden);
                debug_assert!(ra.abs() <= 1.0 + 1e-12 && rb.abs() <= 1.0 + 1e-12);
                x[k] = ra * rb;
            }
            acc.push(&x);
        }
        acc
    });
    let mut total = JointSums::<N>::new();
    parts.iter().for_each(|p| total.merge(p));
    Ok(total)
}

/// Monte Carlo estimate of `E(â,b̂) = ∫ Ā(â,λ) B̄(b̂,λ) ρ(λ) dλ`.
pub fn estimate_correlation<M: LhvModel>(
    model: &M,
    a: &UnitVector3,
    b: &UnitVector3,
    n: u64,
    seed: u64,
) -> Result<CorrelationEstimate> {
    if n == 0 {
        return Err(invalid("sample count must be at least 1"));
    }
    let parts = chunked(n, seed, 0, |rng, len| {
        let mut m = Moments::default();
        for _ in 0..len {
            let hidden = model.sample_hidden(rng);
            m.push(model.response_a(a, &hidden) * model.response_b(b, &hidden));
        }
        m
    });
    let mut total = Moments::default();
    parts.iter().for_each(|p| total.merge(p));
    Ok(CorrelationEstimate { value: total.mean, std_error: total.std_error(), n_samples: total.count })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChshEstimate {
    /// `|E(a,b) − E(a,b′)| + |E(a′,b′) + E(a′,b)|`.
    pub value: f64,
    pub std_error: f64,
    /// Ordered `(a,b), (a,b′), (a′,b), (a′,b′)`.
    pub correlations: [CorrelationEstimate; 4],
}

impl ChshEstimate {
    /// Whether `value ≤ 2 + k·std_error`, up to rounding. Deterministic ±1
    /// models can sit exactly on the bound with zero spread.
    pub fn within_bound(&self, sigmas: f64) -> bool {
        self.value <= 2.0 + sigmas * self.std_error + 1e-12
    }
}

/// CHSH functional of a model, all four correlations drawn from one λ stream.
pub fn chsh_lhv<M: LhvModel>(model: &M, s: &MeasurementSettings, n: u64, seed: u64) -> Result<ChshEstimate> {
    let sums = sample_products(model, &s.pairs(), n, seed)?;
    let e = [0, 1, 2, 3].map(|k| sums.mean(k));
    let d = sign(e[0] - e[1]);
    let t = sign(e[3] + e[2]);
    // The CHSH value is the sample mean of this signed combination.
    let w = [d, -d, t, t];
    Ok(ChshEstimate {
        value: (e[0] - e[1]).abs() + (e[3] + e[2]).abs(),
        std_error: sums.std_error_of(&w),
        correlations: [0, 1, 2, 3].map(|k| sums.estimate(k)),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bell1964Check {
    /// `|E(a,b) − E(a,b′)|`.
    pub lhs: f64,
    /// `1 + E(b′,b)`.
    pub rhs: f64,
    /// Standard error of `lhs − rhs`.
    pub std_error: f64,
    /// Measured `E(b′,b′)`.
    pub anticorrelation: CorrelationEstimate,
}

impl Bell1964Check {
    pub fn holds(&self, sigmas: f64) -> bool {
        self.lhs <= self.rhs + sigmas * self.std_error + 1e-12
    }
}

/// Bell's three-setting inequality `|E(a,b) − E(a,b′)| ≤ 1 + E(b′,b)`.
///
/// The reduction needs perfect anticorrelation `E(b′,b′) = −1`; models
/// without it are rejected.
pub fn bell1964_check<M: LhvModel>(
    model: &M,
    a: &UnitVector3,
    b: &UnitVector3,
    b_prime: &UnitVector3,
    n: u64,
    seed: u64,
) -> Result<Bell1964Check> {
    let pairs = [(*a, *b), (*a, *b_prime), (*b_prime, *b), (*b_prime, *b_prime)];
    let sums = sample_products(model, &pairs, n, seed)?;
    let anti = sums.estimate(3);
    if (anti.value + 1.0).abs() > BOUND_SIGMAS * anti.std_error + 1e-9 {
        return Err(BellError::Precondition(format!(
            "model is not perfectly anticorrelated: E(b′,b′) = {:.6}",
            anti.value
        )));
    }
    let (e_ab, e_abp, e_bpb) = (sums.mean(0), sums.mean(1), sums.mean(2));
    let d = sign(e_ab - e_abp);
    Ok(Bell1964Check {
        lhs: (e_ab - e_abp).abs(),
        rhs: 1.0 + e_bpb,
        std_error: sums.std_error_of(&[d, -d, -1.0, 0.0]),
        anticorrelation: anti,
    })
}
