//! Simulated two-channel polarizer experiment with coincidence counting.
//!
//! Every emitted pair draws an outcome pair from the Born-rule probabilities of
//! the configured state along (possibly misaligned) orientations. A fraction
//! `1 - visibility` of pairs arrive depolarized and give uniformly random
//! outcomes. Each side records its outcome with probability `efficiency` and
//! only pairs recorded on both sides are tallied. The estimators then work on
//! the recorded counts alone (fair sampling).

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::algebra::{TwoQubitState, UnitVector3};
use crate::error::{invalid, BellError, Result};
use crate::lhv::CorrelationEstimate;
use crate::quantum::{joint_probabilities, JointProbabilities, MeasurementSettings};
use crate::sampling::chunked;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoincidenceCounts {
    pub r_pp: u64,
    pub r_pm: u64,
    pub r_mp: u64,
    pub r_mm: u64,
    /// Pairs emitted, recorded or not.
    pub n_pairs: u64,
}

impl CoincidenceCounts {
    pub fn new(r_pp: u64, r_pm: u64, r_mp: u64, r_mm: u64) -> Self {
        Self { r_pp, r_pm, r_mp, r_mm, n_pairs: r_pp + r_pm + r_mp + r_mm }
    }

    pub fn coincidences(&self) -> u64 {
        self.r_pp + self.r_pm + self.r_mp + self.r_mm
    }

    fn merge(&mut self, other: &CoincidenceCounts) {
        self.r_pp += other.r_pp;
        self.r_pm += other.r_pm;
        self.r_mp += other.r_mp;
        self.r_mm += other.r_mm;
        self.n_pairs += other.n_pairs;
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExperimentConfig {
    pub state: TwoQubitState,
    pub settings: MeasurementSettings,
    /// Pairs emitted per orientation pair.
    pub n_pairs: u64,
    /// Per-side detection probability, in `(0, 1]`.
    pub efficiency: f64,
    /// Fraction of pairs that keep their quantum correlation, in `[0, 1]`.
    /// The correlation coefficients scale by this factor.
    pub visibility: f64,
    /// Standard deviation, in radians, of the random tilt applied to each
    /// polarizer orientation per pair.
    pub misalignment_sigma: f64,
    pub seed: u64,
}

impl ExperimentConfig {
    /// Ideal apparatus: unit efficiency and visibility, no misalignment.
    pub fn ideal(state: TwoQubitState, settings: MeasurementSettings, n_pairs: u64, seed: u64) -> Self {
        Self { state, settings, n_pairs, efficiency: 1.0, visibility: 1.0, misalignment_sigma: 0.0, seed }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_pairs == 0 {
            return Err(invalid("n_pairs must be at least 1"));
        }
        if !(self.efficiency > 0.0 && self.efficiency <= 1.0) {
            return Err(invalid(format!("efficiency {} outside (0, 1]", self.efficiency)));
        }
        if !(0.0..=1.0).contains(&self.visibility) {
            return Err(invalid(format!("visibility {} outside [0, 1]", self.visibility)));
        }
        if !(self.misalignment_sigma >= 0.0 && self.misalignment_sigma.is_finite()) {
            return Err(invalid("misalignment_sigma must be finite and non-negative"));
        }
        Ok(())
    }
}

/// The four orientation pairs in `S = E(a,b) − E(a,b′) + E(a′,b) + E(a′,b′)` order.
pub const SETTING_LABELS: [&str; 4] = ["a,b", "a,b'", "a',b", "a',b'"];

/// Tilts `n` by a 2-D Gaussian of width `sigma` in its tangent plane.
fn misalign<R: Rng + ?Sized>(n: &UnitVector3, sigma: f64, rng: &mut R) -> UnitVector3 {
    let e1 = n.orthogonal();
    let e2 = n.cross(&e1);
    let g1: f64 = rng.sample::<f64, _>(StandardNormal) * sigma;
    let g2: f64 = rng.sample::<f64, _>(StandardNormal) * sigma;
    let t = [g1 * e1.x() + g2 * e2[0], g1 * e1.y() + g2 * e2[1], g1 * e1.z() + g2 * e2[2]];
    let angle = (g1 * g1 + g2 * g2).sqrt();
    if angle == 0.0 {
        return *n;
    }
    let (s, c) = angle.sin_cos();
    let [x, y, z] = n.components();
    UnitVector3::normalize(c * x + s * t[0] / angle, c * y + s * t[1] / angle, c * z + s * t[2] / angle)
        .expect("rotated unit vector")
}

/// Index into `[++, +−, −+, −−]` for a uniform draw `u`.
fn pick(p: &[f64; 4], u: f64) -> usize {
    let mut acc = 0.0;
    for (k, pk) in p.iter().enumerate().take(3) {
        acc += pk;
        if u < acc {
            return k;
        }
    }
    3
}

fn simulate_indexed(cfg: &ExperimentConfig, a: &UnitVector3, b: &UnitVector3, run: u64) -> Result<CoincidenceCounts> {
    cfg.validate()?;
    let nominal = joint_probabilities(&cfg.state, a, b).as_array();
    let parts = chunked(cfg.n_pairs, cfg.seed, run + 1, |rng, len| {
        let mut counts = CoincidenceCounts { n_pairs: len, ..Default::default() };
        for _ in 0..len {
            let probs = if cfg.misalignment_sigma > 0.0 {
                let ea = misalign(a, cfg.misalignment_sigma, rng);
                let eb = misalign(b, cfg.misalignment_sigma, rng);
                joint_probabilities(&cfg.state, &ea, &eb).as_array()
            } else {
                nominal
            };
            let outcome = if cfg.visibility < 1.0 && rng.random::<f64>() >= cfg.visibility {
                rng.random_range(0..4)
            } else {
                pick(&probs, rng.random::<f64>())
            };
            if cfg.efficiency < 1.0 {
                let seen_a = rng.random::<f64>() < cfg.efficiency;
                let seen_b = rng.random::<f64>() < cfg.efficiency;
                if !(seen_a && seen_b) {
                    continue;
                }
            }
            match outcome {
                0 => counts.r_pp += 1,
                1 => counts.r_pm += 1,
                2 => counts.r_mp += 1,
                _ => counts.r_mm += 1,
            }
        }
        counts
    });
    let mut total = CoincidenceCounts::default();
    parts.iter().for_each(|p| total.merge(p));
    Ok(total)
}

/// One run of `cfg.n_pairs` pairs along `(â, b̂)`.
pub fn simulate_run(cfg: &ExperimentConfig, a: &UnitVector3, b: &UnitVector3) -> Result<CoincidenceCounts> {
    simulate_indexed(cfg, a, b, 0)
}

/// `P_ij = R_ij / (R₊₊ + R₋₋ + R₊₋ + R₋₊)`.
pub fn estimate_probabilities(c: &CoincidenceCounts) -> Result<JointProbabilities> {
    let total = c.coincidences();
    if total == 0 {
        return Err(BellError::InsufficientData("no coincidences recorded".into()));
    }
    let t = total as f64;
    Ok(JointProbabilities {
        p_pp: c.r_pp as f64 / t,
        p_pm: c.r_pm as f64 / t,
        p_mp: c.r_mp as f64 / t,
        p_mm: c.r_mm as f64 / t,
    })
}

/// `E = (R₊₊ + R₋₋ − R₊₋ − R₋₊)/(R₊₊ + R₋₋ + R₊₋ + R₋₊)`.
///
/// The error is the multinomial delta-method value `√((1 − E²)/N)`.
pub fn estimate_e(c: &CoincidenceCounts) -> Result<CorrelationEstimate> {
    let total = c.coincidences();
    if total == 0 {
        return Err(BellError::InsufficientData("no coincidences recorded".into()));
    }
    let n = total as f64;
    let same = (c.r_pp + c.r_mm) as f64;
    let diff = (c.r_pm + c.r_mp) as f64;
    let e = (same - diff) / n;
    Ok(CorrelationEstimate { value: e, std_error: ((1.0 - e * e).max(0.0) / n).sqrt(), n_samples: total })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SEstimate {
    pub s_value: f64,
    pub std_error: f64,
    /// `E(a,b), E(a,b′), E(a′,b), E(a′,b′)`.
    pub correlations: [CorrelationEstimate; 4],
    pub counts: [CoincidenceCounts; 4],
}

/// `S = E(a,b) − E(a,b′) + E(a′,b) + E(a′,b′)` from four independent runs,
/// errors added in quadrature.
pub fn estimate_s(cfg: &ExperimentConfig) -> Result<SEstimate> {
    cfg.validate()?;
    let pairs = cfg.settings.pairs();
    let mut counts = [CoincidenceCounts::default(); 4];
    let mut correlations = [CorrelationEstimate { value: 0.0, std_error: 0.0, n_samples: 0 }; 4];
    for (k, (a, b)) in pairs.iter().enumerate() {
        counts[k] = simulate_indexed(cfg, a, b, k as u64)?;
        correlations[k] = estimate_e(&counts[k])?;
    }
    let e = correlations.map(|c| c.value);
    Ok(SEstimate {
        s_value: e[0] - e[1] + e[2] + e[3],
        std_error: correlations.iter().map(|c| c.std_error.powi(2)).sum::<f64>().sqrt(),
        correlations,
        counts,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SettingsReport {
    pub a: [f64; 3],
    pub b: [f64; 3],
    pub a_prime: [f64; 3],
    pub b_prime: [f64; 3],
}

impl From<&MeasurementSettings> for SettingsReport {
    fn from(s: &MeasurementSettings) -> Self {
        Self {
            a: s.a.components(),
            b: s.b.components(),
            a_prime: s.a_prime.components(),
            b_prime: s.b_prime.components(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LabelledCounts {
    pub setting: String,
    #[serde(flatten)]
    pub counts: CoincidenceCounts,
}

/// JSON run report: config echo, the four count blocks, E estimates and S ± σ.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AgrReport {
    pub version: String,
    pub seed: u64,
    pub n_pairs: u64,
    pub efficiency: f64,
    pub visibility: f64,
    pub misalignment_sigma: f64,
    /// Real and imaginary parts of the four amplitudes.
    pub state: [[f64; 2]; 4],
    pub settings: SettingsReport,
    pub counts: Vec<LabelledCounts>,
    #[serde(rename = "E")]
    pub e: Vec<CorrelationEstimate>,
    #[serde(rename = "S")]
    pub s: f64,
    pub stderr: f64,
}

impl AgrReport {
    pub fn new(cfg: &ExperimentConfig, est: &SEstimate) -> Self {
        Self {
            version: crate::VERSION.to_string(),
            seed: cfg.seed,
            n_pairs: cfg.n_pairs,
            efficiency: cfg.efficiency,
            visibility: cfg.visibility,
            misalignment_sigma: cfg.misalignment_sigma,
            state: cfg.state.amplitudes().map(|a| [a.re, a.im]),
            settings: SettingsReport::from(&cfg.settings),
            counts: SETTING_LABELS
                .iter()
                .zip(est.counts.iter())
                .map(|(l, c)| LabelledCounts { setting: l.to_string(), counts: *c })
                .collect(),
            e: est.correlations.to_vec(),
            s: est.s_value,
            stderr: est.std_error,
        }
    }
}
