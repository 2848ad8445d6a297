//! Entropy-weighted scalarization of (profit, travel time) into one fitness.

use serde::{Deserialize, Serialize};

use crate::error::ScalarizeError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EwmWeights {
    /// Weight of profit.
    pub w1: f64,
    /// Weight of travel time.
    pub w2: f64,
    pub entropy_z: f64,
    pub entropy_t: f64,
    pub samples: usize,
    /// Both indices were constant; weights fell back to one half each.
    pub degenerate: bool,
}

/// Min-max bounds of the sample set used to normalize Z and T.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormBounds {
    pub z_min: f64,
    pub z_max: f64,
    pub t_min: f64,
    pub t_max: f64,
}

impl NormBounds {
    pub fn from_samples(samples: &[(f64, f64)]) -> Self {
        let mut b = NormBounds {
            z_min: f64::INFINITY,
            z_max: f64::NEG_INFINITY,
            t_min: f64::INFINITY,
            t_max: f64::NEG_INFINITY,
        };
        for &(t, z) in samples {
            b.z_min = b.z_min.min(z);
            b.z_max = b.z_max.max(z);
            b.t_min = b.t_min.min(t);
            b.t_max = b.t_max.max(t);
        }
        b
    }

    /// Normalized profit; linear beyond the sample range.
    pub fn z_norm(&self, z: f64) -> f64 {
        scale(z, self.z_min, self.z_max)
    }

    /// Normalized travel time (0 at the sample minimum); linear beyond the range.
    pub fn t_norm(&self, t: f64) -> f64 {
        scale(t, self.t_min, self.t_max)
    }
}

fn scale(v: f64, lo: f64, hi: f64) -> f64 {
    let span = hi - lo;
    if span > 0.0 {
        (v - lo) / span
    } else {
        v - lo
    }
}

/// Shannon entropy of a column of nonnegative values, scaled by `1/ln(n)`.
fn entropy(values: &[f64]) -> f64 {
    let sum: f64 = values.iter().sum();
    if !(sum > 0.0) {
        return 1.0;
    }
    let h: f64 = values
        .iter()
        .map(|&v| {
            let p = v / sum;
            if p > 0.0 { p * p.ln() } else { 0.0 }
        })
        .sum();
    (-h / (values.len() as f64).ln()).clamp(0.0, 1.0)
}

/// Entropy weights from `(T, Z)` samples.
pub fn ewm_weights(samples: &[(f64, f64)]) -> Result<EwmWeights, ScalarizeError> {
    if samples.len() < 2 {
        return Err(ScalarizeError::TooFewSamples(samples.len()));
    }
    let b = NormBounds::from_samples(samples);
    let norm = |v: f64, lo: f64, hi: f64| if hi > lo { (v - lo) / (hi - lo) } else { 0.0 };
    // Travel time is a cost index: invert so larger is better.
    let t_col: Vec<f64> = samples.iter().map(|&(t, _)| norm(b.t_max - t + b.t_min, b.t_min, b.t_max)).collect();
    let z_col: Vec<f64> = samples.iter().map(|&(_, z)| norm(z, b.z_min, b.z_max)).collect();
    let entropy_z = entropy(&z_col);
    let entropy_t = entropy(&t_col);
    let dz = 1.0 - entropy_z;
    let dt = 1.0 - entropy_t;
    let total = dz + dt;
    if total <= 0.0 {
        return Ok(EwmWeights { w1: 0.5, w2: 0.5, entropy_z, entropy_t, samples: samples.len(), degenerate: true });
    }
    Ok(EwmWeights {
        w1: dz / total,
        w2: dt / total,
        entropy_z,
        entropy_t,
        samples: samples.len(),
        degenerate: false,
    })
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum PenaltyMode {
    /// Static penalty proportional to the normalized residuals.
    #[default]
    Linear,
    /// Infeasible solutions sink below everything, still ordered by residual.
    Death,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Fitness {
    pub f: f64,
    pub z_norm: f64,
    pub t_norm: f64,
    pub penalty: f64,
    pub feasible: bool,
}

/// Frozen scalarizer: weights, normalization bounds and penalty setting.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Scalarizer {
    pub weights: EwmWeights,
    pub bounds: NormBounds,
    pub penalty_coefficient: f64,
    pub mode: PenaltyMode,
}

const DEATH_PENALTY: f64 = 1e9;

impl Scalarizer {
    /// Fit weights and bounds to `(T, Z)` samples. The default penalty
    /// coefficient is ten times the larger of one and the sample span of
    /// the unpenalized objective.
    pub fn fit(samples: &[(f64, f64)], coefficient: Option<f64>, mode: PenaltyMode) -> Result<Self, ScalarizeError> {
        let weights = ewm_weights(samples)?;
        let bounds = NormBounds::from_samples(samples);
        let raw: Vec<f64> = samples
            .iter()
            .map(|&(t, z)| weights.w1 * bounds.z_norm(z) - weights.w2 * bounds.t_norm(t))
            .collect();
        let span = raw.iter().cloned().fold(f64::NEG_INFINITY, f64::max) - raw.iter().cloned().fold(f64::INFINITY, f64::min);
        let penalty_coefficient = coefficient.unwrap_or(10.0 * span.max(1.0));
        Ok(Scalarizer { weights, bounds, penalty_coefficient, mode })
    }

    /// `residual_sum` is the normalized residual total; zero means feasible.
    pub fn fitness(&self, z: f64, t: f64, residual_sum: f64, feasible: bool) -> Fitness {
        let z_norm = self.bounds.z_norm(z);
        let t_norm = self.bounds.t_norm(t);
        let penalty = if feasible {
            0.0
        } else {
            match self.mode {
                PenaltyMode::Linear => self.penalty_coefficient * (1.0 + residual_sum),
                PenaltyMode::Death => DEATH_PENALTY * (1.0 + residual_sum),
            }
        };
        Fitness {
            f: self.weights.w1 * z_norm - self.weights.w2 * t_norm - penalty,
            z_norm,
            t_norm,
            penalty,
            feasible,
        }
    }
}
