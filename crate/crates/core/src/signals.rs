//! Closed-form bandlimited test signals and the sampling operator, plus the
//! weight presets matched to the two example signals.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interpolator::SampleSet;
use crate::kernel::{sinc, CovarianceFn, Kernel};
use crate::weights::WeightSpec;

/// Real test signal addressable by name.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AnalyticSignal {
    /// `sinc²(Bt) + sinc²(Bt/20)`: low-frequency dominant.
    Example1 { bandwidth: f64 },
    /// `sinc²(Bt) + sinc²(Bt/20) cos(1.7πBt)`: high-frequency dominant.
    Example2 { bandwidth: f64 },
    /// `Σ_k a_k ψ(t - τ_k)`, a member of the kernel's own space with known norm.
    Mixture {
        taus: Vec<f64>,
        amps: Vec<f64>,
        kernel: Kernel,
    },
}

impl AnalyticSignal {
    pub fn example1(bandwidth: f64) -> Self {
        AnalyticSignal::Example1 { bandwidth }
    }

    pub fn example2(bandwidth: f64) -> Self {
        AnalyticSignal::Example2 { bandwidth }
    }

    pub fn mixture(taus: Vec<f64>, amps: Vec<f64>, kernel: Kernel) -> Result<Self> {
        if taus.len() != amps.len() {
            return Err(Error::DimensionMismatch {
                expected: taus.len(),
                found: amps.len(),
            });
        }
        Ok(AnalyticSignal::Mixture { taus, amps, kernel })
    }

    /// Looks up `example1` / `example2` by name.
    pub fn by_name(name: &str, bandwidth: f64) -> Result<Self> {
        match name {
            "example1" => Ok(Self::example1(bandwidth)),
            "example2" => Ok(Self::example2(bandwidth)),
            other => Err(Error::InvalidInput(format!(
                "unknown signal {other:?}; expected example1 or example2"
            ))),
        }
    }

    pub fn bandwidth(&self) -> f64 {
        match self {
            AnalyticSignal::Example1 { bandwidth } | AnalyticSignal::Example2 { bandwidth } => *bandwidth,
            AnalyticSignal::Mixture { kernel, .. } => kernel.bandwidth(),
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        match self {
            AnalyticSignal::Example1 { bandwidth: b } => sinc(b * t).powi(2) + sinc(b * t / 20.0).powi(2),
            AnalyticSignal::Example2 { bandwidth: b } => {
                sinc(b * t).powi(2) + sinc(b * t / 20.0).powi(2) * (1.7 * std::f64::consts::PI * b * t).cos()
            }
            AnalyticSignal::Mixture { taus, amps, kernel } => {
                taus.iter().zip(amps).map(|(tau, a)| a * kernel.eval(t - tau)).sum()
            }
        }
    }

    /// `x[n] = x(nT)`, `n = -N..=N`.
    pub fn sample(&self, spacing: f64, half_count: usize) -> Result<SampleSet> {
        SampleSet::from_fn(spacing, half_count, |t| self.eval(t).into())
    }

    /// `‖x‖²_W = aᵀ Ψ a` for a mixture; `None` for the closed-form examples.
    pub fn norm_sq(&self) -> Option<f64> {
        let AnalyticSignal::Mixture { taus, amps, kernel } = self else {
            return None;
        };
        let mut acc = 0.0;
        for (ti, ai) in taus.iter().zip(amps) {
            for (tj, aj) in taus.iter().zip(amps) {
                acc += ai * aj * kernel.eval(ti - tj);
            }
        }
        Some(acc)
    }
}

pub fn eval_signal(sig: &AnalyticSignal, t: f64) -> f64 {
    sig.eval(t)
}

pub fn sample_signal(sig: &AnalyticSignal, spacing: f64, half_count: usize) -> Result<SampleSet> {
    sig.sample(spacing, half_count)
}

/// Cubic-spline low-pass weights, `d_m = e^{-|m|/3}`, `M = 11`, `α = 0.01`.
pub fn lowpass_spec(bandwidth: f64) -> Result<WeightSpec> {
    let half: Vec<f64> = (0..=11).map(|m| (-(m as f64) / 3.0).exp()).collect();
    WeightSpec::from_half(bandwidth, 3, &half, 0.01)
}

/// Cubic-spline weights peaked near `|Ω| ≈ 0.85 · 2πB`:
/// `d_m = exp(-((|m| - 11)/1.5)²) + 0.1`, `M = 11`, `α = 10⁻³`.
pub fn highpass_spec(bandwidth: f64) -> Result<WeightSpec> {
    let half: Vec<f64> = (0..=11)
        .map(|m| (-((m as f64 - 11.0) / 1.5).powi(2)).exp() + 0.1)
        .collect();
    WeightSpec::from_half(bandwidth, 3, &half, 1e-3)
}

/// Named preset lookup: `uniform`, `lowpass`, `highpass`.
pub fn preset_spec(name: &str, bandwidth: f64) -> Result<WeightSpec> {
    match name {
        "uniform" => WeightSpec::uniform(bandwidth),
        "lowpass" => lowpass_spec(bandwidth),
        "highpass" => highpass_spec(bandwidth),
        other => Err(Error::InvalidSpec(format!(
            "unknown preset {other:?}; expected uniform, lowpass or highpass"
        ))),
    }
}
