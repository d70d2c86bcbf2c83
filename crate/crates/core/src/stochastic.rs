//! LMMSE interpolation of wide-sense-stationary bandlimited processes and a
//! Monte-Carlo harness built on spectral synthesis.
//!
//! The Fourier convention is `R(τ) = (1/2π) ∫ S(Ω) cos(Ωτ) dΩ` over the band.
//! Realizations use ChaCha8 (`rand_chacha`), seeded with `seed_from_u64(seed)`
//! and switched to stream `index` for realization `index`, so every
//! realization is reproducible on its own.

use std::f64::consts::PI;
use std::path::Path;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interpolator::{build_gram, cardinal_values, Interpolant, SampleSet};
use crate::io::{csv_bytes, format_float, write_atomic};
use crate::kernel::{sinc, CovarianceFn, Kernel};
use crate::quadrature::{composite_simpson, DEFAULT_TOLERANCE};
use crate::weights::{DensityGrid, WeightSpec};

/// In-band frequencies used by [`synthesize_process`].
pub const SYNTHESIS_FREQUENCIES: usize = 2048;

/// Power spectral density `S(Ω)`, zero outside `|Ω| < 2πB`.
#[derive(Clone, Debug, PartialEq)]
pub enum PsdModel {
    /// `S ≡ γ²` in band.
    Uniform { bandwidth: f64, level: f64 },
    /// `S = 1/W` for a B-spline weight spec.
    Reciprocal(WeightSpec),
    /// Piecewise-linear density through tabulated nodes covering the band.
    Grid { bandwidth: f64, grid: DensityGrid },
}

impl PsdModel {
    pub fn uniform(bandwidth: f64, level: f64) -> Result<Self> {
        if !(bandwidth.is_finite() && bandwidth > 0.0) {
            return Err(Error::InvalidSpec(format!(
                "bandwidth must be positive, got {bandwidth}"
            )));
        }
        if !(level.is_finite() && level > 0.0) {
            return Err(Error::InvalidDensity(format!(
                "PSD level must be positive, got {level}"
            )));
        }
        Ok(PsdModel::Uniform { bandwidth, level })
    }

    pub fn reciprocal(spec: WeightSpec) -> Self {
        PsdModel::Reciprocal(spec)
    }

    pub fn from_grid(bandwidth: f64, grid: DensityGrid) -> Result<Self> {
        grid.check_covers(bandwidth)?;
        if let Some(v) = grid.values().iter().find(|&&v| !(v > 0.0)) {
            return Err(Error::InvalidDensity(format!(
                "PSD must be bounded away from zero in band, found {v}"
            )));
        }
        Ok(PsdModel::Grid { bandwidth, grid })
    }

    pub fn bandwidth(&self) -> f64 {
        match self {
            PsdModel::Uniform { bandwidth, .. } | PsdModel::Grid { bandwidth, .. } => *bandwidth,
            PsdModel::Reciprocal(spec) => spec.bandwidth(),
        }
    }

    pub fn band_edge(&self) -> f64 {
        2.0 * PI * self.bandwidth()
    }

    /// `S(Ω)`.
    pub fn density(&self, omega: f64) -> f64 {
        if omega.abs() >= self.band_edge() {
            return 0.0;
        }
        match self {
            PsdModel::Uniform { level, .. } => *level,
            PsdModel::Reciprocal(spec) => Kernel::Spline(spec.clone()).inverse_weight(omega),
            PsdModel::Grid { grid, .. } => grid.interpolate(omega),
        }
    }

    /// `R(0) = (1/2π) ∫ S`, the process variance.
    pub fn variance(&self) -> f64 {
        self.autocorrelation(0.0)
    }

    /// Closed-form `R(τ)`: scaled sinc, the spline kernel, or the exact
    /// integral of the piecewise-linear density against `cos(Ωτ)`.
    pub fn autocorrelation(&self, tau: f64) -> f64 {
        match self {
            PsdModel::Uniform { bandwidth, level } => level * 2.0 * bandwidth * sinc(2.0 * bandwidth * tau),
            PsdModel::Reciprocal(spec) => Kernel::Spline(spec.clone()).psi(tau),
            PsdModel::Grid { grid, .. } => self.grid_autocorrelation(grid, tau),
        }
    }

    /// `R(τ)` by adaptive quadrature of the defining integral.
    pub fn autocorrelation_quadrature(&self, tau: f64, tolerance: f64) -> Result<f64> {
        match self {
            PsdModel::Uniform { bandwidth, level } => {
                Ok(level * Kernel::uniform(*bandwidth).psi_quadrature(tau, tolerance / level)?)
            }
            PsdModel::Reciprocal(spec) => Kernel::Spline(spec.clone()).psi_quadrature(tau, tolerance),
            PsdModel::Grid { grid, .. } => {
                let edge = self.band_edge();
                let mut breaks: Vec<f64> = grid.omegas().iter().copied().filter(|w| w.abs() < edge).collect();
                breaks.insert(0, -edge);
                breaks.push(edge);
                let q = composite_simpson(|w| grid.interpolate(w) * (w * tau).cos(), &breaks, tolerance * 2.0 * PI)?;
                Ok(q.value / (2.0 * PI))
            }
        }
    }

    fn grid_autocorrelation(&self, grid: &DensityGrid, tau: f64) -> f64 {
        let edge = self.band_edge();
        let mut nodes: Vec<f64> = grid.omegas().iter().copied().filter(|w| w.abs() < edge).collect();
        nodes.insert(0, -edge);
        nodes.push(edge);
        let mut acc = 0.0;
        for w in nodes.windows(2) {
            let (a, b) = (w[0], w[1]);
            acc += linear_cos_integral(a, b, grid.interpolate(a), grid.interpolate(b), tau);
        }
        acc / (2.0 * PI)
    }

    pub fn kernel(&self) -> Autocorrelation {
        Autocorrelation(self.clone())
    }
}

/// `∫_a^b s(Ω) cos(Ωτ) dΩ` for `s` linear from `sa` to `sb`.
fn linear_cos_integral(a: f64, b: f64, sa: f64, sb: f64, tau: f64) -> f64 {
    let h = b - a;
    if (h * tau).abs() < 0.1 {
        // Three-point Gauss-Legendre; the closed form below cancels badly here.
        let nodes = [
            (-(0.6f64).sqrt(), 5.0 / 9.0),
            (0.0, 8.0 / 9.0),
            ((0.6f64).sqrt(), 5.0 / 9.0),
        ];
        return nodes
            .iter()
            .map(|&(x, wgt)| {
                let s = 0.5 * (1.0 + x);
                let omega = a + h * s;
                wgt * (sa + (sb - sa) * s) * (omega * tau).cos()
            })
            .sum::<f64>()
            * h
            / 2.0;
    }
    let slope = (sb - sa) / h;
    let anti = |w: f64, s: f64| s * (w * tau).sin() / tau + slope * (w * tau).cos() / (tau * tau);
    anti(b, sb) - anti(a, sa)
}

/// The autocorrelation as a covariance function for Gram assembly.
#[derive(Clone, Debug, PartialEq)]
pub struct Autocorrelation(pub PsdModel);

impl CovarianceFn for Autocorrelation {
    fn eval(&self, tau: f64) -> f64 {
        self.0.autocorrelation(tau)
    }
}

/// `x̂(t) = Σ c_n R(t - nT)` with `c` solving `[R((m-n)T)] c = x`.
pub fn lmmse_interpolant(samples: &SampleSet, psd: &PsdModel) -> Result<Interpolant<Autocorrelation>> {
    Interpolant::fit(&psd.kernel(), samples, 0.0)
}

pub fn lmmse_interpolate(samples: &SampleSet, psd: &PsdModel, t: f64) -> Result<Complex64> {
    Ok(lmmse_interpolant(samples, psd)?.evaluate(t))
}

/// Precomputed synthesis tables for a fixed time grid.
#[derive(Clone, Debug)]
pub struct SynthesisPlan {
    len: usize,
    amplitudes: Vec<f64>,
    // [k * len + i] = cos(Ω_k t_i), sin(Ω_k t_i)
    cos_table: Vec<f64>,
    sin_table: Vec<f64>,
}

impl SynthesisPlan {
    /// `x(t) = Σ_k √(S(Ω_k) ΔΩ/π) [a_k cos(Ω_k t) + b_k sin(Ω_k t)]` on
    /// midpoint frequencies `Ω_k = (k + ½) ΔΩ` in `(0, 2πB)`.
    pub fn new(psd: &PsdModel, t_grid: &[f64]) -> Result<Self> {
        if t_grid.iter().any(|t| !t.is_finite()) {
            return Err(Error::InvalidInput("time grid must be finite".into()));
        }
        let k_count = SYNTHESIS_FREQUENCIES;
        let step = psd.band_edge() / k_count as f64;
        let freqs: Vec<f64> = (0..k_count).map(|k| (k as f64 + 0.5) * step).collect();
        let amplitudes = freqs.iter().map(|&w| (psd.density(w) * step / PI).sqrt()).collect();
        let len = t_grid.len();
        let mut cos_table = Vec::with_capacity(k_count * len);
        let mut sin_table = Vec::with_capacity(k_count * len);
        for &w in &freqs {
            for &t in t_grid {
                let (s, c) = (w * t).sin_cos();
                cos_table.push(c);
                sin_table.push(s);
            }
        }
        Ok(SynthesisPlan {
            len,
            amplitudes,
            cos_table,
            sin_table,
        })
    }

    /// Realization `index` of the process for `seed`.
    pub fn realize(&self, seed: u64, index: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(index);
        let mut out = vec![0.0; self.len];
        for (k, amp) in self.amplitudes.iter().enumerate() {
            let a: f64 = StandardNormal.sample(&mut rng);
            let b: f64 = StandardNormal.sample(&mut rng);
            let (ca, cb) = (amp * a, amp * b);
            let cos_row = &self.cos_table[k * self.len..(k + 1) * self.len];
            let sin_row = &self.sin_table[k * self.len..(k + 1) * self.len];
            for i in 0..self.len {
                out[i] += ca * cos_row[i] + cb * sin_row[i];
            }
        }
        out
    }
}

/// One realization (stream 0) of the process on `t_grid`.
pub fn synthesize_process(psd: &PsdModel, seed: u64, t_grid: &[f64]) -> Result<Vec<f64>> {
    Ok(SynthesisPlan::new(psd, t_grid)?.realize(seed, 0))
}

/// Estimators compared by the Monte-Carlo harness.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InterpolatorKind {
    /// Truncated `Σ x[n] sinc(t/T - n)`.
    Shannon,
    /// Minimum-norm with `W ≡ 1` over the process band.
    UniformWeight,
    /// Minimum-norm with `W = 1/S`, i.e. the LMMSE estimator.
    MatchedWeight,
}

impl InterpolatorKind {
    pub const ALL: [InterpolatorKind; 3] = [
        InterpolatorKind::Shannon,
        InterpolatorKind::UniformWeight,
        InterpolatorKind::MatchedWeight,
    ];

    pub fn name(self) -> &'static str {
        match self {
            InterpolatorKind::Shannon => "shannon",
            InterpolatorKind::UniformWeight => "uniform_weight",
            InterpolatorKind::MatchedWeight => "matched_weight",
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == name)
            .ok_or_else(|| Error::InvalidInput(format!("unknown interpolator kind {name:?}")))
    }

    /// Linear weights `h` with `x̂(t) = Σ_n h_n(t) x[n]`, one row per `t`.
    fn weights(self, psd: &PsdModel, spacing: f64, half_count: usize, t_eval: &[f64]) -> Result<Vec<Vec<f64>>> {
        let n = half_count as isize;
        match self {
            InterpolatorKind::Shannon => Ok(t_eval
                .iter()
                .map(|&t| (-n..=n).map(|k| sinc((t - k as f64 * spacing) / spacing)).collect())
                .collect()),
            InterpolatorKind::UniformWeight => {
                let kernel = Kernel::uniform(psd.bandwidth());
                let gram = build_gram(&kernel, spacing, half_count)?;
                t_eval.iter().map(|&t| cardinal_values(&gram, &kernel, t)).collect()
            }
            InterpolatorKind::MatchedWeight => {
                let kernel = psd.kernel();
                let gram = build_gram(&kernel, spacing, half_count)?;
                t_eval.iter().map(|&t| cardinal_values(&gram, &kernel, t)).collect()
            }
        }
    }
}

/// Mean squared error and its Monte-Carlo standard error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MseEstimate {
    pub mse: f64,
    pub stderr: f64,
}

/// Mean of `|x̂(t) - x(t)|²` over `t_eval` and `realizations` draws.
pub fn empirical_mse(
    psd: &PsdModel,
    kind: InterpolatorKind,
    spacing: f64,
    half_count: usize,
    t_eval: &[f64],
    realizations: usize,
    seed: u64,
) -> Result<MseEstimate> {
    Ok(empirical_mse_table(psd, &[kind], spacing, half_count, t_eval, realizations, seed)?[0])
}

/// [`empirical_mse`] for several kinds on common realizations.
pub fn empirical_mse_table(
    psd: &PsdModel,
    kinds: &[InterpolatorKind],
    spacing: f64,
    half_count: usize,
    t_eval: &[f64],
    realizations: usize,
    seed: u64,
) -> Result<Vec<MseEstimate>> {
    if realizations == 0 {
        return Err(Error::InvalidInput("need at least one realization".into()));
    }
    if t_eval.is_empty() {
        return Err(Error::InvalidInput("need at least one evaluation time".into()));
    }
    if !(spacing.is_finite() && spacing > 0.0) {
        return Err(Error::InvalidInput(format!("spacing must be positive, got {spacing}")));
    }
    let n = half_count as isize;
    let mut grid: Vec<f64> = (-n..=n).map(|k| k as f64 * spacing).collect();
    let nodes = grid.len();
    grid.extend_from_slice(t_eval);
    let plan = SynthesisPlan::new(psd, &grid)?;
    let weights = kinds
        .iter()
        .map(|k| k.weights(psd, spacing, half_count, t_eval))
        .collect::<Result<Vec<_>>>()?;

    let mut sums = vec![(0.0, 0.0); kinds.len()];
    for r in 0..realizations {
        let path = plan.realize(seed, r as u64);
        let (x, truth) = path.split_at(nodes);
        for (acc, rows) in sums.iter_mut().zip(&weights) {
            let err: f64 = rows
                .iter()
                .zip(truth)
                .map(|(h, &z)| {
                    let est: f64 = h.iter().zip(x).map(|(a, b)| a * b).sum();
                    (est - z).powi(2)
                })
                .sum::<f64>()
                / t_eval.len() as f64;
            acc.0 += err;
            acc.1 += err * err;
        }
    }
    let count = realizations as f64;
    Ok(sums
        .into_iter()
        .map(|(s, s2)| {
            let mse = s / count;
            let var = if realizations > 1 {
                ((s2 - count * mse * mse) / (count - 1.0)).max(0.0)
            } else {
                0.0
            };
            MseEstimate {
                mse,
                stderr: (var / count).sqrt(),
            }
        })
        .collect())
}

/// Row of an MSE table.
#[derive(Clone, Debug, PartialEq)]
pub struct MseRow {
    pub kind: InterpolatorKind,
    pub t_over_nyquist: f64,
    pub half_count: usize,
    pub estimate: MseEstimate,
}

/// Columns `kind, T_over_nyquist, N, mse, stderr`.
pub fn write_mse_csv(path: impl AsRef<Path>, rows: &[MseRow]) -> Result<()> {
    write_atomic(path, &mse_csv_bytes(rows)?)
}

pub fn mse_csv_bytes(rows: &[MseRow]) -> Result<Vec<u8>> {
    let text: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                r.kind.name().to_string(),
                format_float(r.t_over_nyquist),
                r.half_count.to_string(),
                format_float(r.estimate.mse),
                format_float(r.estimate.stderr),
            ]
        })
        .collect();
    csv_bytes(&["kind", "T_over_nyquist", "N", "mse", "stderr"], &text)
}

/// Quadrature check of the closed-form autocorrelation at default tolerance.
pub fn autocorrelation_checked(psd: &PsdModel, tau: f64) -> Result<(f64, f64)> {
    Ok((
        psd.autocorrelation(tau),
        psd.autocorrelation_quadrature(tau, DEFAULT_TOLERANCE)?,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interpolator::truncated_shannon;
    use crate::signals::lowpass_spec;

    fn triangle_grid(b: f64) -> PsdModel {
        let edge = 2.0 * PI * b;
        let grid = DensityGrid::from_fn(b, 129, |w| 0.2 + 1.0 - w.abs() / edge).unwrap();
        PsdModel::from_grid(b, grid).unwrap()
    }

    #[test]
    fn uniform_autocorrelation_zeros_at_nyquist_lags() {
        let t_s = 0.25;
        let psd = PsdModel::uniform(1.0 / (2.0 * t_s), 3.0).unwrap();
        assert!((psd.autocorrelation(0.0) - 3.0 / t_s).abs() < 1e-13);
        for k in 1..10 {
            assert_eq!(psd.autocorrelation(k as f64 * t_s), 0.0);
        }
    }

    #[test]
    fn variance_is_mean_density() {
        let psd = triangle_grid(1.0);
        let edge = 2.0 * PI;
        // (1/2π) ∫ (1.2 - |w|/edge) over [-edge, edge]
        let expected = (2.0 * edge * 1.2 - edge) / (2.0 * PI);
        assert!((psd.variance() - expected).abs() < 1e-12);
    }

    #[test]
    fn closed_forms_match_quadrature() {
        let models = [
            PsdModel::uniform(1.5, 0.7).unwrap(),
            PsdModel::reciprocal(lowpass_spec(1.0).unwrap()),
            triangle_grid(1.0),
        ];
        for psd in &models {
            for i in -30..=30 {
                let tau = 0.37 * i as f64;
                let (closed, quad) = autocorrelation_checked(psd, tau).unwrap();
                assert!((closed - quad).abs() < 1e-8, "{tau}: {closed} vs {quad}");
            }
        }
    }

    #[test]
    fn linear_cos_integral_branches_agree() {
        let exact = |tau: f64| {
            let slope = 2.0;
            let anti =
                |w: f64| (1.0 + slope * (w - 0.3)) * (w * tau).sin() / tau + slope * (w * tau).cos() / (tau * tau);
            anti(0.8) - anti(0.3)
        };
        for tau in [0.21, 0.3, 1.0, 7.0] {
            let got = linear_cos_integral(0.3, 0.8, 1.0, 2.0, tau);
            assert!((got - exact(tau)).abs() < 1e-9, "{tau}");
        }
        assert!((linear_cos_integral(0.0, 1.0, 1.0, 1.0, 0.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn grid_psd_rejects_zero_and_short_cover() {
        let zero = DensityGrid::from_fn(1.0, 11, |w| w.abs()).unwrap();
        assert!(PsdModel::from_grid(1.0, zero).is_err());
        let narrow = DensityGrid::from_fn(0.5, 11, |_| 1.0).unwrap();
        assert!(PsdModel::from_grid(1.0, narrow).is_err());
    }

    #[test]
    fn reciprocal_psd_lmmse_equals_weighted_interpolant() {
        let spec = lowpass_spec(1.0).unwrap();
        let psd = PsdModel::reciprocal(spec.clone());
        let x = SampleSet::from_fn(0.8, 8, |t| Complex64::new((0.5 * t).cos(), 0.1 * t)).unwrap();
        let lmmse = lmmse_interpolant(&x, &psd).unwrap();
        let weighted = Interpolant::fit(&Kernel::Spline(spec), &x, 0.0).unwrap();
        for i in -100..=100 {
            let t = 0.07 * i as f64;
            assert!((lmmse.evaluate(t) - weighted.evaluate(t)).norm() < 1e-9);
        }
    }

    #[test]
    fn uniform_psd_at_nyquist_is_shannon() {
        let t_s = 0.5;
        let psd = PsdModel::uniform(1.0 / (2.0 * t_s), 2.0).unwrap();
        let x = SampleSet::from_fn(t_s, 10, |t| Complex64::new((1.1 * t).sin() + 0.3, 0.0)).unwrap();
        for i in -50..=50 {
            let t = 0.09 * i as f64;
            let a = lmmse_interpolate(&x, &psd, t).unwrap();
            assert!((a - truncated_shannon(&x, t)).norm() < 1e-8);
        }
    }

    #[test]
    fn synthesis_is_deterministic_and_has_the_right_variance() {
        let psd = triangle_grid(1.0);
        let t_grid = [0.0, 0.37, 5.0];
        assert_eq!(
            synthesize_process(&psd, 7, &t_grid).unwrap(),
            synthesize_process(&psd, 7, &t_grid).unwrap()
        );
        assert_ne!(
            synthesize_process(&psd, 7, &t_grid).unwrap(),
            synthesize_process(&psd, 8, &t_grid).unwrap()
        );

        let plan = SynthesisPlan::new(&psd, &[0.37]).unwrap();
        let draws: Vec<f64> = (0..2000).map(|r| plan.realize(11, r)[0]).collect();
        let mean = draws.iter().sum::<f64>() / 2000.0;
        let var = draws.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / 1999.0;
        let expected = psd.variance();
        assert!((var - expected).abs() < 0.05 * expected, "{var} vs {expected}");
        assert!(mean.abs() < 3.0 * (expected / 2000.0).sqrt());
    }

    #[test]
    fn mse_kinds_agree_at_nyquist_with_uniform_psd() {
        let t_s = 0.5;
        let psd = PsdModel::uniform(1.0, 1.0).unwrap();
        let t_eval: Vec<f64> = (0..11).map(|i| -2.5 + 0.5 * i as f64 + 0.25).collect();
        let table = empirical_mse_table(&psd, &InterpolatorKind::ALL, t_s, 10, &t_eval, 200, 3).unwrap();
        for est in &table {
            assert!(est.mse >= 0.0);
            assert!((est.mse - table[0].mse).abs() < 1e-9 * table[0].mse.max(1.0));
        }
    }

    #[test]
    fn kind_names_round_trip() {
        for k in InterpolatorKind::ALL {
            assert_eq!(InterpolatorKind::parse(k.name()).unwrap(), k);
        }
        assert!(InterpolatorKind::parse("spline").is_err());
        assert!(empirical_mse(
            &PsdModel::uniform(1.0, 1.0).unwrap(),
            InterpolatorKind::Shannon,
            0.5,
            3,
            &[0.1],
            0,
            1
        )
        .is_err());
    }
}
