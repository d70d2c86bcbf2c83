//! Spectral weights `W(Ω)` parameterized through the B-spline expansion of
//! their reciprocal
//!
//! ```text
//! G(Ω) = 1/W(Ω) = Σ_{m=-M}^{M} d_m βᴷ(Ω/(2A) - m) + α β⁰(Ω/(4πB)),   A = 2πB/(K + 2M + 1)
//! ```
//!
//! so that the splines are evenly spaced and exactly tile `[-2πB, 2πB]`.

use std::f64::consts::PI;
use std::path::Path;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::bspline::bspline;
use crate::error::{Error, Result};

/// Number of uniform cells in the positivity validation grid.
pub const VALIDATION_POINTS: usize = 4096;

/// `G` must stay above this fraction of its maximum on the validation grid.
pub const POSITIVITY_FLOOR: f64 = 1e-9;

const SYMMETRY_TOL: f64 = 1e-12;

/// B-spline parameterization of the inverse spectral weight `G = 1/W`.
///
/// Coefficients are stored at offsets `0..=2M` for the logical indices
/// `-M..=M` and are always symmetric (`d[-m] == d[m]`), which keeps the
/// associated kernel real and even.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "WeightSpecDoc", into = "WeightSpecDoc")]
pub struct WeightSpec {
    bandwidth: f64,
    degree: usize,
    half_count: usize,
    coeffs: Vec<f64>,
    floor_alpha: f64,
}

/// On-disk layout of a [`WeightSpec`].
#[derive(Clone, Debug, Serialize, Deserialize)]
struct WeightSpecDoc {
    #[serde(rename = "bandwidth_B")]
    bandwidth: f64,
    #[serde(rename = "degree_K")]
    degree: usize,
    #[serde(rename = "half_count_M")]
    half_count: usize,
    #[serde(rename = "coeffs_d")]
    coeffs: Vec<f64>,
    floor_alpha: f64,
}

impl TryFrom<WeightSpecDoc> for WeightSpec {
    type Error = Error;

    fn try_from(doc: WeightSpecDoc) -> Result<Self> {
        if doc.coeffs.len() != 2 * doc.half_count + 1 {
            return Err(Error::InvalidSpec(format!(
                "half_count_M = {} requires {} coefficients, found {}",
                doc.half_count,
                2 * doc.half_count + 1,
                doc.coeffs.len()
            )));
        }
        WeightSpec::new(doc.bandwidth, doc.degree, doc.coeffs, doc.floor_alpha)
    }
}

impl From<WeightSpec> for WeightSpecDoc {
    fn from(spec: WeightSpec) -> Self {
        WeightSpecDoc {
            bandwidth: spec.bandwidth,
            degree: spec.degree,
            half_count: spec.half_count,
            coeffs: spec.coeffs,
            floor_alpha: spec.floor_alpha,
        }
    }
}

impl WeightSpec {
    /// Builds and validates a spec. `coeffs` holds `d_{-M}..=d_M`, so its
    /// length must be odd.
    pub fn new(bandwidth: f64, degree: usize, coeffs: Vec<f64>, floor_alpha: f64) -> Result<Self> {
        let spec = Self::new_unvalidated(bandwidth, degree, coeffs, floor_alpha)?;
        spec.check_positive()?;
        Ok(spec)
    }

    /// Structural checks only; positivity of `G` is not verified.
    fn new_unvalidated(bandwidth: f64, degree: usize, coeffs: Vec<f64>, floor_alpha: f64) -> Result<Self> {
        if !(bandwidth.is_finite() && bandwidth > 0.0) {
            return Err(Error::InvalidSpec(format!(
                "bandwidth must be positive, got {bandwidth}"
            )));
        }
        if coeffs.len() % 2 == 0 {
            return Err(Error::InvalidSpec(format!(
                "expected an odd number (2M+1) of coefficients, got {}",
                coeffs.len()
            )));
        }
        if coeffs.iter().any(|d| !d.is_finite()) {
            return Err(Error::InvalidSpec("coefficients must be finite".into()));
        }
        if !(floor_alpha.is_finite() && floor_alpha >= 0.0) {
            return Err(Error::InvalidSpec(format!(
                "floor_alpha must be finite and nonnegative, got {floor_alpha}"
            )));
        }
        let scale = coeffs.iter().fold(0.0f64, |m, d| m.max(d.abs()));
        let n = coeffs.len();
        for i in 0..n / 2 {
            if (coeffs[i] - coeffs[n - 1 - i]).abs() > SYMMETRY_TOL * scale.max(f64::MIN_POSITIVE) {
                return Err(Error::InvalidSpec(format!(
                    "coefficients must be symmetric: d[{}] = {} but d[{}] = {}",
                    i as isize - (n / 2) as isize,
                    coeffs[i],
                    (n / 2 - i),
                    coeffs[n - 1 - i]
                )));
            }
        }
        Ok(WeightSpec {
            bandwidth,
            degree,
            half_count: n / 2,
            coeffs,
            floor_alpha,
        })
    }

    /// `W ≡ 1` over the band: a single degree-0 spline that covers it.
    pub fn uniform(bandwidth: f64) -> Result<Self> {
        Self::new(bandwidth, 0, vec![1.0], 0.0)
    }

    /// Builds a spec from the nonnegative-index half `d_0..=d_M`, mirroring it.
    pub fn from_half(bandwidth: f64, degree: usize, half: &[f64], floor_alpha: f64) -> Result<Self> {
        if half.is_empty() {
            return Err(Error::InvalidSpec("need at least d_0".into()));
        }
        let coeffs = half.iter().rev().chain(half.iter().skip(1)).copied().collect();
        Self::new(bandwidth, degree, coeffs, floor_alpha)
    }

    pub fn bandwidth(&self) -> f64 {
        self.bandwidth
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn half_count(&self) -> usize {
        self.half_count
    }

    pub fn floor_alpha(&self) -> f64 {
        self.floor_alpha
    }

    /// All coefficients `d_{-M}..=d_M`.
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Coefficient at logical index `m` in `-M..=M`.
    pub fn coeff(&self, m: isize) -> f64 {
        self.coeffs[(m + self.half_count as isize) as usize]
    }

    /// Band edge `2πB` in rad/s.
    pub fn band_edge(&self) -> f64 {
        2.0 * PI * self.bandwidth
    }

    /// Spline spacing constant `A = 2πB / (K + 2M + 1)`.
    pub fn spacing(&self) -> f64 {
        self.band_edge() / (self.degree + 2 * self.half_count + 1) as f64
    }

    /// `G(Ω) = 1/W(Ω)`. Fails outside the band, where the weight is undefined.
    pub fn inverse_weight(&self, omega: f64) -> Result<f64> {
        let edge = self.band_edge();
        if !(omega.abs() <= edge * (1.0 + 1e-12)) {
            return Err(Error::OutOfBand { omega, band_edge: edge });
        }
        Ok(self.inverse_weight_unchecked(omega))
    }

    /// `W(Ω) = 1/G(Ω)`.
    pub fn weight(&self, omega: f64) -> Result<f64> {
        self.inverse_weight(omega).map(f64::recip)
    }

    pub(crate) fn inverse_weight_unchecked(&self, omega: f64) -> f64 {
        let x = omega / (2.0 * self.spacing());
        // Only splines with |x - m| < (K+1)/2 contribute.
        let reach = (self.degree as f64 + 1.0) / 2.0;
        let m_lo = ((x - reach).floor() as isize).max(-(self.half_count as isize));
        let m_hi = ((x + reach).ceil() as isize).min(self.half_count as isize);
        let mut g = 0.0;
        for m in m_lo..=m_hi {
            g += self.coeff(m) * bspline(self.degree, x - m as f64);
        }
        g + self.floor_alpha * bspline(0, omega / (4.0 * PI * self.bandwidth))
    }

    /// Cell midpoints of the positivity validation grid over the band.
    ///
    /// The band edges themselves are excluded: every spline (and the floor
    /// term) vanishes there, so `G` can only be bounded away from zero on the
    /// open band.
    pub fn validation_grid(&self) -> impl Iterator<Item = f64> {
        let edge = self.band_edge();
        let h = 2.0 * edge / VALIDATION_POINTS as f64;
        (0..VALIDATION_POINTS).map(move |i| -edge + (i as f64 + 0.5) * h)
    }

    /// `(min G, max G)` over the validation grid. The weight bounds are then
    /// `L = 1/max G` and `U = 1/min G`.
    pub fn inverse_weight_range(&self) -> (f64, f64) {
        self.validation_grid()
            .map(|w| self.inverse_weight_unchecked(w))
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), g| (lo.min(g), hi.max(g)))
    }

    fn check_positive(&self) -> Result<()> {
        let (_, max) = self.inverse_weight_range();
        if !(max > 0.0 && max.is_finite()) {
            return Err(Error::NonPositiveWeight { omega: 0.0, value: max });
        }
        let floor = POSITIVITY_FLOOR * max;
        let worst = self
            .validation_grid()
            .map(|w| (w, self.inverse_weight_unchecked(w)))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("validation grid is nonempty");
        if worst.1 <= floor {
            return Err(Error::NonPositiveWeight {
                omega: worst.0,
                value: worst.1,
            });
        }
        Ok(())
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("weight spec serializes")
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }
}

/// Target spectral density `Z(Ω)` sampled on a strictly increasing grid.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityGrid {
    omegas: Vec<f64>,
    values: Vec<f64>,
}

impl DensityGrid {
    pub fn new(omegas: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if omegas.len() != values.len() {
            return Err(Error::DimensionMismatch {
                expected: omegas.len(),
                found: values.len(),
            });
        }
        if omegas.len() < 2 {
            return Err(Error::InvalidDensity("need at least two nodes".into()));
        }
        if omegas.iter().any(|w| !w.is_finite()) {
            return Err(Error::InvalidDensity("frequencies must be finite".into()));
        }
        if let Some(i) = omegas.windows(2).position(|w| w[1] <= w[0]) {
            return Err(Error::InvalidDensity(format!(
                "frequencies must be strictly increasing (node {})",
                i + 1
            )));
        }
        if let Some(v) = values.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
            return Err(Error::InvalidDensity(format!(
                "density values must be finite and nonnegative, found {v}"
            )));
        }
        Ok(DensityGrid { omegas, values })
    }

    /// Samples `f` on `count` uniformly spaced nodes spanning `[-2πB, 2πB]`.
    pub fn from_fn(bandwidth: f64, count: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        if count < 2 {
            return Err(Error::InvalidDensity("need at least two nodes".into()));
        }
        let edge = 2.0 * PI * bandwidth;
        let omegas: Vec<f64> = (0..count)
            .map(|i| -edge + 2.0 * edge * i as f64 / (count - 1) as f64)
            .collect();
        let values = omegas.iter().map(|&w| f(w)).collect();
        Self::new(omegas, values)
    }

    /// Reads a two-column `omega,value` CSV with a header row.
    pub fn read_csv(path: impl AsRef<Path>) -> Result<Self> {
        let mut reader = csv::Reader::from_path(path)?;
        let mut omegas = Vec::new();
        let mut values = Vec::new();
        for record in reader.records() {
            let record = record?;
            if record.len() != 2 {
                return Err(Error::Parse(format!(
                    "density CSV needs 2 columns (omega, value), found {}",
                    record.len()
                )));
            }
            omegas.push(parse_f64(&record[0])?);
            values.push(parse_f64(&record[1])?);
        }
        Self::new(omegas, values)
    }

    pub fn omegas(&self) -> &[f64] {
        &self.omegas
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Piecewise-linear interpolation; zero outside the grid.
    pub fn interpolate(&self, omega: f64) -> f64 {
        let first = self.omegas[0];
        let last = *self.omegas.last().unwrap();
        if omega < first || omega > last {
            return 0.0;
        }
        let i = self.omegas.partition_point(|&w| w <= omega);
        if i == self.omegas.len() {
            return *self.values.last().unwrap();
        }
        let (w0, w1) = (self.omegas[i - 1], self.omegas[i]);
        let (v0, v1) = (self.values[i - 1], self.values[i]);
        v0 + (v1 - v0) * (omega - w0) / (w1 - w0)
    }

    pub(crate) fn check_covers(&self, bandwidth: f64) -> Result<()> {
        let edge = 2.0 * PI * bandwidth;
        let tol = 1e-9 * edge;
        let first = self.omegas[0];
        let last = *self.omegas.last().unwrap();
        if first < -edge - tol {
            return Err(Error::OutOfBand {
                omega: first,
                band_edge: edge,
            });
        }
        if last > edge + tol {
            return Err(Error::OutOfBand {
                omega: last,
                band_edge: edge,
            });
        }
        if first > -edge + tol || last < edge - tol {
            return Err(Error::InvalidDensity(format!(
                "grid [{first}, {last}] does not cover the band [-{edge}, {edge}]"
            )));
        }
        Ok(())
    }
}

pub(crate) fn parse_f64(field: &str) -> Result<f64> {
    field
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("not a number: {field:?}")))
}

/// Monotone map `θ` applied to the target density before fitting, so that
/// `W = 1/θ(Z)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Transform {
    Identity,
    /// `θ(τ) = (τ + ε)^(p/2 - 1)`.
    Power {
        p: f64,
        epsilon: f64,
    },
}

impl Transform {
    pub fn apply(&self, tau: f64) -> f64 {
        match *self {
            Transform::Identity => tau,
            Transform::Power { p, epsilon } => (tau + epsilon).powf(p / 2.0 - 1.0),
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            Transform::Identity => Ok(()),
            Transform::Power { p, epsilon } => {
                if !(p.is_finite() && p > 0.0 && epsilon.is_finite() && epsilon > 0.0) {
                    Err(Error::InvalidInput(format!(
                        "power transform needs p > 0 and epsilon > 0, got p = {p}, epsilon = {epsilon}"
                    )))
                } else {
                    Ok(())
                }
            }
        }
    }
}

/// Settings for [`fit_weights`].
#[derive(Clone, Debug, PartialEq)]
pub struct FitOptions {
    pub bandwidth: f64,
    pub degree: usize,
    pub half_count: usize,
    /// `None` selects `1e-3 · max θ(Z)`.
    pub floor_alpha: Option<f64>,
    pub transform: Transform,
}

impl FitOptions {
    pub fn new(bandwidth: f64) -> Self {
        FitOptions {
            bandwidth,
            degree: 3,
            half_count: 11,
            floor_alpha: None,
            transform: Transform::Identity,
        }
    }
}

/// Residual summary of a least-squares weight fit, measured at the grid nodes.
#[derive(Clone, Debug, PartialEq)]
pub struct FitResidual {
    pub max_abs: f64,
    pub rms: f64,
    /// Per-node `G(Ω_i) - θ(Z(Ω_i))`.
    pub residuals: Vec<f64>,
}

/// Least-squares fit of the spline coefficients so that `G ≈ θ(Z)` on the
/// grid nodes, followed by symmetrization and the positivity check.
pub fn fit_weights(target: &DensityGrid, options: &FitOptions) -> Result<WeightSpec> {
    fit_weights_with_residual(target, options).map(|(spec, _)| spec)
}

pub fn fit_weights_with_residual(target: &DensityGrid, options: &FitOptions) -> Result<(WeightSpec, FitResidual)> {
    let FitOptions {
        bandwidth,
        degree,
        half_count,
        floor_alpha,
        transform,
    } = *options;
    if !(bandwidth.is_finite() && bandwidth > 0.0) {
        return Err(Error::InvalidSpec(format!(
            "bandwidth must be positive, got {bandwidth}"
        )));
    }
    transform.validate()?;
    target.check_covers(bandwidth)?;

    let thetas: Vec<f64> = target.values.iter().map(|&z| transform.apply(z)).collect();
    if let Some(v) = thetas.iter().find(|v| !v.is_finite()) {
        return Err(Error::InvalidDensity(format!(
            "transformed density is not finite ({v})"
        )));
    }
    let theta_max = thetas.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let alpha = floor_alpha.unwrap_or(1e-3 * theta_max);
    if !(alpha.is_finite() && alpha >= 0.0) {
        return Err(Error::InvalidSpec(format!(
            "floor_alpha must be nonnegative, got {alpha}"
        )));
    }

    let count = 2 * half_count + 1;
    let a = 2.0 * PI * bandwidth / (degree + 2 * half_count + 1) as f64;
    let nodes = target.omegas.len();
    let design = DMatrix::from_fn(nodes, count, |i, j| {
        let m = j as f64 - half_count as f64;
        bspline(degree, target.omegas[i] / (2.0 * a) - m)
    });
    let rhs = DVector::from_iterator(
        nodes,
        target
            .omegas
            .iter()
            .zip(&thetas)
            .map(|(&w, &th)| th - alpha * bspline(0, w / (4.0 * PI * bandwidth))),
    );
    let svd = design.svd(true, true);
    let solution = svd
        .solve(&rhs, 1e-13)
        .map_err(|e| Error::Numerical(format!("least-squares solve failed: {e}")))?;

    let raw: Vec<f64> = solution.iter().copied().collect();
    let coeffs: Vec<f64> = (0..count).map(|j| 0.5 * (raw[j] + raw[count - 1 - j])).collect();

    let spec = WeightSpec::new_unvalidated(bandwidth, degree, coeffs, alpha)?;
    spec.check_positive()?;

    let residuals: Vec<f64> = target
        .omegas
        .iter()
        .zip(&thetas)
        .map(|(&w, &th)| spec.inverse_weight_unchecked(w) - th)
        .collect();
    let max_abs = residuals.iter().fold(0.0f64, |m, r| m.max(r.abs()));
    let rms = (residuals.iter().map(|r| r * r).sum::<f64>() / nodes as f64).sqrt();
    Ok((
        spec,
        FitResidual {
            max_abs,
            rms,
            residuals,
        },
    ))
}

/// What a density grid represents when converted to weights.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DensityKind {
    /// Power spectral density `S`, giving `W = 1/S`.
    Psd,
    /// Filter magnitude response squared `|H|²`, giving `W = 1/|H|²`.
    FilterMagnitudeSq,
}

/// Fits `1/W ≈ density` with the identity transform.
///
/// The density must be strictly positive on every node; a zero would leave
/// the weight unbounded.
pub fn weights_from_density(density: &DensityGrid, kind: DensityKind, options: &FitOptions) -> Result<WeightSpec> {
    weights_from_density_with_residual(density, kind, options).map(|(spec, _)| spec)
}

pub fn weights_from_density_with_residual(
    density: &DensityGrid,
    kind: DensityKind,
    options: &FitOptions,
) -> Result<(WeightSpec, FitResidual)> {
    if let Some((w, v)) = density.omegas.iter().zip(&density.values).find(|(_, v)| **v <= 0.0) {
        let what = match kind {
            DensityKind::Psd => "power spectral density",
            DensityKind::FilterMagnitudeSq => "filter magnitude",
        };
        return Err(Error::InvalidDensity(format!(
            "{what} must be bounded away from zero in band; found {v} at omega = {w}"
        )));
    }
    let options = FitOptions {
        transform: Transform::Identity,
        ..options.clone()
    };
    fit_weights_with_residual(density, &options)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn direct_sum(spec: &WeightSpec, omega: f64) -> f64 {
        // Every term, no support pruning.
        let a = 2.0 * PI * spec.bandwidth() / (spec.degree() + 2 * spec.half_count() + 1) as f64;
        let m_max = spec.half_count() as isize;
        let mut g = 0.0;
        for m in -m_max..=m_max {
            g += spec.coeff(m) * bspline(spec.degree(), omega / (2.0 * a) - m as f64);
        }
        g + spec.floor_alpha() * bspline(0, omega / (4.0 * PI * spec.bandwidth()))
    }

    fn sample_spec() -> WeightSpec {
        let half: Vec<f64> = (0..=11).map(|m| (-(m as f64) / 3.0).exp()).collect();
        WeightSpec::from_half(1.3, 3, &half, 0.01).unwrap()
    }

    #[test]
    fn spacing_constant() {
        let spec = sample_spec();
        let expected = 2.0 * PI * 1.3 / (3.0 + 22.0 + 1.0);
        assert_eq!(spec.spacing(), expected);
    }

    #[test]
    fn uniform_is_one_across_band() {
        let spec = WeightSpec::uniform(0.7).unwrap();
        assert_eq!(spec.spacing(), spec.band_edge());
        for i in -100..=100 {
            let w = spec.band_edge() * i as f64 / 100.5;
            assert_eq!(spec.inverse_weight(w).unwrap(), 1.0);
        }
    }

    #[test]
    fn floor_only_spec() {
        let spec = WeightSpec::new(2.0, 3, vec![0.0; 7], 2.0).unwrap();
        for &w in &[-12.0, -3.0, 0.0, 0.4, 11.9] {
            assert_eq!(spec.inverse_weight(w).unwrap(), 2.0);
            assert_eq!(spec.weight(w).unwrap(), 0.5);
        }
    }

    #[test]
    fn out_of_band_is_an_error() {
        let spec = sample_spec();
        let edge = spec.band_edge();
        assert!(spec.inverse_weight(edge).is_ok());
        assert!(matches!(spec.inverse_weight(edge * 1.01), Err(Error::OutOfBand { .. })));
        assert!(matches!(spec.inverse_weight(f64::NAN), Err(Error::OutOfBand { .. })));
    }

    #[test]
    fn rejects_asymmetric_and_nonpositive_specs() {
        assert!(matches!(
            WeightSpec::new(1.0, 3, vec![1.0, 2.0, 1.5], 0.1),
            Err(Error::InvalidSpec(_))
        ));
        assert!(matches!(
            WeightSpec::new(1.0, 3, vec![1.0, 1.0], 0.1),
            Err(Error::InvalidSpec(_))
        ));
        assert!(matches!(
            WeightSpec::new(1.0, 3, vec![-1.0, -1.0, -1.0], 0.1),
            Err(Error::NonPositiveWeight { .. })
        ));
        assert!(matches!(
            WeightSpec::new(0.0, 0, vec![1.0], 0.0),
            Err(Error::InvalidSpec(_))
        ));
    }

    #[test]
    fn toml_round_trip_uses_documented_keys() {
        let spec = sample_spec();
        let text = spec.to_toml();
        for key in ["bandwidth_B", "degree_K", "half_count_M", "coeffs_d", "floor_alpha"] {
            assert!(text.contains(key), "{text}");
        }
        assert_eq!(WeightSpec::from_toml(&text).unwrap(), spec);
        let bad = text.replace("half_count_M = 11", "half_count_M = 10");
        assert!(WeightSpec::from_toml(&bad).is_err());
    }

    #[test]
    fn constant_target_fits_plateau_exactly_at_degree_zero() {
        let grid = DensityGrid::from_fn(1.0, 801, |_| 1.0).unwrap();
        let options = FitOptions {
            degree: 0,
            floor_alpha: Some(0.0),
            ..FitOptions::new(1.0)
        };
        let spec = fit_weights(&grid, &options).unwrap();
        let edge = spec.band_edge();
        for i in -400..=400 {
            let w = 0.8 * edge * i as f64 / 400.0;
            assert!((spec.inverse_weight(w).unwrap() - 1.0).abs() < 1e-3);
        }
    }

    #[test]
    fn constant_target_cubic_fit_rings_near_band_edges() {
        // Every K >= 1 spline vanishes at ±2πB, so the least-squares fit of a
        // constant overshoots near the edges. The plateau claim holds only
        // to about 0.14 on the interior 80% for K = 3, M = 11.
        let grid = DensityGrid::from_fn(1.0, 801, |_| 1.0).unwrap();
        let options = FitOptions {
            floor_alpha: Some(0.0),
            ..FitOptions::new(1.0)
        };
        let spec = fit_weights(&grid, &options).unwrap();
        let edge = spec.band_edge();
        let worst = (-400..=400)
            .map(|i| 0.8 * edge * i as f64 / 400.0)
            .map(|w| (spec.inverse_weight(w).unwrap() - 1.0).abs())
            .fold(0.0, f64::max);
        assert!(worst > 1e-3 && worst < 0.15, "{worst}");
        // Deep interior, far from the edges, the plateau is much flatter.
        let center = (-50..=50)
            .map(|i| 0.2 * edge * i as f64 / 50.0)
            .map(|w| (spec.inverse_weight(w).unwrap() - 1.0).abs())
            .fold(0.0, f64::max);
        assert!(center < worst);
    }

    #[test]
    fn larger_density_gets_smaller_weight() {
        let grid = DensityGrid::from_fn(1.0, 513, |w| 1.0 + (-(w * w)).exp() * 4.0).unwrap();
        for transform in [Transform::Identity, Transform::Power { p: 4.0, epsilon: 1e-3 }] {
            let options = FitOptions {
                transform,
                ..FitOptions::new(1.0)
            };
            let spec = fit_weights(&grid, &options).unwrap();
            assert!(spec.weight(0.0).unwrap() < spec.weight(4.0).unwrap());
        }
    }

    #[test]
    fn power_transform_fit_is_least_squares_optimal() {
        let bandwidth = 1.0;
        let edge = 2.0 * PI * bandwidth;
        let grid = DensityGrid::from_fn(bandwidth, 513, |w| 1.0 - w.abs() / edge).unwrap();
        let transform = Transform::Power { p: 1.0, epsilon: 1e-3 };
        let options = FitOptions {
            transform,
            ..FitOptions::new(bandwidth)
        };
        let (spec, fit) = fit_weights_with_residual(&grid, &options).unwrap();

        // Reported residuals agree with an independent recomputation.
        for ((&w, &z), &r) in grid.omegas().iter().zip(grid.values()).zip(&fit.residuals) {
            let expected = direct_sum(&spec, w) - (z + 1e-3).powf(-0.5);
            assert!((expected - r).abs() < 1e-12);
        }
        // Normal equations: the residual is orthogonal to every basis column.
        let a = spec.spacing();
        let scale: f64 = fit.residuals.iter().map(|r| r.abs()).sum();
        for m in -11isize..=11 {
            let dot: f64 = grid
                .omegas()
                .iter()
                .zip(&fit.residuals)
                .map(|(&w, r)| r * bspline(3, w / (2.0 * a) - m as f64))
                .sum();
            assert!(dot.abs() < 1e-10 * scale, "m = {m}: {dot}");
        }
        // Away from the band edges θ∘Z is smooth and the fit is close.
        let interior_max = grid
            .omegas()
            .iter()
            .zip(&fit.residuals)
            .filter(|(w, _)| w.abs() <= 0.8 * edge)
            .map(|(_, r)| r.abs())
            .fold(0.0, f64::max);
        assert!(interior_max < 0.6, "{interior_max}");
    }

    #[test]
    fn uniform_psd_gives_constant_weight_in_interior() {
        let gamma_sq = 2.5;
        let grid = DensityGrid::from_fn(1.0, 801, |_| gamma_sq).unwrap();
        let spec = weights_from_density(&grid, DensityKind::Psd, &FitOptions::new(1.0)).unwrap();
        let edge = spec.band_edge();
        for i in -100..=100 {
            let w = 0.2 * edge * i as f64 / 100.0;
            let weight = spec.weight(w).unwrap();
            assert!((weight - 1.0 / gamma_sq).abs() < 1e-2 / gamma_sq, "{w}: {weight}");
        }
    }

    #[test]
    fn triangular_psd_fit_matches_nodes() {
        let edge = 2.0 * PI;
        let tri = |w: f64| 0.1 + 1.0 - w.abs() / edge;
        let grid = DensityGrid::from_fn(1.0, 513, tri).unwrap();
        let (spec, fit) =
            weights_from_density_with_residual(&grid, DensityKind::FilterMagnitudeSq, &FitOptions::new(1.0)).unwrap();
        // The edge nodes sit where every spline vanishes, so the worst
        // residual is about the edge value 0.1 of the target.
        assert!(fit.max_abs < 0.15, "{}", fit.max_abs);
        for &w in grid.omegas().iter().filter(|w| w.abs() <= 0.8 * edge) {
            let err = (spec.inverse_weight(w).unwrap() - tri(w)).abs();
            assert!(err < 0.03, "{w}: {err}");
        }
    }

    #[test]
    fn density_with_zero_is_rejected() {
        let grid = DensityGrid::from_fn(1.0, 101, |w| w.abs()).unwrap();
        assert!(matches!(
            weights_from_density(&grid, DensityKind::Psd, &FitOptions::new(1.0)),
            Err(Error::InvalidDensity(_))
        ));
    }

    #[test]
    fn grid_must_cover_band() {
        let grid = DensityGrid::new(vec![-1.0, 0.0, 1.0], vec![1.0, 1.0, 1.0]).unwrap();
        assert!(fit_weights(&grid, &FitOptions::new(1.0)).is_err());
        assert!(DensityGrid::new(vec![0.0, 0.0], vec![1.0, 1.0]).is_err());
        assert!(DensityGrid::new(vec![0.0, 1.0], vec![1.0, -1.0]).is_err());
    }

    #[test]
    fn fit_reports_nonpositive_inverse_weight() {
        // A narrow box: the spline fit undershoots below zero beside it.
        let grid = DensityGrid::from_fn(1.0, 401, |w| if w.abs() < 0.4 { 1.0 } else { 0.0 }).unwrap();
        let options = FitOptions {
            floor_alpha: Some(0.0),
            ..FitOptions::new(1.0)
        };
        let err = fit_weights(&grid, &options).unwrap_err();
        assert!(matches!(err, Error::NonPositiveWeight { .. }), "{err}");
    }

    proptest! {
        #[test]
        fn evaluation_matches_term_by_term_sum(
            half in proptest::collection::vec(0.05f64..3.0, 1..14),
            degree in 0usize..5,
            alpha in 0.01f64..1.0,
            frac in -1.0f64..1.0,
        ) {
            let spec = WeightSpec::from_half(0.9, degree, &half, alpha).unwrap();
            let w = frac * spec.band_edge();
            let g = spec.inverse_weight(w).unwrap();
            prop_assert!((g - direct_sum(&spec, w)).abs() <= 1e-13 * g.abs().max(1.0));
            prop_assert!((g - spec.inverse_weight(-w).unwrap()).abs() <= 1e-13 * g.abs().max(1.0));
        }

        #[test]
        fn constant_coefficients_give_plateau(c in 0.1f64..5.0, degree in 1usize..4) {
            let m = 8usize;
            let spec = WeightSpec::new(1.0, degree, vec![c; 2 * m + 1], 0.0).unwrap();
            // The translates sum to one for |x| <= M - (K-1)/2 in spline units.
            let reach = m as f64 - (degree as f64 - 1.0) / 2.0;
            for i in -20..=20 {
                let x = reach * i as f64 / 20.0;
                let w = x * 2.0 * spec.spacing();
                prop_assert!((spec.inverse_weight(w).unwrap() - c).abs() < 1e-12 * c);
            }
        }

        #[test]
        fn refit_recovers_spec(
            half in proptest::collection::vec(0.2f64..2.0, 3..10),
            alpha in 0.01f64..0.5,
        ) {
            let spec = WeightSpec::from_half(1.0, 3, &half, alpha).unwrap();
            let grid = DensityGrid::from_fn(1.0, 401, |w| spec.inverse_weight(w).unwrap()).unwrap();
            let options = FitOptions {
                degree: 3,
                half_count: spec.half_count(),
                floor_alpha: Some(alpha),
                ..FitOptions::new(1.0)
            };
            let (refit, fit) = fit_weights_with_residual(&grid, &options).unwrap();
            prop_assert!(fit.max_abs < 1e-9, "{}", fit.max_abs);
            for (a, b) in refit.coeffs().iter().zip(spec.coeffs()) {
                prop_assert!((a - b).abs() < 1e-8);
            }
        }
    }
}
