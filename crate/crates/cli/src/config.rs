//! Experiment configuration: one TOML document, physical quantities carry
//! their unit in the key name.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use spectral_interp::weights::{FitOptions, Transform};
use spectral_interp::{preset_spec, AnalyticSignal, DensityGrid, DensityKind, SampleSet, WeightSpec};

use crate::error::CliError;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub seed: Option<u64>,
    pub weights: Option<WeightsConfig>,
    #[serde(default)]
    pub signal: SignalConfig,
    #[serde(default)]
    pub sampling: SamplingConfig,
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default)]
    pub compare: CompareConfig,
    pub bounds: Option<BoundsConfig>,
    #[serde(default)]
    pub mc: McConfig,
    pub fit: Option<FitConfig>,
    #[serde(default)]
    pub output: OutputConfig,
    #[serde(skip)]
    base_dir: PathBuf,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
#[allow(non_snake_case)]
pub struct WeightsConfig {
    pub bandwidth_hz: Option<f64>,
    /// `uniform`, `lowpass` or `highpass`.
    pub preset: Option<String>,
    /// Weight-spec TOML document.
    pub spec_file: Option<PathBuf>,
    pub degree_K: Option<usize>,
    pub coeffs_d: Option<Vec<f64>>,
    pub floor_alpha: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SignalConfig {
    /// `example1` or `example2`.
    pub name: Option<String>,
    /// Signal bandwidth; defaults to the weight bandwidth.
    pub bandwidth_hz: Option<f64>,
    /// Sample CSV (`n,value` or `n,re,im`) used instead of a named signal.
    pub samples_file: Option<PathBuf>,
}

#[derive(Debug, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SamplingConfig {
    /// Sampling rate as a fraction of the Nyquist rate: `T = 1 / (2B · fraction)`.
    pub nyquist_fraction: f64,
    pub half_count: usize,
    pub ridge_sigma2: f64,
}

impl Default for SamplingConfig {
    fn default() -> Self {
        SamplingConfig {
            nyquist_fraction: 1.0,
            half_count: 10,
            ridge_sigma2: 0.0,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    pub t_min_s: Option<f64>,
    pub t_max_s: Option<f64>,
    pub count: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig {
            t_min_s: None,
            t_max_s: None,
            count: 401,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CompareConfig {
    pub kinds: Vec<String>,
}

impl Default for CompareConfig {
    fn default() -> Self {
        CompareConfig {
            kinds: vec!["weighted".into(), "uniform".into(), "sinc".into()],
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundsConfig {
    /// Radius `D` of the weighted-norm ball.
    pub weighted_radius: f64,
    /// Radius `E` of the energy ball; enables the classical columns.
    pub energy_radius: Option<f64>,
    pub tail_range: Option<usize>,
    #[serde(default)]
    pub phase_rad: f64,
}

#[derive(Debug, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct McConfig {
    pub realizations: usize,
    /// Evaluation points on `|t| ≤ NT/2`.
    pub eval_count: usize,
    /// Extra sampling-rate fractions; defaults to `sampling.nyquist_fraction`.
    pub nyquist_fractions: Option<Vec<f64>>,
    pub kinds: Vec<String>,
}

impl Default for McConfig {
    fn default() -> Self {
        McConfig {
            realizations: 1000,
            eval_count: 41,
            nyquist_fractions: None,
            kinds: vec!["shannon".into(), "uniform_weight".into(), "matched_weight".into()],
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
#[allow(non_snake_case)]
pub struct FitConfig {
    pub bandwidth_hz: f64,
    /// Two-column `omega,value` CSV.
    pub density_file: PathBuf,
    /// `target` (fit `θ(Z)` directly), `psd`, or `filter_magnitude_sq`.
    #[serde(default = "default_fit_kind")]
    pub kind: String,
    pub degree_K: Option<usize>,
    pub half_count_M: Option<usize>,
    pub floor_alpha: Option<f64>,
    pub transform: Option<Transform>,
}

fn default_fit_kind() -> String {
    "target".into()
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    /// File-name stem for emitted files; defaults to the subcommand name.
    pub stem: Option<String>,
}

fn config_err(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| config_err(format!("cannot read config {}: {e}", path.display())))?;
        let mut cfg = Self::parse(&text)?;
        cfg.base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok(cfg)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let cfg: ExperimentConfig = toml::from_str(text).map_err(|e| config_err(format!("invalid config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), CliError> {
        let s = &self.sampling;
        if !(s.nyquist_fraction > 0.0 && s.nyquist_fraction <= 1.0) {
            return Err(config_err(format!(
                "sampling.nyquist_fraction must lie in (0, 1], got {}",
                s.nyquist_fraction
            )));
        }
        if !(s.ridge_sigma2.is_finite() && s.ridge_sigma2 >= 0.0) {
            return Err(config_err("sampling.ridge_sigma2 must be nonnegative"));
        }
        if self.grid.count < 2 {
            return Err(config_err("grid.count must be at least 2"));
        }
        if let (Some(a), Some(b)) = (self.grid.t_min_s, self.grid.t_max_s) {
            if !(a < b) {
                return Err(config_err("grid.t_min_s must be below grid.t_max_s"));
            }
        }
        if self.compare.kinds.is_empty() {
            return Err(config_err("compare.kinds must be nonempty"));
        }
        for k in &self.compare.kinds {
            if !matches!(k.as_str(), "weighted" | "uniform" | "sinc") {
                return Err(config_err(format!("unknown compare kind {k:?}")));
            }
        }
        if self.compare.kinds.iter().collect::<BTreeSet<_>>().len() != self.compare.kinds.len() {
            return Err(config_err("compare.kinds has duplicates"));
        }
        if self.mc.kinds.is_empty() {
            return Err(config_err("mc.kinds must be nonempty"));
        }
        if self.mc.realizations == 0 || self.mc.eval_count == 0 {
            return Err(config_err("mc.realizations and mc.eval_count must be positive"));
        }
        if let Some(fracs) = &self.mc.nyquist_fractions {
            if fracs.is_empty() || fracs.iter().any(|f| !(*f > 0.0 && *f <= 1.0)) {
                return Err(config_err("mc.nyquist_fractions must be nonempty and in (0, 1]"));
            }
        }
        if let Some(stem) = &self.output.stem {
            let plain = !stem.is_empty()
                && stem != "."
                && stem != ".."
                && !stem.contains(['/', '\\'])
                && Path::new(stem).file_name().is_some();
            if !plain {
                return Err(config_err(format!(
                    "output.stem must be a plain file name, got {stem:?}"
                )));
            }
        }
        Ok(())
    }

    fn resolve(&self, path: &Path) -> PathBuf {
        if path.is_absolute() {
            path.to_path_buf()
        } else {
            self.base_dir.join(path)
        }
    }

    pub fn stem<'a>(&'a self, default: &'a str) -> &'a str {
        self.output.stem.as_deref().unwrap_or(default)
    }

    pub fn weight_spec(&self) -> Result<WeightSpec, CliError> {
        let w = self
            .weights
            .as_ref()
            .ok_or_else(|| config_err("missing [weights] section"))?;
        let sources = [w.preset.is_some(), w.spec_file.is_some(), w.coeffs_d.is_some()];
        if sources.iter().filter(|&&s| s).count() != 1 {
            return Err(config_err("[weights] needs exactly one of preset, spec_file, coeffs_d"));
        }
        let spec = if let Some(file) = &w.spec_file {
            let spec =
                WeightSpec::load(self.resolve(file)).map_err(|e| config_err(format!("weights.spec_file: {e}")))?;
            if let Some(b) = w.bandwidth_hz {
                if b != spec.bandwidth() {
                    return Err(config_err(format!(
                        "weights.bandwidth_hz = {b} disagrees with spec file bandwidth {}",
                        spec.bandwidth()
                    )));
                }
            }
            spec
        } else {
            let b = w
                .bandwidth_hz
                .ok_or_else(|| config_err("weights.bandwidth_hz is required"))?;
            if let Some(name) = &w.preset {
                preset_spec(name, b)?
            } else {
                let degree = w
                    .degree_K
                    .ok_or_else(|| config_err("weights.degree_K is required with coeffs_d"))?;
                WeightSpec::new(
                    b,
                    degree,
                    w.coeffs_d.clone().unwrap_or_default(),
                    w.floor_alpha.unwrap_or(0.0),
                )?
            }
        };
        Ok(spec)
    }

    /// `T = 1 / (2B · fraction)`.
    pub fn spacing(&self, bandwidth: f64, fraction: f64) -> f64 {
        1.0 / (2.0 * bandwidth * fraction)
    }

    /// The named analytic signal, if any.
    pub fn analytic_signal(&self, default_bandwidth: f64) -> Result<Option<AnalyticSignal>, CliError> {
        match &self.signal.name {
            Some(name) => Ok(Some(AnalyticSignal::by_name(
                name,
                self.signal.bandwidth_hz.unwrap_or(default_bandwidth),
            )?)),
            None => Ok(None),
        }
    }

    pub fn samples(&self, spacing: f64, default_bandwidth: f64) -> Result<SampleSet, CliError> {
        match (&self.signal.name, &self.signal.samples_file) {
            (Some(_), Some(_)) => Err(config_err("[signal] takes either name or samples_file, not both")),
            (None, Some(file)) => {
                let x = SampleSet::read_csv(self.resolve(file), spacing)
                    .map_err(|e| config_err(format!("signal.samples_file: {e}")))?;
                if x.half_count() != self.sampling.half_count {
                    return Err(config_err(format!(
                        "samples_file holds N = {}, sampling.half_count is {}",
                        x.half_count(),
                        self.sampling.half_count
                    )));
                }
                Ok(x)
            }
            (Some(_), None) => {
                let sig = self.analytic_signal(default_bandwidth)?.expect("named signal");
                Ok(sig.sample(spacing, self.sampling.half_count)?)
            }
            (None, None) => Err(config_err("[signal] needs name or samples_file")),
        }
    }

    /// Uniform time grid; defaults to `[-NT, NT]`.
    pub fn time_grid(&self, spacing: f64) -> Vec<f64> {
        let span = self.sampling.half_count.max(1) as f64 * spacing;
        let lo = self.grid.t_min_s.unwrap_or(-span);
        let hi = self.grid.t_max_s.unwrap_or(span);
        let n = self.grid.count;
        (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
    }

    pub fn density(&self) -> Result<(DensityGrid, &FitConfig), CliError> {
        let fit = self.fit.as_ref().ok_or_else(|| config_err("missing [fit] section"))?;
        let grid = DensityGrid::read_csv(self.resolve(&fit.density_file))
            .map_err(|e| config_err(format!("fit.density_file: {e}")))?;
        Ok((grid, fit))
    }
}

impl FitConfig {
    pub fn options(&self) -> FitOptions {
        let mut opts = FitOptions::new(self.bandwidth_hz);
        if let Some(k) = self.degree_K {
            opts.degree = k;
        }
        if let Some(m) = self.half_count_M {
            opts.half_count = m;
        }
        if self.floor_alpha.is_some() {
            opts.floor_alpha = self.floor_alpha;
        }
        if let Some(t) = self.transform {
            opts.transform = t;
        }
        opts
    }

    pub fn density_kind(&self) -> Result<Option<DensityKind>, CliError> {
        match self.kind.as_str() {
            "target" => Ok(None),
            "psd" => Ok(Some(DensityKind::Psd)),
            "filter_magnitude_sq" => Ok(Some(DensityKind::FilterMagnitudeSq)),
            other => Err(config_err(format!(
                "fit.kind must be target, psd or filter_magnitude_sq, got {other:?}"
            ))),
        }
    }
}
