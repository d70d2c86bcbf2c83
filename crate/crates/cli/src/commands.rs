//! Subcommand bodies. Each returns its output files as in-memory buffers so
//! nothing is written unless the whole computation succeeded.

use spectral_interp::io::{csv_bytes, float_csv_bytes, format_float};
use spectral_interp::stochastic::{mse_csv_bytes, MseRow};
use spectral_interp::weights::{fit_weights_with_residual, weights_from_density_with_residual};
use spectral_interp::{
    build_gram, cardinal, empirical_mse_table, minimax_worstcase, shannon_pointwise_bound, sinc, solve,
    truncated_shannon, weighted_pointwise_bound, Complex64, Interpolant, InterpolatorKind, Kernel, PsdModel,
    DEFAULT_TAIL_RANGE,
};

use crate::config::ExperimentConfig;
use crate::error::CliError;

pub type Output = (String, Vec<u8>);

pub struct Context {
    pub config: ExperimentConfig,
    pub seed: u64,
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![0.5 * (lo + hi)];
    }
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

/// `t, psi, psi_uniform_reference`.
pub fn kernel(ctx: &Context) -> Result<Vec<Output>, CliError> {
    let cfg = &ctx.config;
    let spec = cfg.weight_spec()?;
    let b = spec.bandwidth();
    let spacing = cfg.spacing(b, cfg.sampling.nyquist_fraction);
    let weighted = Kernel::Spline(spec);
    let uniform = Kernel::uniform(b);
    let rows: Vec<Vec<f64>> = cfg
        .time_grid(spacing)
        .into_iter()
        .map(|t| vec![t, weighted.psi(t), uniform.psi(t)])
        .collect();
    let bytes = float_csv_bytes(&["t", "psi", "psi_uniform_reference"], &rows)?;
    Ok(vec![(format!("{}.csv", cfg.stem("kernel")), bytes)])
}

enum Estimator {
    Fitted(Interpolant),
    Sinc,
}

/// Reconstructions of one sample set by each requested method, plus a TOML
/// summary of errors against the named truth when there is one.
pub fn compare(ctx: &Context) -> Result<Vec<Output>, CliError> {
    let cfg = &ctx.config;
    let spec = cfg.weight_spec()?;
    let b = spec.bandwidth();
    let spacing = cfg.spacing(b, cfg.sampling.nyquist_fraction);
    let samples = cfg.samples(spacing, b)?;
    let truth = cfg.analytic_signal(b)?;
    let ridge = cfg.sampling.ridge_sigma2;

    let mut estimators = Vec::new();
    for kind in &cfg.compare.kinds {
        let est = match kind.as_str() {
            "weighted" => Estimator::Fitted(Interpolant::fit(&Kernel::Spline(spec.clone()), &samples, ridge)?),
            "uniform" => Estimator::Fitted(Interpolant::fit(&Kernel::uniform(b), &samples, ridge)?),
            _ => Estimator::Sinc,
        };
        estimators.push((kind.as_str(), est));
    }

    let grid = cfg.time_grid(spacing);
    let mut header = vec!["t".to_string()];
    if truth.is_some() {
        header.push("truth".into());
    }
    for (name, _) in &estimators {
        header.push(format!("{name}_re"));
        header.push(format!("{name}_im"));
    }

    let half_window = 0.5 * samples.half_count() as f64 * spacing;
    let mut errors = vec![Vec::new(); estimators.len()];
    let mut rows = Vec::with_capacity(grid.len());
    for &t in &grid {
        let mut row = vec![t];
        let reference = truth.as_ref().map(|s| s.eval(t));
        if let Some(r) = reference {
            row.push(r);
        }
        for (i, (_, est)) in estimators.iter().enumerate() {
            let v = match est {
                Estimator::Fitted(interp) => interp.evaluate(t),
                Estimator::Sinc => truncated_shannon(&samples, t),
            };
            row.push(v.re);
            row.push(v.im);
            if let Some(r) = reference {
                if t.abs() <= half_window {
                    errors[i].push((v - Complex64::new(r, 0.0)).norm());
                }
            }
        }
        rows.push(row);
    }
    let header_refs: Vec<&str> = header.iter().map(String::as_str).collect();
    let stem = cfg.stem("compare");
    let mut outputs = vec![(format!("{stem}.csv"), float_csv_bytes(&header_refs, &rows)?)];

    let mut summary = toml::Table::new();
    summary.insert("spacing_s".into(), spacing.into());
    summary.insert("half_count".into(), (samples.half_count() as i64).into());
    summary.insert("error_window_s".into(), half_window.into());
    for (i, (name, est)) in estimators.iter().enumerate() {
        let mut entry = toml::Table::new();
        if let Estimator::Fitted(interp) = est {
            entry.insert("condition_estimate".into(), interp.condition_estimate().into());
        }
        if !errors[i].is_empty() {
            let max = errors[i].iter().copied().fold(0.0, f64::max);
            let mean = errors[i].iter().sum::<f64>() / errors[i].len() as f64;
            entry.insert("max_abs_error".into(), max.into());
            entry.insert("mean_abs_error".into(), mean.into());
        }
        summary.insert((*name).into(), entry.into());
    }
    let text = toml::to_string(&summary).map_err(|e| CliError::Io(e.to_string()))?;
    outputs.push((format!("{stem}_summary.toml"), text.into_bytes()));
    Ok(outputs)
}

/// Center cardinal functions `u_0(t)` for the weighted and uniform kernels
/// next to `sinc(t/T)`.
pub fn cardinals(ctx: &Context) -> Result<Vec<Output>, CliError> {
    let cfg = &ctx.config;
    let spec = cfg.weight_spec()?;
    let b = spec.bandwidth();
    let spacing = cfg.spacing(b, cfg.sampling.nyquist_fraction);
    let n = cfg.sampling.half_count;
    let weighted = Kernel::Spline(spec);
    let uniform = Kernel::uniform(b);
    let gw = build_gram(&weighted, spacing, n)?;
    let gu = build_gram(&uniform, spacing, n)?;
    let mut rows = Vec::new();
    for t in cfg.time_grid(spacing) {
        rows.push(vec![
            t,
            cardinal(&gw, &weighted, 0, t)?,
            cardinal(&gu, &uniform, 0, t)?,
            sinc(t / spacing),
        ]);
    }
    let bytes = float_csv_bytes(&["t", "u0_weighted", "u0_uniform", "sinc"], &rows)?;
    Ok(vec![(format!("{}.csv", cfg.stem("cardinals")), bytes)])
}

/// Weighted power function and pointwise bound; with an energy radius also
/// the classical bound and the tail adversary that attains it.
pub fn bounds(ctx: &Context) -> Result<Vec<Output>, CliError> {
    let cfg = &ctx.config;
    let opts = cfg
        .bounds
        .as_ref()
        .ok_or_else(|| CliError::Config("missing [bounds] section".into()))?;
    let spec = cfg.weight_spec()?;
    let b = spec.bandwidth();
    let spacing = cfg.spacing(b, cfg.sampling.nyquist_fraction);
    let samples = cfg.samples(spacing, b)?;
    let kernel = Kernel::Spline(spec);
    // The bound needs the exact interpolant, so no ridge here.
    let gram = build_gram(&kernel, spacing, samples.half_count())?;
    let interp = solve(&kernel, &gram, &samples, 0.0)?;
    let grid = cfg.time_grid(spacing);
    let report = weighted_pointwise_bound(&interp, &gram, opts.weighted_radius, &grid)?;

    let mut header = vec!["t", "estimate_re", "estimate_im", "power", "bound"];
    let classical = match opts.energy_radius {
        Some(e) => {
            header.extend(["shannon_re", "shannon_im", "shannon_power", "shannon_bound"]);
            Some((e, shannon_pointwise_bound(&samples, e, &grid)?))
        }
        None => None,
    };
    let rows: Vec<Vec<f64>> = grid
        .iter()
        .enumerate()
        .map(|(i, &t)| {
            let est = interp.evaluate(t);
            let mut row = vec![t, est.re, est.im, report.power_values[i], report.bound_values[i]];
            if let Some((_, shannon)) = &classical {
                let s = truncated_shannon(&samples, t);
                row.extend([s.re, s.im, shannon.power_values[i], shannon.bound_values[i]]);
            }
            row
        })
        .collect();
    let stem = cfg.stem("bounds");
    let mut outputs = vec![(format!("{stem}.csv"), float_csv_bytes(&header, &rows)?)];

    if let Some((energy, shannon)) = classical {
        let tail = opts.tail_range.unwrap_or(DEFAULT_TAIL_RANGE);
        let mut worst = Vec::with_capacity(grid.len());
        for (i, &t) in grid.iter().enumerate() {
            let w = minimax_worstcase(&samples, energy, t, tail, opts.phase_rad)?;
            worst.push(vec![
                t,
                w.attained_error,
                w.analytic_error,
                shannon.bound_values[i],
                w.truncation_deficit,
            ]);
        }
        let bytes = float_csv_bytes(
            &[
                "t",
                "attained_error",
                "analytic_error",
                "shannon_bound",
                "truncation_deficit",
            ],
            &worst,
        )?;
        outputs.push((format!("{stem}_worstcase.csv"), bytes));
    }
    Ok(outputs)
}

/// Monte-Carlo MSE for a process whose PSD is the reciprocal of the
/// configured weight, one row per (method, sampling rate).
pub fn mc(ctx: &Context) -> Result<Vec<Output>, CliError> {
    let cfg = &ctx.config;
    let spec = cfg.weight_spec()?;
    let b = spec.bandwidth();
    let psd = PsdModel::reciprocal(spec);
    let kinds = cfg
        .mc
        .kinds
        .iter()
        .map(|k| InterpolatorKind::parse(k))
        .collect::<Result<Vec<_>, _>>()?;
    let fractions = cfg
        .mc
        .nyquist_fractions
        .clone()
        .unwrap_or_else(|| vec![cfg.sampling.nyquist_fraction]);
    let n = cfg.sampling.half_count;
    let mut rows = Vec::new();
    for frac in fractions {
        let spacing = cfg.spacing(b, frac);
        let half_window = 0.5 * n as f64 * spacing;
        let t_eval = linspace(-half_window, half_window, cfg.mc.eval_count);
        let estimates = empirical_mse_table(&psd, &kinds, spacing, n, &t_eval, cfg.mc.realizations, ctx.seed)?;
        for (&kind, estimate) in kinds.iter().zip(estimates) {
            rows.push(MseRow {
                kind,
                t_over_nyquist: spacing * 2.0 * b,
                half_count: n,
                estimate,
            });
        }
    }
    Ok(vec![(format!("{}.csv", cfg.stem("mc")), mse_csv_bytes(&rows)?)])
}

/// Weight spec fitted to a tabulated density, plus the per-node residuals.
pub fn fit(ctx: &Context) -> Result<Vec<Output>, CliError> {
    let cfg = &ctx.config;
    let (grid, fit) = cfg.density()?;
    let options = fit.options();
    let (spec, residual) = match fit.density_kind()? {
        None => fit_weights_with_residual(&grid, &options)?,
        Some(kind) => weights_from_density_with_residual(&grid, kind, &options)?,
    };
    let kernel = Kernel::Spline(spec.clone());
    let rows: Vec<Vec<String>> = grid
        .omegas()
        .iter()
        .zip(grid.values())
        .zip(&residual.residuals)
        .map(|((&w, &z), &r)| {
            [w, z, kernel.inverse_weight(w), r]
                .into_iter()
                .map(format_float)
                .collect()
        })
        .collect();
    let stem = cfg.stem("fit");
    Ok(vec![
        (format!("{stem}_spec.toml"), spec.to_toml().into_bytes()),
        (
            format!("{stem}_density.csv"),
            csv_bytes(&["omega", "target", "fitted", "residual"], &rows)?,
        ),
    ])
}
