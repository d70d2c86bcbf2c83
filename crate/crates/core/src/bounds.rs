//! Pointwise error bounds: the RKHS power function, the weighted and
//! classical bounds, and the worst-case tail construction that attains the
//! classical one.

use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::interpolator::{cardinal_values, GramMatrix, Interpolant, SampleSet};
use crate::io::write_float_csv;
use crate::kernel::{sinc, CovarianceFn};

pub const DEFAULT_TAIL_RANGE: usize = 10_000;

/// Negative `P²` above `-CLAMP_FLOOR · max(1, ψ(0))` is roundoff and clamps to 0.
pub const CLAMP_FLOOR: f64 = 1e-12;

/// Power function and pointwise bound on a time grid.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundReport {
    pub t_grid: Vec<f64>,
    pub power_values: Vec<f64>,
    pub bound_values: Vec<f64>,
    /// `C` for the classical bound, `√(D² - ‖x̂_w‖²)` for the weighted one.
    pub constant: f64,
}

impl BoundReport {
    /// Columns `t, power, bound`.
    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let rows: Vec<Vec<f64>> = (0..self.t_grid.len())
            .map(|i| vec![self.t_grid[i], self.power_values[i], self.bound_values[i]])
            .collect();
        write_float_csv(path, &["t", "power", "bound"], &rows)
    }
}

/// `P(t)` for the sample lattice of `gram`:
/// `P² = ψ(0) - 2 Σ u_n ψ(nT - t) + Σ Σ u_m ψ(nT - mT) u_n`.
pub fn power_function<K: CovarianceFn + ?Sized>(gram: &GramMatrix, kernel: &K, t: f64) -> Result<f64> {
    let u = cardinal_values(gram, kernel, t)?;
    let half = gram.half_count() as isize;
    let spacing = gram.spacing();
    let psi0 = kernel.eval(0.0);
    let cross: f64 = u
        .iter()
        .enumerate()
        .map(|(i, &un)| un * kernel.eval((i as isize - half) as f64 * spacing - t))
        .sum();
    let n = u.len();
    let mut quad = 0.0;
    for m in 0..n {
        let mut row = 0.0;
        for k in 0..n {
            row += gram.first_row()[m.abs_diff(k)] * u[k];
        }
        quad += u[m] * row;
    }
    clamp_power(psi0 - 2.0 * cross + quad, psi0)
}

fn clamp_power(p2: f64, psi0: f64) -> Result<f64> {
    if p2 >= 0.0 {
        Ok(p2.sqrt())
    } else if p2 >= -CLAMP_FLOOR * psi0.max(1.0) {
        Ok(0.0)
    } else {
        Err(Error::Numerical(format!(
            "power function squared is {p2:e}, below the roundoff floor"
        )))
    }
}

/// `|x̂_w(t) - x(t)| ≤ √(D² - cᴴRc) P(t)` for every `x` with `‖x‖_W ≤ D`
/// sharing the samples.
pub fn weighted_pointwise_bound<K: CovarianceFn>(
    interp: &Interpolant<K>,
    gram: &GramMatrix,
    radius: f64,
    t_grid: &[f64],
) -> Result<BoundReport> {
    let constant = ball_constant(radius * radius, interp.norm_sq())?;
    let power_values = t_grid
        .iter()
        .map(|&t| power_function(gram, interp.kernel(), t))
        .collect::<Result<Vec<_>>>()?;
    let bound_values = power_values.iter().map(|p| constant * p).collect();
    Ok(BoundReport {
        t_grid: t_grid.to_vec(),
        power_values,
        bound_values,
        constant,
    })
}

fn ball_constant(radius_sq: f64, norm_sq: f64) -> Result<f64> {
    let slack = radius_sq - norm_sq;
    if slack < -1e-12 * norm_sq.max(1.0) {
        return Err(Error::InfeasibleBall { radius_sq, norm_sq });
    }
    Ok(slack.max(0.0).sqrt())
}

/// `C = √(E² - T Σ |x[n]|²)`.
pub fn shannon_constant(samples: &SampleSet, energy_radius: f64) -> Result<f64> {
    ball_constant(energy_radius * energy_radius, samples.spacing() * samples.energy())
}

/// Classical bound `(C/√T) √(1 - Σ_{|n|≤N} sinc²(t/T - n))` for signals of
/// energy at most `E²` bandlimited to `1/(2T)`.
pub fn shannon_pointwise_bound(samples: &SampleSet, energy_radius: f64, t_grid: &[f64]) -> Result<BoundReport> {
    let constant = shannon_constant(samples, energy_radius)?;
    let spacing = samples.spacing();
    let power_values: Vec<f64> = t_grid
        .iter()
        .map(|&t| {
            let deficit = 1.0 - sinc_partition_check(t, spacing, samples.half_count());
            (deficit.max(0.0) / spacing).sqrt()
        })
        .collect();
    let bound_values = power_values.iter().map(|p| constant * p).collect();
    Ok(BoundReport {
        t_grid: t_grid.to_vec(),
        power_values,
        bound_values,
        constant,
    })
}

/// `Σ_{|n| ≤ truncation} sinc²(t/T - n)`; tends to 1 as truncation grows.
pub fn sinc_partition_check(t: f64, spacing: f64, truncation: usize) -> f64 {
    let u = t / spacing;
    let n = truncation as isize;
    // smallest terms first
    let mut acc = 0.0;
    for k in (1..=n).rev() {
        acc += sinc(u - k as f64).powi(2) + sinc(u + k as f64).powi(2);
    }
    acc + sinc(u).powi(2)
}

/// Tail adversary for the classical bound at a fixed time.
#[derive(Clone, Debug, PartialEq)]
pub struct WorstCase {
    /// Tail indices `N < |n| ≤ tail_range`, ascending.
    pub indices: Vec<isize>,
    /// `g[n]` for each entry of `indices`.
    pub values: Vec<Complex64>,
    /// `|z(t) - x̂(t)|` for `z = x̂ + Σ g[n] sinc(·/T - n)`.
    pub attained_error: f64,
    /// `(C/√T) √(Σ_{tail} sinc²(t/T - n))`.
    pub analytic_error: f64,
    /// `T Σ |g[n]|²`, equal to `C²`.
    pub energy: f64,
    /// `1 - Σ_{|n| ≤ tail_range} sinc²(t/T - n)`: mass lost to truncation.
    pub truncation_deficit: f64,
}

/// Builds `g[n] = (C/√T) e^{jφ} sinc(t/T - n) / √(Σ_tail sinc²)` on the tail
/// `N < |n| ≤ tail_range` and evaluates the error it induces at `t`.
pub fn minimax_worstcase(
    samples: &SampleSet,
    energy_radius: f64,
    t: f64,
    tail_range: usize,
    phase: f64,
) -> Result<WorstCase> {
    let constant = shannon_constant(samples, energy_radius)?;
    let half = samples.half_count();
    if tail_range <= half {
        return Err(Error::InvalidInput(format!(
            "tail_range {tail_range} must exceed N = {half}"
        )));
    }
    let spacing = samples.spacing();
    let u = t / spacing;
    let (lo, hi) = (half as isize + 1, tail_range as isize);
    let indices: Vec<isize> = (-hi..=-lo).chain(lo..=hi).collect();
    let shape: Vec<f64> = indices.iter().map(|&n| sinc(u - n as f64)).collect();
    let mut tail_mass = 0.0;
    for &s in shape.iter().rev() {
        tail_mass += s * s;
    }
    let scale = constant / spacing.sqrt();
    let analytic_error = scale * tail_mass.sqrt();
    let rotor = Complex64::from_polar(1.0, phase);
    let values: Vec<Complex64> = if tail_mass > 0.0 {
        shape.iter().map(|&s| rotor * (scale * s / tail_mass.sqrt())).collect()
    } else {
        vec![Complex64::new(0.0, 0.0); shape.len()]
    };
    let perturbation: Complex64 = values.iter().zip(&shape).map(|(g, &s)| g * s).sum();
    let energy = spacing * values.iter().map(|g| g.norm_sqr()).sum::<f64>();
    Ok(WorstCase {
        indices,
        values,
        attained_error: perturbation.norm(),
        analytic_error,
        energy,
        truncation_deficit: 1.0 - sinc_partition_check(t, spacing, tail_range),
    })
}
