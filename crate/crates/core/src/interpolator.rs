//! Minimum-norm interpolation from `2N+1` uniform samples.
//!
//! The interpolant is `x̂(t) = Σ_n c_n ψ(t - nT)` with `(R + σ²I) c = x`,
//! where `R_{mn} = ψ((m - n)T)` is symmetric positive-definite Toeplitz.
//! All public indices are logical (`-N..=N`); storage uses offsets `0..=2N`.

use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::kernel::{sinc, CovarianceFn, Kernel};
use crate::linalg::{toeplitz_dense, Cholesky};
use crate::weights::parse_f64;

/// Uniform samples `x[n] = x(nT)`, `n = -N..=N`.
#[derive(Clone, Debug, PartialEq)]
pub struct SampleSet {
    spacing: f64,
    values: Vec<Complex64>,
}

impl SampleSet {
    pub fn new(spacing: f64, values: Vec<Complex64>) -> Result<Self> {
        if !(spacing.is_finite() && spacing > 0.0) {
            return Err(Error::InvalidInput(format!("spacing must be positive, got {spacing}")));
        }
        if values.len() % 2 == 0 {
            return Err(Error::InvalidInput(format!(
                "expected 2N+1 samples centered on n = 0, got {}",
                values.len()
            )));
        }
        if values.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::InvalidInput("sample values must be finite".into()));
        }
        Ok(SampleSet { spacing, values })
    }

    pub fn from_real(spacing: f64, values: &[f64]) -> Result<Self> {
        Self::new(spacing, values.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    /// Samples `f(nT)` for `n = -N..=N`.
    pub fn from_fn(spacing: f64, half_count: usize, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        let n = half_count as isize;
        Self::new(spacing, (-n..=n).map(|k| f(k as f64 * spacing)).collect())
    }

    /// Reads `n,value` or `n,re,im` rows (header required). Indices must be
    /// exactly `-N..=N` in any order.
    pub fn read_csv(path: impl AsRef<Path>, spacing: f64) -> Result<Self> {
        let mut reader = csv::Reader::from_path(path)?;
        let mut rows: Vec<(i64, Complex64)> = Vec::new();
        for record in reader.records() {
            let record = record?;
            let n: i64 = record[0]
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("sample index is not an integer: {:?}", &record[0])))?;
            let value = match record.len() {
                2 => Complex64::new(parse_f64(&record[1])?, 0.0),
                3 => Complex64::new(parse_f64(&record[1])?, parse_f64(&record[2])?),
                k => return Err(Error::Parse(format!("sample CSV needs 2 or 3 columns, found {k}"))),
            };
            rows.push((n, value));
        }
        rows.sort_by_key(|r| r.0);
        let half = rows.len() as i64 / 2;
        for (i, (n, _)) in rows.iter().enumerate() {
            if *n != i as i64 - half {
                return Err(Error::Parse(format!(
                    "sample indices must be exactly -N..=N; unexpected index {n}"
                )));
            }
        }
        Self::new(spacing, rows.into_iter().map(|r| r.1).collect())
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn half_count(&self) -> usize {
        self.values.len() / 2
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// Sample at logical index `n`.
    pub fn value(&self, n: isize) -> Complex64 {
        self.values[(n + self.half_count() as isize) as usize]
    }

    /// Logical indices paired with values.
    pub fn iter(&self) -> impl Iterator<Item = (isize, Complex64)> + '_ {
        let half = self.half_count() as isize;
        self.values
            .iter()
            .enumerate()
            .map(move |(i, &v)| (i as isize - half, v))
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    /// `Σ |x[n]|²`.
    pub fn energy(&self) -> f64 {
        self.values.iter().map(|z| z.norm_sqr()).sum()
    }
}

/// Symmetric Toeplitz Gram matrix `R_{mn} = ψ((m - n)T)` and its Cholesky factor.
#[derive(Clone, Debug)]
pub struct GramMatrix {
    spacing: f64,
    half_count: usize,
    first_row: Vec<f64>,
    factor: Option<Cholesky>,
    condition_estimate: f64,
}

impl GramMatrix {
    /// Fills the Toeplitz row from the kernel without factoring it.
    pub fn assemble<K: CovarianceFn + ?Sized>(kernel: &K, spacing: f64, half_count: usize) -> Result<Self> {
        if !(spacing.is_finite() && spacing > 0.0) {
            return Err(Error::InvalidInput(format!("spacing must be positive, got {spacing}")));
        }
        let first_row = (0..=2 * half_count).map(|k| kernel.eval(k as f64 * spacing)).collect();
        Ok(GramMatrix {
            spacing,
            half_count,
            first_row,
            factor: None,
            condition_estimate: f64::NAN,
        })
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn half_count(&self) -> usize {
        self.half_count
    }

    pub fn dim(&self) -> usize {
        self.first_row.len()
    }

    /// `ψ(kT)` for `k = 0..=2N`.
    pub fn first_row(&self) -> &[f64] {
        &self.first_row
    }

    /// Entry at logical indices `(m, n)`.
    pub fn entry(&self, m: isize, n: isize) -> f64 {
        self.first_row[m.abs_diff(n)]
    }

    pub fn dense(&self) -> Vec<f64> {
        toeplitz_dense(&self.first_row)
    }

    /// `(max L_ii / min L_ii)²` from the Cholesky factor; NaN before factoring
    /// and `inf` when factoring failed.
    pub fn condition_estimate(&self) -> f64 {
        self.condition_estimate
    }

    pub fn is_factored(&self) -> bool {
        self.factor.is_some()
    }

    fn factor_with_ridge(&self, ridge: f64) -> Result<Cholesky> {
        let n = self.dim();
        let mut a = self.dense();
        for i in 0..n {
            a[i * n + i] += ridge;
        }
        Cholesky::factor(&a, n).map_err(|pivot| Error::NotPositiveDefinite {
            pivot,
            condition_estimate: eigen_condition(&a, n),
        })
    }

    /// Attempts the Cholesky factorization of `R` itself.
    pub fn factorize(mut self) -> Result<Self> {
        if self.factor.is_none() {
            let factor = self.factor_with_ridge(0.0)?;
            self.condition_estimate = factor.condition_estimate();
            self.factor = Some(factor);
        }
        Ok(self)
    }

    fn factor(&self) -> Result<&Cholesky> {
        self.factor.as_ref().ok_or_else(|| {
            let n = self.dim();
            Error::NotPositiveDefinite {
                pivot: 0,
                condition_estimate: eigen_condition(&self.dense(), n),
            }
        })
    }

    /// Solves `R p = e_n`; the result is row `n` of `R⁻¹` (R is symmetric).
    pub fn inverse_row(&self, n: isize) -> Result<Vec<f64>> {
        let idx = self.offset(n)?;
        let mut e = vec![0.0; self.dim()];
        e[idx] = 1.0;
        Ok(self.factor()?.solve(&e))
    }

    /// Solves `R y = b` for real `b`.
    pub fn solve_real(&self, b: &[f64]) -> Result<Vec<f64>> {
        self.check_len(b.len())?;
        Ok(self.factor()?.solve(b))
    }

    /// `R v` for complex `v`.
    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        let n = self.dim();
        (0..n)
            .map(|i| (0..n).map(|j| v[j] * self.first_row[i.abs_diff(j)]).sum())
            .collect()
    }

    fn offset(&self, n: isize) -> Result<usize> {
        let half = self.half_count as isize;
        if n < -half || n > half {
            return Err(Error::InvalidInput(format!("index {n} outside -{half}..={half}")));
        }
        Ok((n + half) as usize)
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: len,
            });
        }
        Ok(())
    }
}

/// λ_max / λ_min of a symmetric matrix, `inf` when not positive definite.
fn eigen_condition(a: &[f64], n: usize) -> f64 {
    let m = nalgebra::DMatrix::from_row_slice(n, n, a);
    let eig = m.symmetric_eigen();
    let (lo, hi) = eig
        .eigenvalues
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
    if lo > 0.0 {
        hi / lo
    } else {
        f64::INFINITY
    }
}

/// Builds `R` for `2N+1` samples at spacing `T` and factors it.
pub fn build_gram<K: CovarianceFn + ?Sized>(kernel: &K, spacing: f64, half_count: usize) -> Result<GramMatrix> {
    GramMatrix::assemble(kernel, spacing, half_count)?.factorize()
}

/// Solved kernel expansion `x̂(t) = Σ_n c_n ψ(t - nT)`.
#[derive(Clone, Debug)]
pub struct Interpolant<K = Kernel> {
    kernel: K,
    spacing: f64,
    half_count: usize,
    coeffs: Vec<Complex64>,
    ridge_sigma2: f64,
    condition_estimate: f64,
    first_row: Vec<f64>,
}

/// Solves `(R + σ²I) c = x`. With `σ² = 0` the cached factor of `R` is used;
/// a positive ridge refactors the shifted matrix, so it also works when `R`
/// itself could not be factored.
pub fn solve<K: CovarianceFn + Clone>(
    kernel: &K,
    gram: &GramMatrix,
    samples: &SampleSet,
    ridge_sigma2: f64,
) -> Result<Interpolant<K>> {
    if !(ridge_sigma2.is_finite() && ridge_sigma2 >= 0.0) {
        return Err(Error::InvalidInput(format!(
            "ridge_sigma2 must be nonnegative, got {ridge_sigma2}"
        )));
    }
    if samples.spacing() != gram.spacing() {
        return Err(Error::InvalidInput(format!(
            "sample spacing {} differs from Gram spacing {}",
            samples.spacing(),
            gram.spacing()
        )));
    }
    gram.check_len(samples.len())?;
    let (coeffs, condition_estimate) = if ridge_sigma2 == 0.0 {
        (
            gram.factor()?.solve_complex(samples.values()),
            gram.condition_estimate(),
        )
    } else {
        let factor = gram.factor_with_ridge(ridge_sigma2)?;
        (factor.solve_complex(samples.values()), factor.condition_estimate())
    };
    Ok(Interpolant {
        kernel: kernel.clone(),
        spacing: gram.spacing(),
        half_count: gram.half_count(),
        coeffs,
        ridge_sigma2,
        condition_estimate,
        first_row: gram.first_row().to_vec(),
    })
}

impl<K: CovarianceFn + Clone> Interpolant<K> {
    /// Builds the Gram system and solves it in one step.
    pub fn fit(kernel: &K, samples: &SampleSet, ridge_sigma2: f64) -> Result<Self> {
        let gram = GramMatrix::assemble(kernel, samples.spacing(), samples.half_count())?;
        let gram = if ridge_sigma2 == 0.0 { gram.factorize()? } else { gram };
        solve(kernel, &gram, samples, ridge_sigma2)
    }
}

impl<K: CovarianceFn> Interpolant<K> {
    pub fn kernel(&self) -> &K {
        &self.kernel
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn half_count(&self) -> usize {
        self.half_count
    }

    /// `c_{-N}..=c_N`.
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn ridge_sigma2(&self) -> f64 {
        self.ridge_sigma2
    }

    pub fn condition_estimate(&self) -> f64 {
        self.condition_estimate
    }

    pub fn evaluate(&self, t: f64) -> Complex64 {
        let half = self.half_count as isize;
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c * self.kernel.eval(t - (i as isize - half) as f64 * self.spacing))
            .sum()
    }

    pub fn evaluate_many(&self, ts: &[f64]) -> Vec<Complex64> {
        ts.iter().map(|&t| self.evaluate(t)).collect()
    }

    /// Squared weighted norm `cᴴ R c` of the interpolant.
    pub fn norm_sq(&self) -> f64 {
        let n = self.coeffs.len();
        let mut acc = 0.0;
        for i in 0..n {
            let mut row = Complex64::new(0.0, 0.0);
            for j in 0..n {
                row += self.coeffs[j] * self.first_row[i.abs_diff(j)];
            }
            acc += (self.coeffs[i].conj() * row).re;
        }
        acc
    }
}

/// Cardinal function `u_n(t) = Σ_m (R⁻¹)_{nm} ψ(t - mT)`, with
/// `u_n(mT) = δ[n - m]`.
pub fn cardinal<K: CovarianceFn + ?Sized>(gram: &GramMatrix, kernel: &K, n: isize, t: f64) -> Result<f64> {
    let row = gram.inverse_row(n)?;
    Ok(expand(&row, kernel, gram.spacing(), t))
}

/// All cardinal values `u_{-N}(t)..=u_N(t)` at once via `u(t) = R⁻¹ k(t)`,
/// where `k_m(t) = ψ(t - mT)`.
pub fn cardinal_values<K: CovarianceFn + ?Sized>(gram: &GramMatrix, kernel: &K, t: f64) -> Result<Vec<f64>> {
    let half = gram.half_count() as isize;
    let k: Vec<f64> = (-half..=half)
        .map(|m| kernel.eval(t - m as f64 * gram.spacing()))
        .collect();
    gram.solve_real(&k)
}

fn expand<K: CovarianceFn + ?Sized>(coeffs: &[f64], kernel: &K, spacing: f64, t: f64) -> f64 {
    let half = (coeffs.len() / 2) as isize;
    coeffs
        .iter()
        .enumerate()
        .map(|(i, p)| p * kernel.eval(t - (i as isize - half) as f64 * spacing))
        .sum()
}

/// Approximation `x̂(t) ≈ Σ_n x[n] u₀(t - nT)` using only the center
/// cardinal function.
#[derive(Clone, Debug)]
pub struct ShiftInvariant<K = Kernel> {
    kernel: K,
    spacing: f64,
    center_row: Vec<f64>,
}

impl<K: CovarianceFn + Clone> ShiftInvariant<K> {
    pub fn new(kernel: &K, gram: &GramMatrix) -> Result<Self> {
        Ok(ShiftInvariant {
            kernel: kernel.clone(),
            spacing: gram.spacing(),
            center_row: gram.inverse_row(0)?,
        })
    }
}

impl<K: CovarianceFn> ShiftInvariant<K> {
    /// Coefficients `p_{0m}`, `m = -N..=N`.
    pub fn center_coeffs(&self) -> &[f64] {
        &self.center_row
    }

    pub fn center_cardinal(&self, t: f64) -> f64 {
        expand(&self.center_row, &self.kernel, self.spacing, t)
    }

    pub fn evaluate(&self, samples: &SampleSet, t: f64) -> Complex64 {
        samples
            .iter()
            .map(|(n, x)| x * self.center_cardinal(t - n as f64 * self.spacing))
            .sum()
    }
}

/// Convenience wrapper: builds the approximation and evaluates it at `t`.
pub fn shift_invariant_approx<K: CovarianceFn + Clone>(
    kernel: &K,
    gram: &GramMatrix,
    samples: &SampleSet,
    t: f64,
) -> Result<Complex64> {
    Ok(ShiftInvariant::new(kernel, gram)?.evaluate(samples, t))
}

/// `Σ_{n=-N}^{N} x[n] sinc(t/T - n)`.
pub fn truncated_shannon(samples: &SampleSet, t: f64) -> Complex64 {
    let spacing = samples.spacing();
    samples
        .iter()
        .map(|(n, x)| x * sinc((t - n as f64 * spacing) / spacing))
        .sum()
}
