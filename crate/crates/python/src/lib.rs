//! Python bindings: weight specs, kernels, interpolants, bounds and the
//! named test signals. Numerical failures raise `ArithmeticError`, invalid
//! input raises `ValueError`.

use interp::{
    build_gram, power_function, shannon_pointwise_bound, solve, truncated_shannon as shannon, weighted_pointwise_bound,
    AnalyticSignal, Complex64, Error, SampleSet,
};
use pyo3::exceptions::{PyArithmeticError, PyOSError, PyValueError};
use pyo3::prelude::*;

fn to_py(e: Error) -> PyErr {
    if e.is_numerical() {
        PyArithmeticError::new_err(e.to_string())
    } else if matches!(e, Error::Io(_)) {
        PyOSError::new_err(e.to_string())
    } else {
        PyValueError::new_err(e.to_string())
    }
}

fn samples(spacing: f64, values: Vec<Complex64>) -> PyResult<SampleSet> {
    SampleSet::new(spacing, values).map_err(to_py)
}

/// B-spline parameterized inverse weight `G = 1/W` on `|Ω| < 2πB`.
#[pyclass(name = "WeightSpec", module = "spectral_interp", frozen)]
struct PyWeightSpec(interp::WeightSpec);

#[pymethods]
impl PyWeightSpec {
    /// `coeffs` holds `d_{-M} .. d_M`.
    #[new]
    #[pyo3(signature = (bandwidth_hz, degree, coeffs, floor_alpha = 0.0))]
    fn new(bandwidth_hz: f64, degree: usize, coeffs: Vec<f64>, floor_alpha: f64) -> PyResult<Self> {
        interp::WeightSpec::new(bandwidth_hz, degree, coeffs, floor_alpha)
            .map(Self)
            .map_err(to_py)
    }

    #[staticmethod]
    fn uniform(bandwidth_hz: f64) -> PyResult<Self> {
        interp::WeightSpec::uniform(bandwidth_hz).map(Self).map_err(to_py)
    }

    /// `uniform`, `lowpass` or `highpass`.
    #[staticmethod]
    fn preset(name: &str, bandwidth_hz: f64) -> PyResult<Self> {
        interp::preset_spec(name, bandwidth_hz).map(Self).map_err(to_py)
    }

    #[staticmethod]
    fn from_toml(text: &str) -> PyResult<Self> {
        interp::WeightSpec::from_toml(text).map(Self).map_err(to_py)
    }

    fn to_toml(&self) -> String {
        self.0.to_toml()
    }

    #[getter]
    fn bandwidth_hz(&self) -> f64 {
        self.0.bandwidth()
    }

    #[getter]
    fn degree(&self) -> usize {
        self.0.degree()
    }

    #[getter]
    fn coeffs(&self) -> Vec<f64> {
        self.0.coeffs().to_vec()
    }

    #[getter]
    fn floor_alpha(&self) -> f64 {
        self.0.floor_alpha()
    }

    fn inverse_weight(&self, omega: f64) -> PyResult<f64> {
        self.0.inverse_weight(omega).map_err(to_py)
    }

    fn __repr__(&self) -> String {
        format!(
            "WeightSpec(bandwidth_hz={}, degree={}, M={}, floor_alpha={})",
            self.0.bandwidth(),
            self.0.degree(),
            self.0.half_count(),
            self.0.floor_alpha()
        )
    }
}

/// Reproducing kernel `ψ(t)` of a weighted space.
#[pyclass(name = "Kernel", module = "spectral_interp", frozen)]
struct PyKernel(interp::Kernel);

#[pymethods]
impl PyKernel {
    #[new]
    fn new(spec: &PyWeightSpec) -> Self {
        Self(interp::Kernel::Spline(spec.0.clone()))
    }

    /// `2B sinc(2Bt)`.
    #[staticmethod]
    fn uniform(bandwidth_hz: f64) -> Self {
        Self(interp::Kernel::uniform(bandwidth_hz))
    }

    fn psi(&self, t: f64) -> f64 {
        self.0.psi(t)
    }

    fn psi_many(&self, ts: Vec<f64>) -> Vec<f64> {
        ts.into_iter().map(|t| self.0.psi(t)).collect()
    }

    /// `ψ(t)` by adaptive quadrature of its frequency-domain integral.
    #[pyo3(signature = (t, tolerance = 1e-10))]
    fn psi_quadrature(&self, t: f64, tolerance: f64) -> PyResult<f64> {
        self.0.psi_quadrature(t, tolerance).map_err(to_py)
    }
}

/// Minimum-norm interpolant through `2N+1` samples at `nT`, `n = -N..N`.
#[pyclass(name = "Interpolant", module = "spectral_interp", frozen)]
struct PyInterpolant(interp::Interpolant);

#[pymethods]
impl PyInterpolant {
    #[new]
    #[pyo3(signature = (kernel, spacing_s, values, ridge_sigma2 = 0.0))]
    fn new(kernel: &PyKernel, spacing_s: f64, values: Vec<Complex64>, ridge_sigma2: f64) -> PyResult<Self> {
        let x = samples(spacing_s, values)?;
        interp::Interpolant::fit(&kernel.0, &x, ridge_sigma2)
            .map(Self)
            .map_err(to_py)
    }

    fn evaluate(&self, t: f64) -> Complex64 {
        self.0.evaluate(t)
    }

    fn evaluate_many(&self, ts: Vec<f64>) -> Vec<Complex64> {
        self.0.evaluate_many(&ts)
    }

    #[getter]
    fn coeffs(&self) -> Vec<Complex64> {
        self.0.coeffs().to_vec()
    }

    /// Squared weighted norm of the interpolant.
    #[getter]
    fn norm_sq(&self) -> f64 {
        self.0.norm_sq()
    }

    #[getter]
    fn condition_estimate(&self) -> f64 {
        self.0.condition_estimate()
    }
}

/// Truncated Shannon series `Σ x[n] sinc((t - nT)/T)`.
#[pyfunction]
fn truncated_shannon(spacing_s: f64, values: Vec<Complex64>, t: f64) -> PyResult<Complex64> {
    Ok(shannon(&samples(spacing_s, values)?, t))
}

/// Power function `P(t)` of the lattice `nT`, `|n| ≤ N`.
#[pyfunction]
fn power(kernel: &PyKernel, spacing_s: f64, half_count: usize, t: f64) -> PyResult<f64> {
    let gram = build_gram(&kernel.0, spacing_s, half_count).map_err(to_py)?;
    power_function(&gram, &kernel.0, t).map_err(to_py)
}

/// `(power, bound)` lists for signals of weighted norm at most `radius`.
#[pyfunction]
fn weighted_bound(
    kernel: &PyKernel,
    spacing_s: f64,
    values: Vec<Complex64>,
    radius: f64,
    t_grid: Vec<f64>,
) -> PyResult<(Vec<f64>, Vec<f64>)> {
    let x = samples(spacing_s, values)?;
    let gram = build_gram(&kernel.0, spacing_s, x.half_count()).map_err(to_py)?;
    let interp = solve(&kernel.0, &gram, &x, 0.0).map_err(to_py)?;
    let report = weighted_pointwise_bound(&interp, &gram, radius, &t_grid).map_err(to_py)?;
    Ok((report.power_values, report.bound_values))
}

/// `(power, bound)` lists of the classical bound for energy at most `E²`.
#[pyfunction]
fn shannon_bound(
    spacing_s: f64,
    values: Vec<Complex64>,
    energy_radius: f64,
    t_grid: Vec<f64>,
) -> PyResult<(Vec<f64>, Vec<f64>)> {
    let report = shannon_pointwise_bound(&samples(spacing_s, values)?, energy_radius, &t_grid).map_err(to_py)?;
    Ok((report.power_values, report.bound_values))
}

/// Value of a named test signal (`example1`, `example2`) at `t`.
#[pyfunction]
fn signal(name: &str, bandwidth_hz: f64, t: f64) -> PyResult<f64> {
    Ok(AnalyticSignal::by_name(name, bandwidth_hz).map_err(to_py)?.eval(t))
}

/// Samples `x(nT)`, `n = -N..N`, of a named test signal.
#[pyfunction]
fn sample_signal(name: &str, bandwidth_hz: f64, spacing_s: f64, half_count: usize) -> PyResult<Vec<Complex64>> {
    let sig = AnalyticSignal::by_name(name, bandwidth_hz).map_err(to_py)?;
    Ok(sig.sample(spacing_s, half_count).map_err(to_py)?.values().to_vec())
}

#[pymodule]
fn spectral_interp(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyWeightSpec>()?;
    m.add_class::<PyKernel>()?;
    m.add_class::<PyInterpolant>()?;
    m.add_function(wrap_pyfunction!(truncated_shannon, m)?)?;
    m.add_function(wrap_pyfunction!(power, m)?)?;
    m.add_function(wrap_pyfunction!(weighted_bound, m)?)?;
    m.add_function(wrap_pyfunction!(shannon_bound, m)?)?;
    m.add_function(wrap_pyfunction!(signal, m)?)?;
    m.add_function(wrap_pyfunction!(sample_signal, m)?)?;
    Ok(())
}
