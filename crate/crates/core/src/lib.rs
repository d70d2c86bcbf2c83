//! Minimum-norm interpolation of uniformly sampled bandlimited signals in
//! spectrally weighted Hilbert spaces.
//!
//! A weight `W(Ω)` on the band `|Ω| < 2πB` is described by a B-spline
//! expansion of `1/W` ([`WeightSpec`]). Its reproducing kernel `ψ(t)`
//! ([`Kernel`]) yields a symmetric Toeplitz Gram system whose solution gives
//! the minimum-`W`-norm signal through the samples ([`Interpolant`]).
//! The crate also provides truncated Shannon interpolation, RKHS pointwise
//! error bounds, and an LMMSE oracle for stationary processes.

pub mod bounds;
pub mod bspline;
pub mod error;
pub mod interpolator;
pub mod io;
pub mod kernel;
pub mod linalg;
pub mod quadrature;
pub mod signals;
pub mod stochastic;
pub mod weights;

pub use bounds::{
    minimax_worstcase, power_function, shannon_pointwise_bound, sinc_partition_check, weighted_pointwise_bound,
    BoundReport, WorstCase, DEFAULT_TAIL_RANGE,
};
pub use error::{Error, Result};
pub use interpolator::{
    build_gram, cardinal, cardinal_values, shift_invariant_approx, solve, truncated_shannon, GramMatrix, Interpolant,
    SampleSet, ShiftInvariant,
};
pub use kernel::{shannon_kernel, sinc, CovarianceFn, Kernel};
pub use signals::{eval_signal, highpass_spec, lowpass_spec, preset_spec, sample_signal, AnalyticSignal};
pub use stochastic::{
    empirical_mse, empirical_mse_table, lmmse_interpolate, synthesize_process, InterpolatorKind, MseEstimate, PsdModel,
};
pub use weights::{fit_weights, weights_from_density, DensityGrid, DensityKind, FitOptions, Transform, WeightSpec};

pub use num_complex::Complex64;
