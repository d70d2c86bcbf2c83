//! The reproducing kernel `ψ(t)`: the inverse Fourier transform of `1/W(Ω)`
//! over the band.
//!
//! For the B-spline weight family it has the closed form
//!
//! ```text
//! ψ(t) = (A/π) sinc(At/π)^(K+1) [d_0 + 2 Σ_{m≥1} d_m cos(2Amt)] + 2αB sinc(2Bt)
//! ```
//!
//! with `sinc(x) = sin(πx)/(πx)`. [`Kernel::psi_quadrature`] integrates the
//! defining Fourier integral directly and serves as an independent check.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::quadrature::{composite_simpson, Quadrature};
use crate::weights::WeightSpec;

/// `sin(πx)/(πx)` with a Taylor guard near the removable singularity.
pub fn sinc(x: f64) -> f64 {
    if x != 0.0 && x == x.round() {
        return 0.0;
    }
    if x.abs() < 1e-8 {
        let px = PI * x;
        1.0 - px * px / 6.0
    } else {
        let px = PI * x;
        px.sin() / px
    }
}

/// Building block of truncated Shannon interpolation: `sinc(t/T)`.
pub fn shannon_kernel(spacing: f64, t: f64) -> f64 {
    sinc(t / spacing)
}

/// Any even, positive-definite function of the lag that can populate a Gram
/// matrix: reproducing kernels and autocorrelations alike.
pub trait CovarianceFn {
    fn eval(&self, tau: f64) -> f64;
}

impl<F: Fn(f64) -> f64> CovarianceFn for F {
    fn eval(&self, tau: f64) -> f64 {
        self(tau)
    }
}

/// Reproducing kernel of a weighted bandlimited space.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Kernel {
    /// `W ≡ 1` over `[-2πB, 2πB]`, so `ψ(t) = 2B sinc(2Bt)`.
    Uniform { bandwidth: f64 },
    /// `1/W` given by a B-spline expansion.
    Spline(WeightSpec),
}

impl Kernel {
    pub fn uniform(bandwidth: f64) -> Self {
        Kernel::Uniform { bandwidth }
    }

    pub fn bandwidth(&self) -> f64 {
        match self {
            Kernel::Uniform { bandwidth } => *bandwidth,
            Kernel::Spline(spec) => spec.bandwidth(),
        }
    }

    /// `G(Ω) = 1/W(Ω)` inside the band, zero outside.
    pub fn inverse_weight(&self, omega: f64) -> f64 {
        let edge = 2.0 * PI * self.bandwidth();
        if omega.abs() >= edge {
            return 0.0;
        }
        match self {
            Kernel::Uniform { .. } => 1.0,
            Kernel::Spline(spec) => spec.inverse_weight_unchecked(omega),
        }
    }

    /// Closed-form `ψ(t)`.
    pub fn psi(&self, t: f64) -> f64 {
        match self {
            Kernel::Uniform { bandwidth } => 2.0 * bandwidth * sinc(2.0 * bandwidth * t),
            Kernel::Spline(spec) => {
                let a = spec.spacing();
                let m_max = spec.half_count() as isize;
                let mut series = spec.coeff(0);
                for m in 1..=m_max {
                    series += 2.0 * spec.coeff(m) * (2.0 * a * m as f64 * t).cos();
                }
                let envelope = sinc(a * t / PI).powi(spec.degree() as i32 + 1);
                let b = spec.bandwidth();
                a / PI * envelope * series + 2.0 * spec.floor_alpha() * b * sinc(2.0 * b * t)
            }
        }
    }

    /// `ψ(0) = (1/2π) ∫ G(Ω) dΩ`.
    pub fn psi_zero(&self) -> f64 {
        self.psi(0.0)
    }

    /// `ψ(t)` by adaptive Simpson on `(1/π) ∫_0^{2πB} cos(Ωt) G(Ω) dΩ`.
    ///
    /// The imaginary part of the Fourier integral vanishes because `G` is
    /// even, and evenness halves the interval. Panels are split at the
    /// spline knots so every panel sees a polynomial times a cosine.
    pub fn psi_quadrature(&self, t: f64, tolerance: f64) -> Result<f64> {
        self.psi_quadrature_detailed(t, tolerance).map(|q| q.value)
    }

    pub fn psi_quadrature_detailed(&self, t: f64, tolerance: f64) -> Result<Quadrature> {
        let edge = 2.0 * PI * self.bandwidth();
        let breakpoints = self.knots(edge);
        // Integrate over [0, edge] and scale by 1/π: tolerance maps accordingly.
        let q = composite_simpson(
            |w| (w * t).cos() * self.inverse_weight_below_edge(w, edge),
            &breakpoints,
            tolerance * PI,
        )?;
        Ok(Quadrature {
            value: q.value / PI,
            error: q.error / PI,
        })
    }

    fn inverse_weight_below_edge(&self, omega: f64, edge: f64) -> f64 {
        // The closed-interval integrand: the β⁰ floor term and splines are
        // evaluated on [0, edge) and the endpoint value only affects a set of
        // measure zero.
        match self {
            Kernel::Uniform { .. } => 1.0,
            Kernel::Spline(spec) => spec.inverse_weight_unchecked(omega.min(edge)),
        }
    }

    fn knots(&self, edge: f64) -> Vec<f64> {
        match self {
            Kernel::Uniform { .. } => vec![0.0, edge],
            Kernel::Spline(spec) => {
                // Spline knots sit at 2A(m ± (K+1)/2), i.e. integer or half
                // integer multiples of 2A depending on the parity of K.
                let step = spec.spacing();
                let offset = if spec.degree() % 2 == 0 { step } else { 0.0 };
                let mut knots = vec![0.0];
                knots.extend(
                    (0..)
                        .map(|j| offset + 2.0 * step * j as f64)
                        .take_while(|&w| w < edge * (1.0 - 1e-12))
                        .filter(|&w| w > 0.0),
                );
                knots.push(edge);
                knots
            }
        }
    }
}

impl CovarianceFn for Kernel {
    fn eval(&self, tau: f64) -> f64 {
        self.psi(tau)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::DEFAULT_TOLERANCE;
    use proptest::prelude::*;

    fn lowpass() -> Kernel {
        let half: Vec<f64> = (0..=11).map(|m| (-(m as f64) / 3.0).exp()).collect();
        Kernel::Spline(WeightSpec::from_half(1.0, 3, &half, 0.01).unwrap())
    }

    #[test]
    fn sinc_values() {
        assert_eq!(sinc(0.0), 1.0);
        assert!((sinc(0.5) - 2.0 / PI).abs() < 1e-15);
        for k in 1..20 {
            assert!(sinc(k as f64).abs() < 1e-15);
        }
        assert!((sinc(1e-9) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn shannon_kernel_values() {
        let t = 0.37;
        assert_eq!(shannon_kernel(t, 0.0), 1.0);
        for k in [-3.0, -1.0, 2.0, 7.0] {
            assert!(shannon_kernel(t, k * t).abs() < 1e-15);
        }
        assert!((shannon_kernel(1.0, 0.5) - 2.0 / PI).abs() < 1e-15);
    }

    #[test]
    fn uniform_nyquist_kernel_is_scaled_sinc() {
        let t_s = 0.25;
        let kernel = Kernel::uniform(1.0 / (2.0 * t_s));
        for i in -40..=40 {
            let t = i as f64 * 0.037;
            assert!((kernel.psi(t) - sinc(t / t_s) / t_s).abs() < 1e-13);
        }
    }

    #[test]
    fn degenerate_spline_matches_uniform() {
        let spline = Kernel::Spline(WeightSpec::uniform(1.7).unwrap());
        let uniform = Kernel::uniform(1.7);
        for i in -40..=40 {
            let t = i as f64 * 0.11;
            assert!((spline.psi(t) - uniform.psi(t)).abs() < 1e-13);
        }
    }

    #[test]
    fn psi_at_zero() {
        let kernel = lowpass();
        let Kernel::Spline(spec) = &kernel else { unreachable!() };
        let expected = spec.spacing() / PI * spec.coeffs().iter().sum::<f64>() + 2.0 * spec.floor_alpha() * 1.0;
        assert!((kernel.psi_zero() - expected).abs() < 1e-14);
        assert!(kernel.psi_zero() > 0.0);
    }

    #[test]
    fn quadrature_uniform_cases() {
        let b = 1.5;
        let kernel = Kernel::uniform(b);
        let q0 = kernel.psi_quadrature(0.0, DEFAULT_TOLERANCE).unwrap();
        assert!((q0 - 2.0 * b).abs() < DEFAULT_TOLERANCE);
        let t_s = 1.0 / (2.0 * b);
        let q1 = kernel.psi_quadrature(t_s, DEFAULT_TOLERANCE).unwrap();
        assert!(q1.abs() < DEFAULT_TOLERANCE);
    }

    #[test]
    fn quadrature_floor_only_spec() {
        let b = 0.8;
        let kernel = Kernel::Spline(WeightSpec::new(b, 3, vec![0.0; 5], 2.0).unwrap());
        for &t in &[0.0, 0.3, 1.1, -2.7, 9.4] {
            let q = kernel.psi_quadrature(t, DEFAULT_TOLERANCE).unwrap();
            let expected = 2.0 * (2.0 * b * sinc(2.0 * b * t));
            assert!(
                (q - expected).abs() < 10.0 * DEFAULT_TOLERANCE,
                "{t}: {q} vs {expected}"
            );
            assert!((kernel.psi(t) - expected).abs() < 1e-13);
        }
    }

    #[test]
    fn closed_form_matches_quadrature_for_lowpass() {
        let kernel = lowpass();
        let scale = kernel.psi_zero();
        for i in -100..=100 {
            let t = 11.0 * i as f64 / 100.0;
            let q = kernel.psi_quadrature(t, 1e-10).unwrap();
            assert!((kernel.psi(t) - q).abs() <= (1e-8f64).max(1e-6 * scale), "{t}");
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn closed_form_matches_quadrature(
            half in proptest::collection::vec(0.05f64..2.0, 1..13),
            degree in 0usize..5,
            alpha in 0.0f64..0.5,
            bandwidth in 0.3f64..3.0,
            t in -20.0f64..20.0,
        ) {
            let spec = WeightSpec::from_half(bandwidth, degree, &half, alpha + 0.01).unwrap();
            let kernel = Kernel::Spline(spec);
            let q = kernel.psi_quadrature(t, 1e-10).unwrap();
            let tol = (1e-8f64).max(1e-6 * kernel.psi_zero());
            prop_assert!((kernel.psi(t) - q).abs() <= tol);
        }

        #[test]
        fn psi_is_even(
            half in proptest::collection::vec(0.05f64..2.0, 1..13),
            degree in 0usize..5,
            t in -50.0f64..50.0,
        ) {
            let kernel = Kernel::Spline(WeightSpec::from_half(1.0, degree, &half, 0.05).unwrap());
            prop_assert_eq!(kernel.psi(t), kernel.psi(-t));
        }
    }
}
