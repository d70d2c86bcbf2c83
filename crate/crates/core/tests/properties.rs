mod common;

use common::{linspace, psi_oracle};
use proptest::prelude::*;
use spectral_interp::{
    build_gram, cardinal_values, highpass_spec, lowpass_spec, solve, weighted_pointwise_bound, AnalyticSignal,
    Complex64, Interpolant, Kernel, PsdModel, SampleSet, WeightSpec,
};

fn preset(index: usize) -> Kernel {
    match index % 3 {
        0 => Kernel::uniform(1.0),
        1 => Kernel::Spline(lowpass_spec(1.0).unwrap()),
        _ => Kernel::Spline(highpass_spec(1.0).unwrap()),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn bound_holds_for_mixture_truths(
        which in 0usize..3,
        spacing in 0.5f64..1.0,
        taus in proptest::collection::vec(-6.0f64..6.0, 1..6),
        amp_seed in proptest::collection::vec(-1.0f64..1.0, 6),
        inflate in 1.0f64..2.0,
    ) {
        let kernel = preset(which);
        let amps = amp_seed[..taus.len()].to_vec();
        let truth = AnalyticSignal::mixture(taus, amps, kernel.clone()).unwrap();
        let radius = truth.norm_sq().unwrap().sqrt() * inflate;
        let x = truth.sample(spacing, 8).unwrap();
        let gram = build_gram(&kernel, spacing, 8).unwrap();
        let interp = solve(&kernel, &gram, &x, 0.0).unwrap();
        let grid = linspace(-8.0 * spacing, 8.0 * spacing, 41);
        let report = weighted_pointwise_bound(&interp, &gram, radius, &grid).unwrap();
        for (i, &t) in grid.iter().enumerate() {
            let err = (interp.evaluate(t).re - truth.eval(t)).abs();
            prop_assert!(err <= report.bound_values[i] + 1e-8, "{t}: {err} > {}", report.bound_values[i]);
        }
    }

    #[test]
    fn node_exactness_at_or_above_nyquist_spacing(
        which in 0usize..3,
        stretch in 1.0f64..2.0,
        values in proptest::collection::vec(-3.0f64..3.0, 21),
    ) {
        let kernel = preset(which);
        let spacing = stretch * 0.5;
        let x = SampleSet::from_real(spacing, &values).unwrap();
        let interp = Interpolant::fit(&kernel, &x, 0.0).unwrap();
        for (n, v) in x.iter() {
            prop_assert!((interp.evaluate(n as f64 * spacing) - v).norm() <= 1e-9 * (1.0 + x.max_abs()));
        }
    }

    #[test]
    fn cardinal_sum_reproduces_interpolant(
        which in 0usize..3,
        t in -6.0f64..6.0,
        re in proptest::collection::vec(-2.0f64..2.0, 13),
        im in proptest::collection::vec(-2.0f64..2.0, 13),
    ) {
        let kernel = preset(which);
        let values: Vec<Complex64> = re.iter().zip(&im).map(|(&a, &b)| Complex64::new(a, b)).collect();
        let x = SampleSet::new(0.6, values).unwrap();
        let gram = build_gram(&kernel, 0.6, 6).unwrap();
        let interp = solve(&kernel, &gram, &x, 0.0).unwrap();
        let u = cardinal_values(&gram, &kernel, t).unwrap();
        let via_cardinals: Complex64 = x.values().iter().zip(&u).map(|(v, w)| v * w).sum();
        prop_assert!((via_cardinals - interp.evaluate(t)).norm() < 1e-9 * (1.0 + x.max_abs()));
    }

    #[test]
    fn autocorrelation_of_reciprocal_psd_is_the_kernel(
        half in proptest::collection::vec(0.1f64..2.0, 1..12),
        tau in -21.0f64..21.0,
    ) {
        let spec = WeightSpec::from_half(1.0, 3, &half, 0.02).unwrap();
        let psd = PsdModel::reciprocal(spec.clone());
        let full: Vec<f64> = half.iter().rev().chain(&half[1..]).copied().collect();
        let oracle = psi_oracle(1.0, 3, &full, 0.02, tau);
        prop_assert!((psd.autocorrelation(tau) - Kernel::Spline(spec).psi(tau)).abs() <= 1e-12);
        prop_assert!((psd.autocorrelation(tau) - oracle).abs() <= 1e-8);
    }

    #[test]
    fn ridge_norm_is_monotone(
        which in 0usize..3,
        values in proptest::collection::vec(-3.0f64..3.0, 21),
    ) {
        let kernel = preset(which);
        let x = SampleSet::from_real(0.7, &values).unwrap();
        let gram = build_gram(&kernel, 0.7, 10).unwrap();
        let norms: Vec<f64> = [0.0, 1e-4, 1e-2, 1.0, 10.0]
            .iter()
            .map(|&s| solve(&kernel, &gram, &x, s).unwrap().coeffs().iter().map(|c| c.norm_sqr()).sum::<f64>())
            .collect();
        prop_assert!(norms.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-12)), "{norms:?}");
    }
}
