//! Reference implementations used as oracles by the integration tests. They
//! deliberately avoid the library's own evaluation paths.

#![allow(dead_code)]

use std::f64::consts::PI;

pub fn sinc_ref(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        (PI * x).sin() / (PI * x)
    }
}

fn binomial(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Centered B-spline by the truncated-power formula
/// `β^K(x) = (1/K!) Σ_k (-1)^k C(K+1, k) (x + (K+1)/2 - k)_+^K`.
pub fn bspline_ref(degree: u32, x: f64) -> f64 {
    let h = (degree as f64 + 1.0) / 2.0;
    if x.abs() >= h {
        return 0.0;
    }
    if degree == 0 {
        return 1.0;
    }
    let fact: f64 = (1..=degree).map(|i| i as f64).product();
    let mut acc = 0.0;
    for k in 0..=degree + 1 {
        let arg = x + h - k as f64;
        if arg > 0.0 {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            acc += sign * binomial(degree + 1, k) * arg.powi(degree as i32);
        }
    }
    acc / fact
}

/// `1/W(Ω)` from raw parameters: spline coefficients `d_{-M..=M}` and floor.
pub fn inverse_weight_ref(bandwidth: f64, degree: u32, coeffs: &[f64], alpha: f64, omega: f64) -> f64 {
    let m_half = (coeffs.len() / 2) as isize;
    let a = 2.0 * PI * bandwidth / (degree as f64 + 2.0 * m_half as f64 + 1.0);
    let mut g = 0.0;
    for (i, d) in coeffs.iter().enumerate() {
        let m = i as isize - m_half;
        g += d * bspline_ref(degree, omega / (2.0 * a) - m as f64);
    }
    g + alpha * bspline_ref(0, omega / (4.0 * PI * bandwidth))
}

/// Composite 5-point Gauss-Legendre on `panels` equal subintervals between
/// each pair of consecutive breakpoints.
pub fn gauss_legendre(f: impl Fn(f64) -> f64, breakpoints: &[f64], panels: usize) -> f64 {
    const X: [f64; 5] = [
        0.0,
        0.538_469_310_105_683_1,
        -0.538_469_310_105_683_1,
        0.906_179_845_938_664,
        -0.906_179_845_938_664,
    ];
    const W: [f64; 5] = [
        0.568_888_888_888_888_9,
        0.478_628_670_499_366_5,
        0.478_628_670_499_366_5,
        0.236_926_885_056_189_1,
        0.236_926_885_056_189_1,
    ];
    let mut acc = 0.0;
    for w in breakpoints.windows(2) {
        let h = (w[1] - w[0]) / panels as f64;
        for p in 0..panels {
            let mid = w[0] + (p as f64 + 0.5) * h;
            for (x, wt) in X.iter().zip(W) {
                acc += wt * f(mid + 0.5 * h * x) * 0.5 * h;
            }
        }
    }
    acc
}

/// `ψ(t) = (1/π) ∫_0^{2πB} cos(Ωt) G(Ω) dΩ` by Gauss-Legendre over the knots.
pub fn psi_oracle(bandwidth: f64, degree: u32, coeffs: &[f64], alpha: f64, t: f64) -> f64 {
    let m_half = (coeffs.len() / 2) as f64;
    let edge = 2.0 * PI * bandwidth;
    let a = edge / (degree as f64 + 2.0 * m_half + 1.0);
    let offset = if degree % 2 == 0 { a } else { 0.0 };
    let mut knots = vec![0.0];
    let mut j = 0;
    loop {
        let w = offset + 2.0 * a * j as f64;
        if w >= edge * (1.0 - 1e-12) {
            break;
        }
        if w > 0.0 {
            knots.push(w);
        }
        j += 1;
    }
    knots.push(edge);
    let panels = 8 + (t.abs() * 2.0 * a) as usize;
    gauss_legendre(
        |w| (w * t).cos() * inverse_weight_ref(bandwidth, degree, coeffs, alpha, w.min(edge * (1.0 - 1e-15))),
        &knots,
        panels,
    ) / PI
}

pub fn shannon_ref(spacing: f64, values: &[(isize, f64)], t: f64) -> f64 {
    values.iter().map(|&(n, x)| x * sinc_ref(t / spacing - n as f64)).sum()
}

pub fn linspace(a: f64, b: f64, count: usize) -> Vec<f64> {
    (0..count)
        .map(|i| a + (b - a) * i as f64 / (count - 1) as f64)
        .collect()
}
