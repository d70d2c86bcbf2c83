//! Centered polynomial B-splines.
//!
//! `bspline(k, x)` is the (k+1)-fold self-convolution of the unit rectangle
//! `β⁰(x) = 1` for `|x| < 1/2`. Degrees up to 3 use the explicit piecewise
//! polynomials; higher degrees fall back to the two-term recurrence
//!
//! ```text
//! βᵏ(x) = ((k+1)/2 + x)/k · βᵏ⁻¹(x + 1/2) + ((k+1)/2 - x)/k · βᵏ⁻¹(x - 1/2)
//! ```

/// Evaluates the centered B-spline of degree `degree` at `x`.
///
/// The support is the open interval `|x| < (degree + 1) / 2`; the value is
/// exactly zero outside it, including at the endpoints.
pub fn bspline(degree: usize, x: f64) -> f64 {
    let ax = x.abs();
    let half_support = (degree as f64 + 1.0) / 2.0;
    if !(ax < half_support) {
        return 0.0;
    }
    match degree {
        0 => 1.0,
        1 => 1.0 - ax,
        2 => {
            if ax < 0.5 {
                0.75 - ax * ax
            } else {
                let u = 1.5 - ax;
                0.5 * u * u
            }
        }
        3 => {
            if ax < 1.0 {
                2.0 / 3.0 - ax * ax + 0.5 * ax * ax * ax
            } else {
                let u = 2.0 - ax;
                u * u * u / 6.0
            }
        }
        _ => recurrence(degree, x),
    }
}

fn recurrence(degree: usize, x: f64) -> f64 {
    // Half-open rectangle [-1/2, 1/2) so the two shifted terms never both
    // drop a shared knot; the caller restores the open support.
    if degree == 0 {
        return if (-0.5..0.5).contains(&x) { 1.0 } else { 0.0 };
    }
    let k = degree as f64;
    let h = (k + 1.0) / 2.0;
    ((h + x) * recurrence(degree - 1, x + 0.5) + (h - x) * recurrence(degree - 1, x - 0.5)) / k
}
