//! Dense Cholesky factorization and a Levinson solver for the symmetric
//! Toeplitz Gram systems.

use num_complex::Complex64;

/// Lower-triangular factor `L` with `A = L Lᵀ`, stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Cholesky {
    n: usize,
    l: Vec<f64>,
}

impl Cholesky {
    /// Factors a dense symmetric matrix given row-major. On failure returns
    /// the index of the first nonpositive pivot.
    pub fn factor(a: &[f64], n: usize) -> Result<Self, usize> {
        debug_assert_eq!(a.len(), n * n);
        let mut l = vec![0.0; n * n];
        for j in 0..n {
            let mut diag = a[j * n + j];
            for k in 0..j {
                diag -= l[j * n + k] * l[j * n + k];
            }
            if !(diag > 0.0) || !diag.is_finite() {
                return Err(j);
            }
            let d = diag.sqrt();
            l[j * n + j] = d;
            for i in j + 1..n {
                let mut s = a[i * n + j];
                for k in 0..j {
                    s -= l[i * n + k] * l[j * n + k];
                }
                l[i * n + j] = s / d;
            }
        }
        Ok(Cholesky { n, l })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn diagonal(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(move |i| self.l[i * self.n + i])
    }

    /// `(max L_ii / min L_ii)²`: a cheap lower estimate of the spectral
    /// condition number, not the exact value.
    pub fn condition_estimate(&self) -> f64 {
        let (lo, hi) = self
            .diagonal()
            .fold((f64::INFINITY, 0.0f64), |(lo, hi), d| (lo.min(d), hi.max(d)));
        (hi / lo).powi(2)
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let mut y = b.to_vec();
        self.solve_in_place(&mut y);
        y
    }

    pub fn solve_in_place(&self, y: &mut [f64]) {
        let n = self.n;
        for i in 0..n {
            let mut s = y[i];
            for k in 0..i {
                s -= self.l[i * n + k] * y[k];
            }
            y[i] = s / self.l[i * n + i];
        }
        for i in (0..n).rev() {
            let mut s = y[i];
            for k in i + 1..n {
                s -= self.l[k * n + i] * y[k];
            }
            y[i] = s / self.l[i * n + i];
        }
    }

    /// Solves with a complex right-hand side; `L` is real, so the real and
    /// imaginary parts are independent systems.
    pub fn solve_complex(&self, b: &[Complex64]) -> Vec<Complex64> {
        let re = self.solve(&b.iter().map(|z| z.re).collect::<Vec<_>>());
        let im = self.solve(&b.iter().map(|z| z.im).collect::<Vec<_>>());
        re.into_iter().zip(im).map(|(r, i)| Complex64::new(r, i)).collect()
    }
}

/// Expands the first row of a symmetric Toeplitz matrix to dense row-major.
pub fn toeplitz_dense(first_row: &[f64]) -> Vec<f64> {
    let n = first_row.len();
    let mut a = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            a[i * n + j] = first_row[i.abs_diff(j)];
        }
    }
    a
}

/// Levinson recursion for `T x = b` with `T` symmetric positive-definite
/// Toeplitz given by its first row. O(n²) time, O(n) memory. Returns `None`
/// if a leading principal minor is numerically singular.
pub fn levinson_solve(first_row: &[f64], b: &[Complex64]) -> Option<Vec<Complex64>> {
    let n = first_row.len();
    assert_eq!(b.len(), n);
    if n == 0 {
        return Some(Vec::new());
    }
    let r0 = first_row[0];
    if !(r0 > 0.0) {
        return None;
    }
    // `forward` solves T_k f = e_1; by symmetry the backward vector is its reverse.
    let mut forward = vec![1.0 / r0];
    let mut x = vec![b[0] / r0];
    for k in 1..n {
        let ef: f64 = (0..k).map(|i| first_row[k - i] * forward[i]).sum();
        let denom = 1.0 - ef * ef;
        if !(denom > 0.0) {
            return None;
        }
        let mut next = vec![0.0; k + 1];
        for i in 0..=k {
            let ext = if i < k { forward[i] } else { 0.0 };
            let back = if i > 0 { forward[k - i] } else { 0.0 };
            next[i] = (ext - ef * back) / denom;
        }
        forward = next;
        let ex: Complex64 = (0..k).map(|i| x[i] * first_row[k - i]).sum();
        let gain = b[k] - ex;
        x.push(Complex64::new(0.0, 0.0));
        for i in 0..=k {
            // backward vector of order k+1 is forward reversed
            x[i] += gain * forward[k - i];
        }
    }
    Some(x)
}
