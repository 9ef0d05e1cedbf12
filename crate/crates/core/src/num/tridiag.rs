//! Symmetric tridiagonal eigensolves: Sturm-sequence bisection for the
//! extreme eigenvalues, inverse iteration for the ground-state vector.

const PIVOT_GUARD: f64 = 1e-300;

/// Number of eigenvalues strictly below `lambda` (LDLT pivot signs).
pub fn sturm_count(diag: &[f64], off: &[f64], lambda: f64) -> usize {
    let n = diag.len();
    if n == 0 {
        return 0;
    }
    let mut count = 0;
    let mut q = diag[0] - lambda;
    if q < 0.0 {
        count += 1;
    }
    for i in 1..n {
        let q_safe = if q.abs() < PIVOT_GUARD {
            if q >= 0.0 {
                PIVOT_GUARD
            } else {
                -PIVOT_GUARD
            }
        } else {
            q
        };
        q = (diag[i] - lambda) - off[i - 1] * off[i - 1] / q_safe;
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

fn gershgorin_bounds(diag: &[f64], off: &[f64]) -> (f64, f64) {
    let n = diag.len();
    let mut lo = f64::MAX;
    let mut hi = f64::MIN;
    for i in 0..n {
        let left = if i > 0 { off[i - 1].abs() } else { 0.0 };
        let right = if i < n - 1 { off[i].abs() } else { 0.0 };
        lo = lo.min(diag[i] - left - right);
        hi = hi.max(diag[i] + left + right);
    }
    (lo - 1.0, hi + 1.0)
}

/// Smallest eigenvalue by Sturm bisection.
pub fn smallest_eigenvalue(diag: &[f64], off: &[f64]) -> f64 {
    let (mut a, mut b) = gershgorin_bounds(diag, off);
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if (b - a) < 2.0 * f64::EPSILON * mid.abs().max(1.0) {
            break;
        }
        if sturm_count(diag, off, mid) == 0 {
            a = mid;
        } else {
            b = mid;
        }
    }
    0.5 * (a + b)
}

/// Count of eigenvalues strictly below zero.
pub fn negative_count(diag: &[f64], off: &[f64]) -> usize {
    sturm_count(diag, off, 0.0)
}

/// Solves (T - sigma I) x = b with the Thomas algorithm (guarded pivots).
fn shifted_solve(diag: &[f64], off: &[f64], sigma: f64, b: &[f64]) -> Vec<f64> {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    let mut piv = diag[0] - sigma;
    if piv.abs() < PIVOT_GUARD {
        piv = PIVOT_GUARD;
    }
    c[0] = if n > 1 { off[0] / piv } else { 0.0 };
    d[0] = b[0] / piv;
    for i in 1..n {
        let mut m = (diag[i] - sigma) - off[i - 1] * c[i - 1];
        if m.abs() < PIVOT_GUARD {
            m = PIVOT_GUARD;
        }
        if i < n - 1 {
            c[i] = off[i] / m;
        }
        d[i] = (b[i] - off[i - 1] * d[i - 1]) / m;
    }
    let mut x = vec![0.0; n];
    x[n - 1] = d[n - 1];
    for i in (0..n - 1).rev() {
        x[i] = d[i] - c[i] * x[i + 1];
    }
    x
}

/// Eigenvector for the eigenvalue near `lambda` by inverse iteration.
/// The result is normalized to unit Euclidean norm with nonnegative sum.
pub fn eigenvector(diag: &[f64], off: &[f64], lambda: f64) -> Vec<f64> {
    let n = diag.len();
    let scale = diag.iter().fold(0.0f64, |m, d| m.max(d.abs())).max(1.0);
    let sigma = lambda - 1e-10 * scale;
    let mut v: Vec<f64> = vec![1.0 / (n as f64).sqrt(); n];
    for _ in 0..8 {
        let mut w = shifted_solve(diag, off, sigma, &v);
        let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            break;
        }
        for x in &mut w {
            *x /= norm;
        }
        let drift: f64 = w
            .iter()
            .zip(&v)
            .map(|(a, b)| (a - b).abs().min((a + b).abs()))
            .fold(0.0, f64::max);
        v = w;
        if drift < 1e-14 {
            break;
        }
    }
    if v.iter().sum::<f64>() < 0.0 {
        for x in &mut v {
            *x = -*x;
        }
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    /// Dirichlet Laplacian on (0,1): eigenvalues 4 n² sin²(kπ/(2n)) h^{-2}...
    /// checked against the classical discrete formula.
    #[test]
    fn dirichlet_laplacian_ground_state() {
        let n = 200;
        let h = 1.0 / (n as f64 + 1.0);
        let diag = vec![2.0 / (h * h); n];
        let off = vec![-1.0 / (h * h); n - 1];
        let lam = smallest_eigenvalue(&diag, &off);
        let exact = 4.0 / (h * h) * (PI * h / 2.0).sin().powi(2);
        assert!((lam - exact).abs() < 1e-8 * exact);

        let v = eigenvector(&diag, &off, lam);
        // Ground state has no interior sign change.
        assert!(v.iter().all(|&x| x > 0.0) || v.iter().all(|&x| x < 0.0));
        // Residual ||T v - lam v||.
        let mut res: f64 = 0.0;
        for i in 0..n {
            let mut t = diag[i] * v[i];
            if i > 0 {
                t += off[i - 1] * v[i - 1];
            }
            if i < n - 1 {
                t += off[i] * v[i + 1];
            }
            res = res.max((t - lam * v[i]).abs());
        }
        assert!(res < 1e-6 * exact, "residual {res:.3e}");
    }

    #[test]
    fn sturm_counts_match_known_spectrum() {
        // Free chain d=0, e=-1: eigenvalues 2cos(kπ/(n+1)).
        let n = 40;
        let diag = vec![0.0; n];
        let off = vec![-1.0; n - 1];
        for k in 1..=n {
            let ev = 2.0 * (k as f64 * PI / (n as f64 + 1.0)).cos();
            assert_eq!(sturm_count(&diag, &off, ev - 1e-9), n - k);
        }
    }
}
