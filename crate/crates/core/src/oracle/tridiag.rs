//! Lowest eigenvalues of a real symmetric tridiagonal matrix by Sturm-sequence
//! bisection.

use crate::error::{Error, Result};

/// Number of eigenvalues strictly below `x` for diagonal `d` and off-diagonal `e`.
pub fn sturm_count(d: &[f64], e: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut q = 1.0;
    for i in 0..d.len() {
        let coupling = if i == 0 { 0.0 } else { e[i - 1] * e[i - 1] / q };
        q = d[i] - x - coupling;
        if q == 0.0 {
            q = -f64::EPSILON * (d[i].abs() + x.abs() + f64::MIN_POSITIVE);
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// The `k` smallest eigenvalues in ascending order.
pub fn lowest_eigenvalues(d: &[f64], e: &[f64], k: usize) -> Result<Vec<f64>> {
    let n = d.len();
    if e.len() + 1 != n {
        return Err(Error::Internal(format!("tridiagonal shape {n} / {}", e.len())));
    }
    if k > n {
        return Err(Error::Usage(format!("asked for {k} eigenvalues of a {n}x{n} matrix")));
    }
    if d.iter().chain(e).any(|v| !v.is_finite()) {
        return Err(Error::Internal("non-finite matrix entry".into()));
    }
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for i in 0..n {
        let radius = if i > 0 { e[i - 1].abs() } else { 0.0 } + if i + 1 < n { e[i].abs() } else { 0.0 };
        lo = lo.min(d[i] - radius);
        hi = hi.max(d[i] + radius);
    }
    let pad = 1e-12 * (hi - lo).abs().max(1.0);
    lo -= pad;
    hi += pad;

    let mut out = Vec::with_capacity(k);
    for j in 0..k {
        let (mut a, mut b) = (out.last().copied().unwrap_or(lo).min(hi), hi);
        // invariant: count(a) <= j < count(b)
        while sturm_count(d, e, a) > j {
            a -= pad;
        }
        for _ in 0..200 {
            let mid = 0.5 * (a + b);
            if mid <= a || mid >= b {
                break;
            }
            if sturm_count(d, e, mid) > j {
                b = mid;
            } else {
                a = mid;
            }
            if b - a <= 2.0 * f64::EPSILON * a.abs().max(b.abs()) {
                break;
            }
        }
        out.push(0.5 * (a + b));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;
    use proptest::prelude::*;

    #[test]
    fn discrete_laplacian() {
        let n = 50;
        let d = vec![2.0; n];
        let e = vec![-1.0; n - 1];
        let got = lowest_eigenvalues(&d, &e, 5).unwrap();
        for (j, g) in got.iter().enumerate() {
            let theta = (j + 1) as f64 * std::f64::consts::PI / (n + 1) as f64;
            assert!((g - (2.0 - 2.0 * theta.cos())).abs() < 1e-13);
        }
    }

    proptest! {
        #[test]
        fn agrees_with_dense_solver(
            d in prop::collection::vec(-5.0..5.0f64, 12),
            e in prop::collection::vec(-3.0..3.0f64, 11),
        ) {
            let n = d.len();
            let dense = DMatrix::from_fn(n, n, |i, j| {
                if i == j { d[i] } else if i + 1 == j { e[i] } else if j + 1 == i { e[j] } else { 0.0 }
            });
            let mut want: Vec<f64> = dense.symmetric_eigenvalues().iter().copied().collect();
            want.sort_by(f64::total_cmp);
            let got = lowest_eigenvalues(&d, &e, n).unwrap();
            for (g, w) in got.iter().zip(&want) {
                prop_assert!((g - w).abs() < 1e-10, "{g} vs {w}");
            }
        }
    }
}
