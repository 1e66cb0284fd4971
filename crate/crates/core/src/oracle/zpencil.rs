//! Finite-difference eigenvalues `p` of the z problem
//! `Z'' - tan z Z' - λ² sec² z Z - i p tan z Z + p² Z = 0`, a quadratic pencil
//! in `p`, solved through a linearization.

use std::f64::consts::FRAC_PI_2;

use nalgebra::{linalg::Schur, DMatrix};

use super::{FdEigen, GridSpec};
use crate::error::{Error, Result};

/// Largest `|Im p|` accepted as a real eigenvalue.
pub const REALITY_TOLERANCE: f64 = 1e-8;

/// Real eigenvalues `p` of the discretized z pencil with `Z = 0` at `±π/2`.
///
/// With `p = i s` the pencil `p² Z - i p tan z Z + L Z = 0`, where
/// `L = ∂² - tan z ∂ - λ² sec² z`, becomes `s² Z = s tan z Z + L Z`, a real
/// problem with companion matrix `[[0, 1], [L, tan z]]`. The `k` real
/// eigenvalues of smallest modulus are returned in ascending order.
pub fn z_fd_eigen(lambda: f64, grid: &GridSpec, k: usize) -> Result<FdEigen> {
    grid.validate()?;
    if !grid.within(-FRAC_PI_2, FRAC_PI_2) {
        return Err(Error::Usage(format!(
            "z grid [{}, {}] must lie within [-pi/2, pi/2]",
            grid.lower, grid.upper
        )));
    }
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::Degenerate(format!("lambda = {lambda} must be > 0")));
    }
    if k == 0 || k > grid.points / 4 {
        return Err(Error::Usage(format!("k = {k} must be in 1..={}", grid.points / 4)));
    }

    let per_level = (0..grid.levels)
        .map(|level| real_spectrum(lambda, &grid.interior_nodes(level)))
        .collect::<Result<Vec<_>>>()?;

    let finest = per_level.last().expect("at least one level");
    if finest.len() < k {
        return Err(Error::NoRealEigenvalues(format!(
            "found {} real eigenvalues (|Im p| < {REALITY_TOLERANCE}), needed {k}",
            finest.len()
        )));
    }
    let mut selected: Vec<f64> = finest[..k].to_vec();
    selected.sort_by(f64::total_cmp);

    let levels = per_level
        .iter()
        .map(|spectrum| {
            selected
                .iter()
                .map(|&target| {
                    spectrum
                        .iter()
                        .copied()
                        .min_by(|a, b| (a - target).abs().total_cmp(&(b - target).abs()))
                        .ok_or_else(|| Error::NoRealEigenvalues("coarse level has no real eigenvalues".into()))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FdEigen::from_levels(levels))
}

/// Real eigenvalues sorted by modulus, then value.
fn real_spectrum(lambda: f64, nodes: &[f64]) -> Result<Vec<f64>> {
    let n = nodes.len();
    let h = nodes[1] - nodes[0];
    let (h1, h2) = (0.5 / h, 1.0 / (h * h));
    let lam2 = lambda * lambda;
    let mut companion = DMatrix::<f64>::zeros(2 * n, 2 * n);
    for (i, &z) in nodes.iter().enumerate() {
        let (sz, cz) = z.sin_cos();
        let t = sz / cz;
        companion[(i, n + i)] = 1.0;
        let row = n + i;
        companion[(row, i)] = -2.0 * h2 - lam2 / (cz * cz);
        if i > 0 {
            companion[(row, i - 1)] = h2 + t * h1;
        }
        if i + 1 < n {
            companion[(row, i + 1)] = h2 - t * h1;
        }
        companion[(row, n + i)] = t;
    }
    let schur = Schur::try_new(companion, f64::EPSILON, 0)
        .ok_or_else(|| Error::NoRealEigenvalues("Schur iteration did not converge".into()))?;
    // p = i s
    let mut real: Vec<f64> = schur
        .complex_eigenvalues()
        .iter()
        .filter(|s| s.re.abs() < REALITY_TOLERANCE)
        .map(|s| -s.im)
        .collect();
    real.sort_by(|a, b| a.abs().total_cmp(&b.abs()).then(a.total_cmp(b)));
    Ok(real)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ground_pair_of_variant_four() {
        let fd = z_fd_eigen(2.0, &GridSpec::polar(64, 1), 2).unwrap();
        assert!((fd.extrapolated[0] + 2.5).abs() < 5e-2, "{:?}", fd.extrapolated);
        assert!((fd.extrapolated[1] - 2.5).abs() < 5e-2, "{:?}", fd.extrapolated);
    }
}
