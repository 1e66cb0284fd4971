//! Finite-difference eigenvalues `λ²` of the radial problem
//! `-R'' + V(r) R = λ² R` on `(0, π)` with Dirichlet ends.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::tridiag::lowest_eigenvalues;
use super::{FdEigen, GridSpec};
use crate::error::{Error, Result};
use crate::field::TwiceM;
use crate::separation::radial_potential;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RadialScheme {
    /// Cell-centred scheme for `R = √(sin r) w`, which turns the problem into
    /// `-(sin r w')' + q w = λ² sin r w` with no end-point singularity in the
    /// flux. Second order for every `m`.
    #[default]
    HalfDensity,
    /// Three-point Laplacian on interior nodes with `R = 0` at both ends.
    /// Loses accuracy when an end-point exponent is small.
    Clamped,
}

/// The `k` lowest `λ²` on every level of `grid`.
pub fn radial_fd_eigen(twice_m: TwiceM, b: f64, grid: &GridSpec, k: usize, scheme: RadialScheme) -> Result<FdEigen> {
    grid.validate()?;
    if !(grid.lower >= 0.0 && grid.upper <= PI && grid.lower < grid.upper) {
        return Err(Error::Usage(format!(
            "radial grid [{}, {}] must be an increasing subinterval of [0, pi]",
            grid.lower, grid.upper
        )));
    }
    if k == 0 || k > grid.points / 4 {
        return Err(Error::Usage(format!("k = {k} must be in 1..={}", grid.points / 4)));
    }
    if !b.is_finite() {
        return Err(Error::Domain(format!("field strength {b}")));
    }
    let mut levels = Vec::with_capacity(grid.levels);
    for level in 0..grid.levels {
        let (d, e) = match scheme {
            RadialScheme::HalfDensity => half_density(twice_m, b, grid, level)?,
            RadialScheme::Clamped => clamped(twice_m, b, grid, level)?,
        };
        levels.push(lowest_eigenvalues(&d, &e, k)?);
    }
    Ok(FdEigen::from_levels(levels))
}

fn half_density(twice_m: TwiceM, b: f64, grid: &GridSpec, level: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = grid.cells(level);
    let h = grid.step(level);
    let h2 = h * h;
    let face = |i: usize| (grid.lower + i as f64 * h).sin().max(0.0);
    let centres: Vec<f64> = grid.midpoints(level).collect();
    let mut d = Vec::with_capacity(n);
    let mut weight = Vec::with_capacity(n);
    for (i, &r) in centres.iter().enumerate() {
        let (s, c) = r.sin_cos();
        let q = s * radial_potential(r, twice_m, b)? + c * c / (4.0 * s) + 0.5 * s;
        // Dirichlet ghost cell w = -w doubles the boundary flux.
        let left = if i == 0 { 2.0 * face(0) } else { face(i) };
        let right = if i + 1 == n { 2.0 * face(n) } else { face(i + 1) };
        d.push((left + right) / h2 + q);
        weight.push(1.0 / s.sqrt());
    }
    let upper: Vec<f64> = (0..n - 1).map(|i| -face(i + 1) / h2 * weight[i] * weight[i + 1]).collect();
    let lower: Vec<f64> = (1..n).map(|i| -face(i) / h2 * weight[i] * weight[i - 1]).collect();
    let asymmetric = upper.iter().zip(&lower).any(|(u, l)| (u - l).abs() > 1e-14 * u.abs());
    if asymmetric {
        return Err(Error::Internal("radial assembly is not symmetric".into()));
    }
    for (di, w) in d.iter_mut().zip(&weight) {
        *di *= w * w;
    }
    Ok((d, upper))
}

fn clamped(twice_m: TwiceM, b: f64, grid: &GridSpec, level: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let nodes = grid.interior_nodes(level);
    let h = nodes[1] - nodes[0];
    let h2 = h * h;
    let d = nodes
        .iter()
        .map(|&r| radial_potential(r, twice_m, b).map(|v| 2.0 / h2 + v))
        .collect::<Result<Vec<_>>>()?;
    Ok((d, vec![-1.0 / h2; nodes.len() - 1]))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_case_matches_integer_squares() {
        // m = 1/2, B = 0: V = (1 - cos r)/sin² r, λ² = (n + 1)²
        let fd = radial_fd_eigen(TwiceM::new(1).unwrap(), 0.0, &GridSpec::radial(500, 3), 4, RadialScheme::HalfDensity).unwrap();
        for (got, want) in fd.extrapolated.iter().zip([1.0, 4.0, 9.0, 16.0]) {
            assert!((got - want).abs() < 1e-3, "{got} vs {want}");
        }
        let order = fd.observed_order.unwrap();
        assert!(order.iter().all(|o| (o - 2.0).abs() < 0.2), "{order:?}");
    }

    #[test]
    fn k_is_bounded_by_resolution() {
        let g = GridSpec::radial(64, 1);
        assert!(radial_fd_eigen(TwiceM::new(1).unwrap(), 1.0, &g, 17, RadialScheme::HalfDensity).is_err());
        assert!(radial_fd_eigen(TwiceM::new(1).unwrap(), 1.0, &g, 0, RadialScheme::HalfDensity).is_err());
        assert!(radial_fd_eigen(TwiceM::new(1).unwrap(), 1.0, &g.reversed(), 2, RadialScheme::Clamped).is_err());
    }
}
