//! Independent numerical checks: finite-difference eigenvalue oracles for the
//! radial and z problems, and residual scans of assembled states.

mod compare;
mod radial;
mod tridiag;
mod zpencil;

pub use compare::{compare_radial, compare_z, dirichlet_expected, ComparisonEntry, Expectation, OracleComparison};
pub use radial::{radial_fd_eigen, RadialScheme};
pub use tridiag::{lowest_eigenvalues, sturm_count};
pub use zpencil::z_fd_eigen;

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::separation::first_order_residual;
use crate::spectra::SpectrumRecord;
use crate::wavefunctions::assemble_jet;

/// Smallest base resolution accepted by the eigenvalue oracles.
pub const MIN_POINTS: usize = 64;

/// A one-dimensional grid with dyadic refinement. Level `l` has
/// `points · 2^l` cells. `lower > upper` describes a reversed orientation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub lower: f64,
    pub upper: f64,
    pub points: usize,
    pub levels: usize,
}

impl GridSpec {
    pub fn new(lower: f64, upper: f64, points: usize, levels: usize) -> Result<Self> {
        let g = Self { lower, upper, points, levels };
        g.validate()?;
        Ok(g)
    }

    /// `[0, π]`, unchecked.
    pub fn radial(points: usize, levels: usize) -> Self {
        Self { lower: 0.0, upper: PI, points, levels }
    }

    /// `[-π/2, π/2]`, unchecked.
    pub fn polar(points: usize, levels: usize) -> Self {
        Self { lower: -FRAC_PI_2, upper: FRAC_PI_2, points, levels }
    }

    pub fn reversed(self) -> Self {
        Self { lower: self.upper, upper: self.lower, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if self.points < MIN_POINTS {
            return Err(Error::Usage(format!("grid needs at least {MIN_POINTS} points, got {}", self.points)));
        }
        if self.levels == 0 {
            return Err(Error::Usage("grid needs at least one level".into()));
        }
        if !(self.lower.is_finite() && self.upper.is_finite()) || self.lower == self.upper {
            return Err(Error::Usage(format!("empty grid interval [{}, {}]", self.lower, self.upper)));
        }
        Ok(())
    }

    pub fn cells(&self, level: usize) -> usize {
        self.points << level
    }

    /// Signed cell width; negative for a reversed grid.
    pub fn step(&self, level: usize) -> f64 {
        (self.upper - self.lower) / self.cells(level) as f64
    }

    pub fn cell_width(&self, level: usize) -> f64 {
        self.step(level).abs()
    }

    /// Cell centres of level `level`, in grid orientation.
    pub fn midpoints(&self, level: usize) -> impl Iterator<Item = f64> + '_ {
        let h = self.step(level);
        (0..self.cells(level)).map(move |i| self.lower + (i as f64 + 0.5) * h)
    }

    /// Nodes strictly inside the interval, `(points + 1) · 2^l - 1` of them.
    pub fn interior_nodes(&self, level: usize) -> Vec<f64> {
        let count = ((self.points + 1) << level) - 1;
        let h = (self.upper - self.lower) / (count + 1) as f64;
        (1..=count).map(|i| self.lower + i as f64 * h).collect()
    }

    fn within(&self, lo: f64, hi: f64) -> bool {
        let (a, b) = if self.lower < self.upper { (self.lower, self.upper) } else { (self.upper, self.lower) };
        a >= lo && b <= hi
    }
}

/// Eigenvalues on each refinement level with a Richardson combination of the
/// two finest levels.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FdEigen {
    /// One ascending list per level, coarse to fine.
    pub levels: Vec<Vec<f64>>,
    /// `(4 e_fine - e_coarse)/3`; equal to the finest level when only one exists.
    pub extrapolated: Vec<f64>,
    /// `log₂((e₀ - e₁)/(e₁ - e₂))` from the three finest levels, per eigenvalue.
    pub observed_order: Option<Vec<f64>>,
}

impl FdEigen {
    /// Combines per-level spectra that are already paired index by index.
    pub(crate) fn from_levels(levels: Vec<Vec<f64>>) -> Self {
        let l = levels.len();
        let extrapolated = if l >= 2 {
            levels[l - 1].iter().zip(&levels[l - 2]).map(|(f, c)| (4.0 * f - c) / 3.0).collect()
        } else {
            levels[l - 1].clone()
        };
        let observed_order = (l >= 3).then(|| {
            let (a, b, c) = (&levels[l - 3], &levels[l - 2], &levels[l - 1]);
            (0..c.len()).map(|j| ((a[j] - b[j]) / (b[j] - c[j])).abs().log2()).collect()
        });
        Self { levels, extrapolated, observed_order }
    }
}

/// Maximum residual of the component equations over the tensor grid of interior
/// nodes, divided by the largest component modulus found on the same grid.
///
/// The equations are linear, so this is the residual of the state rescaled to
/// unit peak amplitude.
pub fn residual_scan(rec: &SpectrumRecord, r_grid: &GridSpec, z_grid: &GridSpec) -> Result<ResidualReport> {
    if !r_grid.within(0.0, PI) || !z_grid.within(-FRAC_PI_2, FRAC_PI_2) {
        return Err(Error::Domain("residual grid leaves the open chart".into()));
    }
    let rs = r_grid.interior_nodes(0);
    let zs = z_grid.interior_nodes(0);
    let mut max_res: f64 = 0.0;
    let mut max_amp: f64 = 0.0;
    let mut worst = (rs[0], zs[0]);
    for &r in &rs {
        for &z in &zs {
            let jet = assemble_jet(rec, r, z)?;
            let res = first_order_residual(&jet, r, z, rec.eps, rec.qn.twice_m, &rec.params)?;
            let local = res.iter().map(|c| c.norm()).fold(0.0, f64::max);
            if local > max_res {
                max_res = local;
                worst = (r, z);
            }
            max_amp = jet.f.iter().map(|c| c.norm()).fold(max_amp, f64::max);
        }
    }
    if !(max_amp > 0.0 && max_amp.is_finite()) {
        return Err(Error::Internal(format!("state amplitude {max_amp} on the residual grid")));
    }
    Ok(ResidualReport {
        absolute: max_res,
        relative: max_res / max_amp,
        peak_amplitude: max_amp,
        worst_r: worst.0,
        worst_z: worst.1,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResidualReport {
    pub absolute: f64,
    /// `absolute / peak_amplitude`.
    pub relative: f64,
    pub peak_amplitude: f64,
    pub worst_r: f64,
    pub worst_z: f64,
}
