//! Residual evaluators for the reduced Dirac operator, its four-component
//! form, the branch reduction to two channels, and the separated z and r
//! equations.
//!
//! Evaluators take sampled derivatives instead of differentiating, so
//! analytic jets and finite-difference jets can be fed in alike.

use std::f64::consts::{FRAC_PI_2, PI};

use nalgebra::{Matrix4, Vector4};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{self, FieldParams, TwiceM};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Which root of `ε - M/A = -ε + MA` ties the lower spinor pair to the upper.
///
/// The `-` root turns the two-channel system into the `+` one with `p → -p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BranchChoice {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl BranchChoice {
    pub fn from_sign(sign: i32) -> Result<Self> {
        match sign {
            1 => Ok(Self::Plus),
            -1 => Ok(Self::Minus),
            other => Err(Error::Domain(format!("branch sign must be +1 or -1, got {other}"))),
        }
    }

    pub fn sign(self) -> f64 {
        match self {
            Self::Plus => 1.0,
            Self::Minus => -1.0,
        }
    }

    /// True when the channel equations carry `-p` in place of `p`.
    pub fn p_flip(self) -> bool {
        self == Self::Minus
    }
}

/// `p = +√(ε² - M²)`.
pub fn momentum(eps: f64, mass: f64) -> Result<f64> {
    if !(mass > 0.0) {
        return Err(Error::Domain(format!("mass M = {mass} must be > 0")));
    }
    if eps.abs() < mass {
        return Err(Error::Evanescent { eps, mass });
    }
    Ok(((eps.abs() - mass) * (eps.abs() + mass)).sqrt())
}

/// `A = (ε ± p) / M`.
pub fn branch_coefficient(eps: f64, mass: f64, branch: BranchChoice) -> Result<f64> {
    let sp = branch.sign() * momentum(eps, mass)?;
    // (ε + sp)(ε - sp) = M²: pick the form without cancellation.
    if eps * sp >= 0.0 {
        Ok((eps + sp) / mass)
    } else {
        Ok(mass / (eps - sp))
    }
}

/// Value and first two derivatives of a profile at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeSample<T> {
    pub value: T,
    pub d1: T,
    pub d2: T,
}

fn open_z(z: f64) -> Result<()> {
    if !(z.abs() < FRAC_PI_2) {
        return Err(Error::Singular(format!("z = {z} is not inside (-pi/2, pi/2)")));
    }
    Ok(())
}

fn open_r(r: f64) -> Result<()> {
    if !(r > 0.0 && r < PI) {
        return Err(Error::Singular(format!("r = {r} is not inside (0, pi)")));
    }
    Ok(())
}

/// `Z'' - tan z Z' + (p² - i p tan z - λ²/cos² z) Z`.
pub fn z_ode_residual(s: &OdeSample<Complex64>, z: f64, p: f64, lambda: f64) -> Result<Complex64> {
    open_z(z)?;
    let (sz, cz) = z.sin_cos();
    let t = sz / cz;
    let coeff = Complex64::new(p * p - lambda * lambda / (cz * cz), -p * t);
    Ok(s.d2 - t * s.d1 + coeff * s.value)
}

/// First-order z pair: `cos z (Z₁' + ipZ₁) - λZ₂` and `cos z (Z₂' - ipZ₂) - λZ₁`.
pub fn z_pair_residual(
    z1: (Complex64, Complex64),
    z2: (Complex64, Complex64),
    z: f64,
    p: f64,
    lambda: f64,
) -> Result<[Complex64; 2]> {
    open_z(z)?;
    let cz = z.cos();
    Ok([
        cz * (z1.1 + I * p * z1.0) - lambda * z2.0,
        cz * (z2.1 - I * p * z2.0) - lambda * z1.0,
    ])
}

/// Effective potential `V` of `-R₁'' + V R₁ = λ² R₁`.
pub fn radial_potential(r: f64, twice_m: TwiceM, b: f64) -> Result<f64> {
    open_r(r)?;
    let (s, c) = r.sin_cos();
    let m = twice_m.m();
    let shifted = m + b * (c - 1.0);
    Ok((shifted * shifted - m * c + b * (c - 1.0)) / (s * s))
}

/// `R₁'' + (λ² - V) R₁`.
pub fn radial_ode_residual(s: &OdeSample<f64>, r: f64, twice_m: TwiceM, b: f64, lambda: f64) -> Result<f64> {
    let v = radial_potential(r, twice_m, b)?;
    Ok(s.d2 + (lambda * lambda - v) * s.value)
}

/// First-order radial pair: `(d/dr + μ)R₂ + λR₁` and `(d/dr - μ)R₁ - λR₂`.
pub fn radial_pair_residual(
    r1: (f64, f64),
    r2: (f64, f64),
    r: f64,
    twice_m: TwiceM,
    b: f64,
    lambda: f64,
) -> Result<[f64; 2]> {
    let mu = field::mu(r, twice_m, b)?;
    Ok([r2.1 + mu * r2.0 + lambda * r1.0, r1.1 - mu * r1.0 - lambda * r2.0])
}

/// Four components `f_a(r, z)` with their `r` and `z` partials.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComponentJet {
    pub f: [Complex64; 4],
    pub df_dr: [Complex64; 4],
    pub df_dz: [Complex64; 4],
}

/// The four component equations in the spinor basis, rows in order.
pub fn first_order_residual(
    jet: &ComponentJet,
    r: f64,
    z: f64,
    eps: f64,
    twice_m: TwiceM,
    params: &FieldParams,
) -> Result<[Complex64; 4]> {
    open_z(z)?;
    let mu = field::mu(r, twice_m, params.strength())?;
    let cz = z.cos();
    let m = params.mass();
    let [f1, f2, f3, f4] = jet.f;
    let [r1, r2, r3, r4] = jet.df_dr;
    let [z1, z2, z3, z4] = jet.df_dz;
    Ok([
        r4 + mu * f4 + cz * z3 + I * cz * (eps * f3 - m * f1),
        r3 - mu * f3 - cz * z4 + I * cz * (eps * f4 - m * f2),
        r2 + mu * f2 + cz * z1 - I * cz * (eps * f1 - m * f3),
        r1 - mu * f1 - cz * z2 - I * cz * (eps * f2 - m * f4),
    ])
}

/// A single `(value, ∂_r, ∂_z)` triple.
pub type ScalarJet = (Complex64, Complex64, Complex64);

/// The two-channel system left after `f₃ = A f₁`, `f₄ = A f₂` with the `+`
/// branch. Pass `-p` for the `-` branch.
pub fn channel_residual(
    f1: ScalarJet,
    f2: ScalarJet,
    r: f64,
    z: f64,
    p: f64,
    twice_m: TwiceM,
    b: f64,
) -> Result<[Complex64; 2]> {
    open_z(z)?;
    let mu = field::mu(r, twice_m, b)?;
    let cz = z.cos();
    Ok([
        f2.1 + mu * f2.0 + cz * (f1.2 + I * p * f1.0),
        f1.1 - mu * f1.0 - cz * (f2.2 - I * p * f2.0),
    ])
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// `γ⁰ … γ³` in the spinor basis fixed by the component equations:
/// `γ⁰ = [[0, 1], [1, 0]]`, `γᵏ = [[0, -σₖ], [σₖ, 0]]`.
pub fn dirac_matrices() -> [Matrix4<Complex64>; 4] {
    let zero = c(0.0);
    let one = c(1.0);
    let sigma = [
        [[zero, one], [one, zero]],
        [[zero, -I], [I, zero]],
        [[one, zero], [zero, -one]],
    ];
    let mut gammas = [Matrix4::zeros(); 4];
    for k in 0..2 {
        gammas[0][(k, k + 2)] = one;
        gammas[0][(k + 2, k)] = one;
    }
    for (n, s) in sigma.iter().enumerate() {
        for i in 0..2 {
            for j in 0..2 {
                gammas[n + 1][(i, j + 2)] = -s[i][j];
                gammas[n + 1][(i + 2, j)] = s[i][j];
            }
        }
    }
    gammas
}

/// Row phases that turn `D φ` into the component equations as written.
pub const ROW_NORMALIZATION: [Complex64; 4] = [I, I, Complex64::new(0.0, -1.0), Complex64::new(0.0, -1.0)];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpacetimePoint {
    pub t: f64,
    pub r: f64,
    pub z: f64,
    pub phi: f64,
}

/// A four-spinor field with all four coordinate partials at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpacetimeJet {
    pub value: [Complex64; 4],
    pub d_t: [Complex64; 4],
    pub d_r: [Complex64; 4],
    pub d_phi: [Complex64; 4],
    pub d_z: [Complex64; 4],
}

fn v4(a: &[Complex64; 4]) -> Vector4<Complex64> {
    Vector4::new(a[0], a[1], a[2], a[3])
}

/// Reduced operator
/// `iγ¹∂_r + γ²(i∂_φ - B(cos r - 1))/sin r + cos z (iγ⁰∂_t + iγ³∂_z - M)`
/// applied to `φ`, with the stationary phase `e^{-iεt + imφ}` divided out and
/// rows rescaled by [`ROW_NORMALIZATION`]. On a separated field this equals
/// [`first_order_residual`] row by row.
pub fn matrix_dirac_residual(
    jet: &SpacetimeJet,
    at: SpacetimePoint,
    eps: f64,
    twice_m: TwiceM,
    params: &FieldParams,
) -> Result<[Complex64; 4]> {
    open_r(at.r)?;
    open_z(at.z)?;
    let [g0, g1, g2, g3] = dirac_matrices();
    let (sr, cr) = at.r.sin_cos();
    let cz = at.z.cos();
    let b = params.strength();

    let value = v4(&jet.value);
    let azimuthal = (v4(&jet.d_phi) * I - value * c(b * (cr - 1.0))) / c(sr);
    let dirac = g1 * v4(&jet.d_r) * I
        + g2 * azimuthal
        + (g0 * v4(&jet.d_t) * I + g3 * v4(&jet.d_z) * I - value * c(params.mass())) * c(cz);

    let unphase = Complex64::from_polar(1.0, eps * at.t - twice_m.m() * at.phi);
    Ok(std::array::from_fn(|k| ROW_NORMALIZATION[k] * dirac[k] * unphase))
}

/// The covariant operator acting on `Ψ` before the `1/(√sin r · cos z)`
/// substitution, spin connection included. Returned unnormalized.
pub fn covariant_dirac_residual(jet: &SpacetimeJet, at: SpacetimePoint, params: &FieldParams) -> Result<[Complex64; 4]> {
    open_r(at.r)?;
    open_z(at.z)?;
    let [g0, g1, g2, g3] = dirac_matrices();
    let (sr, cr) = at.r.sin_cos();
    let (sz, cz) = at.z.sin_cos();
    let b = params.strength();

    let value = v4(&jet.value);
    let radial = (v4(&jet.d_r) + value * c(0.5 * cr / sr)) * I / c(cz);
    let azimuthal = (v4(&jet.d_phi) * I - value * c(b * (cr - 1.0))) / c(cz * sr);
    let polar = (v4(&jet.d_z) - value * c(sz / cz)) * I;
    let out = g0 * v4(&jet.d_t) * I + g1 * radial + g2 * azimuthal + g3 * polar - value * c(params.mass());
    Ok([out[0], out[1], out[2], out[3]])
}
