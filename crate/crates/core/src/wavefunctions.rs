//! Closed-form profiles `Z₁, Z₂` (z-variants) and `R₁, R₂` (radial variants),
//! the assembled four-component state, and a quadrature-based normalizability
//! classification.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{self, TwiceM};
use crate::hyp2f1::TerminatingSeries;
use crate::oracle::GridSpec;
use crate::separation::{ComponentJet, OdeSample, SpacetimeJet, SpacetimePoint};
use crate::spectra::{self, SpectrumRecord};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Exponent choice `(A, C)` in `Z₁ = y^A (1-y)^C F(y)`, `y = (1 + i tan z)/2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum ZVariant {
    V1,
    V2,
    V3,
    V4,
}

impl ZVariant {
    pub const ALL: [ZVariant; 4] = [Self::V1, Self::V2, Self::V3, Self::V4];

    pub fn index(self) -> u8 {
        self as u8 + 1
    }

    pub fn from_index(index: u8) -> Result<Self> {
        match index {
            1 => Ok(Self::V1),
            2 => Ok(Self::V2),
            3 => Ok(Self::V3),
            4 => Ok(Self::V4),
            other => Err(Error::Domain(format!("z-variant must be 1..=4, got {other}"))),
        }
    }

    pub fn exponents(self, p: f64) -> (f64, f64) {
        match self {
            Self::V1 => ((p + 1.0) / 2.0, (1.0 - p) / 2.0),
            Self::V2 => (-p / 2.0, p / 2.0),
            Self::V3 => ((p + 1.0) / 2.0, p / 2.0),
            Self::V4 => (-p / 2.0, (1.0 - p) / 2.0),
        }
    }

    /// Variants 1 and 2 quantize `λ` rather than `p` and are not used for spectra.
    pub fn is_rejected(self) -> bool {
        matches!(self, Self::V1 | Self::V2)
    }
}

impl TryFrom<u8> for ZVariant {
    type Error = Error;

    fn try_from(v: u8) -> Result<Self> {
        Self::from_index(v)
    }
}

impl From<ZVariant> for u8 {
    fn from(v: ZVariant) -> u8 {
        v.index()
    }
}

/// Exponent choice `(A, C)` in `R₁ = (1 + cos r)^A (1 - cos r)^C F((1 + cos r)/2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum RVariant {
    V1,
    V2,
    V3,
    V4,
}

impl RVariant {
    pub const ALL: [RVariant; 4] = [Self::V1, Self::V2, Self::V3, Self::V4];

    pub fn index(self) -> u8 {
        self as u8 + 1
    }

    pub fn from_index(index: u8) -> Result<Self> {
        match index {
            1 => Ok(Self::V1),
            2 => Ok(Self::V2),
            3 => Ok(Self::V3),
            4 => Ok(Self::V4),
            other => Err(Error::Domain(format!("radial variant must be 1..=4, got {other}"))),
        }
    }

    pub fn exponents(self, twice_m: TwiceM, b: f64) -> (f64, f64) {
        let m = twice_m.m();
        match self {
            Self::V1 => ((2.0 * b - m) / 2.0, m / 2.0),
            Self::V2 => ((m + 1.0 - 2.0 * b) / 2.0, m / 2.0),
            Self::V3 => ((m + 1.0 - 2.0 * b) / 2.0, (1.0 - m) / 2.0),
            Self::V4 => ((2.0 * b - m) / 2.0, (1.0 - m) / 2.0),
        }
    }
}

impl TryFrom<u8> for RVariant {
    type Error = Error;

    fn try_from(v: u8) -> Result<Self> {
        Self::from_index(v)
    }
}

impl From<RVariant> for u8 {
    fn from(v: RVariant) -> u8 {
        v.index()
    }
}

/// `Z₁` with two derivatives, plus `Z₂ = cos z (Z₁' + ipZ₁)/λ` and `Z₂'`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZSample {
    pub z1: OdeSample<Complex64>,
    pub z2: Complex64,
    pub dz2: Complex64,
}

/// `R₁` with two derivatives, plus `R₂ = (R₁' - μR₁)/λ` and `R₂'`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RSample {
    pub r1: OdeSample<f64>,
    pub r2: f64,
    pub dr2: f64,
}

fn positive_lambda(lambda: f64) -> Result<()> {
    if !(lambda > 0.0) {
        return Err(Error::Degenerate(format!(
            "lambda = {lambda}; the second profile is reconstructed by dividing by lambda"
        )));
    }
    Ok(())
}

fn series_of_degree(alpha: f64, beta: f64, gamma: f64, degree: u32, what: &str) -> Result<TerminatingSeries> {
    let series = TerminatingSeries::new(alpha, beta, gamma).map_err(|e| match e {
        Error::NonTerminating { .. } => Error::Inconsistent(format!(
            "{what}: F({alpha}, {beta}, {gamma}; y) does not terminate"
        )),
        other => other,
    })?;
    if series.degree() != degree {
        return Err(Error::Inconsistent(format!(
            "{what}: series has degree {} but index {degree} was requested",
            series.degree()
        )));
    }
    Ok(series)
}

/// Hypergeometric parameters `(α, β, γ)` of the z-reduction.
pub fn z_parameters(v: ZVariant, lambda: f64, p: f64) -> (f64, f64, f64) {
    let (a, c) = v.exponents(p);
    (lambda + a + c, -lambda + a + c, 2.0 * a + 0.5)
}

pub fn z_profile(v: ZVariant, lambda: f64, p: f64, big_n: u32, z: f64) -> Result<ZSample> {
    positive_lambda(lambda)?;
    if !(z.abs() < FRAC_PI_2) {
        return Err(Error::Singular(format!("z = {z} is on the boundary of (-pi/2, pi/2)")));
    }
    let (a, c) = v.exponents(p);
    let (alpha, beta, gamma) = z_parameters(v, lambda, p);
    let series = series_of_degree(alpha, beta, gamma, big_n, &format!("z-variant {}", v.index()))?;

    let (sz, cz) = z.sin_cos();
    let t = sz / cz;
    let sec2 = 1.0 / (cz * cz);
    let y = Complex64::new(0.5, 0.5 * t);
    let dy = I * (0.5 * sec2);
    let ddy = I * (sec2 * t);
    let [f, df, ddf] = series.eval_with_derivatives(y);

    // prefactor e^{i(A-C)z} (cos z)^{-(A+C)} and its logarithmic derivative
    let pre = Complex64::from_polar(cz.powf(-(a + c)), (a - c) * z);
    let log_d = Complex64::new((a + c) * t, a - c);
    let log_dd = log_d * log_d + (a + c) * sec2;

    let z1 = pre * f;
    let dz1 = pre * (log_d * f + df * dy);
    let d2z1 = pre * (log_dd * f + 2.0 * log_d * df * dy + ddf * dy * dy + df * ddy);

    let z2 = cz * (dz1 + I * p * z1) / lambda;
    let dz2 = (-sz * (dz1 + I * p * z1) + cz * (d2z1 + I * p * dz1)) / lambda;
    Ok(ZSample {
        z1: OdeSample { value: z1, d1: dz1, d2: d2z1 },
        z2,
        dz2,
    })
}

/// `(α, β, γ)` of the radial reduction for a given `λ`.
pub fn radial_parameters(v: RVariant, twice_m: TwiceM, b: f64, lambda: f64) -> (f64, f64, f64) {
    let (a, c) = v.exponents(twice_m, b);
    let root = (b * b + lambda * lambda).sqrt();
    (a + c - root, a + c + root, 2.0 * a + 0.5)
}

pub fn radial_profile(v: RVariant, twice_m: TwiceM, b: f64, lambda: f64, n: u32, r: f64) -> Result<RSample> {
    let gate = spectra::admissible(v, twice_m, b);
    if !gate.ok {
        return Err(Error::Inadmissible {
            variant: v.index(),
            violated: gate.violated.join(", "),
        });
    }
    positive_lambda(lambda)?;
    if !(r > 0.0 && r < PI) {
        return Err(Error::Singular(format!("r = {r} is on the boundary of (0, pi)")));
    }
    let (a, c) = v.exponents(twice_m, b);
    let (alpha, beta, gamma) = radial_parameters(v, twice_m, b, lambda);
    let series = series_of_degree(alpha, beta, gamma, n, &format!("radial variant {}", v.index()))?;

    let (s, co) = r.sin_cos();
    let (u, w) = (1.0 + co, 1.0 - co);
    let y = Complex64::new(u / 2.0, 0.0);
    let [f, df, ddf] = series.eval_with_derivatives(y).map(|x| x.re);
    let (dy, ddy) = (-s / 2.0, -co / 2.0);

    let pre = u.powf(a) * w.powf(c);
    let log_d = -a * s / u + c * s / w;
    let log_dd = log_d * log_d - a / u - c / w;

    let r1 = pre * f;
    let dr1 = pre * (log_d * f + df * dy);
    let d2r1 = pre * (log_dd * f + 2.0 * log_d * df * dy + ddf * dy * dy + df * ddy);

    let mu = field::mu(r, twice_m, b)?;
    let dmu = field::mu_derivative(r, twice_m, b)?;
    Ok(RSample {
        r1: OdeSample { value: r1, d1: dr1, d2: d2r1 },
        r2: (dr1 - mu * r1) / lambda,
        dr2: (d2r1 - dmu * r1 - mu * dr1) / lambda,
    })
}

/// z-profile for the record's branch: the `-` branch is the `+` solution
/// reflected through `z → -z`, which maps `p → -p` in the z pair.
pub fn branch_z_profile(rec: &SpectrumRecord, z: f64) -> Result<ZSample> {
    let mirrored = rec.qn.branch.p_flip();
    let zz = if mirrored { -z } else { z };
    let s = z_profile(rec.z_variant, rec.lambda, rec.p, rec.qn.big_n, zz)?;
    if !mirrored {
        return Ok(s);
    }
    Ok(ZSample {
        z1: OdeSample { value: s.z1.value, d1: -s.z1.d1, d2: s.z1.d2 },
        z2: -s.z2,
        dz2: s.dz2,
    })
}

/// `A = (ε ± p)/M` from the record's stored energy and momentum.
pub fn record_branch_coefficient(rec: &SpectrumRecord) -> f64 {
    (rec.eps + rec.qn.branch.sign() * rec.p) / rec.params.mass()
}

/// `f₁ … f₄` with their `r` and `z` partials.
pub fn assemble_jet(rec: &SpectrumRecord, r: f64, z: f64) -> Result<ComponentJet> {
    let zs = branch_z_profile(rec, z)?;
    let rs = radial_profile(rec.r_variant, rec.qn.twice_m, rec.params.strength(), rec.lambda, rec.qn.n, r)?;
    let a = record_branch_coefficient(rec);

    let f1 = zs.z1.value * rs.r1.value;
    let f2 = zs.z2 * rs.r2;
    let f1_r = zs.z1.value * rs.r1.d1;
    let f2_r = zs.z2 * rs.dr2;
    let f1_z = zs.z1.d1 * rs.r1.value;
    let f2_z = zs.dz2 * rs.r2;
    Ok(ComponentJet {
        f: [f1, f2, a * f1, a * f2],
        df_dr: [f1_r, f2_r, a * f1_r, a * f2_r],
        df_dz: [f1_z, f2_z, a * f1_z, a * f2_z],
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinorSample {
    pub at: SpacetimePoint,
    pub f: [Complex64; 4],
    /// `Ψ = e^{-iεt} e^{imφ} f / (√sin r · cos z)`.
    pub psi: [Complex64; 4],
}

fn stationary_phase(rec: &SpectrumRecord, at: SpacetimePoint) -> Complex64 {
    Complex64::from_polar(1.0, -rec.eps * at.t + rec.qn.twice_m.m() * at.phi)
}

pub fn assemble_spinor(rec: &SpectrumRecord, at: SpacetimePoint) -> Result<SpinorSample> {
    let jet = assemble_jet(rec, at.r, at.z)?;
    let factor = stationary_phase(rec, at) / (at.r.sin().sqrt() * at.z.cos());
    Ok(SpinorSample {
        at,
        f: jet.f,
        psi: jet.f.map(|f| f * factor),
    })
}

/// The reduced field `φ = e^{-iεt} e^{imφ} f` with all four partials.
pub fn reduced_field_jet(rec: &SpectrumRecord, at: SpacetimePoint) -> Result<SpacetimeJet> {
    let jet = assemble_jet(rec, at.r, at.z)?;
    let phase = stationary_phase(rec, at);
    let value = jet.f.map(|f| f * phase);
    Ok(SpacetimeJet {
        value,
        d_t: value.map(|v| v * Complex64::new(0.0, -rec.eps)),
        d_r: jet.df_dr.map(|f| f * phase),
        d_phi: value.map(|v| v * Complex64::new(0.0, rec.qn.twice_m.m())),
        d_z: jet.df_dz.map(|f| f * phase),
    })
}

/// `Ψ = φ / (√sin r · cos z)` with all four partials.
pub fn psi_jet(rec: &SpectrumRecord, at: SpacetimePoint) -> Result<SpacetimeJet> {
    Ok(substitute(&reduced_field_jet(rec, at)?, at))
}

/// Multiplies a reduced-field jet by `1/(√sin r · cos z)`, propagating derivatives.
pub fn substitute(phi: &SpacetimeJet, at: SpacetimePoint) -> SpacetimeJet {
    let (sr, cr) = at.r.sin_cos();
    let (sz, cz) = at.z.sin_cos();
    let g = 1.0 / (sr.sqrt() * cz);
    let dg_r = -0.5 * cr / sr * g;
    let dg_z = sz / cz * g;
    let zip = |d: &[Complex64; 4], dg: f64| -> [Complex64; 4] {
        std::array::from_fn(|k| d[k] * g + phi.value[k] * dg)
    };
    SpacetimeJet {
        value: phi.value.map(|v| v * g),
        d_t: phi.d_t.map(|v| v * g),
        d_r: zip(&phi.d_r, dg_r),
        d_phi: phi.d_phi.map(|v| v * g),
        d_z: zip(&phi.d_z, dg_z),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormReport {
    /// Integral on the finest level.
    pub value: f64,
    pub finite: bool,
    /// One value per refinement level, coarse to fine.
    pub ladder: Vec<f64>,
}

/// Relative change between the two finest levels below which the norm counts as converged.
pub const NORM_CONVERGENCE: f64 = 0.01;

/// `∫∫ |f₁|² + … + |f₄|² dr dz` for `f₁ = Z₁R₁`, `f₂ = Z₂R₂`, `f₃,₄ = A f₁,₂`,
/// on a ladder of dyadically refined midpoint rules. The tensor-product rule of
/// a separable integrand factorizes exactly into one-dimensional sums.
pub fn separable_norm_ladder<FZ, FR>(
    z_profiles: FZ,
    r_profiles: FR,
    branch_coefficient: f64,
    r_grid: &GridSpec,
    z_grid: &GridSpec,
) -> Result<NormReport>
where
    FZ: Fn(f64) -> Result<(Complex64, Complex64)>,
    FR: Fn(f64) -> Result<(f64, f64)>,
{
    let levels = r_grid.levels.min(z_grid.levels);
    if levels < 3 {
        return Err(Error::Usage(format!("normalizability needs at least 3 refinement levels, got {levels}")));
    }
    let mut ladder = Vec::with_capacity(levels);
    for level in 0..levels {
        let (mut z1, mut z2) = (0.0, 0.0);
        for z in z_grid.midpoints(level) {
            let (a, b) = z_profiles(z)?;
            z1 += a.norm_sqr();
            z2 += b.norm_sqr();
        }
        let hz = z_grid.cell_width(level);
        let (mut r1, mut r2) = (0.0, 0.0);
        for r in r_grid.midpoints(level) {
            let (a, b) = r_profiles(r)?;
            r1 += a * a;
            r2 += b * b;
        }
        let hr = r_grid.cell_width(level);
        let weight = 1.0 + branch_coefficient * branch_coefficient;
        ladder.push(weight * (z1 * r1 + z2 * r2) * hz * hr);
    }
    let fine = ladder[levels - 1];
    let coarse = ladder[levels - 2];
    let finite = fine.is_finite() && (fine - coarse).abs() <= NORM_CONVERGENCE * fine.abs();
    Ok(NormReport { value: fine, finite, ladder })
}

pub fn norm_integral(rec: &SpectrumRecord, r_grid: &GridSpec, z_grid: &GridSpec) -> Result<NormReport> {
    let b = rec.params.strength();
    separable_norm_ladder(
        |z| branch_z_profile(rec, z).map(|s| (s.z1.value, s.z2)),
        |r| radial_profile(rec.r_variant, rec.qn.twice_m, b, rec.lambda, rec.qn.n, r).map(|s| (s.r1.value, s.r2)),
        record_branch_coefficient(rec),
        r_grid,
        z_grid,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::separation::{radial_ode_residual, z_ode_residual};

    fn tm(v: i64) -> TwiceM {
        TwiceM::new(v).unwrap()
    }

    #[test]
    fn variant_four_ground_state_at_origin() {
        for lambda in [0.3, 1.0, 2.7] {
            let s = z_profile(ZVariant::V4, lambda, lambda + 0.5, 0, 0.0).unwrap();
            assert!((s.z1.value - 1.0).norm() < 1e-15);
            assert!((s.z2 - I).norm() < 1e-14);
        }
    }

    #[test]
    fn variant_three_ground_state_at_origin() {
        let s = z_profile(ZVariant::V3, 2.0, 1.5, 0, 0.0).unwrap();
        assert!((s.z1.value - 1.0).norm() < 1e-15);
    }

    #[test]
    fn z_profile_errors() {
        assert!(matches!(z_profile(ZVariant::V4, 0.0, 0.5, 0, 0.1), Err(Error::Degenerate(_))));
        assert!(matches!(z_profile(ZVariant::V4, 1.0, 1.5, 0, FRAC_PI_2), Err(Error::Singular(_))));
        // p off the variant-4 rule: series does not terminate
        assert!(matches!(z_profile(ZVariant::V4, 1.0, 1.7, 0, 0.1), Err(Error::Inconsistent(_))));
        // p on the rule but for a different N
        assert!(matches!(z_profile(ZVariant::V4, 1.0, 2.5, 0, 0.1), Err(Error::Inconsistent(_))));
    }

    #[test]
    fn exponent_bookkeeping() {
        let p = 1.37;
        let (a, c) = ZVariant::V3.exponents(p);
        assert!((a + c - (p + 0.5)).abs() < 1e-15 && (a - c - 0.5).abs() < 1e-15);
        let (a, c) = ZVariant::V4.exponents(p);
        assert!((a + c - (0.5 - p)).abs() < 1e-15 && (a - c + 0.5).abs() < 1e-15);
        assert!(ZVariant::V1.is_rejected() && ZVariant::V2.is_rejected());
        assert!(!ZVariant::V3.is_rejected() && !ZVariant::V4.is_rejected());
    }

    #[test]
    fn hypergeometric_argument_identity() {
        for z in [-1.5, -0.7, 0.0, 0.4, 1.55] {
            let lhs = Complex64::from_polar(1.0, z) / (2.0 * f64::cos(z));
            let rhs = Complex64::new(0.5, 0.5 * f64::tan(z));
            assert!((lhs - rhs).norm() <= 1e-14 * rhs.norm());
        }
    }

    #[test]
    fn radial_variant_one_example() {
        // m = 3/2, B = 2, n = 1: F(-1, 5, 3; 1/2) at r = π/2
        let s = radial_profile(RVariant::V1, tm(3), 2.0, 5f64.sqrt(), 1, FRAC_PI_2).unwrap();
        assert!((s.r1.value - 1.0 / 6.0).abs() < 1e-15);
        let (_, _, gamma) = radial_parameters(RVariant::V1, tm(3), 2.0, 5f64.sqrt());
        assert!((gamma - 3.0).abs() < 1e-15);
    }

    #[test]
    fn radial_profile_rejects_inadmissible_variant() {
        let err = radial_profile(RVariant::V1, tm(-1), 2.0, 5f64.sqrt(), 1, 1.0).unwrap_err();
        match err {
            Error::Inadmissible { variant, violated } => {
                assert_eq!(variant, 1);
                assert!(violated.contains("0 < m"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn radial_profile_vanishes_at_both_ends() {
        let cases = [
            (RVariant::V1, tm(3), 2.0, 2u32),
            (RVariant::V2, tm(3), 0.5, 1),
            (RVariant::V3, tm(1), 0.4, 1),
            (RVariant::V4, tm(-3), 1.0, 2),
        ];
        for (v, t, b, n) in cases {
            let lambda = spectra::lambda_of(v, t, b, n).unwrap();
            for r in [1e-6, PI - 1e-6] {
                let s = radial_profile(v, t, b, lambda, n, r).unwrap();
                assert!(s.r1.value.abs() < 1e-2, "{v:?} at {r}: {}", s.r1.value);
            }
        }
    }

    #[test]
    fn all_z_variants_solve_the_z_equation() {
        let lambda = 2.3;
        let cases = [
            (ZVariant::V3, lambda - 1.5, 1u32, lambda),
            (ZVariant::V4, lambda + 2.5, 2, lambda),
            (ZVariant::V1, 0.7, 2, 3.0),
            (ZVariant::V2, 0.7, 3, 3.0),
        ];
        for (v, p, n, lam) in cases {
            for k in 1..40 {
                let z = -FRAC_PI_2 + k as f64 * PI / 40.0;
                let s = z_profile(v, lam, p, n, z).unwrap();
                let res = z_ode_residual(&s.z1, z, p, lam).unwrap();
                let scale = s.z1.value.norm() + s.z1.d2.norm() + s.z1.value.norm() / z.cos().powi(2);
                assert!(res.norm() <= 1e-11 * scale.max(1.0), "{v:?} z={z} res={res}");
            }
        }
    }

    #[test]
    fn all_radial_variants_solve_the_radial_equation() {
        let cases = [
            (RVariant::V1, tm(3), 2.0, 3u32),
            (RVariant::V2, tm(3), 0.5, 2),
            (RVariant::V3, tm(1), 0.4, 2),
            (RVariant::V4, tm(-1), 2.0, 3),
        ];
        for (v, t, b, n) in cases {
            let lambda = spectra::lambda_of(v, t, b, n).unwrap();
            for k in 1..50 {
                let r = k as f64 * PI / 50.0;
                let s = radial_profile(v, t, b, lambda, n, r).unwrap();
                let res = radial_ode_residual(&s.r1, r, t, b, lambda).unwrap();
                let scale = s.r1.d2.abs() + s.r1.value.abs() / r.sin().powi(2);
                assert!(res.abs() <= 1e-11 * scale.max(1.0), "{v:?} r={r} res={res}");
            }
        }
    }

    #[test]
    fn norm_is_quadratic_in_amplitude() {
        let rg = GridSpec::radial(64, 3);
        let zg = GridSpec::polar(64, 3);
        let z = |z: f64| Ok((Complex64::new(z.cos(), 0.0), Complex64::new(0.0, z.cos().powi(2))));
        let r = |r: f64| Ok((r.sin(), r.sin() * r.cos()));
        let base = separable_norm_ladder(z, r, 0.7, &rg, &zg).unwrap();
        let doubled = separable_norm_ladder(|x| z(x).map(|(a, b)| (a * 2.0, b * 2.0)), r, 0.7, &rg, &zg).unwrap();
        assert!((doubled.value - 4.0 * base.value).abs() < 1e-12 * base.value);
        assert!(base.finite);
    }

    #[test]
    fn norm_needs_three_levels() {
        let rg = GridSpec::radial(64, 2);
        let zg = GridSpec::polar(64, 2);
        let res = separable_norm_ladder(|_| Ok((I, I)), |_| Ok((1.0, 1.0)), 0.0, &rg, &zg);
        assert!(matches!(res, Err(Error::Usage(_))));
    }
}
