//! Quantization rules, admissibility gates, state enumeration and the
//! vanishing-curvature scan.
//!
//! Everything here is closed-form arithmetic: no root finding.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{FieldParams, TwiceM};
use crate::oracle::GridSpec;
use crate::separation::BranchChoice;
use crate::wavefunctions::{self, NormReport, RVariant, ZVariant};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuantumNumbers {
    pub twice_m: TwiceM,
    /// Radial index.
    pub n: u32,
    /// z index.
    #[serde(rename = "N")]
    pub big_n: u32,
    pub branch: BranchChoice,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumRecord {
    pub r_variant: RVariant,
    pub z_variant: ZVariant,
    pub qn: QuantumNumbers,
    pub params: FieldParams,
    pub lambda: f64,
    pub p: f64,
    pub eps: f64,
    pub admissible: bool,
    pub normalizable: bool,
    pub rejected_variant: bool,
}

impl SpectrumRecord {
    /// Closes the quantization rules for one lattice point. The record starts
    /// unclassified (`normalizable = false`); see [`SpectrumRecord::classify`].
    pub fn resolve(params: FieldParams, r_variant: RVariant, z_variant: ZVariant, qn: QuantumNumbers) -> Result<Self> {
        let lambda = lambda_of(r_variant, qn.twice_m, params.strength(), qn.n)?;
        let p = p_of(z_variant, lambda, qn.big_n)?;
        let (eps, _) = energy(p, params.mass())?;
        Ok(Self {
            r_variant,
            z_variant,
            qn,
            params,
            lambda,
            p,
            eps,
            admissible: true,
            normalizable: false,
            rejected_variant: z_variant.is_rejected(),
        })
    }

    pub fn classify(&mut self, ladder: &NormLadder) -> Result<NormReport> {
        let report = wavefunctions::norm_integral(self, &ladder.r_grid, &ladder.z_grid)?;
        self.normalizable = report.finite;
        Ok(report)
    }

    /// Canonical order: `(|ε|, r_variant, z_variant, n, N, twice_m, branch)`.
    pub fn canonical_cmp(&self, other: &Self) -> Ordering {
        self.eps
            .abs()
            .total_cmp(&other.eps.abs())
            .then(self.r_variant.cmp(&other.r_variant))
            .then(self.z_variant.cmp(&other.z_variant))
            .then(self.qn.n.cmp(&other.qn.n))
            .then(self.qn.big_n.cmp(&other.qn.big_n))
            .then(self.qn.twice_m.cmp(&other.qn.twice_m))
            .then(self.qn.branch.cmp(&other.qn.branch))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Admissibility {
    pub ok: bool,
    /// The printed inequalities that fail, in order.
    pub violated: Vec<&'static str>,
}

/// Positivity of both radial exponents, in the form of the printed inequalities.
pub fn admissible(v: RVariant, twice_m: TwiceM, b: f64) -> Admissibility {
    let m = twice_m.m();
    let checks: &[(&'static str, bool)] = match v {
        RVariant::V1 => &[("0 < m", m > 0.0), ("m < 2B", m < 2.0 * b)],
        RVariant::V2 => &[("m > 0", m > 0.0), ("m > 2B - 1", m > 2.0 * b - 1.0)],
        RVariant::V3 => &[
            ("m < 1", m < 1.0),
            ("m > 2B - 1", m > 2.0 * b - 1.0),
            ("0 < B < 1", b > 0.0 && b < 1.0),
        ],
        RVariant::V4 => &[("m < 1", m < 1.0), ("m < 2B", m < 2.0 * b), ("m < B + 1/2", m < b + 0.5)],
    };
    let violated: Vec<_> = checks.iter().filter(|(_, ok)| !ok).map(|(s, _)| *s).collect();
    Admissibility { ok: violated.is_empty(), violated }
}

/// `λ²` from the radial quantization rule; may be zero or negative.
pub fn lambda_squared(v: RVariant, twice_m: TwiceM, b: f64, n: u32) -> f64 {
    let m = twice_m.m();
    let n = n as f64;
    match v {
        RVariant::V1 => 2.0 * b * n + n * n,
        RVariant::V2 => {
            let k = n + m + 0.5;
            k * k - 2.0 * b * k
        }
        RVariant::V3 => {
            let k = n + 1.0;
            k * k - 2.0 * b * k
        }
        RVariant::V4 => {
            let k = n - m + 0.5;
            k * k + 2.0 * b * k
        }
    }
}

pub fn lambda_of(v: RVariant, twice_m: TwiceM, b: f64, n: u32) -> Result<f64> {
    let gate = admissible(v, twice_m, b);
    if !gate.ok {
        return Err(Error::Inadmissible {
            variant: v.index(),
            violated: gate.violated.join(", "),
        });
    }
    let l2 = lambda_squared(v, twice_m, b, n);
    let tol = 1e-12 * (1.0 + b * b + (n as f64).powi(2) + twice_m.m().powi(2));
    if l2 > tol {
        return Ok(l2.sqrt());
    }
    match v {
        RVariant::V2 => Err(Error::NonPositiveLambdaSquared { inequality: "n + m + 1/2 > 2B", value: l2 }),
        RVariant::V3 => Err(Error::NonPositiveLambdaSquared { inequality: "n + 1 > 2B", value: l2 }),
        RVariant::V1 | RVariant::V4 => Err(Error::Degenerate(format!(
            "radial variant {} with n = {n} gives lambda = 0",
            v.index()
        ))),
    }
}

/// `p` from the z quantization rule of variants 3 and 4.
pub fn p_of(v: ZVariant, lambda: f64, big_n: u32) -> Result<f64> {
    if !(lambda > 0.0) {
        return Err(Error::Degenerate(format!("lambda = {lambda} must be > 0")));
    }
    let shift = big_n as f64 + 0.5;
    match v {
        ZVariant::V1 | ZVariant::V2 => Err(Error::RejectedVariant(v.index())),
        ZVariant::V3 => {
            let p = lambda - shift;
            if p > 0.0 {
                Ok(p)
            } else {
                Err(Error::OutOfTower { p })
            }
        }
        ZVariant::V4 => Ok(lambda + shift),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RejectedLambda {
    pub lambda: f64,
    pub rejected: bool,
    pub degenerate: bool,
}

/// The `λ` towers of z-variants 1 and 2, which conflict with radial quantization.
pub fn rejected_z_spectra(v: ZVariant, big_n: u32) -> Result<RejectedLambda> {
    let lambda = match v {
        ZVariant::V1 => 1.0 + big_n as f64,
        ZVariant::V2 => big_n as f64,
        other => {
            return Err(Error::Domain(format!(
                "z-variant {} quantizes p, not lambda",
                other.index()
            )))
        }
    };
    Ok(RejectedLambda {
        lambda,
        rejected: true,
        degenerate: lambda == 0.0,
    })
}

/// `(+ε, -ε)` with `ε = √(M² + p²)`.
pub fn energy(p: f64, mass: f64) -> Result<(f64, f64)> {
    if !(p > 0.0) {
        return Err(Error::Domain(format!("p = {p} must be > 0")));
    }
    if !(mass > 0.0) {
        return Err(Error::Domain(format!("mass M = {mass} must be > 0")));
    }
    let eps = mass.hypot(p);
    Ok((eps, -eps))
}

/// Quadrature grids used to classify normalizability.
#[derive(Debug, Clone, PartialEq)]
pub struct NormLadder {
    pub r_grid: GridSpec,
    pub z_grid: GridSpec,
}

impl Default for NormLadder {
    fn default() -> Self {
        Self {
            r_grid: GridSpec::radial(128, 4),
            z_grid: GridSpec::polar(128, 4),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnumerateOptions {
    pub r_variants: Vec<RVariant>,
    pub z_variants: Vec<ZVariant>,
    /// Emit one record per branch instead of one per `|ε|`.
    pub expand_branches: bool,
    pub ladder: NormLadder,
}

impl Default for EnumerateOptions {
    fn default() -> Self {
        Self {
            r_variants: RVariant::ALL.to_vec(),
            z_variants: vec![ZVariant::V3, ZVariant::V4],
            expand_branches: false,
            ladder: NormLadder::default(),
        }
    }
}

/// All admissible lattice points with `λ > 0`, `p > 0`, unclassified and in
/// canonical order.
pub fn enumerate_candidates(
    params: FieldParams,
    twice_ms: &[TwiceM],
    n_max: u32,
    big_n_max: u32,
    opts: &EnumerateOptions,
) -> Result<Vec<SpectrumRecord>> {
    if twice_ms.is_empty() {
        return Err(Error::Usage("at least one twice_m value is required".into()));
    }
    if let Some(v) = opts.z_variants.iter().find(|v| v.is_rejected()) {
        return Err(Error::RejectedVariant(v.index()));
    }
    let branches: &[BranchChoice] = if opts.expand_branches {
        &[BranchChoice::Plus, BranchChoice::Minus]
    } else {
        &[BranchChoice::Plus]
    };
    let ms: BTreeSet<TwiceM> = twice_ms.iter().copied().collect();
    let rvs: BTreeSet<RVariant> = opts.r_variants.iter().copied().collect();
    let zvs: BTreeSet<ZVariant> = opts.z_variants.iter().copied().collect();

    let mut out = Vec::new();
    for &twice_m in &ms {
        for &rv in &rvs {
            if !admissible(rv, twice_m, params.strength()).ok {
                continue;
            }
            for n in 0..=n_max {
                let Ok(lambda) = lambda_of(rv, twice_m, params.strength(), n) else {
                    continue;
                };
                for &zv in &zvs {
                    for big_n in 0..=big_n_max {
                        if p_of(zv, lambda, big_n).is_err() {
                            continue;
                        }
                        for &branch in branches {
                            let qn = QuantumNumbers { twice_m, n, big_n, branch };
                            out.push(SpectrumRecord::resolve(params, rv, zv, qn)?);
                        }
                    }
                }
            }
        }
    }
    out.sort_by(SpectrumRecord::canonical_cmp);
    Ok(out)
}

/// [`enumerate_candidates`] followed by normalizability classification.
pub fn enumerate_states(
    params: FieldParams,
    twice_ms: &[TwiceM],
    n_max: u32,
    big_n_max: u32,
    opts: &EnumerateOptions,
) -> Result<Vec<SpectrumRecord>> {
    let mut records = enumerate_candidates(params, twice_ms, n_max, big_n_max, opts)?;
    for rec in &mut records {
        rec.classify(&opts.ladder)?;
    }
    Ok(records)
}

#[derive(Debug, Clone, PartialEq)]
pub struct FlatLimitEntry {
    pub rho: f64,
    /// `p²/ρ²` with `B = bρ²`, or why the configuration fails at this radius.
    pub value: Result<f64>,
}

/// Physical momentum squared `p²/ρ²` along a sequence of curvature radii.
pub fn flat_limit_scan(
    b: f64,
    twice_m: TwiceM,
    r_variant: RVariant,
    z_variant: ZVariant,
    n: u32,
    big_n: u32,
    rhos: &[f64],
) -> Vec<FlatLimitEntry> {
    rhos.iter()
        .map(|&rho| {
            let value = if !(rho > 0.0 && rho.is_finite()) {
                Err(Error::Domain(format!("rho = {rho} must be > 0")))
            } else {
                lambda_of(r_variant, twice_m, b * rho * rho, n)
                    .and_then(|lambda| p_of(z_variant, lambda, big_n))
                    .map(|p| p * p / (rho * rho))
            };
            FlatLimitEntry { rho, value }
        })
        .collect()
}

/// Radial variants admissible at radius `ρ` for physical field `b`.
pub fn surviving_variants(b: f64, twice_m: TwiceM, rho: f64) -> Vec<RVariant> {
    RVariant::ALL
        .into_iter()
        .filter(|&v| admissible(v, twice_m, b * rho * rho).ok)
        .collect()
}

/// Leading term of `λ²/ρ²` as `ρ → ∞`, read off the closed forms; `None` for
/// the variants whose admissibility window closes.
pub fn closed_form_flat_limit(b: f64, twice_m: TwiceM, r_variant: RVariant, n: u32) -> Option<f64> {
    match r_variant {
        RVariant::V1 => Some(2.0 * b * n as f64),
        RVariant::V4 => Some(2.0 * b * (n as f64 - twice_m.m() + 0.5)),
        RVariant::V2 | RVariant::V3 => None,
    }
}
