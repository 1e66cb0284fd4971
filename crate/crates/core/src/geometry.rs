//! Cylindric coordinates on the unit 3-sphere: embedding, metric, tetrad and
//! connection coefficients.
//!
//! Coordinate order is `(t, r, φ, z)`; spatial ranges are `r ∈ [0, π]`,
//! `z ∈ [-π/2, π/2]`, `φ ∈ [0, 2π)`. The curvature radius is 1.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::Serialize;

use crate::error::{Error, Result};

pub const T: usize = 0;
pub const R: usize = 1;
pub const PHI: usize = 2;
pub const Z: usize = 3;

/// Minkowski signature `(+, -, -, -)`.
pub const ETA: [f64; 4] = [1.0, -1.0, -1.0, -1.0];

pub type Rank3 = [[[f64; 4]; 4]; 4];

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Point {
    pub r: f64,
    pub z: f64,
    pub phi: f64,
}

impl Point {
    pub fn new(r: f64, z: f64, phi: f64) -> Result<Self> {
        if !(0.0..=PI).contains(&r) {
            return Err(Error::Domain(format!("r = {r} outside [0, pi]")));
        }
        if !(-FRAC_PI_2..=FRAC_PI_2).contains(&z) {
            return Err(Error::Domain(format!("z = {z} outside [-pi/2, pi/2]")));
        }
        if !(0.0..2.0 * PI).contains(&phi) {
            return Err(Error::Domain(format!("phi = {phi} outside [0, 2pi)")));
        }
        Ok(Self { r, z, phi })
    }

    /// `r ∈ {0, π}` or `z = ±π/2`, where the cylindric chart degenerates.
    pub fn is_boundary(&self) -> bool {
        self.r == 0.0 || self.r == PI || self.z.abs() == FRAC_PI_2
    }
}

/// Embedding `(u0, u1, u2, u3)` into the unit sphere of 4-space.
pub fn embed(p: &Point) -> [f64; 4] {
    let (sr, cr) = p.r.sin_cos();
    let (sz, cz) = p.z.sin_cos();
    let (sp, cp) = p.phi.sin_cos();
    [cz * cr, cz * sr * cp, cz * sr * sp, sz]
}

/// Diagonal of `g_αβ` at `(r, z)`.
pub fn metric_diag(r: f64, z: f64) -> [f64; 4] {
    let cz = z.cos();
    let sr = r.sin();
    [1.0, -cz * cz, -cz * cz * sr * sr, -1.0]
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChristoffelEntry {
    pub upper: usize,
    pub lower: (usize, usize),
    pub value: f64,
}

/// The independent nonzero Ricci rotation coefficients; the remaining
/// nonzero ones follow from antisymmetry in the first index pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RicciRotation {
    pub g122: f64,
    pub g311: f64,
    pub g322: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrameData {
    pub metric: [f64; 4],
    /// `tetrad[a][β] = e_(a)^β`.
    pub tetrad: [[f64; 4]; 4],
    /// Nonzero `Γ^a_bc`, both orderings of the lower pair listed.
    pub christoffel: Vec<ChristoffelEntry>,
    pub ricci_rot: RicciRotation,
}

impl FrameData {
    pub fn christoffel_dense(&self) -> Rank3 {
        let mut out = [[[0.0; 4]; 4]; 4];
        for e in &self.christoffel {
            out[e.upper][e.lower.0][e.lower.1] = e.value;
        }
        out
    }

    /// `γ_abc` as a dense array, antisymmetric in `(a, b)`.
    pub fn ricci_rotation_dense(&self) -> Rank3 {
        let mut out = [[[0.0; 4]; 4]; 4];
        let rr = &self.ricci_rot;
        for (a, b, c, v) in [(1, 2, 2, rr.g122), (3, 1, 1, rr.g311), (3, 2, 2, rr.g322)] {
            out[a][b][c] = v;
            out[b][a][c] = -v;
        }
        out
    }

    /// Largest `|e_(a)^α e_(b)^β g_αβ - η_ab|`.
    pub fn orthonormality_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for a in 0..4 {
            for b in 0..4 {
                let s: f64 = (0..4)
                    .map(|k| self.tetrad[a][k] * self.tetrad[b][k] * self.metric[k])
                    .sum();
                let eta = if a == b { ETA[a] } else { 0.0 };
                worst = worst.max((s - eta).abs());
            }
        }
        worst
    }
}

fn require_interior(r: f64, z: f64) -> Result<()> {
    if r.sin() == 0.0 || r <= 0.0 || r >= PI {
        return Err(Error::SingularFrame { factor: "sin r" });
    }
    if z.abs() >= FRAC_PI_2 {
        return Err(Error::SingularFrame { factor: "cos z" });
    }
    Ok(())
}

pub fn frame_at(p: &Point) -> Result<FrameData> {
    require_interior(p.r, p.z)?;
    let (sr, cr) = p.r.sin_cos();
    let (sz, cz) = p.z.sin_cos();
    let tz = sz / cz;
    let cot = cr / sr;

    let mut tetrad = [[0.0; 4]; 4];
    tetrad[0][T] = 1.0;
    tetrad[1][R] = 1.0 / cz;
    tetrad[2][PHI] = 1.0 / (cz * sr);
    tetrad[3][Z] = 1.0;

    let mut christoffel = Vec::with_capacity(10);
    let mut push = |upper, b, c, value| {
        christoffel.push(ChristoffelEntry { upper, lower: (b, c), value });
        if b != c {
            christoffel.push(ChristoffelEntry { upper, lower: (c, b), value });
        }
    };
    push(R, R, Z, -tz);
    push(R, PHI, PHI, -sr * cr);
    push(PHI, R, PHI, cot);
    push(PHI, PHI, Z, -tz);
    push(Z, R, R, sz * cz);
    push(Z, PHI, PHI, sz * cz * sr * sr);

    Ok(FrameData {
        metric: metric_diag(p.r, p.z),
        tetrad,
        christoffel,
        ricci_rot: RicciRotation {
            g122: 1.0 / (cz * (sr / cr)),
            g311: -tz,
            g322: -tz,
        },
    })
}

fn metric_derivatives(r: f64, z: f64, h: f64) -> [[f64; 4]; 4] {
    // d[k][i] = ∂_k g_ii; the metric depends on r and z only
    let mut d = [[0.0; 4]; 4];
    let (rp, rm) = (metric_diag(r + h, z), metric_diag(r - h, z));
    let (zp, zm) = (metric_diag(r, z + h), metric_diag(r, z - h));
    for i in 0..4 {
        d[R][i] = (rp[i] - rm[i]) / (2.0 * h);
        d[Z][i] = (zp[i] - zm[i]) / (2.0 * h);
    }
    d
}

/// `Γ^a_bc` from centered differences of the metric with step `h`.
pub fn christoffel_fd(r: f64, z: f64, h: f64) -> Rank3 {
    let g = metric_diag(r, z);
    let dg = metric_derivatives(r, z, h);
    let mut out = [[[0.0; 4]; 4]; 4];
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                let mut s = 0.0;
                if a == c {
                    s += dg[b][a];
                }
                if a == b {
                    s += dg[c][a];
                }
                if b == c {
                    s -= dg[a][b];
                }
                out[a][b][c] = 0.5 * s / g[a];
            }
        }
    }
    out
}

fn lowered_tetrad(r: f64, z: f64) -> [[f64; 4]; 4] {
    // e_(a)β = g_βν e_(a)^ν
    let g = metric_diag(r, z);
    let cz = z.cos();
    let sr = r.sin();
    let up = [1.0, 1.0 / cz, 1.0 / (cz * sr), 1.0];
    let mut out = [[0.0; 4]; 4];
    for a in 0..4 {
        out[a][a] = g[a] * up[a];
    }
    out
}

/// `γ_abc = -e_(a)β;α e_(b)^β e_(c)^α`, with the tetrad gradient and the
/// connection both taken from centered differences of step `h`.
pub fn ricci_rotation_fd(r: f64, z: f64, h: f64) -> Result<Rank3> {
    let frame = frame_at(&Point { r, z, phi: 0.0 })?;
    let gamma = christoffel_fd(r, z, h);
    let low = lowered_tetrad(r, z);
    let (rp, rm) = (lowered_tetrad(r + h, z), lowered_tetrad(r - h, z));
    let (zp, zm) = (lowered_tetrad(r, z + h), lowered_tetrad(r, z - h));

    // cov[a][β][α] = ∂_α e_(a)β - Γ^ν_αβ e_(a)ν
    let mut cov = [[[0.0; 4]; 4]; 4];
    for a in 0..4 {
        for beta in 0..4 {
            for alpha in 0..4 {
                let partial = match alpha {
                    R => (rp[a][beta] - rm[a][beta]) / (2.0 * h),
                    Z => (zp[a][beta] - zm[a][beta]) / (2.0 * h),
                    _ => 0.0,
                };
                let conn: f64 = (0..4).map(|nu| gamma[nu][alpha][beta] * low[a][nu]).sum();
                cov[a][beta][alpha] = partial - conn;
            }
        }
    }

    let e = &frame.tetrad;
    let mut out = [[[0.0; 4]; 4]; 4];
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                let mut s = 0.0;
                for beta in 0..4 {
                    for alpha in 0..4 {
                        s += cov[a][beta][alpha] * e[b][beta] * e[c][alpha];
                    }
                }
                out[a][b][c] = -s;
            }
        }
    }
    Ok(out)
}

/// Largest componentwise difference of two rank-3 arrays.
pub fn max_abs_diff(a: &Rank3, b: &Rank3) -> f64 {
    a.iter()
        .flatten()
        .flatten()
        .zip(b.iter().flatten().flatten())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::FRAC_PI_4;

    fn interior() -> impl Strategy<Value = (f64, f64)> {
        (0.05f64..PI - 0.05, -FRAC_PI_2 + 0.05..FRAC_PI_2 - 0.05)
    }

    #[test]
    fn equator_embeds_on_u1_axis() {
        let u = embed(&Point::new(FRAC_PI_2, 0.0, 0.0).unwrap());
        let expected = [0.0, 1.0, 0.0, 0.0];
        for (a, b) in u.iter().zip(expected) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn pole_embeds_on_u3_axis_for_any_phi() {
        for phi in [0.0, 1.0, 4.0] {
            let u = embed(&Point::new(0.0, FRAC_PI_2, phi).unwrap());
            assert!(u[0].abs() < 1e-15 && u[1].abs() < 1e-15 && u[2].abs() < 1e-15);
            assert_eq!(u[3], 1.0);
        }
    }

    #[test]
    fn out_of_range_coordinates_are_domain_errors() {
        assert!(matches!(Point::new(-0.1, 0.0, 0.0), Err(Error::Domain(_))));
        assert!(matches!(Point::new(1.0, 1.6, 0.0), Err(Error::Domain(_))));
        assert!(matches!(Point::new(1.0, 0.0, 2.0 * PI), Err(Error::Domain(_))));
    }

    #[test]
    fn boundary_points_are_flagged_and_rejected() {
        let p = Point::new(0.0, 0.3, 0.0).unwrap();
        assert!(p.is_boundary());
        assert_eq!(frame_at(&p), Err(Error::SingularFrame { factor: "sin r" }));
        let q = Point::new(1.0, -FRAC_PI_2, 0.0).unwrap();
        assert_eq!(frame_at(&q), Err(Error::SingularFrame { factor: "cos z" }));
        assert!(!Point::new(1.0, 0.2, 0.0).unwrap().is_boundary());
    }

    #[test]
    fn equatorial_frame_values() {
        let f = frame_at(&Point::new(FRAC_PI_2, 0.0, 0.0).unwrap()).unwrap();
        assert!((f.tetrad[2][PHI] - 1.0).abs() < 1e-15);
        assert_eq!(f.metric, [1.0, -1.0, -1.0, -1.0]);
    }

    #[test]
    fn ricci_rotation_at_quarter_turn() {
        let f = frame_at(&Point::new(FRAC_PI_4, 0.0, 0.0).unwrap()).unwrap();
        assert!((f.ricci_rot.g122 - 1.0).abs() < 1e-15);
        assert_eq!(f.ricci_rot.g311, 0.0);
    }

    #[test]
    fn gamma_z_rr_vanishes_on_equatorial_slice() {
        let f = frame_at(&Point::new(PI / 3.0, 0.0, 0.0).unwrap()).unwrap();
        assert_eq!(f.christoffel_dense()[Z][R][R], 0.0);
    }

    proptest! {
        #[test]
        fn embedding_lies_on_unit_sphere(r in 0.0..=PI, z in -FRAC_PI_2..=FRAC_PI_2, phi in 0.0..2.0 * PI) {
            let u = embed(&Point::new(r, z, phi).unwrap());
            prop_assert!((u.iter().map(|x| x * x).sum::<f64>() - 1.0).abs() < 1e-14);
        }

        #[test]
        fn tetrad_is_orthonormal((r, z) in interior()) {
            let f = frame_at(&Point { r, z, phi: 0.0 }).unwrap();
            prop_assert!(f.orthonormality_defect() < 1e-12);
        }

        #[test]
        fn christoffel_matches_finite_differences((r, z) in interior()) {
            let f = frame_at(&Point { r, z, phi: 0.0 }).unwrap();
            let d = max_abs_diff(&f.christoffel_dense(), &christoffel_fd(r, z, 1e-5));
            prop_assert!(d < 1e-6, "difference {}", d);
        }

        #[test]
        fn ricci_rotation_matches_tetrad_connection((r, z) in interior()) {
            let f = frame_at(&Point { r, z, phi: 0.0 }).unwrap();
            let d = max_abs_diff(&f.ricci_rotation_dense(), &ricci_rotation_fd(r, z, 1e-5).unwrap());
            prop_assert!(d < 1e-6, "difference {}", d);
        }

        #[test]
        fn z_parity((r, z) in interior()) {
            let a = frame_at(&Point { r, z, phi: 0.0 }).unwrap();
            let b = frame_at(&Point { r, z: -z, phi: 0.0 }).unwrap();
            prop_assert_eq!(a.metric, b.metric);
            prop_assert_eq!(a.ricci_rot.g311, -b.ricci_rot.g311);
            prop_assert_eq!(a.ricci_rot.g322, -b.ricci_rot.g322);
        }
    }
}
