//! The homogeneous-field analogue `A_φ = B(cos r - 1)` and the azimuthal
//! coupling `μ(r)` it induces in the separated Dirac system.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Twice the azimuthal quantum number. Only odd values exist, so `m` is
/// always half-integer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "i64", into = "i64")]
pub struct TwiceM(i64);

impl TwiceM {
    pub fn new(twice_m: i64) -> Result<Self> {
        if twice_m.rem_euclid(2) == 0 {
            return Err(Error::EvenTwiceM(twice_m));
        }
        Ok(Self(twice_m))
    }

    pub fn get(self) -> i64 {
        self.0
    }

    pub fn m(self) -> f64 {
        self.0 as f64 / 2.0
    }
}

impl TryFrom<i64> for TwiceM {
    type Error = Error;

    fn try_from(v: i64) -> Result<Self> {
        Self::new(v)
    }
}

impl From<TwiceM> for i64 {
    fn from(v: TwiceM) -> i64 {
        v.0
    }
}

/// Dimensionless field strength `B` (charge absorbed) and mass `M`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldParams {
    #[serde(rename = "B")]
    strength: f64,
    #[serde(rename = "M")]
    mass: f64,
}

impl FieldParams {
    pub fn new(strength: f64, mass: f64) -> Result<Self> {
        if !(strength.is_finite() && strength > 0.0) {
            return Err(Error::Domain(format!("field strength B = {strength} must be > 0")));
        }
        if !(mass.is_finite() && mass > 0.0) {
            return Err(Error::Domain(format!("mass M = {mass} must be > 0")));
        }
        Ok(Self { strength, mass })
    }

    pub fn strength(&self) -> f64 {
        self.strength
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }
}

fn check_angle(r: f64) -> Result<()> {
    if !(0.0..=PI).contains(&r) {
        return Err(Error::Domain(format!("r = {r} outside [0, pi]")));
    }
    Ok(())
}

fn check_strength(b: f64) -> Result<()> {
    if !b.is_finite() {
        return Err(Error::Domain(format!("field strength B = {b} is not finite")));
    }
    Ok(())
}

/// `(A_φ, F_rφ)` at polar angle `r`.
pub fn gauge_at(r: f64, b: f64) -> Result<(f64, f64)> {
    check_angle(r)?;
    check_strength(b)?;
    Ok((b * (r.cos() - 1.0), -b * r.sin()))
}

fn require_open(r: f64) -> Result<()> {
    check_angle(r)?;
    if r <= 0.0 || r >= PI || r.sin() == 0.0 {
        return Err(Error::Singular(format!("mu(r) diverges at r = {r}")));
    }
    Ok(())
}

/// `μ(r) = [m + B(cos r - 1)] / sin r`.
///
/// This is the coefficient of `-γ²` after the `e^{imφ}` ansatz, since
/// `i∂_φ → -m`.
pub fn mu(r: f64, twice_m: TwiceM, b: f64) -> Result<f64> {
    require_open(r)?;
    check_strength(b)?;
    let (s, c) = r.sin_cos();
    Ok((twice_m.m() + b * (c - 1.0)) / s)
}

/// `dμ/dr = [B(cos r - 1) - m cos r] / sin² r`.
pub fn mu_derivative(r: f64, twice_m: TwiceM, b: f64) -> Result<f64> {
    require_open(r)?;
    check_strength(b)?;
    let (s, c) = r.sin_cos();
    Ok((b * (c - 1.0) - twice_m.m() * c) / (s * s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::FRAC_PI_2;

    fn tm(v: i64) -> TwiceM {
        TwiceM::new(v).unwrap()
    }

    #[test]
    fn even_twice_m_is_rejected() {
        assert_eq!(TwiceM::new(2), Err(Error::EvenTwiceM(2)));
        assert_eq!(TwiceM::new(0), Err(Error::EvenTwiceM(0)));
        assert_eq!(TwiceM::new(-4), Err(Error::EvenTwiceM(-4)));
        assert_eq!(tm(-3).m(), -1.5);
    }

    #[test]
    fn params_require_positive_strength_and_mass() {
        assert!(FieldParams::new(0.0, 1.0).is_err());
        assert!(FieldParams::new(1.0, 0.0).is_err());
        assert!(FieldParams::new(f64::NAN, 1.0).is_err());
        assert!(FieldParams::new(2.0, 1.0).is_ok());
    }

    #[test]
    fn gauge_values() {
        assert_eq!(gauge_at(0.0, 2.0).unwrap().0, 0.0);
        let (a, f) = gauge_at(FRAC_PI_2, 2.0).unwrap();
        assert!((a + 2.0).abs() < 1e-15);
        assert!((f + 2.0).abs() < 1e-15);
        assert_eq!(gauge_at(PI, 1.5).unwrap().0, -3.0);
        assert!(gauge_at(3.5, 1.0).is_err());
    }

    #[test]
    fn mu_values() {
        assert!((mu(FRAC_PI_2, tm(1), 0.0).unwrap() - 0.5).abs() < 1e-15);
        assert!((mu(FRAC_PI_2, tm(1), 1.0).unwrap() + 0.5).abs() < 1e-15);
        let expected = 0.5 / (3f64.sqrt() / 2.0);
        assert!((mu(PI / 3.0, tm(3), 2.0).unwrap() - expected).abs() < 1e-14);
    }

    #[test]
    fn mu_is_singular_at_the_poles() {
        assert!(matches!(mu(0.0, tm(1), 1.0), Err(Error::Singular(_))));
        assert!(matches!(mu(PI, tm(1), 1.0), Err(Error::Singular(_))));
    }

    proptest! {
        #[test]
        fn mu_identity(r in 1e-3f64..PI - 1e-3, k in -5i64..5, b in 0.0f64..6.0) {
            let t = tm(2 * k + 1);
            let value = mu(r, t, b).unwrap();
            prop_assert!((value * r.sin() - b * (r.cos() - 1.0) - t.m()).abs() < 1e-13);
            let zero_field = mu(r, t, 0.0).unwrap();
            prop_assert!((zero_field - t.m() / r.sin()).abs() <= 1e-15 * zero_field.abs().max(1.0));
        }

        #[test]
        fn mu_derivative_matches_finite_difference(r in 0.1f64..PI - 0.1, k in -4i64..4, b in 0.0f64..4.0) {
            let t = tm(2 * k + 1);
            let h = 1e-6;
            let fd = (mu(r + h, t, b).unwrap() - mu(r - h, t, b).unwrap()) / (2.0 * h);
            let d = mu_derivative(r, t, b).unwrap();
            prop_assert!((fd - d).abs() <= 1e-6 * (1.0 + d.abs()));
        }
    }
}
