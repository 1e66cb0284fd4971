//! Terminating Gauss hypergeometric series.
//!
//! Every closed-form profile in this crate is a polynomial `F(α, β, γ; x)`
//! with `α` or `β` a nonpositive integer, so evaluation is an exact finite
//! sum. Non-terminating parameters are rejected.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Distance from an integer below which a parameter is snapped to it.
pub const INTEGER_TOLERANCE: f64 = 1e-9;

fn as_nonpositive_integer(x: f64) -> Option<u32> {
    let rounded = x.round();
    if rounded <= 0.0 && (x - rounded).abs() <= INTEGER_TOLERANCE {
        Some((-rounded) as u32)
    } else {
        None
    }
}

/// Coefficients `c_k = (α)_k (β)_k / ((γ)_k k!)` of a terminating series.
#[derive(Debug, Clone, PartialEq)]
pub struct TerminatingSeries {
    alpha: f64,
    beta: f64,
    gamma: f64,
    coefficients: Vec<f64>,
}

impl TerminatingSeries {
    pub fn new(alpha: f64, beta: f64, gamma: f64) -> Result<Self> {
        let (degree, alpha, beta) = match (as_nonpositive_integer(alpha), as_nonpositive_integer(beta)) {
            (Some(a), Some(b)) if a <= b => (a, -(a as f64), beta),
            (Some(_), Some(b)) => (b, alpha, -(b as f64)),
            (Some(a), None) => (a, -(a as f64), beta),
            (None, Some(b)) => (b, alpha, -(b as f64)),
            (None, None) => return Err(Error::NonTerminating { alpha, beta }),
        };
        if let Some(g) = as_nonpositive_integer(gamma) {
            if g < degree {
                return Err(Error::GammaPole { gamma, degree });
            }
        }

        let mut coefficients = Vec::with_capacity(degree as usize + 1);
        let mut c = 1.0;
        coefficients.push(c);
        for k in 0..degree {
            let k = k as f64;
            c *= (alpha + k) * (beta + k) / ((gamma + k) * (k + 1.0));
            coefficients.push(c);
        }
        Ok(Self {
            alpha,
            beta,
            gamma,
            coefficients,
        })
    }

    pub fn degree(&self) -> u32 {
        (self.coefficients.len() - 1) as u32
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn parameters(&self) -> (f64, f64, f64) {
        (self.alpha, self.beta, self.gamma)
    }

    pub fn eval(&self, x: Complex64) -> Complex64 {
        self.coefficients
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * x + c)
    }

    /// Value, first and second derivative in `x`, by a single Horner pass.
    pub fn eval_with_derivatives(&self, x: Complex64) -> [Complex64; 3] {
        let zero = Complex64::new(0.0, 0.0);
        let (mut p, mut dp, mut ddp) = (zero, zero, zero);
        for &c in self.coefficients.iter().rev() {
            ddp = ddp * x + dp * 2.0;
            dp = dp * x + p;
            p = p * x + c;
        }
        [p, dp, ddp]
    }

    /// Left-hand side of `x(1-x)F'' + [γ - (α+β+1)x]F' - αβF`; zero for an exact series.
    pub fn ode_residual(&self, x: Complex64) -> Complex64 {
        let [f, df, ddf] = self.eval_with_derivatives(x);
        let (a, b, g) = (self.alpha, self.beta, self.gamma);
        x * (1.0 - x) * ddf + (g - (a + b + 1.0) * x) * df - a * b * f
    }
}

/// Value and derivative of the terminating series `F(α, β, γ; x)`.
pub fn poly_2f1(alpha: f64, beta: f64, gamma: f64, x: Complex64) -> Result<(Complex64, Complex64)> {
    let series = TerminatingSeries::new(alpha, beta, gamma)?;
    let [f, df, _] = series.eval_with_derivatives(x);
    Ok((f, df))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    // Direct Pochhammer sum, independent of the recurrence.
    fn brute_force(alpha: f64, beta: f64, gamma: f64, degree: u32, x: Complex64) -> Complex64 {
        let poch = |a: f64, k: u32| (0..k).map(|j| a + j as f64).product::<f64>();
        let fact = |k: u32| (1..=k).map(|j| j as f64).product::<f64>();
        (0..=degree)
            .map(|k| x.powu(k) * (poch(alpha, k) * poch(beta, k) / (poch(gamma, k) * fact(k))))
            .sum()
    }

    #[test]
    fn zero_upper_parameter_is_unity() {
        for x in [c(0.3), Complex64::new(0.5, 7.0), c(-12.0)] {
            let (f, df) = poly_2f1(0.0, 2.7, 1.3, x).unwrap();
            assert_eq!(f, c(1.0));
            assert_eq!(df, c(0.0));
        }
    }

    #[test]
    fn one_term_series() {
        let (f, df) = poly_2f1(-1.0, 3.0, 2.0, c(0.5)).unwrap();
        assert!((f - c(0.25)).norm() < 1e-15);
        assert!((df - c(-1.5)).norm() < 1e-15);
    }

    #[test]
    fn three_term_series_at_unit_argument() {
        let (f, _) = poly_2f1(-2.0, 2.0, 1.0, c(1.0)).unwrap();
        assert!(f.norm() < 1e-15);
        assert!((brute_force(-2.0, 2.0, 1.0, 2, c(1.0))).norm() < 1e-15);
    }

    #[test]
    fn rejects_non_terminating_parameters() {
        assert!(matches!(
            poly_2f1(0.5, 1.5, 2.0, c(0.1)),
            Err(Error::NonTerminating { .. })
        ));
    }

    #[test]
    fn rejects_gamma_pole_inside_degree() {
        assert!(matches!(
            TerminatingSeries::new(-3.0, 1.0, -1.0),
            Err(Error::GammaPole { .. })
        ));
        // the pole sits beyond the last term
        assert!(TerminatingSeries::new(-2.0, 1.0, -2.0).is_ok());
    }

    #[test]
    fn snaps_near_integer_parameters() {
        let s = TerminatingSeries::new(-2.0 + 1e-11, 1.5, 0.75).unwrap();
        assert_eq!(s.degree(), 2);
        assert_eq!(s.parameters().0, -2.0);
    }

    #[test]
    fn first_terminating_parameter_sets_degree() {
        let s = TerminatingSeries::new(-5.0, -2.0, 0.5).unwrap();
        assert_eq!(s.degree(), 2);
    }

    #[test]
    fn unity_at_origin() {
        let s = TerminatingSeries::new(-4.0, 6.25, 2.5).unwrap();
        assert_eq!(s.eval(c(0.0)), c(1.0));
    }

    proptest! {
        #[test]
        fn matches_brute_force_and_is_symmetric(
            n in 0u32..12, beta in -3.0f64..9.0, gamma in 0.3f64..7.0,
            re in -2.0f64..2.0, im in -4.0f64..4.0,
        ) {
            let x = Complex64::new(re, im);
            let a = TerminatingSeries::new(-(n as f64), beta, gamma).unwrap();
            let expected = brute_force(-(n as f64), beta, gamma, n, x);
            let got = a.eval(x);
            prop_assert!((got - expected).norm() <= 1e-10 * (1.0 + expected.norm()));

            // swapping the upper parameters only matters if beta also terminates earlier
            if super::as_nonpositive_integer(beta).map_or(true, |b| b >= n) {
                let b = TerminatingSeries::new(beta, -(n as f64), gamma).unwrap();
                prop_assert!((b.eval(x) - got).norm() <= 1e-14 * (1.0 + got.norm()));
            }
        }

        #[test]
        fn satisfies_hypergeometric_ode(
            n in 0u32..10, beta in 0.5f64..8.0, gamma in 0.3f64..6.0,
            re in 0.0f64..1.0, im in -3.0f64..3.0,
        ) {
            let s = TerminatingSeries::new(-(n as f64), beta, gamma).unwrap();
            let x = Complex64::new(re, im);
            let scale = s.coefficients().iter().map(|c| c.abs()).sum::<f64>() * (1.0 + x.norm()).powi(n as i32 + 2);
            prop_assert!(s.ode_residual(x).norm() <= 1e-13 * scale);
        }

        #[test]
        fn derivative_matches_finite_difference(n in 1u32..8, beta in 0.5f64..5.0, gamma in 0.5f64..4.0, x in -0.9f64..0.9) {
            let s = TerminatingSeries::new(-(n as f64), beta, gamma).unwrap();
            let h = 1e-6;
            let fd = (s.eval(c(x + h)) - s.eval(c(x - h))) / (2.0 * h);
            let [_, d, _] = s.eval_with_derivatives(c(x));
            prop_assert!((fd - d).norm() <= 1e-6 * (1.0 + d.norm()));
        }
    }
}
