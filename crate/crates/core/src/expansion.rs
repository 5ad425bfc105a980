//! Second-order expansion of the wedge measure in the shift `ε`.
//!
//! With `a_k = ∫₀^∞ T^{(k)}(x·tan α)·φ(x) dx`,
//!
//! ```text
//! γ₂(W(α, ε)) = 2a₀ − 2εa₁ + ε²a₂ + o(ε²)
//! ```
//!
//! and the Brunn–Minkowski gap of the pair (cone, shifted cone) has leading
//! term `−λ(1−λ)·(2a₀a₂ − a₁²)·ε² / (2(2a₀)^{3/2})`. The sign of the
//! discriminant `2a₀a₂ − a₁²` therefore decides whether the inequality fails
//! for small `ε`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gauss::{gaussian_density, tail_deriv_sup, tail_deriv_unchecked};
use crate::geometry::{check_alpha, max_alpha};
use crate::quadrature::{integrate_semi_infinite, QuadratureConfig, QuadratureResult};
use crate::scalar::{inv_sqrt_2pi, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CoefficientRoute {
    Quadrature,
    ClosedForm,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExpansionCoefficients<S> {
    pub alpha: S,
    pub a0: S,
    pub a1: S,
    pub a2: S,
    pub route: CoefficientRoute,
}

impl<S: Scalar> ExpansionCoefficients<S> {
    /// `2a₀a₂ − a₁²` from the stored coefficients.
    pub fn discriminant(&self) -> S {
        S::lit(2.0) * self.a0 * self.a2 - self.a1 * self.a1
    }

    /// Second-order polynomial `2a₀ − 2εa₁ + ε²a₂` for the wedge measure.
    pub fn measure_series(&self, eps: S) -> S {
        let two = S::lit(2.0);
        two * self.a0 - two * eps * self.a1 + eps * eps * self.a2
    }

    /// The (B) slope `β = −a₁/a₀`.
    pub fn beta(&self) -> S {
        -self.a1 / self.a0
    }
}

/// The three coefficient integrals `a₀, a₁, a₂` with their quadrature bounds.
pub fn coefficient_integrals<S: Scalar>(
    alpha: S,
    cfg: &QuadratureConfig<S>,
) -> Result<[QuadratureResult<S>; 3]> {
    check_alpha(alpha)?;
    let slope = alpha.tan();
    let integral = |k: u32| {
        integrate_semi_infinite(
            |x| tail_deriv_unchecked(x * slope, k) * gaussian_density(x),
            tail_deriv_sup::<S>(k) * inv_sqrt_2pi::<S>(),
            cfg,
        )
    };
    Ok([integral(0)?, integral(1)?, integral(2)?])
}

pub fn coefficients_quadrature<S: Scalar>(
    alpha: S,
    cfg: &QuadratureConfig<S>,
) -> Result<ExpansionCoefficients<S>> {
    let [a0, a1, a2] = coefficient_integrals(alpha, cfg)?;
    Ok(ExpansionCoefficients {
        alpha,
        a0: a0.value,
        a1: a1.value,
        a2: a2.value,
        route: CoefficientRoute::Quadrature,
    })
}

/// Closed forms `a₀ = ½(½ − α/π)`, `a₁ = −cos α/(2√(2π))`,
/// `a₂ = sin α cos α/(2π)`.
pub fn coefficients_closed<S: Scalar>(alpha: S) -> Result<ExpansionCoefficients<S>> {
    check_alpha(alpha)?;
    let half = S::lit(0.5);
    let (sin, cos) = alpha.sin_cos();
    Ok(ExpansionCoefficients {
        alpha,
        a0: half * (half - alpha / S::PI()),
        a1: -cos * inv_sqrt_2pi::<S>() * half,
        a2: sin * cos / (S::lit(2.0) * S::PI()),
        route: CoefficientRoute::ClosedForm,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DiscriminantRoute {
    /// `2a₀a₂ − a₁²` from closed-form coefficients.
    Raw,
    /// `cos²α·(tan α(2 − 4α/π) − 1)/(8π)`.
    Simplified,
}

/// `tan α·(2 − 4α/π) − 1`; shares its sign with the discriminant.
pub fn sign_bracket<S: Scalar>(alpha: S) -> S {
    alpha.tan() * (S::lit(2.0) - S::lit(4.0) * alpha / S::PI()) - S::one()
}

pub fn discriminant<S: Scalar>(alpha: S, route: DiscriminantRoute) -> Result<S> {
    check_alpha(alpha)?;
    Ok(match route {
        DiscriminantRoute::Raw => coefficients_closed(alpha)?.discriminant(),
        DiscriminantRoute::Simplified => {
            let cos = alpha.cos();
            cos * cos * sign_bracket(alpha) / (S::lit(8.0) * S::PI())
        }
    })
}

/// Root of [`sign_bracket`] on `(1e-6, π/2 − 1e-6)` by bisection, to within
/// `tol`. The bracket is negative below the root and positive above it.
pub fn critical_angle<S: Scalar>(tol: S) -> Result<S> {
    if !(tol > S::zero()) {
        return Err(Error::domain(format!("tolerance must be positive, got {tol}")));
    }
    let mut lo = S::lit(1e-6);
    let mut hi = max_alpha::<S>();
    let (f_lo, f_hi) = (sign_bracket(lo), sign_bracket(hi));
    if !(f_lo < S::zero() && f_hi > S::zero()) {
        return Err(Error::Search {
            lo: lo.as_f64(),
            hi: hi.as_f64(),
        });
    }
    let two = S::lit(2.0);
    while (hi - lo) / two > tol {
        let mid = (lo + hi) / two;
        if mid <= lo || mid >= hi {
            break;
        }
        let f = sign_bracket(mid);
        if f == S::zero() {
            return Ok(mid);
        }
        if f < S::zero() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((lo + hi) / two)
}

/// Leading `ε²` term of the gap, without domain checks on `ε` and `λ`.
pub(crate) fn predicted_gap_term<S: Scalar>(coeffs: &ExpansionCoefficients<S>, eps: S, lambda: S) -> S {
    let two_a0 = S::lit(2.0) * coeffs.a0;
    -lambda * (S::one() - lambda) * coeffs.discriminant() * eps * eps
        / (S::lit(2.0) * two_a0 * two_a0.sqrt())
}

/// `−λ(1−λ)·(2a₀a₂ − a₁²)·ε²/(2(2a₀)^{3/2})` from closed-form coefficients.
pub fn predicted_gap<S: Scalar>(alpha: S, eps: S, lambda: S) -> Result<S> {
    if !(alpha > S::zero()) {
        return Err(Error::domain(format!("angle must be positive, got {alpha}")));
    }
    if !(eps > S::zero()) || !eps.is_finite() {
        return Err(Error::domain(format!("eps must be positive, got {eps}")));
    }
    if !(lambda > S::zero() && lambda < S::one()) {
        return Err(Error::domain(format!("lambda must lie in (0, 1), got {lambda}")));
    }
    Ok(predicted_gap_term(&coefficients_closed(alpha)?, eps, lambda))
}

/// Coefficients of `√γ₂(W(α, ε)) = c0 + c1·ε + c2·ε² + o(ε²)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SqrtExpansion<S> {
    pub c0: S,
    pub c1: S,
    pub c2: S,
}

impl<S: Scalar> SqrtExpansion<S> {
    pub fn eval(&self, eps: S) -> S {
        self.c0 + eps * (self.c1 + eps * self.c2)
    }
}

pub fn sqrt_measure_expansion<S: Scalar>(alpha: S) -> Result<SqrtExpansion<S>> {
    let k = coefficients_closed(alpha)?;
    let two_a0 = S::lit(2.0) * k.a0;
    let c0 = two_a0.sqrt();
    let two = S::lit(2.0);
    Ok(SqrtExpansion {
        c0,
        c1: -k.a1 / c0,
        c2: k.a2 / (two * c0) - k.a1 * k.a1 / (two * two_a0 * c0),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Wedge;
    use crate::measures::wedge_measure;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    fn grid() -> Vec<f64> {
        (1..=15).map(|i| i as f64 * 0.1).collect()
    }

    #[test]
    fn closed_coefficients_reference() {
        let k = coefficients_closed(FRAC_PI_4).unwrap();
        assert!((k.a0 - 0.125).abs() < 1e-16);
        assert!((k.a1 + 0.141_047_395_886_939_07).abs() < 1e-16);
        assert!((k.a2 - 1.0 / (4.0 * PI)).abs() < 1e-16);
        assert!((k.a2 - 0.079_577_471_545_947_67).abs() < 1e-16);
        let k0 = coefficients_closed(0.0_f64).unwrap();
        assert_eq!(k0.a0, 0.25);
        assert!((k0.a1 + 0.199_471_140_200_716_34).abs() < 1e-16);
        assert_eq!(k0.a2, 0.0);
        assert_eq!(k0.route, CoefficientRoute::ClosedForm);
        assert!(coefficients_closed(FRAC_PI_2).is_err());
    }

    #[test]
    fn quadrature_coefficients_reference() {
        let cfg = QuadratureConfig::with_tolerance(1e-10).unwrap();
        let k = coefficients_quadrature(FRAC_PI_4, &cfg).unwrap();
        assert!((k.a0 - 0.125).abs() < 1e-10);
        let k0 = coefficients_quadrature(0.0, &cfg).unwrap();
        assert!((k0.a1 + 0.199_471_140_200_716_34).abs() < 1e-10);
        assert_eq!(k0.a2, 0.0);
        assert_eq!(k0.route, CoefficientRoute::Quadrature);
        let c = coefficients_closed(1.0).unwrap();
        let q = coefficients_quadrature(1.0, &cfg).unwrap();
        assert!((c.a0 - q.a0).abs() < 1e-9);
        assert!((c.a1 - q.a1).abs() < 1e-9);
        assert!((c.a2 - q.a2).abs() < 1e-9);
    }

    #[test]
    fn quadrature_coefficients_are_honest() {
        let cfg = QuadratureConfig::with_tolerance(1e-10).unwrap();
        for alpha in grid() {
            let ints = coefficient_integrals(alpha, &cfg).unwrap();
            let c = coefficients_closed(alpha).unwrap();
            for (r, truth) in ints.iter().zip([c.a0, c.a1, c.a2]) {
                assert!((r.value - truth).abs() <= r.error_bound, "alpha {alpha}");
                assert!(r.error_bound <= cfg.abs_tol());
            }
        }
    }

    #[test]
    fn coefficient_signs() {
        let cfg = QuadratureConfig::with_tolerance(1e-10).unwrap();
        for alpha in grid() {
            for k in [coefficients_closed(alpha).unwrap(), coefficients_quadrature(alpha, &cfg).unwrap()] {
                assert!(k.a0 > 0.0);
                assert!(k.a1 < 0.0);
                assert!(k.a2 > 0.0);
            }
        }
    }

    #[test]
    fn discriminant_examples() {
        assert!(discriminant(FRAC_PI_4, DiscriminantRoute::Simplified).unwrap().abs() < 1e-12);
        assert!(discriminant(FRAC_PI_4, DiscriminantRoute::Raw).unwrap().abs() < 1e-12);
        let d0 = discriminant(0.0_f64, DiscriminantRoute::Simplified).unwrap();
        assert!((d0 + 1.0 / (8.0 * PI)).abs() < 1e-16);
        assert!((d0 + 0.039_788_735_772_973_83).abs() < 1e-16);
        // 40-digit evaluation: 6.888971071229768e-4
        let d = discriminant(1.3_f64, DiscriminantRoute::Simplified).unwrap();
        assert!((d - 6.888_971_071_229_768e-4).abs() < 1e-15);
        assert!(discriminant(2.0_f64, DiscriminantRoute::Raw).is_err());
    }

    #[test]
    fn discriminant_routes_agree() {
        let cfg = QuadratureConfig::with_tolerance(1e-10).unwrap();
        for alpha in grid() {
            let raw = discriminant(alpha, DiscriminantRoute::Raw).unwrap();
            let simple = discriminant(alpha, DiscriminantRoute::Simplified).unwrap();
            assert!((raw - simple).abs() <= 1e-11, "alpha {alpha}");
            let quad = coefficients_quadrature(alpha, &cfg).unwrap().discriminant();
            assert!((quad - simple).abs() <= 1e-8, "alpha {alpha}");
        }
    }

    #[test]
    fn discriminant_sign_structure() {
        for i in 1..200 {
            let alpha = FRAC_PI_4 * i as f64 / 200.0;
            assert!(discriminant(alpha, DiscriminantRoute::Simplified).unwrap() < 0.0);
        }
        let hi = FRAC_PI_2 - 1e-3;
        for i in 1..=200 {
            let alpha = FRAC_PI_4 + (hi - FRAC_PI_4) * i as f64 / 200.0;
            assert!(discriminant(alpha, DiscriminantRoute::Simplified).unwrap() > 0.0, "alpha {alpha}");
        }
    }

    #[test]
    fn bracket_and_root() {
        // tan 0.5·(2 − 2/π) − 1 and tan 1.3·(2 − 5.2/π) − 1
        assert!((sign_bracket(0.5_f64) + 0.255_181_987_040_615_8).abs() < 1e-14);
        assert!((sign_bracket(1.3_f64) - 0.241_963_830_713_743_7).abs() < 1e-14);
        let root = critical_angle(1e-9_f64).unwrap();
        assert!((root - FRAC_PI_4).abs() <= 1e-9);
        let root = critical_angle(1e-12_f64).unwrap();
        assert!((root - FRAC_PI_4).abs() <= 1e-12);
        let coarse = critical_angle(1e-3_f64).unwrap();
        assert!((coarse - FRAC_PI_4).abs() <= 1e-3);
        assert!(critical_angle(0.0_f64).is_err());
        assert!(critical_angle(-1.0_f64).is_err());
        assert!((critical_angle(1e-5_f32).unwrap() - std::f32::consts::FRAC_PI_4).abs() <= 1e-5);
    }

    #[test]
    fn predicted_gap_examples() {
        // 40-digit evaluation of the closed forms: −3.402710721146633e-5
        let p = predicted_gap(1.3_f64, 0.1, 0.5).unwrap();
        assert!((p + 3.402_710_721_146_633e-5).abs() < 1e-17);
        assert!(predicted_gap(FRAC_PI_4, 0.3, 0.4).unwrap().abs() < 1e-15);
        assert!(predicted_gap(1.3_f64, 0.1, 1e-12).unwrap().abs() < 1e-15);
        assert!(predicted_gap(1.3_f64, 0.1, 1.0 - 1e-12).unwrap().abs() < 1e-15);
        assert!(predicted_gap(1.3_f64, 0.1, 0.0).is_err());
        assert!(predicted_gap(1.3_f64, 0.1, 1.0).is_err());
        assert!(predicted_gap(1.3_f64, 0.0, 0.5).is_err());
        assert!(predicted_gap(0.0_f64, 0.1, 0.5).is_err());
    }

    #[test]
    fn sqrt_expansion_examples() {
        let s = sqrt_measure_expansion(FRAC_PI_4).unwrap();
        assert!((s.c0 - 0.5).abs() < 1e-16);
        assert!((s.c1 - 0.282_094_791_773_878_14).abs() < 1e-15);
        assert_eq!(s.eval(0.0), s.c0);
    }

    #[test]
    fn sqrt_expansion_second_order_limit() {
        // Richardson limit of (√γ₂ − c0 − c1 ε)/ε² from ε = 1e-2 and 1e-3
        let alpha = 1.0;
        let s = sqrt_measure_expansion(alpha).unwrap();
        let cfg = QuadratureConfig::with_tolerance(1e-14).unwrap();
        let q = |eps: f64| {
            let m = wedge_measure(&Wedge::new(alpha, eps).unwrap(), &cfg).unwrap().value;
            (m.sqrt() - s.c0 - s.c1 * eps) / (eps * eps)
        };
        let limit = (10.0 * q(1e-3) - q(1e-2)) / 9.0;
        // 40-digit closed form: c2(1.0) = 0.009888436810179122
        assert!((s.c2 - 0.009_888_436_810_179_122).abs() < 1e-15);
        assert!((limit - s.c2).abs() / s.c2 < 1e-3, "{limit} vs {}", s.c2);
    }

    #[test]
    fn series_remainder_shrinks() {
        let alpha = 1.0;
        let k = coefficients_closed(alpha).unwrap();
        let cfg = QuadratureConfig::with_tolerance(1e-13).unwrap();
        let scaled: Vec<f64> = [0.08, 0.04, 0.02, 0.01]
            .iter()
            .map(|&eps: &f64| {
                let m = wedge_measure(&Wedge::new(alpha, eps).unwrap(), &cfg).unwrap().value;
                (m - k.measure_series(eps)).abs() / (eps * eps)
            })
            .collect();
        for w in scaled.windows(2) {
            assert!(w[0] >= 1.5 * w[1], "{scaled:?}");
        }
    }
}
