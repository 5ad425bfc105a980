//! One-dimensional Gaussian primitives: the upper tail `T`, its first two
//! derivatives, the density and the distribution function.
//!
//! `T(x) = ½·erfc(x/√2)`. The complementary error function below is a generic
//! transcription of the FreeBSD msun `s_erf.c` rational approximations. For
//! `|x| ≥ 1.25` it evaluates `erfc` through the scaled form
//! `exp(-x² - 0.5625 + R/S) / x`, so `T` keeps full relative accuracy deep in
//! the upper tail until the result itself underflows (near `x ≈ 38.5`).
//!
//! ====================================================
//! Copyright (C) 1993 by Sun Microsystems, Inc. All rights reserved.
//!
//! Developed at SunPro, a Sun Microsystems, Inc. business.
//! Permission to use, copy, modify, and distribute this
//! software is freely granted, provided that this notice
//! is preserved.
//! ====================================================

#![allow(clippy::excessive_precision)]

use crate::error::{Error, Result};
use crate::scalar::{inv_sqrt_2pi, Scalar};

const ERX: f64 = 8.45062911510467529297e-01;
const PP0: f64 = 1.28379167095512558561e-01;
const PP1: f64 = -3.25042107247001499370e-01;
const PP2: f64 = -2.84817495755985104766e-02;
const PP3: f64 = -5.77027029648944159157e-03;
const PP4: f64 = -2.37630166566501626084e-05;
const QQ1: f64 = 3.97917223959155352819e-01;
const QQ2: f64 = 6.50222499887672944485e-02;
const QQ3: f64 = 5.08130628187576562776e-03;
const QQ4: f64 = 1.32494738004321644526e-04;
const QQ5: f64 = -3.96022827877536812320e-06;
const PA0: f64 = -2.36211856075265944077e-03;
const PA1: f64 = 4.14856118683748331666e-01;
const PA2: f64 = -3.72207876035701323847e-01;
const PA3: f64 = 3.18346619901161753674e-01;
const PA4: f64 = -1.10894694282396677476e-01;
const PA5: f64 = 3.54783043256182359371e-02;
const PA6: f64 = -2.16637559486879084300e-03;
const QA1: f64 = 1.06420880400844228286e-01;
const QA2: f64 = 5.40397917702171048937e-01;
const QA3: f64 = 7.18286544141962662868e-02;
const QA4: f64 = 1.26171219808761642112e-01;
const QA5: f64 = 1.36370839120290507362e-02;
const QA6: f64 = 1.19844998467991074170e-02;
const RA0: f64 = -9.86494403484714822705e-03;
const RA1: f64 = -6.93858572707181764372e-01;
const RA2: f64 = -1.05586262253232909814e+01;
const RA3: f64 = -6.23753324503260060396e+01;
const RA4: f64 = -1.62396669462573470355e+02;
const RA5: f64 = -1.84605092906711035994e+02;
const RA6: f64 = -8.12874355063065934246e+01;
const RA7: f64 = -9.81432934416914548592e+00;
const SA1: f64 = 1.96512716674392571292e+01;
const SA2: f64 = 1.37657754143519042600e+02;
const SA3: f64 = 4.34565877475229228821e+02;
const SA4: f64 = 6.45387271733267880336e+02;
const SA5: f64 = 4.29008140027567833386e+02;
const SA6: f64 = 1.08635005541779435134e+02;
const SA7: f64 = 6.57024977031928170135e+00;
const SA8: f64 = -6.04244152148580987438e-02;
const RB0: f64 = -9.86494292470009928597e-03;
const RB1: f64 = -7.99283237680523006574e-01;
const RB2: f64 = -1.77579549177547519889e+01;
const RB3: f64 = -1.60636384855821916062e+02;
const RB4: f64 = -6.37566443368389627722e+02;
const RB5: f64 = -1.02509513161107724954e+03;
const RB6: f64 = -4.83519191608651397019e+02;
const SB1: f64 = 3.03380607434824582924e+01;
const SB2: f64 = 3.25792512996573918826e+02;
const SB3: f64 = 1.53672958608443695994e+03;
const SB4: f64 = 3.19985821950859553908e+03;
const SB5: f64 = 2.55305040643316442583e+03;
const SB6: f64 = 4.74528541206955367215e+02;
const SB7: f64 = -2.24409524465858183362e+01;

const PP: [f64; 5] = [PP0, PP1, PP2, PP3, PP4];
const QQ: [f64; 6] = [1.0, QQ1, QQ2, QQ3, QQ4, QQ5];
const PA: [f64; 7] = [PA0, PA1, PA2, PA3, PA4, PA5, PA6];
const QA: [f64; 7] = [1.0, QA1, QA2, QA3, QA4, QA5, QA6];
const RA: [f64; 8] = [RA0, RA1, RA2, RA3, RA4, RA5, RA6, RA7];
const SA: [f64; 9] = [1.0, SA1, SA2, SA3, SA4, SA5, SA6, SA7, SA8];
const RB: [f64; 7] = [RB0, RB1, RB2, RB3, RB4, RB5, RB6];
const SB: [f64; 8] = [1.0, SB1, SB2, SB3, SB4, SB5, SB6, SB7];

#[inline]
fn horner<S: Scalar>(z: S, coeffs: &[f64]) -> S {
    coeffs
        .iter()
        .rev()
        .fold(S::zero(), |acc, &c| acc * z + S::lit(c))
}

/// Complementary error function `erfc(x) = 1 - erf(x)`.
///
/// `erfc(+inf) = 0`, `erfc(-inf) = 2`, `erfc(NaN) = NaN`.
pub fn erfc<S: Scalar>(x: S) -> S {
    if x.is_nan() {
        return x;
    }
    let one = S::one();
    let two = S::lit(2.0);
    let negative = x < S::zero();
    let ax = x.abs();

    if ax < S::lit(0.84375) {
        let t = if ax < S::lit(1.387_778_780_781_445_7e-17) {
            ax
        } else {
            let z = ax * ax;
            let y = horner(z, &PP) / horner(z, &QQ);
            if ax < S::lit(0.25) {
                ax + ax * y
            } else {
                S::lit(0.5) + (ax * y + (ax - S::lit(0.5)))
            }
        };
        return if negative { one + t } else { one - t };
    }

    if ax < S::lit(1.25) {
        let s = ax - one;
        let pq = horner(s, &PA) / horner(s, &QA);
        let erx = S::lit(ERX);
        return if negative {
            one + erx + pq
        } else {
            one - erx - pq
        };
    }

    if ax < S::lit(28.0) {
        if negative && ax > S::lit(6.0) {
            return two;
        }
        let s = one / (ax * ax);
        let rs = if ax < S::lit(1.0 / 0.35) {
            horner(s, &RA) / horner(s, &SA)
        } else {
            horner(s, &RB) / horner(s, &SB)
        };
        // head has a short mantissa so head*head is exact
        let head = ax.head();
        let r = (-head * head - S::lit(0.5625)).exp() * ((head - ax) * (head + ax) + rs).exp();
        return if negative { two - r / ax } else { r / ax };
    }

    if negative {
        two
    } else {
        S::zero()
    }
}

fn check_finite<S: Scalar>(x: S) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("argument must be finite, got {x}")))
    }
}

/// Standard normal density `φ(x) = e^{-x²/2}/√(2π)`.
#[inline]
pub fn gaussian_density<S: Scalar>(x: S) -> S {
    inv_sqrt_2pi::<S>() * (-x * x / S::lit(2.0)).exp()
}

/// Upper tail without the finiteness check; `±inf` map to `0`/`1`.
#[inline]
pub(crate) fn tail<S: Scalar>(x: S) -> S {
    erfc(x * S::FRAC_1_SQRT_2()) / S::lit(2.0)
}

/// Upper Gaussian tail `T(x) = P(Z ≥ x)` for a standard normal `Z`.
pub fn gaussian_tail<S: Scalar>(x: S) -> Result<S> {
    check_finite(x)?;
    Ok(tail(x))
}

/// Standard normal distribution function `Φ(x) = T(-x)`.
pub fn gaussian_cdf<S: Scalar>(x: S) -> Result<S> {
    check_finite(x)?;
    Ok(tail(-x))
}

#[inline]
pub(crate) fn tail_deriv_unchecked<S: Scalar>(x: S, k: u32) -> S {
    match k {
        0 => tail(x),
        1 => -gaussian_density(x),
        _ => x * gaussian_density(x),
    }
}

/// `k`-th derivative of the upper tail, `k ∈ {0, 1, 2}`.
///
/// `T' = -φ` and `T'' = x·φ(x)`.
pub fn gaussian_tail_deriv<S: Scalar>(x: S, k: u32) -> Result<S> {
    check_finite(x)?;
    if k > 2 {
        return Err(Error::domain(format!(
            "derivative order must be 0, 1 or 2, got {k}"
        )));
    }
    Ok(tail_deriv_unchecked(x, k))
}

/// Supremum of `|T^{(k)}|` over the real line, used for quadrature envelopes.
pub(crate) fn tail_deriv_sup<S: Scalar>(k: u32) -> S {
    match k {
        0 => S::one(),
        1 => inv_sqrt_2pi(),
        // max of x·φ(x) is attained at x = 1
        _ => gaussian_density(S::one()),
    }
}
