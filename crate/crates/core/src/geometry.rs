//! Planar sets used by the refutation: translated cones ("wedges") and
//! centred horizontal strips.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Largest admissible wedge half-angle, `π/2 - 1e-6`, keeping `tan α` finite.
pub fn max_alpha<S: Scalar>() -> S {
    S::FRAC_PI_2() - S::lit(1e-6)
}

pub(crate) fn check_alpha<S: Scalar>(alpha: S) -> Result<()> {
    if alpha >= S::zero() && alpha <= max_alpha() {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "angle must lie in [0, π/2 - 1e-6], got {alpha}"
        )))
    }
}

pub(crate) fn check_lambda<S: Scalar>(lambda: S) -> Result<()> {
    if lambda >= S::zero() && lambda <= S::one() {
        Ok(())
    } else {
        Err(Error::domain(format!("lambda must lie in [0, 1], got {lambda}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Point<S> {
    pub x: S,
    pub y: S,
}

impl<S: Scalar> Point<S> {
    pub fn new(x: S, y: S) -> Self {
        Self { x, y }
    }
}

/// The set `{(x, y) : y ≥ |x|·tan α − shift}`.
///
/// `shift = 0` is the cone with apex at the origin; a positive shift moves it
/// down so the origin lies in the interior. `alpha = 0` is the halfspace
/// `{y ≥ −shift}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Wedge<S> {
    alpha: S,
    shift: S,
    #[serde(skip)]
    slope: S,
}

impl<S: Scalar> Wedge<S> {
    pub fn new(alpha: S, shift: S) -> Result<Self> {
        check_alpha(alpha)?;
        if !(shift >= S::zero()) || !shift.is_finite() {
            return Err(Error::domain(format!(
                "shift must be finite and non-negative, got {shift}"
            )));
        }
        Ok(Self {
            alpha,
            shift,
            slope: alpha.tan(),
        })
    }

    /// Cone with apex at the origin.
    pub fn apex(alpha: S) -> Result<Self> {
        Self::new(alpha, S::zero())
    }

    pub fn alpha(&self) -> S {
        self.alpha
    }

    pub fn shift(&self) -> S {
        self.shift
    }

    /// `tan α`.
    pub fn slope(&self) -> S {
        self.slope
    }

    pub fn contains(&self, p: Point<S>) -> bool {
        p.y >= p.x.abs() * self.slope - self.shift
    }

    /// `e^t·W`. Cones are dilation invariant so only the shift scales.
    pub fn dilate(&self, t: S) -> Result<Self> {
        if !t.is_finite() {
            return Err(Error::domain(format!("dilation exponent must be finite, got {t}")));
        }
        let shift = self.shift * t.exp();
        if !shift.is_finite() {
            return Err(Error::Range(format!(
                "dilated shift overflows: {} * e^{t}",
                self.shift
            )));
        }
        Ok(Self { shift, ..*self })
    }

    /// `λ·self + (1−λ)·other` for wedges of equal angle.
    ///
    /// Convexity of the cone gives `λW₁ + (1−λ)W₂ = cone − (λs₁ + (1−λ)s₂)·e₂`.
    pub fn minkowski_combination(&self, other: &Self, lambda: S) -> Result<Self> {
        check_lambda(lambda)?;
        if self.alpha != other.alpha {
            return Err(Error::UnsupportedCombination(format!(
                "wedge angles differ ({} vs {})",
                self.alpha, other.alpha
            )));
        }
        let shift = lambda * self.shift + (S::one() - lambda) * other.shift;
        Ok(Self { shift, ..*self })
    }
}

/// Free-function form of [`Wedge::minkowski_combination`].
pub fn minkowski_combination<S: Scalar>(w1: &Wedge<S>, w2: &Wedge<S>, lambda: S) -> Result<Wedge<S>> {
    w1.minkowski_combination(w2, lambda)
}

/// Free-function form of [`Wedge::dilate`].
pub fn dilate<S: Scalar>(w: &Wedge<S>, t: S) -> Result<Wedge<S>> {
    w.dilate(t)
}

/// The o-symmetric strip `{(x, y) : |y| ≤ halfwidth}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Strip<S> {
    halfwidth: S,
}

impl<S: Scalar> Strip<S> {
    pub fn new(halfwidth: S) -> Result<Self> {
        if halfwidth > S::zero() && halfwidth.is_finite() {
            Ok(Self { halfwidth })
        } else {
            Err(Error::domain(format!(
                "strip half-width must be positive and finite, got {halfwidth}"
            )))
        }
    }

    pub fn halfwidth(&self) -> S {
        self.halfwidth
    }

    pub fn contains(&self, p: Point<S>) -> bool {
        p.y.abs() <= self.halfwidth
    }

    pub fn dilate(&self, t: S) -> Result<Self> {
        if !t.is_finite() {
            return Err(Error::domain(format!("dilation exponent must be finite, got {t}")));
        }
        let halfwidth = self.halfwidth * t.exp();
        if !halfwidth.is_finite() {
            return Err(Error::Range(format!("dilated half-width overflows at t = {t}")));
        }
        Self::new(halfwidth).map_err(|_| Error::Range(format!("dilated half-width underflows at t = {t}")))
    }
}
