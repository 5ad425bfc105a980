//! Adaptive Gauss–Kronrod quadrature for integrands on `[0, ∞)` that are
//! dominated by a multiple of the Gaussian kernel `e^{-x²/2}`.
//!
//! The half-line is cut at a point `X` beyond which the envelope carries at
//! most `truncation_tail` of mass. `[0, X]` is then refined by global
//! adaptive bisection: the panel with the largest local error estimate is
//! split until the estimates sum below `abs_tol - tail`. Each panel uses the
//! 15-point Kronrod rule with the embedded 7-point Gauss rule, and the local
//! estimate is the raw difference `|K15 - G7|`, which over-estimates the
//! Kronrod error for smooth integrands by several orders of magnitude.

#![allow(clippy::excessive_precision)]

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gauss::tail;
use crate::scalar::{sqrt_2pi, Scalar};

/// Lower clamp for the truncation point.
pub const MIN_TRUNCATION: f64 = 8.0;

/// Number of equal panels the interval `[0, X]` starts with.
const INITIAL_PANELS: usize = 16;

/// Hard cap on the panel count; refinement past it is a convergence failure.
pub const MAX_PANELS: usize = 4096;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// Gauss weights for XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Tolerance contract for [`integrate_semi_infinite`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadratureConfig<S> {
    abs_tol: S,
    max_depth: u32,
    truncation_tail: S,
}

impl<S: Scalar> QuadratureConfig<S> {
    pub const DEFAULT_MAX_DEPTH: u32 = 50;

    /// Validates `abs_tol > 0`, `truncation_tail ≤ abs_tol/10` and
    /// `max_depth ≥ 10`.
    pub fn new(abs_tol: S, max_depth: u32, truncation_tail: S) -> Result<Self> {
        if !(abs_tol > S::zero()) || !abs_tol.is_finite() {
            return Err(Error::domain(format!("abs_tol must be positive, got {abs_tol}")));
        }
        if !(truncation_tail >= S::zero()) || truncation_tail > abs_tol / S::lit(10.0) {
            return Err(Error::domain(format!(
                "truncation_tail must lie in [0, abs_tol/10], got {truncation_tail}"
            )));
        }
        if max_depth < 10 {
            return Err(Error::domain(format!("max_depth must be at least 10, got {max_depth}")));
        }
        Ok(Self {
            abs_tol,
            max_depth,
            truncation_tail,
        })
    }

    /// `abs_tol` with a truncation tail of `abs_tol/100` and the default depth.
    pub fn with_tolerance(abs_tol: S) -> Result<Self> {
        Self::new(abs_tol, Self::DEFAULT_MAX_DEPTH, abs_tol / S::lit(100.0))
    }

    pub fn abs_tol(&self) -> S {
        self.abs_tol
    }

    pub fn max_depth(&self) -> u32 {
        self.max_depth
    }

    pub fn truncation_tail(&self) -> S {
        self.truncation_tail
    }
}

impl<S: Scalar> Default for QuadratureConfig<S> {
    fn default() -> Self {
        Self::with_tolerance(S::lit(1e-10)).expect("default tolerance is valid")
    }
}

/// Integral estimate with its certified-by-construction error bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadratureResult<S> {
    pub value: S,
    pub error_bound: S,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy)]
struct Panel<S> {
    lo: S,
    hi: S,
    value: S,
    error: S,
    /// Part of `error` that is rounding noise and does not shrink on bisection.
    floor: S,
    depth: u32,
}

fn kronrod_panel<S: Scalar, F: Fn(S) -> S>(f: &F, lo: S, hi: S, depth: u32) -> Panel<S> {
    let two = S::lit(2.0);
    let center = (lo + hi) / two;
    let half = (hi - lo) / two;

    let fc = f(center);
    let mut kronrod = fc * S::lit(WGK[7]);
    let mut gauss = fc * S::lit(WG[3]);
    let mut abs_sum = fc.abs() * S::lit(WGK[7]);
    for j in 0..7 {
        let dx = half * S::lit(XGK[j]);
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        let wk = S::lit(WGK[j]);
        kronrod = kronrod + wk * (f1 + f2);
        abs_sum = abs_sum + wk * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss = gauss + S::lit(WG[j / 2]) * (f1 + f2);
        }
    }
    let value = kronrod * half;
    let diff = ((kronrod - gauss) * half).abs();
    // rounding floor: the rule cannot resolve below a few ulps of ∫|f|
    let floor = S::lit(50.0) * S::epsilon() * abs_sum * half.abs();
    Panel {
        lo,
        hi,
        value,
        error: diff.max(floor),
        floor,
        depth,
    }
}

/// Smallest `X ≥ 8` with `envelope·√(2π)·T(X) ≤ truncation_tail`, and the
/// mass bound beyond it.
fn truncation_point<S: Scalar>(envelope: S, truncation_tail: S) -> (S, S) {
    let scale = envelope * sqrt_2pi::<S>();
    let mass = |x: S| scale * tail(x);
    let mut lo = S::lit(MIN_TRUNCATION);
    if mass(lo) <= truncation_tail {
        return (lo, mass(lo));
    }
    // T(40) underflows to zero in f64, so the bracket always closes.
    let mut hi = S::lit(40.0);
    while mass(hi) > truncation_tail {
        hi = hi * S::lit(2.0);
    }
    for _ in 0..200 {
        let mid = (lo + hi) / S::lit(2.0);
        if mid <= lo || mid >= hi {
            break;
        }
        if mass(mid) <= truncation_tail {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    (hi, mass(hi))
}

/// Integrates `f` over `[0, ∞)` given `|f(x)| ≤ envelope·e^{-x²/2}`.
///
/// On success `error_bound ≤ cfg.abs_tol()` and includes the truncated mass.
/// Returns [`Error::Convergence`] carrying the current estimate and bound if
/// some panel would have to be split beyond `cfg.max_depth()`, if more than
/// [`MAX_PANELS`] panels are needed, or if rounding noise alone exceeds the
/// tolerance.
pub fn integrate_semi_infinite<S, F>(
    f: F,
    envelope: S,
    cfg: &QuadratureConfig<S>,
) -> Result<QuadratureResult<S>>
where
    S: Scalar,
    F: Fn(S) -> S,
{
    if !(envelope >= S::zero()) || !envelope.is_finite() {
        return Err(Error::domain(format!(
            "envelope constant must be finite and non-negative, got {envelope}"
        )));
    }
    let (upper, tail_mass) = truncation_point(envelope, cfg.truncation_tail);
    let target = cfg.abs_tol - tail_mass;

    let width = upper / S::lit(INITIAL_PANELS as f64);
    let mut panels: Vec<Panel<S>> = (0..INITIAL_PANELS)
        .map(|i| {
            let lo = width * S::lit(i as f64);
            let hi = if i + 1 == INITIAL_PANELS {
                upper
            } else {
                width * S::lit((i + 1) as f64)
            };
            kronrod_panel(&f, lo, hi, 0)
        })
        .collect();
    let mut evaluations = 15 * INITIAL_PANELS;

    loop {
        let total_error: S = panels.iter().map(|p| p.error).sum();
        let (worst, worst_panel) = panels
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.error.partial_cmp(&b.1.error).unwrap_or(std::cmp::Ordering::Less))
            .map(|(i, p)| (i, *p))
            .expect("at least one panel");

        if total_error.is_nan() {
            return Err(Error::Evaluation("integrand produced NaN".into()));
        }
        if total_error <= target {
            panels.sort_by(|a, b| a.lo.partial_cmp(&b.lo).unwrap_or(std::cmp::Ordering::Equal));
            let value = panels.iter().map(|p| p.value).sum();
            return Ok(QuadratureResult {
                value,
                error_bound: total_error + tail_mass,
                evaluations,
            });
        }
        let noise: S = panels.iter().map(|p| p.floor).sum();
        if worst_panel.depth >= cfg.max_depth || panels.len() >= MAX_PANELS || noise > target {
            let value: S = panels.iter().map(|p| p.value).sum();
            return Err(Error::Convergence {
                estimate: value.as_f64(),
                error_bound: (total_error + tail_mass).as_f64(),
                evaluations,
            });
        }

        let mid = (worst_panel.lo + worst_panel.hi) / S::lit(2.0);
        let depth = worst_panel.depth + 1;
        panels[worst] = kronrod_panel(&f, worst_panel.lo, mid, depth);
        panels.push(kronrod_panel(&f, mid, worst_panel.hi, depth));
        evaluations += 30;
    }
}
