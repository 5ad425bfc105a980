//! Direct numerical refutation of the planar Gaussian Brunn–Minkowski
//! inequality on wedge pairs, and the finite-difference log-concavity test
//! for `t ↦ γ(eᵗK)`.
//!
//! Gaps are computed from quadrature measures, never from the series. The
//! series prediction is carried alongside so the two can be compared.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::expansion::{coefficients_closed, coefficients_quadrature, predicted_gap_term};
use crate::gauss::tail;
use crate::geometry::{check_lambda, Strip, Wedge};
use crate::measures::{strip_measure_closed, wedge_measure};
use crate::quadrature::QuadratureConfig;
use crate::scalar::Scalar;

/// Safety factor on the first-order propagated quadrature bound.
const PROPAGATION_SAFETY: f64 = 2.0;

/// `G = √γ₂(λA + (1−λ)B) − λ√γ₂(A) − (1−λ)√γ₂(B)` with its certified bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GapReport<S> {
    pub alpha: S,
    pub eps: S,
    pub lambda: S,
    pub gap: S,
    pub gap_error_bound: S,
    pub predicted: S,
    /// `gap / predicted`, absent when the prediction is exactly zero.
    pub agreement: Option<S>,
    /// `gap + gap_error_bound < 0`.
    pub violated: bool,
}

/// Computes the gap for `A = W(α, 0)`, `B = W(α, ε)`.
pub fn gbm_gap<S: Scalar>(alpha: S, eps: S, lambda: S, cfg: &QuadratureConfig<S>) -> Result<GapReport<S>> {
    check_lambda(lambda)?;
    let a = Wedge::apex(alpha)?;
    let b = Wedge::new(alpha, eps)?;
    let c = a.minkowski_combination(&b, lambda)?;

    let ma = wedge_measure(&a, cfg)?;
    let mb = wedge_measure(&b, cfg)?;
    let mc = wedge_measure(&c, cfg)?;

    let one = S::one();
    let two = S::lit(2.0);
    let mu = one - lambda;
    let (ra, rb, rc) = (ma.value.sqrt(), mb.value.sqrt(), mc.value.sqrt());
    let gap = rc - lambda * ra - mu * rb;

    // d√m = dm/(2√m)
    let propagated = mc.error_bound / (two * rc)
        + lambda * ma.error_bound / (two * ra)
        + mu * mb.error_bound / (two * rb);
    let rounding = S::lit(4.0) * S::epsilon() * (rc + lambda * ra + mu * rb);
    let gap_error_bound = S::lit(PROPAGATION_SAFETY) * propagated + rounding;

    let predicted = predicted_gap_term(&coefficients_closed(alpha)?, eps, lambda);
    let agreement = (predicted != S::zero()).then(|| gap / predicted);

    Ok(GapReport {
        alpha,
        eps,
        lambda,
        gap,
        gap_error_bound,
        predicted,
        agreement,
        violated: gap + gap_error_bound < S::zero(),
    })
}

/// One cell of a parameter scan. Failures stay local to the cell.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanCell<S> {
    pub alpha: S,
    pub eps: S,
    pub lambda: S,
    pub outcome: Result<GapReport<S>>,
}

/// Evaluates [`gbm_gap`] on the product grid, row-major in
/// `alpha → eps → lambda`. Cells run in parallel; the output order is the
/// grid order.
pub fn gbm_scan<S: Scalar>(
    alpha_grid: &[S],
    eps_grid: &[S],
    lambda_grid: &[S],
    cfg: &QuadratureConfig<S>,
) -> Result<Vec<ScanCell<S>>> {
    if alpha_grid.is_empty() || eps_grid.is_empty() || lambda_grid.is_empty() {
        return Err(Error::domain("scan grids must be non-empty"));
    }
    for &alpha in alpha_grid {
        for &eps in eps_grid {
            Wedge::new(alpha, eps)?;
        }
    }
    for &lambda in lambda_grid {
        check_lambda(lambda)?;
    }

    let cells: Vec<(S, S, S)> = alpha_grid
        .iter()
        .flat_map(|&a| {
            eps_grid
                .iter()
                .flat_map(move |&e| lambda_grid.iter().map(move |&l| (a, e, l)))
        })
        .collect();
    Ok(cells
        .into_par_iter()
        .map(|(alpha, eps, lambda)| ScanCell {
            alpha,
            eps,
            lambda,
            outcome: gbm_gap(alpha, eps, lambda, cfg),
        })
        .collect())
}

/// Sets whose dilation profile `t ↦ γ(eᵗK)` can be evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "shape", content = "params", rename_all = "snake_case")]
pub enum BShape<S> {
    /// Planar wedge, measured by quadrature.
    Wedge(Wedge<S>),
    /// Planar o-symmetric strip, closed form.
    Strip(Strip<S>),
    /// The one-dimensional halfline `{y ≥ −ε}`, closed form `Φ(ε)`.
    #[serde(rename = "halfspace_1d")]
    Halfspace1d { eps: S },
}

impl<S: Scalar> BShape<S> {
    /// Measure of `eᵗK` and its absolute error bound.
    fn dilated_measure(&self, t: S, cfg: &QuadratureConfig<S>) -> Result<(S, S)> {
        match self {
            BShape::Wedge(w) => {
                let r = wedge_measure(&w.dilate(t)?, cfg)?;
                Ok((r.value, r.error_bound))
            }
            BShape::Strip(s) => Ok((strip_measure_closed(s.dilate(t)?.halfwidth())?, S::zero())),
            BShape::Halfspace1d { eps } => {
                let scaled = *eps * t.exp();
                if !scaled.is_finite() {
                    return Err(Error::Range(format!("dilated halfline overflows at t = {t}")));
                }
                Ok((tail(-scaled), S::zero()))
            }
        }
    }

    fn is_closed_form(&self) -> bool {
        !matches!(self, BShape::Wedge(_))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BConjReport<S> {
    #[serde(flatten)]
    pub shape: BShape<S>,
    pub t0: S,
    pub step: S,
    pub second_derivative: S,
    pub fd_error_bound: S,
    /// `second_derivative − fd_error_bound ≤ 0`.
    pub log_concave_locally: bool,
}

/// Central second difference of `F(t) = ln γ(eᵗK)` at `t0` with step `h`.
///
/// The error bound adds the Richardson estimate `4/3·|D(h) − D(h/2)|` of the
/// truncation error to the amplified measurement noise `4·δ/(h²·m_min)`,
/// where `δ` is `abs_tol` for quadrature shapes and a few ulps otherwise.
pub fn b_second_derivative<S: Scalar>(
    shape: &BShape<S>,
    t0: S,
    h: S,
    cfg: &QuadratureConfig<S>,
) -> Result<BConjReport<S>> {
    if !t0.is_finite() {
        return Err(Error::domain(format!("t0 must be finite, got {t0}")));
    }
    if !(h > S::zero()) || !h.is_finite() {
        return Err(Error::domain(format!("step must be positive, got {h}")));
    }
    let two = S::lit(2.0);
    let half = h / two;
    let offsets = [-h, -half, S::zero(), half, h];
    let mut logs = [S::zero(); 5];
    let mut m_min = S::infinity();
    for (slot, &dt) in logs.iter_mut().zip(&offsets) {
        let (m, _) = shape.dilated_measure(t0 + dt, cfg)?;
        if !(m > S::zero()) {
            return Err(Error::Evaluation(format!(
                "non-positive measure {m} at t = {}",
                t0 + dt
            )));
        }
        m_min = m_min.min(m);
        *slot = m.ln();
    }
    let [f_mh, f_mhalf, f_0, f_half, f_h] = logs;
    let coarse = (f_mh - two * f_0 + f_h) / (h * h);
    let fine = (f_mhalf - two * f_0 + f_half) / (half * half);

    let four = S::lit(4.0);
    let noise = if shape.is_closed_form() {
        let scale = logs.iter().fold(S::one(), |acc, f| acc.max(S::one() + f.abs()));
        S::lit(16.0) * S::epsilon() * scale / (h * h)
    } else {
        four * cfg.abs_tol() / (h * h * m_min)
    };
    let truncation = four / S::lit(3.0) * (coarse - fine).abs();
    let fd_error_bound = truncation + noise;

    Ok(BConjReport {
        shape: *shape,
        t0,
        step: h,
        second_derivative: coarse,
        fd_error_bound,
        log_concave_locally: coarse - fd_error_bound <= S::zero(),
    })
}

/// `β = −a₁/a₀` from closed-form coefficients.
pub fn b_beta<S: Scalar>(alpha: S) -> Result<S> {
    Ok(coefficients_closed(alpha)?.beta())
}

/// `β` as a ratio of quadrature integrals.
pub fn b_beta_quadrature<S: Scalar>(alpha: S, cfg: &QuadratureConfig<S>) -> Result<S> {
    Ok(coefficients_quadrature(alpha, cfg)?.beta())
}

/// Halves `ε` from `eps_start` until the wedge `W(α, ε)` shows a certified
/// positive second difference, or until the expected size `β·ε` drops below
/// the quadrature noise floor. Returns `None` in the latter case.
pub fn find_b_violation<S: Scalar>(
    alpha: S,
    eps_start: S,
    t0: S,
    h: S,
    cfg: &QuadratureConfig<S>,
) -> Result<Option<BConjReport<S>>> {
    let beta = b_beta(alpha)?;
    let floor_measure = crate::measures::apex_wedge_measure_closed(alpha)?;
    let noise_floor = S::lit(4.0) * cfg.abs_tol() / (h * h * floor_measure);
    let mut eps = eps_start;
    while beta * eps * t0.exp() > noise_floor {
        let report = b_second_derivative(&BShape::Wedge(Wedge::new(alpha, eps)?), t0, h, cfg)?;
        if !report.log_concave_locally {
            return Ok(Some(report));
        }
        eps = eps / S::lit(2.0);
    }
    Ok(None)
}
