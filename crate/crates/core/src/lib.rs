//! Numerical counter-examples for the Gaussian Brunn–Minkowski inequality
//! and for the log-concavity of `t ↦ γ(eᵗK)` on non-symmetric convex sets.
//!
//! Everything is generic over [`Scalar`] (`f32`/`f64`); the `*64` aliases at
//! the crate root fix the scalar to `f64`, which is what the reference
//! tolerances are stated for.
//!
//! ```
//! use gbm_core::{gbm_gap, QuadratureConfig64};
//!
//! let cfg = QuadratureConfig64::with_tolerance(1e-10).unwrap();
//! let report = gbm_gap(1.3, 0.1, 0.5, &cfg).unwrap();
//! assert!(report.violated);
//! ```

// Validation is written as `!(x > 0)` so that NaN falls into the error arm.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod expansion;
pub mod gauss;
pub mod geometry;
pub mod measures;
pub mod quadrature;
pub mod refutation;
pub mod scalar;

pub use error::{Error, Result};
pub use expansion::{
    coefficient_integrals, coefficients_closed, coefficients_quadrature, critical_angle, discriminant,
    predicted_gap, sign_bracket, sqrt_measure_expansion, CoefficientRoute, DiscriminantRoute,
    ExpansionCoefficients, SqrtExpansion,
};
pub use gauss::{erfc, gaussian_cdf, gaussian_density, gaussian_tail, gaussian_tail_deriv};
pub use geometry::{dilate, max_alpha, minkowski_combination, Point, Strip, Wedge};
pub use measures::{
    apex_wedge_measure_closed, gaussian_measure_montecarlo, halfspace_measure_closed,
    strip_measure_closed, wedge_measure, wedge_measure_montecarlo, MonteCarloEstimate, MIN_SAMPLES,
};
pub use quadrature::{integrate_semi_infinite, QuadratureConfig, QuadratureResult};
pub use refutation::{
    b_beta, b_beta_quadrature, b_second_derivative, find_b_violation, gbm_gap, gbm_scan, BConjReport,
    BShape, GapReport, ScanCell,
};
pub use scalar::Scalar;

pub type Wedge64 = Wedge<f64>;
pub type Strip64 = Strip<f64>;
pub type Point64 = Point<f64>;
pub type QuadratureConfig64 = QuadratureConfig<f64>;
pub type QuadratureResult64 = QuadratureResult<f64>;
pub type MonteCarloEstimate64 = MonteCarloEstimate<f64>;
pub type ExpansionCoefficients64 = ExpansionCoefficients<f64>;
pub type GapReport64 = GapReport<f64>;
pub type BConjReport64 = BConjReport<f64>;
pub type BShape64 = BShape<f64>;

pub type Wedge32 = Wedge<f32>;
pub type Strip32 = Strip<f32>;
pub type QuadratureConfig32 = QuadratureConfig<f32>;
pub type GapReport32 = GapReport<f32>;
