//! Standard Gaussian measure of wedges and strips, by quadrature, by closed
//! form where one exists, and by seeded Monte Carlo.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gauss::{gaussian_density, tail};
use crate::geometry::{check_alpha, Point, Wedge};
use crate::quadrature::{integrate_semi_infinite, QuadratureConfig, QuadratureResult};
use crate::scalar::{inv_sqrt_2pi, Scalar};

/// Minimum sample count accepted by [`wedge_measure_montecarlo`].
pub const MIN_SAMPLES: u64 = 1000;

/// Samples per independently seeded shard. Fixed so the estimate does not
/// depend on the number of worker threads.
const SHARD_SIZE: u64 = 1 << 16;

/// `γ₂(W) = 2∫₀^∞ T(x·tan α − s)·φ(x) dx`.
///
/// The x-integral runs over the half-plane `x ≥ 0` and the `y`-section of the
/// wedge above `x·tan α − s` has Gaussian mass `T(x·tan α − s)`. The flat
/// wedge (`α = 0`) goes through the same path.
pub fn wedge_measure<S: Scalar>(w: &Wedge<S>, cfg: &QuadratureConfig<S>) -> Result<QuadratureResult<S>> {
    let two = S::lit(2.0);
    let slope = w.slope();
    let shift = w.shift();
    integrate_semi_infinite(
        |x| two * tail(x * slope - shift) * gaussian_density(x),
        two * inv_sqrt_2pi::<S>(),
        cfg,
    )
}

/// `γ₂` of the cone with apex at the origin: `1/2 − α/π`.
pub fn apex_wedge_measure_closed<S: Scalar>(alpha: S) -> Result<S> {
    check_alpha(alpha)?;
    Ok(S::lit(0.5) - alpha / S::PI())
}

/// `γ₂` of the halfspace `{y ≥ −shift}`, i.e. `Φ(shift)`.
pub fn halfspace_measure_closed<S: Scalar>(shift: S) -> Result<S> {
    if !shift.is_finite() {
        return Err(Error::domain(format!("shift must be finite, got {shift}")));
    }
    Ok(tail(-shift))
}

/// `γ₂` of the strip `{|y| ≤ c}`: `1 − 2T(c)`.
pub fn strip_measure_closed<S: Scalar>(c: S) -> Result<S> {
    if !(c > S::zero()) {
        return Err(Error::domain(format!("strip half-width must be positive, got {c}")));
    }
    Ok(S::one() - S::lit(2.0) * tail(c))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MonteCarloEstimate<S> {
    pub mean: S,
    pub std_error: S,
    pub samples: u64,
    pub seed: u64,
}

impl<S: Scalar> MonteCarloEstimate<S> {
    /// Standardised difference to a reference value known to within
    /// `reference_error`.
    pub fn z_score(&self, reference: S, reference_error: S) -> S {
        let diff = self.mean - reference;
        let scale = (self.std_error * self.std_error + reference_error * reference_error).sqrt();
        if scale > S::zero() {
            diff / scale
        } else if diff == S::zero() {
            S::zero()
        } else {
            diff.signum() * S::infinity()
        }
    }
}

fn shard_hits<S, F>(seed: u64, shard: u64, count: u64, inside: &F) -> u64
where
    S: Scalar,
    StandardNormal: Distribution<S>,
    F: Fn(Point<S>) -> bool,
{
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(shard);
    (0..count)
        .filter(|_| {
            let x: S = rng.sample(StandardNormal);
            let y: S = rng.sample(StandardNormal);
            inside(Point::new(x, y))
        })
        .count() as u64
}

/// Hit-fraction estimate of the Gaussian measure of any planar set.
///
/// Shard `k` draws from a ChaCha8 generator keyed by `seed` on stream `k`,
/// so identical `(samples, seed)` give identical estimates regardless of how
/// the shards are scheduled.
pub fn gaussian_measure_montecarlo<S, F>(inside: F, samples: u64, seed: u64) -> Result<MonteCarloEstimate<S>>
where
    S: Scalar,
    StandardNormal: Distribution<S>,
    F: Fn(Point<S>) -> bool + Sync,
{
    if samples < MIN_SAMPLES {
        return Err(Error::domain(format!(
            "at least {MIN_SAMPLES} samples required, got {samples}"
        )));
    }
    let shards = samples.div_ceil(SHARD_SIZE);
    let hits: u64 = (0..shards)
        .into_par_iter()
        .map(|k| {
            let count = SHARD_SIZE.min(samples - k * SHARD_SIZE);
            shard_hits(seed, k, count, &inside)
        })
        .sum();
    let n = S::from_u64(samples).expect("sample count representable");
    let mean = S::from_u64(hits).expect("hit count representable") / n;
    let std_error = (mean * (S::one() - mean) / n).sqrt();
    Ok(MonteCarloEstimate {
        mean,
        std_error,
        samples,
        seed,
    })
}

pub fn wedge_measure_montecarlo<S>(w: &Wedge<S>, samples: u64, seed: u64) -> Result<MonteCarloEstimate<S>>
where
    S: Scalar,
    StandardNormal: Distribution<S>,
{
    let w = *w;
    gaussian_measure_montecarlo(move |p| w.contains(p), samples, seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Strip;
    use std::f64::consts::FRAC_PI_4;

    fn cfg() -> QuadratureConfig<f64> {
        QuadratureConfig::with_tolerance(1e-10).unwrap()
    }

    fn alpha_grid() -> Vec<f64> {
        (0..8).map(|i| 0.1 + 0.2 * i as f64).collect()
    }

    #[test]
    fn quadrature_examples() {
        let r = wedge_measure(&Wedge::apex(FRAC_PI_4).unwrap(), &cfg()).unwrap();
        assert!((r.value - 0.25).abs() <= r.error_bound);
        let r = wedge_measure(&Wedge::apex(0.0).unwrap(), &cfg()).unwrap();
        assert!((r.value - 0.5).abs() <= r.error_bound);
        // 1 − T(0.3), 40-digit reference
        let r = wedge_measure(&Wedge::new(0.0, 0.3).unwrap(), &cfg()).unwrap();
        assert!((r.value - 0.617_911_422_188_952_6).abs() <= 1e-10);
        assert!((r.value - halfspace_measure_closed(0.3).unwrap()).abs() <= 1e-10);
    }

    #[test]
    fn closed_forms() {
        assert_eq!(apex_wedge_measure_closed(0.0_f64).unwrap(), 0.5);
        assert!((apex_wedge_measure_closed(FRAC_PI_4).unwrap() - 0.25).abs() < 1e-16);
        // 1/2 − 1.3/π
        assert!((apex_wedge_measure_closed(1.3_f64).unwrap() - 0.086_197_147_961_072_13).abs() < 1e-16);
        assert!(apex_wedge_measure_closed(1.6_f64).is_err());
        assert!(apex_wedge_measure_closed(-0.1_f64).is_err());

        assert!(strip_measure_closed(40.0_f64).unwrap() >= 1.0 - 1e-300);
        assert!((strip_measure_closed(1.0_f64).unwrap() - 0.682_689_492_137_085_9).abs() < 1e-15);
        assert!((strip_measure_closed(0.5_f64).unwrap() - 0.382_924_922_548_026_2).abs() < 1e-15);
        assert!(strip_measure_closed(0.0_f64).is_err());
        assert!(strip_measure_closed(-1.0_f64).is_err());
    }

    #[test]
    fn apex_quadrature_matches_closed_form() {
        for alpha in alpha_grid() {
            let q = wedge_measure(&Wedge::apex(alpha).unwrap(), &cfg()).unwrap();
            let c = apex_wedge_measure_closed(alpha).unwrap();
            assert!((q.value - c).abs() <= 1e-9, "alpha {alpha}");
        }
    }

    #[test]
    fn monotone_in_shift_and_angle() {
        let shifts = [0.0, 0.05, 0.2, 1.0];
        let mut by_alpha: Vec<Vec<f64>> = Vec::new();
        for alpha in alpha_grid() {
            let row: Vec<f64> = shifts
                .iter()
                .map(|&s| wedge_measure(&Wedge::new(alpha, s).unwrap(), &cfg()).unwrap().value)
                .collect();
            for w in row.windows(2) {
                assert!(w[1] > w[0], "shift monotonicity at alpha {alpha}");
            }
            for v in &row {
                assert!((0.0..=1.0).contains(v));
            }
            by_alpha.push(row);
        }
        for j in 0..shifts.len() {
            for i in 1..by_alpha.len() {
                assert!(by_alpha[i][j] < by_alpha[i - 1][j], "angle monotonicity");
            }
        }
    }

    #[test]
    fn montecarlo_examples() {
        let half = wedge_measure_montecarlo(&Wedge::<f64>::apex(0.0).unwrap(), 1_000_000, 3).unwrap();
        assert!(half.z_score(0.5, 0.0).abs() <= 5.0);
        let a = wedge_measure_montecarlo(&Wedge::apex(FRAC_PI_4).unwrap(), 1_000_000, 42).unwrap();
        assert!(a.z_score(0.25, 0.0).abs() <= 5.0);
        let w = Wedge::new(1.3, 0.1).unwrap();
        let q = wedge_measure(&w, &cfg()).unwrap();
        let mc = wedge_measure_montecarlo(&w, 1_000_000, 7).unwrap();
        assert!(mc.z_score(q.value, q.error_bound).abs() <= 5.0);
        assert_eq!(mc.samples, 1_000_000);
        assert_eq!(mc.seed, 7);
    }

    #[test]
    fn montecarlo_is_deterministic() {
        let w = Wedge::new(0.9, 0.2).unwrap();
        let a = wedge_measure_montecarlo(&w, 200_001, 11).unwrap();
        let b = wedge_measure_montecarlo(&w, 200_001, 11).unwrap();
        assert_eq!(a, b);
        let c = wedge_measure_montecarlo(&w, 200_001, 12).unwrap();
        assert_ne!(a.mean, c.mean);
        // the result does not depend on the worker count
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let serial = pool.install(|| wedge_measure_montecarlo(&w, 200_001, 11).unwrap());
        assert_eq!(a, serial);
    }

    #[test]
    fn montecarlo_bounds_and_errors() {
        assert!(wedge_measure_montecarlo(&Wedge::apex(0.3).unwrap(), 999, 0).is_err());
        let strip = Strip::new(1.0_f64).unwrap();
        let est = gaussian_measure_montecarlo(|p| strip.contains(p), 100_000, 5).unwrap();
        assert!((0.0..=1.0).contains(&est.mean));
        assert!(est.std_error >= 0.0);
        assert!(est.z_score(strip_measure_closed(1.0).unwrap(), 0.0).abs() <= 5.0);
        let none = gaussian_measure_montecarlo(|_: Point<f64>| false, 1000, 5).unwrap();
        assert_eq!(none.mean, 0.0);
        assert_eq!(none.std_error, 0.0);
        assert_eq!(none.z_score(0.0, 0.0), 0.0);
    }
}
