//! Best-possible lower and upper bounds on the distribution function of
//! `X + Y` for two normal marginals with arbitrary (unknown) dependence.
//!
//! For a fixed evaluation point `z` the objective
//!
//! ```text
//! psi(x) = Phi((x - mu_x)/sigma_x) + Phi((z - x - mu_y)/sigma_y)
//! ```
//!
//! has exactly two interior extrema when the scales differ; equating the two
//! density terms reduces the stationarity condition to a quadratic in `x`.
//! The lower bound is `max(psi_max - 1, 0)` and the upper bound is
//! `min(psi_min, 1)`. With equal scales the quadratic degenerates to a
//! linear equation and both bounds collapse to closed forms.
//!
//! [`grid_oracle`] evaluates the same envelopes by brute force for arbitrary
//! marginal CDFs; it serves as the independent cross-check of the analytic
//! path.

use crate::error::{Error, Result};
use crate::normal::{cdf_raw, pdf_raw, NormalMarginal};

/// Relative tolerance under which the two scales are routed to the
/// closed-form equal-scale path.
const SIGMA_EQUALITY_RTOL: f64 = 1e-12;

/// The pair of normal marginals whose sum is being bounded.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SumProblem {
    x: NormalMarginal,
    y: NormalMarginal,
}

/// Coefficients of the stationarity quadratic `alpha x^2 + beta x + gamma = 0`.
///
/// `is_linear` is set when the scales agree to within [`SIGMA_EQUALITY_RTOL`];
/// in that case `alpha` is exactly zero and the remaining coefficients are
/// those of the linear equation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadraticCoefficients {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    /// `beta^2 - 4 alpha gamma`, evaluated in a cancellation-free form.
    pub discriminant: f64,
    pub is_linear: bool,
}

/// Stationary points of the objective, sorted ascending in the quadratic case.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CriticalPoints {
    /// Equal scales: the single stationary point.
    Linear(f64),
    /// Distinct scales: both roots of the quadratic.
    Quadratic { low: f64, high: f64 },
}

impl CriticalPoints {
    pub fn points(&self) -> Vec<f64> {
        match *self {
            CriticalPoints::Linear(x0) => vec![x0],
            CriticalPoints::Quadratic { low, high } => vec![low, high],
        }
    }
}

/// One evaluation point of the bound curves.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundPoint {
    pub z: f64,
    pub lower: f64,
    pub upper: f64,
}

/// Bounds sampled on a strictly increasing grid; both components are
/// nondecreasing across the curve.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundCurve {
    points: Vec<BoundPoint>,
}

impl BoundCurve {
    pub fn points(&self) -> &[BoundPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, BoundPoint> {
        self.points.iter()
    }
}

impl SumProblem {
    pub fn new(x_marginal: NormalMarginal, y_marginal: NormalMarginal) -> Self {
        Self {
            x: x_marginal,
            y: y_marginal,
        }
    }

    pub fn x_marginal(&self) -> NormalMarginal {
        self.x
    }

    pub fn y_marginal(&self) -> NormalMarginal {
        self.y
    }

    /// `mu_x + mu_y`, the point where the equal-scale bounds jump.
    pub fn mean_sum(&self) -> f64 {
        self.x.mu() + self.y.mu()
    }

    fn is_linear(&self) -> bool {
        let (sx, sy) = (self.x.sigma(), self.y.sigma());
        (sx - sy).abs() <= SIGMA_EQUALITY_RTOL * sx.max(sy)
    }

    /// Pooled scale used on the equal-scale path.
    fn common_sigma(&self) -> f64 {
        0.5 * (self.x.sigma() + self.y.sigma())
    }

    /// The objective `Phi((x - mu_x)/sigma_x) + Phi((z - x - mu_y)/sigma_y)`.
    pub fn psi(&self, z: f64, x: f64) -> f64 {
        cdf_raw(self.x.standardize(x)) + cdf_raw(self.y.standardize(z - x))
    }

    /// First derivative of [`psi`](Self::psi) in `x`.
    pub fn psi_derivative(&self, z: f64, x: f64) -> f64 {
        pdf_raw(self.x.standardize(x)) / self.x.sigma()
            - pdf_raw(self.y.standardize(z - x)) / self.y.sigma()
    }

    /// Coefficients of the stationarity equation at `z`.
    pub fn quadratic_coefficients(&self, z: f64) -> QuadraticCoefficients {
        let (mx, sx) = (self.x.mu(), self.x.sigma());
        let (my, sy) = (self.y.mu(), self.y.sigma());
        if self.is_linear() {
            let s2 = self.common_sigma() * self.common_sigma();
            let w = z - my;
            let beta = (z - my - mx) / s2;
            let gamma = (mx * mx - w * w) / (2.0 * s2);
            QuadraticCoefficients {
                alpha: 0.0,
                beta,
                gamma,
                discriminant: beta * beta,
                is_linear: true,
            }
        } else {
            let w = z - my;
            let alpha = 1.0 / (2.0 * sx * sx) - 1.0 / (2.0 * sy * sy);
            let beta = w / (sy * sy) - mx / (sx * sx);
            let gamma = -w * w / (2.0 * sy * sy) + mx * mx / (2.0 * sx * sx) - (sy / sx).ln();
            // beta^2 - 4 alpha gamma collapses algebraically to
            //   ((z - mu_x - mu_y)^2 + 2 (sy^2 - sx^2) ln(sy/sx)) / (sx^2 sy^2),
            // a sum of nonnegative terms: positivity survives rounding.
            let d = z - mx - my;
            let discriminant =
                (d * d + 2.0 * (sy * sy - sx * sx) * (sy / sx).ln()) / (sx * sx * sy * sy);
            QuadraticCoefficients {
                alpha,
                beta,
                gamma,
                discriminant,
                is_linear: false,
            }
        }
    }

    /// Stationary points of the objective at `z`.
    ///
    /// With equal scales the single point is `(z - mu_y + mu_x) / 2`; at
    /// exactly `z = mu_x + mu_y` the objective is constant and no isolated
    /// point exists, which is reported as
    /// [`Error::DegenerateCriticalPoints`]. The bound evaluators never hit
    /// this case: they use the closed forms directly.
    pub fn critical_points(&self, z: f64) -> Result<CriticalPoints> {
        let qc = self.quadratic_coefficients(z);
        if qc.is_linear {
            if z - self.y.mu() - self.x.mu() == 0.0 {
                return Err(Error::DegenerateCriticalPoints);
            }
            Ok(CriticalPoints::Linear(0.5 * (z - self.y.mu() + self.x.mu())))
        } else {
            let (r1, r2) = stable_quadratic_roots(qc.alpha, qc.beta, qc.gamma, qc.discriminant);
            Ok(CriticalPoints::Quadratic {
                low: r1.min(r2),
                high: r1.max(r2),
            })
        }
    }

    /// Objective values at the maximising and minimising stationary points.
    fn psi_extremes(&self, z: f64) -> (f64, f64) {
        let qc = self.quadratic_coefficients(z);
        debug_assert!(!qc.is_linear);
        let (r1, r2) = stable_quadratic_roots(qc.alpha, qc.beta, qc.gamma, qc.discriminant);
        let (p1, p2) = (self.psi(z, r1), self.psi(z, r2));
        if p1 >= p2 {
            (p1, p2)
        } else {
            (p2, p1)
        }
    }

    /// Greatest lower bound `G_lower(z)` valid for every dependence structure.
    pub fn lower_bound(&self, z: f64) -> f64 {
        if self.is_linear() {
            let mean = self.mean_sum();
            if z <= mean {
                0.0
            } else {
                let t = (z - mean) / (2.0 * self.common_sigma());
                (2.0 * cdf_raw(t) - 1.0).clamp(0.0, 1.0)
            }
        } else {
            let (psi_max, _) = self.psi_extremes(z);
            (psi_max - 1.0).clamp(0.0, 1.0)
        }
    }

    /// Least upper bound `G_upper(z)` valid for every dependence structure.
    pub fn upper_bound(&self, z: f64) -> f64 {
        if self.is_linear() {
            let mean = self.mean_sum();
            if z >= mean {
                1.0
            } else {
                let t = (z - mean) / (2.0 * self.common_sigma());
                (2.0 * cdf_raw(t)).clamp(0.0, 1.0)
            }
        } else {
            let (_, psi_min) = self.psi_extremes(z);
            psi_min.clamp(0.0, 1.0)
        }
    }

    /// Evaluates both bounds over a finite, strictly increasing grid.
    pub fn bound_curve(&self, z_grid: &[f64]) -> Result<BoundCurve> {
        validate_strictly_increasing(z_grid)?;
        let mut points = Vec::with_capacity(z_grid.len());
        let mut run_lower = 0.0_f64;
        let mut run_upper = 0.0_f64;
        for &z in z_grid {
            let lower = self.lower_bound(z);
            let upper = self.upper_bound(z);
            // Both bounds are mathematically nondecreasing in z; absorb
            // sub-ulp rounding wobble so the curve invariant is exact.
            run_lower = if points.is_empty() { lower } else { run_lower.max(lower) };
            run_upper = if points.is_empty() { upper } else { run_upper.max(upper) };
            debug_assert!(run_lower - lower <= 1e-9 && run_upper - upper <= 1e-9);
            points.push(BoundPoint {
                z,
                lower: run_lower,
                upper: run_upper,
            });
        }
        Ok(BoundCurve { points })
    }
}

fn validate_strictly_increasing(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    if grid.iter().any(|z| !z.is_finite()) {
        return Err(Error::InvalidGrid);
    }
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidGrid);
    }
    Ok(())
}

/// Roots of `alpha x^2 + beta x + gamma` with the larger-magnitude root
/// computed first to avoid cancellation when `4 alpha gamma << beta^2`.
fn stable_quadratic_roots(alpha: f64, beta: f64, gamma: f64, discriminant: f64) -> (f64, f64) {
    let sqrt_disc = discriminant.sqrt();
    let q = if beta >= 0.0 {
        -0.5 * (beta + sqrt_disc)
    } else {
        -0.5 * (beta - sqrt_disc)
    };
    (q / alpha, gamma / q)
}

/// Brute-force envelope evaluation for arbitrary marginal CDFs.
///
/// Scans `x` over `[x_lo, x_hi]` with the given step (a single point when
/// `x_lo == x_hi`), takes the envelope of `F(x) + G(z - x)` and sharpens the
/// best cell with one local ternary pass. This is the direct counterpart of
/// the sup/inf definition of the bounds and is deliberately independent of
/// the analytic path above.
pub fn grid_oracle<F, G>(
    f_cdf: F,
    g_cdf: G,
    z: f64,
    x_lo: f64,
    x_hi: f64,
    step: f64,
) -> Result<(f64, f64)>
where
    F: Fn(f64) -> f64,
    G: Fn(f64) -> f64,
{
    if !x_lo.is_finite() || !x_hi.is_finite() || x_lo > x_hi {
        return Err(Error::EmptyGrid);
    }
    if !step.is_finite() || step <= 0.0 {
        return Err(Error::InvalidStep(step));
    }
    let objective = |x: f64| f_cdf(x) + g_cdf(z - x);

    let n = ((x_hi - x_lo) / step).ceil() as usize;
    let mut best_max = f64::NEG_INFINITY;
    let mut best_min = f64::INFINITY;
    let mut arg_max = x_lo;
    let mut arg_min = x_lo;
    for i in 0..=n {
        let x = (x_lo + i as f64 * step).min(x_hi);
        let s = objective(x);
        if s > best_max {
            best_max = s;
            arg_max = x;
        }
        if s < best_min {
            best_min = s;
            arg_min = x;
        }
    }

    let refine = |center: f64, maximize: bool| -> f64 {
        let mut a = (center - step).max(x_lo);
        let mut b = (center + step).min(x_hi);
        for _ in 0..100 {
            let m1 = a + (b - a) / 3.0;
            let m2 = b - (b - a) / 3.0;
            let keep_right = if maximize {
                objective(m1) < objective(m2)
            } else {
                objective(m1) > objective(m2)
            };
            if keep_right {
                a = m1;
            } else {
                b = m2;
            }
        }
        objective(0.5 * (a + b))
    };
    best_max = best_max.max(refine(arg_max, true));
    best_min = best_min.min(refine(arg_min, false));

    Ok((
        (best_max - 1.0).clamp(0.0, 1.0),
        best_min.clamp(0.0, 1.0),
    ))
}
