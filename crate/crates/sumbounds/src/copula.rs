//! Dependence structures on the unit square: the universal copula envelopes,
//! Clayton/Gumbel/Gaussian copula CDFs, and exact samplers for each family.
//!
//! The Archimedean samplers use frailty constructions (a shared positive
//! latent factor mixing independent exponentials), which are exact and
//! rejection-free. The Gaussian sampler is the closed-form Cholesky
//! construction mapped through the normal CDF.

use crate::error::{Error, Result};
use crate::makarov::SumProblem;
use crate::normal::{cdf_raw, inv_raw, pdf_raw};
use rand::distr::Open01;
use rand::Rng;
use rand_distr::{Distribution, Gamma, StandardNormal};

/// A point of the unit square, both coordinates in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitPair {
    u: f64,
    v: f64,
}

impl UnitPair {
    pub fn new(u: f64, v: f64) -> Result<Self> {
        for w in [u, v] {
            if !(0.0..=1.0).contains(&w) {
                return Err(Error::UnitIntervalViolation(w));
            }
        }
        Ok(Self { u, v })
    }

    pub fn u(&self) -> f64 {
        self.u
    }

    pub fn v(&self) -> f64 {
        self.v
    }
}

/// Countermonotone envelope `W(u, v) = max(u + v - 1, 0)`; the pointwise
/// lower bound of every copula.
pub fn frechet_lower(p: UnitPair) -> f64 {
    (p.u + p.v - 1.0).max(0.0)
}

/// Comonotone envelope `M(u, v) = min(u, v)`; the pointwise upper bound of
/// every copula.
pub fn frechet_upper(p: UnitPair) -> f64 {
    p.u.min(p.v)
}

/// Dual of the lower envelope: `u + v - W(u, v) = min(u + v, 1)`.
pub fn dual_w(p: UnitPair) -> f64 {
    (p.u + p.v).min(1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CopulaFamily {
    Gaussian,
    Clayton,
    Gumbel,
}

impl CopulaFamily {
    pub fn name(&self) -> &'static str {
        match self {
            CopulaFamily::Gaussian => "gaussian",
            CopulaFamily::Clayton => "clayton",
            CopulaFamily::Gumbel => "gumbel",
        }
    }
}

/// A validated dependence structure: Gaussian with correlation `rho`,
/// or Clayton/Gumbel with parameter `theta`.
///
/// Parameter ranges are enforced at construction, so evaluation and
/// sampling never see an invalid model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DependenceModel {
    family: CopulaFamily,
    parameter: f64,
}

impl DependenceModel {
    /// Gaussian copula, `-1 <= rho <= 1`.
    pub fn gaussian(rho: f64) -> Result<Self> {
        if !rho.is_finite() || !(-1.0..=1.0).contains(&rho) {
            return Err(Error::InvalidCorrelation(rho));
        }
        Ok(Self {
            family: CopulaFamily::Gaussian,
            parameter: rho,
        })
    }

    /// Clayton copula, `theta > 0`.
    pub fn clayton(theta: f64) -> Result<Self> {
        if !theta.is_finite() || theta <= 0.0 {
            return Err(Error::InvalidCopulaParameter {
                family: "clayton",
                value: theta,
                constraint: "theta > 0",
            });
        }
        Ok(Self {
            family: CopulaFamily::Clayton,
            parameter: theta,
        })
    }

    /// Gumbel copula, `theta >= 1` (`theta = 1` is independence).
    pub fn gumbel(theta: f64) -> Result<Self> {
        if !theta.is_finite() || theta < 1.0 {
            return Err(Error::InvalidCopulaParameter {
                family: "gumbel",
                value: theta,
                constraint: "theta >= 1",
            });
        }
        Ok(Self {
            family: CopulaFamily::Gumbel,
            parameter: theta,
        })
    }

    pub fn family(&self) -> CopulaFamily {
        self.family
    }

    pub fn parameter(&self) -> f64 {
        self.parameter
    }

    /// Copula CDF `C(u, v)`.
    ///
    /// The Gaussian family is evaluated by adaptive quadrature of the
    /// conditional representation; it is meant for verification, not for
    /// hot loops.
    pub fn cdf(&self, p: UnitPair) -> f64 {
        match self.family {
            CopulaFamily::Clayton => clayton_cdf(self.parameter, p.u, p.v),
            CopulaFamily::Gumbel => gumbel_cdf(self.parameter, p.u, p.v),
            CopulaFamily::Gaussian => gaussian_copula_cdf(self.parameter, p.u, p.v),
        }
    }

    /// Draws one pair with this copula as its joint law and uniform margins.
    pub fn sample_pair<R: Rng + ?Sized>(&self, rng: &mut R) -> UnitPair {
        match self.family {
            CopulaFamily::Gaussian => {
                let rho = self.parameter;
                if rho == 1.0 {
                    let u = cdf_raw(rng.sample(StandardNormal));
                    UnitPair { u, v: u }
                } else if rho == -1.0 {
                    let u = cdf_raw(rng.sample(StandardNormal));
                    UnitPair { u, v: 1.0 - u }
                } else {
                    let z1: f64 = rng.sample(StandardNormal);
                    let z2: f64 = rng.sample(StandardNormal);
                    let y = rho * z1 + (1.0 - rho * rho).sqrt() * z2;
                    UnitPair {
                        u: cdf_raw(z1),
                        v: cdf_raw(y),
                    }
                }
            }
            CopulaFamily::Clayton => {
                // Frailty: V ~ Gamma(1/theta), U_i = (1 + E_i / V)^(-1/theta).
                let theta = self.parameter;
                let latent = Gamma::new(1.0 / theta, 1.0)
                    .expect("shape is positive by construction")
                    .sample(rng);
                let e1 = exp1(rng);
                let e2 = exp1(rng);
                UnitPair {
                    u: (1.0 + e1 / latent).powf(-1.0 / theta),
                    v: (1.0 + e2 / latent).powf(-1.0 / theta),
                }
            }
            CopulaFamily::Gumbel => {
                let theta = self.parameter;
                if theta == 1.0 {
                    UnitPair {
                        u: rng.sample(Open01),
                        v: rng.sample(Open01),
                    }
                } else {
                    // Frailty: S positive stable with index 1/theta,
                    // U_i = exp(-(E_i / S)^(1/theta)).
                    let alpha = 1.0 / theta;
                    let ln_s = ln_positive_stable(alpha, rng);
                    let e1 = exp1(rng);
                    let e2 = exp1(rng);
                    UnitPair {
                        u: (-(alpha * (e1.ln() - ln_s)).exp()).exp(),
                        v: (-(alpha * (e2.ln() - ln_s)).exp()).exp(),
                    }
                }
            }
        }
    }

    /// Draws one realization of `X + Y` with the marginals of `problem` and
    /// this dependence structure.
    pub fn sample_sum<R: Rng + ?Sized>(&self, problem: &SumProblem, rng: &mut R) -> f64 {
        let pair = self.sample_pair(rng);
        let mx = problem.x_marginal();
        let my = problem.y_marginal();
        let x = mx.mu() + mx.sigma() * inv_raw(pair.u);
        let y = my.mu() + my.sigma() * inv_raw(pair.v);
        x + y
    }
}

/// Exponential(1) by inversion.
fn exp1<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let u: f64 = rng.sample(Open01);
    -u.ln()
}

/// Log of a one-sided stable draw with index `alpha` in (0, 1), by the
/// Chambers-Mallows-Stuck transform. Log space keeps extreme angles finite
/// for indices near 0 or 1.
fn ln_positive_stable<R: Rng + ?Sized>(alpha: f64, rng: &mut R) -> f64 {
    debug_assert!(alpha > 0.0 && alpha < 1.0);
    let angle: f64 = {
        let u: f64 = rng.sample(Open01);
        std::f64::consts::PI * u
    };
    let w = exp1(rng);
    (alpha * angle).sin().ln() - angle.sin().ln() / alpha
        + ((1.0 - alpha) / alpha) * ((((1.0 - alpha) * angle).sin()).ln() - w.ln())
}

fn clayton_cdf(theta: f64, u: f64, v: f64) -> f64 {
    if u == 0.0 || v == 0.0 {
        return 0.0;
    }
    (u.powf(-theta) + v.powf(-theta) - 1.0).powf(-1.0 / theta)
}

fn gumbel_cdf(theta: f64, u: f64, v: f64) -> f64 {
    if u == 0.0 || v == 0.0 {
        return 0.0;
    }
    (-((-u.ln()).powf(theta) + (-v.ln()).powf(theta)).powf(1.0 / theta)).exp()
}

fn gaussian_copula_cdf(rho: f64, u: f64, v: f64) -> f64 {
    if u == 0.0 || v == 0.0 {
        return 0.0;
    }
    if u == 1.0 {
        return v;
    }
    if v == 1.0 {
        return u;
    }
    if rho == 0.0 {
        return u * v;
    }
    if rho == 1.0 {
        return u.min(v);
    }
    if rho == -1.0 {
        return (u + v - 1.0).max(0.0);
    }
    // C(u, v) = int_{-inf}^{PhiInv(u)} Phi((PhiInv(v) - rho s) / tau) phi(s) ds
    let a = inv_raw(u);
    let b = inv_raw(v);
    let tau = (1.0 - rho * rho).sqrt();
    let integrand = |s: f64| cdf_raw((b - rho * s) / tau) * pdf_raw(s);
    let lo = (a - 8.0).min(-8.5);
    adaptive_simpson(&integrand, lo, a, 1e-10, 40).clamp(0.0, 1.0)
}

fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, eps: f64, depth: u32) -> f64 {
    fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, fa: f64, b: f64, fb: f64) -> (f64, f64, f64) {
        let m = 0.5 * (a + b);
        let fm = f(m);
        ((b - a) / 6.0 * (fa + 4.0 * fm + fb), m, fm)
    }
    #[allow(clippy::too_many_arguments)]
    fn recurse<F: Fn(f64) -> f64>(
        f: &F,
        a: f64,
        fa: f64,
        b: f64,
        fb: f64,
        whole: f64,
        m: f64,
        fm: f64,
        eps: f64,
        depth: u32,
    ) -> f64 {
        let (left, lm, flm) = simpson(f, a, fa, m, fm);
        let (right, rm, frm) = simpson(f, m, fm, b, fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * eps {
            left + right + delta / 15.0
        } else {
            recurse(f, a, fa, m, fm, left, lm, flm, 0.5 * eps, depth - 1)
                + recurse(f, m, fm, b, fb, right, rm, frm, 0.5 * eps, depth - 1)
        }
    }
    let (fa, fb) = (f(a), f(b));
    let (whole, m, fm) = simpson(f, a, fa, b, fb);
    recurse(f, a, fa, b, fb, whole, m, fm, eps, depth)
}

/// Exact CDF of `X + Y` when the pair is bivariate normal with correlation
/// `rho`: the sum is normal with variance `sx^2 + 2 rho sx sy + sy^2`.
///
/// For the degenerate countermonotone case with equal scales the sum is a
/// point mass at `mu_x + mu_y` and the step function is returned.
pub fn gaussian_sum_cdf(problem: &SumProblem, rho: f64, z: f64) -> Result<f64> {
    if !rho.is_finite() || !(-1.0..=1.0).contains(&rho) {
        return Err(Error::InvalidCorrelation(rho));
    }
    let sx = problem.x_marginal().sigma();
    let sy = problem.y_marginal().sigma();
    let variance = (sx * sx + 2.0 * rho * sx * sy + sy * sy).max(0.0);
    let mean = problem.mean_sum();
    if variance == 0.0 {
        return Ok(if z >= mean { 1.0 } else { 0.0 });
    }
    Ok(cdf_raw((z - mean) / variance.sqrt()))
}
