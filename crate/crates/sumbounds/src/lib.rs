//! Best-possible bounds for the distribution function of a sum of two
//! dependent normally distributed random variables.
//!
//! Given only the marginals of `X` and `Y`, the distribution `G` of
//! `Z = X + Y` satisfies `G_lower(z) <= G(z) <= G_upper(z)` for every
//! dependence structure, where the envelopes are the best possible. This
//! crate computes those envelopes analytically for normal marginals
//! ([`makarov`]), cross-checks them against a brute-force evaluation of the
//! defining sup/inf ([`makarov::grid_oracle`]), and validates them by
//! Monte-Carlo simulation under concrete dependence models — Gaussian,
//! Clayton and Gumbel copulas ([`copula`], [`montecarlo`]).

pub mod copula;
mod error;
pub mod makarov;
pub mod montecarlo;
pub mod normal;

pub use copula::{
    dual_w, frechet_lower, frechet_upper, gaussian_sum_cdf, CopulaFamily, DependenceModel,
    UnitPair,
};
pub use error::{Error, Result};
pub use makarov::{
    grid_oracle, BoundCurve, BoundPoint, CriticalPoints, QuadraticCoefficients, SumProblem,
};
pub use montecarlo::{
    dkw_epsilon, sample_sums, verify_containment, ContainmentReport, EmpiricalCdf, RandomStream,
};
pub use normal::{phi_cdf, phi_inv, phi_pdf, NormalMarginal};

/// `points` equally spaced values from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let step = (hi - lo) / (points - 1) as f64;
            (0..points)
                .map(|i| if i == points - 1 { hi } else { lo + i as f64 * step })
                .collect()
        }
    }
}
