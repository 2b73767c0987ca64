//! Seeded sampling streams, empirical CDFs and the statistical containment
//! check of simulated sum distributions against the computed bounds.
//!
//! Sampling is split into fixed-size batches, one substream per batch, so
//! results are reproducible bit-for-bit and independent of how many worker
//! threads execute the batches.

use crate::copula::DependenceModel;
use crate::error::{Error, Result};
use crate::makarov::{BoundPoint, SumProblem};
use rand::RngCore;
use rand_chacha::ChaCha8Rng;
use rand_chacha::rand_core::SeedableRng;
use rayon::prelude::*;

/// Uniform-band confidence level used by [`verify_containment`].
pub const CONTAINMENT_DELTA: f64 = 0.01;

/// Default Monte-Carlo sample count.
pub const DEFAULT_SAMPLE_COUNT: usize = 100_000;

/// Samples drawn per substream batch.
const BATCH_SIZE: usize = 8192;

/// A deterministic generator identified by `(seed, stream_id)`.
///
/// ChaCha streams with distinct ids are statistically independent, which is
/// what makes the per-batch parallel sampling below reproducible.
#[derive(Debug, Clone)]
pub struct RandomStream {
    seed: u64,
    stream_id: u64,
    rng: ChaCha8Rng,
}

impl RandomStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream_id);
        Self {
            seed,
            stream_id,
            rng,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }
}

impl RngCore for RandomStream {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.rng.fill_bytes(dst)
    }
}

/// Draws `n` realizations of the sum under `model`, deterministically in
/// `seed` and independent of the number of worker threads.
pub fn sample_sums(
    problem: &SumProblem,
    model: &DependenceModel,
    n: usize,
    seed: u64,
) -> Vec<f64> {
    let batches = n.div_ceil(BATCH_SIZE);
    (0..batches)
        .into_par_iter()
        .map(|batch| {
            let count = BATCH_SIZE.min(n - batch * BATCH_SIZE);
            let mut stream = RandomStream::new(seed, batch as u64);
            (0..count)
                .map(|_| model.sample_sum(problem, &mut stream))
                .collect::<Vec<f64>>()
        })
        .reduce(Vec::new, |mut acc, mut chunk| {
            acc.append(&mut chunk);
            acc
        })
}

/// A sorted sample with step-function evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalCdf {
    samples: Vec<f64>,
}

impl EmpiricalCdf {
    /// Sorts and stores the sample; rejects empty or non-finite input.
    pub fn from_samples(mut samples: Vec<f64>) -> Result<Self> {
        if samples.is_empty() || samples.iter().any(|s| !s.is_finite()) {
            return Err(Error::InvalidSamples);
        }
        samples.sort_unstable_by(f64::total_cmp);
        Ok(Self { samples })
    }

    /// Fraction of samples `<= t`.
    pub fn eval(&self, t: f64) -> f64 {
        let below = self.samples.partition_point(|&s| s <= t);
        below as f64 / self.samples.len() as f64
    }

    pub fn n(&self) -> usize {
        self.samples.len()
    }

    /// The sorted sample.
    pub fn samples(&self) -> &[f64] {
        &self.samples
    }
}

/// Half-width of the distribution-free uniform confidence band:
/// `sqrt(ln(2/delta) / (2n))`.
pub fn dkw_epsilon(n: usize, delta: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::TooFewSamples { min: 1, got: 0 });
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidConfidence(delta));
    }
    Ok(((2.0 / delta).ln() / (2.0 * n as f64)).sqrt())
}

/// Outcome of one containment run: the worst excursions of the empirical
/// CDF below the lower bound and above the upper bound, against the DKW
/// half-width.
#[derive(Debug, Clone, PartialEq)]
pub struct ContainmentReport {
    pub model: DependenceModel,
    pub n: usize,
    pub epsilon: f64,
    pub max_violation_low: f64,
    pub max_violation_high: f64,
    pub passed: bool,
}

/// Worst positive excursions of the empirical CDF outside the bounds,
/// evaluated at the given points. Returns `(low, high)` where `low` is
/// `max(lower - ecdf)+` and `high` is `max(ecdf - upper)+`.
pub fn containment_violations(points: &[BoundPoint], ecdf: &EmpiricalCdf) -> (f64, f64) {
    let mut low = 0.0_f64;
    let mut high = 0.0_f64;
    for pt in points {
        let f = ecdf.eval(pt.z);
        low = low.max(pt.lower - f);
        high = high.max(f - pt.upper);
    }
    (low.max(0.0), high.max(0.0))
}

/// Draws `n` sums under `model`, builds the empirical CDF and checks it
/// against the bound curve over `z_grid` at confidence
/// [`CONTAINMENT_DELTA`]. Deterministic in `seed`.
pub fn verify_containment(
    problem: &SumProblem,
    model: &DependenceModel,
    n: usize,
    z_grid: &[f64],
    seed: u64,
) -> Result<ContainmentReport> {
    if n < 1000 {
        return Err(Error::TooFewSamples { min: 1000, got: n });
    }
    let curve = problem.bound_curve(z_grid)?;
    let ecdf = EmpiricalCdf::from_samples(sample_sums(problem, model, n, seed))?;
    let epsilon = dkw_epsilon(n, CONTAINMENT_DELTA)?;
    let (max_violation_low, max_violation_high) = containment_violations(curve.points(), &ecdf);
    Ok(ContainmentReport {
        model: *model,
        n,
        epsilon,
        max_violation_low,
        max_violation_high,
        passed: max_violation_low <= epsilon && max_violation_high <= epsilon,
    })
}

/// 200 equally spaced points covering `mean_sum +/- 4 (sigma_x + sigma_y)`.
pub fn default_z_grid(problem: &SumProblem) -> Vec<f64> {
    let half = 4.0 * (problem.x_marginal().sigma() + problem.y_marginal().sigma());
    let mean = problem.mean_sum();
    crate::linspace(mean - half, mean + half, 200)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::copula::DependenceModel;
    use crate::normal::NormalMarginal;

    fn reference_problem() -> SumProblem {
        SumProblem::new(
            NormalMarginal::new(1.0, 0.1).unwrap(),
            NormalMarginal::new(1.5, 0.15).unwrap(),
        )
    }

    #[test]
    fn ecdf_step_values() {
        let e = EmpiricalCdf::from_samples(vec![2.0, 1.0, 3.0]).unwrap();
        assert_eq!(e.eval(2.0), 2.0 / 3.0);
        assert_eq!(e.eval(0.5), 0.0);
        assert_eq!(e.eval(3.0), 1.0);
        assert_eq!(e.eval(10.0), 1.0);
    }

    #[test]
    fn ecdf_rejects_bad_samples() {
        assert_eq!(
            EmpiricalCdf::from_samples(vec![]),
            Err(Error::InvalidSamples)
        );
        assert!(EmpiricalCdf::from_samples(vec![1.0, f64::NAN]).is_err());
        assert!(EmpiricalCdf::from_samples(vec![f64::INFINITY]).is_err());
    }

    #[test]
    fn dkw_reference_values() {
        let e = dkw_epsilon(100_000, 0.01).unwrap();
        assert!((e - 0.005146997847).abs() <= 1e-9);
        // 1/sqrt(n) scaling is exact for a 4x sample-count increase.
        assert_eq!(dkw_epsilon(400_000, 0.01).unwrap(), e / 2.0);
        // Larger delta gives a narrower band.
        assert!(dkw_epsilon(100, 0.99).unwrap() < dkw_epsilon(100, 0.5).unwrap());
        assert!(dkw_epsilon(100, 0.5).unwrap() < dkw_epsilon(100, 0.01).unwrap());
    }

    #[test]
    fn dkw_domain_errors() {
        assert!(dkw_epsilon(0, 0.01).is_err());
        assert!(dkw_epsilon(10, 0.0).is_err());
        assert!(dkw_epsilon(10, 1.0).is_err());
    }

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let mut a = RandomStream::new(42, 0);
        let mut b = RandomStream::new(42, 0);
        let mut c = RandomStream::new(42, 1);
        let xs: Vec<u64> = (0..16).map(|_| a.next_u64()).collect();
        let ys: Vec<u64> = (0..16).map(|_| b.next_u64()).collect();
        let zs: Vec<u64> = (0..16).map(|_| c.next_u64()).collect();
        assert_eq!(xs, ys);
        assert_ne!(xs, zs);
        assert_eq!(a.seed(), 42);
        assert_eq!(c.stream_id(), 1);
    }

    #[test]
    fn sample_sums_deterministic_and_unbiased_mean() {
        let problem = reference_problem();
        let model = DependenceModel::gaussian(0.0).unwrap();
        let a = sample_sums(&problem, &model, 100_000, 7);
        let b = sample_sums(&problem, &model, 100_000, 7);
        assert_eq!(a, b);
        assert_eq!(a.len(), 100_000);
        let mean = a.iter().sum::<f64>() / a.len() as f64;
        assert!((mean - 2.5).abs() <= 0.002, "sample mean {mean}");
    }

    #[test]
    fn verify_containment_requires_enough_samples() {
        let problem = reference_problem();
        let model = DependenceModel::gaussian(0.0).unwrap();
        let grid = [2.0, 2.5, 3.0];
        assert_eq!(
            verify_containment(&problem, &model, 999, &grid, 1),
            Err(Error::TooFewSamples { min: 1000, got: 999 })
        );
    }

    #[test]
    fn default_grid_shape() {
        let problem = reference_problem();
        let grid = default_z_grid(&problem);
        assert_eq!(grid.len(), 200);
        assert!((grid[0] - 1.5).abs() < 1e-12);
        assert!((grid[199] - 3.5).abs() < 1e-12);
    }
}
