//! Shared oracles and statistics helpers for the integration suites.
//!
//! Everything here is deliberately independent of the library's evaluation
//! paths: the normal CDF oracle goes through a Maclaurin series and a
//! Laplace continued fraction rather than the minimax kernels, so the two
//! can cross-check each other.
#![allow(dead_code)]

use sumbounds::{NormalMarginal, SumProblem};

/// The worked example: X ~ N(1, 0.1), Y ~ N(1.5, 0.15).
pub fn reference_problem() -> SumProblem {
    SumProblem::new(
        NormalMarginal::new(1.0, 0.1).unwrap(),
        NormalMarginal::new(1.5, 0.15).unwrap(),
    )
}

/// High-precision standard normal CDF oracle: `erfc(-t / sqrt(2)) / 2`.
pub fn oracle_phi(t: f64) -> f64 {
    0.5 * oracle_erfc(-t / std::f64::consts::SQRT_2)
}

/// Oracle complementary error function: Maclaurin series below 1.5,
/// Laplace continued fraction above.
pub fn oracle_erfc(x: f64) -> f64 {
    if x < 0.0 {
        return 2.0 - oracle_erfc(-x);
    }
    if x < 1.5 {
        1.0 - erf_series(x)
    } else {
        erfc_continued_fraction(x)
    }
}

/// `erf(x) = 2/sqrt(pi) * sum_n (-1)^n x^(2n+1) / (n! (2n+1))`, converging
/// rapidly for the |x| < 1.5 range it is used on.
fn erf_series(x: f64) -> f64 {
    let x2 = x * x;
    let mut power = x; // (-1)^n x^(2n+1) / n!
    let mut sum = x;
    for n in 1..200 {
        power *= -x2 / n as f64;
        let contribution = power / (2 * n + 1) as f64;
        sum += contribution;
        if contribution.abs() <= 1e-20 * sum.abs() {
            break;
        }
    }
    std::f64::consts::FRAC_2_SQRT_PI * sum
}

/// Laplace continued fraction, evaluated backward at a depth that leaves
/// the truncation below double rounding for the given x:
/// `sqrt(pi) exp(x^2) erfc(x) = 1 / (x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))`.
fn erfc_continued_fraction(x: f64) -> f64 {
    let depth = if x >= 4.0 {
        32
    } else if x >= 2.5 {
        64
    } else {
        128
    };
    let mut tail = 0.0_f64;
    for k in (1..=depth).rev() {
        tail = (k as f64 / 2.0) / (x + tail);
    }
    let f = x + tail;
    // exp(-x^2) with the square split so the large part of the argument is
    // exact; the naive form loses ~x^2 * eps of relative accuracy.
    let xh = f64::from_bits(x.to_bits() & 0xffff_ffff_f800_0000);
    let xl = x - xh;
    let gauss = (-xh * xh).exp() * (-xl * (x + xh)).exp();
    gauss / (std::f64::consts::PI.sqrt() * f)
}

/// Oracle quantile by bisection on [`oracle_phi`].
pub fn oracle_phi_inv(p: f64) -> f64 {
    assert!(p > 0.0 && p < 1.0);
    let (mut lo, mut hi) = (-40.0_f64, 40.0_f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if oracle_phi(mid) < p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Kendall's rank correlation (no tie correction; inputs are continuous) via
/// merge-sort inversion counting, O(n log n).
pub fn kendall_tau(xs: &[f64], ys: &[f64]) -> f64 {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| xs[a].total_cmp(&xs[b]));
    let mut seq: Vec<f64> = order.iter().map(|&i| ys[i]).collect();
    let mut buf = vec![0.0; n];
    let discordant = count_inversions(&mut seq, &mut buf) as f64;
    1.0 - 4.0 * discordant / (n as f64 * (n as f64 - 1.0))
}

fn count_inversions(a: &mut [f64], buf: &mut [f64]) -> u64 {
    let n = a.len();
    if n < 2 {
        return 0;
    }
    let mid = n / 2;
    let (left, right) = a.split_at_mut(mid);
    let mut inversions = count_inversions(left, &mut buf[..mid]) + count_inversions(right, &mut buf[mid..]);
    let (mut i, mut j, mut k) = (0, 0, 0);
    while i < left.len() && j < right.len() {
        if left[i] <= right[j] {
            buf[k] = left[i];
            i += 1;
        } else {
            buf[k] = right[j];
            inversions += (left.len() - i) as u64;
            j += 1;
        }
        k += 1;
    }
    buf[k..k + left.len() - i].copy_from_slice(&left[i..]);
    buf[k + left.len() - i..n].copy_from_slice(&right[j..]);
    a.copy_from_slice(&buf[..n]);
    inversions
}

/// One-sample Kolmogorov-Smirnov statistic against the uniform law on (0, 1).
pub fn ks_uniform_statistic(samples: &[f64]) -> f64 {
    let mut sorted = samples.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    let n = sorted.len() as f64;
    sorted
        .iter()
        .enumerate()
        .map(|(i, &u)| {
            let low = (u - i as f64 / n).abs();
            let high = (u - (i as f64 + 1.0) / n).abs();
            low.max(high)
        })
        .fold(0.0, f64::max)
}

/// Empirical joint CDF of a pair sample at `(u, v)`.
pub fn empirical_copula(pairs: &[(f64, f64)], u: f64, v: f64) -> f64 {
    let hits = pairs.iter().filter(|(a, b)| *a <= u && *b <= v).count();
    hits as f64 / pairs.len() as f64
}

/// The x-range prescription used when cross-checking analytic bounds against
/// the brute-force envelope: ten pooled scales around both relevant centers.
pub fn oracle_x_range(problem: &SumProblem, z: f64) -> (f64, f64) {
    let mu_x = problem.x_marginal().mu();
    let center_y = z - problem.y_marginal().mu();
    let spread = 10.0 * problem.x_marginal().sigma().max(problem.y_marginal().sigma());
    (mu_x.min(center_y) - spread, mu_x.max(center_y) + spread)
}

/// Marginal CDF closures for [`sumbounds::grid_oracle`], built from the
/// oracle CDF rather than the library kernels.
pub fn oracle_marginal_cdfs(
    problem: &SumProblem,
) -> (impl Fn(f64) -> f64 + '_, impl Fn(f64) -> f64 + '_) {
    let x = problem.x_marginal();
    let y = problem.y_marginal();
    (
        move |t: f64| oracle_phi((t - x.mu()) / x.sigma()),
        move |t: f64| oracle_phi((t - y.mu()) / y.sigma()),
    )
}
