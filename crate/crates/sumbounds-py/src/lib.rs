//! Python bindings for the sum-distribution bound computations.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use std::cell::RefCell;
use sumbounds::{montecarlo, DependenceModel, NormalMarginal, SumProblem, UnitPair};

fn value_err(e: sumbounds::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn model_label(model: &DependenceModel) -> String {
    format!("{}({})", model.family().name(), model.parameter())
}

/// One normal marginal, N(mu, sigma^2).
#[pyclass(frozen, name = "NormalMarginal", from_py_object)]
#[derive(Clone)]
struct PyNormalMarginal {
    inner: NormalMarginal,
}

#[pymethods]
impl PyNormalMarginal {
    #[new]
    fn new(mu: f64, sigma: f64) -> PyResult<Self> {
        Ok(Self {
            inner: NormalMarginal::new(mu, sigma).map_err(value_err)?,
        })
    }

    #[getter]
    fn mu(&self) -> f64 {
        self.inner.mu()
    }

    #[getter]
    fn sigma(&self) -> f64 {
        self.inner.sigma()
    }

    fn __repr__(&self) -> String {
        format!("NormalMarginal(mu={}, sigma={})", self.inner.mu(), self.inner.sigma())
    }
}

/// Coefficients of the stationarity quadratic at one evaluation point.
#[pyclass(frozen, name = "QuadraticCoefficients")]
struct PyQuadraticCoefficients {
    #[pyo3(get)]
    alpha: f64,
    #[pyo3(get)]
    beta: f64,
    #[pyo3(get)]
    gamma: f64,
    #[pyo3(get)]
    discriminant: f64,
    #[pyo3(get)]
    is_linear: bool,
}

/// The pair of normal marginals whose sum is bounded.
#[pyclass(frozen, name = "SumProblem")]
struct PySumProblem {
    inner: SumProblem,
}

#[pymethods]
impl PySumProblem {
    #[new]
    fn new(x_marginal: PyNormalMarginal, y_marginal: PyNormalMarginal) -> Self {
        Self {
            inner: SumProblem::new(x_marginal.inner, y_marginal.inner),
        }
    }

    #[getter]
    fn mean_sum(&self) -> f64 {
        self.inner.mean_sum()
    }

    /// Best-possible lower bound on P(X + Y <= z) over all dependence
    /// structures.
    fn lower_bound(&self, z: f64) -> f64 {
        self.inner.lower_bound(z)
    }

    /// Least upper bound on P(X + Y <= z) over all dependence structures.
    fn upper_bound(&self, z: f64) -> f64 {
        self.inner.upper_bound(z)
    }

    fn psi(&self, z: f64, x: f64) -> f64 {
        self.inner.psi(z, x)
    }

    fn psi_derivative(&self, z: f64, x: f64) -> f64 {
        self.inner.psi_derivative(z, x)
    }

    fn quadratic_coefficients(&self, z: f64) -> PyQuadraticCoefficients {
        let qc = self.inner.quadratic_coefficients(z);
        PyQuadraticCoefficients {
            alpha: qc.alpha,
            beta: qc.beta,
            gamma: qc.gamma,
            discriminant: qc.discriminant,
            is_linear: qc.is_linear,
        }
    }

    /// Stationary points of the objective, ascending.
    fn critical_points(&self, z: f64) -> PyResult<Vec<f64>> {
        Ok(self.inner.critical_points(z).map_err(value_err)?.points())
    }

    /// (z, lower, upper) triples over a strictly increasing grid.
    fn bound_curve(&self, z_grid: Vec<f64>) -> PyResult<Vec<(f64, f64, f64)>> {
        let curve = self.inner.bound_curve(&z_grid).map_err(value_err)?;
        Ok(curve.iter().map(|p| (p.z, p.lower, p.upper)).collect())
    }

    fn __repr__(&self) -> String {
        format!(
            "SumProblem(x=NormalMarginal(mu={}, sigma={}), y=NormalMarginal(mu={}, sigma={}))",
            self.inner.x_marginal().mu(),
            self.inner.x_marginal().sigma(),
            self.inner.y_marginal().mu(),
            self.inner.y_marginal().sigma()
        )
    }
}

/// A dependence structure: gaussian(rho), clayton(theta) or gumbel(theta).
#[pyclass(frozen, name = "DependenceModel")]
struct PyDependenceModel {
    inner: DependenceModel,
}

#[pymethods]
impl PyDependenceModel {
    #[staticmethod]
    fn gaussian(rho: f64) -> PyResult<Self> {
        Ok(Self {
            inner: DependenceModel::gaussian(rho).map_err(value_err)?,
        })
    }

    #[staticmethod]
    fn clayton(theta: f64) -> PyResult<Self> {
        Ok(Self {
            inner: DependenceModel::clayton(theta).map_err(value_err)?,
        })
    }

    #[staticmethod]
    fn gumbel(theta: f64) -> PyResult<Self> {
        Ok(Self {
            inner: DependenceModel::gumbel(theta).map_err(value_err)?,
        })
    }

    #[getter]
    fn family(&self) -> &'static str {
        self.inner.family().name()
    }

    #[getter]
    fn parameter(&self) -> f64 {
        self.inner.parameter()
    }

    /// Copula CDF C(u, v).
    fn cdf(&self, u: f64, v: f64) -> PyResult<f64> {
        Ok(self.inner.cdf(UnitPair::new(u, v).map_err(value_err)?))
    }

    fn __repr__(&self) -> String {
        format!("DependenceModel.{}", model_label(&self.inner))
    }
}

/// Result of one Monte-Carlo containment run.
#[pyclass(frozen, name = "ContainmentReport")]
struct PyContainmentReport {
    #[pyo3(get)]
    model: String,
    #[pyo3(get)]
    n: usize,
    #[pyo3(get)]
    epsilon: f64,
    #[pyo3(get)]
    max_violation_low: f64,
    #[pyo3(get)]
    max_violation_high: f64,
    #[pyo3(get)]
    passed: bool,
}

#[pymethods]
impl PyContainmentReport {
    fn __repr__(&self) -> String {
        format!(
            "ContainmentReport(model='{}', n={}, epsilon={}, max_violation_low={}, max_violation_high={}, passed={})",
            self.model, self.n, self.epsilon, self.max_violation_low, self.max_violation_high, self.passed
        )
    }
}

/// Standard normal CDF.
#[pyfunction]
fn phi_cdf(t: f64) -> PyResult<f64> {
    sumbounds::phi_cdf(t).map_err(value_err)
}

/// Standard normal density.
#[pyfunction]
fn phi_pdf(t: f64) -> PyResult<f64> {
    sumbounds::phi_pdf(t).map_err(value_err)
}

/// Standard normal quantile, p in (0, 1).
#[pyfunction]
fn phi_inv(p: f64) -> PyResult<f64> {
    sumbounds::phi_inv(p).map_err(value_err)
}

/// Countermonotone envelope W(u, v) = max(u + v - 1, 0).
#[pyfunction]
fn frechet_lower(u: f64, v: f64) -> PyResult<f64> {
    Ok(sumbounds::frechet_lower(
        UnitPair::new(u, v).map_err(value_err)?,
    ))
}

/// Comonotone envelope M(u, v) = min(u, v).
#[pyfunction]
fn frechet_upper(u: f64, v: f64) -> PyResult<f64> {
    Ok(sumbounds::frechet_upper(
        UnitPair::new(u, v).map_err(value_err)?,
    ))
}

/// Dual envelope min(u + v, 1).
#[pyfunction]
fn dual_w(u: f64, v: f64) -> PyResult<f64> {
    Ok(sumbounds::dual_w(UnitPair::new(u, v).map_err(value_err)?))
}

/// DKW uniform-band half-width sqrt(ln(2/delta) / (2n)).
#[pyfunction]
fn dkw_epsilon(n: usize, delta: f64) -> PyResult<f64> {
    sumbounds::dkw_epsilon(n, delta).map_err(value_err)
}

/// Exact CDF of the sum under a bivariate normal coupling.
#[pyfunction]
fn gaussian_sum_cdf(problem: &PySumProblem, rho: f64, z: f64) -> PyResult<f64> {
    sumbounds::gaussian_sum_cdf(&problem.inner, rho, z).map_err(value_err)
}

/// n realizations of the sum, deterministic in the seed.
#[pyfunction]
fn sample_sums(problem: &PySumProblem, model: &PyDependenceModel, n: usize, seed: u64) -> Vec<f64> {
    sumbounds::sample_sums(&problem.inner, &model.inner, n, seed)
}

/// Draws n sums, builds the empirical CDF and checks containment against
/// the bounds over the grid, at the 99% DKW band.
#[pyfunction]
fn verify_containment(
    problem: &PySumProblem,
    model: &PyDependenceModel,
    n: usize,
    z_grid: Vec<f64>,
    seed: u64,
) -> PyResult<PyContainmentReport> {
    let report = sumbounds::verify_containment(&problem.inner, &model.inner, n, &z_grid, seed)
        .map_err(value_err)?;
    Ok(PyContainmentReport {
        model: model_label(&report.model),
        n: report.n,
        epsilon: report.epsilon,
        max_violation_low: report.max_violation_low,
        max_violation_high: report.max_violation_high,
        passed: report.passed,
    })
}

/// Brute-force envelope of F(x) + G(z - x): returns (lower, upper) for
/// arbitrary marginal CDF callables.
#[pyfunction]
fn grid_oracle(
    f_cdf: Bound<'_, PyAny>,
    g_cdf: Bound<'_, PyAny>,
    z: f64,
    x_lo: f64,
    x_hi: f64,
    step: f64,
) -> PyResult<(f64, f64)> {
    let failure: RefCell<Option<PyErr>> = RefCell::new(None);
    let call = |f: &Bound<'_, PyAny>, x: f64| -> f64 {
        match f.call1((x,)).and_then(|v| v.extract::<f64>()) {
            Ok(v) => v,
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                f64::NAN
            }
        }
    };
    let result = sumbounds::grid_oracle(
        |x| call(&f_cdf, x),
        |y| call(&g_cdf, y),
        z,
        x_lo,
        x_hi,
        step,
    );
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    result.map_err(value_err)
}

/// 200-point default evaluation grid around the mean sum.
#[pyfunction]
fn default_z_grid(problem: &PySumProblem) -> Vec<f64> {
    montecarlo::default_z_grid(&problem.inner)
}

/// Equally spaced values from lo to hi inclusive.
#[pyfunction]
fn linspace(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    sumbounds::linspace(lo, hi, points)
}

#[pymodule]
fn sumbounds_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyNormalMarginal>()?;
    m.add_class::<PySumProblem>()?;
    m.add_class::<PyQuadraticCoefficients>()?;
    m.add_class::<PyDependenceModel>()?;
    m.add_class::<PyContainmentReport>()?;
    m.add_function(wrap_pyfunction!(phi_cdf, m)?)?;
    m.add_function(wrap_pyfunction!(phi_pdf, m)?)?;
    m.add_function(wrap_pyfunction!(phi_inv, m)?)?;
    m.add_function(wrap_pyfunction!(frechet_lower, m)?)?;
    m.add_function(wrap_pyfunction!(frechet_upper, m)?)?;
    m.add_function(wrap_pyfunction!(dual_w, m)?)?;
    m.add_function(wrap_pyfunction!(dkw_epsilon, m)?)?;
    m.add_function(wrap_pyfunction!(gaussian_sum_cdf, m)?)?;
    m.add_function(wrap_pyfunction!(sample_sums, m)?)?;
    m.add_function(wrap_pyfunction!(verify_containment, m)?)?;
    m.add_function(wrap_pyfunction!(grid_oracle, m)?)?;
    m.add_function(wrap_pyfunction!(default_z_grid, m)?)?;
    m.add_function(wrap_pyfunction!(linspace, m)?)?;
    Ok(())
}
