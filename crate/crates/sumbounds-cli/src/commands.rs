//! The three subcommand implementations.

use crate::config::{OutputFormat, RunConfig};
use crate::svg::{self, Series};
use crate::{fmt_sig10, CliError};
use std::path::Path;
use sumbounds::{
    dkw_epsilon, linspace, montecarlo, sample_sums, verify_containment, BoundCurve, BoundPoint,
    ContainmentReport, DependenceModel, EmpiricalCdf, NormalMarginal, SumProblem,
};

fn problem_from(cfg: &RunConfig) -> Result<SumProblem, CliError> {
    Ok(SumProblem::new(
        NormalMarginal::new(cfg.mu_x, cfg.sigma_x)?,
        NormalMarginal::new(cfg.mu_y, cfg.sigma_y)?,
    ))
}

fn z_grid(cfg: &RunConfig) -> Vec<f64> {
    linspace(cfg.z_min, cfg.z_max, cfg.z_points)
}

fn write_file(path: &Path, content: &str) -> Result<(), CliError> {
    std::fs::write(path, content)
        .map_err(|e| CliError::io(format!("cannot write {}: {e}", path.display())))
}

/// `bounds`: one CSV row per grid point, `z,lower,upper`.
pub fn run_bounds(cfg: &RunConfig) -> Result<(), CliError> {
    if cfg.format != OutputFormat::Csv {
        return Err(CliError::invalid("bounds writes csv; use --format csv"));
    }
    let problem = problem_from(cfg)?;
    let curve = problem.bound_curve(&z_grid(cfg))?;
    let mut out = String::from("z,lower,upper\n");
    for pt in curve.iter() {
        out.push_str(&format!(
            "{},{},{}\n",
            fmt_sig10(pt.z),
            fmt_sig10(pt.lower),
            fmt_sig10(pt.upper)
        ));
    }
    write_file(&cfg.out, &out)
}

/// `verify`: one report row per model; returns whether every model passed.
///
/// `shift_upper` is a test hook that lowers the upper bound curve by the
/// given amount before the containment check, to exercise the failure path.
pub fn run_verify(cfg: &RunConfig, shift_upper: Option<f64>) -> Result<bool, CliError> {
    if cfg.format != OutputFormat::Csv {
        return Err(CliError::invalid("verify writes csv; use --format csv"));
    }
    if cfg.models.is_empty() {
        return Err(CliError::invalid(
            "verify needs at least one dependence model\n\
             usage: sumbounds verify --model gaussian:0 --model gaussian:1 \
             --model clayton:2.5 --model gumbel:2.5",
        ));
    }
    let problem = problem_from(cfg)?;
    let grid = z_grid(cfg);
    let mut out = String::from("model,param,n,epsilon,max_violation_low,max_violation_high,passed\n");
    let mut all_passed = true;
    for model in &cfg.models {
        let report = match shift_upper {
            None => verify_containment(&problem, model, cfg.n_samples, &grid, cfg.seed)?,
            Some(delta) => corrupted_containment(&problem, model, cfg, &grid, delta)?,
        };
        all_passed &= report.passed;
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            model.family().name(),
            fmt_sig10(model.parameter()),
            report.n,
            fmt_sig10(report.epsilon),
            fmt_sig10(report.max_violation_low),
            fmt_sig10(report.max_violation_high),
            report.passed
        ));
    }
    write_file(&cfg.out, &out)?;
    Ok(all_passed)
}

/// The `--shift-upper` path: same pipeline as `verify_containment`, with the
/// upper curve deliberately displaced downward.
fn corrupted_containment(
    problem: &SumProblem,
    model: &DependenceModel,
    cfg: &RunConfig,
    grid: &[f64],
    delta: f64,
) -> Result<ContainmentReport, CliError> {
    let curve = problem.bound_curve(grid)?;
    let shifted: Vec<BoundPoint> = curve
        .iter()
        .map(|pt| BoundPoint {
            z: pt.z,
            lower: pt.lower,
            upper: (pt.upper - delta).max(0.0),
        })
        .collect();
    let ecdf =
        EmpiricalCdf::from_samples(sample_sums(problem, model, cfg.n_samples, cfg.seed))?;
    let epsilon = dkw_epsilon(cfg.n_samples, montecarlo::CONTAINMENT_DELTA)?;
    let (low, high) = montecarlo::containment_violations(&shifted, &ecdf);
    Ok(ContainmentReport {
        model: *model,
        n: cfg.n_samples,
        epsilon,
        max_violation_low: low,
        max_violation_high: high,
        passed: low <= epsilon && high <= epsilon,
    })
}

/// Everything `figure` plots: the bound curve plus one empirical CDF per
/// model, all evaluated on the same grid.
pub struct FigureData {
    pub grid: Vec<f64>,
    pub curve: BoundCurve,
    pub empirical: Vec<(DependenceModel, Vec<f64>)>,
}

pub fn figure_data(cfg: &RunConfig) -> Result<FigureData, CliError> {
    let problem = problem_from(cfg)?;
    let grid = z_grid(cfg);
    let curve = problem.bound_curve(&grid)?;
    let mut empirical = Vec::new();
    for model in &cfg.models {
        let ecdf =
            EmpiricalCdf::from_samples(sample_sums(&problem, model, cfg.n_samples, cfg.seed))?;
        empirical.push((*model, grid.iter().map(|&z| ecdf.eval(z)).collect()));
    }
    Ok(FigureData {
        grid,
        curve,
        empirical,
    })
}

const MODEL_COLORS: [&str; 5] = ["#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf"];

/// `figure`: bounds as dashed envelopes, one empirical CDF polyline per
/// model, legend and axis labels. Deterministic for a fixed seed.
pub fn run_figure(cfg: &RunConfig) -> Result<(), CliError> {
    if cfg.format != OutputFormat::Svg {
        return Err(CliError::invalid("figure writes svg; use --format svg"));
    }
    if cfg.models.is_empty() {
        return Err(CliError::invalid(
            "figure needs at least one dependence model (or a --preset)",
        ));
    }
    let data = figure_data(cfg)?;
    let mut series = Vec::new();
    series.push(Series {
        label: "lower bound".to_string(),
        color: "#1f77b4",
        dashed: true,
        points: data
            .curve
            .iter()
            .map(|pt| (pt.z, pt.lower))
            .collect(),
    });
    series.push(Series {
        label: "upper bound".to_string(),
        color: "#d62728",
        dashed: true,
        points: data
            .curve
            .iter()
            .map(|pt| (pt.z, pt.upper))
            .collect(),
    });
    for (i, (model, values)) in data.empirical.iter().enumerate() {
        series.push(Series {
            label: format!("{}({})", model.family().name(), model.parameter()),
            color: MODEL_COLORS[i % MODEL_COLORS.len()],
            dashed: false,
            points: data.grid.iter().copied().zip(values.iter().copied()).collect(),
        });
    }
    let svg = svg::render(
        "Bounds for the distribution of X + Y",
        "z",
        "probability",
        (cfg.z_min, cfg.z_max),
        (0.0, 1.0),
        &series,
    );
    write_file(&cfg.out, &svg)
}
