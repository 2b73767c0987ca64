use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;
use sumbounds_cli::commands::{run_bounds, run_figure, run_verify};
use sumbounds_cli::config::{resolve, OutputFormat, PartialConfig};
use sumbounds_cli::CliError;

/// Best-possible bounds for the distribution of a sum of two dependent
/// normal random variables, with Monte-Carlo validation.
#[derive(Parser)]
#[command(name = "sumbounds", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write the lower/upper bound curves over a z grid as CSV
    Bounds(CommonOpts),
    /// Check simulated sum distributions against the bounds; exit 0 only if
    /// every model stays inside the confidence band
    Verify(VerifyOpts),
    /// Render the bounds and per-model empirical CDFs as a static SVG
    Figure(FigureOpts),
}

#[derive(Args, Clone, Default)]
struct CommonOpts {
    /// Mean of X (default 1.0)
    #[arg(long)]
    mu_x: Option<f64>,
    /// Standard deviation of X (default 0.1)
    #[arg(long)]
    sigma_x: Option<f64>,
    /// Mean of Y (default 1.5)
    #[arg(long)]
    mu_y: Option<f64>,
    /// Standard deviation of Y (default 0.15)
    #[arg(long)]
    sigma_y: Option<f64>,
    /// Left end of the evaluation window (default 1.8)
    #[arg(long)]
    z_min: Option<f64>,
    /// Right end of the evaluation window (default 3.2)
    #[arg(long)]
    z_max: Option<f64>,
    /// Number of grid points (default 200)
    #[arg(long)]
    z_points: Option<usize>,
    /// Dependence model as kind:param, e.g. gaussian:0.5, clayton:2.5,
    /// gumbel:2.5; repeatable
    #[arg(long = "model", value_name = "KIND:PARAM")]
    model: Vec<String>,
    /// Monte-Carlo sample count (default 100000)
    #[arg(long)]
    n: Option<usize>,
    /// Random seed (default 42)
    #[arg(long)]
    seed: Option<u64>,
    /// Output file path
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format: csv or svg (fixed per subcommand)
    #[arg(long)]
    format: Option<String>,
    /// key=value config file; command-line flags take precedence
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyOpts {
    #[command(flatten)]
    common: CommonOpts,
    /// Test hook: displace the upper bound downward before checking
    #[arg(long, hide = true)]
    shift_upper: Option<f64>,
}

#[derive(Args)]
struct FigureOpts {
    #[command(flatten)]
    common: CommonOpts,
    /// Model preset when no --model is given: figure1 (gaussian:0 and
    /// gaussian:1) or figure2 (clayton:2.5 and gumbel:2.5)
    #[arg(long)]
    preset: Option<String>,
}

impl CommonOpts {
    fn into_partial(self) -> PartialConfig {
        PartialConfig {
            mu_x: self.mu_x,
            sigma_x: self.sigma_x,
            mu_y: self.mu_y,
            sigma_y: self.sigma_y,
            z_min: self.z_min,
            z_max: self.z_max,
            z_points: self.z_points,
            models: self.model,
            n_samples: self.n,
            seed: self.seed,
            out: self.out,
            format: self.format,
        }
    }
}

fn dispatch(command: Command) -> Result<(), CliError> {
    match command {
        Command::Bounds(opts) => {
            let config_path = opts.config.clone();
            let cfg = resolve(
                opts.into_partial(),
                config_path.as_deref(),
                "bounds.csv",
                OutputFormat::Csv,
            )?;
            run_bounds(&cfg)
        }
        Command::Verify(opts) => {
            let config_path = opts.common.config.clone();
            let cfg = resolve(
                opts.common.into_partial(),
                config_path.as_deref(),
                "verify.csv",
                OutputFormat::Csv,
            )?;
            if run_verify(&cfg, opts.shift_upper)? {
                Ok(())
            } else {
                Err(CliError::invalid(format!(
                    "verification failed: at least one model leaves the confidence band (see {})",
                    cfg.out.display()
                )))
            }
        }
        Command::Figure(opts) => {
            let config_path = opts.common.config.clone();
            let mut partial = opts.common.into_partial();
            if partial.models.is_empty() {
                partial.models = match opts.preset.as_deref() {
                    None | Some("figure1") => {
                        vec!["gaussian:0".to_string(), "gaussian:1".to_string()]
                    }
                    Some("figure2") => vec!["clayton:2.5".to_string(), "gumbel:2.5".to_string()],
                    Some(other) => {
                        return Err(CliError::invalid(format!(
                            "unknown preset '{other}' (expected figure1 or figure2)"
                        )));
                    }
                };
            }
            let cfg = resolve(
                partial,
                config_path.as_deref(),
                "figure.svg",
                OutputFormat::Svg,
            )?;
            run_figure(&cfg)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprint!("{e}");
            return ExitCode::from(1);
        }
    };
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
