use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use qincompat_cli::{cmd_oracle, cmd_point, cmd_scaling, cmd_sweep, CliError, Overrides, RunConfig, Settings};

#[derive(Parser, Debug)]
#[command(name = "qincompat", version, about = "Quantum incompatibility of thermal estimation models")]
struct Cli {
    /// JSON run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory for CSV, SVG and JSON artifacts.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads for sweeps and suites [default: available parallelism].
    #[arg(long, global = true, env = "QINCOMPAT_THREADS")]
    threads: Option<usize>,
    /// Inverse temperature standing in for T = 0 [default: 1e4].
    #[arg(long, global = true)]
    beta_zero_proxy: Option<f64>,
    /// Per-entry quadrature tolerance [default: 1e-10].
    #[arg(long, global = true)]
    quad_tol: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// J, U, R, the Robertson margin and tilde-Z eigenvalues at one point.
    Point,
    /// R over an (h, T) grid: CSV table and heatmap.
    Sweep,
    /// Critical-scaling fit: CSV, log-log plot and fit JSON.
    Scaling,
    /// Cross-path, bound and pair-space verification suites.
    Oracle,
}

fn json(v: &impl serde::Serialize) -> Result<String, CliError> {
    serde_json::to_string_pretty(v).map_err(|e| CliError::Numerical(e.to_string()))
}

fn run(cli: Cli) -> Result<String, CliError> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(CliError::Config("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
    }
    let cfg = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None if matches!(cli.command, Command::Oracle) => RunConfig::default(),
        None => return Err(CliError::Config("--config is required".into())),
    };
    let ov = Overrides {
        out: cli.out.clone(),
        quad_tol: cli.quad_tol,
        beta_zero_proxy: cli.beta_zero_proxy,
    };
    let settings = Settings::resolve(&cfg, &ov)?;
    log::debug!("settings: {settings:?}");
    match cli.command {
        Command::Point => json(&cmd_point(&cfg, &settings)?),
        Command::Sweep => json(&cmd_sweep(&cfg, &settings)?),
        Command::Scaling => json(&cmd_scaling(&cfg, &settings)?),
        Command::Oracle => json(&cmd_oracle(&cfg, &settings)?),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { qincompat_cli::EXIT_CONFIG } else { 0 };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match run(cli) {
        Ok(text) => {
            // A closed pipe on stdout is not an error of the computation.
            let _ = writeln!(std::io::stdout(), "{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("qincompat: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
