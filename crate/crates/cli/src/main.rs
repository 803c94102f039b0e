use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use soliton_core::SolitonKind;
use soliton_forge::error::{EXIT_CHECK_FAILED, EXIT_INPUT, EXIT_PASS};
use soliton_forge::{load_spec, run, CliError, Command, Options, TensorKind};

/// Check almost Ricci and almost Riemann solitons on coordinate charts.
#[derive(Debug, Parser)]
#[command(name = "soliton-forge", version)]
struct Cli {
    /// check | recover-lambda | classify | identities | curvature
    #[arg(value_parser = parse_command)]
    command: Command,

    /// Spec file (JSON).
    spec: PathBuf,

    /// Override the soliton kind of the spec: riemann | ricci.
    #[arg(long, value_parser = parse_kind)]
    kind: Option<SolitonKind>,

    /// Residual tolerance, relative to max(1, scale).
    #[arg(long, default_value_t = soliton_forge::run::DEFAULT_TOLERANCE)]
    tol: f64,

    /// Evaluate at one point instead of sampling, e.g. `--at 0,0,1`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    at: Option<Vec<f64>>,

    /// Write the JSON report to a file, or to stdout with `-`.
    #[arg(long)]
    json: Option<PathBuf>,

    /// Jet order of the point frames: 2 or 3.
    #[arg(long, default_value_t = soliton_forge::run::DEFAULT_ORDER)]
    order: usize,

    /// With `curvature --at`: riemann | ricci | scalar | weyl | conharmonic.
    #[arg(long, value_parser = parse_tensor)]
    tensor: Option<TensorKind>,
}

fn parse_command(s: &str) -> Result<Command, String> {
    s.parse().map_err(|e: CliError| e.to_string())
}

fn parse_kind(s: &str) -> Result<SolitonKind, String> {
    s.parse().map_err(|e: soliton_core::Error| e.to_string())
}

fn parse_tensor(s: &str) -> Result<TensorKind, String> {
    s.parse().map_err(|e: CliError| e.to_string())
}

fn execute(cli: &Cli) -> Result<bool, CliError> {
    let spec = load_spec(&cli.spec)?;
    let opts = Options {
        kind: cli.kind,
        tolerance: cli.tol,
        at: cli.at.clone(),
        order: cli.order,
        tensor: cli.tensor,
        threads: None,
    }
    .with_env_threads();
    let out = run(cli.command, &spec, &opts)?;
    let mut stdout = std::io::stdout().lock();
    let io = |path: &str, source| CliError::Io {
        path: path.to_string(),
        source,
    };
    match cli.json.as_deref() {
        Some(p) if p.as_os_str() == "-" => stdout
            .write_all(out.to_json().as_bytes())
            .map_err(|e| io("<stdout>", e))?,
        Some(p) => {
            std::fs::write(p, out.to_json()).map_err(|e| io(&p.display().to_string(), e))?;
            stdout
                .write_all(out.to_text(cli.command).as_bytes())
                .map_err(|e| io("<stdout>", e))?;
        }
        None => stdout
            .write_all(out.to_text(cli.command).as_bytes())
            .map_err(|e| io("<stdout>", e))?,
    }
    Ok(out.passed())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INPUT } else { EXIT_PASS });
        }
    };
    match execute(&cli) {
        Ok(true) => ExitCode::from(EXIT_PASS),
        Ok(false) => ExitCode::from(EXIT_CHECK_FAILED),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
