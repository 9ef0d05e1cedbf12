use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use warpsol_cli::config::parse_config;
use warpsol_cli::report::OutputSink;
use warpsol_cli::run::{run, Command, GlobalOpts};
use warpsol_cli::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "warpsol",
    version,
    about = "Mean curvature flow solitons in warped products: slices, radial graphs, spectra, oscillation tests"
)]
struct Cli {
    /// TOML run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory for JSON/CSV artifacts.
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,

    /// csv also writes curve dumps; json writes only the JSON report.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Csv)]
    format: OutputFormat,

    /// Overrides the residual tolerance of `verify`.
    #[arg(long, global = true)]
    tol: Option<f64>,

    /// Overwrite existing output files.
    #[arg(long, global = true)]
    force: bool,

    /// Worker threads for independent sweep items.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,

    #[command(subcommand)]
    command: Commands,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
enum Commands {
    /// Locate soliton slices (roots of the soliton function).
    Slices,
    /// Integrate one radial graph shot.
    Shoot,
    /// Plane translator curve vs its closed form.
    Curve,
    /// Sweep initial heights and probe entire-graph existence.
    ProbeEntire,
    /// Bottom of the spectrum of a weighted Sturm-Liouville problem.
    Spectrum,
    /// Cauchy problem zero counting and oscillation conditions.
    Oscillate,
    /// Fit a volume/area profile and derive parabolicity flags.
    ClassifyGrowth,
    /// Replay the exact-soliton residual suite.
    Verify,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // Help/version requests are not failures.
            if err.use_stderr() {
                eprint!("{err}");
                return ExitCode::from(1);
            }
            print!("{err}");
            return ExitCode::SUCCESS;
        }
    };

    match execute(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(3),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}

fn execute(cli: &Cli) -> Result<bool, CliError> {
    let command = match cli.command {
        Commands::Slices => Command::Slices,
        Commands::Shoot => Command::Shoot,
        Commands::Curve => Command::Curve,
        Commands::ProbeEntire => Command::ProbeEntire,
        Commands::Spectrum => Command::Spectrum,
        Commands::Oscillate => Command::Oscillate,
        Commands::ClassifyGrowth => Command::ClassifyGrowth,
        Commands::Verify => Command::Verify,
    };

    let config = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| {
                CliError::Usage(format!("cannot read config {}: {e}", path.display()))
            })?;
            Some(parse_config(&text)?)
        }
        None => None,
    };

    // The per-run [output] block supplies defaults; flags override.
    let mut out_dir = cli.out.clone();
    let mut write_curves = matches!(cli.format, OutputFormat::Csv);
    if let Some(cfg) = &config {
        if let Some(output) = &cfg.output {
            if out_dir.as_os_str() == "." {
                if let Some(path) = &output.path {
                    out_dir = PathBuf::from(path);
                }
            }
            if let Some(format) = &output.format {
                write_curves = format == "csv";
            }
        }
    }

    let sink = OutputSink::new(&out_dir, cli.force, write_curves);
    let opts = GlobalOpts {
        tol: cli.tol,
        jobs: cli.jobs.max(1),
    };
    run(command, config.as_ref(), &sink, &opts)
}
