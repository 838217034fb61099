use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use hbf_cli::{run, CliError, Experiment, OutputFormat, RunSpec};

/// One-bit hybrid beamforming simulator.
///
/// Designs hybrid precoder/combiner pairs with one-bit phase shifters over
/// clustered mmWave channels and reports Monte-Carlo spectral-efficiency
/// averages for the proposed design, a full-digital upper bound, a naive
/// sign-quantization baseline and (at small sizes) an exhaustive search.
#[derive(Debug, Parser)]
#[command(name = "hbf", version, about)]
struct Cli {
    /// Experiment to run: snr-sweep, ns-sweep, nt-sweep, es-compare or single.
    #[arg(long, short = 'e')]
    experiment: Experiment,

    /// Path to a flat JSON config; omitted means reference defaults.
    #[arg(long, short = 'c')]
    config: Option<PathBuf>,

    /// Channel realizations per grid point.
    #[arg(long, short = 't', default_value_t = 200)]
    trials: usize,

    /// Master seed; trial k draws from stream k of this seed.
    #[arg(long, short = 's', default_value_t = 1)]
    seed: u64,

    /// Output file path.
    #[arg(long, short = 'o')]
    out: PathBuf,

    /// Output format: csv or json.
    #[arg(long, short = 'f', default_value = "csv")]
    format: OutputFormat,

    /// Override the design regularizer (fraction of the top singular value).
    #[arg(long)]
    alpha_rel: Option<f64>,

    /// Strict first-stream fidelity: use the raw channel for the first
    /// equivalent channel instead of its rank-ns truncation.
    #[arg(long)]
    q1_raw: bool,
}

/// Cap worker threads from HBF_THREADS (0 or unset = automatic).
fn configure_threads() -> Result<(), CliError> {
    match std::env::var("HBF_THREADS") {
        Ok(raw) => {
            let n: usize = raw
                .trim()
                .parse()
                .map_err(|_| CliError::Config(format!("HBF_THREADS must be an integer, got '{raw}'")))?;
            if n == 0 {
                return Ok(());
            }
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global()
                .map_err(|e| CliError::Config(format!("thread pool setup failed: {e}")))
        }
        Err(std::env::VarError::NotPresent) => Ok(()),
        Err(e) => Err(CliError::Config(format!("HBF_THREADS unreadable: {e}"))),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let spec = RunSpec {
        experiment: cli.experiment,
        config_path: cli.config,
        trials: cli.trials,
        seed: cli.seed,
        output_path: cli.out,
        format: cli.format,
        alpha_rel: cli.alpha_rel,
        q1_raw: cli.q1_raw,
    };
    let outcome = configure_threads().and_then(|()| run(&spec).map(|_| ()));
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
