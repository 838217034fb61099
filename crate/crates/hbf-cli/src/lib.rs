//! Config parsing, experiment dispatch and result emission for the `hbf`
//! binary.
//!
//! The configuration is a flat JSON object; every key is optional and the
//! defaults reproduce the reference simulation setup (64x16 half-wavelength
//! ULAs, 4 RF chains and streams, 10 clusters of 10 rays, 2.5 degree
//! Laplacian spread, pi/3 arrival sector, 0.7 power decay). Angles are
//! given in degrees and converted to radians internally.

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use thiserror::Error;

use hbf_core::channel::{AngleInterval, ChannelParams};
use hbf_core::evaluate::{run_monte_carlo, EvalError, ExperimentResult, ExperimentSpec, Sweep};
use hbf_core::hybrid::{DesignConfig, SystemConfig};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("guard error: {0}")]
    Guard(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    /// Process exit code: 2 config, 3 guard, 4 i/o.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Guard(_) => 3,
            CliError::Io(_) => 4,
        }
    }
}

fn map_eval_error(e: EvalError) -> CliError {
    match e {
        EvalError::ExhaustiveGuard(msg) => CliError::Guard(format!("exhaustive guard exceeded: {msg}")),
        other => CliError::Config(other.to_string()),
    }
}

/// Experiment selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    SnrSweep,
    NsSweep,
    NtSweep,
    EsCompare,
    Single,
}

impl Experiment {
    pub fn label(&self) -> &'static str {
        match self {
            Experiment::SnrSweep => "snr-sweep",
            Experiment::NsSweep => "ns-sweep",
            Experiment::NtSweep => "nt-sweep",
            Experiment::EsCompare => "es-compare",
            Experiment::Single => "single",
        }
    }
}

impl std::str::FromStr for Experiment {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "snr-sweep" => Ok(Experiment::SnrSweep),
            "ns-sweep" => Ok(Experiment::NsSweep),
            "nt-sweep" => Ok(Experiment::NtSweep),
            "es-compare" => Ok(Experiment::EsCompare),
            "single" => Ok(Experiment::Single),
            other => Err(format!(
                "unknown experiment '{other}' (expected snr-sweep, ns-sweep, nt-sweep, es-compare or single)"
            )),
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl std::str::FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(format!("unknown format '{other}' (expected csv or json)")),
        }
    }
}

/// A fully specified run.
#[derive(Debug, Clone)]
pub struct RunSpec {
    pub experiment: Experiment,
    pub config_path: Option<PathBuf>,
    pub trials: usize,
    pub seed: u64,
    pub output_path: PathBuf,
    pub format: OutputFormat,
    /// CLI override for the config's `alpha_rel`.
    pub alpha_rel: Option<f64>,
    /// CLI override forcing the strict first-stream fidelity mode.
    pub q1_raw: bool,
}

/// Raw configuration document; every field optional, flat keys only.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    nt: Option<usize>,
    nr: Option<usize>,
    n_rf: Option<usize>,
    ns: Option<usize>,
    noise_var: Option<f64>,
    snr_db: Option<f64>,
    spacing_ratio: Option<f64>,
    n_cl: Option<usize>,
    n_ray: Option<usize>,
    angle_spread_deg: Option<f64>,
    decay_base: Option<f64>,
    aoa_sector_deg: Option<f64>,
    aod_start_deg: Option<f64>,
    aod_width_deg: Option<f64>,
    alpha_rel: Option<f64>,
    q1_raw: Option<bool>,
    snr_grid_db: Option<Vec<f64>>,
    es_snr_grid_db: Option<Vec<f64>>,
    ns_grid: Option<Vec<usize>>,
    nt_grid: Option<Vec<usize>>,
}

/// Sweep grids with the fixed SNR used by the ns/nt sweeps and `single`.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepGrids {
    pub snr_grid_db: Vec<f64>,
    pub es_snr_grid_db: Vec<f64>,
    pub ns_grid: Vec<usize>,
    pub nt_grid: Vec<usize>,
    pub snr_db: f64,
}

/// Everything `run` needs besides the RunSpec itself.
#[derive(Debug, Clone)]
pub struct ParsedConfig {
    pub sys: SystemConfig,
    pub chan: ChannelParams,
    pub design: DesignConfig,
    pub grids: SweepGrids,
    pub spacing_ratio: f64,
}

fn db_to_power(noise_var: f64, snr_db: f64) -> f64 {
    noise_var * 10f64.powf(snr_db / 10.0)
}

/// Parse a flat JSON config document. An empty document (or `{}`) yields
/// the full reference defaults; unknown keys and constraint violations are
/// rejected with a diagnostic naming the key.
pub fn parse_config(text: &str) -> Result<ParsedConfig, CliError> {
    let trimmed = text.trim();
    let raw: RawConfig = if trimmed.is_empty() {
        serde_json::from_str("{}").unwrap()
    } else {
        serde_json::from_str(trimmed).map_err(|e| CliError::Config(e.to_string()))?
    };

    let noise_var = raw.noise_var.unwrap_or(1.0);
    let snr_db = raw.snr_db.unwrap_or(20.0);
    let ns = raw.ns.unwrap_or(4);
    let n_rf = raw.n_rf.unwrap_or(ns);
    let sys = SystemConfig::new(
        raw.nt.unwrap_or(64),
        raw.nr.unwrap_or(16),
        n_rf,
        ns,
        db_to_power(noise_var, snr_db),
        noise_var,
    )
    .map_err(|e| CliError::Config(e.to_string()))?;

    let spacing_ratio = raw.spacing_ratio.unwrap_or(0.5);
    if !(spacing_ratio > 0.0) || !spacing_ratio.is_finite() {
        return Err(CliError::Config(format!(
            "spacing_ratio must be positive, got {spacing_ratio}"
        )));
    }

    let chan = ChannelParams {
        num_clusters: raw.n_cl.unwrap_or(10),
        rays_per_cluster: raw.n_ray.unwrap_or(10),
        angle_spread_rad: raw.angle_spread_deg.unwrap_or(2.5).to_radians(),
        aod_mean_range: AngleInterval {
            start_rad: raw.aod_start_deg.unwrap_or(0.0).to_radians(),
            width_rad: raw.aod_width_deg.unwrap_or(360.0).to_radians(),
        },
        aoa_mean_sector_width: raw.aoa_sector_deg.unwrap_or(60.0).to_radians(),
        power_decay_base: raw.decay_base.unwrap_or(0.7),
    };
    chan.validate().map_err(|e| CliError::Config(e.to_string()))?;

    let design = DesignConfig {
        alpha_rel: raw.alpha_rel.unwrap_or(1e-6),
        q1_raw: raw.q1_raw.unwrap_or(false),
    };
    design
        .validate()
        .map_err(|e| CliError::Config(e.to_string()))?;

    let grids = SweepGrids {
        snr_grid_db: raw.snr_grid_db.unwrap_or_else(|| vec![-10.0, 0.0, 10.0, 20.0]),
        es_snr_grid_db: raw
            .es_snr_grid_db
            .unwrap_or_else(|| vec![-10.0, -5.0, 0.0, 5.0, 10.0]),
        ns_grid: raw.ns_grid.unwrap_or_else(|| vec![1, 2, 4]),
        nt_grid: raw.nt_grid.unwrap_or_else(|| vec![16, 64, 256]),
        snr_db,
    };
    for (name, grid_empty) in [
        ("snr_grid_db", grids.snr_grid_db.is_empty()),
        ("es_snr_grid_db", grids.es_snr_grid_db.is_empty()),
        ("ns_grid", grids.ns_grid.is_empty()),
        ("nt_grid", grids.nt_grid.is_empty()),
    ] {
        if grid_empty {
            return Err(CliError::Config(format!("{name} must not be empty")));
        }
    }

    Ok(ParsedConfig {
        sys,
        chan,
        design,
        grids,
        spacing_ratio,
    })
}

/// Assemble the harness experiment from a parsed config and the selector.
pub fn build_experiment(cfg: &ParsedConfig, experiment: Experiment) -> ExperimentSpec {
    let sweep = match experiment {
        Experiment::SnrSweep => Sweep::Snr {
            grid_db: cfg.grids.snr_grid_db.clone(),
        },
        Experiment::NsSweep => Sweep::NumStreams {
            grid: cfg.grids.ns_grid.clone(),
            snr_db: cfg.grids.snr_db,
        },
        Experiment::NtSweep => Sweep::NumTxAntennas {
            grid: cfg.grids.nt_grid.clone(),
            snr_db: cfg.grids.snr_db,
        },
        Experiment::EsCompare => Sweep::EsCompare {
            grid_db: cfg.grids.es_snr_grid_db.clone(),
        },
        Experiment::Single => Sweep::Single {
            snr_db: cfg.grids.snr_db,
        },
    };
    ExperimentSpec {
        sweep,
        sys: cfg.sys,
        chan: cfg.chan.clone(),
        design: cfg.design,
        spacing_ratio: cfg.spacing_ratio,
    }
}

/// Render result rows as CSV (fixed header, full-precision floats).
pub fn to_csv(experiment: Experiment, rows: &[ExperimentResult]) -> String {
    let mut out = String::from("experiment,sweep_var,sweep_value,algorithm,mean_se,std_err,trials,seed\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            experiment.label(),
            r.sweep_var,
            r.sweep_value,
            r.algorithm,
            r.mean_se,
            r.std_err,
            r.trials,
            r.seed
        ));
    }
    out
}

/// Render result rows as pretty JSON.
pub fn to_json(experiment: Experiment, rows: &[ExperimentResult]) -> String {
    #[derive(serde::Serialize)]
    struct Row<'a> {
        experiment: &'a str,
        #[serde(flatten)]
        inner: &'a ExperimentResult,
    }
    let wrapped: Vec<Row> = rows
        .iter()
        .map(|r| Row {
            experiment: experiment.label(),
            inner: r,
        })
        .collect();
    let mut text = serde_json::to_string_pretty(&wrapped).expect("serialization cannot fail");
    text.push('\n');
    text
}

/// Write `contents` to `path` atomically (same-directory temp file, then
/// rename over the target).
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty());
    let mut tmp = tempfile::NamedTempFile::new_in(dir.unwrap_or_else(|| Path::new(".")))
        .map_err(|e| CliError::Io(format!("creating temp file near {}: {e}", path.display())))?;
    tmp.write_all(contents.as_bytes())
        .map_err(|e| CliError::Io(format!("writing {}: {e}", path.display())))?;
    tmp.persist(path)
        .map_err(|e| CliError::Io(format!("renaming into {}: {e}", path.display())))?;
    Ok(())
}

/// One-line human summary per grid point.
fn summarize(rows: &[ExperimentResult]) -> Vec<String> {
    let mut lines = Vec::new();
    let mut seen: Vec<(String, f64)> = Vec::new();
    for r in rows {
        let key = (r.sweep_var.clone(), r.sweep_value);
        if !seen.contains(&key) {
            seen.push(key.clone());
            let algs: Vec<String> = rows
                .iter()
                .filter(|x| x.sweep_var == key.0 && x.sweep_value == key.1)
                .map(|x| format!("{}={:.4}", x.algorithm, x.mean_se))
                .collect();
            lines.push(format!("{}={}: {}", key.0, key.1, algs.join(" ")));
        }
    }
    lines
}

/// Execute a run end to end: parse config, dispatch the Monte-Carlo sweep,
/// write the output file atomically and print a per-point summary.
pub fn run(spec: &RunSpec) -> Result<Vec<ExperimentResult>, CliError> {
    if spec.trials == 0 {
        return Err(CliError::Config("trials must be at least 1".into()));
    }
    let text = match &spec.config_path {
        Some(path) => fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("reading {}: {e}", path.display())))?,
        None => String::new(),
    };
    let mut cfg = parse_config(&text)?;
    if let Some(alpha) = spec.alpha_rel {
        cfg.design.alpha_rel = alpha;
        cfg.design
            .validate()
            .map_err(|e| CliError::Config(e.to_string()))?;
    }
    if spec.q1_raw {
        cfg.design.q1_raw = true;
    }

    let experiment = build_experiment(&cfg, spec.experiment);
    let rows = run_monte_carlo(&experiment, spec.trials, spec.seed).map_err(map_eval_error)?;

    let rendered = match spec.format {
        OutputFormat::Csv => to_csv(spec.experiment, &rows),
        OutputFormat::Json => to_json(spec.experiment, &rows),
    };
    write_atomic(&spec.output_path, &rendered)?;

    for line in summarize(&rows) {
        println!("{line}");
    }
    Ok(rows)
}
