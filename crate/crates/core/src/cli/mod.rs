//! Command-line surface of the `spinhall` binary.
//!
//! Exit status: 0 on success, 2 on invalid arguments or configuration,
//! 3 when the fraction of flagged rows exceeds `max_flagged_fraction`,
//! 1 for any other failure.

pub mod config;
pub mod figures;
pub mod output;

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::atomic_medium::susceptibility;
use crate::beam_shifts::{shift_from_beam_integral, spatial_shift, GridSpec};
use crate::error::Error;
use crate::sweep_engine::{
    find_brewster_at, find_shift_sign_flip, find_transparency_windows, sweep, AxisRange, Scenario, SweepTable,
};

pub use config::{load_config, parse_config, write_config, ConfigError, OutputFormat, RunConfig};
pub use output::{RunManifest, Table};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_FLAGGED: i32 = 3;

/// Overrides `--threads` when the flag is absent.
pub const THREADS_ENV: &str = "SPINHALL_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "spinhall",
    version,
    about = "Photonic spin Hall shifts in a coherently controlled atomic-vapor cavity"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Named parameter set (fig2-ctl, fig2f-ctl, fig3-lambda, fig4-n, fig4-n-low-density)
    #[arg(long)]
    pub preset: Option<String>,
    /// TOML configuration file
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Incident angle in degrees
    #[arg(long, value_name = "DEG", allow_negative_numbers = true)]
    pub theta: Option<f64>,
    /// Probe detuning in units of γ
    #[arg(long, value_name = "GAMMA", allow_negative_numbers = true)]
    pub detuning: Option<f64>,
    /// Density parameter η in units of γ
    #[arg(long, value_name = "GAMMA", allow_negative_numbers = true)]
    pub eta: Option<f64>,
    /// Output file (directory for `reproduce`); stdout when absent
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<FormatArg>,
    /// Scan axis as MIN,MAX,COUNT (θ in degrees, or Δp for spectra)
    #[arg(long, value_name = "T0,T1,N", allow_hyphen_values = true)]
    pub grid: Option<String>,
    #[arg(long, value_name = "N")]
    pub threads: Option<usize>,
    /// Prefix CSV output with the manifest as `#` comment lines
    #[arg(long)]
    pub manifest_header: bool,
    #[arg(long, value_name = "FRACTION")]
    pub max_flagged_fraction: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum FormatArg {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// χ, ε2 and n versus detuning (or at --detuning)
    Susceptibility(CommonArgs),
    /// Spatial spin shift δp+ at --theta or over --grid
    Shift(CommonArgs),
    /// Angular spin shift Θ− at --theta or over --grid
    Angular(CommonArgs),
    /// Density map over the configured θ × Δp grid
    Sweep(CommonArgs),
    /// Brewster angle and δp+ sign flip at --detuning
    Brewster(CommonArgs),
    /// Transparency windows (local minima of χ2)
    Windows(CommonArgs),
    /// Closed form versus beam-centroid quadrature
    Oracle {
        #[command(flatten)]
        common: CommonArgs,
        /// Gauss–Legendre nodes per axis
        #[arg(long, default_value_t = 201)]
        nodes: usize,
    },
    /// Write the data sets behind a figure (fig2a … fig5d, or all)
    Reproduce {
        figure: String,
        #[command(flatten)]
        common: CommonArgs,
    },
}

#[derive(Debug)]
enum CliError {
    Validation(String),
    Failure(String),
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Validation(msg) => CliError::Validation(msg),
            Error::InvalidAngle { .. } => CliError::Validation(e.to_string()),
            other => CliError::Failure(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Failure(e.to_string())
    }
}

/// Parses `argv` (including the program name), runs the command and
/// returns the exit status.
pub fn run_command<I, T>(argv: I, stdout: &mut (dyn Write + Send), stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString>,
{
    let argv: Vec<std::ffi::OsString> = argv.into_iter().map(Into::into).collect();
    let command = argv.iter().skip(1).map(|a| a.to_string_lossy()).collect::<Vec<_>>().join(" ");
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(stderr, "{e}");
            return if e.use_stderr() { EXIT_VALIDATION } else { EXIT_OK };
        }
    };
    let threads = match thread_count(common_args(&cli.command)) {
        Ok(t) => t,
        Err(msg) => {
            let _ = writeln!(stderr, "error: {msg}");
            return EXIT_VALIDATION;
        }
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        builder = builder.num_threads(n);
    }
    let pool = match builder.build() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return EXIT_FAILURE;
        }
    };
    match pool.install(|| dispatch(&cli.command, &command, stdout)) {
        Ok(code) => code,
        Err(CliError::Validation(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_VALIDATION
        }
        Err(CliError::Failure(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_FAILURE
        }
    }
}

fn common_args(cmd: &Command) -> &CommonArgs {
    match cmd {
        Command::Susceptibility(c)
        | Command::Shift(c)
        | Command::Angular(c)
        | Command::Sweep(c)
        | Command::Brewster(c)
        | Command::Windows(c) => c,
        Command::Oracle { common, .. } | Command::Reproduce { common, .. } => common,
    }
}

fn thread_count(common: &CommonArgs) -> Result<Option<usize>, String> {
    let n = match common.threads {
        Some(n) => Some(n),
        None => match std::env::var(THREADS_ENV) {
            Ok(v) if !v.trim().is_empty() => Some(
                v.trim()
                    .parse::<usize>()
                    .map_err(|_| format!("{THREADS_ENV} must be a positive integer, got '{v}'"))?,
            ),
            _ => None,
        },
    };
    if n == Some(0) {
        return Err("thread count must be >= 1".into());
    }
    Ok(n)
}

/// Config from --config/--preset with command-line overrides applied.
fn resolve_config(common: &CommonArgs) -> Result<RunConfig, CliError> {
    let text = match &common.config {
        Some(path) => std::fs::read_to_string(path)
            .map_err(|e| CliError::Validation(format!("cannot read {}: {e}", path.display())))?,
        None => String::new(),
    };
    let mut cfg = parse_config(&text, common.preset.as_deref())?;
    if let Some(eta) = common.eta {
        cfg.medium.eta = eta;
    }
    if let Some(f) = common.format {
        cfg.output.format = match f {
            FormatArg::Csv => OutputFormat::Csv,
            FormatArg::Json => OutputFormat::Json,
        };
    }
    if let Some(out) = &common.out {
        cfg.output.path = Some(out.clone());
    }
    if common.manifest_header {
        cfg.output.manifest_header = true;
    }
    if let Some(f) = common.max_flagged_fraction {
        cfg.output.max_flagged_fraction = f;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn parse_grid(spec: &str) -> Result<AxisRange, CliError> {
    let parts: Vec<&str> = spec.split(',').map(str::trim).collect();
    let bad = || CliError::Validation(format!("--grid expects MIN,MAX,COUNT, got '{spec}'"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let min: f64 = parts[0].parse().map_err(|_| bad())?;
    let max: f64 = parts[1].parse().map_err(|_| bad())?;
    let count: usize = parts[2].parse().map_err(|_| bad())?;
    Ok(AxisRange::new(min, max, count)?)
}

/// θ values from --grid, else --theta.
fn theta_values(common: &CommonArgs) -> Result<Vec<f64>, CliError> {
    match (&common.grid, common.theta) {
        (Some(g), _) => Ok(parse_grid(g)?.values()),
        (None, Some(t)) => Ok(vec![t]),
        (None, None) => Err(CliError::Validation("--theta or --grid is required".into())),
    }
}

fn dispatch(cmd: &Command, command: &str, stdout: &mut (dyn Write + Send)) -> Result<i32, CliError> {
    let common = common_args(cmd);
    let cfg = resolve_config(common)?;
    let scenario = cfg.scenario()?;
    let detuning = common.detuning.unwrap_or(0.0);
    let table = match cmd {
        Command::Susceptibility(_) => {
            let dps = match (&common.grid, common.detuning) {
                (Some(g), _) => parse_grid(g)?.values(),
                (None, Some(d)) => vec![d],
                (None, None) => cfg.sweep.detuning.values(),
            };
            figures::spectrum_table(&scenario, &dps)?
        }
        Command::Shift(_) | Command::Angular(_) => {
            let rows = theta_values(common)?
                .into_iter()
                .map(|t| checked_point(&scenario, t, detuning))
                .collect::<Result<_, _>>()?;
            Table::from(&SweepTable { rows })
        }
        Command::Sweep(_) => {
            let mut grid = cfg.sweep.clone();
            if let Some(g) = &common.grid {
                grid.theta_deg = parse_grid(g)?;
            }
            Table::from(&sweep(&grid, &scenario)?)
        }
        Command::Brewster(_) => {
            let window = match &common.grid {
                Some(g) => parse_grid(g)?,
                None => cfg.sweep.theta_deg,
            };
            brewster_table(&scenario, &window, detuning)?
        }
        Command::Windows(_) => {
            let axis = match &common.grid {
                Some(g) => parse_grid(g)?,
                None => cfg.sweep.detuning,
            };
            let mut t = Table::new(&["window_detuning_gamma", "chi1", "chi2"]);
            for dp in find_transparency_windows(&scenario.medium, &axis)? {
                let chi = susceptibility(dp, &scenario.medium)?;
                t.push_numbers(&[dp, chi.re, chi.im]);
            }
            t
        }
        Command::Oracle { nodes, .. } => {
            let grid = GridSpec { nodes: *nodes, ..GridSpec::default() };
            oracle_table(&scenario, &theta_values(common)?, detuning, &grid)?
        }
        Command::Reproduce { figure, .. } => {
            let dir = cfg.output.path.clone().unwrap_or_else(|| PathBuf::from("reproduce_out"));
            return reproduce(figure, &cfg, &dir, stdout);
        }
    };
    emit(&table, command, &cfg, cfg.output.path.as_deref(), stdout)
}

fn checked_point(scenario: &Scenario, theta_deg: f64, dp: f64) -> Result<crate::sweep_engine::SweepRow, CliError> {
    if !(theta_deg > 0.0 && theta_deg < 90.0) {
        return Err(CliError::Validation(format!("--theta must lie in (0, 90) degrees, got {theta_deg}")));
    }
    Ok(scenario.evaluate(theta_deg, dp))
}

fn brewster_table(scenario: &Scenario, window: &AxisRange, dp: f64) -> Result<Table, CliError> {
    let mut t = Table::new(&["detuning_gamma", "brewster_deg", "sign_flip_deg", "sign_flip_slope_lambda_per_deg"]);
    let theta_b = find_brewster_at((window.min, window.max), scenario, dp)?;
    let flip = find_shift_sign_flip(scenario, window, dp).ok();
    t.rows.push(vec![
        output::Cell::Num(Some(dp)),
        output::Cell::Num(Some(theta_b)),
        output::Cell::Num(flip.map(|f| f.theta_deg)),
        output::Cell::Num(flip.map(|f| f.slope)),
    ]);
    Ok(t)
}

fn oracle_table(scenario: &Scenario, thetas: &[f64], dp: f64, grid: &GridSpec) -> Result<Table, CliError> {
    let mut t = Table::new(&[
        "theta_deg",
        "detuning_gamma",
        "closed_form_delta_plus_lambda",
        "quadrature_delta_plus_lambda",
        "quadrature_delta_minus_lambda",
        "relative_difference",
    ]);
    let lambda = scenario.beam.lambda;
    let stack = scenario.stack_at(dp)?;
    for &deg in thetas {
        let theta = deg.to_radians();
        let refl = crate::multilayer_optics::stack_reflection(theta, lambda, &stack)?;
        let (closed, _) = spatial_shift(theta, &refl, &scenario.beam)?;
        let (qp, qm) = shift_from_beam_integral(theta, &stack, &scenario.beam, grid)?;
        t.push_numbers(&[deg, dp, closed / lambda, qp / lambda, qm / lambda, ((qp - closed) / closed).abs()]);
    }
    Ok(t)
}

fn manifest_path(data: &Path) -> PathBuf {
    let mut name = data.file_stem().map(|s| s.to_os_string()).unwrap_or_default();
    name.push(".manifest.json");
    data.with_file_name(name)
}

/// Writes the table (and its manifest) and maps the flagged fraction onto
/// the exit status.
fn emit(
    table: &Table,
    command: &str,
    cfg: &RunConfig,
    path: Option<&Path>,
    stdout: &mut (dyn Write + Send),
) -> Result<i32, CliError> {
    let config_echo = serde_json::to_value(cfg).map_err(|e| CliError::Failure(e.to_string()))?;
    let manifest = RunManifest::new(command, table, config_echo);
    let header = cfg.output.manifest_header.then(|| manifest.to_json_string());
    let write_data = |w: &mut dyn Write| -> std::io::Result<()> {
        match cfg.output.format {
            OutputFormat::Csv => table.write_csv(w, header.as_deref()),
            OutputFormat::Json => {
                serde_json::to_writer_pretty(&mut *w, &table.to_json())?;
                writeln!(w)
            }
        }
    };
    match path {
        Some(p) => {
            if let Some(parent) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(parent)?;
            }
            let mut f = std::io::BufWriter::new(std::fs::File::create(p)?);
            write_data(&mut f)?;
            f.flush()?;
            std::fs::write(manifest_path(p), manifest.to_json_string())?;
        }
        None => write_data(stdout)?,
    }
    Ok(flag_status(table, cfg.output.max_flagged_fraction))
}

fn flag_status(table: &Table, max_fraction: f64) -> i32 {
    if table.is_empty() {
        return EXIT_OK;
    }
    if table.flagged() as f64 / table.len() as f64 > max_fraction {
        EXIT_FLAGGED
    } else {
        EXIT_OK
    }
}

fn reproduce(figure: &str, cfg: &RunConfig, dir: &Path, stdout: &mut (dyn Write + Send)) -> Result<i32, CliError> {
    let names: Vec<&str> = if figure == "all" {
        figures::FIGURES.to_vec()
    } else if figures::FIGURES.contains(&figure) {
        vec![figure]
    } else {
        return Err(CliError::Validation(format!(
            "unknown figure '{figure}' (known: {}, all)",
            figures::FIGURES.join(", ")
        )));
    };
    let ext = match cfg.output.format {
        OutputFormat::Csv => "csv",
        OutputFormat::Json => "json",
    };
    let mut status = EXIT_OK;
    for name in names {
        let table = figures::figure_table(name, cfg)?;
        let path = dir.join(format!("{name}.{ext}"));
        let code = emit(&table, &format!("reproduce {name}"), cfg, Some(&path), stdout)?;
        writeln!(stdout, "{name}: {} rows -> {}", table.len(), path.display())?;
        status = status.max(code);
    }
    Ok(status)
}
