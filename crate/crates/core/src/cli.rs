//! The `trustdyn` command-line front-end.
//!
//! ```text
//! trustdyn <command> --config <path> [--set key=value ...] --out <path>
//!          [--format csv|json] [--seed <u64>] [--threads <n>]
//! ```
//!
//! Exit codes: 0 success, 2 usage or config error, 3 I/O error, 4 numerical
//! failure, 5 Monte-Carlo check found `|z| > 5`.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use thiserror::Error;

use crate::basins::{basin_fraction, basin_sweep, BasinError, BasinResult, SweepAxis, SweepParam, SweepPoint};
use crate::config::{ConfigError, ExperimentConfig};
use crate::dynamics::{integrate, replicator_rhs, IntegrationError, Trajectory};
use crate::equilibria::{
    analyze_boundary, find_interior_fixed_points, stable_labels, stable_points, EquilibriumError,
    EquilibriumReport,
};
use crate::montecarlo::{mc_expected_payoffs, z_score};
use crate::output::{fmt_f64, json_document, Format, Table};
use crate::params::{GameParams, ParamError, PopulationState};
use crate::payoffs::{expected_payoffs, Strategy};
use crate::regimes::{classify_regime, linspace, regime_map, CaseId, MapFixed, RegimeGrid, RegimeVerdict};

/// Distance within which a trajectory terminal is labelled.
pub const TERMINAL_EPS: f64 = 1e-4;

/// `|z|` above which `mc-check` fails.
pub const MC_HARD_Z: f64 = 5.0;

pub const EXIT_USAGE: u8 = 2;
pub const EXIT_IO: u8 = 3;
pub const EXIT_NUMERIC: u8 = 4;
pub const EXIT_MC_INCONSISTENT: u8 = 5;

#[derive(Debug, Parser)]
#[command(name = "trustdyn", version, about = "Replicator dynamics of the N-player trust game")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Equilibria,
    Trajectory,
    PhasePortrait,
    RegimeMap,
    Basin,
    McCheck,
}

impl CommandKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            CommandKind::Equilibria => "equilibria",
            CommandKind::Trajectory => "trajectory",
            CommandKind::PhasePortrait => "phase-portrait",
            CommandKind::RegimeMap => "regime-map",
            CommandKind::Basin => "basin",
            CommandKind::McCheck => "mc-check",
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// TOML experiment config.
    #[arg(long)]
    pub config: PathBuf,
    /// Override a config value, e.g. `--set params.alpha=0.2`. Repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub overrides: Vec<String>,
    /// Output file.
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Seed for stochastic commands; overrides `mc.seed`.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads for parallel commands.
    #[arg(long, env = "TRUSTDYN_THREADS")]
    pub threads: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Boundary and interior fixed points with eigenvalues and verdicts.
    Equilibria(CommonArgs),
    /// Time series from each configured start.
    Trajectory(CommonArgs),
    /// Vector field on a grid including the rectangle edges.
    PhasePortrait(CommonArgs),
    /// Regime case over a (lambda, alpha) grid.
    RegimeMap(CommonArgs),
    /// Attraction-domain fraction of P+T, optionally swept.
    Basin(CommonArgs),
    /// Closed-form payoffs against Monte-Carlo estimates.
    McCheck(CommonArgs),
}

impl Command {
    pub fn split(&self) -> (CommandKind, &CommonArgs) {
        match self {
            Command::Equilibria(a) => (CommandKind::Equilibria, a),
            Command::Trajectory(a) => (CommandKind::Trajectory, a),
            Command::PhasePortrait(a) => (CommandKind::PhasePortrait, a),
            Command::RegimeMap(a) => (CommandKind::RegimeMap, a),
            Command::Basin(a) => (CommandKind::Basin, a),
            Command::McCheck(a) => (CommandKind::McCheck, a),
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("invalid config field {field}: {reason}")]
    Field { field: &'static str, reason: String },
    #[error("cannot write {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot start thread pool: {0}")]
    ThreadPool(String),
    #[error(transparent)]
    Integration(#[from] IntegrationError),
    #[error(transparent)]
    Equilibrium(#[from] EquilibriumError),
    #[error(transparent)]
    Basin(#[from] BasinError),
    #[error("stable set from thresholds ({by_threshold}) disagrees with Jacobian verdicts ({by_jacobian})")]
    Inconsistent { by_threshold: String, by_jacobian: String },
    #[error("{count} Monte-Carlo z-scores exceed {MC_HARD_Z} in magnitude")]
    McInconsistent { count: usize },
}

impl From<ParamError> for CliError {
    fn from(e: ParamError) -> Self {
        CliError::Config(ConfigError::Params(e))
    }
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::Field { .. } | CliError::ThreadPool(_) => EXIT_USAGE,
            CliError::Basin(BasinError::Params(_)) => EXIT_USAGE,
            CliError::Io { .. } => EXIT_IO,
            CliError::McInconsistent { .. } => EXIT_MC_INCONSISTENT,
            CliError::Integration(_)
            | CliError::Equilibrium(_)
            | CliError::Basin(_)
            | CliError::Inconsistent { .. } => EXIT_NUMERIC,
        }
    }
}

/// Rendered command output in both formats.
pub struct CommandOutput {
    pub table: Table,
    pub json: serde_json::Value,
    /// Error to report after the output file is written.
    pub deferred: Option<CliError>,
}

impl CommandOutput {
    fn new<R: Serialize>(table: Table, results: &R) -> Self {
        Self {
            table,
            json: serde_json::to_value(results).expect("results serialize to JSON"),
            deferred: None,
        }
    }

    pub fn render(&self, kind: CommandKind, params: &GameParams, format: Format) -> String {
        match format {
            Format::Csv => self.table.to_csv(),
            Format::Json => json_document(kind.as_str(), params, &self.json).expect("JSON value serializes"),
        }
    }
}

fn state_in(params: &GameParams, field: &'static str, xy: [f64; 2]) -> Result<PopulationState, CliError> {
    PopulationState::new(xy[0], xy[1], params).map_err(|e| CliError::Field {
        field,
        reason: e.to_string(),
    })
}

#[derive(Serialize)]
struct EquilibriaResults {
    regime: RegimeVerdict,
    equilibria: Vec<EquilibriumReport>,
}

fn fmt_labels<'a>(labels: impl IntoIterator<Item = &'a crate::equilibria::EquilibriumLabel>) -> String {
    labels.into_iter().map(|l| l.as_str()).collect::<Vec<_>>().join(" ")
}

pub fn run_equilibria(cfg: &ExperimentConfig) -> Result<CommandOutput, CliError> {
    let params = cfg.game_params()?;
    let tol = cfg.equilibria.tol;
    let regime = classify_regime(&params, tol);
    if regime.case_id != CaseId::Boundary {
        let by_jacobian = stable_labels(&params, tol);
        if by_jacobian != regime.stable_set {
            return Err(CliError::Inconsistent {
                by_threshold: fmt_labels(&regime.stable_set),
                by_jacobian: fmt_labels(&by_jacobian),
            });
        }
    }
    let mut reports = analyze_boundary(&params, tol);
    reports.extend(find_interior_fixed_points(&params, tol)?);

    let mut table = Table::new([
        "label", "x_i", "x_t", "eig1_re", "eig1_im", "eig2_re", "eig2_im", "verdict", "case_id",
    ]);
    for r in &reports {
        table.push(vec![
            r.label.to_string(),
            fmt_f64(r.location.x_i),
            fmt_f64(r.location.x_t),
            fmt_f64(r.eigenvalues[0].re),
            fmt_f64(r.eigenvalues[0].im),
            fmt_f64(r.eigenvalues[1].re),
            fmt_f64(r.eigenvalues[1].im),
            r.stability.to_string(),
            regime.case_id.to_string(),
        ]);
    }
    Ok(CommandOutput::new(
        table,
        &EquilibriaResults {
            regime,
            equilibria: reports,
        },
    ))
}

#[derive(Serialize)]
struct TrajectoryResult {
    start: PopulationState,
    #[serde(flatten)]
    trajectory: Trajectory,
}

pub fn run_trajectory(cfg: &ExperimentConfig) -> Result<CommandOutput, CliError> {
    let params = cfg.game_params()?;
    if cfg.trajectory.starts.is_empty() {
        return Err(CliError::Field {
            field: "trajectory.starts",
            reason: "list at least one start".into(),
        });
    }
    let stable = stable_points(&params, cfg.equilibria.tol);
    let mut table = Table::new(["start", "t", "x_i", "x_t", "y_i", "y_t"]);
    let mut results = Vec::with_capacity(cfg.trajectory.starts.len());
    for (k, &xy) in cfg.trajectory.starts.iter().enumerate() {
        let start = state_in(&params, "trajectory.starts", xy)?;
        let mut trajectory = integrate(&start, &params, &cfg.integrator)?;
        trajectory.classify(&stable, TERMINAL_EPS).map_err(|e| CliError::Field {
            field: "equilibria.tol",
            reason: e.to_string(),
        })?;
        for s in &trajectory.samples {
            table.push(vec![
                k.to_string(),
                fmt_f64(s.t),
                fmt_f64(s.state.x_i),
                fmt_f64(s.state.x_t),
                fmt_f64(s.state.y_i(&params)),
                fmt_f64(s.state.y_t(&params)),
            ]);
        }
        results.push(TrajectoryResult { start, trajectory });
    }
    Ok(CommandOutput::new(table, &results))
}

#[derive(Serialize)]
struct PortraitPoint {
    x_i: f64,
    x_t: f64,
    dx_i: f64,
    dx_t: f64,
}

pub fn run_phase_portrait(cfg: &ExperimentConfig) -> Result<CommandOutput, CliError> {
    let params = cfg.game_params()?;
    let g = cfg.portrait.grid as usize;
    let mut table = Table::new(["x_i", "x_t", "dx_i", "dx_t"]);
    let mut points = Vec::with_capacity(g * g);
    for x_i in linspace(0.0, params.alpha(), g) {
        for x_t in linspace(0.0, params.trustees(), g) {
            let v = replicator_rhs(&PopulationState::at(x_i, x_t), &params);
            table.push(vec![fmt_f64(x_i), fmt_f64(x_t), fmt_f64(v.dx_i), fmt_f64(v.dx_t)]);
            points.push(PortraitPoint {
                x_i,
                x_t,
                dx_i: v.dx_i,
                dx_t: v.dx_t,
            });
        }
    }
    Ok(CommandOutput::new(table, &points))
}

pub fn run_regime_map(cfg: &ExperimentConfig) -> Result<CommandOutput, CliError> {
    let params = cfg.game_params()?;
    let opts = cfg.regime_map.ok_or(CliError::Field {
        field: "regime_map",
        reason: "table is required for regime-map".into(),
    })?;
    let raw = params.raw();
    let grid: RegimeGrid = regime_map(
        (opts.lambda_range[0], opts.lambda_range[1]),
        (opts.alpha_range[0], opts.alpha_range[1]),
        (opts.resolution[0], opts.resolution[1]),
        MapFixed {
            n: raw.n,
            r: raw.r,
            r_t: raw.r_t,
            t_v: raw.t_v,
        },
        opts.tol,
    )?;
    let mut table = Table::new(["alpha", "lambda", "case_id"]);
    for c in &grid.cells {
        table.push(vec![fmt_f64(c.alpha), fmt_f64(c.lambda), c.case_id.to_string()]);
    }
    Ok(CommandOutput::new(table, &grid))
}

#[derive(Serialize)]
struct BasinResults {
    axis: SweepParam,
    points: Vec<SweepPoint>,
}

pub fn run_basin(cfg: &ExperimentConfig) -> Result<CommandOutput, CliError> {
    let params = cfg.game_params()?;
    let opts = &cfg.basin;
    let (axis, points) = match opts.axis {
        Some(param) => {
            let axis = SweepAxis {
                param,
                values: opts.values.clone(),
            };
            (param, basin_sweep(&axis, &params, opts.grid, &opts.integrator)?)
        }
        None => {
            let result: BasinResult = basin_fraction(&params, opts.grid, &opts.integrator)?;
            (
                SweepParam::Alpha,
                vec![SweepPoint {
                    value: params.alpha(),
                    result,
                }],
            )
        }
    };
    let mut table = Table::new([axis.as_str(), "fraction", "area", "unresolved", "attracted", "total"]);
    for p in &points {
        table.push(vec![
            fmt_f64(p.value),
            fmt_f64(p.result.fraction),
            fmt_f64(p.result.area),
            p.result.unresolved.to_string(),
            p.result.attracted.to_string(),
            p.result.total.to_string(),
        ]);
    }
    Ok(CommandOutput::new(table, &BasinResults { axis, points }))
}

#[derive(Serialize)]
struct McRow {
    x_i: f64,
    x_t: f64,
    seed: u64,
    strategy: String,
    closed_form: f64,
    mc_mean: f64,
    std_error: f64,
    z: f64,
}

/// Seed used for the `index`-th state of an mc-check run.
pub fn mc_state_seed(base: u64, index: usize) -> u64 {
    base.wrapping_add(index as u64)
}

pub fn run_mc_check(cfg: &ExperimentConfig, seed: u64) -> Result<CommandOutput, CliError> {
    let params = cfg.game_params()?;
    if cfg.mc.states.is_empty() {
        return Err(CliError::Field {
            field: "mc.states",
            reason: "list at least one state".into(),
        });
    }
    let mut table = Table::new(["x_i", "x_t", "seed", "strategy", "closed_form", "mc_mean", "std_error", "z"]);
    let mut rows = Vec::new();
    let mut hard = 0;
    for (k, &xy) in cfg.mc.states.iter().enumerate() {
        let state = state_in(&params, "mc.states", xy)?;
        let s = mc_state_seed(seed, k);
        let closed = expected_payoffs(&state, &params);
        let mc = mc_expected_payoffs(&state, &params, cfg.mc.samples, s);
        for strategy in Strategy::ALL {
            let est = mc.get(strategy);
            let z = z_score(closed.get(strategy), &est);
            if !(z.abs() <= MC_HARD_Z) {
                hard += 1;
            }
            table.push(vec![
                fmt_f64(state.x_i),
                fmt_f64(state.x_t),
                s.to_string(),
                strategy.to_string(),
                fmt_f64(closed.get(strategy)),
                fmt_f64(est.mean),
                fmt_f64(est.std_error),
                fmt_f64(z),
            ]);
            rows.push(McRow {
                x_i: state.x_i,
                x_t: state.x_t,
                seed: s,
                strategy: strategy.to_string(),
                closed_form: closed.get(strategy),
                mc_mean: est.mean,
                std_error: est.std_error,
                z,
            });
        }
    }
    let mut out = CommandOutput::new(table, &rows);
    if hard > 0 {
        out.deferred = Some(CliError::McInconsistent { count: hard });
    }
    Ok(out)
}

/// Run one command against a loaded config.
pub fn execute(kind: CommandKind, cfg: &ExperimentConfig, seed: Option<u64>) -> Result<CommandOutput, CliError> {
    match kind {
        CommandKind::Equilibria => run_equilibria(cfg),
        CommandKind::Trajectory => run_trajectory(cfg),
        CommandKind::PhasePortrait => run_phase_portrait(cfg),
        CommandKind::RegimeMap => run_regime_map(cfg),
        CommandKind::Basin => run_basin(cfg),
        CommandKind::McCheck => run_mc_check(cfg, seed.unwrap_or(cfg.mc.seed)),
    }
}

/// Load the config, run the command and write the output file.
pub fn run(cli: &Cli) -> Result<(), CliError> {
    let (kind, args) = cli.command.split();
    let cfg = ExperimentConfig::load(&args.config, &args.overrides)?;
    let params = cfg.game_params()?;
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = args.threads {
        if n == 0 {
            return Err(CliError::Field {
                field: "threads",
                reason: "must be at least 1".into(),
            });
        }
        pool = pool.num_threads(n);
    }
    let pool = pool.build().map_err(|e| CliError::ThreadPool(e.to_string()))?;
    let output = pool.install(|| execute(kind, &cfg, args.seed))?;
    let text = output.render(kind, &params, args.format);
    std::fs::write(&args.out, text).map_err(|source| CliError::Io {
        path: args.out.display().to_string(),
        source,
    })?;
    match output.deferred {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

/// Entry point used by the binary.
pub fn main_with_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("trustdyn: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
