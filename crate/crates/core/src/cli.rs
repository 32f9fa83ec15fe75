//! Command-line front end.
//!
//! Exit status: 0 success, 1 invalid flags (usage printed), 2 unparsable
//! input or I/O failure, 3 numerical failure.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::Error;
use crate::expm::{exact_expm, taylor_propagator};
use crate::hamiltonians::{
    build_diagonal, build_pauli_sum, build_random_hermitian, build_random_split,
    build_tight_binding, PauliString,
};
use crate::io::{self, DefectRow, ExpmJson, MatrixJson, SnapshotJson, VectorJson};
use crate::linalg::{ComplexMatrix, StateVector};
use crate::schrodinger::{split_step_trajectory, GridSpec, PotentialPreset, WaveFunction};
use crate::trotter::{
    convergence_study, defect, defect_supremum, ErrorMetric, SplitHamiltonian,
    DEFAULT_SUPREMUM_SAMPLES,
};

/// Environment variable that overrides `--seed`.
pub const SEED_ENV: &str = "TROTTERKIT_SEED";

#[derive(Debug, Parser)]
#[command(name = "trotterkit", version, about = "Matrix exponentials and Trotter product formulas")]
pub struct Cli {
    /// Seed for random Hamiltonians (overridden by TROTTERKIT_SEED).
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exponentiate a Hermitian matrix, e^{-iHt}.
    Expm(ExpmArgs),
    /// Trotter error against the exact propagator over a list of step counts.
    TrotterSweep(SweepArgs),
    /// Defect operator norms over a list of step sizes.
    Defect(DefectArgs),
    /// Split-step Fourier trajectory of a 1D wavepacket.
    Splitstep(SplitStepArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MetricArg {
    Operator,
    State,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    pub format: OutputFormat,

    /// Output file; standard output when omitted.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ExpmArgs {
    /// Matrix JSON file.
    #[arg(long, group = "source")]
    pub matrix: Option<PathBuf>,

    /// Comma-separated diagonal energies.
    #[arg(long, group = "source")]
    pub diag: Option<String>,

    /// Pauli string such as 0.5*XZ; repeat to sum terms.
    #[arg(long, group = "source")]
    pub pauli: Vec<String>,

    /// Dimension of a seeded random Hermitian matrix.
    #[arg(long, group = "source")]
    pub random: Option<usize>,

    #[arg(long, allow_negative_numbers = true)]
    pub t: f64,

    /// Also evaluate the Taylor series with this many scaled-level terms.
    #[arg(long)]
    pub taylor_terms: Option<usize>,

    #[command(flatten)]
    pub out: OutputArgs,
}

/// Ways to specify the split `H = S + T`.
#[derive(Debug, Args)]
pub struct SplitArgs {
    /// `S=<pauli>` or `T=<pauli>`; repeat to sum terms in either part.
    #[arg(long)]
    pub pauli: Vec<String>,

    /// Tight-binding chain length (S = hopping, T = onsite).
    #[arg(long)]
    pub tight_binding: Option<usize>,

    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub hopping: f64,

    /// Comma-separated onsite energies for the chain.
    #[arg(long)]
    pub onsite: Option<String>,

    /// Dimension of seeded random parts (S from seed, T from seed + 1).
    #[arg(long)]
    pub random: Option<usize>,

    /// Matrix JSON file for S.
    #[arg(long)]
    pub s_matrix: Option<PathBuf>,

    /// Matrix JSON file for T.
    #[arg(long)]
    pub t_matrix: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub split: SplitArgs,

    #[arg(long, allow_negative_numbers = true)]
    pub t: f64,

    /// Step counts: `a:b:xK` (geometric), `a:b:+K` (arithmetic), `a:b`
    /// (doubling) or a comma list.
    #[arg(long, default_value = "4:512:x2")]
    pub n: String,

    #[arg(long, value_enum, default_value_t = MetricArg::Operator)]
    pub metric: MetricArg,

    /// Basis index of the fixed state for the state metric.
    #[arg(long, default_value_t = 0)]
    pub xi: usize,

    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct DefectArgs {
    #[command(flatten)]
    pub split: SplitArgs,

    /// Half-width of the window `|s| <= |t|` for the supremum.
    #[arg(long, allow_negative_numbers = true)]
    pub t: f64,

    /// Comma-separated step sizes.
    #[arg(long, default_value = "1e-1,1e-2,1e-3")]
    pub steps: String,

    #[arg(long, default_value_t = DEFAULT_SUPREMUM_SAMPLES)]
    pub samples: usize,

    #[arg(long, default_value_t = 0)]
    pub xi: usize,

    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SplitStepArgs {
    #[arg(long, default_value = "linear")]
    pub preset: String,

    #[arg(long, default_value_t = 1024)]
    pub points: usize,

    #[arg(long, default_value_t = -20.0, allow_negative_numbers = true)]
    pub x_min: f64,

    #[arg(long, default_value_t = 20.0, allow_negative_numbers = true)]
    pub x_max: f64,

    #[arg(long, default_value_t = 1.0)]
    pub mass: f64,

    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub x0: f64,

    #[arg(long, default_value_t = 1.0)]
    pub sigma: f64,

    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub p0: f64,

    #[arg(long, allow_negative_numbers = true)]
    pub t: f64,

    #[arg(long, default_value_t = 256)]
    pub steps: usize,

    /// Record observables every this many steps (first and last always).
    #[arg(long, default_value_t = 1)]
    pub stride: usize,

    /// Write wavefunction snapshots (JSON) to this file.
    #[arg(long)]
    pub snapshots: Option<PathBuf>,

    #[arg(long, default_value_t = 16)]
    pub snapshot_stride: usize,

    #[command(flatten)]
    pub out: OutputArgs,
}

/// Failure classes mapped onto exit codes.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Parse(String),
    Numerical(Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Parse(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "{msg}"),
            CliError::Parse(msg) => write!(f, "error: {msg}"),
            CliError::Numerical(err) => write!(f, "numerical error: {err}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(err: Error) -> Self {
        match err {
            Error::Parse(msg) => CliError::Parse(msg),
            other => CliError::Numerical(other),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn parse_err(msg: impl Into<String>) -> CliError {
    CliError::Parse(msg.into())
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Parses a step-count range: `a:b:xK`, `a:b:+K`, `a:b` or `n1,n2,...`.
pub fn parse_step_range(spec: &str) -> crate::Result<Vec<u64>> {
    let bad = |why: &str| Error::Parse(format!("step range {spec:?}: {why}"));
    let int = |s: &str| s.trim().parse::<u64>().map_err(|_| bad("expected an integer"));
    let spec = spec.trim();
    let values: Vec<u64> = if spec.contains(':') {
        let parts: Vec<&str> = spec.split(':').collect();
        if parts.len() < 2 || parts.len() > 3 {
            return Err(bad("expected a:b, a:b:xK or a:b:+K"));
        }
        let (start, end) = (int(parts[0])?, int(parts[1])?);
        if start == 0 || end < start {
            return Err(bad("need 1 <= a <= b"));
        }
        let step = parts.get(2).copied().unwrap_or("x2").trim();
        let mut out = Vec::new();
        if let Some(factor) = step.strip_prefix('x') {
            let factor = int(factor)?;
            if factor < 2 {
                return Err(bad("geometric factor must be at least 2"));
            }
            let mut n = start;
            while n <= end {
                out.push(n);
                n = match n.checked_mul(factor) {
                    Some(next) => next,
                    None => break,
                };
            }
        } else if let Some(inc) = step.strip_prefix('+') {
            let inc = int(inc)?;
            if inc == 0 {
                return Err(bad("arithmetic increment must be positive"));
            }
            out.extend((start..=end).step_by(inc as usize));
        } else {
            return Err(bad("step must be xK or +K"));
        }
        out
    } else {
        spec.split(',').map(int).collect::<crate::Result<_>>()?
    };
    if values.is_empty() || values[0] == 0 {
        return Err(bad("step counts must be positive"));
    }
    if values.windows(2).any(|w| w[0] >= w[1]) {
        return Err(bad("step counts must be strictly increasing"));
    }
    Ok(values)
}

fn parse_real_list(spec: &str, what: &str) -> CliResult<Vec<f64>> {
    let values = spec
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| parse_err(format!("{what}: invalid number {s:?}")))
        })
        .collect::<CliResult<Vec<f64>>>()?;
    if values.iter().any(|v| !v.is_finite()) {
        return Err(parse_err(format!("{what}: values must be finite")));
    }
    Ok(values)
}

fn require_finite(name: &str, value: f64) -> CliResult<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(usage(format!("--{name} must be finite")))
    }
}

fn read_text(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| parse_err(format!("reading {}: {e}", path.display())))
}

fn read_matrix(path: &Path) -> CliResult<ComplexMatrix<f64>> {
    io::matrix_from_json(&read_text(path)?)
        .map_err(|e| parse_err(format!("{}: {e}", path.display())))
}

fn emit(out: &OutputArgs, text: &str, stdout: &mut dyn Write) -> CliResult<()> {
    match &out.output {
        Some(path) => fs::write(path, text)
            .map_err(|e| parse_err(format!("writing {}: {e}", path.display()))),
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|e| parse_err(format!("writing output: {e}"))),
    }
}

fn parse_paulis(specs: &[String]) -> CliResult<Vec<PauliString>> {
    specs
        .iter()
        .map(|s| s.parse::<PauliString>().map_err(CliError::from))
        .collect()
}

fn build_split(args: &SplitArgs, seed: u64) -> CliResult<SplitHamiltonian<f64>> {
    let sources = [
        !args.pauli.is_empty(),
        args.tight_binding.is_some(),
        args.random.is_some(),
        args.s_matrix.is_some() || args.t_matrix.is_some(),
    ]
    .iter()
    .filter(|&&b| b)
    .count();
    if sources != 1 {
        return Err(usage(
            "specify exactly one of --pauli, --tight-binding, --random, --s-matrix/--t-matrix",
        ));
    }
    if !args.pauli.is_empty() {
        let mut s_terms = Vec::new();
        let mut t_terms = Vec::new();
        for spec in &args.pauli {
            match spec.split_once('=') {
                Some(("S", p)) => s_terms.push(p.to_string()),
                Some(("T", p)) => t_terms.push(p.to_string()),
                _ => return Err(parse_err(format!("--pauli {spec:?}: expected S=<pauli> or T=<pauli>"))),
            }
        }
        if s_terms.is_empty() || t_terms.is_empty() {
            return Err(usage("--pauli needs at least one S= and one T= term"));
        }
        let s = build_pauli_sum(&parse_paulis(&s_terms)?)?;
        let t = build_pauli_sum(&parse_paulis(&t_terms)?)?;
        return Ok(SplitHamiltonian::new(s, t)?);
    }
    if let Some(sites) = args.tight_binding {
        require_finite("hopping", args.hopping)?;
        let onsite = match &args.onsite {
            Some(spec) => parse_real_list(spec, "--onsite")?,
            None => vec![0.0; sites],
        };
        return Ok(build_tight_binding(sites, args.hopping, &onsite)?);
    }
    if let Some(dim) = args.random {
        return Ok(build_random_split(dim, seed)?);
    }
    match (&args.s_matrix, &args.t_matrix) {
        (Some(s), Some(t)) => Ok(SplitHamiltonian::new(read_matrix(s)?, read_matrix(t)?)?),
        _ => Err(usage("--s-matrix and --t-matrix must be given together")),
    }
}

fn run_expm(args: &ExpmArgs, seed: u64, stdout: &mut dyn Write) -> CliResult<()> {
    require_finite("t", args.t)?;
    let h = if let Some(path) = &args.matrix {
        read_matrix(path)?
    } else if let Some(spec) = &args.diag {
        build_diagonal(&parse_real_list(spec, "--diag")?)?
    } else if !args.pauli.is_empty() {
        build_pauli_sum(&parse_paulis(&args.pauli)?)?
    } else if let Some(dim) = args.random {
        build_random_hermitian(dim, seed)?
    } else {
        return Err(usage("expm needs one of --matrix, --diag, --pauli, --random"));
    };
    let exact = exact_expm(&h, args.t)?.matrix;
    let taylor = match args.taylor_terms {
        Some(terms) => Some(taylor_propagator(&h, args.t, terms)?),
        None => None,
    };
    let text = match args.out.format {
        OutputFormat::Json => io::expm_to_json(&ExpmJson {
            t: args.t,
            exact: MatrixJson::from_matrix(&exact),
            frobenius_difference: taylor.as_ref().map(|m| (m - &exact).frobenius_norm()),
            taylor: taylor.as_ref().map(MatrixJson::from_matrix),
            taylor_terms: args.taylor_terms,
        }),
        OutputFormat::Csv => {
            if taylor.is_some() {
                return Err(usage("--taylor-terms comparison requires --format json"));
            }
            io::matrix_to_csv(&exact)
        }
    };
    emit(&args.out, &text, stdout)
}

fn basis_state(dim: usize, index: usize) -> CliResult<StateVector<f64>> {
    StateVector::basis(dim, index).map_err(|e| usage(format!("--xi: {e}")))
}

fn run_sweep(args: &SweepArgs, seed: u64, stdout: &mut dyn Write) -> CliResult<()> {
    require_finite("t", args.t)?;
    let split = build_split(&args.split, seed)?;
    let counts = parse_step_range(&args.n)?;
    let metric = match args.metric {
        MetricArg::Operator => ErrorMetric::Operator2Norm,
        MetricArg::State => ErrorMetric::StateVectorNorm(basis_state(split.dim(), args.xi)?),
    };
    let report = convergence_study(&split, args.t, &counts, metric)?;
    let text = match args.out.format {
        OutputFormat::Csv => io::report_to_csv(&report),
        OutputFormat::Json => io::report_to_json(&report),
    };
    emit(&args.out, &text, stdout)
}

fn run_defect(args: &DefectArgs, seed: u64, stdout: &mut dyn Write) -> CliResult<()> {
    require_finite("t", args.t)?;
    let split = build_split(&args.split, seed)?;
    let steps = parse_real_list(&args.steps, "--steps")?;
    if args.samples == 0 {
        return Err(usage("--samples must be positive"));
    }
    let xi = basis_state(split.dim(), args.xi)?;
    let rows = steps
        .iter()
        .map(|&step| {
            Ok(DefectRow {
                step,
                defect: defect(&split, step, &xi)?,
                defect_supremum: defect_supremum(&split, step, &xi, args.t, args.samples)?,
            })
        })
        .collect::<crate::Result<Vec<_>>>()?;
    let text = match args.out.format {
        OutputFormat::Csv => io::defect_rows_to_csv(&rows),
        OutputFormat::Json => serde_json::to_string_pretty(&rows).expect("rows serialize"),
    };
    emit(&args.out, &text, stdout)
}

fn run_splitstep(args: &SplitStepArgs, stdout: &mut dyn Write) -> CliResult<()> {
    for (name, value) in [
        ("t", args.t),
        ("x-min", args.x_min),
        ("x-max", args.x_max),
        ("mass", args.mass),
        ("x0", args.x0),
        ("sigma", args.sigma),
        ("p0", args.p0),
    ] {
        require_finite(name, value)?;
    }
    let preset: PotentialPreset = args.preset.parse()?;
    let grid = GridSpec::new(args.points, args.x_min, args.x_max, args.mass)
        .map_err(|e| usage(e.to_string()))?;
    let psi = WaveFunction::gaussian(grid, args.x0, args.sigma, args.p0)
        .map_err(|e| usage(e.to_string()))?;
    let v = preset.sample(&grid);
    let snapshot_stride = args.snapshots.as_ref().map(|_| args.snapshot_stride);
    let traj = split_step_trajectory(&psi, &v, args.t, args.steps, args.stride, snapshot_stride)?;
    let text = match args.out.format {
        OutputFormat::Csv => io::trajectory_to_csv(&traj.rows),
        OutputFormat::Json => {
            let rows: Vec<serde_json::Value> = traj
                .rows
                .iter()
                .map(|r| {
                    serde_json::json!({
                        "step": r.step,
                        "time": r.time,
                        "norm": r.observables.norm,
                        "mean_x": r.observables.mean_x,
                        "mean_p": r.observables.mean_p,
                        "energy_kinetic": r.observables.energy_kinetic,
                    })
                })
                .collect();
            serde_json::to_string_pretty(&rows).expect("rows serialize")
        }
    };
    if let Some(path) = &args.snapshots {
        let dt = args.t / args.steps as f64;
        let snaps: Vec<SnapshotJson> = traj
            .snapshots
            .iter()
            .map(|(step, state)| SnapshotJson {
                step: *step,
                time: dt * *step as f64,
                state: VectorJson::from_values(state.values()),
            })
            .collect();
        fs::write(path, io::snapshots_to_json(&snaps))
            .map_err(|e| parse_err(format!("writing {}: {e}", path.display())))?;
    }
    emit(&args.out, &text, stdout)
}

/// Seed after applying the environment override.
pub fn effective_seed(flag: u64, env_value: Option<&str>) -> CliResult<u64> {
    match env_value {
        Some(v) => v
            .trim()
            .parse::<u64>()
            .map_err(|_| usage(format!("{SEED_ENV}={v:?} is not an unsigned integer"))),
        None => Ok(flag),
    }
}

/// Dispatches a parsed command line.
pub fn execute(cli: &Cli, env_seed: Option<&str>, stdout: &mut dyn Write) -> CliResult<()> {
    let seed = effective_seed(cli.seed, env_seed)?;
    match &cli.command {
        Command::Expm(args) => run_expm(args, seed, stdout),
        Command::TrotterSweep(args) => run_sweep(args, seed, stdout),
        Command::Defect(args) => run_defect(args, seed, stdout),
        Command::Splitstep(args) => run_splitstep(args, stdout),
    }
}

/// Parses `args`, runs, and returns the process exit code. Diagnostics go to
/// `stderr`; results go to `stdout` unless `--output` is set.
pub fn run<I, S>(args: I, env_seed: Option<&str>, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = write!(stderr, "{}", err.render());
            return code;
        }
    };
    match execute(&cli, env_seed, stdout) {
        Ok(()) => 0,
        Err(err) => {
            let _ = writeln!(stderr, "{err}");
            if let CliError::Usage(_) = err {
                let _ = writeln!(stderr, "run with --help for usage");
            }
            err.exit_code()
        }
    }
}
