//! Command-line front end. Exit codes: 0 success, 1 usage, 2 data, 3 numeric.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::assessment::{assess, AssessmentInput};
use crate::empirical::CitationList;
use crate::empirical::{build_curve, ActorSelector, TiePolicy};
use crate::error::Error;
use crate::fit::{fit_curve, FitMethod, FitRange, PowerLawFit};
use crate::io::{
    format_number, read_citation_list, read_curve, read_rankings, write_citation_list, write_curve,
    write_extended, FormatError,
};
use crate::leiden::{extend_batch, ExtensionMethod, DEFAULT_TARGETS};
use crate::lognormal::{
    analytic_curve, validate_grid, LognormalParams, PercentileCurve, DEFAULT_GRID,
};
use crate::simulation::{sample_world, SimulationSpec, ACTOR_LABEL};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Data(String),
    Numeric(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Usage(_) => EXIT_USAGE,
            Self::Data(_) => EXIT_DATA,
            Self::Numeric(_) => EXIT_NUMERIC,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Usage(m) => write!(f, "usage error: {m}"),
            Self::Data(m) => write!(f, "data error: {m}"),
            Self::Numeric(m) => write!(f, "numeric error: {m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::Domain { .. }
            | Error::InvalidGrid(_)
            | Error::InvalidRange { .. }
            | Error::UnsupportedCombination(_) => Self::Usage(msg),
            Error::InsufficientPoints { .. }
            | Error::DegenerateAbscissa
            | Error::ZeroVariance
            | Error::InvalidIndicators { .. }
            | Error::EmptyList
            | Error::InvalidRecord(_) => Self::Data(msg),
            Error::NoConvergence { .. } | Error::ZeroExponent => Self::Numeric(msg),
        }
    }
}

fn data_err(path: &Path, e: FormatError) -> CliError {
    CliError::Data(format!("{}: {e}", path.display()))
}

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(
    name = "double-rank",
    version,
    about = "Percentile-based double rank analysis of citation distributions"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Analytic or sampled percentile curve for lognormal world/actor parameters
    Simulate(SimulateArgs),
    /// Count actor papers per world percentile from citation lists
    Percentiles(PercentilesArgs),
    /// Fit a power law to a percentile curve
    Fit(FitArgs),
    /// Extend ranking indicators to more selective percentiles
    Extend(ExtendArgs),
    /// Likelihoods, prize-level percentile and performance ratio from fits
    Assess(AssessArgs),
    /// Observed and fitted values with log10 columns for plotting
    Plotdata(PlotdataArgs),
}

/// `N,MU,SIGMA`
#[derive(Debug, Clone, Copy)]
pub struct ParamsArg(pub LognormalParams);

impl FromStr for ParamsArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let v = parse_numbers(s)?;
        let [n, mu, sigma] = v[..] else {
            return Err(format!("expected N,MU,SIGMA, got '{s}'"));
        };
        LognormalParams::new(n, mu, sigma)
            .map(ParamsArg)
            .map_err(|e| e.to_string())
    }
}

/// `A,ALPHA`
#[derive(Debug, Clone, Copy)]
pub struct LawArg {
    pub coefficient: f64,
    pub exponent: f64,
}

impl FromStr for LawArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let v = parse_numbers(s)?;
        let [coefficient, exponent] = v[..] else {
            return Err(format!("expected A,ALPHA, got '{s}'"));
        };
        PowerLawFit::supplied(coefficient, exponent).map_err(|e| e.to_string())?;
        Ok(Self {
            coefficient,
            exponent,
        })
    }
}

/// `default` or a comma list of percentiles, strictly decreasing.
#[derive(Debug, Clone)]
pub struct GridArg(pub Vec<f64>);

impl FromStr for GridArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let grid = if s.trim() == "default" {
            DEFAULT_GRID.to_vec()
        } else {
            parse_numbers(s)?
        };
        validate_grid(&grid).map_err(|e| e.to_string())?;
        Ok(Self(grid))
    }
}

impl Default for GridArg {
    fn default() -> Self {
        Self(DEFAULT_GRID.to_vec())
    }
}

fn parse_numbers(s: &str) -> Result<Vec<f64>, String> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| format!("'{}' is not a number", t.trim()))
        })
        .collect()
}

fn parse_range(s: &str) -> Result<FitRange, String> {
    s.parse::<FitRange>()
        .map_err(|_| format!("expected HIGH:LOW with 0 < LOW < HIGH <= 100, got '{s}'"))
}

fn parse_positive(s: &str) -> Result<f64, String> {
    s.parse::<f64>()
        .ok()
        .filter(|v| *v > 0.0 && v.is_finite())
        .ok_or_else(|| format!("expected a positive number, got '{s}'"))
}

/// Comma list of positive target percentiles.
#[derive(Debug, Clone)]
pub struct TargetsArg(pub Vec<f64>);

impl FromStr for TargetsArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let v = parse_numbers(s)?;
        if v.iter().any(|t| *t <= 0.0) {
            return Err("targets must be positive".into());
        }
        Ok(Self(v))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Loglog,
    Nonlinear,
}

impl From<MethodArg> for FitMethod {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Loglog => FitMethod::LogLogLeastSquares,
            MethodArg::Nonlinear => FitMethod::NonlinearLeastSquares,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PolicyArg {
    Proportional,
    SecondaryKey,
}

impl From<PolicyArg> for TiePolicy {
    fn from(p: PolicyArg) -> Self {
        match p {
            PolicyArg::Proportional => TiePolicy::Proportional,
            PolicyArg::SecondaryKey => TiePolicy::SecondaryKey,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExtendMethodArg {
    ClosedForm,
    Regression,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// World parameters N,MU,SIGMA
    #[arg(long, value_parser = ParamsArg::from_str)]
    pub world: ParamsArg,
    /// Actor parameters N,MU,SIGMA
    #[arg(long, value_parser = ParamsArg::from_str)]
    pub actor: ParamsArg,
    /// Percentile grid: `default` or a comma list
    #[arg(long, default_value = "default", value_parser = GridArg::from_str)]
    pub grid: GridArg,
    /// Emit the analytic curve instead of sampling
    #[arg(long)]
    pub analytic: bool,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Floor sampled citations to integers
    #[arg(long)]
    pub discretize: bool,
    /// Also write the sampled world citation list here
    #[arg(long, conflicts_with = "analytic")]
    pub citations_out: Option<PathBuf>,
    /// Curve output path (stdout when omitted)
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PercentilesArgs {
    /// World citation list
    #[arg(long)]
    pub world: PathBuf,
    /// Separate actor citation list (two-list mode)
    #[arg(long, conflicts_with = "label")]
    pub actor: Option<PathBuf>,
    /// Actor label in the world list's `actor` column (membership mode)
    #[arg(long)]
    pub label: Option<String>,
    #[arg(long, default_value = "default", value_parser = GridArg::from_str)]
    pub grid: GridArg,
    #[arg(long, value_enum, default_value = "proportional")]
    pub policy: PolicyArg,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    /// Curve CSV
    #[arg(long)]
    pub curve: PathBuf,
    /// Percentile range HIGH:LOW, inclusive (whole curve when omitted)
    #[arg(long, value_parser = parse_range)]
    pub range: Option<FitRange>,
    #[arg(long, value_enum, default_value = "loglog")]
    pub method: MethodArg,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ExtendArgs {
    /// Ranking CSV
    #[arg(long)]
    pub rankings: PathBuf,
    /// Target percentiles, comma separated
    #[arg(long, value_parser = TargetsArg::from_str)]
    pub targets: Option<TargetsArg>,
    #[arg(long, value_enum, default_value = "closed-form")]
    pub method: ExtendMethodArg,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AssessArgs {
    /// Actor power law A,ALPHA
    #[arg(long, value_parser = LawArg::from_str, conflicts_with = "actor_fit", required_unless_present = "actor_fit")]
    pub actor: Option<LawArg>,
    /// Actor fit JSON written by `fit`
    #[arg(long)]
    pub actor_fit: Option<PathBuf>,
    /// Reference power law A,ALPHA
    #[arg(long, value_parser = LawArg::from_str, conflicts_with = "reference_fit")]
    pub reference: Option<LawArg>,
    /// Reference fit JSON written by `fit`
    #[arg(long)]
    pub reference_fit: Option<PathBuf>,
    /// Evaluation percentile for likelihood and ratio
    #[arg(long, value_parser = parse_positive)]
    pub at: Option<f64>,
    /// World paper count, for the most-cited-paper likelihood
    #[arg(long)]
    pub world_n: Option<u64>,
    /// Target papers per year, for the prize-level percentile
    #[arg(long, value_parser = parse_positive)]
    pub annual_count: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PlotdataArgs {
    #[arg(long)]
    pub curve: PathBuf,
    /// Fit JSON; when omitted the curve is fitted with --range/--method
    #[arg(long, conflicts_with_all = ["range", "method"])]
    pub fit: Option<PathBuf>,
    #[arg(long, value_parser = parse_range)]
    pub range: Option<FitRange>,
    #[arg(long, value_enum)]
    pub method: Option<MethodArg>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Fit JSON: the fit plus the percentile below which evaluations
/// extrapolate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitRecord {
    #[serde(flatten)]
    pub fit: PowerLawFit,
    pub extrapolation_below: Option<f64>,
}

impl From<PowerLawFit> for FitRecord {
    fn from(fit: PowerLawFit) -> Self {
        Self {
            extrapolation_below: fit.range.map(|r| r.low),
            fit,
        }
    }
}

/// Parses `args` (program name first) and runs the subcommand, writing
/// results to `stdout` unless an output file is given.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let _ = write!(stderr, "{}", e.render());
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
        }
    };
    match execute(cli.command, stdout, stderr) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "{e}");
            e.exit_code()
        }
    }
}

pub fn execute(command: Command, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CliResult<()> {
    match command {
        Command::Simulate(a) => cmd_simulate(a, stdout),
        Command::Percentiles(a) => cmd_percentiles(a, stdout),
        Command::Fit(a) => cmd_fit(a, stdout),
        Command::Extend(a) => cmd_extend(a, stdout, stderr),
        Command::Assess(a) => cmd_assess(a, stdout),
        Command::Plotdata(a) => cmd_plotdata(a, stdout),
    }
}

fn with_output(
    out: Option<&Path>,
    stdout: &mut dyn Write,
    f: impl FnOnce(&mut dyn Write) -> Result<(), FormatError>,
) -> CliResult<()> {
    let io_err = |e: FormatError| CliError::Data(format!("writing output: {e}"));
    match out {
        Some(path) => {
            let file = File::create(path)
                .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
            let mut w = BufWriter::new(file);
            f(&mut w).map_err(io_err)?;
            w.flush().map_err(|e| io_err(e.into()))
        }
        None => f(stdout).map_err(io_err),
    }
}

fn open(path: &Path) -> CliResult<BufReader<File>> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}

fn load_curve(path: &Path) -> CliResult<PercentileCurve> {
    let curve = read_curve(open(path)?).map_err(|e| data_err(path, e))?;
    if curve.is_empty() {
        return Err(CliError::Data(format!(
            "{}: curve has no points",
            path.display()
        )));
    }
    Ok(curve)
}

fn load_citations(path: &Path) -> CliResult<CitationList> {
    read_citation_list(open(path)?).map_err(|e| data_err(path, e))
}

fn load_fit(path: &Path) -> CliResult<PowerLawFit> {
    let record: FitRecord = serde_json::from_reader(open(path)?)
        .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
    PowerLawFit::supplied(record.fit.coefficient, record.fit.exponent)
        .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
    Ok(record.fit)
}

fn write_json<T: Serialize>(
    value: &T,
    out: Option<&Path>,
    stdout: &mut dyn Write,
) -> CliResult<()> {
    with_output(out, stdout, |w| {
        serde_json::to_writer_pretty(&mut *w, value)
            .map_err(|e| FormatError::File(e.to_string()))?;
        writeln!(w)?;
        Ok(())
    })
}

/// The whole percentile extent of a curve, for fits without `--range`.
fn curve_extent(curve: &PercentileCurve) -> CliResult<FitRange> {
    let high = curve.percentiles().fold(f64::MIN, f64::max);
    let low = curve.percentiles().fold(f64::MAX, f64::min);
    FitRange::new(high, low).map_err(|_| {
        CliError::Data(format!(
            "curve needs at least two percentiles to fit, found {}",
            curve.len()
        ))
    })
}

fn cmd_simulate(a: SimulateArgs, stdout: &mut dyn Write) -> CliResult<()> {
    let curve = if a.analytic {
        analytic_curve(&a.grid.0, &a.actor.0, &a.world.0)?
    } else {
        let spec = SimulationSpec {
            world: a.world.0,
            actor: a.actor.0,
            seed: a.seed,
            discretize: a.discretize,
        };
        let world = sample_world(&spec)?;
        if let Some(path) = &a.citations_out {
            with_output(Some(path), stdout, |w| write_citation_list(&world, w))?;
        }
        build_curve(
            &world,
            ActorSelector::Label(ACTOR_LABEL),
            &a.grid.0,
            TiePolicy::Proportional,
        )?
    };
    with_output(a.out.as_deref(), stdout, |w| write_curve(&curve, w))
}

fn cmd_percentiles(a: PercentilesArgs, stdout: &mut dyn Write) -> CliResult<()> {
    let policy = TiePolicy::from(a.policy);
    let world = load_citations(&a.world)?;
    let actor_list;
    let selector = match (&a.actor, &a.label) {
        (Some(path), None) => {
            if policy == TiePolicy::SecondaryKey {
                return Err(CliError::Usage(
                    "secondary-key policy needs membership mode (--label), not --actor".into(),
                ));
            }
            actor_list = load_citations(path)?;
            ActorSelector::List(&actor_list)
        }
        (None, Some(label)) => ActorSelector::Label(label),
        _ => {
            return Err(CliError::Usage(
                "give either --actor FILE or --label LABEL".into(),
            ))
        }
    };
    let curve = build_curve(&world, selector, &a.grid.0, policy).map_err(|e| match e {
        Error::InvalidRecord(m) => CliError::Data(m),
        other => other.into(),
    })?;
    with_output(a.out.as_deref(), stdout, |w| write_curve(&curve, w))
}

fn cmd_fit(a: FitArgs, stdout: &mut dyn Write) -> CliResult<()> {
    let curve = load_curve(&a.curve)?;
    let range = match a.range {
        Some(r) => r,
        None => curve_extent(&curve)?,
    };
    let fit = fit_curve(&curve, range, a.method.into())?;
    write_json(&FitRecord::from(fit), a.out.as_deref(), stdout)
}

fn cmd_extend(a: ExtendArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CliResult<()> {
    let rows = read_rankings(open(&a.rankings)?).map_err(|e| data_err(&a.rankings, e))?;
    let method = match a.method {
        ExtendMethodArg::ClosedForm => ExtensionMethod::ClosedForm,
        ExtendMethodArg::Regression => ExtensionMethod::Regression,
    };
    let targets = a.targets.map_or_else(|| DEFAULT_TARGETS.to_vec(), |t| t.0);
    let mut parsed = Vec::new();
    let mut failures = 0usize;
    for row in rows {
        match row {
            Ok(r) => parsed.push(r),
            Err(e) => {
                failures += 1;
                let _ = writeln!(stderr, "{}: {e}", a.rankings.display());
            }
        }
    }
    let mut extended = Vec::new();
    for result in extend_batch(&parsed, &targets, method) {
        match result {
            Ok(r) => extended.push(r),
            Err(e) => {
                failures += 1;
                let _ = writeln!(stderr, "{}: {e}", a.rankings.display());
            }
        }
    }
    with_output(a.out.as_deref(), stdout, |w| {
        write_extended(&extended, &targets, w)
    })?;
    if extended.is_empty() && failures > 0 {
        return Err(CliError::Data(format!(
            "no valid rows ({failures} rejected)"
        )));
    }
    Ok(())
}

fn resolve_law(inline: Option<LawArg>, file: Option<&Path>) -> CliResult<Option<PowerLawFit>> {
    match (inline, file) {
        (Some(l), _) => Ok(Some(PowerLawFit::supplied(l.coefficient, l.exponent)?)),
        (None, Some(path)) => load_fit(path).map(Some),
        (None, None) => Ok(None),
    }
}

fn cmd_assess(a: AssessArgs, stdout: &mut dyn Write) -> CliResult<()> {
    let actor_fit = resolve_law(a.actor, a.actor_fit.as_deref())?
        .ok_or_else(|| CliError::Usage("--actor or --actor-fit is required".into()))?;
    let reference_fit = resolve_law(a.reference, a.reference_fit.as_deref())?;
    if a.world_n == Some(0) {
        return Err(CliError::Usage("--world-n must be at least 1".into()));
    }
    let input = AssessmentInput {
        actor_fit,
        reference_fit,
        world_paper_count: a.world_n,
        annual_target_count: a.annual_count,
        at: a.at,
    };
    let report = assess(&input)?;
    write_json(&report, a.out.as_deref(), stdout)
}

fn cmd_plotdata(a: PlotdataArgs, stdout: &mut dyn Write) -> CliResult<()> {
    let curve = load_curve(&a.curve)?;
    let fit = match &a.fit {
        Some(path) => load_fit(path)?,
        None => {
            let range = match a.range {
                Some(r) => r,
                None => curve_extent(&curve)?,
            };
            fit_curve(&curve, range, a.method.unwrap_or(MethodArg::Loglog).into())?
        }
    };
    let log_cell = |v: f64| {
        if v > 0.0 {
            format_number(v.log10())
        } else {
            String::new()
        }
    };
    let mut rows = Vec::with_capacity(curve.len());
    for p in curve.points() {
        let fitted = fit.evaluate(p.percentile)?;
        rows.push([
            format_number(p.percentile),
            format_number(p.count),
            format_number(fitted),
            log_cell(p.percentile),
            log_cell(p.count),
            log_cell(fitted),
        ]);
    }
    with_output(a.out.as_deref(), stdout, |w| {
        let mut csv = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(w);
        csv.write_record([
            "x",
            "count",
            "fitted",
            "log10_x",
            "log10_count",
            "log10_fitted",
        ])?;
        for r in &rows {
            csv.write_record(r)?;
        }
        csv.flush()?;
        Ok(())
    })
}
