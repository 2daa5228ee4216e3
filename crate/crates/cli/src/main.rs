//! `qbounds`: runs the verification suites and synthesizers from the command
//! line and writes a JSON (optionally CSV) report.
//!
//! Exit status: 0 when every check passed, 2 when some inequality was
//! violated, 1 on usage or domain errors.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qbounds::constants::ConstantKind;
use qbounds::grid::BoundaryCondition;
use qbounds::inequalities::{GnsConstant, HardyVariant, ManyBodyHardyVariant};
use qbounds::matter::FermiMode;
use serde::Serialize;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] qbounds::Error),
    #[error("usage: {0}")]
    Usage(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

/// A flag with an optional value: absent → null, bare → true, valued → the value.
fn optional_flag<T: Serialize, S: serde::Serializer>(v: &Option<Option<T>>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        None => s.serialize_none(),
        Some(None) => s.serialize_bool(true),
        Some(Some(v)) => v.serialize(s),
    }
}

fn parsed<T: FromStr<Err = qbounds::Error>>(s: &str) -> Result<T, String> {
    s.parse().map_err(|e: qbounds::Error| e.to_string())
}

#[derive(Parser)]
#[command(name = "qbounds", version, about = "Numerical checks of uncertainty and exclusion inequalities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate named constants.
    Constants(ConstantsArgs),
    /// Run randomized inequality sweeps.
    Check(CheckArgs),
    /// Partition a random density into cubes of bounded mass.
    Cover(CoverArgs),
    /// Synthesize Lieb-Thirring constants from local bounds.
    Lt(LtArgs),
    /// Free Fermi gas energies in a box.
    Fermi(FermiArgs),
    /// Coulomb systems: hydrogen, Baxter, stability.
    Matter(MatterArgs),
    /// A reduced run of every suite.
    All(AllArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Constants(_) => "constants",
            Command::Check(_) => "check",
            Command::Cover(_) => "cover",
            Command::Lt(_) => "lt",
            Command::Fermi(_) => "fermi",
            Command::Matter(_) => "matter",
            Command::All(_) => "all",
        }
    }
}

/// Where the report goes. Not part of the manifest.
#[derive(Args, Debug, Clone, Default)]
pub struct Output {
    /// Write the JSON report here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write a flat CSV table.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

/// Grid and sampling flags shared by the sweep-driven commands.
#[derive(Args, Debug, Clone, Default, Serialize)]
pub struct SweepArgs {
    /// Spatial dimension.
    #[arg(long)]
    pub d: Option<usize>,
    /// Grid cells per axis.
    #[arg(long)]
    pub n: Option<usize>,
    /// Box side length.
    #[arg(long)]
    pub side: Option<f64>,
    /// Boundary condition of the box.
    #[arg(long, value_parser = parsed::<BoundaryCondition>)]
    pub bc: Option<BoundaryCondition>,
    /// Number of randomized trials.
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Relative tolerance overriding each checker's default.
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[value(rename_all = "snake_case")]
#[serde(rename_all = "snake_case")]
pub enum GnsArg {
    Proven,
    OptimalKnown,
}

impl From<GnsArg> for GnsConstant {
    fn from(g: GnsArg) -> Self {
        match g {
            GnsArg::Proven => GnsConstant::Proven,
            GnsArg::OptimalKnown => GnsConstant::OptimalKnown,
        }
    }
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct ConstantsArgs {
    /// Constant to evaluate; all of them when omitted. Besides the named
    /// constants: alpha_statistics, covering, weak_b.
    #[arg(long)]
    pub kind: Option<String>,
    /// Dimension; 1, 2 and 3 when omitted.
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    /// Particle number for alpha_statistics.
    #[serde(rename = "N")]
    #[arg(long = "N")]
    pub particles: Option<usize>,
    #[arg(long)]
    pub q: Option<f64>,
    #[arg(long)]
    pub lambda: Option<f64>,
    #[serde(skip)]
    #[command(flatten)]
    pub output: Output,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct CheckArgs {
    #[command(flatten)]
    pub sweep: SweepArgs,
    #[arg(long)]
    pub heisenberg: bool,
    /// Hardy variant; standard in d = 1, 3 and log2d in d = 2 when no value is given.
    #[arg(long, num_args = 0..=1, value_parser = parsed::<HardyVariant>)]
    #[serde(serialize_with = "optional_flag")]
    pub hardy: Option<Option<HardyVariant>>,
    #[arg(long)]
    pub sobolev: bool,
    /// GNS constant to test against (default proven).
    #[arg(long, num_args = 0..=1, value_enum)]
    #[serde(serialize_with = "optional_flag")]
    pub gns: Option<Option<GnsArg>>,
    #[arg(long)]
    pub poincare: bool,
    /// Kinetic Lieb-Thirring form with the proven constant.
    #[arg(long)]
    pub kinetic: bool,
    /// Many-body Hardy (onedim in d = 1, fermionic otherwise by default).
    #[arg(long, num_args = 0..=1, value_parser = parsed::<ManyBodyHardyVariant>)]
    #[serde(serialize_with = "optional_flag")]
    pub manybody: Option<Option<ManyBodyHardyVariant>>,
    /// Particle number for the many-body check.
    #[serde(rename = "N")]
    #[arg(long = "N")]
    pub particles: Option<usize>,
    /// Closed-form GNS integral identity.
    #[arg(long)]
    pub identity: bool,
    /// Sums of negative eigenvalues of multi-well potentials (d = 1).
    #[arg(long)]
    pub eigenvalue_sum: bool,
    #[arg(long)]
    pub baxter: bool,
    #[arg(long)]
    pub covering: bool,
    #[serde(skip)]
    #[command(flatten)]
    pub output: Output,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct CoverArgs {
    #[command(flatten)]
    pub sweep: SweepArgs,
    /// Mass cap per cube; 1/20 of the total mass when omitted.
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    #[arg(long, default_value_t = 1.0)]
    pub beta: f64,
    #[arg(long, default_value_t = 0.0)]
    pub gamma: f64,
    /// Subtracted mass in the weak bound; lambda/2 when omitted.
    #[arg(long)]
    pub q: Option<f64>,
    #[serde(skip)]
    #[command(flatten)]
    pub output: Output,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct LtArgs {
    #[command(flatten)]
    pub sweep: SweepArgs,
    /// Spin states.
    #[arg(long, default_value_t = 1)]
    pub q: usize,
    /// Inverse-square coupling: synthesize the bosonic constants instead.
    #[arg(long)]
    pub beta: Option<f64>,
    #[serde(skip)]
    #[command(flatten)]
    pub output: Output,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct FermiArgs {
    #[serde(rename = "N")]
    #[arg(long = "N", default_value_t = 100)]
    pub particles: usize,
    #[arg(long, default_value_t = 3)]
    pub d: usize,
    #[arg(long, default_value_t = 1)]
    pub q: usize,
    /// Box side; the volume is side^d.
    #[arg(long, default_value_t = 1.0)]
    pub side: f64,
    /// Only this mode; all three when omitted.
    #[arg(long, value_parser = parsed::<FermiMode>)]
    pub mode: Option<FermiMode>,
    #[serde(skip)]
    #[command(flatten)]
    pub output: Output,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct MatterArgs {
    #[command(flatten)]
    pub sweep: SweepArgs,
    #[arg(long)]
    pub stability: bool,
    #[arg(long)]
    pub hydrogen: bool,
    #[arg(long)]
    pub baxter: bool,
    /// Gaussian trial states against the first-kind bound.
    #[arg(long)]
    pub first_kind: bool,
    #[serde(rename = "Z")]
    #[arg(long = "Z", default_value_t = 1.0)]
    pub z: f64,
    #[serde(rename = "N")]
    #[arg(long = "N", default_value_t = 1)]
    pub particles: usize,
    #[serde(rename = "M")]
    #[arg(long = "M", default_value_t = 1)]
    pub nuclei: usize,
    #[arg(long, default_value_t = 1)]
    pub q: usize,
    #[arg(long, default_value_t = 1.0)]
    pub m: f64,
    /// Inverse-square repulsion strength; adds the bosonic stability bound.
    #[arg(long)]
    pub beta: Option<f64>,
    #[serde(skip)]
    #[command(flatten)]
    pub output: Output,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct AllArgs {
    /// Trials per sweep.
    #[arg(long, default_value_t = 20)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[serde(skip)]
    #[command(flatten)]
    pub output: Output,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(&cli.command) {
        Ok(report) => {
            let s = report.summary;
            eprintln!("{}: {} checks, {} passed, {} failed", cli.command.name(), s.total, s.passed, s.failed);
            ExitCode::from(if s.failed == 0 { 0 } else { 2 })
        }
        Err(e) => {
            eprintln!("qbounds {}: {e}", cli.command.name());
            ExitCode::from(1)
        }
    }
}

impl ConstantsArgs {
    fn named_kind(&self) -> Result<Option<ConstantKind>, CliError> {
        match self.kind.as_deref() {
            None | Some("alpha_statistics" | "covering" | "weak_b") => Ok(None),
            Some(k) => Ok(Some(k.parse()?)),
        }
    }
}
