use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dendrodyn::rational::RatStr;
use serde::Deserialize;

#[derive(Parser, Debug)]
#[command(name = "dendrodyn", version, about = "Exact experiments with group actions on dendrites")]
pub struct Cli {
    /// Run the experiment described by a TOML or JSON file.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    #[command(flatten)]
    pub output: OutputArgs,
    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Args, Deserialize, Clone, Debug, Default, PartialEq)]
#[serde(default)]
pub struct OutputArgs {
    /// Directory for report files; reports go to stdout when omitted.
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Worker threads for parallel sections (results do not depend on it).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Seed for sampled validation points.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
}

#[derive(ValueEnum, Deserialize, Clone, Copy, Debug, Default, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

/// Either a zoo system or a dendrite file plus named homeomorphism files.
#[derive(Args, Deserialize, Clone, Debug, Default, PartialEq)]
#[serde(default)]
pub struct SystemArgs {
    /// Zoo system, e.g. thompson, odometer:D=8, gehman:D=4, star4.
    #[arg(long)]
    pub system: Option<String>,
    /// Dendrite JSON for a custom system.
    #[arg(long, value_name = "FILE")]
    pub dendrite: Option<PathBuf>,
    /// Generator as NAME=FILE (homeomorphism JSON); repeatable.
    #[arg(long = "homeo", value_name = "NAME=FILE")]
    pub homeos: Vec<String>,
}

/// Points are written `v7`, `e3@1/2`, or a bare rational on a one-edge
/// dendrite.
#[derive(Args, Deserialize, Clone, Debug, Default, PartialEq)]
#[serde(default)]
pub struct PointArg {
    /// Base point; defaults to the system's base point.
    #[arg(long)]
    pub point: Option<String>,
}

#[derive(Args, Deserialize, Clone, Debug, Default, PartialEq)]
#[serde(default)]
pub struct SetArg {
    /// Comma-separated point set; defaults to the system's minimal set.
    #[arg(long, value_delimiter = ',')]
    pub points: Vec<String>,
}

fn default_radius() -> usize {
    4
}

fn default_orbit_budget() -> usize {
    64
}

fn default_n_max() -> usize {
    6
}

fn default_eps() -> RatStr {
    RatStr(dendrodyn::rational::q(1, 8))
}

fn default_ns() -> Vec<usize> {
    vec![1, 2, 4, 8, 16]
}

fn default_ratio_ns() -> Vec<usize> {
    vec![2, 10, 50]
}

fn default_generator() -> String {
    "g".into()
}

fn default_max_len() -> usize {
    3
}

fn default_level() -> usize {
    1
}

fn default_samples() -> usize {
    100
}

#[derive(Args, Deserialize, Clone, Debug, PartialEq)]
pub struct OrbitArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub system: SystemArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub point: PointArg,
    /// Word-ball radius R (at most 4096).
    #[arg(long, default_value_t = default_radius())]
    #[serde(default = "default_radius")]
    pub radius: usize,
}

#[derive(Args, Deserialize, Clone, Debug, PartialEq)]
pub struct FiniteOrbitArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub system: SystemArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub point: PointArg,
    /// Largest radius explored before giving up.
    #[arg(long, default_value_t = default_orbit_budget())]
    #[serde(default = "default_orbit_budget")]
    pub radius: usize,
}

#[derive(Args, Deserialize, Clone, Debug, PartialEq)]
pub struct MinimalSetArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub system: SystemArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub point: PointArg,
    #[arg(long, default_value_t = default_radius())]
    #[serde(default = "default_radius")]
    pub radius: usize,
    /// Convergence tolerance for the Hausdorff increments.
    #[arg(long, default_value_t = default_eps())]
    #[serde(default = "default_eps")]
    pub eps: RatStr,
}

#[derive(Args, Deserialize, Clone, Debug, PartialEq)]
pub struct ClassifyArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub system: SystemArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub set: SetArg,
    #[arg(long, default_value_t = default_eps())]
    #[serde(default = "default_eps")]
    pub eps: RatStr,
    /// Treat the set as a certified finite orbit.
    #[arg(long)]
    #[serde(default)]
    pub certified: bool,
}

#[derive(Args, Deserialize, Clone, Debug, PartialEq)]
pub struct TowerArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub system: SystemArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub set: SetArg,
    /// Number of tower levels (at most 32).
    #[arg(long, default_value_t = default_n_max())]
    #[serde(default = "default_n_max")]
    pub n_max: usize,
}

#[derive(Args, Deserialize, Clone, Debug, PartialEq)]
pub struct CoverArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub system: SystemArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub set: SetArg,
    /// Tower level n of the cover F^n.
    #[arg(long, default_value_t = default_level())]
    #[serde(default = "default_level")]
    pub level: usize,
}

#[derive(Args, Deserialize, Clone, Debug, PartialEq)]
pub struct CertifyArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub system: SystemArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub set: SetArg,
    #[arg(long, default_value_t = default_n_max())]
    #[serde(default = "default_n_max")]
    pub n_max: usize,
    /// Final mesh must fall below this for a Certified verdict (default 1/16).
    #[arg(long)]
    #[serde(default)]
    pub threshold: Option<RatStr>,
}

#[derive(ValueEnum, Deserialize, Clone, Copy, Debug, Default, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum MeasureKind {
    /// Normalized length measure.
    #[default]
    Canonical,
    /// Point mass at --point.
    Dirac,
    /// Uniform measure on the finite orbit of --point.
    Orbit,
}

#[derive(Args, Deserialize, Clone, Debug, PartialEq)]
pub struct MeasureArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub system: SystemArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub point: PointArg,
    #[arg(long, value_enum, default_value_t)]
    #[serde(default)]
    pub kind: MeasureKind,
}

#[derive(Args, Deserialize, Clone, Debug, PartialEq)]
pub struct PushforwardArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub system: SystemArgs,
    /// Word to push along, e.g. "f g^-1".
    #[arg(long)]
    pub word: String,
    /// Measure JSON; the canonical measure when omitted.
    #[arg(long, value_name = "FILE")]
    #[serde(default)]
    pub measure: Option<PathBuf>,
}

#[derive(Args, Deserialize, Clone, Debug, PartialEq)]
pub struct FolnerAverageArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub system: SystemArgs,
    /// μ0 is the point mass here.
    #[command(flatten)]
    #[serde(flatten)]
    pub point: PointArg,
    /// Window index n of F_n.
    #[arg(long)]
    pub n: usize,
}

#[derive(Args, Deserialize, Clone, Debug, PartialEq)]
pub struct DefectArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub system: SystemArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub point: PointArg,
    /// Window indices to tabulate.
    #[arg(long, value_delimiter = ',', default_values_t = default_ns())]
    #[serde(default = "default_ns")]
    pub ns: Vec<usize>,
}

#[derive(Args, Deserialize, Clone, Debug, PartialEq)]
pub struct ParadoxArgs {
    /// Word length L (at most 10).
    #[arg(long, default_value_t = default_max_len())]
    #[serde(default = "default_max_len")]
    pub max_len: usize,
}

#[derive(Args, Deserialize, Clone, Debug, PartialEq)]
pub struct FolnerRatioArgs {
    #[arg(long, default_value_t = default_generator())]
    #[serde(default = "default_generator")]
    pub generator: String,
    #[arg(long, value_delimiter = ',', default_values_t = default_ratio_ns())]
    #[serde(default = "default_ratio_ns")]
    pub ns: Vec<usize>,
}

#[derive(Args, Deserialize, Clone, Debug, PartialEq)]
pub struct ProximalArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub system: SystemArgs,
    #[arg(long, default_value_t = default_radius())]
    #[serde(default = "default_radius")]
    pub radius: usize,
}

#[derive(Args, Deserialize, Clone, Debug, PartialEq)]
pub struct RecurrenceArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub system: SystemArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub point: PointArg,
    #[arg(long, default_value_t = default_eps())]
    #[serde(default = "default_eps")]
    pub eps: RatStr,
    #[arg(long, default_value_t = default_max_len())]
    #[serde(default = "default_max_len")]
    pub max_len: usize,
}

#[derive(Args, Deserialize, Clone, Debug, PartialEq)]
pub struct ValidateArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub system: SystemArgs,
    /// Random interior points round-tripped per map.
    #[arg(long, default_value_t = default_samples())]
    #[serde(default = "default_samples")]
    pub samples: usize,
}

#[derive(Subcommand, Deserialize, Clone, Debug, PartialEq)]
#[serde(tag = "action", rename_all = "lowercase")]
pub enum ZooCommand {
    /// List the available systems.
    List,
    /// Write a system's dendrite and generators as JSON files.
    Export { name: String },
}

#[derive(ValueEnum, Deserialize, Clone, Copy, Debug, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum PlotKind {
    /// n,mesh from a certify report.
    Mesh,
    /// n,defect from a defect report.
    Defect,
    /// R,orbit from an orbit report.
    Growth,
    /// eps,delta from a certify report.
    Delta,
}

#[derive(Args, Deserialize, Clone, Debug, PartialEq)]
pub struct PlotArgs {
    /// JSON report written by an earlier run.
    #[arg(long, value_name = "FILE")]
    pub report: PathBuf,
    #[arg(long, value_enum)]
    pub kind: PlotKind,
}

#[derive(Subcommand, Deserialize, Clone, Debug, PartialEq)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// Orbit of a point under the radius-R word ball.
    Orbit(OrbitArgs),
    /// Search for a closed finite orbit.
    FiniteOrbit(FiniteOrbitArgs),
    /// Hausdorff increments of growing orbit balls.
    MinimalSet(MinimalSetArgs),
    /// Classify a finite approximation of a minimal set.
    Classify(ClassifyArgs),
    /// Sub-tree tower T_n built from finite orbits.
    Tower(TowerArgs),
    /// Frontier cover F^n at one tower level, with its equivariance check.
    Cover(CoverArgs),
    /// Equicontinuity certificate; exits 2 on a Failed verdict.
    Certify(CertifyArgs),
    /// Canonical, point or uniform orbit measure.
    Measure(MeasureArgs),
    /// Push a measure forward along a word.
    Pushforward(PushforwardArgs),
    /// Følner average ν_n of a point mass.
    FolnerAverage(FolnerAverageArgs),
    /// Invariance defect of Følner averages on the probe dictionary.
    Defect(DefectArgs),
    /// Free-group paradoxical decomposition check.
    ParadoxCheck(ParadoxArgs),
    /// |gF_n Δ F_n| / |F_n| for the cyclic scheme.
    FolnerRatio(FolnerRatioArgs),
    /// Greedy contraction scan of the canonical measure.
    Proximal(ProximalArgs),
    /// Words returning a point close to itself.
    Recurrence(RecurrenceArgs),
    /// Validate generator maps; exits 2 on a violation.
    Validate(ValidateArgs),
    /// Built-in example systems.
    #[command(subcommand)]
    Zoo(ZooCommand),
    /// Two-column CSV plot data from a JSON report.
    Plot(PlotArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Orbit(_) => "orbit",
            Command::FiniteOrbit(_) => "finite-orbit",
            Command::MinimalSet(_) => "minimal-set",
            Command::Classify(_) => "classify",
            Command::Tower(_) => "tower",
            Command::Cover(_) => "cover",
            Command::Certify(_) => "certify",
            Command::Measure(_) => "measure",
            Command::Pushforward(_) => "pushforward",
            Command::FolnerAverage(_) => "folner-average",
            Command::Defect(_) => "defect",
            Command::ParadoxCheck(_) => "paradox-check",
            Command::FolnerRatio(_) => "folner-ratio",
            Command::Proximal(_) => "proximal",
            Command::Recurrence(_) => "recurrence",
            Command::Validate(_) => "validate",
            Command::Zoo(_) => "zoo",
            Command::Plot(_) => "plot",
        }
    }
}

/// A config file: one command with its parameters plus output settings.
#[derive(Deserialize, Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    #[serde(flatten)]
    pub command: Command,
    #[serde(flatten)]
    pub output: OutputArgs,
}
