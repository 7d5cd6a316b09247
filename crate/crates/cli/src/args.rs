use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use casimir_core::reflection::Prescription;
use casimir_core::thermo::MethodPolicy;
use casimir_core::{ModelKind, RelaxationModel};

use crate::units::parse_length;

#[derive(Parser, Debug)]
#[command(name = "casimir", version, about = "Thermal Casimir correction for metals with anomalous skin effect")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Free-energy correction, entropy and forces at one (a, T) point.
    Compute(ComputeArgs),
    /// Parallel sweep over T, a or A.
    Sweep(SweepArgs),
    /// G(A) at small tau with both asymptotic expansions.
    Figure1(Figure1Args),
    /// G(T) for the material at several separations.
    Figure2(Figure2Args),
    /// The q1, q2, p1, p2 expansion constants.
    Constants(ConstantsArgs),
    /// Validity report of the strong anomalous skin effect description.
    Applicability(ApplicabilityArgs),
    /// Temperature of the largest relative correction at a separation.
    Peak(PeakArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PrescriptionArg {
    Unmodified,
    IdealStatic,
    PlasmaLike,
}

impl From<PrescriptionArg> for Prescription {
    fn from(p: PrescriptionArg) -> Self {
        match p {
            PrescriptionArg::Unmodified => Prescription::Unmodified,
            PrescriptionArg::IdealStatic => Prescription::IdealStatic,
            PrescriptionArg::PlasmaLike => Prescription::PlasmaLike,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModelArg {
    Impedance,
    Drude,
    Ideal,
}

impl From<ModelArg> for ModelKind {
    fn from(m: ModelArg) -> Self {
        match m {
            ModelArg::Impedance => ModelKind::Impedance,
            ModelArg::Drude => ModelKind::Drude,
            ModelArg::Ideal => ModelKind::Ideal,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum RelaxationArg {
    Poly,
    BlochGruneisen,
}

impl From<RelaxationArg> for RelaxationModel {
    fn from(r: RelaxationArg) -> Self {
        match r {
            RelaxationArg::Poly => RelaxationModel::Poly,
            RelaxationArg::BlochGruneisen => RelaxationModel::BlochGruneisen,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Numeric,
    Auto,
}

impl From<MethodArg> for MethodPolicy {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Numeric => MethodPolicy::Numeric,
            MethodArg::Auto => MethodPolicy::Auto,
        }
    }
}

/// Options shared by every command that evaluates the correction.
#[derive(Args, Debug, Clone)]
pub struct PhysicsArgs {
    /// Material file, or a preset name (`gold`, or `<name>.toml` in $CASIMIR_MATERIAL_DIR).
    #[arg(long, default_value = "gold")]
    pub material: String,
    #[arg(long, value_enum, default_value_t = ModelArg::Impedance)]
    pub model: ModelArg,
    #[arg(long, value_enum, default_value_t = RelaxationArg::BlochGruneisen)]
    pub relaxation: RelaxationArg,
    /// Absolute tolerance of every integral.
    #[arg(long, default_value_t = 1e-6)]
    pub abs_tol: f64,
    /// Use closed-form expansions inside their trusted A-range.
    #[arg(long, value_enum, default_value_t = MethodArg::Numeric)]
    pub method: MethodArg,
    /// l/delta ratio above which the skin effect counts as anomalous.
    #[arg(long, default_value_t = casimir_core::materials::DEFAULT_ASE_THRESHOLD)]
    pub ase_threshold: f64,
}

#[derive(Args, Debug)]
pub struct ComputeArgs {
    #[command(flatten)]
    pub physics: PhysicsArgs,
    /// Plate separation: meters, or with a unit suffix (`300nm`, `0.3um`).
    #[arg(long, value_parser = parse_length)]
    pub a: f64,
    /// Temperature, K.
    #[arg(long = "T")]
    pub t: f64,
    #[arg(long, value_enum, default_value_t = PrescriptionArg::IdealStatic)]
    pub prescription: PrescriptionArg,
    /// Sphere radius for the proximity-force sphere-plate force.
    #[arg(long, value_parser = parse_length)]
    pub sphere_radius: Option<f64>,
    /// Write the record here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Axis {
    #[value(name = "T")]
    T,
    #[value(name = "a")]
    A,
    /// The impedance parameter A; solved for T at fixed --a, or for a at fixed --T.
    #[value(name = "A")]
    BigA,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Spacing {
    Linear,
    Log,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[command(flatten)]
    pub physics: PhysicsArgs,
    #[arg(long, value_enum)]
    pub axis: Axis,
    /// Lower end of the axis (lengths accept unit suffixes).
    #[arg(long, allow_hyphen_values = true)]
    pub min: String,
    #[arg(long, allow_hyphen_values = true)]
    pub max: String,
    #[arg(long, default_value_t = 11)]
    pub count: usize,
    #[arg(long, value_enum, default_value_t = Spacing::Linear)]
    pub spacing: Spacing,
    /// Fixed separation (required unless the axis is `a`).
    #[arg(long, value_parser = parse_length)]
    pub a: Option<f64>,
    /// Fixed temperature, K (required unless the axis is `T`).
    #[arg(long = "T")]
    pub t: Option<f64>,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "ideal-static")]
    pub prescriptions: Vec<PrescriptionArg>,
    /// Also compute entropy and plate-plate pressure (three extra evaluations each).
    #[arg(long)]
    pub full: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct Figure1Args {
    #[arg(long, default_value_t = 1e-4)]
    pub tau: f64,
    #[arg(long, default_value_t = 61)]
    pub points: usize,
    #[arg(long, default_value_t = 1e-3)]
    pub a_min: f64,
    #[arg(long, default_value_t = 1e3)]
    pub a_max: f64,
    #[arg(long, default_value_t = 1e-6)]
    pub abs_tol: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct Figure2Args {
    #[command(flatten)]
    pub physics: PhysicsArgs,
    #[arg(long, value_delimiter = ',', value_parser = parse_length, default_value = "100nm,300nm,500nm")]
    pub separations: Vec<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub t_min: f64,
    #[arg(long, default_value_t = 80.0)]
    pub t_max: f64,
    #[arg(long, default_value_t = 80)]
    pub points: usize,
    #[arg(long, value_enum, default_value_t = Spacing::Linear)]
    pub spacing: Spacing,
    #[arg(long, value_enum, default_value_t = PrescriptionArg::IdealStatic)]
    pub prescription: PrescriptionArg,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ConstantsArgs {
    #[arg(long, default_value_t = 1e-12)]
    pub abs_tol: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ApplicabilityArgs {
    #[arg(long, default_value = "gold")]
    pub material: String,
    #[arg(long, value_parser = parse_length)]
    pub a: f64,
    #[arg(long = "T")]
    pub t: f64,
    #[arg(long, value_enum, default_value_t = RelaxationArg::BlochGruneisen)]
    pub relaxation: RelaxationArg,
    #[arg(long, default_value_t = casimir_core::materials::DEFAULT_ASE_THRESHOLD)]
    pub ase_threshold: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct PeakArgs {
    #[command(flatten)]
    pub physics: PhysicsArgs,
    #[arg(long, value_delimiter = ',', value_parser = parse_length, default_value = "100nm,300nm,500nm")]
    pub separations: Vec<f64>,
    /// Lower end of the search bracket, K (default: 1e-6 of the upper end).
    #[arg(long)]
    pub t_min: Option<f64>,
    /// Upper end of the search bracket, K (default: where 2 pi k T = hbar Omega).
    #[arg(long)]
    pub t_max: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}
