//! Temperature correction to the Casimir interaction between metal plates at
//! cryogenic temperatures, where the anomalous skin effect replaces the local
//! permittivity description of the metal by a surface impedance.
//!
//! The crate is organised bottom-up:
//!
//! * [`materials`] - metal parameters, relaxation frequency models and the
//!   applicability gates of the impedance description.
//! * [`reflection`] - dimensionless state, Drude and impedance reflection
//!   coefficients, the zero-frequency prescriptions.
//! * [`quad`] - adaptive Gauss-Kronrod engine used everywhere below.
//! * [`integrals`] - the thermal integrals `I1..I3`, the zero-temperature
//!   energy and the `q`/`p` constants.
//! * [`asymptotics`] - small-A and large-A expansions, the ideal-metal
//!   correction, and the search for the maximal relative correction.
//! * [`thermo`] - free-energy correction, entropy and forces.
//! * [`config`] - key-value material files with unit conversion.

// `!(x > 0.0)` is used on purpose: it rejects NaN as well
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotics;
pub mod config;
pub mod constants;
mod error;
pub mod integrals;
pub mod materials;
pub mod quad;
pub mod reflection;
pub mod thermo;

pub use asymptotics::{AsymptoticRegime, RegimeBounds};
pub use error::{Error, Result};
pub use integrals::{IntegralSet, Polarization, QuadratureConfig};
pub use materials::{ApplicabilityReport, MaterialParams, RelaxationModel};
pub use reflection::{DimensionlessState, ModelKind, PrescriptionKind, Reflection};
pub use thermo::{CasimirSetup, CorrectionResult, GeometrySetup};
