//! Reflection coefficients at imaginary frequency.
//!
//! All reflection amplitudes here have the Fresnel shape `r = (u - v)/(u + v)`.
//! [`Reflection`] hands out the pair `(u, v)` rather than `r` itself so that
//! the integrals can form `1 - r^2 = 4uv/(u + v)^2` without cancellation when
//! `r` is close to one.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::constants::{C, HBAR, K_B, PI, ZETA3};
use crate::error::{Error, Result};
use crate::materials::MaterialParams;

/// Leontovich boundary condition is trusted for `|Z|` below this.
pub const LEONTOVICH_Z_LIMIT: f64 = 0.3;

/// Derived dimensionless quantities for a separation `a` and temperature `T`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DimensionlessState {
    pub a: f64,
    #[serde(rename = "T")]
    pub t: f64,
    /// `c / 2a`, rad/s.
    pub omega_a: f64,
    /// `k T_eff = hbar omega_a`, K.
    #[serde(rename = "T_eff")]
    pub t_eff: f64,
    /// `2 pi T / T_eff`.
    pub tau: f64,
    /// `(c/v * omega_p^2/omega_a^2 * tau)^(1/3)`.
    #[serde(rename = "A")]
    pub a_param: f64,
    /// `tau^2 / A`.
    #[serde(rename = "B")]
    pub b_param: f64,
    /// `(v/c) (omega_a/omega_p)^2`, the prefactor of the strong-ASE impedance.
    pub kappa: f64,
}

impl DimensionlessState {
    pub fn new(a: f64, t: f64, m: &MaterialParams) -> Result<Self> {
        if !(a > 0.0 && a.is_finite()) {
            return Err(Error::invalid("a", format!("must be positive, got {a}")));
        }
        if !(t >= 0.0 && t.is_finite()) {
            return Err(Error::invalid("T", format!("must be non-negative, got {t}")));
        }
        let omega_a = C / (2.0 * a);
        let t_eff = HBAR * omega_a / K_B;
        let tau = 2.0 * PI * t / t_eff;
        let ratio = omega_a / m.omega_p;
        let kappa = (m.v() / C) * ratio * ratio;
        let a_param = (tau / kappa).cbrt();
        // B from the identity A B = tau^2 keeps the pair consistent to rounding
        let b_param = if a_param > 0.0 { tau * tau / a_param } else { 0.0 };
        Ok(Self {
            a,
            t,
            omega_a,
            t_eff,
            tau,
            a_param,
            b_param,
            kappa,
        })
    }

    /// Dimensionless Matsubara frequency `n tau`.
    pub fn xi(&self, n: u32) -> f64 {
        n as f64 * self.tau
    }
}

/// Which description of the metal feeds the `n >= 1` reflection coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum ModelKind {
    /// Strong anomalous skin effect surface impedance.
    #[default]
    Impedance,
    /// Local Drude permittivity.
    Drude,
    /// Perfect conductor, `r1 = r2 = 1`.
    Ideal,
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModelKind::Impedance => "impedance",
            ModelKind::Drude => "drude",
            ModelKind::Ideal => "ideal",
        })
    }
}

/// Rule used for the zero-frequency Matsubara term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Prescription {
    /// Drude coefficients taken literally at zero frequency: `r1^2 = 0`, `r2^2 = 1`.
    Unmodified,
    /// Ideal-metal static limit, `r1^2 = r2^2 = 1`.
    #[default]
    IdealStatic,
    /// `r1^2(0, y)` replaced by `r1^2(y, y)` so that it matches the plasma model.
    PlasmaLike,
}

impl fmt::Display for Prescription {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Prescription::Unmodified => "unmodified",
            Prescription::IdealStatic => "ideal-static",
            Prescription::PlasmaLike => "plasma-like",
        })
    }
}

/// Function `x -> I2(x)` for the subleading relaxation term of the
/// plasma-like prescription.
pub type I2Hook = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A prescription together with its optional external hook.
#[derive(Clone, Default)]
pub struct PrescriptionKind {
    pub variant: Prescription,
    pub external_i2_hook: Option<I2Hook>,
}

impl PrescriptionKind {
    pub fn new(variant: Prescription) -> Self {
        Self {
            variant,
            external_i2_hook: None,
        }
    }

    pub fn with_i2_hook(mut self, hook: I2Hook) -> Self {
        self.external_i2_hook = Some(hook);
        self
    }
}

impl From<Prescription> for PrescriptionKind {
    fn from(p: Prescription) -> Self {
        Self::new(p)
    }
}

impl fmt::Debug for PrescriptionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PrescriptionKind")
            .field("variant", &self.variant)
            .field("external_i2_hook", &self.external_i2_hook.is_some())
            .finish()
    }
}

/// The zero-frequency coefficient and how it was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Alpha {
    pub value: f64,
    /// False when the plasma-like subleading relaxation term was dropped
    /// because no hook was supplied.
    pub i2_term_included: bool,
}

/// `alpha` in `F0 = -alpha kT zeta(3) / (8 pi a^2)`.
pub fn alpha_coefficient(
    p: &PrescriptionKind,
    m: &MaterialParams,
    omega_a: f64,
    omega_tau: f64,
) -> Result<Alpha> {
    match p.variant {
        Prescription::Unmodified => Ok(Alpha {
            value: 0.5,
            i2_term_included: true,
        }),
        Prescription::IdealStatic => Ok(Alpha {
            value: 1.0,
            i2_term_included: true,
        }),
        Prescription::PlasmaLike => {
            let ratio = omega_a / m.omega_p;
            if !(ratio < 0.25) {
                return Err(Error::invalid(
                    "omega_a/omega_p",
                    format!("plasma-like alpha is a small-ratio series, got {ratio:.3}"),
                ));
            }
            let mut value = 1.0 - 4.0 * ratio;
            let included = match &p.external_i2_hook {
                Some(i2) => {
                    value -= (omega_tau / m.omega_p) * (2.0 / ZETA3) * i2(omega_tau / omega_a);
                    true
                }
                None => false,
            };
            Ok(Alpha {
                value,
                i2_term_included: included,
            })
        }
    }
}

/// Zero-frequency Matsubara contribution, J/m^2.
pub fn zero_term_free_energy(alpha: f64, a: f64, t: f64) -> Result<f64> {
    if !(a > 0.0) {
        return Err(Error::invalid("a", "must be positive"));
    }
    if !(t >= 0.0) {
        return Err(Error::invalid("T", "must be non-negative"));
    }
    Ok(-alpha * K_B * t / (8.0 * PI * a * a) * ZETA3)
}

/// Drude permittivity `1 + omega_p^2 / (zeta (zeta + omega_tau))` at imaginary
/// frequency `i zeta`.
pub fn drude_permittivity(zeta: f64, m: &MaterialParams, omega_tau: f64) -> Result<f64> {
    if !(zeta > 0.0) {
        return Err(Error::invalid(
            "zeta",
            "must be positive; the zero-frequency term belongs to the prescription layer",
        ));
    }
    Ok(1.0 + m.omega_p * m.omega_p / (zeta * (zeta + omega_tau)))
}

/// `R(xi) = (omega_p/omega_a) sqrt(xi / (xi + omega_tau/omega_a))`.
pub fn drude_r_function(xi: f64, wp_over_wa: f64, wt_over_wa: f64) -> f64 {
    wp_over_wa * (xi / (xi + wt_over_wa)).sqrt()
}

/// Drude amplitudes `(r1, r2)` in terms of `R`.
pub fn drude_reflection(xi: f64, y: f64, r: f64) -> Result<(f64, f64)> {
    if !(xi > 0.0) {
        return Err(Error::invalid("xi", "must be positive"));
    }
    if !(y > 0.0) {
        return Err(Error::invalid("y", "must be positive"));
    }
    let s = r.hypot(y);
    let eps_y = (1.0 + (r / xi) * (r / xi)) * y;
    Ok(((s - y) / (s + y), (s - eps_y) / (s + eps_y)))
}

/// Strong-ASE surface impedance at imaginary frequency,
/// `Z = ((v/c) (omega_a/omega_p)^2 xi^2)^(1/3)`.
///
/// Logs a warning when `xi_n` exceeds `Omega / omega_a`, where the strong-ASE
/// form stops being valid.
pub fn impedance_ase(xi_n: f64, m: &MaterialParams, omega_a: f64) -> Result<f64> {
    if !(xi_n >= 0.0) {
        return Err(Error::invalid("xi_n", format!("must be non-negative, got {xi_n}")));
    }
    if !impedance_ase_in_range(xi_n, m, omega_a) {
        log::warn!(
            "xi = {xi_n:.4e} exceeds Omega/omega_a = {:.4e}; strong-ASE impedance is outside its range",
            m.omega_ase() / omega_a
        );
    }
    let ratio = omega_a / m.omega_p;
    Ok(((m.v() / C) * ratio * ratio * xi_n * xi_n).cbrt())
}

/// `xi_n < Omega / omega_a`.
pub fn impedance_ase_in_range(xi_n: f64, m: &MaterialParams, omega_a: f64) -> bool {
    xi_n < m.omega_ase() / omega_a
}

/// Leontovich amplitudes `r1 = (xi - yZ)/(xi + yZ)`, `r2 = (y - xi Z)/(y + xi Z)`.
pub fn impedance_reflection(xi_n: f64, y: f64, z: f64) -> Result<(f64, f64)> {
    if !(xi_n > 0.0) {
        return Err(Error::invalid("xi_n", "must be positive"));
    }
    if !(y >= 0.0) {
        return Err(Error::invalid("y", "must be non-negative"));
    }
    if !(z >= 0.0) {
        return Err(Error::invalid("Z", "must be non-negative"));
    }
    if z >= LEONTOVICH_Z_LIMIT {
        log::warn!("|Z| = {z:.3} is not small; Leontovich boundary condition is unreliable");
    }
    let r1 = (xi_n - y * z) / (xi_n + y * z);
    let denom = y + xi_n * z;
    let r2 = if denom == 0.0 { 1.0 } else { (y - xi_n * z) / denom };
    Ok((r1, r2))
}

/// Orthogonal (`r1`, TE) or parallel (`r2`, TM) polarization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Polarization {
    Perpendicular,
    Parallel,
}

impl Polarization {
    pub const BOTH: [Polarization; 2] = [Polarization::Perpendicular, Polarization::Parallel];

    pub fn index(self) -> usize {
        match self {
            Polarization::Perpendicular => 0,
            Polarization::Parallel => 1,
        }
    }
}

/// Dimensionless reflection model evaluated inside the thermal integrals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Reflection {
    /// Strong-ASE impedance; `kappa_cbrt = ((v/c)(omega_a/omega_p)^2)^(1/3)`.
    Impedance { kappa_cbrt: f64 },
    /// Drude permittivity with `omega_p/omega_a` and `omega_tau/omega_a`.
    Drude { wp: f64, wt: f64 },
    Ideal,
}

impl Reflection {
    pub fn for_state(
        kind: ModelKind,
        state: &DimensionlessState,
        m: &MaterialParams,
        omega_tau: f64,
    ) -> Self {
        match kind {
            ModelKind::Impedance => Reflection::Impedance {
                kappa_cbrt: state.kappa.cbrt(),
            },
            ModelKind::Drude => Reflection::Drude {
                wp: m.omega_p / state.omega_a,
                wt: omega_tau / state.omega_a,
            },
            ModelKind::Ideal => Reflection::Ideal,
        }
    }

    /// Impedance model fixed by the reduced pair `(A, tau)`: `kappa = tau / A^3`.
    pub fn impedance_reduced(a_param: f64, tau: f64) -> Self {
        Reflection::Impedance {
            kappa_cbrt: tau.cbrt() / a_param,
        }
    }

    pub fn kind(&self) -> ModelKind {
        match self {
            Reflection::Impedance { .. } => ModelKind::Impedance,
            Reflection::Drude { .. } => ModelKind::Drude,
            Reflection::Ideal => ModelKind::Ideal,
        }
    }

    /// `(u, v)` with `r = (u - v)/(u + v)` for real `xi > 0`, `y >= 0`.
    pub fn fresnel(&self, pol: Polarization, xi: f64, y: f64) -> (f64, f64) {
        match (*self, pol) {
            (Reflection::Ideal, _) => (1.0, 0.0),
            (Reflection::Impedance { kappa_cbrt }, Polarization::Perpendicular) => {
                // xi / Z = xi^(1/3) / kappa^(1/3)
                (xi.cbrt() / kappa_cbrt, y)
            }
            (Reflection::Impedance { kappa_cbrt }, Polarization::Parallel) => {
                let c = xi.cbrt();
                (y, kappa_cbrt * xi * c * c)
            }
            (Reflection::Drude { wp, wt }, pol) => {
                let r2 = wp * wp * xi / (xi + wt);
                let s = (r2 + y * y).sqrt();
                match pol {
                    Polarization::Perpendicular => (s, y),
                    Polarization::Parallel => (s, (1.0 + wp * wp / (xi * (xi + wt))) * y),
                }
            }
        }
    }

    /// Same as [`Reflection::fresnel`] continued to complex `xi`, `y` on
    /// principal branches.
    pub fn fresnel_complex(
        &self,
        pol: Polarization,
        xi: Complex64,
        y: Complex64,
    ) -> (Complex64, Complex64) {
        let one = Complex64::new(1.0, 0.0);
        match (*self, pol) {
            (Reflection::Ideal, _) => (one, Complex64::new(0.0, 0.0)),
            (Reflection::Impedance { kappa_cbrt }, Polarization::Perpendicular) => {
                (xi.cbrt() / kappa_cbrt, y)
            }
            (Reflection::Impedance { kappa_cbrt }, Polarization::Parallel) => {
                let c = xi.cbrt();
                (y, kappa_cbrt * xi * c * c)
            }
            (Reflection::Drude { wp, wt }, pol) => {
                let r2 = wp * wp * xi / (xi + wt);
                let s = (r2 + y * y).sqrt();
                match pol {
                    Polarization::Perpendicular => (s, y),
                    Polarization::Parallel => (s, (one + wp * wp / (xi * (xi + wt))) * y),
                }
            }
        }
    }

    /// Real amplitude `r`.
    pub fn amplitude(&self, pol: Polarization, xi: f64, y: f64) -> f64 {
        let (u, v) = self.fresnel(pol, xi, y);
        (u - v) / (u + v)
    }

    /// Momentum scale `y` around which `r` changes fastest, if any.
    pub fn feature_scale(&self, pol: Polarization, xi_abs: f64) -> Option<f64> {
        match (*self, pol) {
            (Reflection::Ideal, _) => None,
            (Reflection::Impedance { kappa_cbrt }, Polarization::Perpendicular) => {
                Some(xi_abs.cbrt() / kappa_cbrt)
            }
            (Reflection::Impedance { kappa_cbrt }, Polarization::Parallel) => {
                Some(kappa_cbrt * xi_abs.powf(5.0 / 3.0))
            }
            (Reflection::Drude { wp, wt }, _) => Some(wp * (xi_abs / (xi_abs + wt)).sqrt()),
        }
    }
}
