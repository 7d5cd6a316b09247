//! Free-energy correction, entropy and forces.
//!
//! `Delta F(a, T) = (kT / 8 pi a^2) [(1 - alpha) zeta(3) - G(A, tau)]`.

use serde::{Deserialize, Serialize};

use crate::asymptotics::{
    entropy_small_a, g_ideal, g_large_a, g_small_a, pressure_large_a, AsymptoticRegime, RegimeBounds,
};
use crate::constants::{K_B, PI, ZETA3};
use crate::error::{Error, Result};
use crate::integrals::{integral_set, IntegralSet, QuadratureConfig};
use crate::materials::{applicability, ApplicabilityReport, MaterialParams, RelaxationModel, DEFAULT_ASE_THRESHOLD};
use crate::reflection::{
    alpha_coefficient, zero_term_free_energy, DimensionlessState, ModelKind, Prescription, PrescriptionKind,
    Reflection,
};

/// When the closed-form expansions may stand in for the quadrature.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum MethodPolicy {
    /// Always integrate.
    #[default]
    Numeric,
    /// Use an expansion inside its trusted range, integrate elsewhere.
    Auto,
}

/// Finite-difference settings for entropy and pressure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FiniteDifference {
    /// Relative temperature step.
    pub t_rel: f64,
    /// Lower bound on the temperature step, K.
    pub t_min_step: f64,
    /// Relative separation step.
    pub a_rel: f64,
    /// Quadrature tolerance for the differenced evaluations; the main
    /// tolerance is used when `None`.
    pub abs_tol: Option<f64>,
}

impl Default for FiniteDifference {
    fn default() -> Self {
        Self {
            t_rel: 1e-3,
            t_min_step: 1e-3,
            a_rel: 1e-4,
            abs_tol: Some(1e-9),
        }
    }
}

impl FiniteDifference {
    /// `min(max(t_rel T, t_min_step), T / 100)`: never more than 1% of `T`.
    pub fn t_step(&self, t: f64) -> f64 {
        (self.t_rel * t).max(self.t_min_step).min(0.01 * t)
    }
}

/// Everything except the geometry.
#[derive(Debug, Clone)]
pub struct CasimirSetup {
    pub material: MaterialParams,
    pub prescription: PrescriptionKind,
    pub model: ModelKind,
    pub relaxation: RelaxationModel,
    pub quad: QuadratureConfig,
    pub method: MethodPolicy,
    pub bounds: RegimeBounds,
    pub ase_threshold: f64,
    pub fd: FiniteDifference,
}

impl CasimirSetup {
    pub fn new(material: MaterialParams) -> Self {
        Self {
            material,
            prescription: PrescriptionKind::new(Prescription::IdealStatic),
            model: ModelKind::Impedance,
            relaxation: RelaxationModel::default(),
            quad: QuadratureConfig::default(),
            method: MethodPolicy::Numeric,
            bounds: RegimeBounds::default(),
            ase_threshold: DEFAULT_ASE_THRESHOLD,
            fd: FiniteDifference::default(),
        }
    }

    pub fn gold() -> Self {
        Self::new(MaterialParams::gold())
    }

    pub fn with_prescription(mut self, p: impl Into<PrescriptionKind>) -> Self {
        self.prescription = p.into();
        self
    }

    pub fn with_model(mut self, model: ModelKind) -> Self {
        self.model = model;
        self
    }

    pub fn with_abs_tol(mut self, abs_tol: f64) -> Self {
        self.quad.abs_tol = abs_tol;
        self
    }

    fn fd_setup(&self) -> CasimirSetup {
        let mut s = self.clone();
        if let Some(tol) = self.fd.abs_tol {
            s.quad.abs_tol = tol.min(self.quad.abs_tol);
        }
        s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeometrySetup {
    pub a: f64,
    #[serde(rename = "T")]
    pub t: f64,
    pub sphere_radius: Option<f64>,
}

impl GeometrySetup {
    pub fn new(a: f64, t: f64) -> Self {
        Self {
            a,
            t,
            sphere_radius: None,
        }
    }
}

/// Entropy of the correction, J/(K m^2).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Entropy {
    /// Central difference `-dF/dT`.
    pub numeric: f64,
    /// Small-A closed form, when `A` is in the trusted small-A range.
    pub analytic: Option<f64>,
    /// Temperature step used.
    pub step: f64,
}

/// Plate-plate pressure correction, N/m^2.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Pressure {
    /// Central difference `-dF/da`.
    pub numeric: f64,
    /// Large-A closed form, when `A` is in the trusted large-A range.
    pub closed_form: Option<f64>,
    pub step: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CorrectionResult {
    pub a: f64,
    #[serde(rename = "T")]
    pub t: f64,
    /// Temperature correction to the free energy per area, J/m^2.
    #[serde(rename = "delta_F")]
    pub delta_f: f64,
    #[serde(rename = "G")]
    pub g: f64,
    /// Zero-frequency Matsubara term, J/m^2.
    #[serde(rename = "F0")]
    pub f0: f64,
    pub alpha: f64,
    #[serde(rename = "A")]
    pub a_param: f64,
    #[serde(rename = "B")]
    pub b_param: f64,
    pub tau: f64,
    pub omega_tau: f64,
    pub method: AsymptoticRegime,
    pub model: ModelKind,
    pub prescription: Prescription,
    #[serde(rename = "S")]
    pub entropy: Option<Entropy>,
    #[serde(rename = "F_pp")]
    pub pressure: Option<Pressure>,
    /// Sphere-plate force, N.
    #[serde(rename = "F_sp")]
    pub sphere_plate: Option<f64>,
    pub abs_tol_achieved: Option<f64>,
    pub applicability: Option<ApplicabilityReport>,
    pub notes: Vec<String>,
}

/// `kT / 8 pi a^2`.
pub fn energy_prefactor(a: f64, t: f64) -> f64 {
    K_B * t / (8.0 * PI * a * a)
}

/// Numeric `G` from the six integrals.
pub fn compute_g(refl: &Reflection, tau: f64, cfg: &QuadratureConfig) -> Result<(f64, IntegralSet)> {
    let set = integral_set(refl, tau, cfg)?;
    Ok((set.g(), set))
}

fn omega_tau_at(setup: &CasimirSetup, t: f64) -> Result<f64> {
    if t > 0.0 {
        setup.relaxation.omega_tau(t, &setup.material)
    } else {
        match setup.relaxation {
            RelaxationModel::Poly => setup.relaxation.omega_tau(0.0, &setup.material),
            RelaxationModel::BlochGruneisen => Ok(0.0),
        }
    }
}

fn choose_method(setup: &CasimirSetup, state: &DimensionlessState) -> AsymptoticRegime {
    if state.t == 0.0 {
        return AsymptoticRegime::Trivial;
    }
    if setup.method == MethodPolicy::Numeric {
        return AsymptoticRegime::Numeric;
    }
    match setup.model {
        ModelKind::Impedance if state.a_param <= setup.bounds.small_a_max => AsymptoticRegime::SmallA,
        ModelKind::Impedance if state.a_param >= setup.bounds.large_a_min => AsymptoticRegime::LargeA,
        ModelKind::Ideal if state.tau <= 0.3 => AsymptoticRegime::Ideal,
        _ => AsymptoticRegime::Numeric,
    }
}

struct GEval {
    g: f64,
    method: AsymptoticRegime,
    state: DimensionlessState,
    omega_tau: f64,
    set: Option<IntegralSet>,
}

fn evaluate_g(setup: &CasimirSetup, a: f64, t: f64) -> Result<GEval> {
    let state = DimensionlessState::new(a, t, &setup.material)?;
    let omega_tau = omega_tau_at(setup, t)?;
    let method = choose_method(setup, &state);
    let (g, set) = match method {
        AsymptoticRegime::Trivial => (0.0, None),
        AsymptoticRegime::SmallA => (g_small_a(state.a_param), None),
        AsymptoticRegime::LargeA => (g_large_a(state.a_param), None),
        AsymptoticRegime::Ideal => (g_ideal(state.tau)?, None),
        AsymptoticRegime::Numeric => {
            let refl = Reflection::for_state(setup.model, &state, &setup.material, omega_tau);
            let (g, set) = compute_g(&refl, state.tau, &setup.quad)?;
            (g, Some(set))
        }
    };
    Ok(GEval {
        g,
        method,
        state,
        omega_tau,
        set,
    })
}

/// `G` at separation `a` and temperature `T`, with the method used.
pub fn g_at(setup: &CasimirSetup, a: f64, t: f64) -> Result<(f64, AsymptoticRegime)> {
    evaluate_g(setup, a, t).map(|e| (e.g, e.method))
}

/// The correction `Delta F` alone, J/m^2.
pub fn delta_f_value(setup: &CasimirSetup, a: f64, t: f64) -> Result<f64> {
    let e = evaluate_g(setup, a, t)?;
    let alpha = alpha_coefficient(&setup.prescription, &setup.material, e.state.omega_a, e.omega_tau)?.value;
    Ok(energy_prefactor(a, t) * ((1.0 - alpha) * ZETA3 - e.g))
}

/// Free-energy correction with `F0`, applicability and, if a sphere radius
/// is given, the sphere-plate force. Entropy and pressure are left empty; see
/// [`full_correction`].
pub fn delta_free_energy(setup: &CasimirSetup, geom: &GeometrySetup) -> Result<CorrectionResult> {
    setup.quad.validate()?;
    let e = evaluate_g(setup, geom.a, geom.t)?;
    let mut notes = Vec::new();
    let alpha = alpha_coefficient(&setup.prescription, &setup.material, e.state.omega_a, e.omega_tau)?;
    if !alpha.i2_term_included {
        notes.push("plasma-like alpha: subleading relaxation term omitted (no I2 hook)".to_string());
    }
    let applicability = if geom.t > 0.0 {
        let rep = applicability(geom.t, geom.a, &setup.material, setup.relaxation, setup.ase_threshold)?;
        for v in rep.violations() {
            log::warn!("a = {:.3e} m, T = {:.4} K: {v}", geom.a, geom.t);
            notes.push(format!("applicability: {v}"));
        }
        Some(rep)
    } else {
        None
    };
    if let Some(set) = &e.set {
        if set.max_w >= 1.0 {
            notes.push(format!("I3: max |r^2 exp(-Y)| = {:.4} (logarithm stayed off its cut)", set.max_w));
        }
    }
    let delta_f = energy_prefactor(geom.a, geom.t) * ((1.0 - alpha.value) * ZETA3 - e.g);
    let sphere_plate = match geom.sphere_radius {
        Some(r) => Some(force_sphere_plate_from(delta_f, r, geom.a)?),
        None => None,
    };
    Ok(CorrectionResult {
        a: geom.a,
        t: geom.t,
        delta_f,
        g: e.g,
        f0: zero_term_free_energy(alpha.value, geom.a, geom.t)?,
        alpha: alpha.value,
        a_param: e.state.a_param,
        b_param: e.state.b_param,
        tau: e.state.tau,
        omega_tau: e.omega_tau,
        method: e.method,
        model: setup.model,
        prescription: setup.prescription.variant,
        entropy: None,
        pressure: None,
        sphere_plate,
        abs_tol_achieved: e.set.map(|s| s.abs_tol_achieved),
        applicability,
        notes,
    })
}

/// [`delta_free_energy`] plus entropy and plate-plate pressure.
pub fn full_correction(setup: &CasimirSetup, geom: &GeometrySetup) -> Result<CorrectionResult> {
    let mut r = delta_free_energy(setup, geom)?;
    if geom.t > 0.0 {
        r.entropy = Some(entropy(setup, geom.a, geom.t)?);
        r.pressure = Some(force_plate_plate(setup, geom.a, geom.t)?);
    }
    Ok(r)
}

/// `S = -d(Delta F)/dT`.
pub fn entropy(setup: &CasimirSetup, a: f64, t: f64) -> Result<Entropy> {
    if !(t > 0.0) {
        return Err(Error::invalid("T", "entropy needs T > 0"));
    }
    let fd = setup.fd_setup();
    let h = setup.fd.t_step(t);
    let (fp, fm) = rayon::join(|| delta_f_value(&fd, a, t + h), || delta_f_value(&fd, a, t - h));
    let numeric = -(fp? - fm?) / (2.0 * h);
    let state = DimensionlessState::new(a, t, &setup.material)?;
    let analytic = if setup.model == ModelKind::Impedance && state.a_param <= setup.bounds.small_a_max {
        let omega_tau = omega_tau_at(setup, t)?;
        let alpha = alpha_coefficient(&setup.prescription, &setup.material, state.omega_a, omega_tau)?.value;
        Some(entropy_small_a(state.a_param, alpha, K_B / (8.0 * PI * a * a)))
    } else {
        None
    };
    Ok(Entropy {
        numeric,
        analytic,
        step: h,
    })
}

/// `-d(Delta F)/da` by central difference, and the large-A closed form when
/// `A` is in the trusted range.
pub fn force_plate_plate(setup: &CasimirSetup, a: f64, t: f64) -> Result<Pressure> {
    if !(a > 0.0) {
        return Err(Error::invalid("a", "must be positive"));
    }
    if t == 0.0 {
        return Ok(Pressure {
            numeric: 0.0,
            closed_form: Some(0.0),
            step: 0.0,
        });
    }
    let fd = setup.fd_setup();
    let h = setup.fd.a_rel * a;
    let (fp, fm) = rayon::join(|| delta_f_value(&fd, a + h, t), || delta_f_value(&fd, a - h, t));
    let numeric = -(fp? - fm?) / (2.0 * h);
    let state = DimensionlessState::new(a, t, &setup.material)?;
    let closed_form = if setup.model == ModelKind::Impedance && state.a_param >= setup.bounds.large_a_min {
        Some(pressure_closed_form(setup, a, t)?)
    } else {
        None
    };
    Ok(Pressure {
        numeric,
        closed_form,
        step: h,
    })
}

/// Large-A pressure formula regardless of the trusted range.
pub fn pressure_closed_form(setup: &CasimirSetup, a: f64, t: f64) -> Result<f64> {
    let state = DimensionlessState::new(a, t, &setup.material)?;
    let omega_tau = omega_tau_at(setup, t)?;
    let alpha = alpha_coefficient(&setup.prescription, &setup.material, state.omega_a, omega_tau)?.value;
    Ok(pressure_large_a(state.a_param, alpha, K_B * t / (4.0 * PI * a * a * a)))
}

/// Proximity-force sphere-plate force `2 pi R Delta F`, N.
pub fn force_sphere_plate(setup: &CasimirSetup, a: f64, t: f64, radius: f64) -> Result<f64> {
    force_sphere_plate_from(delta_f_value(setup, a, t)?, radius, a)
}

fn force_sphere_plate_from(delta_f: f64, radius: f64, a: f64) -> Result<f64> {
    if !(radius > 0.0) {
        return Err(Error::invalid("sphere_radius", "must be positive"));
    }
    if radius < 100.0 * a {
        log::warn!("sphere radius {radius:.3e} m is below 100 a; proximity-force estimate is crude");
    }
    Ok(2.0 * PI * radius * delta_f)
}

/// Separation at which the impedance parameter takes the value `A` at
/// temperature `T` (`A ∝ a` at fixed `T`).
pub fn separation_for_a(a_param: f64, t: f64, m: &MaterialParams) -> Result<f64> {
    if !(a_param > 0.0 && t > 0.0) {
        return Err(Error::invalid("A", "A and T must be positive"));
    }
    let probe = 1e-6;
    let s = DimensionlessState::new(probe, t, m)?;
    Ok(probe * a_param / s.a_param)
}

/// Temperature at which the impedance parameter takes the value `A` at
/// separation `a` (`A ∝ T^{1/3}` at fixed `a`).
pub fn temperature_for_a(a_param: f64, a: f64, m: &MaterialParams) -> Result<f64> {
    if !(a_param > 0.0) {
        return Err(Error::invalid("A", "must be positive"));
    }
    let s = DimensionlessState::new(a, 1.0, m)?;
    Ok((a_param / s.a_param).powi(3))
}
