//! Metal parameters, temperature-dependent relaxation frequency and the
//! conditions under which the anomalous skin effect impedance applies.

use serde::{Deserialize, Serialize};

use crate::constants::{C, EPSILON_0, HBAR, K_B, PI, ZETA5};
use crate::error::{Error, Result};
use crate::quad;

/// Everything that defines a metal. All fields are SI.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaterialParams {
    pub name: String,
    /// Plasma frequency, rad/s.
    pub omega_p: f64,
    /// Relaxation frequency at the reference temperature `t0`, rad/s.
    pub omega_tau_ref: f64,
    /// Reference temperature, K.
    #[serde(rename = "T0")]
    pub t0: f64,
    /// Residual relaxation frequency at T = 0, rad/s.
    pub omega_tau_0: f64,
    /// Electron-electron scattering coefficient, rad/s/K^2.
    #[serde(rename = "C_e")]
    pub c_e: f64,
    /// Phonon scattering coefficient, rad/s/K^5.
    #[serde(rename = "C_ph")]
    pub c_ph: f64,
    /// Fermi velocity, m/s.
    #[serde(rename = "v_F")]
    pub v_f: f64,
    /// Fermi-surface factor; the impedance uses `v = beta * v_F`.
    pub beta: f64,
    /// Debye temperature, K.
    #[serde(rename = "T_D")]
    pub t_debye: f64,
    /// Resistivity at `t0`, Ohm m, when the relaxation frequency was derived from it.
    pub rho_ref: Option<f64>,
}

const GOLD_TOML: &str = include_str!("../materials/gold.toml");

impl MaterialParams {
    /// Gold preset shipped with the crate (`materials/gold.toml`).
    pub fn gold() -> Self {
        crate::config::parse_material(GOLD_TOML).expect("bundled gold preset is valid")
    }

    /// Raw text of the bundled gold preset.
    pub fn gold_config_text() -> &'static str {
        GOLD_TOML
    }

    /// Velocity entering the strong-ASE impedance, `beta * v_F`.
    pub fn v(&self) -> f64 {
        self.beta * self.v_f
    }

    /// Field penetration depth `c / omega_p`, m.
    pub fn penetration_depth(&self) -> f64 {
        C / self.omega_p
    }

    /// Characteristic ASE frequency `(v_F / c) omega_p`, rad/s.
    pub fn omega_ase(&self) -> f64 {
        (self.v_f / C) * self.omega_p
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |name: &'static str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::invalid(name, format!("must be positive and finite, got {v}")))
            }
        };
        let non_negative = |name: &'static str, v: f64| {
            if v.is_finite() && v >= 0.0 {
                Ok(())
            } else {
                Err(Error::invalid(name, format!("must be non-negative, got {v}")))
            }
        };
        positive("omega_p", self.omega_p)?;
        positive("v_F", self.v_f)?;
        if self.v_f >= C {
            return Err(Error::invalid("v_F", "must be below the speed of light"));
        }
        positive("T_D", self.t_debye)?;
        positive("beta", self.beta)?;
        positive("T0", self.t0)?;
        non_negative("omega_tau_ref", self.omega_tau_ref)?;
        non_negative("omega_tau_0", self.omega_tau_0)?;
        non_negative("C_e", self.c_e)?;
        non_negative("C_ph", self.c_ph)?;
        if let Some(rho) = self.rho_ref {
            non_negative("rho_ref", rho)?;
            let rebuilt = omega_tau_from_resistivity(rho, self.omega_p)?;
            let scale = rebuilt.abs().max(self.omega_tau_ref.abs());
            if scale > 0.0 && (rebuilt - self.omega_tau_ref).abs() > 0.01 * scale {
                return Err(Error::invalid(
                    "omega_tau_ref",
                    format!(
                        "disagrees with eps0*omega_p^2*rho_ref = {rebuilt:.4e} rad/s by more than 1%"
                    ),
                ));
            }
        }
        Ok(())
    }
}

/// Which temperature law to use for the relaxation frequency.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum RelaxationModel {
    /// `omega_tau(0) + C_e T^2 + C_ph T^5`.
    Poly,
    /// Bloch-Grüneisen law anchored at `(T0, omega_tau_ref)`.
    #[default]
    BlochGruneisen,
}

impl RelaxationModel {
    pub fn omega_tau(self, t: f64, m: &MaterialParams) -> Result<f64> {
        match self {
            RelaxationModel::Poly => omega_tau_poly(t, m),
            RelaxationModel::BlochGruneisen => omega_tau_bloch_gruneisen(t, m),
        }
    }
}

pub fn omega_tau_poly(t: f64, m: &MaterialParams) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(Error::invalid("T", format!("must be non-negative, got {t}")));
    }
    let t2 = t * t;
    Ok(m.omega_tau_0 + m.c_e * t2 + m.c_ph * t2 * t2 * t)
}

/// Transport integral `J5(x) = ∫_0^x u^5 / ((e^u - 1)(1 - e^-u)) du`.
///
/// Saturates at `5! ζ(5)`; beyond `x = 200` the remaining tail is below 1e-70.
pub fn bloch_gruneisen_j5(x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    let upper = x.min(200.0);
    // scale of the result, so the tolerance is relative to it
    let scale = (upper.powi(4) / 4.0).min(120.0 * ZETA5);
    let integrand = |u: f64| {
        if u < 1e-4 {
            // u^5 / (u^2 (1 + u^2/12)) to O(u^7)
            u * u * u * (1.0 - u * u / 12.0)
        } else {
            u.powi(5) / (u.exp_m1() * -(-u).exp_m1())
        }
    };
    let pts = [1.0, 5.0, 20.0, 60.0];
    quad::integrate(integrand, 0.0, upper, &pts, 1e-9 * scale, 10_000)
        .map(|e| e.value)
        .expect("J5 integrand is smooth and bounded")
}

/// Bloch-Grüneisen relaxation frequency
/// `omega_tau(T0) (T/T0)^5 J5(T_D/T) / J5(T_D/T0)`.
pub fn omega_tau_bloch_gruneisen(t: f64, m: &MaterialParams) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::invalid("T", format!("must be positive, got {t}")));
    }
    if !(m.t0 > 0.0) {
        return Err(Error::invalid("T0", "must be positive"));
    }
    if !(m.t_debye > 0.0) {
        return Err(Error::invalid("T_D", "must be positive"));
    }
    if t == m.t0 {
        return Ok(m.omega_tau_ref);
    }
    let ratio = (t / m.t0).powi(5) * bloch_gruneisen_j5(m.t_debye / t)
        / bloch_gruneisen_j5(m.t_debye / m.t0);
    Ok(m.omega_tau_ref * ratio)
}

/// `omega_tau = eps0 omega_p^2 rho`, SI units throughout.
pub fn omega_tau_from_resistivity(rho: f64, omega_p: f64) -> Result<f64> {
    if !(rho >= 0.0) {
        return Err(Error::invalid("rho", format!("must be non-negative, got {rho}")));
    }
    Ok(EPSILON_0 * omega_p * omega_p * rho)
}

/// Default `l / delta` ratio above which the skin effect counts as anomalous.
pub const DEFAULT_ASE_THRESHOLD: f64 = 5.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ApplicabilityReport {
    /// Temperature the report was made for, K.
    #[serde(rename = "T")]
    pub t: f64,
    pub omega_tau: f64,
    /// Mean free path over penetration depth.
    pub l_over_delta: f64,
    pub ase_threshold: f64,
    pub ase_valid: bool,
    /// `2 pi k T < hbar Omega`: the strong-ASE impedance holds for the thermal integrals.
    pub impedance_form_valid: bool,
    pub below_debye: bool,
    /// `(v_F / c) omega_p`, rad/s.
    #[serde(rename = "Omega")]
    pub omega_big: f64,
    /// Largest dimensionless Matsubara frequency `Omega / omega_a` where the
    /// strong-ASE impedance holds at separation `a`.
    pub xi_limit: f64,
}

impl ApplicabilityReport {
    pub fn all_valid(&self) -> bool {
        self.ase_valid && self.impedance_form_valid && self.below_debye
    }

    /// Short human-readable list of the failed conditions.
    pub fn violations(&self) -> Vec<&'static str> {
        let mut v = Vec::new();
        if !self.ase_valid {
            v.push("l/delta below ASE threshold");
        }
        if !self.impedance_form_valid {
            v.push("2 pi k T >= hbar Omega");
        }
        if !self.below_debye {
            v.push("T >= T_D");
        }
        v
    }
}

pub fn applicability(
    t: f64,
    a: f64,
    m: &MaterialParams,
    relaxation: RelaxationModel,
    ase_threshold: f64,
) -> Result<ApplicabilityReport> {
    if !(t > 0.0) {
        return Err(Error::invalid("T", format!("must be positive, got {t}")));
    }
    if !(a > 0.0) {
        return Err(Error::invalid("a", format!("must be positive, got {a}")));
    }
    let omega_tau = relaxation.omega_tau(t, m)?;
    let omega_big = m.omega_ase();
    let l_over_delta = if omega_tau > 0.0 {
        (m.v_f / omega_tau) / m.penetration_depth()
    } else {
        f64::INFINITY
    };
    let omega_a = C / (2.0 * a);
    Ok(ApplicabilityReport {
        t,
        omega_tau,
        l_over_delta,
        ase_threshold,
        ase_valid: l_over_delta > ase_threshold,
        impedance_form_valid: 2.0 * PI * K_B * t < HBAR * omega_big,
        below_debye: t < m.t_debye,
        omega_big,
        xi_limit: omega_big / omega_a,
    })
}

/// Temperature at which `2 pi k T = hbar Omega`.
pub fn impedance_form_limit(m: &MaterialParams) -> f64 {
    HBAR * m.omega_ase() / (2.0 * PI * K_B)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn bare() -> MaterialParams {
        MaterialParams {
            name: "test".into(),
            omega_p: 1.0e16,
            omega_tau_ref: 1.0e13,
            t0: 273.15,
            omega_tau_0: 0.0,
            c_e: 0.0,
            c_ph: 1.0,
            v_f: 1.0e6,
            beta: 1.0,
            t_debye: 165.0,
            rho_ref: None,
        }
    }

    #[test]
    fn poly_examples() {
        let mut m = bare();
        m.omega_tau_0 = 7.0;
        m.c_e = 3.0;
        assert_eq!(omega_tau_poly(0.0, &m).unwrap(), 7.0);

        m.omega_tau_0 = 0.0;
        m.c_e = 0.0;
        m.c_ph = 1.0;
        assert_eq!(omega_tau_poly(2.0, &m).unwrap(), 32.0);

        m.omega_tau_0 = 1.0;
        m.c_e = 1.0;
        assert_eq!(omega_tau_poly(1.0, &m).unwrap(), 3.0);

        assert!(omega_tau_poly(-1.0, &m).is_err());
    }

    #[test]
    fn j5_limits() {
        // small x: x^4 / 4
        assert_relative_eq!(bloch_gruneisen_j5(1e-2), 1e-8 / 4.0, max_relative = 1e-4);
        // saturation at 5! zeta(5)
        assert_relative_eq!(bloch_gruneisen_j5(500.0), 120.0 * ZETA5, max_relative = 1e-9);
    }

    #[test]
    fn bloch_gruneisen_reference_point_is_exact() {
        let m = MaterialParams::gold();
        assert_eq!(omega_tau_bloch_gruneisen(m.t0, &m).unwrap(), m.omega_tau_ref);
        assert!(omega_tau_bloch_gruneisen(0.0, &m).is_err());
    }

    #[test]
    fn bloch_gruneisen_low_temperature_t5() {
        let m = MaterialParams::gold();
        let t = m.t_debye / 50.0;
        let r = omega_tau_bloch_gruneisen(t, &m).unwrap()
            / omega_tau_bloch_gruneisen(t / 2.0, &m).unwrap();
        assert!((r / 32.0 - 1.0).abs() < 0.01, "ratio {r}");
    }

    #[test]
    fn bloch_gruneisen_high_temperature_linear() {
        let m = MaterialParams::gold();
        for t in [2.0 * m.t_debye, 3.0 * m.t_debye, 5.0 * m.t_debye] {
            let r = omega_tau_bloch_gruneisen(2.0 * t, &m).unwrap()
                / omega_tau_bloch_gruneisen(t, &m).unwrap();
            assert!((r / 2.0 - 1.0).abs() < 0.02, "T = {t}: ratio {r}");
        }
    }

    #[test]
    fn resistivity_conversion() {
        assert_eq!(omega_tau_from_resistivity(0.0, 1.37e16).unwrap(), 0.0);
        let w = omega_tau_from_resistivity(2.06e-8, 1.37e16).unwrap();
        // 8.8541878128e-12 * (1.37e16)^2 * 2.06e-8
        assert_relative_eq!(w, 3.423_395_571_8e13, max_relative = 1e-9);
        assert_relative_eq!(
            omega_tau_from_resistivity(4.12e-8, 1.37e16).unwrap(),
            2.0 * w,
            max_relative = 1e-15
        );
        assert!(omega_tau_from_resistivity(-1.0, 1.0).is_err());
    }

    #[test]
    fn omega_is_exact_product() {
        let m = MaterialParams::gold();
        let rep = applicability(10.0, 3e-7, &m, RelaxationModel::Poly, 5.0).unwrap();
        assert_eq!(rep.omega_big, (m.v_f / C) * m.omega_p);
    }

    #[test]
    fn vanishing_relaxation_is_always_ase() {
        let mut m = bare();
        m.c_ph = 0.0;
        let rep = applicability(4.0, 1e-7, &m, RelaxationModel::Poly, 5.0).unwrap();
        assert!(rep.l_over_delta.is_infinite());
        assert!(rep.ase_valid);
    }

    #[test]
    fn validation_rejects_bad_fields() {
        let mut m = bare();
        m.v_f = 4e8;
        assert!(matches!(m.validate(), Err(Error::InvalidParameter { name: "v_F", .. })));
        let mut m = bare();
        m.omega_p = 0.0;
        assert!(matches!(m.validate(), Err(Error::InvalidParameter { name: "omega_p", .. })));
        let mut m = bare();
        m.rho_ref = Some(1e-8);
        assert!(matches!(
            m.validate(),
            Err(Error::InvalidParameter { name: "omega_tau_ref", .. })
        ));
    }
}
