//! Thermal integrals `I1`, `I2`, `I3`, the zero-temperature energy and the
//! `q`/`p` constants of the asymptotic expansions.
//!
//! With `g(xi) = sum_j ∫_xi^∞ y ln(1 - r_j^2(xi, y) e^{-y}) dy` the
//! Abel-Plana form of the Matsubara sum reads
//!
//! ```text
//! sum_{n>=1} g(n tau) - (1/tau) ∫_0^∞ g = I1/2 - I2 + I3
//! I1 = g(tau)
//! I2 = ∫_0^1 g(tau t) dt
//! I3 = -2 ∫_0^∞ Im g(tau (1 + i t)) / (e^{2 pi t} - 1) dt
//! ```
//!
//! where in `I3` the momentum variable is shifted along with the frequency,
//! `y -> y + i tau t`, so that the inner lower limit stays at `tau`.

use std::sync::OnceLock;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::constants::{C, HBAR, PI, ZETA3};
use crate::error::{Error, Result};
use crate::quad::{exp_tail_cutoff, integrate, Estimate};
pub use crate::reflection::Polarization;
use crate::reflection::{ModelKind, Reflection};

/// `|arg(1 - r^2 e^{-Y})|` above this fraction of `pi` is treated as too close
/// to the branch cut of the logarithm.
pub const DEFAULT_BRANCH_MARGIN: f64 = 0.9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub abs_tol: f64,
    pub max_subdivisions: usize,
    /// Upper limit of the `I3` t-integral; derived from `abs_tol` when `None`.
    pub t_cutoff: Option<f64>,
    /// Fraction of `pi` that `|arg(1 - r^2 e^{-Y})|` may reach in `I3`.
    pub branch_margin: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            abs_tol: 1e-6,
            max_subdivisions: 2000,
            t_cutoff: None,
            branch_margin: DEFAULT_BRANCH_MARGIN,
        }
    }
}

impl QuadratureConfig {
    pub fn with_abs_tol(abs_tol: f64) -> Self {
        Self {
            abs_tol,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0 && self.abs_tol.is_finite()) {
            return Err(Error::invalid("abs_tol", format!("must be positive, got {}", self.abs_tol)));
        }
        if self.max_subdivisions == 0 {
            return Err(Error::invalid("max_subdivisions", "must be at least 1"));
        }
        if let Some(t) = self.t_cutoff {
            if !(t > 0.0) {
                return Err(Error::invalid("t_cutoff", "must be positive"));
            }
        }
        if !(self.branch_margin > 0.0 && self.branch_margin < 1.0) {
            return Err(Error::invalid("branch_margin", "must lie in (0, 1)"));
        }
        Ok(())
    }

    /// Upper limit of the weighted t-integral: the tail of
    /// `2 C (1 + tau t) / (e^{2 pi t} - 1)` with `C = 4` stays below `abs_tol/10`.
    pub fn t_upper(&self, tau: f64) -> f64 {
        if let Some(t) = self.t_cutoff {
            return t;
        }
        let target = self.abs_tol / 10.0;
        let mut t: f64 = 1.0;
        for _ in 0..100 {
            // ∫_t^∞ 8 (1 + tau s) e^{-2 pi s} ds * (1 + small) for t >= 1
            let tail = 8.0 * (1.0 + tau * t + tau / (2.0 * PI)) * (-2.0 * PI * t).exp() / (2.0 * PI) * 1.01;
            if tail <= target {
                break;
            }
            t += 0.25;
        }
        t
    }
}

/// The six integrals for one `(model, tau)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegralSet {
    /// Indexed by [`Polarization::index`].
    pub i1: [f64; 2],
    pub i2: [f64; 2],
    pub i3: [f64; 2],
    /// Sum of the error budgets of all six integrals.
    pub abs_tol_achieved: f64,
    pub model: ModelKind,
    /// Largest `|r^2 e^{-Y}|` met while evaluating `I3`.
    pub max_w: f64,
}

impl IntegralSet {
    /// `zeta(3) - (I1/2 - I2 + I3)` summed over both polarizations.
    pub fn g(&self) -> f64 {
        let s1 = self.i1[0] + self.i1[1];
        let s2 = self.i2[0] + self.i2[1];
        let s3 = self.i3[0] + self.i3[1];
        -0.5 * (s1 + 2.0 * ZETA3) + (s2 + 2.0 * ZETA3) - s3
    }
}

/// Value plus its error budget.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Value {
    pub value: f64,
    pub abs_err: f64,
}

/// `ln(1 - r^2 e^{-y})` with `r = (u - v)/(u + v)`, accurate when `r -> 1`
/// and when `y -> 0`.
fn log_factor(u: f64, v: f64, y: f64) -> f64 {
    let s = u + v;
    let one_minus_r2 = if s == 0.0 { 1.0 } else { 4.0 * u * v / (s * s) };
    let r2 = 1.0 - one_minus_r2;
    let e = (-y).exp();
    if r2 * e < 0.5 {
        (-r2 * e).ln_1p()
    } else {
        (-(-y).exp_m1() + one_minus_r2 * e).ln()
    }
}

/// `(1 - r^2 e^{-Y}, |r^2 e^{-Y}|)` for `Y = y + i s`.
fn complex_factor(u: Complex64, v: Complex64, y: f64, s: f64) -> (Complex64, f64) {
    let sum = u + v;
    let one_minus_r2 = 4.0 * u * v / (sum * sum);
    let r2 = Complex64::new(1.0, 0.0) - one_minus_r2;
    let e = (-y).exp();
    let half = (0.5 * s).sin();
    // e^{-Y} - 1
    let em1 = Complex64::new((-y).exp_m1() * s.cos() - 2.0 * half * half, -e * s.sin());
    let e_y = Complex64::from_polar(e, -s);
    (-em1 + one_minus_r2 * e_y, r2.norm() * e)
}

fn y_breakpoints(lo: f64, hi: f64, scale: Option<f64>) -> Vec<f64> {
    let mut pts = vec![lo + 1.0, lo + 5.0, lo + 20.0];
    if let Some(s) = scale {
        for k in [0.1, 1.0, 10.0] {
            pts.push(k * s);
        }
    }
    pts.retain(|&p| p > lo && p < hi);
    pts
}

/// Upper y-limit: `|y ln(1 - x)| <= 2 y e^{-y}` once `|x| <= 1/2`.
fn y_upper(lo: f64, target: f64) -> f64 {
    exp_tail_cutoff(2.0, 0.0, target, lo + 2.0)
}

/// `g_j(xi) = ∫_xi^∞ y ln(1 - r_j^2(xi, y) e^{-y}) dy` on a real frequency.
pub fn inner_real(
    refl: &Reflection,
    pol: Polarization,
    xi: f64,
    tol: f64,
    cfg: &QuadratureConfig,
) -> Result<Value> {
    let lo = xi;
    let hi = y_upper(lo, tol / 10.0);
    let pts = y_breakpoints(lo, hi, refl.feature_scale(pol, xi));
    let f = |y: f64| {
        let (u, v) = refl.fresnel(pol, xi, y);
        y * log_factor(u, v, y)
    };
    let est = integrate(f, lo, hi, &pts, tol * 0.9, cfg.max_subdivisions)?;
    Ok(Value {
        value: est.value,
        abs_err: est.abs_err + tol / 10.0,
    })
}

struct ComplexInner {
    im: f64,
    max_w: f64,
}

/// Imaginary part of `g_j(tau (1 + i t))` with the shifted momentum.
fn inner_complex_im(
    refl: &Reflection,
    pol: Polarization,
    tau: f64,
    t: f64,
    tol: f64,
    cfg: &QuadratureConfig,
) -> Result<ComplexInner> {
    let xi = Complex64::new(tau, tau * t);
    let s = tau * t;
    let lo = tau;
    // |w| can slightly exceed one for small impedances; the bound keeps a margin
    let hi = exp_tail_cutoff(4.0, s, tol / 10.0, lo + 2.0);
    let pts = y_breakpoints(lo, hi, refl.feature_scale(pol, xi.norm()));
    let mut max_w: f64 = 0.0;
    let mut violation: Option<Error> = None;
    let limit = cfg.branch_margin * PI;
    let f = |y: f64| {
        let big_y = Complex64::new(y, s);
        let (u, v) = refl.fresnel_complex(pol, xi, big_y);
        let (factor, w) = complex_factor(u, v, y, s);
        max_w = max_w.max(w);
        let arg = factor.arg();
        if factor.norm() == 0.0 || arg.abs() > limit {
            if violation.is_none() {
                violation = Some(Error::BranchViolation {
                    t,
                    y,
                    re: factor.re,
                    im: factor.im,
                });
            }
            return 0.0;
        }
        (big_y * factor.ln()).im
    };
    let est = integrate(f, lo, hi, &pts, tol * 0.9, cfg.max_subdivisions)?;
    if let Some(e) = violation {
        return Err(e);
    }
    Ok(ComplexInner {
        im: est.value,
        max_w,
    })
}

fn check_tau(tau: f64) -> Result<()> {
    if !(tau > 0.0 && tau.is_finite()) {
        return Err(Error::invalid("tau", format!("must be positive, got {tau}")));
    }
    Ok(())
}

pub fn integral_i1(refl: &Reflection, pol: Polarization, tau: f64, cfg: &QuadratureConfig) -> Result<Value> {
    cfg.validate()?;
    check_tau(tau)?;
    inner_real(refl, pol, tau, cfg.abs_tol, cfg)
}

pub fn integral_i2(refl: &Reflection, pol: Polarization, tau: f64, cfg: &QuadratureConfig) -> Result<Value> {
    cfg.validate()?;
    check_tau(tau)?;
    let inner_tol = cfg.abs_tol / 10.0;
    let mut failure: Option<Error> = None;
    let f = |t: f64| match inner_real(refl, pol, tau * t, inner_tol, cfg) {
        Ok(v) => v.value,
        Err(e) => {
            failure.get_or_insert(e);
            0.0
        }
    };
    // the reflection coefficient of the impedance model turns over near A t^{1/3} ~ 1
    let mut pts = vec![1e-3, 0.1];
    if let Some(s) = refl.feature_scale(pol, tau) {
        if s > 0.0 {
            pts.push((1.0 / s).powi(3));
        }
    }
    let est = integrate(f, 0.0, 1.0, &pts, cfg.abs_tol * 0.8, cfg.max_subdivisions);
    if let Some(e) = failure {
        return Err(e);
    }
    let est = est?;
    Ok(Value {
        value: est.value,
        abs_err: est.abs_err + inner_tol,
    })
}

/// `I3` together with the largest `|r^2 e^{-Y}|` encountered.
pub fn integral_i3_with_diagnostics(
    refl: &Reflection,
    pol: Polarization,
    tau: f64,
    cfg: &QuadratureConfig,
) -> Result<(Value, f64)> {
    cfg.validate()?;
    check_tau(tau)?;
    let t_hi = cfg.t_upper(tau);
    let mut failure: Option<Error> = None;
    let mut max_w: f64 = 0.0;
    let base = cfg.abs_tol / 10.0;
    let f = |t: f64| {
        // the weight 2/(e^{2 pi t} - 1) amplifies inner errors near t = 0
        let weight = 2.0 / (2.0 * PI * t).exp_m1();
        let tol = (base * -(-2.0 * PI * t).exp_m1()).max(1e-15);
        match inner_complex_im(refl, pol, tau, t, tol, cfg) {
            Ok(c) => {
                max_w = max_w.max(c.max_w);
                -weight * c.im
            }
            Err(e) => {
                failure.get_or_insert(e);
                0.0
            }
        }
    };
    let est = integrate(f, 0.0, t_hi, &[0.05, 0.3, 1.0], cfg.abs_tol * 0.7, cfg.max_subdivisions);
    if let Some(e) = failure {
        return Err(e);
    }
    let est = est?;
    if max_w >= 1.0 {
        log::debug!("I3: |r^2 e^-Y| reached {max_w:.4} (tau = {tau:.3e}); logarithm stayed off its cut");
    }
    Ok((
        Value {
            value: est.value,
            abs_err: est.abs_err + 2.0 * base + base,
        },
        max_w,
    ))
}

pub fn integral_i3(refl: &Reflection, pol: Polarization, tau: f64, cfg: &QuadratureConfig) -> Result<Value> {
    integral_i3_with_diagnostics(refl, pol, tau, cfg).map(|(v, _)| v)
}

/// All six integrals, evaluated concurrently.
pub fn integral_set(refl: &Reflection, tau: f64, cfg: &QuadratureConfig) -> Result<IntegralSet> {
    cfg.validate()?;
    check_tau(tau)?;
    let jobs: Vec<(usize, Polarization)> = (0..3)
        .flat_map(|k| Polarization::BOTH.into_iter().map(move |p| (k, p)))
        .collect();
    let results: Vec<Result<(Value, f64)>> = jobs
        .par_iter()
        .map(|&(k, pol)| match k {
            0 => integral_i1(refl, pol, tau, cfg).map(|v| (v, 0.0)),
            1 => integral_i2(refl, pol, tau, cfg).map(|v| (v, 0.0)),
            _ => integral_i3_with_diagnostics(refl, pol, tau, cfg),
        })
        .collect();

    let mut set = IntegralSet {
        i1: [0.0; 2],
        i2: [0.0; 2],
        i3: [0.0; 2],
        abs_tol_achieved: 0.0,
        model: refl.kind(),
        max_w: 0.0,
    };
    for (&(k, pol), r) in jobs.iter().zip(results) {
        let (v, w) = r?;
        let slot = match k {
            0 => &mut set.i1,
            1 => &mut set.i2,
            _ => &mut set.i3,
        };
        slot[pol.index()] = v.value;
        set.abs_tol_achieved += v.abs_err;
        set.max_w = set.max_w.max(w);
    }
    Ok(set)
}

/// `∫_0^∞ dxi g(xi)`, the dimensionless zero-temperature energy.
pub fn zero_temperature_integral(refl: &Reflection, cfg: &QuadratureConfig) -> Result<Value> {
    cfg.validate()?;
    let inner_tol = cfg.abs_tol / 10.0;
    // |g(xi)| <= 4 (xi + 1) e^{-xi}
    let hi = exp_tail_cutoff(4.0, 1.0, cfg.abs_tol / 10.0, 5.0);
    let mut failure: Option<Error> = None;
    let f = |xi: f64| {
        let mut total = 0.0;
        for pol in Polarization::BOTH {
            match inner_real(refl, pol, xi, inner_tol, cfg) {
                Ok(v) => total += v.value,
                Err(e) => {
                    failure.get_or_insert(e);
                }
            }
        }
        total
    };
    let est: Result<Estimate> = integrate(f, 0.0, hi, &[0.1, 1.0, 5.0], cfg.abs_tol * 0.7, cfg.max_subdivisions);
    if let Some(e) = failure {
        return Err(e);
    }
    let est = est?;
    Ok(Value {
        value: est.value,
        abs_err: est.abs_err + 2.0 * inner_tol * hi + cfg.abs_tol / 10.0,
    })
}

/// Prefactor turning [`zero_temperature_integral`] into J/m^2.
pub fn free_energy_t0_prefactor(a: f64) -> f64 {
    HBAR * C / (32.0 * PI * PI * a * a * a)
}

/// Temperature-independent energy per area `F(a, 0)`, J/m^2.
///
/// Normalised so that `r1 = r2 = 1` gives `-pi^2 hbar c / (720 a^3)`.
pub fn free_energy_t0(a: f64, refl: &Reflection, cfg: &QuadratureConfig) -> Result<f64> {
    if !(a > 0.0) {
        return Err(Error::invalid("a", "must be positive"));
    }
    Ok(free_energy_t0_prefactor(a) * zero_temperature_integral(refl, cfg)?.value)
}

/// `-pi^2 hbar c / (720 a^3)`.
pub fn ideal_casimir_energy(a: f64) -> f64 {
    -PI * PI * HBAR * C / (720.0 * a * a * a)
}

fn theta(t: f64) -> f64 {
    t.atan() / 3.0
}

fn thermal_weight(t: f64) -> f64 {
    1.0 / (2.0 * PI * t).exp_m1()
}

pub fn q1_integrand(t: f64) -> f64 {
    (1.0 + t * t).powf(1.0 / 6.0) * theta(t).sin() * thermal_weight(t)
}

pub fn q2_integrand(t: f64) -> f64 {
    let m = (1.0 + t * t).powf(1.0 / 6.0);
    let th = theta(t);
    m * thermal_weight(t) * (th.sin() * ((4.0 * m).ln() - 1.0) + th * th.cos())
}

pub fn p1_integrand(t: f64) -> f64 {
    theta(t).sin() * thermal_weight(t) / (1.0 + t * t).powf(1.0 / 6.0)
}

pub fn p2_integrand(t: f64) -> f64 {
    (2.0 * theta(t)).sin() * thermal_weight(t) / (1.0 + t * t).powf(1.0 / 3.0)
}

fn weighted_constant(f: fn(f64) -> f64, cfg: &QuadratureConfig) -> Result<f64> {
    // integrands are below (2 + t) e^{-2 pi t}; t = 8 leaves < 1e-20
    Ok(integrate(f, 0.0, 8.0, &[1.0], cfg.abs_tol.min(1e-10), cfg.max_subdivisions)?.value)
}

pub fn constants_q(cfg: &QuadratureConfig) -> Result<(f64, f64)> {
    Ok((weighted_constant(q1_integrand, cfg)?, weighted_constant(q2_integrand, cfg)?))
}

pub fn constants_p(cfg: &QuadratureConfig) -> Result<(f64, f64)> {
    Ok((weighted_constant(p1_integrand, cfg)?, weighted_constant(p2_integrand, cfg)?))
}

/// The four expansion constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExpansionConstants {
    pub q1: f64,
    pub q2: f64,
    pub p1: f64,
    pub p2: f64,
}

/// Constants computed once per process at tight tolerance.
pub fn expansion_constants() -> ExpansionConstants {
    static CACHE: OnceLock<ExpansionConstants> = OnceLock::new();
    *CACHE.get_or_init(|| {
        let cfg = QuadratureConfig::with_abs_tol(1e-12);
        let (q1, q2) = constants_q(&cfg).expect("q constants: smooth integrands on a finite interval");
        let (p1, p2) = constants_p(&cfg).expect("p constants: smooth integrands on a finite interval");
        ExpansionConstants { q1, q2, p1, p2 }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    #[test]
    fn log_factor_matches_naive_form() {
        for &(u, v, y) in &[(1.0f64, 0.3f64, 0.7f64), (0.2, 5.0, 2.0), (1.0, 0.0, 1e-3), (3.0, 1e-9, 40.0)] {
            let r = (u - v) / (u + v);
            let naive = (1.0 - r * r * (-y).exp()).ln();
            assert_abs_diff_eq!(log_factor(u, v, y), naive, epsilon = 1e-12);
        }
    }

    #[test]
    fn complex_factor_matches_naive_form() {
        let u = Complex64::new(0.4, 0.2);
        let v = Complex64::new(1.3, -0.1);
        let (y, s) = (0.8, 0.35);
        let r = (u - v) / (u + v);
        let naive = 1.0 - r * r * (-Complex64::new(y, s)).exp();
        let (f, w) = complex_factor(u, v, y, s);
        assert!((f - naive).norm() < 1e-14);
        assert_abs_diff_eq!(w, (r * r).norm() * (-y).exp(), epsilon = 1e-14);
    }

    #[test]
    fn vanishing_reflection_gives_zero() {
        // Drude with zero plasma frequency reflects nothing
        let refl = Reflection::Drude { wp: 0.0, wt: 0.0 };
        let set = integral_set(&refl, 0.1, &cfg()).unwrap();
        for k in 0..2 {
            assert_eq!(set.i1[k], 0.0);
            assert_eq!(set.i2[k], 0.0);
            assert!(set.i3[k].abs() < 1e-15);
        }
        assert_abs_diff_eq!(set.g(), ZETA3, epsilon = 1e-14);
    }

    #[test]
    fn ideal_metal_leading_terms() {
        let tau: f64 = 1e-3;
        let bound = (tau * tau * tau.ln()).abs() + 1e-6;
        let set = integral_set(&Reflection::Ideal, tau, &cfg()).unwrap();
        for k in 0..2 {
            assert!((set.i1[k] + ZETA3).abs() < bound, "I1 = {}", set.i1[k]);
            assert!((set.i2[k] + ZETA3).abs() < bound, "I2 = {}", set.i2[k]);
            assert!(set.i3[k].abs() < 10.0 * tau * tau + 1e-6);
        }
    }

    #[test]
    fn ideal_i3_is_second_order_in_tau() {
        for tau in [0.02, 0.1] {
            let v = integral_i3(&Reflection::Ideal, Polarization::Perpendicular, tau, &cfg()).unwrap();
            assert!(v.value.abs() < 10.0 * tau * tau, "tau {tau}: {}", v.value);
        }
    }

    #[test]
    fn constants_match_printed_values() {
        let c = expansion_constants();
        assert_abs_diff_eq!(c.q1, 0.0137, epsilon = 5e-4);
        assert_abs_diff_eq!(c.q2, 0.0191, epsilon = 5e-4);
        assert_abs_diff_eq!(c.p1, 0.0133, epsilon = 5e-4);
        assert_abs_diff_eq!(c.p2, 0.0262, epsilon = 5e-4);
    }

    #[test]
    fn constant_integrands_at_origin() {
        let lim = 1.0 / (6.0 * PI);
        assert_abs_diff_eq!(q1_integrand(1e-7), lim, epsilon = 1e-6);
        assert_abs_diff_eq!(p1_integrand(1e-7), lim, epsilon = 1e-6);
    }

    #[test]
    fn zero_temperature_ideal_normalisation() {
        let v = zero_temperature_integral(&Reflection::Ideal, &cfg()).unwrap();
        assert_abs_diff_eq!(v.value, -2.0 * PI.powi(4) / 45.0, epsilon = 1e-5);
        let f = free_energy_t0(1e-6, &Reflection::Ideal, &cfg()).unwrap();
        assert!((f / ideal_casimir_energy(1e-6) - 1.0).abs() < 1e-5);
        assert_abs_diff_eq!(ideal_casimir_energy(1e-6), -4.3338e-10, epsilon = 1e-13);
    }

    #[test]
    fn config_validation() {
        assert!(QuadratureConfig::with_abs_tol(0.0).validate().is_err());
        assert!(QuadratureConfig { branch_margin: 1.0, ..cfg() }.validate().is_err());
        assert!(integral_i1(&Reflection::Ideal, Polarization::Parallel, 0.0, &cfg()).is_err());
    }

    #[test]
    fn t_cutoff_leaves_small_tail() {
        let c = cfg();
        let t = c.t_upper(0.1);
        assert!(8.0 * (1.0 + 0.1 * t) * (-2.0 * PI * t).exp() / (2.0 * PI) < c.abs_tol / 10.0);
    }
}
