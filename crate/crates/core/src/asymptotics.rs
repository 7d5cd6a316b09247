//! Closed-form limits of the relative correction `G(A, tau)` and the search
//! for its maximum over temperature.
//!
//! Small A (`A -> 0`, `tau -> 0`):
//! `G = -A ((1/2 + 4 q1) ln A + ln 2 - 7/8 + 4 q2)`.
//!
//! Large A:
//! `G = 8 zeta(3) ((1 - 2 p1)/A - (15 - 12 p2)/A^2)`.

use serde::{Deserialize, Serialize};

use crate::constants::{C, HBAR, K_B, PI, ZETA3};
use crate::error::{Error, Result};
use crate::integrals::expansion_constants;
use crate::materials::{impedance_form_limit, MaterialParams};
use crate::thermo::{g_at, CasimirSetup};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AsymptoticRegime {
    SmallA,
    LargeA,
    Ideal,
    Numeric,
    /// `T = 0`: the correction vanishes identically.
    Trivial,
}

impl AsymptoticRegime {
    /// A-range in which the expansion is trusted, if the regime is an expansion in `A`.
    pub fn validity_hint(self, bounds: &RegimeBounds) -> Option<(f64, f64)> {
        match self {
            AsymptoticRegime::SmallA => Some((0.0, bounds.small_a_max)),
            AsymptoticRegime::LargeA => Some((bounds.large_a_min, f64::INFINITY)),
            _ => None,
        }
    }
}

impl std::fmt::Display for AsymptoticRegime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            AsymptoticRegime::SmallA => "small-a",
            AsymptoticRegime::LargeA => "large-a",
            AsymptoticRegime::Ideal => "ideal",
            AsymptoticRegime::Numeric => "numeric",
            AsymptoticRegime::Trivial => "trivial",
        })
    }
}

/// Switch-over points between the numeric path and the expansions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegimeBounds {
    pub small_a_max: f64,
    pub large_a_min: f64,
}

impl Default for RegimeBounds {
    /// Large-A boundary where the `1/A^2` term is a tenth of the `1/A` term.
    fn default() -> Self {
        Self {
            small_a_max: 0.02,
            large_a_min: large_a_threshold(0.1),
        }
    }
}

/// `A` at which `|1/A^2 term / 1/A term| = ratio` in the large-A expansion.
pub fn large_a_threshold(ratio: f64) -> f64 {
    let c = expansion_constants();
    (15.0 - 12.0 * c.p2) / ((1.0 - 2.0 * c.p1) * ratio)
}

/// Ratio of the `1/A^2` to the `1/A` term of the large-A expansion.
pub fn large_a_term_ratio(a_param: f64) -> f64 {
    let c = expansion_constants();
    (15.0 - 12.0 * c.p2) / (a_param * (1.0 - 2.0 * c.p1))
}

pub fn g_small_a(a_param: f64) -> f64 {
    if a_param == 0.0 {
        return 0.0;
    }
    let c = expansion_constants();
    -a_param * ((0.5 + 4.0 * c.q1) * a_param.ln() + 2f64.ln() - 7.0 / 8.0 + 4.0 * c.q2)
}

pub fn g_large_a(a_param: f64) -> f64 {
    let c = expansion_constants();
    8.0 * ZETA3 * ((1.0 - 2.0 * c.p1) / a_param - (15.0 - 12.0 * c.p2) / (a_param * a_param))
}

/// `prefactor [(1 - alpha) zeta(3) - G_small(A)]`, with `prefactor = kT / 8 pi a^2`.
pub fn delta_f_small_a(a_param: f64, alpha: f64, prefactor: f64) -> Result<f64> {
    if !(a_param >= 0.0) {
        return Err(Error::invalid("A", "must be non-negative"));
    }
    Ok(prefactor * ((1.0 - alpha) * ZETA3 - g_small_a(a_param)))
}

pub fn delta_f_large_a(a_param: f64, alpha: f64, prefactor: f64) -> Result<f64> {
    if !(a_param > 0.0) {
        return Err(Error::invalid("A", "must be positive"));
    }
    Ok(prefactor * ((1.0 - alpha) * ZETA3 - g_large_a(a_param)))
}

/// Small-A entropy with `prefactor = k / 8 pi a^2`:
/// `(alpha - 1) zeta(3) - (4/3) A ((1/2 + 4 q1) ln A + ln 2 - 3/4 + 4 q2 + q1)`.
pub fn entropy_small_a(a_param: f64, alpha: f64, prefactor: f64) -> f64 {
    let c = expansion_constants();
    let bracket = if a_param > 0.0 {
        (4.0 / 3.0)
            * a_param
            * ((0.5 + 4.0 * c.q1) * a_param.ln() + 2f64.ln() - 0.75 + 4.0 * c.q2 + c.q1)
    } else {
        0.0
    };
    prefactor * ((alpha - 1.0) * ZETA3 - bracket)
}

/// Large-A plate-plate pressure correction with `prefactor = kT / 4 pi a^3`.
pub fn pressure_large_a(a_param: f64, alpha: f64, prefactor: f64) -> f64 {
    let c = expansion_constants();
    prefactor
        * ZETA3
        * ((1.0 - alpha)
            - 8.0 * (1.5 * (1.0 - 2.0 * c.p1) / a_param - 2.0 * (15.0 - 12.0 * c.p2) / (a_param * a_param)))
}

/// Ideal-metal relative correction `zeta(3) x^2 - (pi^3/45) x^3`, `x = tau/2pi`.
pub fn g_ideal(tau: f64) -> Result<f64> {
    if !(tau >= 0.0) {
        return Err(Error::invalid("tau", "must be non-negative"));
    }
    let x = tau / (2.0 * PI);
    Ok(ZETA3 * x * x - PI.powi(3) / 45.0 * x * x * x)
}

/// Rough location of the maximum of `G` over temperature:
/// `k T_m = 18 (hbar omega_a / 2 pi) (v/c) (omega_a/omega_p)^2`.
pub fn tm_estimate(a: f64, m: &MaterialParams) -> f64 {
    let omega_a = C / (2.0 * a);
    let ratio = omega_a / m.omega_p;
    18.0 * HBAR * omega_a / (2.0 * PI) * (m.v() / C) * ratio * ratio / K_B
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MaxCorrection {
    #[serde(rename = "T_m")]
    pub t_m: f64,
    #[serde(rename = "G_max")]
    pub g_max: f64,
    /// Closed-form estimate of `T_m`, for comparison.
    #[serde(rename = "T_m_estimate")]
    pub t_m_estimate: f64,
    /// `A` at the maximum.
    #[serde(rename = "A_m")]
    pub a_m: f64,
}

const GOLDEN: f64 = 0.618_033_988_749_894_8;

/// Maximise the numeric `G(a, T)` over `T` in `[t_lo, t_hi]`.
///
/// Defaults: `t_hi` is the temperature where the strong-ASE impedance stops
/// holding, `t_lo = 1e-6 t_hi`. A coarse log grid locates the peak, which is
/// then refined by golden-section search in `ln T` to relative tolerance
/// `1e-3`.
pub fn find_max_correction(
    a: f64,
    setup: &CasimirSetup,
    t_lo: Option<f64>,
    t_hi: Option<f64>,
) -> Result<MaxCorrection> {
    let hi = t_hi.unwrap_or_else(|| impedance_form_limit(&setup.material));
    let lo = t_lo.unwrap_or(1e-6 * hi);
    if !(lo > 0.0 && hi > lo) {
        return Err(Error::invalid("T range", format!("need 0 < lo < hi, got [{lo}, {hi}]")));
    }
    let g = |ln_t: f64| g_at(setup, a, ln_t.exp()).map(|(g, _)| g);

    let (l0, l1) = (lo.ln(), hi.ln());
    let n = 25;
    let grid: Vec<f64> = (0..n).map(|i| l0 + (l1 - l0) * i as f64 / (n - 1) as f64).collect();
    let values = {
        use rayon::prelude::*;
        grid.par_iter().map(|&x| g(x)).collect::<Result<Vec<f64>>>()?
    };
    let (best, _) = values
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .expect("grid is non-empty");
    if best == 0 || best == n - 1 {
        return Err(Error::NoInteriorMaximum {
            lo,
            hi,
            at: grid[best].exp(),
        });
    }

    let (mut x0, mut x3) = (grid[best - 1], grid[best + 1]);
    let mut x1 = x3 - GOLDEN * (x3 - x0);
    let mut x2 = x0 + GOLDEN * (x3 - x0);
    let (mut f1, mut f2) = (g(x1)?, g(x2)?);
    // relative tolerance in T equals absolute tolerance in ln T
    while x3 - x0 > 1e-3 {
        if f1 > f2 {
            x3 = x2;
            x2 = x1;
            f2 = f1;
            x1 = x3 - GOLDEN * (x3 - x0);
            f1 = g(x1)?;
        } else {
            x0 = x1;
            x1 = x2;
            f1 = f2;
            x2 = x0 + GOLDEN * (x3 - x0);
            f2 = g(x2)?;
        }
    }
    let (x, g_max) = if f1 > f2 { (x1, f1) } else { (x2, f2) };
    let t_m = x.exp();
    let state = crate::reflection::DimensionlessState::new(a, t_m, &setup.material)?;
    Ok(MaxCorrection {
        t_m,
        g_max,
        t_m_estimate: tm_estimate(a, &setup.material),
        a_m: state.a_param,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    #[test]
    fn small_a_examples() {
        let p = 2.5;
        assert_eq!(delta_f_small_a(0.0, 1.0, p).unwrap(), 0.0);
        assert_relative_eq!(delta_f_small_a(0.0, 0.5, p).unwrap(), p * ZETA3 / 2.0);
        // 0.01 * (0.5548 ln 0.01 + 0.6931 - 0.875 + 0.0764)
        assert_abs_diff_eq!(delta_f_small_a(0.01, 1.0, 1.0).unwrap(), -0.02660, epsilon = 2e-5);
        assert!(delta_f_small_a(-1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn large_a_examples() {
        let v = delta_f_large_a(100.0, 1.0, 1.0).unwrap() / ZETA3;
        assert_abs_diff_eq!(v, -0.06613, epsilon = 5e-5);
        assert!(delta_f_large_a(1e12, 1.0, 1.0).unwrap().abs() < 1e-10);
        assert_abs_diff_eq!(large_a_term_ratio(20.0), 0.754, epsilon = 1e-3);
        assert_abs_diff_eq!(large_a_term_ratio(100.0), 0.151, epsilon = 1e-3);
    }

    #[test]
    fn large_a_sign_change() {
        let root = large_a_threshold(1.0);
        assert_abs_diff_eq!(root, 15.09, epsilon = 0.01);
        assert!(delta_f_large_a(root * 1.01, 1.0, 1.0).unwrap() < 0.0);
        assert!(delta_f_large_a(root * 0.99, 1.0, 1.0).unwrap() > 0.0);
        // pressure bracket root at 4 (15 - 12 p2) / (3 (1 - 2 p1))
        let proot = 4.0 / 3.0 * root;
        assert_abs_diff_eq!(proot, 20.12, epsilon = 0.01);
        assert!(pressure_large_a(proot * 1.01, 1.0, 1.0) < 0.0);
    }

    #[test]
    fn ideal_examples() {
        assert_eq!(g_ideal(0.0).unwrap(), 0.0);
        assert_abs_diff_eq!(g_ideal(2.0 * PI).unwrap(), 0.51303, epsilon = 1e-5);
        assert_relative_eq!(g_ideal(0.1).unwrap(), 3.0170e-4, max_relative = 1e-4);
        let mut prev = 0.0;
        for i in 1..=100 {
            let g = g_ideal(i as f64 / 100.0).unwrap();
            assert!(g > prev);
            prev = g;
        }
    }

    #[test]
    fn entropy_is_temperature_derivative_of_small_a_energy() {
        // F = (kT/8 pi a^2)[(1 - alpha) zeta3 - G_small(A)], A ∝ T^{1/3}
        let a0 = 0.003;
        let pref_k = 1.0;
        let f = |s: f64| {
            let a = a0 * s.cbrt();
            s * pref_k * ((1.0 - 0.5) * ZETA3 - g_small_a(a))
        };
        let h = 1e-5;
        let numeric = -(f(1.0 + h) - f(1.0 - h)) / (2.0 * h);
        assert_relative_eq!(entropy_small_a(a0, 0.5, pref_k), numeric, max_relative = 1e-7);
    }

    #[test]
    fn tm_scaling_with_plasma_frequency() {
        let mut m = MaterialParams::gold();
        let t1 = tm_estimate(1e-7, &m);
        m.omega_p *= 1e3;
        assert_relative_eq!(tm_estimate(1e-7, &m), t1 * 1e-6, max_relative = 1e-12);
    }
}
