//! Fixed-grid evaluations of the thermal integrals.
//!
//! The midpoint rule on smoothing substitutions, with the `h^2` and `h^4`
//! error terms removed by Richardson extrapolation. Nothing is shared with the
//! adaptive engine beyond the reflection coefficients, and
//! `ln(1 - r^2 e^{-y})` is evaluated the naive way.

use casimir_core::constants::{PI, ZETA3};
use casimir_core::{Polarization, Reflection};
use num_complex::Complex64;

/// Midpoint sums on `[0, 1]` at n, 2n, 4n nodes, extrapolated twice.
pub fn richardson<F: Fn(f64) -> f64>(f: F, n: usize) -> f64 {
    let mid = |n: usize| {
        let h = 1.0 / n as f64;
        (0..n).map(|i| f((i as f64 + 0.5) * h)).sum::<f64>() * h
    };
    let (m1, m2, m4) = (mid(n), mid(2 * n), mid(4 * n));
    let r1 = (4.0 * m2 - m1) / 3.0;
    let r2 = (4.0 * m4 - m2) / 3.0;
    (16.0 * r2 - r1) / 15.0
}

const Y_SPAN: f64 = 45.0;

/// `∫_xi^{xi + Y_SPAN} y ln(1 - r^2 e^{-y}) dy` with `y = xi + Y_SPAN s^3`.
pub fn g_oracle(refl: &Reflection, pol: Polarization, xi: f64, n: usize) -> f64 {
    richardson(
        |s| {
            let y = xi + Y_SPAN * s * s * s;
            let r = refl.amplitude(pol, xi, y);
            y * (1.0 - r * r * (-y).exp()).ln() * 3.0 * Y_SPAN * s * s
        },
        n,
    )
}

pub fn i1_oracle(refl: &Reflection, pol: Polarization, tau: f64) -> f64 {
    g_oracle(refl, pol, tau, 400)
}

/// `t = s^6` turns `t^{1/3}` and `t^{5/3}` into polynomials in `s`.
pub fn i2_oracle(refl: &Reflection, pol: Polarization, tau: f64) -> f64 {
    richardson(|s| g_oracle(refl, pol, tau * s.powi(6), 100) * 6.0 * s.powi(5), 60)
}

pub fn i3_oracle(refl: &Reflection, pol: Polarization, tau: f64) -> f64 {
    let t_max = 6.0;
    let inner = |t: f64| {
        let xi = Complex64::new(tau, tau * t);
        richardson(
            |s| {
                let y = Complex64::new(tau + Y_SPAN * s * s * s, tau * t);
                let (u, v) = refl.fresnel_complex(pol, xi, y);
                let r = (u - v) / (u + v);
                (y * (1.0 - r * r * (-y).exp()).ln()).im * 3.0 * Y_SPAN * s * s
            },
            100,
        )
    };
    -2.0 * t_max * richardson(|s| {
        let t = t_max * s;
        inner(t) / (2.0 * PI * t).exp_m1()
    }, 60)
}

/// Deterministic pseudo-random points, log-uniform in `A ∈ [0.1, 100]` and
/// `tau ∈ [1e-3, 0.1]`.
pub fn sample_points(count: usize) -> Vec<(f64, f64)> {
    let mut state: u64 = 0x9e37_79b9_7f4a_7c15;
    let mut next = || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        (state >> 11) as f64 / (1u64 << 53) as f64
    };
    (0..count)
        .map(|_| {
            let a = 10f64.powf(-1.0 + 3.0 * next());
            let tau = 10f64.powf(-3.0 + 2.0 * next());
            (a, tau)
        })
        .collect()
}

/// `G = zeta(3) - [sum_{n>=1} g(n tau) - (1/tau) ∫_0^∞ g]`, summed directly.
pub fn g_matsubara(refl: &Reflection, tau: f64) -> f64 {
    let g = |xi: f64| {
        Polarization::BOTH
            .into_iter()
            .map(|p| g_oracle(refl, p, xi, 200))
            .sum::<f64>()
    };
    let mut sum = 0.0;
    let mut n = 1;
    loop {
        let xi = n as f64 * tau;
        let term = g(xi);
        sum += term;
        if term.abs() < 1e-13 || xi > 45.0 {
            break;
        }
        n += 1;
    }
    // xi = 45 s^6 smooths the xi^{1/3} behaviour at the origin
    let integral = richardson(|s| g(45.0 * s.powi(6)) * 270.0 * s.powi(5), 80);
    ZETA3 - (sum - integral / tau)
}

#[cfg(test)]
mod tests {
    use super::*;
    use casimir_core::integrals::{integral_i1, integral_i2, integral_i3, integral_set};
    use casimir_core::QuadratureConfig;

    #[test]
    fn adaptive_integrals_match_fixed_grid_oracle() {
        let cfg = QuadratureConfig::default();
        let bound = 3.0 * cfg.abs_tol;
        for (a, tau) in sample_points(10) {
            let refl = Reflection::impedance_reduced(a, tau);
            for pol in Polarization::BOTH {
                let pairs = [
                    ("I1", integral_i1(&refl, pol, tau, &cfg).unwrap().value, i1_oracle(&refl, pol, tau)),
                    ("I2", integral_i2(&refl, pol, tau, &cfg).unwrap().value, i2_oracle(&refl, pol, tau)),
                    ("I3", integral_i3(&refl, pol, tau, &cfg).unwrap().value, i3_oracle(&refl, pol, tau)),
                ];
                for (name, adaptive, oracle) in pairs {
                    assert!(
                        (adaptive - oracle).abs() <= bound,
                        "{name} {pol:?} at A = {a:.4}, tau = {tau:.4e}: adaptive {adaptive:.9} vs oracle {oracle:.9}"
                    );
                }
            }
        }
    }

    #[test]
    fn abel_plana_assembly_matches_direct_matsubara_sum() {
        let cfg = QuadratureConfig::default();
        let cases = [
            (Reflection::impedance_reduced(1.0, 0.3), 0.3),
            (Reflection::impedance_reduced(10.0, 0.2), 0.2),
            (Reflection::impedance_reduced(0.1, 0.3), 0.3),
            (Reflection::Ideal, 0.1),
            (Reflection::Drude { wp: 30.0, wt: 0.1 }, 0.05),
        ];
        for (refl, tau) in cases {
            let g = integral_set(&refl, tau, &cfg).unwrap().g();
            let direct = g_matsubara(&refl, tau);
            assert!(
                (g - direct).abs() < 1e-5,
                "{refl:?}, tau = {tau}: Abel-Plana {g:.8} vs direct {direct:.8}"
            );
        }
    }

    #[test]
    fn richardson_is_exact_for_low_degree_polynomials() {
        let v = richardson(|s| 5.0 * s.powi(4) - 3.0 * s * s + 1.0, 4);
        assert!((v - 1.0).abs() < 1e-14);
    }
}
