//! Physical constants (CODATA 2018, SI) and a few mathematical constants.

/// Reduced Planck constant, J s.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Speed of light in vacuum, m/s.
pub const C: f64 = 299_792_458.0;
/// Boltzmann constant, J/K.
pub const K_B: f64 = 1.380_649e-23;
/// Vacuum permittivity, F/m.
pub const EPSILON_0: f64 = 8.854_187_812_8e-12;
/// Elementary charge, C. Used for eV conversions.
pub const E_CHARGE: f64 = 1.602_176_634e-19;

/// Riemann zeta at 3 (Apery's constant).
pub const ZETA3: f64 = 1.202_056_903_159_594_3;
/// Riemann zeta at 5.
pub const ZETA5: f64 = 1.036_927_755_143_37;

pub use std::f64::consts::PI;
