//! The single-edge kernel.
//!
//! `(1/4π²) ∬ (e^{iθ̃} cos φ₁ cos φ₂ + e^{-iθ̃} sin φ₁ sin φ₂)^{2j} dφ₁ dφ₂`
//! equals `C_j P_j(cos 2θ̃)`. The integrand is a trigonometric polynomial of
//! degree `2j` in each angle, so the uniform trapezoid rule is exact once it
//! has more than `2j` points per period.

use std::f64::consts::{FRAC_PI_4, PI};

use num_complex::Complex64;

use super::AsymptoticError;
use crate::spin::Spin;
use crate::wigner::c_norm_continuous;

/// Smallest `|sin θ|` accepted by the stationary-point formulas.
pub const MIN_SIN_THETA: f64 = 1e-3;

/// The resolution used by [`edge_amplitude_quadrature`]: `4j + 16`.
pub fn default_points(j: Spin) -> usize {
    2 * j.two_j() as usize + 16
}

/// Minimum resolution: `4j + 8`.
pub fn minimum_points(j: Spin) -> usize {
    2 * j.two_j() as usize + 8
}

pub fn edge_amplitude_quadrature(j: Spin, theta_tilde: f64) -> Complex64 {
    quadrature(j, theta_tilde, default_points(j))
}

pub fn edge_amplitude_quadrature_with_points(
    j: Spin,
    theta_tilde: f64,
    points: usize,
) -> Result<Complex64, AsymptoticError> {
    let needed = minimum_points(j);
    if points < needed {
        return Err(AsymptoticError::Resolution { needed, given: points });
    }
    Ok(quadrature(j, theta_tilde, points))
}

fn quadrature(j: Spin, theta_tilde: f64, n: usize) -> Complex64 {
    let phase = Complex64::from_polar(1.0, theta_tilde);
    let (cs, sn): (Vec<f64>, Vec<f64>) =
        (0..n).map(|k| (2.0 * PI * k as f64 / n as f64).sin_cos()).map(|(s, c)| (c, s)).unzip();
    let mut total = Complex64::new(0.0, 0.0);
    for a in 0..n {
        let mut row = Complex64::new(0.0, 0.0);
        for b in 0..n {
            let z = phase * (cs[a] * cs[b]) + phase.conj() * (sn[a] * sn[b]);
            row += z.powu(j.two_j());
        }
        total += row;
    }
    total / (n * n) as f64
}

fn stationary_point(j: Spin, theta: f64, nlo: bool) -> Result<Complex64, AsymptoticError> {
    let s = theta.sin();
    if s.abs() < MIN_SIN_THETA {
        return Err(AsymptoticError::NearDegenerateAngle(s));
    }
    let l = j.length();
    let amplitude = c_norm_continuous(j.value()) / (4.0 * (2.0 * PI * l * s.abs()).sqrt());
    let mut phase = l * theta - FRAC_PI_4 * s.signum();
    if nlo {
        phase -= 1.0 / (theta.tan() * 8.0 * l);
    }
    Ok(Complex64::from_polar(amplitude, phase))
}

/// One stationary point of the edge integral, with its first phase correction.
pub fn edge_asymptotic(j: Spin, theta: f64) -> Result<Complex64, AsymptoticError> {
    stationary_point(j, theta, true)
}

/// [`edge_asymptotic`] without the `-cot θ / (8l)` phase.
pub fn edge_asymptotic_leading(j: Spin, theta: f64) -> Result<Complex64, AsymptoticError> {
    stationary_point(j, theta, false)
}

/// All eight stationary points: four per configuration, and the parity image
/// contributes the complex conjugate. Approximates `C_j P_j(cos θ)`.
pub fn edge_stationary_sum(j: Spin, theta: f64) -> Result<f64, AsymptoticError> {
    Ok(8.0 * edge_asymptotic(j, theta)?.re)
}

pub fn edge_stationary_sum_leading(j: Spin, theta: f64) -> Result<f64, AsymptoticError> {
    Ok(8.0 * edge_asymptotic_leading(j, theta)?.re)
}

/// `2 C_j / sqrt(2 π l sin θ)`, the amplitude envelope of [`edge_stationary_sum`].
pub fn edge_envelope(j: Spin, theta: f64) -> f64 {
    8.0 * c_norm_continuous(j.value()) / (4.0 * (2.0 * PI * j.length() * theta.sin().abs()).sqrt())
}
