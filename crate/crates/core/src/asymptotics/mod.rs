//! Large-spin asymptotics of the 6j symbol.
//!
//! The leading term is `cos(Σ l θ + π/4) / sqrt(12 π V)` on the tetrahedron
//! with edge lengths `l = j + 1/2`. [`hessian`] holds the second-order data
//! behind its measure factor, [`edge`] the single-edge kernel that fixes the
//! normalization and the first phase correction.

pub mod edge;
pub mod hessian;

pub use edge::{
    edge_amplitude_quadrature, edge_amplitude_quadrature_with_points, edge_asymptotic, edge_asymptotic_leading,
    edge_stationary_sum, edge_stationary_sum_leading,
};
pub use hessian::{
    build_hessian, equilateral_reference_matrix, hessian_determinant_check, reference_matrix, signature,
    HessianBundle,
};

use std::f64::consts::{FRAC_PI_4, PI};

use thiserror::Error;

use crate::geometry::{build_geometry, EdgeLengths, GeometryError, TetGeometry};
use crate::wigner::SixJLabels;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AsymptoticError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("|sin θ| = {0:e} is too close to zero for the edge expansion")]
    NearDegenerateAngle(f64),
    #[error("quadrature needs at least {needed} points per period, got {given}")]
    Resolution { needed: usize, given: usize },
}

/// The leading-order formula and its pieces.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticBreakdown {
    /// `1 / sqrt(12 π V)`.
    pub envelope: f64,
    /// `Σ l θ`.
    pub regge_phase: f64,
    /// `Σ -cot θ / (8 l)`.
    pub edge_nlo_phase: f64,
    pub leading: f64,
    pub leading_plus_edge_nlo: f64,
    pub volume: f64,
}

impl AsymptoticBreakdown {
    pub fn from_geometry(g: &TetGeometry) -> Self {
        let envelope = 1.0 / (12.0 * PI * g.volume).sqrt();
        let regge_phase = g.regge_action();
        let edge_nlo_phase: f64 = (0..6).map(|e| -1.0 / (g.theta[e].tan() * 8.0 * g.lengths.get(e))).sum();
        AsymptoticBreakdown {
            envelope,
            regge_phase,
            edge_nlo_phase,
            leading: envelope * (regge_phase + FRAC_PI_4).cos(),
            leading_plus_edge_nlo: envelope * (regge_phase + FRAC_PI_4 + edge_nlo_phase).cos(),
            volume: g.volume,
        }
    }
}

pub fn pr_leading_lengths(lengths: &EdgeLengths) -> Result<AsymptoticBreakdown, AsymptoticError> {
    Ok(AsymptoticBreakdown::from_geometry(&build_geometry(lengths)?))
}

/// Leading asymptotics at `l = j + 1/2`.
pub fn pr_leading(labels: &SixJLabels) -> Result<AsymptoticBreakdown, AsymptoticError> {
    let lengths = EdgeLengths::new(labels.lengths())?;
    pr_leading_lengths(&lengths)
}
