//! Spherical tetrahedra on the unit 3-sphere.
//!
//! With vertex Gram matrix `G_uv = cos l_uv`, the normalized cofactors of `G`
//! are the cosines of the exterior dihedral angles. The Jacobian of those
//! angles in the lengths then satisfies `det ∂θ/∂l = -det G̃ / det G`.

use nalgebra::{DMatrix, Matrix4, Matrix6};

use super::GeometryError;
use crate::edges::{edge_vertices, EDGES};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphericalCheck {
    /// Finite-difference `det ∂θ/∂l`.
    pub lhs: f64,
    /// `-det G̃ / det G`.
    pub rhs: f64,
}

/// `G = 1 1ᵀ - 2 Q` with `Q_uv = sin^2(l_uv / 2)`; only `Q` is stored so that
/// near-flat configurations keep their small entries exact.
fn half_chord_squares(l: &[f64; 6]) -> Matrix4<f64> {
    let mut q = Matrix4::zeros();
    for (e, &x) in l.iter().enumerate() {
        let (u, v) = edge_vertices(e);
        let s = (0.5 * x).sin();
        q[(u, v)] = s * s;
        q[(v, u)] = s * s;
    }
    q
}

fn signed_minor(m: &DMatrix<f64>, r: usize, c: usize) -> f64 {
    let d = m.clone().remove_row(r).remove_column(c).determinant();
    if (r + c).is_multiple_of(2) { d } else { -d }
}

/// `det(1 1ᵀ + A) = det A + 1ᵀ adj(A) 1`.
fn det_ones_plus(a: &DMatrix<f64>) -> f64 {
    let n = a.nrows();
    if n == 1 {
        return 1.0 + a[(0, 0)];
    }
    let mut adj_sum = 0.0;
    for r in 0..n {
        for c in 0..n {
            adj_sum += signed_minor(a, c, r);
        }
    }
    a.determinant() + adj_sum
}

/// `(det G, adj G)` computed through `Q`.
fn gram_det_adjugate(l: &[f64; 6]) -> (f64, Matrix4<f64>) {
    let a = DMatrix::from_fn(4, 4, |r, c| -2.0 * half_chord_squares(l)[(r, c)]);
    let adj = Matrix4::from_fn(|r, c| {
        let minor = a.clone().remove_row(c).remove_column(r);
        let d = det_ones_plus(&minor);
        if (r + c) % 2 == 0 { d } else { -d }
    });
    (det_ones_plus(&a), adj)
}

fn vertex_gram(l: &[f64; 6]) -> Matrix4<f64> {
    Matrix4::from_element(1.0) - 2.0 * half_chord_squares(l)
}

fn checked(l: &[f64; 6]) -> Result<(f64, Matrix4<f64>), GeometryError> {
    let (det, adj) = gram_det_adjugate(l);
    let valid = det > 0.0 && vertex_gram(l).cholesky().is_some() && l.iter().all(|&x| x > 0.0);
    if !valid {
        return Err(GeometryError::InvalidSpherical { det });
    }
    Ok((det, adj))
}

/// Exterior angles and the dual Gram matrix `G̃`.
pub fn spherical_angles(l: &[f64; 6]) -> Result<([f64; 6], Matrix4<f64>), GeometryError> {
    let (_, adj) = checked(l)?;
    let dual = Matrix4::from_fn(|r, c| adj[(r, c)] / (adj[(r, r)] * adj[(c, c)]).sqrt());
    let theta = EDGES.map(|(i, j)| dual[(i, j)].clamp(-1.0, 1.0).acos());
    Ok((theta, dual))
}

pub fn spherical_determinant_check(l: &[f64; 6], step: f64) -> Result<SphericalCheck, GeometryError> {
    let (det_g, _) = checked(l)?;
    let (_, dual) = spherical_angles(l)?;
    let mut j = Matrix6::zeros();
    for k in 0..6 {
        let (mut up, mut down) = (*l, *l);
        up[k] += step;
        down[k] -= step;
        let (tp, _) = spherical_angles(&up)?;
        let (tm, _) = spherical_angles(&down)?;
        for e in 0..6 {
            j[(e, k)] = (tp[e] - tm[e]) / (2.0 * step);
        }
    }
    Ok(SphericalCheck { lhs: j.determinant(), rhs: -dual.determinant() / det_g })
}
