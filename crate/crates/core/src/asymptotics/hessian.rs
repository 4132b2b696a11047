//! Second-order data of the first-order Regge action at its stationary point.
//!
//! Rows and columns are ordered `(ρ, θ₁₂, …, θ₃₄)`. With `g = ∇_θ det G̃` and
//! `D = ∇_θ∇_θ det G̃`, the kinetic matrix is `K = [[0, |l| gᵀ], [|l| g, λ D]]`
//! and its inverse is assembled from `∇_l λ`, `∂θ/∂l` and one scalar `c`.

use nalgebra::{SMatrix, SVector, SymmetricEigen};

use super::AsymptoticError;
use crate::edges::{edge_index, face_permutations};
use crate::geometry::{build_geometry, default_step, dtheta_dl, lambda_gradient, EdgeLengths, TetGeometry};

pub type Matrix7 = SMatrix<f64, 7, 7>;
type Matrix6 = SMatrix<f64, 6, 6>;
type Vector6 = SVector<f64, 6>;

/// `det G̃` as a polynomial in the six cosines: one monomial per permutation,
/// stored as its sign and the edges of its off-diagonal factors.
fn gram_monomials() -> Vec<(f64, Vec<usize>)> {
    face_permutations()
        .into_iter()
        .map(|(p, sign)| {
            let edges = (0..4).filter(|&i| p[i] != i).map(|i| edge_index(i, p[i])).collect();
            (f64::from(sign), edges)
        })
        .collect()
}

/// Value, gradient and Hessian of `det G̃` in the cosines `x`.
fn gram_polynomial(x: &[f64; 6]) -> (f64, Vector6, Matrix6) {
    let mut value = 0.0;
    let mut grad = Vector6::zeros();
    let mut hess = Matrix6::zeros();
    for (sign, edges) in gram_monomials() {
        let n = edges.len();
        let prod_except = |skip: &[usize]| -> f64 {
            (0..n).filter(|k| !skip.contains(k)).map(|k| x[edges[k]]).product()
        };
        value += sign * prod_except(&[]);
        for a in 0..n {
            grad[edges[a]] += sign * prod_except(&[a]);
            for b in 0..n {
                if a != b {
                    hess[(edges[a], edges[b])] += sign * prod_except(&[a, b]);
                }
            }
        }
    }
    (value, grad, hess)
}

/// `(det G̃, ∇_θ det G̃, ∇_θ∇_θ det G̃)` at angles `θ`.
pub fn gram_theta_derivatives(theta: &[f64; 6]) -> (f64, Vector6, Matrix6) {
    let x = theta.map(f64::cos);
    let s = theta.map(f64::sin);
    let (p, px, pxx) = gram_polynomial(&x);
    let g = Vector6::from_fn(|a, _| -s[a] * px[a]);
    let d = Matrix6::from_fn(|a, b| {
        let mixed = pxx[(a, b)] * s[a] * s[b];
        if a == b { mixed - x[a] * px[a] } else { mixed }
    });
    (p, g, d)
}

#[derive(Debug, Clone, PartialEq)]
pub struct HessianBundle {
    pub geometry: TetGeometry,
    pub k: Matrix7,
    pub kinv: Matrix7,
    /// Mean of the component-wise extractions of `c`.
    pub c: f64,
    /// `max |c_k - c| / |c|`.
    pub c_spread: f64,
    pub c_components: [f64; 6],
    pub g: [f64; 6],
    pub d: Matrix6,
    pub grad_lambda: [f64; 6],
    pub dtheta_dl: Matrix6,
}

impl HessianBundle {
    /// `‖K Kinv - I‖_max`.
    pub fn inverse_residual(&self) -> f64 {
        (self.k * self.kinv - Matrix7::identity()).amax()
    }

    /// `(positive, negative)` eigenvalue counts of `K`.
    pub fn signature(&self) -> (usize, usize) {
        signature(&self.k)
    }

    /// `max_a |g_a - l_a / λ| / |l_a / λ|`.
    pub fn gradient_residual(&self) -> f64 {
        (0..6)
            .map(|a| {
                let expect = self.geometry.lengths.get(a) / self.geometry.lambda;
                (self.g[a] - expect).abs() / expect.abs()
            })
            .fold(0.0, f64::max)
    }
}

/// Eigenvalue signs of the symmetric part of `m`; zero eigenvalues are not counted.
pub fn signature(m: &Matrix7) -> (usize, usize) {
    let sym = (m + m.transpose()) * 0.5;
    let eig = SymmetricEigen::new(sym).eigenvalues;
    let tol = 1e-12 * eig.amax();
    (eig.iter().filter(|&&v| v > tol).count(), eig.iter().filter(|&&v| v < -tol).count())
}

pub fn build_hessian(lengths: &EdgeLengths) -> Result<HessianBundle, AsymptoticError> {
    let geometry = build_geometry(lengths)?;
    let norm = lengths.norm();
    let lambda = geometry.lambda;
    let (_, g, d) = gram_theta_derivatives(&geometry.theta);
    let step = default_step(lengths);
    let grad_lambda = Vector6::from(lambda_gradient(lengths, step)?);
    let jac = dtheta_dl(lengths, step)?;

    let dl = d * grad_lambda;
    let c_components: [f64; 6] = std::array::from_fn(|a| -lambda * dl[a] / g[a]);
    let c = c_components.iter().sum::<f64>() / 6.0;
    let c_spread = c_components.iter().map(|x| (x - c).abs() / c.abs()).fold(0.0, f64::max);

    let mut k = Matrix7::zeros();
    let mut kinv = Matrix7::zeros();
    kinv[(0, 0)] = c / (norm * norm);
    for a in 0..6 {
        k[(0, a + 1)] = norm * g[a];
        k[(a + 1, 0)] = norm * g[a];
        kinv[(0, a + 1)] = grad_lambda[a] / norm;
        kinv[(a + 1, 0)] = grad_lambda[a] / norm;
        for b in 0..6 {
            k[(a + 1, b + 1)] = lambda * d[(a, b)];
            kinv[(a + 1, b + 1)] = jac[(a, b)];
        }
    }
    Ok(HessianBundle {
        geometry,
        k,
        kinv,
        c,
        c_spread,
        c_components,
        g: g.into(),
        d,
        grad_lambda: grad_lambda.into(),
        dtheta_dl: jac,
    })
}

/// `(|det Kinv|, Π S^2 / (2 · 3^7 |l|^2 V^7))`.
pub fn hessian_determinant_check(lengths: &EdgeLengths) -> Result<(f64, f64), AsymptoticError> {
    let h = build_hessian(lengths)?;
    let geom = &h.geometry;
    let prod_s2: f64 = geom.areas.iter().map(|s| s * s).product();
    let formula = prod_s2 / (2.0 * 2187.0 * geom.norm().powi(2) * geom.volume.powi(7));
    Ok((h.kinv.determinant().abs(), formula))
}

/// The equilateral kinetic matrix `M_λ`; opposite edges sit on the anti-diagonal.
pub fn reference_matrix(lambda: f64) -> Matrix7 {
    let a = -(2f64.sqrt()) * 64.0 / 81.0;
    let b = 3f64.sqrt() / 4.0;
    let c = 1.0 / (2.0 * 3f64.sqrt());
    Matrix7::from_fn(|r, col| match (r, col) {
        (0, 0) => 0.0,
        (0, _) | (_, 0) => a,
        (r, col) if r == col => b - lambda,
        (r, col) if r + col == 7 => -lambda,
        _ => c - lambda,
    })
}

pub fn equilateral_reference_matrix() -> Matrix7 {
    reference_matrix(0.0)
}
