//! Flat tetrahedron geometry from six edge lengths.
//!
//! Volume and face areas come from Cayley-Menger determinants, interior
//! dihedral cosines from normalized cofactors of the Cayley-Menger matrix.
//! Angles are exterior throughout: `θ = π - interior`, the angle between
//! outward face normals.

mod embedding;
mod spherical;

pub use embedding::{embed_and_extract_angles, EmbeddedTet};
pub use spherical::{spherical_angles, spherical_determinant_check, SphericalCheck};

use nalgebra::{DMatrix, Matrix4, Matrix5, Matrix6};
use thiserror::Error;

use crate::edges::{edge_vertices, EDGES, FACE_EDGES};

/// Relative threshold on `V^2 / mean(l)^6` below which a tetrahedron is degenerate.
pub const DEGENERATE_VOLUME: f64 = 1e-14;
/// Same for `S^2 / mean(l)^4` of a face.
pub const DEGENERATE_AREA: f64 = 1e-14;
/// Default finite-difference step relative to the geometric mean length.
pub const RELATIVE_STEP: f64 = 1e-6;
/// Randomized checks reject tetrahedra whose [`TetGeometry::quality`] is below this.
pub const SAMPLE_QUALITY: f64 = 0.2;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("edge {edge} has non-positive or non-finite length {value}")]
    BadLength { edge: &'static str, value: f64 },
    #[error("face {face} violates the triangle inequality (S^2 = {area_sq:e})")]
    FaceInequality { face: usize, area_sq: f64 },
    #[error("degenerate tetrahedron (V^2 = {volume_sq:e})")]
    Degenerate { volume_sq: f64 },
    #[error("finite-difference step {step:e} leaves the valid region: {source}")]
    StepTooLarge { step: f64, source: Box<GeometryError> },
    #[error("vertex Gram matrix is not positive definite (det = {det:e})")]
    InvalidSpherical { det: f64 },
}

/// Six positive edge lengths in the order `(12, 13, 14, 23, 24, 34)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeLengths([f64; 6]);

impl EdgeLengths {
    pub fn new(l: [f64; 6]) -> Result<Self, GeometryError> {
        for (e, &v) in l.iter().enumerate() {
            if !(v > 0.0 && v.is_finite()) {
                return Err(GeometryError::BadLength { edge: crate::edges::EDGE_NAMES[e], value: v });
            }
        }
        Ok(EdgeLengths(l))
    }

    pub fn regular(a: f64) -> Self {
        EdgeLengths([a; 6])
    }

    pub fn values(&self) -> [f64; 6] {
        self.0
    }

    pub fn get(&self, e: usize) -> f64 {
        self.0[e]
    }

    /// `|l|` with `|l|^2 = Σ l^2`.
    pub fn norm(&self) -> f64 {
        self.0.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn geometric_mean(&self) -> f64 {
        (self.0.iter().map(|x| x.ln()).sum::<f64>() / 6.0).exp()
    }

    pub fn mean(&self) -> f64 {
        self.0.iter().sum::<f64>() / 6.0
    }

    pub fn scaled(&self, c: f64) -> Self {
        EdgeLengths(self.0.map(|x| x * c))
    }

    pub fn with_edge(&self, e: usize, value: f64) -> Self {
        let mut l = self.0;
        l[e] = value;
        EdgeLengths(l)
    }

    /// Length between vertices `u != v`.
    pub fn between(&self, u: usize, v: usize) -> f64 {
        let e = (0..6).find(|&e| {
            let (a, b) = edge_vertices(e);
            (a, b) == (u.min(v), u.max(v))
        });
        self.0[e.expect("distinct vertices")]
    }
}

/// Everything derived from a non-degenerate set of lengths.
#[derive(Debug, Clone, PartialEq)]
pub struct TetGeometry {
    pub lengths: EdgeLengths,
    pub volume: f64,
    /// Face `i` is opposite vertex `i`.
    pub areas: [f64; 4],
    /// Exterior dihedral angles in edge order.
    pub theta: [f64; 6],
    /// `G̃_ij = cos θ_ij`, unit diagonal.
    pub gram: Matrix4<f64>,
    /// `λ = -4 Π S^2 / (3^5 V^5)`.
    pub lambda: f64,
    /// `ρ = λ / |l|`.
    pub rho: f64,
}

fn cayley_menger(l: &EdgeLengths) -> Matrix5<f64> {
    let mut m = Matrix5::from_element(1.0);
    m[(0, 0)] = 0.0;
    for v in 1..5 {
        m[(v, v)] = 0.0;
    }
    for e in 0..6 {
        let (u, v) = edge_vertices(e);
        let d2 = l.get(e) * l.get(e);
        m[(u + 1, v + 1)] = d2;
        m[(v + 1, u + 1)] = d2;
    }
    m
}

/// `16 S^2` for sides `a, b, c`, in the cancellation-free ordering.
fn sixteen_area_sq(a: f64, b: f64, c: f64) -> f64 {
    let mut s = [a, b, c];
    s.sort_by(|x, y| y.total_cmp(x));
    let [a, b, c] = s;
    (a + (b + c)) * (c - (a - b)) * (c + (a - b)) * (a + (b - c))
}

fn cofactor(m: &Matrix5<f64>, r: usize, c: usize) -> f64 {
    let minor = m.remove_row(r).remove_column(c).determinant();
    if (r + c).is_multiple_of(2) { minor } else { -minor }
}

pub fn build_geometry(lengths: &EdgeLengths) -> Result<TetGeometry, GeometryError> {
    let mean = lengths.mean();
    let mut areas = [0.0; 4];
    for (f, edges) in FACE_EDGES.iter().enumerate() {
        let [a, b, c] = edges.map(|e| lengths.get(e));
        let s2 = sixteen_area_sq(a, b, c) / 16.0;
        if !(s2 > DEGENERATE_AREA * mean.powi(4)) {
            return Err(GeometryError::FaceInequality { face: f + 1, area_sq: s2 });
        }
        areas[f] = s2.sqrt();
    }
    let cm = cayley_menger(lengths);
    let v2 = cm.determinant() / 288.0;
    if !(v2 > DEGENERATE_VOLUME * mean.powi(6)) {
        return Err(GeometryError::Degenerate { volume_sq: v2 });
    }
    let volume = v2.sqrt();

    let diag: [f64; 4] = std::array::from_fn(|v| cofactor(&cm, v + 1, v + 1));
    let mut theta = [0.0; 6];
    let mut gram = Matrix4::identity();
    for (e, &(i, j)) in EDGES.iter().enumerate() {
        // Faces i and j are opposite vertices i and j.
        let interior = cofactor(&cm, i + 1, j + 1) / (diag[i] * diag[j]).sqrt();
        let c = (-interior).clamp(-1.0, 1.0);
        theta[e] = c.acos();
        gram[(i, j)] = c;
        gram[(j, i)] = c;
    }
    let prod_s2: f64 = areas.iter().map(|s| s * s).product();
    let lambda = -4.0 * prod_s2 / (243.0 * volume.powi(5));
    Ok(TetGeometry { lengths: *lengths, volume, areas, theta, gram, lambda, rho: lambda / lengths.norm() })
}

impl TetGeometry {
    pub fn norm(&self) -> f64 {
        self.lengths.norm()
    }

    /// `Σ l θ`.
    pub fn regge_action(&self) -> f64 {
        (0..6).map(|e| self.lengths.get(e) * self.theta[e]).sum()
    }

    /// Relative residuals of `sin θ_ij = (3/2) l_ij V / (S_i S_j)`.
    pub fn sine_relation_residuals(&self) -> [f64; 6] {
        std::array::from_fn(|e| {
            let (i, j) = EDGES[e];
            let rhs = 1.5 * self.lengths.get(e) * self.volume / (self.areas[i] * self.areas[j]);
            (self.theta[e].sin() - rhs).abs() / rhs
        })
    }

    /// `|G̃ S| / Σ S^2`.
    pub fn null_vector_residual(&self) -> f64 {
        let s = nalgebra::Vector4::from(self.areas);
        (self.gram * s).amax() / s.norm_squared()
    }

    /// Volume over that of the regular tetrahedron with the same rms edge; 1 when regular.
    pub fn quality(&self) -> f64 {
        let rms = self.norm() / 6f64.sqrt();
        self.volume * 6.0 * 2f64.sqrt() / rms.powi(3)
    }

    pub fn gram_determinant(&self) -> f64 {
        self.gram.determinant()
    }
}

fn to_dynamic<const N: usize>(m: &nalgebra::SMatrix<f64, N, N>) -> DMatrix<f64> {
    DMatrix::from_fn(N, N, |r, c| m[(r, c)])
}

/// Sum of the principal `(i, i)` cofactors.
pub fn det_prime(m: &DMatrix<f64>) -> f64 {
    assert!(m.is_square(), "det_prime needs a square matrix");
    let n = m.nrows();
    if n == 1 {
        return 1.0;
    }
    (0..n).map(|i| m.clone().remove_row(i).remove_column(i).determinant()).sum()
}

pub fn det_prime4(m: &Matrix4<f64>) -> f64 {
    det_prime(&to_dynamic(m))
}

pub fn det_prime6(m: &Matrix6<f64>) -> f64 {
    det_prime(&to_dynamic(m))
}

/// `(det' G̃, (3^4/2^2) (Σ S^2) V^4 / Π S^2)`.
pub fn check_det_prime_gram(geom: &TetGeometry) -> (f64, f64) {
    let s2: Vec<f64> = geom.areas.iter().map(|s| s * s).collect();
    let rhs = 81.0 / 4.0 * s2.iter().sum::<f64>() * geom.volume.powi(4) / s2.iter().product::<f64>();
    (det_prime4(&geom.gram), rhs)
}

/// `(3^3/2^5) |l|^2 V^3 / Π S^2`, the closed form of `det'(∂θ/∂l)`.
pub fn det_prime_dtheta_formula(geom: &TetGeometry) -> f64 {
    let prod_s2: f64 = geom.areas.iter().map(|s| s * s).product();
    27.0 / 32.0 * geom.norm().powi(2) * geom.volume.powi(3) / prod_s2
}

pub fn default_step(lengths: &EdgeLengths) -> f64 {
    RELATIVE_STEP * lengths.geometric_mean()
}

/// Central-difference Jacobian `J[(ij, kl)] = ∂θ_ij / ∂l_kl`.
pub fn dtheta_dl(lengths: &EdgeLengths, step: f64) -> Result<Matrix6<f64>, GeometryError> {
    let angles = |l: EdgeLengths| {
        build_geometry(&l)
            .map(|g| g.theta)
            .map_err(|e| GeometryError::StepTooLarge { step, source: Box::new(e) })
    };
    let mut j = Matrix6::zeros();
    for k in 0..6 {
        let lk = lengths.get(k);
        if !(lk > step) {
            return Err(GeometryError::StepTooLarge {
                step,
                source: Box::new(GeometryError::BadLength { edge: crate::edges::EDGE_NAMES[k], value: lk - step }),
            });
        }
        let plus = angles(lengths.with_edge(k, lk + step))?;
        let minus = angles(lengths.with_edge(k, lk - step))?;
        for e in 0..6 {
            j[(e, k)] = (plus[e] - minus[e]) / (2.0 * step);
        }
    }
    Ok(j)
}

/// Central-difference gradient of `λ` in the lengths.
pub fn lambda_gradient(lengths: &EdgeLengths, step: f64) -> Result<[f64; 6], GeometryError> {
    let mut g = [0.0; 6];
    for (k, gk) in g.iter_mut().enumerate() {
        let lk = lengths.get(k);
        let at = |x: f64| {
            build_geometry(&lengths.with_edge(k, x))
                .map(|g| g.lambda)
                .map_err(|e| GeometryError::StepTooLarge { step, source: Box::new(e) })
        };
        *gk = (at(lk + step)? - at(lk - step)?) / (2.0 * step);
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn regular_tetrahedron() {
        let g = build_geometry(&EdgeLengths::regular(1.0)).unwrap();
        assert!(rel(g.volume, 2f64.sqrt() / 12.0) < 1e-12);
        for s in g.areas {
            assert!(rel(s, 3f64.sqrt() / 4.0) < 1e-12);
        }
        for t in g.theta {
            assert!(rel(t, PI - (1.0f64 / 3.0).acos()) < 1e-12);
            assert!(rel(t.sin(), 8f64.sqrt() / 3.0) < 1e-12);
        }
        assert!(rel(g.lambda, -0.894_93) < 1e-5);
        assert!(rel(g.quality(), 1.0) < 1e-12);
        let (lhs, rhs) = check_det_prime_gram(&g);
        assert!(rel(lhs, 64.0 / 27.0) < 1e-12 && rel(rhs, 64.0 / 27.0) < 1e-12);
    }

    #[test]
    fn degenerate_inputs() {
        let e = build_geometry(&EdgeLengths::new([1.0, 1.0, 1.0, 1.0, 1.0, 2.0]).unwrap()).unwrap_err();
        assert!(matches!(e, GeometryError::FaceInequality { face: 3, .. }));
        // Four coplanar points: a unit square with its diagonals.
        let d = 2f64.sqrt();
        let flat = EdgeLengths::new([1.0, d, 1.0, 1.0, d, 1.0]).unwrap();
        assert!(matches!(build_geometry(&flat), Err(GeometryError::Degenerate { .. })));
        assert!(EdgeLengths::new([1.0, 1.0, 0.0, 1.0, 1.0, 1.0]).is_err());
    }

    #[test]
    fn det_prime_examples() {
        assert_eq!(det_prime(&DMatrix::identity(4, 4)), 4.0);
        assert_eq!(det_prime(&DMatrix::zeros(2, 2)), 0.0);
        let g = Matrix4::from_fn(|r, c| if r == c { 1.0 } else { -1.0 / 3.0 });
        assert!(rel(det_prime4(&g), 64.0 / 27.0) < 1e-14);
    }

    #[test]
    fn dtheta_regular() {
        let l = EdgeLengths::regular(1.0);
        let j = dtheta_dl(&l, default_step(&l)).unwrap();
        let g = build_geometry(&l).unwrap();
        assert!(rel(det_prime6(&j), det_prime_dtheta_formula(&g)) < 1e-6);
        assert!(rel(det_prime_dtheta_formula(&g), 6.7043) < 1e-4);
    }

    fn tetrahedron() -> impl Strategy<Value = TetGeometry> {
        prop::array::uniform6(0.5f64..2.0).prop_filter_map("degenerate", |l| {
            let g = build_geometry(&EdgeLengths::new(l).ok()?).ok()?;
            (g.quality() >= SAMPLE_QUALITY).then_some(g)
        })
    }

    proptest! {
        #[test]
        fn invariants(g in tetrahedron()) {
            for r in g.sine_relation_residuals() {
                prop_assert!(r < 1e-10);
            }
            prop_assert!(g.null_vector_residual() < 1e-9);
            prop_assert!(g.gram_determinant().abs() < 1e-10);
            let (lhs, rhs) = check_det_prime_gram(&g);
            prop_assert!(rel(lhs, rhs) < 1e-9);
            prop_assert!(rel(g.lambda, g.rho * g.norm()) < 1e-15);
        }

        #[test]
        fn scale_covariance(g in tetrahedron(), k in 0usize..3) {
            let c = [0.5, 2.0, 7.0][k];
            let h = build_geometry(&g.lengths.scaled(c)).unwrap();
            prop_assert!(rel(h.volume, c.powi(3) * g.volume) < 1e-12);
            for f in 0..4 {
                prop_assert!(rel(h.areas[f], c * c * g.areas[f]) < 1e-12);
            }
            for e in 0..6 {
                prop_assert!(rel(h.theta[e], g.theta[e]) < 1e-12);
            }
            let (a, _) = check_det_prime_gram(&g);
            let (b, _) = check_det_prime_gram(&h);
            prop_assert!(rel(a, b) < 1e-10);
        }

        #[test]
        fn jacobian_properties(g in tetrahedron()) {
            let l = g.lengths;
            let j = dtheta_dl(&l, default_step(&l)).unwrap();
            let norm = j.norm();
            prop_assert!((j - j.transpose()).norm() <= 1e-6 * norm);
            let lv = nalgebra::Vector6::from(l.values());
            prop_assert!((j * lv).norm() <= 1e-6 * norm * lv.norm());
            prop_assert!(rel(det_prime6(&j), det_prime_dtheta_formula(&g)) < 1e-6);
        }

        #[test]
        fn lambda_homogeneity(g in tetrahedron()) {
            let l = g.lengths;
            // Richardson step pair; λ curves sharply near flat shapes.
            let h = default_step(&l);
            let coarse = lambda_gradient(&l, h).unwrap();
            let fine = lambda_gradient(&l, h / 2.0).unwrap();
            let euler: f64 = (0..6).map(|e| l.get(e) * (4.0 * fine[e] - coarse[e]) / 3.0).sum();
            prop_assert!(rel(euler, g.lambda) < 1e-6);
        }
    }
}
