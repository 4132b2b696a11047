//! Explicit embedding of a tetrahedron and the rotation definition of its angles.
//!
//! Each face carries its three edge vectors `B_fe`, ordered counterclockwise
//! about the outward normal `n_f` and closing to zero. The angle on edge
//! `e = (s, t)` rotates `n_s` into `n_t` about the axis `B_te`, with the
//! left-hand rule; for a positively embedded tetrahedron this reproduces the
//! exterior dihedral angle in `(0, π)`.

use nalgebra::Vector3;

use super::{build_geometry, EdgeLengths, GeometryError, TetGeometry};
use crate::edges::{edge_index, edge_vertices, EDGES};

#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddedTet {
    pub vertices: [Vector3<f64>; 4],
    /// Per face: `(edge index, B_fe)` in cyclic order.
    pub b: [[(usize, Vector3<f64>); 3]; 4],
    /// Outward unit normals.
    pub normals: [Vector3<f64>; 4],
}

impl EmbeddedTet {
    pub fn edge_vector(&self, face: usize, edge: usize) -> Option<Vector3<f64>> {
        self.b[face].iter().find(|(e, _)| *e == edge).map(|(_, v)| *v)
    }

    /// `max_f |Σ_e B_fe|`.
    pub fn closure_residual(&self) -> f64 {
        self.b.iter().map(|face| face.iter().map(|(_, v)| v).sum::<Vector3<f64>>().norm()).fold(0.0, f64::max)
    }

    /// `max |n_f · B_fe| / |B_fe|`.
    pub fn normal_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (f, face) in self.b.iter().enumerate() {
            for (_, v) in face {
                worst = worst.max(self.normals[f].dot(v).abs() / v.norm());
            }
        }
        worst
    }

    /// `min_f n_f · (B_f1 × B_f2)` over consecutive pairs; positive when oriented.
    pub fn orientation(&self) -> f64 {
        let mut worst = f64::INFINITY;
        for (f, face) in self.b.iter().enumerate() {
            for k in 0..3 {
                let cross = face[k].1.cross(&face[(k + 1) % 3].1);
                worst = worst.min(self.normals[f].dot(&cross));
            }
        }
        worst
    }

    /// Rotation angles in edge order.
    pub fn rotation_angles(&self) -> [f64; 6] {
        EDGES.map(|(s, t)| {
            let e = edge_index(s, t);
            let axis = self.edge_vector(t, e).expect("edge lies in face").normalize();
            let (ns, nt) = (self.normals[s], self.normals[t]);
            (-ns.cross(&nt).dot(&axis)).atan2(ns.dot(&nt))
        })
    }

    /// Image under parity: positions and edge vectors flip, normals are
    /// pseudovectors and stay fixed.
    pub fn parity_image(&self) -> EmbeddedTet {
        EmbeddedTet {
            vertices: self.vertices.map(|v| -v),
            b: self.b.map(|face| face.map(|(e, v)| (e, -v))),
            normals: self.normals,
        }
    }
}

fn place_vertices(l: &EdgeLengths, volume: f64) -> [Vector3<f64>; 4] {
    let d = |u: usize, v: usize| l.between(u, v);
    let p0 = Vector3::zeros();
    let p1 = Vector3::new(d(0, 1), 0.0, 0.0);
    let x2 = (d(0, 2).powi(2) + d(0, 1).powi(2) - d(1, 2).powi(2)) / (2.0 * d(0, 1));
    let y2 = (d(0, 2).powi(2) - x2 * x2).max(0.0).sqrt();
    let p2 = Vector3::new(x2, y2, 0.0);
    let x3 = (d(0, 3).powi(2) + d(0, 1).powi(2) - d(1, 3).powi(2)) / (2.0 * d(0, 1));
    let y3 = (d(0, 3).powi(2) - d(2, 3).powi(2) + x2 * x2 + y2 * y2 - 2.0 * x2 * x3) / (2.0 * y2);
    // Height from the volume: V = (1/6) |p1 x p2| z3.
    let z3 = 6.0 * volume / (d(0, 1) * y2);
    [p0, p1, p2, Vector3::new(x3, y3, z3)]
}

fn face_frame(p: &[Vector3<f64>; 4], f: usize) -> ([(usize, Vector3<f64>); 3], Vector3<f64>) {
    let mut vs: Vec<usize> = (0..4).filter(|&v| v != f).collect();
    let centroid = (p[vs[0]] + p[vs[1]] + p[vs[2]]) / 3.0;
    let mut n = (p[vs[1]] - p[vs[0]]).cross(&(p[vs[2]] - p[vs[0]])).normalize();
    if n.dot(&(centroid - p[f])) < 0.0 {
        n = -n;
        vs.swap(1, 2);
    }
    let edge_of = |a: usize, b: usize| {
        (0..6).find(|&e| edge_vertices(e) == (a.min(b), a.max(b))).expect("vertex pair")
    };
    let b = [(vs[0], vs[1]), (vs[1], vs[2]), (vs[2], vs[0])].map(|(a, c)| (edge_of(a, c), p[c] - p[a]));
    (b, n)
}

/// Embed, then return the embedding, the rotation angles and the geometry
/// they are compared against.
pub fn embed_and_extract_angles(lengths: &EdgeLengths) -> Result<(EmbeddedTet, [f64; 6], TetGeometry), GeometryError> {
    let geom = build_geometry(lengths)?;
    let vertices = place_vertices(lengths, geom.volume);
    let frames: [_; 4] = std::array::from_fn(|f| face_frame(&vertices, f));
    let tet = EmbeddedTet { vertices, b: frames.map(|(b, _)| b), normals: frames.map(|(_, n)| n) };
    let angles = tet.rotation_angles();
    Ok((tet, angles, geom))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn regular() {
        let (tet, angles, geom) = embed_and_extract_angles(&EdgeLengths::regular(1.0)).unwrap();
        assert!(tet.closure_residual() <= 1e-14);
        assert!(tet.normal_residual() <= 1e-14);
        assert!(tet.orientation() > 0.0);
        for (a, t) in angles.iter().zip(geom.theta) {
            assert!((a - 1.910_633_236_249_018_4).abs() < 1e-10);
            assert!((a - t).abs() < 1e-10);
        }
        for e in 0..6 {
            let (u, v) = edge_vertices(e);
            assert!(((tet.vertices[u] - tet.vertices[v]).norm() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn shared_edges_are_opposite() {
        let (tet, _, _) = embed_and_extract_angles(&EdgeLengths::new([1.0, 1.2, 0.9, 1.1, 1.3, 1.05]).unwrap()).unwrap();
        for (e, &(s, t)) in EDGES.iter().enumerate() {
            let sum = tet.edge_vector(s, e).unwrap() + tet.edge_vector(t, e).unwrap();
            assert!(sum.norm() < 1e-14);
        }
    }

    proptest! {
        #[test]
        fn angles_match_gram(l in prop::array::uniform6(0.5f64..2.0)) {
            let Ok(lengths) = EdgeLengths::new(l) else { return Ok(()); };
            let Ok((tet, angles, geom)) = embed_and_extract_angles(&lengths) else { return Ok(()); };
            if geom.quality() < crate::geometry::SAMPLE_QUALITY {
                return Ok(());
            }
            let maxl = l.iter().cloned().fold(0.0, f64::max);
            prop_assert!(tet.closure_residual() <= 1e-12 * maxl);
            prop_assert!(tet.normal_residual() <= 1e-12);
            prop_assert!(tet.orientation() > 0.0);
            for e in 0..6 {
                prop_assert!(angles[e] > 0.0 && angles[e] < std::f64::consts::PI);
                prop_assert!((angles[e] - geom.theta[e]).abs() <= 1e-10);
            }
            let mirror = tet.parity_image();
            prop_assert!(mirror.orientation() > 0.0);
            for (m, a) in mirror.rotation_angles().iter().zip(angles) {
                prop_assert!((m + a).abs() <= 1e-12);
            }
        }
    }
}
