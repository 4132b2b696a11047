//! Exact SU(2) 6j symbols and the geometry of their tetrahedra.
//!
//! The crate pairs an exact Racah engine with the flat-tetrahedron geometry
//! that controls the large-spin behaviour of the symbol, and checks one
//! against the other:
//!
//! - [`spin`] and [`wigner`]: exact spins, rationals, 6j values, theta graphs.
//! - [`geometry`]: volumes, areas, dihedral angles, Gram matrices, Jacobians.
//! - [`asymptotics`]: the Ponzano-Regge formula, its Hessian and the edge kernel.
//! - [`recursion`]: the shift-operator recursion for normalized 6j symbols.
//! - [`analysis`]: scaling sweeps, coefficient fits, identity suite, output.

pub mod analysis;
pub mod asymptotics;
pub mod edges;
pub mod geometry;
pub mod recursion;
pub mod spin;
pub mod wigner;

pub use spin::{parse_spin, triad_admissible, ExactRational, SignedSqrtRational, Spin};
pub use wigner::{sixj_exact, SixJLabels};
