//! The shift-operator recursion for normalized 6j symbols.
//!
//! `T^v_e F(l) = (1 + v/(2 l_e)) F(l + v δ_e)` shifts one edge length by
//! `v = ±1`. Replacing `cos θ_ij` in `det G̃` by `(T^1_ij + T^-1_ij)/2` gives a
//! 384-term operator (24 permutations times 16 sign vectors) that annihilates
//! `N(l) {6j}(l)`.
//!
//! Every term's coefficient is rational, so coefficients are accumulated
//! exactly per distinct shifted label set before anything is evaluated in
//! floating point. Relabelling the tetrahedron permutes those label sets
//! without changing their coefficients, which makes the residual bitwise
//! invariant under the 24 symmetries.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::sync::OnceLock;

use num_bigint::BigInt;
use rayon::prelude::*;
use thiserror::Error;

use crate::edges::{edge_index, face_permutations, FACE_EDGES};
use crate::geometry::{build_geometry, EdgeLengths, GeometryError};
use crate::spin::{ExactRational, Spin};
use crate::wigner::{ln_c_norm_continuous, ln_theta_graph_continuous, sixj_value, SixJLabels, TriangleError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RecursionError {
    #[error("shifting edge {edge} by {shift} drives its spin below zero")]
    NegativeSpin { edge: usize, shift: i8 },
    #[error("face {face}: {source}")]
    Face { face: usize, source: TriangleError },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("stencil term at labels {labels:?} (twice l) failed: {source}")]
    Term { labels: [u32; 6], source: Box<RecursionError> },
}

/// Which theta-graph value enters `N(l) = sqrt(Π_f Θ_f)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Normalization {
    /// `Θ_f = (C^{abc}_{000})^2`.
    #[default]
    ThetaGraph,
    /// `Θ_f = C_a C_b C_c (C^{abc}_{000})^2`.
    WithEdgeFactors,
}

/// One term of the determinant expansion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StencilTerm {
    pub sigma: [usize; 4],
    /// `sgn σ`; the term's weight is `sign / 16`.
    pub sign: i8,
    /// `v_i` for the factor `T^{v_i}_{i σ(i)}`; unused where `σ(i) = i`.
    pub shifts: [i8; 4],
}

impl StencilTerm {
    pub fn weight(&self) -> f64 {
        f64::from(self.sign) / 16.0
    }

    /// `(edge, v)` factors from left to right, fixed points omitted.
    pub fn factors(&self) -> impl Iterator<Item = (usize, i8)> + '_ {
        (0..4).filter(|&i| self.sigma[i] != i).map(|i| (edge_index(i, self.sigma[i]), self.shifts[i]))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecursionStencil {
    pub terms: Vec<StencilTerm>,
}

impl RecursionStencil {
    pub fn new() -> Self {
        let mut terms = Vec::with_capacity(384);
        for (sigma, sign) in face_permutations() {
            for bits in 0..16u8 {
                let shifts = std::array::from_fn(|i| if bits >> i & 1 == 1 { -1 } else { 1 });
                terms.push(StencilTerm { sigma, sign, shifts });
            }
        }
        RecursionStencil { terms }
    }

    pub fn shared() -> &'static RecursionStencil {
        static STENCIL: OnceLock<RecursionStencil> = OnceLock::new();
        STENCIL.get_or_init(RecursionStencil::new)
    }

    /// `Σ_terms weight · cos(Σ v θ)`: the expansion evaluated on plain angles,
    /// which must reproduce `det G̃`.
    pub fn expand_on_angles(&self, theta: &[f64; 6]) -> f64 {
        self.terms
            .iter()
            .map(|t| t.weight() * t.factors().map(|(e, v)| f64::from(v) * theta[e]).sum::<f64>().cos())
            .sum()
    }
}

impl Default for RecursionStencil {
    fn default() -> Self {
        Self::new()
    }
}

/// `(1 + v/(2 l_e)) f(spins with l_e -> l_e + v)`.
pub fn shift_apply<F>(f: F, spins: &[Spin; 6], edge: usize, v: i8) -> Result<f64, RecursionError>
where
    F: Fn(&[Spin; 6]) -> f64,
{
    let two_l = spins[edge].two_l() as i64 + 2 * i64::from(v);
    if two_l <= 0 {
        return Err(RecursionError::NegativeSpin { edge, shift: v });
    }
    let mut shifted = *spins;
    shifted[edge] = Spin::from_twice(two_l as u32 - 1);
    let factor = 1.0 + f64::from(v) / f64::from(spins[edge].two_l());
    Ok(factor * f(&shifted))
}

fn ln_face(l: [f64; 3], convention: Normalization) -> Result<f64, TriangleError> {
    let mut l = l;
    l.sort_by(f64::total_cmp);
    let graph = ln_theta_graph_continuous(l[0], l[1], l[2])?;
    Ok(match convention {
        Normalization::ThetaGraph => graph,
        Normalization::WithEdgeFactors => graph + l.iter().map(|&x| ln_c_norm_continuous(x - 0.5)).sum::<f64>(),
    })
}

/// `ln N(l)`; face logs are summed in sorted order so relabelled inputs agree bitwise.
pub fn ln_normalization(lengths: &[f64; 6], convention: Normalization) -> Result<f64, RecursionError> {
    let mut faces = [0.0; 4];
    for (f, edges) in FACE_EDGES.iter().enumerate() {
        faces[f] = ln_face(edges.map(|e| lengths[e]), convention)
            .map_err(|source| RecursionError::Face { face: f + 1, source })?;
    }
    faces.sort_by(f64::total_cmp);
    Ok(0.5 * faces.iter().sum::<f64>())
}

pub fn normalization_n(lengths: &[f64; 6], convention: Normalization) -> Result<f64, RecursionError> {
    ln_normalization(lengths, convention).map(f64::exp)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResidualReport {
    pub residual: f64,
    /// `residual · sqrt(12 π V) / N(l)`.
    pub normalized_residual: f64,
    /// `Σ |term| · sqrt(12 π V) / N(l)`: the size of what cancelled.
    pub normalized_term_scale: f64,
    pub terms: usize,
    /// Distinct shifted label sets with nonzero net coefficient.
    pub distinct_labels: usize,
    /// Terms whose shifts pass through a non-positive length.
    pub out_of_range_terms: usize,
    /// Distinct label sets whose 6j vanishes by a failing triad.
    pub vanishing_labels: usize,
}

/// Net exact coefficient of each shifted label set, keyed by `2l`.
pub fn stencil_coefficients(spins: &[Spin; 6]) -> (BTreeMap<[u32; 6], ExactRational>, usize) {
    let base: [i64; 6] = spins.map(|s| i64::from(s.two_l()));
    let mut acc: BTreeMap<[u32; 6], ExactRational> = BTreeMap::new();
    let mut out_of_range = 0;
    'terms: for term in &RecursionStencil::shared().terms {
        let mut two_l = base;
        let (mut num, mut den) = (BigInt::from(i64::from(term.sign)), BigInt::from(16));
        for (e, v) in term.factors() {
            let v = i64::from(v);
            let shifted = two_l[e] + 2 * v;
            if shifted <= 0 {
                out_of_range += 1;
                continue 'terms;
            }
            num *= two_l[e] + v;
            den *= two_l[e];
            two_l[e] = shifted;
        }
        let key = two_l.map(|x| x as u32);
        let c = ExactRational::new(num, den);
        let entry = acc.entry(key).or_insert_with(ExactRational::zero);
        *entry = &*entry + &c;
    }
    acc.retain(|_, c| !c.is_zero());
    (acc, out_of_range)
}

/// Sum with a running compensation term.
fn neumaier_sum(values: &[f64]) -> f64 {
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    for &v in values {
        let t = sum + v;
        comp += if sum.abs() >= v.abs() { (sum - t) + v } else { (v - t) + sum };
        sum = t;
    }
    sum + comp
}

fn evaluate_term(key: &[u32; 6], coefficient: &ExactRational, convention: Normalization) -> Result<Option<f64>, RecursionError> {
    let spins = key.map(|x| Spin::from_twice(x - 1));
    let sixj = sixj_value(&spins);
    if sixj.is_zero() {
        return Ok(None);
    }
    let lengths = key.map(|x| f64::from(x) / 2.0);
    let n = normalization_n(&lengths, convention)
        .map_err(|e| RecursionError::Term { labels: *key, source: Box::new(e) })?;
    Ok(Some(coefficient.to_f64() * n * sixj.to_f64()))
}

pub fn recursion_residual(labels: &SixJLabels, convention: Normalization) -> Result<ResidualReport, RecursionError> {
    let spins = labels.spins();
    let (coefficients, out_of_range_terms) = stencil_coefficients(&spins);
    let entries: Vec<_> = coefficients.iter().collect();
    let values = entries
        .par_iter()
        .map(|(k, c)| evaluate_term(k, c, convention))
        .collect::<Result<Vec<_>, _>>()?;
    let vanishing_labels = values.iter().filter(|v| v.is_none()).count();
    let mut contributions: Vec<f64> = values.into_iter().flatten().collect();
    contributions.sort_by(f64::total_cmp);
    let residual = neumaier_sum(&contributions);
    let magnitude: f64 = {
        let mut a: Vec<f64> = contributions.iter().map(|x| x.abs()).collect();
        a.sort_by(f64::total_cmp);
        a.iter().sum()
    };

    let lengths = labels.lengths();
    let geom = build_geometry(&EdgeLengths::new(lengths)?)?;
    let scale = (12.0 * PI * geom.volume).sqrt() / normalization_n(&lengths, convention)?;
    Ok(ResidualReport {
        residual,
        normalized_residual: residual * scale,
        normalized_term_scale: magnitude * scale,
        terms: RecursionStencil::shared().terms.len(),
        distinct_labels: coefficients.len(),
        out_of_range_terms,
        vanishing_labels,
    })
}
