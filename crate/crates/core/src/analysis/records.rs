//! Table layouts for everything the command line emits.

use super::io::{parse_value, parse_opt_real, parse_real, Field, Record};
use super::suite::IdentityOutcome;
use super::{DlWindow, ScanRow, ThetaPoint};
use crate::asymptotics::AsymptoticBreakdown;
use crate::geometry::TetGeometry;
use crate::recursion::ResidualReport;
use crate::wigner::{sixj_exact, SixJLabels};

fn labels(cell: &str) -> Result<SixJLabels, String> {
    SixJLabels::parse(cell).map_err(|e| e.to_string())
}

impl Record for ScanRow {
    const HEADER: &'static [&'static str] = &[
        "scale",
        "labels",
        "exact",
        "leading",
        "envelope",
        "abs_err",
        "env_normalized_err",
        "regge_phase",
        "b0",
        "b1",
    ];

    fn fields(&self) -> Vec<Field> {
        vec![
            Field::Int(i64::from(self.scale)),
            Field::Text(self.labels.to_string()),
            Field::Real(self.exact),
            Field::Real(self.leading),
            Field::Real(self.envelope),
            Field::Real(self.abs_err),
            Field::Real(self.env_normalized_err),
            Field::Real(self.regge_phase),
            Field::OptReal(self.b0),
            Field::OptReal(self.b1),
        ]
    }

    fn from_cells(c: &[String]) -> Result<Self, String> {
        Ok(ScanRow {
            scale: parse_value(&c[0])?,
            labels: labels(&c[1])?,
            exact: parse_real(&c[2])?,
            leading: parse_real(&c[3])?,
            envelope: parse_real(&c[4])?,
            abs_err: parse_real(&c[5])?,
            env_normalized_err: parse_real(&c[6])?,
            regge_phase: parse_real(&c[7])?,
            b0: parse_opt_real(&c[8])?,
            b1: parse_opt_real(&c[9])?,
        })
    }
}

impl Record for DlWindow {
    const HEADER: &'static [&'static str] = &["first_scale", "last_scale", "center", "b0", "b1", "rms_residual"];

    fn fields(&self) -> Vec<Field> {
        vec![
            Field::Int(i64::from(self.first_scale)),
            Field::Int(i64::from(self.last_scale)),
            Field::Real(self.center),
            Field::Real(self.b0),
            Field::Real(self.b1),
            Field::Real(self.rms_residual),
        ]
    }

    fn from_cells(c: &[String]) -> Result<Self, String> {
        Ok(DlWindow {
            first_scale: parse_value(&c[0])?,
            last_scale: parse_value(&c[1])?,
            center: parse_real(&c[2])?,
            b0: parse_real(&c[3])?,
            b1: parse_real(&c[4])?,
            rms_residual: parse_real(&c[5])?,
        })
    }
}

impl Record for ThetaPoint {
    const HEADER: &'static [&'static str] = &["scale", "exact", "asymptotic", "rel_err"];

    fn fields(&self) -> Vec<Field> {
        vec![
            Field::Int(i64::from(self.scale)),
            Field::Real(self.exact),
            Field::Real(self.asymptotic),
            Field::Real(self.rel_err),
        ]
    }

    fn from_cells(c: &[String]) -> Result<Self, String> {
        Ok(ThetaPoint {
            scale: parse_value(&c[0])?,
            exact: parse_real(&c[1])?,
            asymptotic: parse_real(&c[2])?,
            rel_err: parse_real(&c[3])?,
        })
    }
}

impl Record for IdentityOutcome {
    const HEADER: &'static [&'static str] = &["identity", "samples", "tolerance", "worst", "passed"];

    fn fields(&self) -> Vec<Field> {
        vec![
            Field::Text(self.name.to_string()),
            Field::Int(self.samples as i64),
            Field::Real(self.tolerance),
            Field::Real(self.worst),
            Field::Bool(self.passed),
        ]
    }

    fn from_cells(c: &[String]) -> Result<Self, String> {
        Ok(IdentityOutcome {
            name: c[0].clone(),
            samples: parse_value(&c[1])?,
            tolerance: parse_real(&c[2])?,
            worst: parse_real(&c[3])?,
            passed: parse_value(&c[4])?,
        })
    }
}

/// Exact value of one symbol.
#[derive(Debug, Clone, PartialEq)]
pub struct SixjRow {
    pub labels: SixJLabels,
    /// `±sqrt(p/q)` or `0`.
    pub exact: String,
    pub value: f64,
}

impl SixjRow {
    pub fn new(labels: &SixJLabels) -> Self {
        let v = sixj_exact(labels);
        SixjRow { labels: *labels, exact: v.to_string(), value: v.to_f64() }
    }
}

impl Record for SixjRow {
    const HEADER: &'static [&'static str] = &["labels", "exact", "value"];

    fn fields(&self) -> Vec<Field> {
        vec![Field::Text(self.labels.to_string()), Field::Text(self.exact.clone()), Field::Real(self.value)]
    }

    fn from_cells(c: &[String]) -> Result<Self, String> {
        Ok(SixjRow { labels: labels(&c[0])?, exact: c[1].clone(), value: parse_real(&c[2])? })
    }
}

/// Derived tetrahedron, flattened.
#[derive(Debug, Clone, PartialEq)]
pub struct GeometryRow {
    pub lengths: [f64; 6],
    pub volume: f64,
    pub areas: [f64; 4],
    pub theta: [f64; 6],
    pub norm: f64,
    pub lambda: f64,
    pub gram_determinant: f64,
}

impl From<&TetGeometry> for GeometryRow {
    fn from(g: &TetGeometry) -> Self {
        GeometryRow {
            lengths: g.lengths.values(),
            volume: g.volume,
            areas: g.areas,
            theta: g.theta,
            norm: g.norm(),
            lambda: g.lambda,
            gram_determinant: g.gram_determinant(),
        }
    }
}

impl Record for GeometryRow {
    const HEADER: &'static [&'static str] = &[
        "l12", "l13", "l14", "l23", "l24", "l34", "volume", "s1", "s2", "s3", "s4", "theta12", "theta13", "theta14",
        "theta23", "theta24", "theta34", "norm", "lambda", "gram_det",
    ];

    fn fields(&self) -> Vec<Field> {
        let mut f: Vec<Field> = self.lengths.iter().map(|&x| Field::Real(x)).collect();
        f.push(Field::Real(self.volume));
        f.extend(self.areas.iter().map(|&x| Field::Real(x)));
        f.extend(self.theta.iter().map(|&x| Field::Real(x)));
        f.extend([Field::Real(self.norm), Field::Real(self.lambda), Field::Real(self.gram_determinant)]);
        f
    }

    fn from_cells(c: &[String]) -> Result<Self, String> {
        let r = |k: usize| parse_real(&c[k]);
        Ok(GeometryRow {
            lengths: [r(0)?, r(1)?, r(2)?, r(3)?, r(4)?, r(5)?],
            volume: r(6)?,
            areas: [r(7)?, r(8)?, r(9)?, r(10)?],
            theta: [r(11)?, r(12)?, r(13)?, r(14)?, r(15)?, r(16)?],
            norm: r(17)?,
            lambda: r(18)?,
            gram_determinant: r(19)?,
        })
    }
}

/// Leading asymptotics next to the exact value.
#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticRow {
    pub labels: SixJLabels,
    pub exact: f64,
    pub breakdown: AsymptoticBreakdown,
}

impl Record for AsymptoticRow {
    const HEADER: &'static [&'static str] = &[
        "labels",
        "exact",
        "envelope",
        "regge_phase",
        "edge_nlo_phase",
        "leading",
        "leading_plus_edge_nlo",
        "volume",
    ];

    fn fields(&self) -> Vec<Field> {
        let b = &self.breakdown;
        vec![
            Field::Text(self.labels.to_string()),
            Field::Real(self.exact),
            Field::Real(b.envelope),
            Field::Real(b.regge_phase),
            Field::Real(b.edge_nlo_phase),
            Field::Real(b.leading),
            Field::Real(b.leading_plus_edge_nlo),
            Field::Real(b.volume),
        ]
    }

    fn from_cells(c: &[String]) -> Result<Self, String> {
        let r = |k: usize| parse_real(&c[k]);
        Ok(AsymptoticRow {
            labels: labels(&c[0])?,
            exact: r(1)?,
            breakdown: AsymptoticBreakdown {
                envelope: r(2)?,
                regge_phase: r(3)?,
                edge_nlo_phase: r(4)?,
                leading: r(5)?,
                leading_plus_edge_nlo: r(6)?,
                volume: r(7)?,
            },
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RecursionRow {
    pub labels: SixJLabels,
    pub report: ResidualReport,
}

impl Record for RecursionRow {
    const HEADER: &'static [&'static str] = &[
        "labels",
        "residual",
        "normalized_residual",
        "normalized_term_scale",
        "terms",
        "distinct_labels",
        "out_of_range_terms",
        "vanishing_labels",
    ];

    fn fields(&self) -> Vec<Field> {
        let r = &self.report;
        vec![
            Field::Text(self.labels.to_string()),
            Field::Real(r.residual),
            Field::Real(r.normalized_residual),
            Field::Real(r.normalized_term_scale),
            Field::Int(r.terms as i64),
            Field::Int(r.distinct_labels as i64),
            Field::Int(r.out_of_range_terms as i64),
            Field::Int(r.vanishing_labels as i64),
        ]
    }

    fn from_cells(c: &[String]) -> Result<Self, String> {
        Ok(RecursionRow {
            labels: labels(&c[0])?,
            report: ResidualReport {
                residual: parse_real(&c[1])?,
                normalized_residual: parse_real(&c[2])?,
                normalized_term_scale: parse_real(&c[3])?,
                terms: parse_value(&c[4])?,
                distinct_labels: parse_value(&c[5])?,
                out_of_range_terms: parse_value(&c[6])?,
                vanishing_labels: parse_value(&c[7])?,
            },
        })
    }
}
