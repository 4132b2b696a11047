//! Scaling sweeps, coefficient fits and randomized identity checks.

pub mod io;
pub mod records;
pub mod suite;

pub use io::{read_records, write_records, OutputFormat, Record, RecordError};
pub use suite::{run_identity_suite, IdentityOutcome, IdentityReport, TetSampler};

use std::f64::consts::{FRAC_PI_4, PI};

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use thiserror::Error;

use crate::asymptotics::{pr_leading, AsymptoticError};
use crate::geometry::GeometryError;
use crate::recursion::RecursionError;
use crate::spin::{Spin, SpinError};
use crate::wigner::{sixj_exact, theta_norm, LabelError, SixJLabels};

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalysisError {
    #[error("window must hold at least 2 rows, got {0}")]
    WindowTooSmall(usize),
    #[error("phases are degenerate in the window of scales {first}..={last}; widen the window")]
    SingularWindow { first: u32, last: u32 },
    #[error("scale {scale}: {source}")]
    Labels { scale: u32, source: LabelError },
    #[error("scale {scale}: {source}")]
    Asymptotic { scale: u32, source: AsymptoticError },
    #[error("scale {scale} overflows the spin range")]
    Overflow { scale: u32 },
}

/// Every failure the command-line surface can report.
#[derive(Debug, Error)]
pub enum ToolkitError {
    #[error(transparent)]
    Spin(#[from] SpinError),
    #[error(transparent)]
    Labels(#[from] LabelError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Asymptotic(#[from] AsymptoticError),
    #[error(transparent)]
    Recursion(#[from] RecursionError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error(transparent)]
    Record(#[from] RecordError),
    #[error("{0}")]
    Usage(String),
    #[error("verification failed: {0}")]
    Verification(String),
}

fn geometry_exit_code(e: &GeometryError) -> i32 {
    match e {
        GeometryError::BadLength { .. } => 2,
        _ => 3,
    }
}

fn asymptotic_exit_code(e: &AsymptoticError) -> i32 {
    match e {
        AsymptoticError::Geometry(g) => geometry_exit_code(g),
        AsymptoticError::NearDegenerateAngle(_) => 3,
        AsymptoticError::Resolution { .. } => 2,
    }
}

fn recursion_exit_code(e: &RecursionError) -> i32 {
    match e {
        RecursionError::Geometry(g) => geometry_exit_code(g),
        RecursionError::Term { source, .. } => recursion_exit_code(source),
        RecursionError::Face { .. } => 3,
        RecursionError::NegativeSpin { .. } => 2,
    }
}

impl ToolkitError {
    /// 0 ok, 1 verification failure, 2 invalid input, 3 degenerate geometry.
    pub fn exit_code(&self) -> i32 {
        match self {
            ToolkitError::Verification(_) => 1,
            ToolkitError::Geometry(e) => geometry_exit_code(e),
            ToolkitError::Asymptotic(e) | ToolkitError::Analysis(AnalysisError::Asymptotic { source: e, .. }) => {
                asymptotic_exit_code(e)
            }
            ToolkitError::Recursion(e) => recursion_exit_code(e),
            _ => 2,
        }
    }
}

/// Parses `8,16,32`, `8..512` (inclusive) or a comma list mixing both.
pub fn parse_scales(text: &str) -> Result<Vec<u32>, String> {
    let int = |t: &str| t.trim().parse::<u32>().map_err(|_| format!("bad scale {t:?}"));
    let mut out = vec![];
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        match part.split_once("..") {
            Some((a, b)) => {
                let (a, b) = (int(a)?, int(b.trim_start_matches('='))?);
                if a > b {
                    return Err(format!("empty range {part:?}"));
                }
                out.extend(a..=b);
            }
            None => out.push(int(part)?),
        }
    }
    Ok(out)
}

/// How a sweep scales its base labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ScaleMode {
    /// `j -> m j`.
    #[default]
    Spins,
    /// `l -> m l`, so `2j + 1 -> m (2j + 1)`.
    Lengths,
}

pub fn scale_labels(base: &SixJLabels, m: u32, mode: ScaleMode) -> Result<SixJLabels, AnalysisError> {
    let scale = |s: Spin| -> Option<u32> {
        match mode {
            ScaleMode::Spins => s.two_j().checked_mul(m),
            ScaleMode::Lengths => s.two_l().checked_mul(m)?.checked_sub(1),
        }
    };
    let mut two = [0u32; 6];
    for (t, s) in two.iter_mut().zip(base.spins()) {
        *t = scale(s).ok_or(AnalysisError::Overflow { scale: m })?;
    }
    SixJLabels::from_twice(two).map_err(|source| AnalysisError::Labels { scale: m, source })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanRow {
    pub scale: u32,
    pub labels: SixJLabels,
    pub exact: f64,
    pub leading: f64,
    pub envelope: f64,
    pub abs_err: f64,
    /// `|exact - leading| / envelope`.
    pub env_normalized_err: f64,
    /// `Σ l θ`.
    pub regge_phase: f64,
    pub b0: Option<f64>,
    pub b1: Option<f64>,
}

fn scan_row(base: &SixJLabels, m: u32, mode: ScaleMode) -> Result<ScanRow, AnalysisError> {
    let labels = scale_labels(base, m, mode)?;
    let b = pr_leading(&labels).map_err(|source| AnalysisError::Asymptotic { scale: m, source })?;
    let exact = sixj_exact(&labels).to_f64();
    let abs_err = (exact - b.leading).abs();
    Ok(ScanRow {
        scale: m,
        labels,
        exact,
        leading: b.leading,
        envelope: b.envelope,
        abs_err,
        env_normalized_err: abs_err / b.envelope,
        regge_phase: b.regge_phase,
        b0: None,
        b1: None,
    })
}

/// One row per scale, in input order. The first failing scale is reported.
pub fn scan_asymptotics(base: &SixJLabels, scales: &[u32], mode: ScaleMode) -> Result<Vec<ScanRow>, AnalysisError> {
    let rows: Vec<_> = scales.par_iter().map(|&m| scan_row(base, m, mode)).collect();
    rows.into_iter().collect()
}

/// Least-squares `(B₀, B₁)` on one window of a sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DlWindow {
    pub first_scale: u32,
    pub last_scale: u32,
    /// Mean scale of the window.
    pub center: f64,
    pub b0: f64,
    pub b1: f64,
    /// RMS of the fit residual in envelope units.
    pub rms_residual: f64,
}

/// Fits `exact / envelope ≈ B₀ cos(Φ + π/4) + B₁ sin(Φ + π/4)` on consecutive,
/// non-overlapping windows; trailing rows that do not fill a window are left out.
pub fn fit_dl_coefficients(rows: &[ScanRow], window: usize) -> Result<Vec<DlWindow>, AnalysisError> {
    if window < 2 {
        return Err(AnalysisError::WindowTooSmall(window));
    }
    rows.chunks_exact(window).map(fit_window).collect()
}

fn fit_window(chunk: &[ScanRow]) -> Result<DlWindow, AnalysisError> {
    let (first, last) = (chunk[0].scale, chunk[chunk.len() - 1].scale);
    let a = DMatrix::from_fn(chunk.len(), 2, |r, c| {
        let phase = chunk[r].regge_phase + FRAC_PI_4;
        if c == 0 { phase.cos() } else { phase.sin() }
    });
    let y = DVector::from_iterator(chunk.len(), chunk.iter().map(|r| r.exact / r.envelope));
    let svd = a.clone().svd(true, true);
    let (smax, smin) = (svd.singular_values.max(), svd.singular_values.min());
    if !(smin > 1e-10 * smax) {
        return Err(AnalysisError::SingularWindow { first, last });
    }
    let coef = svd.solve(&y, 0.0).map_err(|_| AnalysisError::SingularWindow { first, last })?;
    let resid = &a * &coef - &y;
    Ok(DlWindow {
        first_scale: first,
        last_scale: last,
        center: chunk.iter().map(|r| f64::from(r.scale)).sum::<f64>() / chunk.len() as f64,
        b0: coef[0],
        b1: coef[1],
        rms_residual: resid.norm() / (chunk.len() as f64).sqrt(),
    })
}

/// Copies each window's coefficients onto its rows.
pub fn attach_fits(rows: &mut [ScanRow], fits: &[DlWindow], window: usize) {
    for (chunk, fit) in rows.chunks_exact_mut(window).zip(fits) {
        for row in chunk {
            row.b0 = Some(fit.b0);
            row.b1 = Some(fit.b1);
        }
    }
}

/// Exact `C_a C_b C_c Θ` against `C_a C_b C_c / (2 π S)` for a triad scaled by `m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaPoint {
    pub scale: u32,
    pub exact: f64,
    pub asymptotic: f64,
    pub rel_err: f64,
}

/// The triad is given in twice-spins; it must stay admissible with an even sum when scaled.
pub fn theta_scan(two_j: [u32; 3], scales: &[u32]) -> Result<Vec<ThetaPoint>, GeometryError> {
    scales
        .iter()
        .map(|&m| {
            let s = two_j.map(|t| Spin::from_twice(t * m));
            let theta = theta_norm(s[0], s[1], s[2]);
            let exact = theta.normalized();
            let l = s.map(|x| x.length());
            let p = (l[0] + l[1] + l[2]) / 2.0;
            let area_sq = p * (p - l[0]) * (p - l[1]) * (p - l[2]);
            if !(area_sq > 0.0) {
                return Err(GeometryError::FaceInequality { face: 1, area_sq });
            }
            let asymptotic = theta.cj_product.to_f64() / (2.0 * PI * area_sq.sqrt());
            Ok(ThetaPoint { scale: m, exact, asymptotic, rel_err: (exact / asymptotic - 1.0).abs() })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn equilateral(j: u32) -> SixJLabels {
        SixJLabels::new([Spin::integer(j); 6]).unwrap()
    }

    #[test]
    fn slope_of_power_law() {
        let x = [1.0, 2.0, 4.0, 8.0];
        let y: Vec<f64> = x.iter().map(|v: &f64| 3.0 * v.powf(-1.5)).collect();
        assert!((loglog_slope(&x, &y) + 1.5).abs() < 1e-12);
    }

    #[test]
    fn scan_examples() {
        assert!(scan_asymptotics(&equilateral(1), &[], ScaleMode::Spins).unwrap().is_empty());
        let rows = scan_asymptotics(&equilateral(1), &[1, 4, 2], ScaleMode::Spins).unwrap();
        assert_eq!(rows.iter().map(|r| r.scale).collect::<Vec<_>>(), [1, 4, 2]);
        assert!((rows[0].exact - 1.0 / 6.0).abs() < 1e-15);
        for r in &rows {
            assert_eq!(r.env_normalized_err, (r.exact - r.leading).abs() / r.envelope);
        }
        // l = 1/2 scaled to integer l: every triad sum is odd
        let half = SixJLabels::from_twice([1, 1, 2, 2, 1, 1]).unwrap();
        assert!(scan_asymptotics(&half, &[2], ScaleMode::Lengths).is_err());
        assert_eq!(scale_labels(&half, 3, ScaleMode::Lengths).unwrap().spins()[2], Spin::from_twice(8));
    }

    #[test]
    fn fit_recovers_generator() {
        let rows: Vec<ScanRow> = (0..24)
            .map(|k| {
                let phase = 0.7 + 1.37 * f64::from(k);
                let envelope = 0.1 / (1.0 + f64::from(k));
                ScanRow {
                    scale: k,
                    labels: equilateral(1),
                    exact: envelope * (phase + FRAC_PI_4).cos(),
                    leading: 0.0,
                    envelope,
                    abs_err: 0.0,
                    env_normalized_err: 0.0,
                    regge_phase: phase,
                    b0: None,
                    b1: None,
                }
            })
            .collect();
        let fits = fit_dl_coefficients(&rows, 8).unwrap();
        assert_eq!(fits.len(), 3);
        for f in &fits {
            assert!((f.b0 - 1.0).abs() < 1e-12 && f.b1.abs() < 1e-12);
        }
        assert_eq!(fit_dl_coefficients(&rows, 1), Err(AnalysisError::WindowTooSmall(1)));
        let mut flat = rows.clone();
        for r in &mut flat {
            r.regge_phase = 0.3;
        }
        assert!(matches!(fit_dl_coefficients(&flat, 4), Err(AnalysisError::SingularWindow { first: 0, last: 3 })));
        let mut attached = rows;
        attach_fits(&mut attached, &fits, 8);
        assert!(attached.iter().all(|r| r.b0.is_some()));
    }

    #[test]
    fn theta_scan_decays() {
        let pts = theta_scan([4, 6, 6], &[4, 8, 16, 32]).unwrap();
        let l: Vec<f64> = pts.iter().map(|p| f64::from(p.scale)).collect();
        let e: Vec<f64> = pts.iter().map(|p| p.rel_err).collect();
        assert!((loglog_slope(&l, &e) + 2.0).abs() < 0.3);
    }

    #[test]
    fn scale_grammar() {
        assert_eq!(parse_scales("8..11").unwrap(), [8, 9, 10, 11]);
        assert_eq!(parse_scales("1, 4,2..=3").unwrap(), [1, 4, 2, 3]);
        assert!(parse_scales("").unwrap().is_empty());
        assert!(parse_scales("5..2").is_err() && parse_scales("x").is_err());
    }

    #[test]
    fn exit_codes() {
        let degenerate = ToolkitError::Geometry(GeometryError::Degenerate { volume_sq: 0.0 });
        assert_eq!(degenerate.exit_code(), 3);
        assert_eq!(ToolkitError::Verification("x".into()).exit_code(), 1);
        assert_eq!(ToolkitError::Labels(LabelError::Count(5)).exit_code(), 2);
    }
}
