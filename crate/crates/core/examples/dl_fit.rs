// Windowed fits of `exact · sqrt(12 π V)` against the cosine and sine of the Regge phase.

use std::error::Error;

use sixj::analysis::{fit_dl_coefficients, loglog_slope, scan_asymptotics, write_records, OutputFormat, ScaleMode};
use sixj::SixJLabels;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let base = SixJLabels::parse("1,1,1,1,1,1")?;
    let scales: Vec<u32> = (8..=263).collect();
    let rows = scan_asymptotics(&base, &scales, ScaleMode::Spins)?;
    let fits = fit_dl_coefficients(&rows, 16)?;
    write_records(&fits, OutputFormat::Csv, std::io::stdout().lock())?;

    let center: Vec<f64> = fits.iter().map(|f| f.center).collect();
    let b1: Vec<f64> = fits.iter().map(|f| (f.b1 / f.b0).abs()).collect();
    println!("B0 at the last window: {:.7}", fits.last().map_or(f64::NAN, |f| f.b0));
    println!("slope of |B1/B0|: {:.3}", loglog_slope(&center, &b1));
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
