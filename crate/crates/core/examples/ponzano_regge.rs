// Exact 6j against `cos(Σ l θ + π/4) / sqrt(12 π V)` along an equilateral family.

use std::error::Error;

use sixj::analysis::{loglog_slope, scan_asymptotics, ScaleMode};
use sixj::asymptotics::pr_leading;
use sixj::SixJLabels;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let irregular = SixJLabels::parse("20,24,18,22,26,21")?;
    let b = pr_leading(&irregular)?;
    println!("{{20 24 18; 21 26 22}}: exact {:.6e}, leading {:.6e}, with edge phase {:.6e}",
        sixj::sixj_exact(&irregular).to_f64(), b.leading, b.leading_plus_edge_nlo);

    let base = SixJLabels::parse("1,1,1,1,1,1")?;
    let scales: Vec<u32> = (8..=128).collect();
    let rows = scan_asymptotics(&base, &scales, ScaleMode::Spins)?;
    for r in rows.iter().step_by(30) {
        println!("j = {:>3}: exact {:+.6e} leading {:+.6e} err/envelope {:.2e}", r.scale, r.exact, r.leading, r.env_normalized_err);
    }
    let m: Vec<f64> = rows.iter().map(|r| f64::from(r.scale)).collect();
    let e: Vec<f64> = rows.iter().map(|r| r.env_normalized_err).collect();
    println!("slope of err/envelope: {:.3}", loglog_slope(&m, &e));
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
