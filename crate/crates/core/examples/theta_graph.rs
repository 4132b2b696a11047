// Theta-graph values against their area asymptotics, and the Γ-continued form.

use std::error::Error;

use sixj::analysis::{loglog_slope, theta_scan};
use sixj::wigner::{theta_norm, theta_norm_continuous};
use sixj::Spin;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let t = theta_norm(Spin::integer(1), Spin::integer(1), Spin::integer(2));
    println!("Θ(1,1,2) = {} with C-product {:.6}, normalized {:.12e}", t.value, t.cj_product.to_f64(), t.normalized());
    println!("continued at l = (1.5, 1.5, 2.5): {:.12e}", theta_norm_continuous(1.5, 1.5, 2.5)?);

    let pts = theta_scan([4, 6, 6], &[2, 4, 8, 16, 32, 64])?;
    for p in &pts {
        println!("m = {:>2}: exact {:.6e}  asymptotic {:.6e}  rel err {:.2e}", p.scale, p.exact, p.asymptotic, p.rel_err);
    }
    let m: Vec<f64> = pts.iter().map(|p| f64::from(p.scale)).collect();
    let e: Vec<f64> = pts.iter().map(|p| p.rel_err).collect();
    println!("slope {:.3}", loglog_slope(&m, &e));
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
