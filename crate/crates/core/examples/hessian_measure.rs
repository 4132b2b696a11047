// The kinetic matrix at the stationary point and the measure it produces.

use std::error::Error;

use sixj::asymptotics::{build_hessian, equilateral_reference_matrix, hessian_determinant_check, signature};
use sixj::geometry::EdgeLengths;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let h = build_hessian(&EdgeLengths::regular(1.0))?;
    println!("regular: |K Kinv - I| = {:.1e}, c = {:.10} (spread {:.1e})", h.inverse_residual(), h.c, h.c_spread);
    println!("signature (+, -) = {:?}", h.signature());
    println!("reference matrix signature = {:?}", signature(&equilateral_reference_matrix()));

    for l in [[1.0; 6], [1.0, 1.2, 0.9, 1.1, 1.3, 1.05], [1.4, 0.8, 1.1, 1.0, 1.6, 1.2]] {
        let (m, f) = hessian_determinant_check(&EdgeLengths::new(l)?)?;
        println!("|det Kinv| = {m:.9e}, Π S² / (2·3⁷ |l|² V⁷) = {f:.9e}, rel {:.1e}", (m - f).abs() / f);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
