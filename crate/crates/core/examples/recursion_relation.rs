// Residual of the shift-operator recursion under both normalizations.

use std::error::Error;

use sixj::recursion::{recursion_residual, Normalization, RecursionStencil};
use sixj::SixJLabels;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let theta = [1.1f64, 1.7, 2.0, 1.4, 1.9, 1.2];
    println!("stencil of {} terms, expanded on angles: {:.6}", RecursionStencil::shared().terms.len(),
        RecursionStencil::shared().expand_on_angles(&theta));

    for text in ["10,10,10,10,10,10", "4,5,6,7,4,5", "32,32,32,32,32,32"] {
        let labels = SixJLabels::parse(text)?;
        for conv in [Normalization::ThetaGraph, Normalization::WithEdgeFactors] {
            let r = recursion_residual(&labels, conv)?;
            println!("{text:<20} {conv:<16?} residual {:+.3e}  (cancelled terms of size {:.1})",
                r.normalized_residual, r.normalized_term_scale);
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
