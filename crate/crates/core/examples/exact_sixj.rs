// Exact 6j values, their symmetries and the orthogonality sum rule.

use std::error::Error;

use sixj::wigner::orthogonality_sum;
use sixj::{parse_spin, sixj_exact, SixJLabels};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    for text in ["1,1,1,1,1,1", "1/2,1/2,1,1,1/2,1/2", "2,2,2,2,2,2", "100,100,100,100,100,100"] {
        let labels = SixJLabels::parse(text)?;
        let v = sixj_exact(&labels);
        println!("{{{text}}} = {:.16e}", v.to_f64());
        if text.len() < 16 {
            println!("    exactly {v}");
        }
        // every relabelling of the tetrahedron gives the same value
        if labels.symmetries().iter().any(|s| sixj_exact(s) != v) {
            return Err("symmetry broken".into());
        }
    }

    let s = |t: &str| parse_spin(t);
    let (a, b, c, d, p) = (s("1")?, s("3/2")?, s("2")?, s("3/2")?, s("3/2")?);
    let sum = orthogonality_sum(a, b, c, d, p, p);
    println!("sum_x (2x+1) {{1 3/2 x; 2 3/2 3/2}}^2 = {sum}");
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
