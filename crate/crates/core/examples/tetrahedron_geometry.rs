// Volume, areas and dihedral angles from six edge lengths, checked three ways.

use std::error::Error;

use sixj::geometry::{
    build_geometry, check_det_prime_gram, default_step, det_prime6, det_prime_dtheta_formula, dtheta_dl,
    embed_and_extract_angles, EdgeLengths,
};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let lengths = EdgeLengths::new([1.0, 1.2, 0.9, 1.1, 1.3, 1.05])?;
    let g = build_geometry(&lengths)?;
    println!("V = {:.12}", g.volume);
    println!("S = {:.12?}", g.areas);
    println!("theta = {:.12?}", g.theta);
    println!("lambda = {:.12}, det G = {:.1e}", g.lambda, g.gram_determinant());

    let (lhs, rhs) = check_det_prime_gram(&g);
    println!("det' G: {lhs:.12e} vs closed form {rhs:.12e}");

    let jac = dtheta_dl(&lengths, default_step(&lengths))?;
    println!("det' dtheta/dl: {:.9e} vs {:.9e}", det_prime6(&jac), det_prime_dtheta_formula(&g));

    // the same angles as rotations between outward normals of an embedding
    let (tet, angles, _) = embed_and_extract_angles(&lengths)?;
    let worst = angles.iter().zip(g.theta).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    println!("embedding: closure {:.1e}, angle mismatch {worst:.1e}", tet.closure_residual());
    if worst > 1e-10 {
        return Err("embedding angles disagree".into());
    }

    // a flat configuration is refused
    let flat = EdgeLengths::new([1.0, 1.0, 1.0, 1.0, 1.0, 2.0])?;
    println!("flat input: {}", build_geometry(&flat).unwrap_err());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
