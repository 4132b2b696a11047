// The single-edge integral: exact quadrature, Legendre closed form and stationary points.

use std::error::Error;

use sixj::asymptotics::{edge_amplitude_quadrature, edge_stationary_sum, edge_stationary_sum_leading};
use sixj::wigner::{c_norm, legendre_p};
use sixj::Spin;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let half_angle = 0.5f64;
    for j in [0u32, 1, 5, 20] {
        let q = edge_amplitude_quadrature(Spin::integer(j), half_angle);
        let exact = c_norm(Spin::integer(j)).to_f64() * legendre_p(j, (2.0 * half_angle).cos());
        println!("j = {j:>2}: quadrature {:+.15e} (imag {:.0e}), C_j P_j {exact:+.15e}", q.re, q.im);
    }

    let theta = 1.0f64;
    for j in [25u32, 50, 100, 200] {
        let exact = c_norm(Spin::integer(j)).to_f64() * legendre_p(j, theta.cos());
        let lead = edge_stationary_sum_leading(Spin::integer(j), theta)?;
        let nlo = edge_stationary_sum(Spin::integer(j), theta)?;
        println!("j = {j:>3}: error leading {:.2e}, with -cot/(8l) phase {:.2e}", (lead - exact).abs(), (nlo - exact).abs());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
