//! Solves the constraints for different choices of unknowns on a two-variable
//! quartic system: two coefficients with `K` given, then `K` plus one coefficient.
//!
//! ```bash
//! cargo run -p polyode --example solve_linear
//! ```

use polyode::generate::{random_free_coefficients, random_state, rng, unit_square};
use polyode::{solve_linear_selection, UnknownSelection};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let mut rng = rng(3);
    let z0 = random_state(2, &mut rng);
    let system = random_free_coefficients(2, 4, 1.0, &mut rng)?;
    let k = unit_square(&mut rng);
    println!("z0 = [{}, {}], K = {k}", z0[0], z0[1]);

    let two_coefficients: UnknownSelection = "c:1:4-0,c:2:0-4".parse()?;
    let inst = solve_linear_selection(&system, &z0, Some(k), &two_coefficients)?;
    println!("\nunknowns {two_coefficients}");
    for slot in two_coefficients.slots() {
        if let polyode::UnknownSlot::Coefficient { eq, index } = slot {
            println!(
                "  c[{}, ({index})] = {}",
                eq + 1,
                inst.system().coefficient(*eq, index)
            );
        }
    }
    println!("  residual {:.2e}", inst.residual().max_modulus());

    // K becomes an unknown; the coefficient c[2,(0,4)] keeps its drawn value
    let with_k: UnknownSelection = "K,c:1:2-2".parse()?;
    let inst = solve_linear_selection(&system, &z0, None, &with_k)?;
    println!("\nunknowns {with_k}");
    println!("  K = {}", inst.k());
    println!("  residual {:.2e}", inst.residual().max_modulus());
    assert!(inst.residual().max_modulus() < 1e-10);
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
