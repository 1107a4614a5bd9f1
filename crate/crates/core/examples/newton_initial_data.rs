//! Finds initial data compatible with a fixed system and rate `K` by damped Newton.
//!
//! ```bash
//! cargo run -p polyode --example newton_initial_data
//! ```

use polyode::generate::{rng, unit_square};
use polyode::polysys::enumerate_multi_indices;
use polyode::{
    constraint_residual, newton_solve_initial_data, Complex64, PolynomialSystem, StateVector,
};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let c = Complex64::new;

    // Decoupled quadratic: K z_n = -c_n z_n^2 has the root z_n = -K / c_n.
    let diagonal = PolynomialSystem::new(2, 2)?
        .with(0, &[2, 0], c(1.0, 0.0))?
        .with(1, &[0, 2], c(2.0, 0.0))?;
    let guess: StateVector = vec![c(-0.9, 0.0), c(-0.4, 0.0)].into();
    let out = newton_solve_initial_data(&diagonal, c(1.0, 0.0), &guess, 1e-14, 50)?;
    println!(
        "decoupled root: [{}, {}] after {} steps",
        out.z0[0], out.z0[1], out.iterations
    );

    // Dense cubic system in three variables from several starts.
    let mut rng = rng(11);
    let mut dense = PolynomialSystem::new(3, 3)?;
    for eq in 0..3 {
        for idx in enumerate_multi_indices(3, 3)? {
            dense.set(eq, idx, unit_square(&mut rng))?;
        }
    }
    let k = c(1.0, 0.0);
    let mut converged = 0;
    for start in 0..10 {
        let guess: StateVector = (0..3)
            .map(|_| {
                Complex64::from_polar(
                    1.0,
                    rand::Rng::gen_range(&mut rng, 0.0..std::f64::consts::TAU),
                )
            })
            .collect();
        match newton_solve_initial_data(&dense, k, &guess, 1e-12, 100) {
            Ok(out) => {
                let check = constraint_residual(&dense, &out.z0, k)?.max_modulus();
                println!(
                    "start {start}: converged in {:>2} steps, residual {check:.1e}",
                    out.iterations
                );
                converged += 1;
            }
            Err(e) => println!("start {start}: {e}"),
        }
    }
    println!("{converged}/10 starts converged");
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
