//! Builds a sparse quartic system and evaluates its right-hand side,
//! including the homogeneity scaling `f(lambda z) = lambda^M f(z)`.
//!
//! ```bash
//! cargo run -p polyode --example evaluate_rhs
//! ```

use polyode::{scale_state, Complex64, PolynomialSystem, StateVector};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let c = Complex64::new;
    let system = PolynomialSystem::new(2, 4)?
        .with(0, &[4, 0], c(1.0, 0.0))?
        .with(0, &[1, 3], c(0.0, -2.0))?
        .with(1, &[2, 2], c(0.5, 0.5))?;
    println!("{} stored coefficients", system.num_terms());
    for (eq, idx, coef) in system.iter() {
        println!("  c[{}, ({idx})] = {coef}", eq + 1);
    }

    let z: StateVector = vec![c(0.5, 0.25), c(-1.0, 0.75)].into();
    let f = system.evaluate_rhs(&z)?;
    println!("f(z) = [{}, {}]", f[0], f[1]);

    let lambda = c(0.3, 1.1);
    let scaled = system.evaluate_rhs(&scale_state(&z, lambda))?;
    let expected = scale_state(&f, lambda.powu(4));
    let gap = scaled
        .iter()
        .zip(expected.iter())
        .map(|(a, b)| (a - b).norm() / b.norm())
        .fold(0.0, f64::max);
    println!("homogeneity relative gap: {gap:.2e}");
    assert!(gap < 1e-12);
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
