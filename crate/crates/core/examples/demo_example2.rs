//! The periodic demo: a quartic instance with `|K| = 0.1`, rotated with `omega = 1`.
//!
//! ```bash
//! cargo run -p polyode --example demo_example2
//! ```

use polyode::demo;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let ex = demo::example2()?;
    println!("K = {}", ex.instance.k());
    println!("real constraint residuals {:?}", ex.real_residuals);
    println!(
        "period: q = {}, k = {}, T = {:.6}, closure {:.1e}",
        ex.period.q, ex.period.k, ex.period.period, ex.period.closure_error
    );
    println!(
        "integrator vs closed form over one base period: {:.2e}",
        ex.verification.max_deviation
    );
    println!("integrated closure after T: {:.2e}", ex.integrated_closure);
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
