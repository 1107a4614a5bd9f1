//! The two-variable quartic demo: eight seeded coefficients, `K` and `z0` are
//! drawn, the remaining two coefficients are solved for, and the closed form
//! `z0 (1 + K t)^(-1/3)` is checked against integration.
//!
//! ```bash
//! cargo run -p polyode --example demo_example1
//! ```

use polyode::demo;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let ex = demo::example1()?;
    println!("K = {}", ex.instance.k());
    println!("constraint residual {:.2e}", ex.residual);
    println!(
        "integrator deviation {:.2e} over [0, {}] ({} samples, {} accepted steps)",
        ex.verification.max_deviation,
        ex.verification.t_end,
        ex.verification.samples,
        ex.verification.integrated.stats.accepted
    );
    let gap = demo::log_ratio_gap(&ex.instance, &ex.verification.closed_form.times)?;
    println!("exponent check (log-ratio gap) {gap:.2e}");

    let dir = std::env::temp_dir().join(format!("polyode-example1-{}", std::process::id()));
    for path in ex.write(&dir)? {
        println!("wrote {}", path.display());
    }
    std::fs::remove_dir_all(&dir)?;
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
