//! Checks random instances against numerical integration, and shows that
//! breaking the constraints is detected.
//!
//! ```bash
//! cargo run -p polyode --example verify_closed_form
//! ```

use polyode::closedform::safe_horizon;
use polyode::{
    generate_random_instance, verify_instance, Complex64, IntegratorConfig, SolvableInstance,
};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let config = IntegratorConfig::default();
    for (n, m) in [(2, 2), (2, 4), (3, 3)] {
        let inst = generate_random_instance(n, m, 5, 1.0)?;
        let t_end = safe_horizon(inst.k());
        let dev = verify_instance(&inst, t_end, 64, &config)?;
        println!(
            "N = {n}, M = {m}, K = {:.3}: deviation {dev:.2e} on [0, {t_end}]",
            inst.k()
        );
        assert!(dev < 1e-6);
    }

    let inst = generate_random_instance(2, 4, 5, 1.0)?;
    let broken = SolvableInstance::with_tolerance(
        inst.system().clone(),
        inst.z0().clone(),
        inst.k() + Complex64::new(1e-2, 0.0),
        f64::INFINITY,
    )?;
    let dev = verify_instance(&broken, 0.5, 64, &config)?;
    println!("K perturbed by 1e-2: deviation {dev:.2e}");
    assert!(dev > 1e-4);
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
