//! Builds the rotating periodic version of a quartic instance and finds its
//! period, once with `g` staying near 1 (period three base periods) and once
//! with `g` winding around the origin (period one base period).
//!
//! ```bash
//! cargo run -p polyode --example periodic_orbit
//! ```

use polyode::generate::{random_free_coefficients, random_state, rng};
use polyode::oracle::{integrated_closure, verify_periodic};
use polyode::periodic::DEFAULT_CLOSURE_TOL;
use polyode::{
    solve_linear_selection, Complex64, IntegratorConfig, PeriodicClosedForm, UnknownSelection,
};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let mut rng = rng(9);
    let z0 = random_state(2, &mut rng);
    let system = random_free_coefficients(2, 4, 1.0, &mut rng)?;
    let selection: UnknownSelection = "c:1:4-0,c:2:0-4".parse()?;
    let config = IntegratorConfig::default();

    for k in [Complex64::new(0.05, 0.08), Complex64::new(0.0, 1.5)] {
        let inst = solve_linear_selection(&system, &z0, Some(k), &selection)?;
        let pcf = PeriodicClosedForm::new(&inst, 1.0)?;
        let report = pcf.detect_period(DEFAULT_CLOSURE_TOL)?;
        println!(
            "K = {k}: winding q = {}, period = {} x 2pi (T = {:.6}), closure {:.1e}",
            report.q, report.k, report.period, report.closure_error
        );
        let dev = verify_periodic(&pcf, report.k as u32, 129, &config)?;
        let closure = integrated_closure(&pcf, report.k, &config)?;
        println!("  integrator vs closed form {dev:.1e}, integrated closure {closure:.1e}");
        assert!(dev < 1e-6 && closure < 1e-6);
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
