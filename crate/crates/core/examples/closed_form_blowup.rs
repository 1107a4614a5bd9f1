//! Evaluates the explicit solution of `z' = z^2` with `z(0) = 1`, which blows
//! up at `t = 1`, and shows the integrator stalling at the same place.
//!
//! ```bash
//! cargo run -p polyode --example closed_form_blowup
//! ```

use polyode::oracle::integrate;
use polyode::{
    ClosedFormSolution, Complex64, Error, IntegratorConfig, PolynomialSystem, SolvableInstance,
};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let c = Complex64::new;
    let system = PolynomialSystem::new(2, 2)?.with(0, &[2, 0], c(1.0, 0.0))?;
    let inst = SolvableInstance::new(
        system.clone(),
        vec![c(1.0, 0.0), c(0.0, 0.0)].into(),
        c(-1.0, 0.0),
    )?;
    let sol = ClosedFormSolution::from_instance(&inst);
    println!("blow-up time: {:?}", sol.blow_up_time());

    for t in [0.0, 0.5, 0.9, 0.99, 0.999999] {
        let z = sol.eval(t)?;
        println!("z1({t}) = {:.6}   exact {:.6}", z[0].re, 1.0 / (1.0 - t));
    }
    match sol.eval(1.0) {
        Err(Error::SingularTime { t, .. }) => println!("evaluation at t = {t} refused"),
        other => return Err(format!("expected a singular time, got {other:?}").into()),
    }

    let err = integrate(
        |z| system.evaluate_rhs(z).unwrap(),
        inst.z0(),
        1.0,
        &[],
        &IntegratorConfig::default(),
    )
    .unwrap_err();
    println!("integrator: {err}");
    assert!(matches!(err, Error::StepUnderflow { .. }));
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
