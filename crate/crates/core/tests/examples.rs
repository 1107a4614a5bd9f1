// Every runnable example doubles as a smoke test.

#[allow(dead_code)]
#[path = "../examples/enumerate_monomials.rs"]
mod enumerate_monomials;

#[test]
fn enumerate_monomials_runs() {
    enumerate_monomials::run_example().expect("enumerate_monomials example should run");
}

#[allow(dead_code)]
#[path = "../examples/evaluate_rhs.rs"]
mod evaluate_rhs;

#[test]
fn evaluate_rhs_runs() {
    evaluate_rhs::run_example().expect("evaluate_rhs example should run");
}

#[allow(dead_code)]
#[path = "../examples/solve_linear.rs"]
mod solve_linear;

#[test]
fn solve_linear_runs() {
    solve_linear::run_example().expect("solve_linear example should run");
}

#[allow(dead_code)]
#[path = "../examples/newton_initial_data.rs"]
mod newton_initial_data;

#[test]
fn newton_initial_data_runs() {
    newton_initial_data::run_example().expect("newton_initial_data example should run");
}

#[allow(dead_code)]
#[path = "../examples/closed_form_blowup.rs"]
mod closed_form_blowup;

#[test]
fn closed_form_blowup_runs() {
    closed_form_blowup::run_example().expect("closed_form_blowup example should run");
}

#[allow(dead_code)]
#[path = "../examples/verify_closed_form.rs"]
mod verify_closed_form;

#[test]
fn verify_closed_form_runs() {
    verify_closed_form::run_example().expect("verify_closed_form example should run");
}

#[allow(dead_code)]
#[path = "../examples/periodic_orbit.rs"]
mod periodic_orbit;

#[test]
fn periodic_orbit_runs() {
    periodic_orbit::run_example().expect("periodic_orbit example should run");
}

#[allow(dead_code)]
#[path = "../examples/random_instances.rs"]
mod random_instances;

#[test]
fn random_instances_runs() {
    random_instances::run_example().expect("random_instances example should run");
}

#[allow(dead_code)]
#[path = "../examples/demo_example1.rs"]
mod demo_example1;

#[test]
fn demo_example1_runs() {
    demo_example1::run_example().expect("demo_example1 example should run");
}

#[allow(dead_code)]
#[path = "../examples/demo_example2.rs"]
mod demo_example2;

#[test]
fn demo_example2_runs() {
    demo_example2::run_example().expect("demo_example2 example should run");
}
