//! Closed-form solutions of first-order ODE systems whose right-hand sides are
//! homogeneous polynomials, plus a rotating version whose orbits are periodic.
//!
//! For `dz_n/dt = f_n(z)` with every `f_n` homogeneous of degree `M`, the family
//! `z_n(t) = z_n(0) (1 + K t)^(1/(1-M))` solves the system whenever
//! `K z_n(0) = (1 - M) f_n(z(0))` for all `n`. This crate builds such instances
//! ([`constraints`]), evaluates the solutions ([`closedform`], [`periodic`]) and
//! checks them against an adaptive integrator that knows nothing about the
//! formulas ([`oracle`]).
//!
//! ```
//! use polyode::{generate_random_instance, oracle, IntegratorConfig};
//!
//! let inst = generate_random_instance(2, 4, 1, 1.0).unwrap();
//! let dev = oracle::verify_instance(&inst, 0.5, 32, &IntegratorConfig::default()).unwrap();
//! assert!(dev < 1e-6);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod closedform;
pub mod constraints;
pub mod demo;
pub mod error;
pub mod generate;
pub mod io;
pub mod linalg;
pub mod oracle;
pub mod periodic;
pub mod polysys;
pub mod trajectory;

pub use num_complex::Complex64;

pub use closedform::{blow_up_time, ClosedFormSolution};
pub use constraints::{
    constraint_residual, jacobian, newton_solve_initial_data, solve_linear_selection,
    NewtonOutcome, SolvableInstance, UnknownSelection, UnknownSlot,
};
pub use error::{Error, Result};
pub use generate::generate_random_instance;
pub use oracle::{integrate, verify_instance, verify_periodic, IntegratorConfig};
pub use periodic::{periodize, PeriodReport, PeriodicClosedForm, PeriodicSystem};
pub use polysys::{
    enumerate_multi_indices, scale_state, MultiIndex, PolynomialSystem, StateVector,
};
pub use trajectory::{Source, Trajectory};
