//! Algebraic constraints binding the rate parameter `K`, the coefficients and
//! the initial data, and solvers for them.
//!
//! The special solution `z_n(t) = z_n(0) (1 + K t)^(1/(1-M))` exists when
//!
//! ```text
//! K z_n(0) = (1 - M) f_n(z(0)),   n = 1..N
//! ```
//!
//! where `f` is the polynomial right-hand side. These `N` equations are affine in
//! `K` and in every coefficient, so any `N` of those can be solved for linearly
//! ([`solve_linear_selection`]); solving for the initial data is nonlinear and
//! goes through damped Newton ([`newton_solve_initial_data`]).

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, ComplexMatrix};
use crate::polysys::{MultiIndex, PolynomialSystem, PowerTable, StateVector};

/// Default bound on the scaled constraint residual of a [`SolvableInstance`].
pub const DEFAULT_TOLERANCE: f64 = 1e-10;

/// Maximum number of step halvings per Newton iteration.
pub const MAX_HALVINGS: usize = 30;

fn zero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

/// `(1 - M)` as a float.
fn one_minus_m(system: &PolynomialSystem) -> f64 {
    1.0 - system.degree() as f64
}

/// Component `n` is `K z_n(0) - (1 - M) f_n(z(0))`; all components vanish on a valid instance.
pub fn constraint_residual(
    system: &PolynomialSystem,
    z0: &StateVector,
    k: Complex64,
) -> Result<StateVector> {
    let f = system.evaluate_rhs(z0)?;
    let factor = one_minus_m(system);
    Ok(z0
        .iter()
        .zip(f.iter())
        .map(|(z, fz)| k * z - fz * factor)
        .collect())
}

/// Largest modulus of any individual term entering the constraints:
/// `|K z_n|` and `|(1 - M) c[n, m] z^m|`.
pub fn term_scale(system: &PolynomialSystem, z0: &StateVector, k: Complex64) -> Result<f64> {
    system.check_state(z0)?;
    let powers = PowerTable::new(z0, system.degree());
    let factor = one_minus_m(system).abs();
    let k_terms = z0.iter().map(|z| (k * z).norm());
    let poly_terms = system
        .iter()
        .map(|(_, idx, c)| factor * (c * powers.monomial(idx)).norm());
    Ok(k_terms.chain(poly_terms).fold(0.0, f64::max))
}

/// Max residual modulus divided by [`term_scale`] (zero when every term vanishes).
pub fn scaled_residual(system: &PolynomialSystem, z0: &StateVector, k: Complex64) -> Result<f64> {
    let r = constraint_residual(system, z0, k)?.max_modulus();
    let scale = term_scale(system, z0, k)?;
    Ok(if scale > 0.0 { r / scale } else { r })
}

/// A polynomial system with initial data and rate parameter satisfying the constraints.
#[derive(Debug, Clone, PartialEq)]
pub struct SolvableInstance {
    system: PolynomialSystem,
    z0: StateVector,
    k: Complex64,
    tolerance: f64,
}

impl SolvableInstance {
    /// Validates the constraints at [`DEFAULT_TOLERANCE`].
    pub fn new(system: PolynomialSystem, z0: StateVector, k: Complex64) -> Result<Self> {
        Self::with_tolerance(system, z0, k, DEFAULT_TOLERANCE)
    }

    pub fn with_tolerance(
        system: PolynomialSystem,
        z0: StateVector,
        k: Complex64,
        tolerance: f64,
    ) -> Result<Self> {
        if !z0.is_finite() || !k.is_finite() {
            return Err(Error::InvalidArgument(
                "initial data and K must be finite".into(),
            ));
        }
        let residual = scaled_residual(&system, &z0, k)?;
        if residual > tolerance {
            return Err(Error::ConstraintViolated {
                residual,
                tolerance,
            });
        }
        Ok(SolvableInstance {
            system,
            z0,
            k,
            tolerance,
        })
    }

    pub fn system(&self) -> &PolynomialSystem {
        &self.system
    }

    pub fn z0(&self) -> &StateVector {
        &self.z0
    }

    pub fn k(&self) -> Complex64 {
        self.k
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn residual(&self) -> StateVector {
        constraint_residual(&self.system, &self.z0, self.k)
            .expect("instance dimensions are checked at construction")
    }
}

/// One unknown in a linear constraint solve.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum UnknownSlot {
    /// Coefficient `c[eq, index]`, `eq` zero-based.
    Coefficient {
        eq: usize,
        index: MultiIndex,
    },
    RateK,
}

impl fmt::Display for UnknownSlot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UnknownSlot::RateK => f.write_str("K"),
            UnknownSlot::Coefficient { eq, index } => write!(f, "c:{}:{}", eq + 1, index),
        }
    }
}

impl FromStr for UnknownSlot {
    type Err = Error;

    /// `K` or `c:EQ:E1-E2-...` with a one-based equation index.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "K" || s == "k" {
            return Ok(UnknownSlot::RateK);
        }
        let mut parts = s.split(':');
        match (parts.next(), parts.next(), parts.next(), parts.next()) {
            (Some("c"), Some(eq), Some(exps), None) => {
                let eq: usize = eq
                    .parse()
                    .map_err(|e| Error::Parse(format!("bad equation index in {s:?}: {e}")))?;
                if eq == 0 {
                    return Err(Error::Parse(format!(
                        "equation index in {s:?} is one-based"
                    )));
                }
                Ok(UnknownSlot::Coefficient {
                    eq: eq - 1,
                    index: exps.parse()?,
                })
            }
            _ => Err(Error::Parse(format!(
                "unknown slot {s:?}; expected K or c:EQ:EXPONENTS"
            ))),
        }
    }
}

/// Exactly `N` distinct unknowns: coefficients plus at most one `K`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownSelection {
    slots: Vec<UnknownSlot>,
}

impl UnknownSelection {
    pub fn new(slots: Vec<UnknownSlot>) -> Self {
        UnknownSelection { slots }
    }

    /// The default generation choice: `c[n, M e_n]` for every `n`.
    pub fn pure_monomials(system: &PolynomialSystem) -> Self {
        let n = system.dim();
        UnknownSelection::new(
            (0..n)
                .map(|eq| UnknownSlot::Coefficient {
                    eq,
                    index: MultiIndex::pure(n, eq, system.degree()),
                })
                .collect(),
        )
    }

    pub fn slots(&self) -> &[UnknownSlot] {
        &self.slots
    }

    pub fn contains_k(&self) -> bool {
        self.slots.contains(&UnknownSlot::RateK)
    }

    /// Checks the selection against a system's shape.
    pub fn validate(&self, system: &PolynomialSystem) -> Result<()> {
        if self.slots.len() != system.dim() {
            return Err(Error::InvalidSelection(format!(
                "need exactly {} unknowns, got {}",
                system.dim(),
                self.slots.len()
            )));
        }
        let mut seen = HashSet::new();
        for slot in &self.slots {
            if !seen.insert(slot) {
                return Err(Error::InvalidSelection(format!("duplicate unknown {slot}")));
            }
            if let UnknownSlot::Coefficient { eq, index } = slot {
                if *eq >= system.dim() {
                    return Err(Error::InvalidSelection(format!(
                        "equation index in {slot} out of range"
                    )));
                }
                index
                    .validate(system.dim(), system.degree())
                    .map_err(|e| Error::InvalidSelection(e.to_string()))?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for UnknownSelection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.slots.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

impl FromStr for UnknownSelection {
    type Err = Error;

    /// Comma-separated slots, e.g. `K,c:1:4-0`.
    fn from_str(s: &str) -> Result<Self> {
        s.split(',')
            .map(str::parse)
            .collect::<Result<Vec<_>>>()
            .map(UnknownSelection::new)
    }
}

/// Writes `values` into the selected slots, returning the updated system and `K`.
pub fn apply_unknowns(
    system: &PolynomialSystem,
    k: Complex64,
    selection: &UnknownSelection,
    values: &[Complex64],
) -> Result<(PolynomialSystem, Complex64)> {
    if values.len() != selection.slots().len() {
        return Err(Error::DimensionMismatch {
            expected: selection.slots().len(),
            found: values.len(),
        });
    }
    let mut system = system.clone();
    let mut k = k;
    for (slot, &v) in selection.slots().iter().zip(values) {
        match slot {
            UnknownSlot::RateK => k = v,
            UnknownSlot::Coefficient { eq, index } => system.set(*eq, index.clone(), v)?,
        }
    }
    Ok((system, k))
}

/// Solves the constraints for the selected unknowns with everything else fixed.
///
/// `k_given` must be present exactly when the selection does not contain `K`.
/// Existing values in the selected coefficient slots are ignored.
pub fn solve_linear_selection(
    system: &PolynomialSystem,
    z0: &StateVector,
    k_given: Option<Complex64>,
    selection: &UnknownSelection,
) -> Result<SolvableInstance> {
    system.check_state(z0)?;
    selection.validate(system)?;
    match (selection.contains_k(), k_given) {
        (true, Some(_)) => {
            return Err(Error::InvalidSelection(
                "K is an unknown but a value for it was given".into(),
            ))
        }
        (false, None) => {
            return Err(Error::InvalidSelection(
                "K is not an unknown, so a value for it is required".into(),
            ))
        }
        _ => {}
    }

    let n = system.dim();
    let zeros = vec![zero(); n];
    let (base, base_k) = apply_unknowns(system, k_given.unwrap_or_default(), selection, &zeros)?;
    let b = constraint_residual(&base, z0, base_k)?;

    let powers = PowerTable::new(z0, system.degree());
    let m_minus_one = -one_minus_m(system);
    let mut a: ComplexMatrix = vec![vec![zero(); n]; n];
    for (j, slot) in selection.slots().iter().enumerate() {
        match slot {
            UnknownSlot::RateK => {
                for (row, z) in a.iter_mut().zip(z0.iter()) {
                    row[j] = *z;
                }
            }
            UnknownSlot::Coefficient { eq, index } => {
                a[*eq][j] = powers.monomial(index) * m_minus_one;
            }
        }
    }
    let rhs: Vec<Complex64> = b.iter().map(|v| -v).collect();
    let u = linalg::solve(&a, &rhs)?;
    let (solved, k) = apply_unknowns(&base, base_k, selection, &u)?;
    SolvableInstance::new(solved, z0.clone(), k)
}

/// Analytic Jacobian of [`constraint_residual`] with respect to `z`:
/// `J[n][j] = K delta_nj - (1 - M) sum_m c[n, m] m_j z^(m - e_j)`.
pub fn jacobian(system: &PolynomialSystem, z: &StateVector, k: Complex64) -> Result<ComplexMatrix> {
    system.check_state(z)?;
    let n = system.dim();
    let powers = PowerTable::new(z, system.degree());
    let factor = one_minus_m(system);
    let mut jac = vec![vec![zero(); n]; n];
    for (row_idx, row) in jac.iter_mut().enumerate() {
        for (j, entry) in row.iter_mut().enumerate() {
            let poly = system.terms(row_idx).fold(zero(), |acc, (idx, c)| {
                acc + c * powers.monomial_derivative(idx, j)
            });
            *entry = -poly * factor;
            if row_idx == j {
                *entry += k;
            }
        }
    }
    Ok(jac)
}

/// Result of a converged Newton run.
#[derive(Debug, Clone, PartialEq)]
pub struct NewtonOutcome {
    pub z0: StateVector,
    /// Newton steps taken.
    pub iterations: usize,
    /// Max residual modulus at each iterate, starting with the guess.
    pub residual_history: Vec<f64>,
}

impl NewtonOutcome {
    pub fn residual(&self) -> f64 {
        self.residual_history.last().copied().unwrap_or(0.0)
    }
}

fn norm2(v: &StateVector) -> f64 {
    v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

/// Finds initial data satisfying the constraints for a fixed system and `K`.
///
/// Damped Newton: each step is halved (up to [`MAX_HALVINGS`] times) until the
/// Euclidean residual norm decreases. Converges when the max residual modulus
/// is at most `tol`. Returns whichever root the iteration reaches first.
pub fn newton_solve_initial_data(
    system: &PolynomialSystem,
    k: Complex64,
    guess: &StateVector,
    tol: f64,
    max_iter: usize,
) -> Result<NewtonOutcome> {
    if !(tol > 0.0) || max_iter == 0 {
        return Err(Error::InvalidArgument(
            "newton needs tol > 0 and max_iter >= 1".into(),
        ));
    }
    system.check_state(guess)?;
    let mut z = guess.clone();
    let mut r = constraint_residual(system, &z, k)?;
    let mut history = vec![r.max_modulus()];

    for iteration in 0..=max_iter {
        let current = *history.last().unwrap();
        if current <= tol {
            return Ok(NewtonOutcome {
                z0: z,
                iterations: iteration,
                residual_history: history,
            });
        }
        if iteration == max_iter {
            break;
        }
        let jac = jacobian(system, &z, k)?;
        let rhs: Vec<Complex64> = r.iter().map(|v| -v).collect();
        let step = linalg::solve(&jac, &rhs).map_err(|e| match e {
            Error::SingularSystem { .. } => Error::SingularJacobian { iteration },
            other => other,
        })?;

        let r_norm = norm2(&r);
        let mut damping = 1.0;
        let mut accepted = None;
        for _ in 0..=MAX_HALVINGS {
            let trial: StateVector = z
                .iter()
                .zip(&step)
                .map(|(zi, di)| zi + di * damping)
                .collect();
            let rt = constraint_residual(system, &trial, k)?;
            if trial.is_finite() && norm2(&rt) < r_norm {
                accepted = Some((trial, rt));
                break;
            }
            damping *= 0.5;
        }
        match accepted {
            Some((zn, rn)) => {
                z = zn;
                r = rn;
                history.push(r.max_modulus());
            }
            None => {
                return Err(Error::NoConvergence {
                    iterations: iteration + 1,
                    residual: current,
                })
            }
        }
    }
    Err(Error::NoConvergence {
        iterations: max_iter,
        residual: *history.last().unwrap(),
    })
}
