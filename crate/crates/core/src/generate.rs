//! Seeded random instances built with the linear strategy.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::constraints::{solve_linear_selection, SolvableInstance, UnknownSelection};
use crate::error::{Error, Result};
use crate::polysys::{enumerate_multi_indices, MultiIndex, PolynomialSystem, StateVector};

/// Reseeds attempted before giving up on a singular draw.
pub const MAX_ATTEMPTS: usize = 16;

/// Uniform draw from the square `[-1, 1] x [-1, 1]`.
pub fn unit_square(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0))
}

/// Real and imaginary parts with modulus in `[0.2, 1]` and random sign.
pub fn offset_from_zero(rng: &mut impl Rng) -> Complex64 {
    let re = signed_offset(rng);
    let im = signed_offset(rng);
    Complex64::new(re, im)
}

fn signed_offset(rng: &mut impl Rng) -> f64 {
    let v: f64 = rng.gen_range(0.2..=1.0);
    if rng.gen::<bool>() {
        v
    } else {
        -v
    }
}

pub fn random_state(dim: usize, rng: &mut impl Rng) -> StateVector {
    (0..dim).map(|_| offset_from_zero(rng)).collect()
}

/// Fills every slot of `dim x degree` except the pure monomials `c[n, M e_n]`,
/// each independently with probability `density`.
pub fn random_free_coefficients(
    dim: usize,
    degree: u32,
    density: f64,
    rng: &mut impl Rng,
) -> Result<PolynomialSystem> {
    let mut system = PolynomialSystem::new(dim, degree)?;
    let indices = enumerate_multi_indices(dim, degree)?;
    for eq in 0..dim {
        let pure = MultiIndex::pure(dim, eq, degree);
        for idx in &indices {
            if *idx == pure {
                continue;
            }
            if density >= 1.0 || rng.gen_bool(density) {
                system.set(eq, idx.clone(), unit_square(rng))?;
            }
        }
    }
    Ok(system)
}

/// A random instance: `z0`, `K` and all non-pure coefficients are drawn, then the
/// pure-monomial coefficients are solved for. The same seed gives the same instance.
pub fn generate_random_instance(
    dim: usize,
    degree: u32,
    seed: u64,
    density: f64,
) -> Result<SolvableInstance> {
    if !(density > 0.0 && density <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "density must lie in (0, 1], got {density}"
        )));
    }
    PolynomialSystem::new(dim, degree)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut last_err = None;
    for _ in 0..MAX_ATTEMPTS {
        let z0 = random_state(dim, &mut rng);
        let system = random_free_coefficients(dim, degree, density, &mut rng)?;
        let k = unit_square(&mut rng);
        let selection = UnknownSelection::pure_monomials(&system);
        match solve_linear_selection(&system, &z0, Some(k), &selection) {
            Ok(inst) => return Ok(inst),
            Err(e @ (Error::SingularSystem { .. } | Error::ConstraintViolated { .. })) => {
                last_err = Some(e)
            }
            Err(e) => return Err(e),
        }
    }
    Err(last_err.expect("at least one attempt"))
}

/// Generator for the demos and tests.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
