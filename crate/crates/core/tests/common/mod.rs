//! Independent reference computations shared by the integration tests.
//! Nothing here calls into the evaluation paths it is used to check.

#![allow(dead_code)]

use polyode::{Complex64, PolynomialSystem, StateVector};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn square(rng: &mut impl Rng, half: f64) -> Complex64 {
    c(rng.gen_range(-half..=half), rng.gen_range(-half..=half))
}

/// Random point in the disc of radius `r`.
pub fn disc(rng: &mut impl Rng, r: f64) -> Complex64 {
    Complex64::from_polar(
        r * rng.gen::<f64>().sqrt(),
        rng.gen_range(0.0..std::f64::consts::TAU),
    )
}

/// All exponent tuples of length `n` summing to `m`, by nested counting over `(m+1)^n`.
pub fn brute_force_indices(n: usize, m: u32) -> Vec<Vec<u32>> {
    let base = m as u64 + 1;
    let total = base.pow(n as u32);
    (0..total)
        .map(|mut code| {
            (0..n)
                .map(|_| {
                    let d = (code % base) as u32;
                    code /= base;
                    d
                })
                .collect::<Vec<u32>>()
        })
        .filter(|e| e.iter().sum::<u32>() == m)
        .collect()
}

/// Dense right-hand side: loops over every exponent tuple, absent coefficients read as zero.
pub fn dense_rhs(system: &PolynomialSystem, z: &[Complex64]) -> Vec<Complex64> {
    let indices = brute_force_indices(system.dim(), system.degree());
    (0..system.dim())
        .map(|n| {
            indices
                .iter()
                .map(|e| {
                    let coef = system.coefficient(n, &polyode::MultiIndex::new(e.clone()));
                    let mono = e
                        .iter()
                        .zip(z)
                        .map(|(&p, zl)| zl.powu(p))
                        .fold(c(1.0, 0.0), |a, b| a * b);
                    coef * mono
                })
                .fold(c(0.0, 0.0), |a, b| a + b)
        })
        .collect()
}

/// `K z_n - (1 - M) f_n(z)` via the dense oracle.
pub fn dense_residual(system: &PolynomialSystem, z: &[Complex64], k: Complex64) -> Vec<Complex64> {
    let f = dense_rhs(system, z);
    let factor = 1.0 - system.degree() as f64;
    z.iter()
        .zip(&f)
        .map(|(zi, fi)| k * zi - fi * factor)
        .collect()
}

/// Random system with every slot filled from the square `[-1,1]^2`.
pub fn random_dense_system(n: usize, m: u32, rng: &mut impl Rng) -> PolynomialSystem {
    let mut s = PolynomialSystem::new(n, m).unwrap();
    for eq in 0..n {
        for e in brute_force_indices(n, m) {
            s.set(eq, polyode::MultiIndex::new(e), square(rng, 1.0))
                .unwrap();
        }
    }
    s
}

pub fn random_state(n: usize, r: f64, rng: &mut impl Rng) -> StateVector {
    (0..n).map(|_| disc(rng, r)).collect()
}

pub fn max_gap(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}
