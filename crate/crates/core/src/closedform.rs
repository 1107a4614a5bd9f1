//! The explicit solution `z_n(t) = z_n(0) (1 + K t)^(1/(1-M))` on the real time axis.
//!
//! The power is evaluated on the principal branch. Along `t >= 0` the bracket
//! `1 + K t` moves on a straight line starting at 1, so it only meets the branch
//! cut when `K` is real and negative, and then only at the blow-up time.

use num_complex::Complex64;

use crate::constraints::SolvableInstance;
use crate::error::{Error, Result};
use crate::polysys::StateVector;
use crate::trajectory::Trajectory;

/// Evaluation refuses brackets `|1 + K t|` below this.
pub const SINGULAR_GUARD: f64 = 1e-12;

/// `|Im K|` below this counts as real when locating the blow-up time.
pub const REAL_K_THRESHOLD: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq)]
pub struct ClosedFormSolution {
    z0: StateVector,
    k: Complex64,
    degree: u32,
}

impl ClosedFormSolution {
    pub fn from_instance(instance: &SolvableInstance) -> Self {
        ClosedFormSolution {
            z0: instance.z0().clone(),
            k: instance.k(),
            degree: instance.system().degree(),
        }
    }

    pub fn z0(&self) -> &StateVector {
        &self.z0
    }

    pub fn k(&self) -> Complex64 {
        self.k
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// `1 / (1 - M)`.
    pub fn exponent(&self) -> f64 {
        1.0 / (1.0 - self.degree as f64)
    }

    /// First positive real `t` with `1 + K t = 0`; exists only for real negative `K`.
    pub fn blow_up_time(&self) -> Option<f64> {
        blow_up_time(self.k)
    }

    /// `(1 + K t)^(1/(1-M))`, principal branch.
    pub fn time_factor(&self, t: f64) -> Result<Complex64> {
        if t < 0.0 || t.is_nan() {
            return Err(Error::NegativeTime { t });
        }
        let bracket = Complex64::new(1.0, 0.0) + self.k * t;
        if let Some(t_star) = self.blow_up_time() {
            if t >= t_star - SINGULAR_GUARD / self.k.norm() {
                return Err(Error::SingularTime {
                    t,
                    modulus: bracket.norm(),
                });
            }
        }
        if bracket.norm() < SINGULAR_GUARD {
            return Err(Error::SingularTime {
                t,
                modulus: bracket.norm(),
            });
        }
        if t == 0.0 {
            return Ok(Complex64::new(1.0, 0.0));
        }
        Ok(bracket.powf(self.exponent()))
    }

    /// `z(t)`; returns `z0` exactly at `t = 0`.
    pub fn eval(&self, t: f64) -> Result<StateVector> {
        if t == 0.0 {
            return Ok(self.z0.clone());
        }
        let factor = self.time_factor(t)?;
        Ok(self.z0.iter().map(|z| z * factor).collect())
    }

    pub fn sample(&self, times: &[f64]) -> Result<Trajectory> {
        let states = times
            .iter()
            .map(|&t| self.eval(t))
            .collect::<Result<Vec<_>>>()?;
        Ok(Trajectory::closed_form(times.to_vec(), states))
    }
}

/// Blow-up time `-1/K` for real negative `K`, `None` otherwise.
pub fn blow_up_time(k: Complex64) -> Option<f64> {
    if k.im.abs() < REAL_K_THRESHOLD && k.re < 0.0 {
        Some(-1.0 / k.re)
    } else {
        None
    }
}

/// Largest window `0.8 * min(t*, 1)` on which closed-form checks are run.
pub fn safe_horizon(k: Complex64) -> f64 {
    0.8 * blow_up_time(k).map_or(1.0, |t| t.min(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polysys::PolynomialSystem;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn riccati() -> ClosedFormSolution {
        let s = PolynomialSystem::new(2, 2)
            .unwrap()
            .with(0, &[2, 0], c(1.0, 0.0))
            .unwrap();
        let inst =
            SolvableInstance::new(s, vec![c(1.0, 0.0), c(0.0, 0.0)].into(), c(-1.0, 0.0)).unwrap();
        ClosedFormSolution::from_instance(&inst)
    }

    #[test]
    fn initial_value_is_exact() {
        let sol = ClosedFormSolution {
            z0: vec![c(0.1, 0.7), c(-3.0, 1e-300)].into(),
            k: c(0.3, 0.2),
            degree: 5,
        };
        assert_eq!(sol.eval(0.0).unwrap(), sol.z0);
    }

    #[test]
    fn riccati_matches_rational_solution() {
        let sol = riccati();
        let z = sol.eval(0.5).unwrap();
        assert!((z[0] - c(2.0, 0.0)).norm() < 1e-15);
        assert_eq!(z[1], c(0.0, 0.0));
    }

    #[test]
    fn quartic_exponent_is_minus_one_third() {
        let sol = ClosedFormSolution {
            z0: vec![c(1.0, 0.0), c(0.0, 2.0)].into(),
            k: c(2.0, 0.0),
            degree: 4,
        };
        assert_eq!(sol.exponent(), -1.0 / 3.0);
        let z = sol.eval(3.5).unwrap();
        let expected = 8f64.powf(-1.0 / 3.0);
        assert!((z[0] - c(expected, 0.0)).norm() < 1e-15);
        assert!((z[1] - c(0.0, 2.0 * expected)).norm() < 1e-15);
    }

    #[test]
    fn blow_up_times() {
        assert_eq!(blow_up_time(c(-1.0, 0.0)), Some(1.0));
        assert_eq!(blow_up_time(c(-4.0, 0.0)), Some(0.25));
        assert_eq!(blow_up_time(c(2.0, 0.0)), None);
        assert_eq!(blow_up_time(c(1.0, 1.0)), None);
        assert_eq!(blow_up_time(c(-1.0, 1e-3)), None);
        assert_eq!(blow_up_time(c(0.0, 0.0)), None);
    }

    #[test]
    fn singular_and_negative_times_are_rejected() {
        let sol = riccati();
        for t in [1.0 - 1e-12, 1.0, 1.5, 10.0] {
            assert!(
                matches!(sol.eval(t), Err(Error::SingularTime { .. })),
                "t = {t}"
            );
        }
        assert!(sol.eval(1.0 - 1e-9).is_ok());
        assert!(matches!(sol.eval(-0.1), Err(Error::NegativeTime { .. })));
    }

    #[test]
    fn safe_horizon_values() {
        assert_eq!(safe_horizon(c(-1.0, 0.0)), 0.8);
        assert_eq!(safe_horizon(c(-4.0, 0.0)), 0.2);
        assert_eq!(safe_horizon(c(0.5, 0.5)), 0.8);
    }
}
