//! Periodic variant obtained by complexifying time.
//!
//! With `w_n(t) = exp(i w t / (M-1)) z_n(tau)` and `tau = (exp(i w t) - 1) / (i w)`,
//! every solution of the homogeneous system in complex time becomes a solution of
//! the autonomous system
//!
//! ```text
//! dw_n/dt = i (w / (M-1)) w_n + f_n(w)
//! ```
//!
//! (`w` the frequency omega), whose real form is `x' = -(w/(M-1)) y + Re f`,
//! `y' = (w/(M-1)) x + Im f`. The special solution becomes
//! `z_n(0) exp(i w t/(M-1)) g(t)^(1/(1-M))` with `g(t) = 1 + K tau(t)`, which is
//! periodic with a period that is an integer multiple of `2 pi / |w|`.
//!
//! `g` may wind around the origin, so the fractional power is continued along
//! the time axis by unwrapping the phase of `g` rather than taken on the
//! principal branch.

use std::f64::consts::{FRAC_PI_4, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::constraints::SolvableInstance;
use crate::error::{Error, Result};
use crate::polysys::{PolynomialSystem, StateVector};
use crate::trajectory::Trajectory;

/// Samples per base period used for unwrapping and closure checks.
pub const SAMPLES_PER_PERIOD: usize = 4096;

/// Default closure tolerance for [`PeriodicClosedForm::detect_period`].
pub const DEFAULT_CLOSURE_TOL: f64 = 1e-8;

/// `|g|` below this is treated as a real-time singularity.
pub const BRACKET_GUARD: f64 = 1e-10;

/// The autonomous rotating system built from a homogeneous base system.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicSystem {
    base: PolynomialSystem,
    omega: f64,
}

/// Builds the rotating system; `omega` must be finite and nonzero.
pub fn periodize(system: &PolynomialSystem, omega: f64) -> Result<PeriodicSystem> {
    if omega == 0.0 || !omega.is_finite() {
        return Err(Error::ZeroOmega);
    }
    Ok(PeriodicSystem {
        base: system.clone(),
        omega,
    })
}

impl PeriodicSystem {
    pub fn base(&self) -> &PolynomialSystem {
        &self.base
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    /// Frequency `omega / (M - 1)` of the linear rotation term.
    pub fn rotation_rate(&self) -> f64 {
        self.omega / (self.base.degree() as f64 - 1.0)
    }

    /// `i (omega/(M-1)) w + f(w)`.
    pub fn eval_rhs(&self, w: &StateVector) -> Result<StateVector> {
        let f = self.base.evaluate_rhs(w)?;
        let rot = Complex64::new(0.0, self.rotation_rate());
        Ok(w.iter()
            .zip(f.iter())
            .map(|(wi, fi)| rot * wi + fi)
            .collect())
    }

    /// Real form on `[x_1, y_1, ..., x_N, y_N]`.
    pub fn eval_rhs_real(&self, xy: &[f64]) -> Result<Vec<f64>> {
        if xy.len() != 2 * self.base.dim() {
            return Err(Error::DimensionMismatch {
                expected: 2 * self.base.dim(),
                found: xy.len(),
            });
        }
        let w: StateVector = xy
            .chunks_exact(2)
            .map(|p| Complex64::new(p[0], p[1]))
            .collect();
        let z = self.base.evaluate_rhs(&w)?;
        let rate = self.rotation_rate();
        Ok(xy
            .chunks_exact(2)
            .zip(z.iter())
            .flat_map(|(p, zn)| [-rate * p[1] + zn.re, rate * p[0] + zn.im])
            .collect())
    }
}

/// `tau(t) = (exp(i omega t) - 1) / (i omega)`, written to avoid cancellation for small `omega t`.
pub fn complex_time(omega: f64, t: f64) -> Complex64 {
    let theta = omega * t;
    let half = (0.5 * theta).sin();
    Complex64::new(theta.sin() / omega, 2.0 * half * half / omega)
}

/// Result of period detection; serializes as `{ "q", "k", "T", "closure_error" }`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PeriodReport {
    /// Winding number of `g` around 0 over one base period.
    pub q: i64,
    /// Period in units of the base period.
    pub k: u64,
    #[serde(rename = "T")]
    pub period: f64,
    pub closure_error: f64,
}

/// Unwrapped phase of `g` along increasing times.
#[derive(Debug, Clone, Copy)]
struct PhaseTrack {
    prev: Complex64,
    phase: f64,
}

impl PhaseTrack {
    fn start() -> Self {
        PhaseTrack {
            prev: Complex64::new(1.0, 0.0),
            phase: 0.0,
        }
    }

    fn advance(&mut self, t: f64, g: Complex64) -> Result<()> {
        if g.norm() < BRACKET_GUARD {
            return Err(Error::SingularBracket {
                t,
                modulus: g.norm(),
            });
        }
        let increment = (g / self.prev).arg();
        if increment.abs() > FRAC_PI_4 {
            return Err(Error::GridTooCoarse { t, increment });
        }
        self.phase += increment;
        self.prev = g;
        Ok(())
    }
}

/// The special solution of the rotating system.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicClosedForm {
    system: PolynomialSystem,
    z0: StateVector,
    k: Complex64,
    omega: f64,
}

impl PeriodicClosedForm {
    pub fn new(instance: &SolvableInstance, omega: f64) -> Result<Self> {
        if omega == 0.0 || !omega.is_finite() {
            return Err(Error::ZeroOmega);
        }
        Ok(PeriodicClosedForm {
            system: instance.system().clone(),
            z0: instance.z0().clone(),
            k: instance.k(),
            omega,
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

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn degree(&self) -> u32 {
        self.system.degree()
    }

    /// `2 pi / |omega|`.
    pub fn base_period(&self) -> f64 {
        TAU / self.omega.abs()
    }

    /// `g(t) = 1 + K tau(t)`.
    pub fn bracket(&self, t: f64) -> Complex64 {
        Complex64::new(1.0, 0.0) + self.k * complex_time(self.omega, t)
    }

    fn state(&self, t: f64, track: &PhaseTrack) -> StateVector {
        if t == 0.0 && track.phase == 0.0 {
            return self.z0.clone();
        }
        let m1 = self.degree() as f64 - 1.0;
        let rotation = Complex64::from_polar(1.0, self.omega * t / m1);
        let log_g = Complex64::new(track.prev.norm().ln(), track.phase);
        let power = (log_g / -m1).exp();
        let factor = rotation * power;
        self.z0.iter().map(|z| z * factor).collect()
    }

    fn check_grid(t_grid: &[f64]) -> Result<()> {
        if t_grid.first() != Some(&0.0) {
            return Err(Error::InvalidArgument("time grid must start at 0".into()));
        }
        if t_grid.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidArgument(
                "time grid must be strictly increasing".into(),
            ));
        }
        Ok(())
    }

    /// Evaluates the solution on `t_grid` exactly as given.
    ///
    /// The grid must start at 0, increase strictly, and be fine enough that the
    /// phase of `g` changes by at most pi/4 between consecutive samples.
    pub fn eval_grid(&self, t_grid: &[f64]) -> Result<Trajectory> {
        Self::check_grid(t_grid)?;
        let mut track = PhaseTrack::start();
        let mut states = Vec::with_capacity(t_grid.len());
        for &t in t_grid {
            track.advance(t, self.bracket(t))?;
            states.push(self.state(t, &track));
        }
        Ok(Trajectory::closed_form(t_grid.to_vec(), states))
    }

    /// Evaluates at arbitrary nondecreasing times `>= 0`, inserting intermediate
    /// points (at least [`SAMPLES_PER_PERIOD`] per base period) for the phase continuation.
    pub fn sample_refined(&self, times: &[f64]) -> Result<Trajectory> {
        if times.iter().any(|&t| !(t >= 0.0)) || times.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::InvalidArgument(
                "sample times must be nonnegative and sorted".into(),
            ));
        }
        let max_dt = self.base_period() / SAMPLES_PER_PERIOD as f64;
        let mut track = PhaseTrack::start();
        let mut t_prev = 0.0;
        let mut states = Vec::with_capacity(times.len());
        for &t in times {
            let span = t - t_prev;
            let pieces = (span / max_dt).ceil().max(1.0) as usize;
            if span > 0.0 {
                for i in 1..=pieces {
                    let ti = if i == pieces {
                        t
                    } else {
                        t_prev + span * i as f64 / pieces as f64
                    };
                    track.advance(ti, self.bracket(ti))?;
                }
            }
            t_prev = t;
            states.push(self.state(t, &track));
        }
        Ok(Trajectory::closed_form(times.to_vec(), states))
    }

    /// Winding number of `g` around the origin over one base period.
    pub fn winding_number(&self) -> Result<i64> {
        let dt = self.base_period() / SAMPLES_PER_PERIOD as f64;
        let mut track = PhaseTrack::start();
        for i in 1..=SAMPLES_PER_PERIOD {
            let t = i as f64 * dt;
            track.advance(t, self.bracket(t))?;
        }
        Ok((track.phase / TAU).round() as i64)
    }

    /// Period multiple implied by winding number `q`:
    /// `(M-1) / gcd(M-1, (1 - q sgn(omega)) mod (M-1))`, with `gcd(x, 0) = x`.
    pub fn predicted_multiple(&self, q: i64) -> u64 {
        let m1 = self.degree() as i64 - 1;
        let sign = if self.omega > 0.0 { 1 } else { -1 };
        let residue = (1 - q * sign).rem_euclid(m1);
        (m1 / gcd(m1, residue)) as u64
    }

    /// Finds the period as an integer multiple of the base period and confirms it numerically.
    ///
    /// The prediction from the winding number must agree with the first multiple
    /// of the base period at which the orbit returns to within `tol` of `z0`.
    pub fn detect_period(&self, tol: f64) -> Result<PeriodReport> {
        let q = self.winding_number()?;
        let predicted = self.predicted_multiple(q);
        let t_b = self.base_period();
        if self.z0.is_zero() {
            return Ok(PeriodReport {
                q,
                k: 1,
                period: t_b,
                closure_error: 0.0,
            });
        }
        let errors = self.closure_errors(predicted)?;
        let first = errors.iter().position(|&e| e <= tol).map(|j| j as u64 + 1);
        match first {
            Some(k) if k == predicted => Ok(PeriodReport {
                q,
                k,
                period: k as f64 * t_b,
                closure_error: errors[k as usize - 1],
            }),
            _ => Err(Error::NotClosed {
                k: predicted,
                error: errors[predicted as usize - 1],
            }),
        }
    }

    /// `max_n |zeta_n(j t_b) - z_n(0)|` for `j = 1..=periods`.
    pub fn closure_errors(&self, periods: u64) -> Result<Vec<f64>> {
        let t_b = self.base_period();
        let dt = t_b / SAMPLES_PER_PERIOD as f64;
        let total = SAMPLES_PER_PERIOD * periods as usize;
        let mut track = PhaseTrack::start();
        let mut errors = Vec::with_capacity(periods as usize);
        for i in 1..=total {
            let t = i as f64 * dt;
            track.advance(t, self.bracket(t))?;
            if i % SAMPLES_PER_PERIOD == 0 {
                let zeta = self.state(t, &track);
                errors.push(
                    zeta.iter()
                        .zip(self.z0.iter())
                        .map(|(a, b)| (a - b).norm())
                        .fold(0.0, f64::max),
                );
            }
        }
        Ok(errors)
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn zero_k_instance(m: u32) -> SolvableInstance {
        // K = 0 and zero coefficients trivially satisfy the constraints.
        let s = PolynomialSystem::new(2, m).unwrap();
        SolvableInstance::new(s, vec![c(0.6, -0.3), c(0.2, 0.9)].into(), c(0.0, 0.0)).unwrap()
    }

    #[test]
    fn zero_omega_is_rejected() {
        let s = PolynomialSystem::new(2, 4).unwrap();
        assert!(matches!(periodize(&s, 0.0), Err(Error::ZeroOmega)));
        assert!(matches!(
            PeriodicClosedForm::new(&zero_k_instance(4), 0.0),
            Err(Error::ZeroOmega)
        ));
    }

    #[test]
    fn quartic_rotation_rate_is_omega_over_three() {
        let p = periodize(&PolynomialSystem::new(2, 4).unwrap(), 1.5).unwrap();
        assert_eq!(p.rotation_rate(), 0.5);
    }

    #[test]
    fn pure_rotation_field() {
        let p = periodize(&PolynomialSystem::new(2, 3).unwrap(), 2.0).unwrap();
        let w: StateVector = vec![c(1.0, 2.0), c(-0.5, 0.0)].into();
        let f = p.eval_rhs(&w).unwrap();
        assert_eq!(f.0, vec![c(-2.0, 1.0), c(0.0, -0.5)]);
        assert!(p.eval_rhs(&StateVector::zeros(2)).unwrap().is_zero());
    }

    #[test]
    fn real_state_instant() {
        let s = PolynomialSystem::new(2, 4)
            .unwrap()
            .with(0, &[2, 2], c(0.5, 1.0))
            .unwrap()
            .with(1, &[4, 0], c(-1.0, 0.25))
            .unwrap();
        let p = periodize(&s, 3.0).unwrap();
        let x = [0.7, -1.2];
        let real = p.eval_rhs_real(&[x[0], 0.0, x[1], 0.0]).unwrap();
        let base = s
            .evaluate_rhs(&vec![c(x[0], 0.0), c(x[1], 0.0)].into())
            .unwrap();
        for n in 0..2 {
            assert_eq!(real[2 * n], base[n].re);
            assert_eq!(real[2 * n + 1], x[n] + base[n].im);
        }
        assert!(p.eval_rhs_real(&[0.0; 3]).is_err());
    }

    #[test]
    fn grid_start_and_order_are_checked() {
        let pcf = PeriodicClosedForm::new(&zero_k_instance(4), 1.0).unwrap();
        assert!(pcf.eval_grid(&[0.1, 0.2]).is_err());
        assert!(pcf.eval_grid(&[0.0, 0.2, 0.2]).is_err());
        assert!(pcf.eval_grid(&[]).is_err());
        let tr = pcf.eval_grid(&[0.0]).unwrap();
        assert_eq!(tr.states[0], *pcf.z0());
    }

    #[test]
    fn zero_k_is_pure_rotation() {
        let inst = zero_k_instance(4);
        let pcf = PeriodicClosedForm::new(&inst, 2.0).unwrap();
        let times: Vec<f64> = (0..100).map(|i| i as f64 * 0.05).collect();
        let tr = pcf.eval_grid(&times).unwrap();
        for (t, s) in tr.times.iter().zip(&tr.states) {
            let rot = Complex64::from_polar(1.0, 2.0 * t / 3.0);
            for n in 0..2 {
                assert!((s[n] - inst.z0()[n] * rot).norm() < 1e-14);
            }
        }
        let report = pcf.detect_period(DEFAULT_CLOSURE_TOL).unwrap();
        assert_eq!((report.q, report.k), (0, 3));
    }

    #[test]
    fn coarse_grid_is_detected() {
        let pcf = PeriodicClosedForm::new(&zero_k_instance(4), 1.0).unwrap();
        // K = 0 keeps g = 1, so even a coarse grid is fine here
        assert!(pcf.eval_grid(&[0.0, 3.0]).is_ok());
        let s = PolynomialSystem::new(2, 2).unwrap();
        let z0: StateVector = vec![c(0.0, 0.0), c(0.0, 0.0)].into();
        let inst = SolvableInstance::new(s, z0, c(0.9, 0.0)).unwrap();
        let pcf = PeriodicClosedForm::new(&inst, 1.0).unwrap();
        assert!(matches!(
            pcf.eval_grid(&[0.0, 3.0]),
            Err(Error::GridTooCoarse { .. })
        ));
    }

    #[test]
    fn singular_bracket_is_detected() {
        // tau(pi) = 2i for omega = 1, so K = i/2 puts a zero of g at t = pi
        let s = PolynomialSystem::new(2, 2).unwrap();
        let inst = SolvableInstance::new(s, StateVector::zeros(2), c(0.0, 0.5)).unwrap();
        let pcf = PeriodicClosedForm::new(&inst, 1.0).unwrap();
        assert!((pcf.bracket(PI)).norm() < 1e-15);
        let times: Vec<f64> = (0..=2048).map(|i| i as f64 * PI / 1024.0).collect();
        assert!(matches!(
            pcf.eval_grid(&times),
            Err(Error::SingularBracket { .. })
        ));
    }

    #[test]
    fn predicted_multiples() {
        let pcf = PeriodicClosedForm::new(&zero_k_instance(4), 1.0).unwrap();
        assert_eq!(pcf.predicted_multiple(0), 3);
        assert_eq!(pcf.predicted_multiple(1), 1);
        assert_eq!(pcf.predicted_multiple(-1), 3);
        let neg = PeriodicClosedForm::new(&zero_k_instance(4), -1.0).unwrap();
        assert_eq!(neg.predicted_multiple(-1), 1);
        assert_eq!(neg.predicted_multiple(0), 3);
        let five = PeriodicClosedForm::new(&zero_k_instance(5), 1.0).unwrap();
        assert_eq!(five.predicted_multiple(0), 4);
        assert_eq!(five.predicted_multiple(3), 2);
        let quad = PeriodicClosedForm::new(&zero_k_instance(2), 1.0).unwrap();
        assert_eq!(quad.predicted_multiple(0), 1);
        assert_eq!(quad.predicted_multiple(5), 1);
    }

    #[test]
    fn complex_time_small_angle() {
        for &(omega, t) in &[(1.0, 1e-9), (3.0, 2e-9), (-2.0, 1e-9)] {
            let tau = complex_time(omega, t);
            assert!((tau - c(t, 0.0)).norm() / t < 1e-8);
        }
        // leading correction is i omega t^2 / 2
        let tau = complex_time(1.0, 1e-4);
        assert!(((tau - c(1e-4, 0.0)).norm() / 1e-4 - 0.5e-4).abs() < 1e-12);
    }
}
