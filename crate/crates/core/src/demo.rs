//! The two built-in demonstrations: a two-variable quartic instance
//! (`example1`) and its rotating periodic counterpart (`example2`).
//!
//! Both are seeded, so every run produces the same files. Each demo checks its
//! own tolerances and fails with [`Error::ToleranceFailure`] when one is missed.

use std::path::{Path, PathBuf};

use num_complex::Complex64;

use crate::closedform::{safe_horizon, ClosedFormSolution};
use crate::constraints::{solve_linear_selection, SolvableInstance, UnknownSelection};
use crate::error::{Error, Result};
use crate::generate::{random_free_coefficients, random_state, rng, unit_square};
use crate::io::{self, CsvLayout, VerificationReport};
use crate::oracle::{self, IntegratorConfig, Verification};
use crate::periodic::{PeriodReport, PeriodicClosedForm, DEFAULT_CLOSURE_TOL};
use crate::trajectory::uniform_grid;

pub const DEMO_SEED: u64 = 20;
pub const DEMO_SAMPLES: usize = 64;
pub const DEMO_DEVIATION_LIMIT: f64 = 1e-6;
pub const DEMO_RESIDUAL_LIMIT: f64 = 1e-10;
pub const DEMO_OMEGA: f64 = 1.0;
/// `|K|` in the periodic demo, small enough that `g` stays in the right half-plane.
pub const DEMO_PERIODIC_K: f64 = 0.1;

/// The `N = 2`, `M = 4` instance with `c[1,(4,0)]` and `c[2,(0,4)]` solved for.
fn quartic_instance(seed: u64, k_modulus: Option<f64>) -> Result<SolvableInstance> {
    let mut rng = rng(seed);
    let z0 = random_state(2, &mut rng);
    let system = random_free_coefficients(2, 4, 1.0, &mut rng)?;
    let mut k = unit_square(&mut rng);
    if let Some(modulus) = k_modulus {
        k = k / k.norm() * modulus;
    }
    let selection: UnknownSelection = "c:1:4-0,c:2:0-4".parse()?;
    solve_linear_selection(&system, &z0, Some(k), &selection)
}

fn ensure(what: &str, value: f64, threshold: f64) -> Result<()> {
    if value < threshold {
        Ok(())
    } else {
        Err(Error::ToleranceFailure {
            what: what.to_string(),
            value,
            threshold,
        })
    }
}

fn report(v: &Verification) -> VerificationReport {
    VerificationReport {
        max_deviation: v.max_deviation,
        samples: v.samples,
        t_end: v.t_end,
    }
}

#[derive(Debug, Clone)]
pub struct Example1 {
    pub instance: SolvableInstance,
    pub residual: f64,
    pub verification: Verification,
}

/// Builds and verifies the quartic demo.
pub fn example1() -> Result<Example1> {
    let instance = quartic_instance(DEMO_SEED, None)?;
    let residual = instance.residual().max_modulus();
    ensure("constraint residual", residual, DEMO_RESIDUAL_LIMIT)?;
    let verification = oracle::verify_instance_report(
        &instance,
        safe_horizon(instance.k()),
        DEMO_SAMPLES,
        &IntegratorConfig::default(),
    )?;
    ensure(
        "closed form vs integrator",
        verification.max_deviation,
        DEMO_DEVIATION_LIMIT,
    )?;
    Ok(Example1 {
        instance,
        residual,
        verification,
    })
}

impl Example1 {
    /// Writes system, instance, both trajectories and the verification report.
    pub fn write(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        std::fs::create_dir_all(dir)?;
        let paths: Vec<PathBuf> = [
            "system.json",
            "instance.json",
            "closed_form.csv",
            "integrated.csv",
            "verification.json",
        ]
        .iter()
        .map(|f| dir.join(f))
        .collect();
        io::write_system_file(&paths[0], self.instance.system())?;
        io::write_instance_file(&paths[1], &self.instance)?;
        io::write_trajectory_csv(
            &paths[2],
            &self.verification.closed_form,
            CsvLayout::Complex,
        )?;
        io::write_trajectory_csv(&paths[3], &self.verification.integrated, CsvLayout::Complex)?;
        io::write_json(&paths[4], &report(&self.verification))?;
        Ok(paths)
    }
}

#[derive(Debug, Clone)]
pub struct Example2 {
    pub instance: SolvableInstance,
    pub periodic: PeriodicClosedForm,
    /// Real and imaginary parts of both complex constraint residuals.
    pub real_residuals: [f64; 4],
    pub period: PeriodReport,
    pub verification: Verification,
    pub integrated_closure: f64,
}

/// Builds the periodic demo: a quartic instance with `|K| = 0.1`, rotated with `omega = 1`.
pub fn example2() -> Result<Example2> {
    let instance = quartic_instance(DEMO_SEED + 1, Some(DEMO_PERIODIC_K))?;
    let r = instance.residual();
    let real_residuals = [r[0].re, r[0].im, r[1].re, r[1].im];
    let worst = real_residuals.iter().map(|v| v.abs()).fold(0.0, f64::max);
    ensure("real constraint residual", worst, DEMO_RESIDUAL_LIMIT)?;

    let periodic = PeriodicClosedForm::new(&instance, DEMO_OMEGA)?;
    let config = IntegratorConfig::default();
    let verification = oracle::verify_periodic_report(&periodic, 1, 257, &config)?;
    ensure(
        "periodic closed form vs integrator",
        verification.max_deviation,
        DEMO_DEVIATION_LIMIT,
    )?;
    let period = periodic.detect_period(DEFAULT_CLOSURE_TOL)?;
    let integrated_closure = oracle::integrated_closure(&periodic, period.k, &config)?;
    ensure(
        "integrated closure",
        integrated_closure,
        DEMO_DEVIATION_LIMIT,
    )?;
    Ok(Example2 {
        instance,
        periodic,
        real_residuals,
        period,
        verification,
        integrated_closure,
    })
}

impl Example2 {
    /// Writes the instance, the orbit over one full period, the period report and
    /// the periodic verification report.
    pub fn write(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        std::fs::create_dir_all(dir)?;
        let paths: Vec<PathBuf> = [
            "system.json",
            "instance.json",
            "zeta.csv",
            "periodic_integrated.csv",
            "period.json",
            "periodic_verification.json",
        ]
        .iter()
        .map(|f| dir.join(f))
        .collect();
        io::write_system_file(&paths[0], self.instance.system())?;
        io::write_instance_file(&paths[1], &self.instance)?;
        let times = uniform_grid(self.period.period, 1 + 512 * self.period.k as usize);
        let orbit = self.periodic.sample_refined(&times)?;
        io::write_trajectory_csv(&paths[2], &orbit, CsvLayout::Periodic)?;
        io::write_trajectory_csv(
            &paths[3],
            &self.verification.integrated,
            CsvLayout::Periodic,
        )?;
        io::write_json(&paths[4], &self.period)?;
        io::write_json(&paths[5], &report(&self.verification))?;
        Ok(paths)
    }
}

/// Runs a demo by name (`example1` or `example2`) and writes its files to `out_dir`.
pub fn run_demo(name: &str, out_dir: &Path) -> Result<Vec<PathBuf>> {
    match name {
        "example1" => example1()?.write(out_dir),
        "example2" => example2()?.write(out_dir),
        other => Err(Error::InvalidArgument(format!(
            "unknown demo {other:?}; expected example1 or example2"
        ))),
    }
}

/// Worst gap between `ln|z_n(t)/z_n(0)|` and `ln|1 + K t| / (1 - M)` over `times`.
pub fn log_ratio_gap(instance: &SolvableInstance, times: &[f64]) -> Result<f64> {
    let sol = ClosedFormSolution::from_instance(instance);
    let exponent = sol.exponent();
    let mut worst: f64 = 0.0;
    for &t in times {
        let z = sol.eval(t)?;
        let expected = exponent * (Complex64::new(1.0, 0.0) + instance.k() * t).norm().ln();
        for (zt, z0) in z.iter().zip(instance.z0().iter()) {
            worst = worst.max(((zt / z0).norm().ln() - expected).abs());
        }
    }
    Ok(worst)
}
