//! Independent numerical integration used to check the closed forms.
//!
//! The integrator only ever sees a right-hand-side closure, never a closed-form
//! formula. Complex states are packed as `[re_1, im_1, ..., re_N, im_N]` and
//! integrated with an adaptive Dormand-Prince 5(4) pair; samples between steps
//! come from the pair's 4th-order continuous extension.

use num_complex::Complex64;

use crate::closedform::ClosedFormSolution;
use crate::constraints::SolvableInstance;
use crate::error::{Error, Result};
use crate::periodic::{periodize, PeriodicClosedForm};
use crate::polysys::StateVector;
use crate::trajectory::{uniform_grid, Source, StepStats, Trajectory};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub initial_step: f64,
    pub max_steps: usize,
    pub min_step: f64,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        IntegratorConfig {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            initial_step: 1e-4,
            max_steps: 10_000_000,
            min_step: 1e-12,
        }
    }
}

impl IntegratorConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [self.rel_tol, self.abs_tol, self.initial_step, self.min_step]
            .iter()
            .all(|v| *v > 0.0 && v.is_finite());
        if !positive || self.max_steps == 0 {
            return Err(Error::InvalidArgument(
                "integrator settings must all be positive".into(),
            ));
        }
        if self.rel_tol < 1e-14 {
            return Err(Error::InvalidArgument(
                "rel_tol must be at least 1e-14".into(),
            ));
        }
        Ok(())
    }

    /// Same settings with both tolerances scaled by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        IntegratorConfig {
            rel_tol: self.rel_tol * factor,
            abs_tol: self.abs_tol * factor,
            ..*self
        }
    }
}

// Dormand-Prince 5(4) tableau. Right-hand sides are autonomous, so the nodes are unused.
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
// 5th-order solution minus embedded 4th-order solution
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];
// continuous extension
const D: [f64; 7] = [
    -12715105075.0 / 11282082432.0,
    0.0,
    87487479700.0 / 32700410799.0,
    -10690763975.0 / 1880347072.0,
    701980252875.0 / 199316789632.0,
    -1453857185.0 / 822651844.0,
    69997945.0 / 29380423.0,
];

const SAFETY: f64 = 0.9;
const MIN_FACTOR: f64 = 0.2;
const MAX_FACTOR: f64 = 5.0;

/// Samples of an integration on the packed real state.
#[derive(Debug, Clone, PartialEq)]
pub struct RealSolution {
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    pub stats: StepStats,
}

/// Integrates `y' = f(y)` from `t = 0` to `t_end` with Dormand-Prince 5(4).
///
/// States are reported at `sample_times` (which must be sorted and lie in
/// `[0, t_end]`); when `sample_times` is empty every accepted step is reported.
/// The error test is componentwise: `|err_i| <= abs_tol + rel_tol * max(|y_i|, |y_new_i|)`.
pub fn integrate_real<F>(
    mut f: F,
    y0: &[f64],
    t_end: f64,
    sample_times: &[f64],
    config: &IntegratorConfig,
) -> Result<RealSolution>
where
    F: FnMut(&[f64], &mut [f64]),
{
    config.validate()?;
    if !(t_end > 0.0) || !t_end.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "t_end must be positive, got {t_end}"
        )));
    }
    if sample_times.windows(2).any(|w| w[1] < w[0])
        || sample_times.iter().any(|&t| !(0.0..=t_end).contains(&t))
    {
        return Err(Error::InvalidArgument(
            "sample times must be sorted and lie within [0, t_end]".into(),
        ));
    }

    let dim = y0.len();
    let every_step = sample_times.is_empty();
    let mut out = RealSolution {
        times: Vec::new(),
        states: Vec::new(),
        stats: StepStats {
            min_step: f64::INFINITY,
            ..StepStats::default()
        },
    };
    let mut next_sample = 0;
    let emit = |out: &mut RealSolution, t: f64, y: Vec<f64>| {
        out.times.push(t);
        out.states.push(y);
    };
    if every_step {
        emit(&mut out, 0.0, y0.to_vec());
    }
    while next_sample < sample_times.len() && sample_times[next_sample] == 0.0 {
        emit(&mut out, 0.0, y0.to_vec());
        next_sample += 1;
    }

    let mut t = 0.0;
    let mut y = y0.to_vec();
    let mut k: Vec<Vec<f64>> = vec![vec![0.0; dim]; 7];
    let mut stage = vec![0.0; dim];
    let mut y_new = vec![0.0; dim];
    f(&y, &mut k[0]);
    out.stats.rhs_evaluations += 1;
    let mut h = config.initial_step.min(t_end);
    let mut steps = 0;

    while t < t_end {
        if steps >= config.max_steps {
            return Err(Error::MaxStepsExceeded { t, steps });
        }
        if h < config.min_step {
            return Err(Error::StepUnderflow { t, step: h });
        }
        let last = t + h >= t_end;
        if last {
            h = t_end - t;
        }

        for s in 1..7 {
            for i in 0..dim {
                let acc: f64 = (0..s).map(|j| A[s][j] * k[j][i]).sum();
                stage[i] = y[i] + h * acc;
            }
            f(&stage, &mut k[s]);
            if s == 6 {
                y_new.copy_from_slice(&stage);
            }
        }
        out.stats.rhs_evaluations += 6;
        steps += 1;

        let mut err: f64 = 0.0;
        for i in 0..dim {
            let e: f64 = h * (0..7).map(|j| E[j] * k[j][i]).sum::<f64>();
            let scale = config.abs_tol + config.rel_tol * y[i].abs().max(y_new[i].abs());
            err = err.max((e / scale).abs());
        }
        if !err.is_finite() || y_new.iter().any(|v| !v.is_finite()) {
            err = f64::INFINITY;
        }

        if err <= 1.0 {
            out.stats.accepted += 1;
            out.stats.min_step = out.stats.min_step.min(h);
            let t_new = if last { t_end } else { t + h };

            if every_step {
                emit(&mut out, t_new, y_new.clone());
            } else if next_sample < sample_times.len() && sample_times[next_sample] <= t_new {
                let cont = continuous_extension(&y, &y_new, &k, h);
                while next_sample < sample_times.len() && sample_times[next_sample] <= t_new {
                    let ts = sample_times[next_sample];
                    let state = if ts == t_new {
                        y_new.clone()
                    } else {
                        interpolate(&cont, (ts - t) / h)
                    };
                    emit(&mut out, ts, state);
                    next_sample += 1;
                }
            }

            t = t_new;
            std::mem::swap(&mut y, &mut y_new);
            // first-same-as-last: stage 7 is f at the new point
            let fsal = k[6].clone();
            k[0] = fsal;
            let factor = if err == 0.0 {
                MAX_FACTOR
            } else {
                (SAFETY * err.powf(-0.2)).clamp(MIN_FACTOR, MAX_FACTOR)
            };
            h *= factor;
        } else {
            out.stats.rejected += 1;
            let factor = if err.is_finite() {
                (SAFETY * err.powf(-0.2)).clamp(MIN_FACTOR, 1.0)
            } else {
                MIN_FACTOR
            };
            h *= factor;
        }
    }
    Ok(out)
}

fn continuous_extension(y: &[f64], y_new: &[f64], k: &[Vec<f64>], h: f64) -> [Vec<f64>; 5] {
    let dim = y.len();
    let mut cont = [
        y.to_vec(),
        vec![0.0; dim],
        vec![0.0; dim],
        vec![0.0; dim],
        vec![0.0; dim],
    ];
    for i in 0..dim {
        let ydiff = y_new[i] - y[i];
        let bspl = h * k[0][i] - ydiff;
        cont[1][i] = ydiff;
        cont[2][i] = bspl;
        cont[3][i] = ydiff - h * k[6][i] - bspl;
        cont[4][i] = h * (0..7).map(|j| D[j] * k[j][i]).sum::<f64>();
    }
    cont
}

fn interpolate(cont: &[Vec<f64>; 5], theta: f64) -> Vec<f64> {
    let theta1 = 1.0 - theta;
    (0..cont[0].len())
        .map(|i| {
            cont[0][i]
                + theta
                    * (cont[1][i]
                        + theta1 * (cont[2][i] + theta * (cont[3][i] + theta1 * cont[4][i])))
        })
        .collect()
}

fn pack(z: &[Complex64]) -> Vec<f64> {
    z.iter().flat_map(|c| [c.re, c.im]).collect()
}

fn unpack(y: &[f64]) -> StateVector {
    y.chunks_exact(2)
        .map(|p| Complex64::new(p[0], p[1]))
        .collect()
}

/// Wraps a complex right-hand side as a packed real one.
fn packed_rhs<F>(mut rhs: F) -> impl FnMut(&[f64], &mut [f64])
where
    F: FnMut(&StateVector) -> StateVector,
{
    move |y, dy| {
        let fz = rhs(&unpack(y));
        for (slot, v) in dy.chunks_exact_mut(2).zip(fz.iter()) {
            slot[0] = v.re;
            slot[1] = v.im;
        }
    }
}

/// Integrates a complex autonomous system `z' = rhs(z)` from `z0` up to `t_end`.
pub fn integrate<F>(
    rhs: F,
    z0: &StateVector,
    t_end: f64,
    sample_times: &[f64],
    config: &IntegratorConfig,
) -> Result<Trajectory>
where
    F: FnMut(&StateVector) -> StateVector,
{
    let sol = integrate_real(packed_rhs(rhs), &pack(z0), t_end, sample_times, config)?;
    Ok(Trajectory {
        times: sol.times,
        states: sol.states.iter().map(|y| unpack(y)).collect(),
        source: Source::Integrated,
        stats: sol.stats,
    })
}

/// Classical fixed-step RK4, kept as a cross-check for the adaptive pair.
pub fn integrate_rk4<F>(
    mut rhs: F,
    z0: &StateVector,
    t_end: f64,
    steps: usize,
) -> Result<Trajectory>
where
    F: FnMut(&StateVector) -> StateVector,
{
    if steps == 0 || !(t_end > 0.0) {
        return Err(Error::InvalidArgument(
            "rk4 needs steps >= 1 and t_end > 0".into(),
        ));
    }
    let h = t_end / steps as f64;
    let mut z = z0.clone();
    let mut times = vec![0.0];
    let mut states = vec![z.clone()];
    let axpy = |z: &StateVector, k: &StateVector, a: f64| -> StateVector {
        z.iter().zip(k.iter()).map(|(x, d)| x + d * a).collect()
    };
    for i in 0..steps {
        let k1 = rhs(&z);
        let k2 = rhs(&axpy(&z, &k1, h / 2.0));
        let k3 = rhs(&axpy(&z, &k2, h / 2.0));
        let k4 = rhs(&axpy(&z, &k3, h));
        z = z
            .iter()
            .enumerate()
            .map(|(n, x)| x + (k1[n] + k2[n] * 2.0 + k3[n] * 2.0 + k4[n]) * (h / 6.0))
            .collect();
        times.push(if i + 1 == steps {
            t_end
        } else {
            h * (i + 1) as f64
        });
        states.push(z.clone());
    }
    Ok(Trajectory {
        times,
        states,
        source: Source::Integrated,
        stats: StepStats {
            accepted: steps,
            rejected: 0,
            rhs_evaluations: 4 * steps,
            min_step: h,
        },
    })
}

/// Outcome of comparing a closed form with the integrator.
#[derive(Debug, Clone, PartialEq)]
pub struct Verification {
    pub max_deviation: f64,
    pub samples: usize,
    pub t_end: f64,
    pub closed_form: Trajectory,
    pub integrated: Trajectory,
}

fn check_samples(samples: usize) -> Result<()> {
    if samples < 2 {
        return Err(Error::InvalidArgument("need at least 2 samples".into()));
    }
    Ok(())
}

/// Integrates the base system of `instance` and compares it with the closed form
/// at `samples` uniform times on `[0, t_end]`.
pub fn verify_instance_report(
    instance: &SolvableInstance,
    t_end: f64,
    samples: usize,
    config: &IntegratorConfig,
) -> Result<Verification> {
    check_samples(samples)?;
    let sol = ClosedFormSolution::from_instance(instance);
    if let Some(t_star) = sol.blow_up_time() {
        if t_end >= t_star {
            return Err(Error::SingularTime {
                t: t_end,
                modulus: (Complex64::new(1.0, 0.0) + sol.k() * t_end).norm(),
            });
        }
    }
    let times = uniform_grid(t_end, samples);
    let closed_form = sol.sample(&times)?;
    let system = instance.system();
    let integrated = integrate(
        |z| system.evaluate_rhs(z).expect("state dimension fixed by z0"),
        instance.z0(),
        t_end,
        &times,
        config,
    )?;
    Ok(Verification {
        max_deviation: integrated.max_relative_deviation(&closed_form),
        samples,
        t_end,
        closed_form,
        integrated,
    })
}

/// Max relative deviation between integrator and closed form; see [`verify_instance_report`].
pub fn verify_instance(
    instance: &SolvableInstance,
    t_end: f64,
    samples: usize,
    config: &IntegratorConfig,
) -> Result<f64> {
    verify_instance_report(instance, t_end, samples, config).map(|v| v.max_deviation)
}

/// Integrates the periodic system over `periods` base periods and compares it with
/// the continued closed form at `samples` uniform times.
pub fn verify_periodic_report(
    pcf: &PeriodicClosedForm,
    periods: u32,
    samples: usize,
    config: &IntegratorConfig,
) -> Result<Verification> {
    check_samples(samples)?;
    if periods == 0 {
        return Err(Error::InvalidArgument("need at least one period".into()));
    }
    let t_end = periods as f64 * pcf.base_period();
    let times = uniform_grid(t_end, samples);
    let closed_form = pcf.sample_refined(&times)?;
    let psys = periodize(pcf.system(), pcf.omega())?;
    let integrated = integrate(
        |w| psys.eval_rhs(w).expect("state dimension fixed by z0"),
        pcf.z0(),
        t_end,
        &times,
        config,
    )?;
    Ok(Verification {
        max_deviation: integrated.max_relative_deviation(&closed_form),
        samples,
        t_end,
        closed_form,
        integrated,
    })
}

/// Integrates the periodic system over `k` base periods and returns the max
/// distance of the endpoint from `z0`. Uses no closed-form information.
pub fn integrated_closure(
    pcf: &PeriodicClosedForm,
    k: u64,
    config: &IntegratorConfig,
) -> Result<f64> {
    if k == 0 {
        return Err(Error::InvalidArgument("closure needs k >= 1".into()));
    }
    let psys = periodize(pcf.system(), pcf.omega())?;
    let t_end = k as f64 * pcf.base_period();
    let tr = integrate(
        |w| psys.eval_rhs(w).expect("state dimension fixed by z0"),
        pcf.z0(),
        t_end,
        &[t_end],
        config,
    )?;
    let end = &tr.states[0];
    Ok(end
        .iter()
        .zip(pcf.z0().iter())
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max))
}

pub fn verify_periodic(
    pcf: &PeriodicClosedForm,
    periods: u32,
    samples: usize,
    config: &IntegratorConfig,
) -> Result<f64> {
    verify_periodic_report(pcf, periods, samples, config).map(|v| v.max_deviation)
}
