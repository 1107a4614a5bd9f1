#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use polyode::closedform::{safe_horizon, ClosedFormSolution};
use polyode::constraints::{newton_solve_initial_data, solve_linear_selection, SolvableInstance};
use polyode::io::{self, CsvLayout, VerificationReport};
use polyode::oracle::{self, IntegratorConfig};
use polyode::periodic::{PeriodicClosedForm, DEFAULT_CLOSURE_TOL};
use polyode::trajectory::uniform_grid;
use polyode::{
    demo, enumerate_multi_indices, generate_random_instance, Error, Result, UnknownSelection,
};

#[derive(Parser)]
#[command(
    name = "polyode",
    version,
    about = "Build, solve and check homogeneous polynomial ODE systems with closed-form solutions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the multi-indices of N variables with total degree M.
    Enumerate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: u32,
    },
    /// Solve the constraints linearly for the selected unknowns.
    Solve {
        #[arg(long)]
        system: PathBuf,
        /// Comma-separated complex initial data, e.g. "1+0.5i,-0.3i".
        #[arg(long)]
        z0: String,
        /// Unknown slots, e.g. "K,c:1:4-0".
        #[arg(long)]
        unknowns: String,
        #[arg(long, allow_hyphen_values = true)]
        k: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Find initial data for a fixed system and K by damped Newton iteration.
    Newton {
        #[arg(long)]
        system: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        k: String,
        #[arg(long, allow_hyphen_values = true)]
        guess: String,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[arg(long, default_value_t = 100)]
        max_iter: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sample the closed-form solution to a CSV file.
    Eval {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        t_max: f64,
        #[arg(long)]
        samples: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Compare the closed form with numerical integration.
    Verify {
        #[arg(long, required_unless_present = "batch")]
        instance: Option<PathBuf>,
        /// Defaults to 0.8 min(t*, 1).
        #[arg(long)]
        t_max: Option<f64>,
        #[arg(long, default_value_t = 64)]
        samples: usize,
        #[arg(long, default_value_t = 1e-10)]
        rel_tol: f64,
        #[arg(long, default_value_t = 1e-12)]
        abs_tol: f64,
        #[arg(long, default_value_t = 1e-6)]
        threshold: f64,
        /// Verify this many generated instances instead of a file.
        #[arg(long, requires_all = ["n", "m"])]
        batch: Option<u64>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        m: Option<u32>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Sample the rotating (periodic) system to a CSV file.
    Periodize {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        omega: f64,
        #[arg(long)]
        out: PathBuf,
        /// Number of base periods; defaults to the detected period.
        #[arg(long)]
        periods: Option<u64>,
        #[arg(long, default_value_t = 1025)]
        samples: usize,
    },
    /// Detect the period of the rotating system.
    Period {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        omega: f64,
        #[arg(long, default_value_t = DEFAULT_CLOSURE_TOL)]
        tol: f64,
    },
    /// Generate a random solvable instance.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 1.0)]
        density: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a built-in demo (example1 or example2).
    Demo {
        name: String,
        #[arg(long, default_value = "demo-out")]
        out_dir: PathBuf,
    },
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, format!("{text}\n"))?,
        None => println!("{text}"),
    }
    Ok(())
}

fn verify_one(
    instance: &SolvableInstance,
    t_max: Option<f64>,
    samples: usize,
    config: &IntegratorConfig,
) -> Result<VerificationReport> {
    let t_end = t_max.unwrap_or_else(|| safe_horizon(instance.k()));
    let max_deviation = oracle::verify_instance(instance, t_end, samples, config)?;
    Ok(VerificationReport {
        max_deviation,
        samples,
        t_end,
    })
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Enumerate { n, m } => {
            let list = enumerate_multi_indices(n, m)?;
            for idx in &list {
                println!("{idx}");
            }
            eprintln!("{} indices", list.len());
        }
        Command::Solve {
            system,
            z0,
            unknowns,
            k,
            out,
        } => {
            let system = io::parse_system_file(system)?;
            let z0 = io::parse_state(&z0)?;
            let selection: UnknownSelection = unknowns.parse()?;
            let k = k.as_deref().map(io::parse_complex).transpose()?;
            let inst = solve_linear_selection(&system, &z0, k, &selection)?;
            emit(&io::instance_to_json(&inst), out.as_ref())?;
        }
        Command::Newton {
            system,
            k,
            guess,
            tol,
            max_iter,
            out,
        } => {
            let system = io::parse_system_file(system)?;
            let k = io::parse_complex(&k)?;
            let guess = io::parse_state(&guess)?;
            let outcome = newton_solve_initial_data(&system, k, &guess, tol, max_iter)?;
            eprintln!(
                "converged in {} iterations, residual {:e}",
                outcome.iterations,
                outcome.residual()
            );
            let inst = SolvableInstance::new(system, outcome.z0, k)?;
            emit(&io::instance_to_json(&inst), out.as_ref())?;
        }
        Command::Eval {
            instance,
            t_max,
            samples,
            out,
        } => {
            let inst = io::parse_instance_file(instance)?;
            let sol = ClosedFormSolution::from_instance(&inst);
            let tr = sol.sample(&uniform_grid(t_max, samples))?;
            io::write_trajectory_csv(out, &tr, CsvLayout::Complex)?;
        }
        Command::Verify {
            instance,
            t_max,
            samples,
            rel_tol,
            abs_tol,
            threshold,
            batch,
            n,
            m,
            seed,
        } => {
            let config = IntegratorConfig {
                rel_tol,
                abs_tol,
                ..IntegratorConfig::default()
            };
            let reports: Vec<VerificationReport> = match (batch, instance) {
                (Some(count), _) => {
                    let (n, m) = (n.unwrap_or(2), m.unwrap_or(2));
                    let results: Vec<Result<VerificationReport>> = std::thread::scope(|scope| {
                        let handles: Vec<_> = (0..count)
                            .map(|i| {
                                let config = &config;
                                scope.spawn(move || {
                                    let inst = generate_random_instance(n, m, seed + i, 1.0)?;
                                    verify_one(&inst, t_max, samples, config)
                                })
                            })
                            .collect();
                        handles
                            .into_iter()
                            .map(|h| h.join().expect("worker panicked"))
                            .collect()
                    });
                    results.into_iter().collect::<Result<_>>()?
                }
                (None, Some(path)) => {
                    let inst = io::parse_instance_file(path)?;
                    vec![verify_one(&inst, t_max, samples, &config)?]
                }
                (None, None) => unreachable!("clap requires --instance or --batch"),
            };
            for r in &reports {
                println!("{}", serde_json::to_string(r)?);
            }
            let worst = reports.iter().map(|r| r.max_deviation).fold(0.0, f64::max);
            if !(worst <= threshold) {
                return Err(Error::ToleranceFailure {
                    what: "max deviation".into(),
                    value: worst,
                    threshold,
                });
            }
        }
        Command::Periodize {
            instance,
            omega,
            out,
            periods,
            samples,
        } => {
            let inst = io::parse_instance_file(instance)?;
            let pcf = PeriodicClosedForm::new(&inst, omega)?;
            let periods = match periods {
                Some(p) => p,
                None => pcf.detect_period(DEFAULT_CLOSURE_TOL)?.k,
            };
            let times = uniform_grid(periods as f64 * pcf.base_period(), samples);
            let tr = pcf.sample_refined(&times)?;
            io::write_trajectory_csv(out, &tr, CsvLayout::Periodic)?;
        }
        Command::Period {
            instance,
            omega,
            tol,
        } => {
            let inst = io::parse_instance_file(instance)?;
            let report = PeriodicClosedForm::new(&inst, omega)?.detect_period(tol)?;
            println!("{}", serde_json::to_string_pretty(&report)?);
        }
        Command::Gen {
            n,
            m,
            seed,
            density,
            out,
        } => {
            let inst = generate_random_instance(n, m, seed, density)?;
            emit(&io::instance_to_json(&inst), out.as_ref())?;
        }
        Command::Demo { name, out_dir } => {
            for path in demo::run_demo(&name, &out_dir)? {
                println!("{}", path.display());
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
