//! File formats: system and instance JSON, trajectory CSV, and JSON reports.
//!
//! Equation indices are one-based on disk. Coefficients are written in
//! canonical order; JSON numbers use the shortest round-tripping decimal form
//! and CSV cells carry 17 significant digits, so both round-trip bit-exactly.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::constraints::SolvableInstance;
use crate::error::{Error, Result};
use crate::polysys::{MultiIndex, PolynomialSystem, StateVector};
use crate::trajectory::Trajectory;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoefficientEntry {
    pub eq: usize,
    pub exponents: Vec<u32>,
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemFile {
    pub n: usize,
    pub m: u32,
    pub coefficients: Vec<CoefficientEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceFile {
    #[serde(flatten)]
    pub system: SystemFile,
    pub z0: Vec<[f64; 2]>,
    pub k: [f64; 2],
}

/// `{ "max_deviation", "samples", "t_end" }`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub max_deviation: f64,
    pub samples: usize,
    pub t_end: f64,
}

impl From<&PolynomialSystem> for SystemFile {
    fn from(s: &PolynomialSystem) -> Self {
        SystemFile {
            n: s.dim(),
            m: s.degree(),
            coefficients: s
                .iter()
                .map(|(eq, idx, c)| CoefficientEntry {
                    eq: eq + 1,
                    exponents: idx.exponents().to_vec(),
                    re: c.re,
                    im: c.im,
                })
                .collect(),
        }
    }
}

impl TryFrom<&SystemFile> for PolynomialSystem {
    type Error = Error;

    fn try_from(file: &SystemFile) -> Result<Self> {
        let mut system = PolynomialSystem::new(file.n, file.m)?;
        let mut seen = HashSet::new();
        for entry in &file.coefficients {
            if entry.eq == 0 || entry.eq > file.n {
                return Err(Error::InvalidSystem(format!(
                    "equation index {} out of range 1..={}",
                    entry.eq, file.n
                )));
            }
            let index = MultiIndex::new(entry.exponents.clone());
            index.validate(file.n, file.m)?;
            if !seen.insert((entry.eq, index.clone())) {
                return Err(Error::InvalidSystem(format!(
                    "duplicate coefficient for equation {} and exponents {index}",
                    entry.eq
                )));
            }
            system.set(entry.eq - 1, index, Complex64::new(entry.re, entry.im))?;
        }
        Ok(system)
    }
}

fn pair(c: &Complex64) -> [f64; 2] {
    [c.re, c.im]
}

impl From<&SolvableInstance> for InstanceFile {
    fn from(inst: &SolvableInstance) -> Self {
        InstanceFile {
            system: inst.system().into(),
            z0: inst.z0().iter().map(pair).collect(),
            k: pair(&inst.k()),
        }
    }
}

impl TryFrom<&InstanceFile> for SolvableInstance {
    type Error = Error;

    fn try_from(file: &InstanceFile) -> Result<Self> {
        let system = PolynomialSystem::try_from(&file.system)?;
        let z0: StateVector = file.z0.iter().map(|p| Complex64::new(p[0], p[1])).collect();
        if z0.len() != system.dim() {
            return Err(Error::DimensionMismatch {
                expected: system.dim(),
                found: z0.len(),
            });
        }
        SolvableInstance::new(system, z0, Complex64::new(file.k[0], file.k[1]))
    }
}

pub fn system_to_json(system: &PolynomialSystem) -> String {
    serde_json::to_string_pretty(&SystemFile::from(system)).expect("system serializes")
}

pub fn system_from_json(text: &str) -> Result<PolynomialSystem> {
    let file: SystemFile = serde_json::from_str(text)?;
    PolynomialSystem::try_from(&file)
}

pub fn instance_to_json(instance: &SolvableInstance) -> String {
    serde_json::to_string_pretty(&InstanceFile::from(instance)).expect("instance serializes")
}

/// Parses an instance and checks its constraints at the default tolerance.
pub fn instance_from_json(text: &str) -> Result<SolvableInstance> {
    let file: InstanceFile = serde_json::from_str(text)?;
    SolvableInstance::try_from(&file)
}

pub fn write_system_file(path: impl AsRef<Path>, system: &PolynomialSystem) -> Result<()> {
    fs::write(path, system_to_json(system) + "\n")?;
    Ok(())
}

pub fn parse_system_file(path: impl AsRef<Path>) -> Result<PolynomialSystem> {
    system_from_json(&fs::read_to_string(path)?)
}

pub fn write_instance_file(path: impl AsRef<Path>, instance: &SolvableInstance) -> Result<()> {
    fs::write(path, instance_to_json(instance) + "\n")?;
    Ok(())
}

pub fn parse_instance_file(path: impl AsRef<Path>) -> Result<SolvableInstance> {
    instance_from_json(&fs::read_to_string(path)?)
}

pub fn write_json<T: Serialize>(path: impl AsRef<Path>, value: &T) -> Result<()> {
    fs::write(path, serde_json::to_string_pretty(value)? + "\n")?;
    Ok(())
}

/// Column naming of a trajectory CSV.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CsvLayout {
    /// `t,re_z1,im_z1,...`
    Complex,
    /// `t,x1,y1,...` for the rotating system.
    Periodic,
}

fn header(layout: CsvLayout, dim: usize) -> String {
    let mut h = String::from("t");
    for n in 1..=dim {
        match layout {
            CsvLayout::Complex => write!(h, ",re_z{n},im_z{n}"),
            CsvLayout::Periodic => write!(h, ",x{n},y{n}"),
        }
        .unwrap();
    }
    h
}

pub fn trajectory_to_csv(tr: &Trajectory, layout: CsvLayout) -> String {
    let mut out = header(layout, tr.dim());
    out.push('\n');
    for (t, s) in tr.times.iter().zip(&tr.states) {
        write!(out, "{t:.16e}").unwrap();
        for c in s.iter() {
            write!(out, ",{:.16e},{:.16e}", c.re, c.im).unwrap();
        }
        out.push('\n');
    }
    out
}

pub fn write_trajectory_csv(
    path: impl AsRef<Path>,
    tr: &Trajectory,
    layout: CsvLayout,
) -> Result<()> {
    fs::write(path, trajectory_to_csv(tr, layout))?;
    Ok(())
}

/// Parses either CSV layout back into times and states.
pub fn trajectory_from_csv(text: &str) -> Result<(Vec<f64>, Vec<StateVector>)> {
    let mut lines = text.lines();
    let head = lines
        .next()
        .ok_or_else(|| Error::Parse("empty trajectory file".into()))?;
    let cols = head.split(',').count();
    if cols < 3 || cols % 2 == 0 || !head.starts_with("t,") {
        return Err(Error::Parse(format!("bad trajectory header {head:?}")));
    }
    let dim = (cols - 1) / 2;
    if head != header(CsvLayout::Complex, dim) && head != header(CsvLayout::Periodic, dim) {
        return Err(Error::Parse(format!("bad trajectory header {head:?}")));
    }
    let mut times = Vec::new();
    let mut states = Vec::new();
    for (row, line) in lines.enumerate().filter(|(_, l)| !l.trim().is_empty()) {
        let values = line
            .split(',')
            .map(|v| {
                v.trim()
                    .parse::<f64>()
                    .map_err(|e| Error::Parse(format!("row {}: {e}", row + 1)))
            })
            .collect::<Result<Vec<_>>>()?;
        if values.len() != cols {
            return Err(Error::Parse(format!(
                "row {} has {} columns, expected {cols}",
                row + 1,
                values.len()
            )));
        }
        times.push(values[0]);
        states.push(
            values[1..]
                .chunks_exact(2)
                .map(|p| Complex64::new(p[0], p[1]))
                .collect(),
        );
    }
    Ok((times, states))
}

pub fn read_trajectory_csv(path: impl AsRef<Path>) -> Result<(Vec<f64>, Vec<StateVector>)> {
    trajectory_from_csv(&fs::read_to_string(path)?)
}

/// Parses a complex number such as `1.5`, `-2i`, or `0.3-0.4i`.
pub fn parse_complex(text: &str) -> Result<Complex64> {
    text.trim()
        .parse::<Complex64>()
        .map_err(|e| Error::Parse(format!("bad complex number {text:?}: {e}")))
}

/// Comma-separated complex numbers.
pub fn parse_state(text: &str) -> Result<StateVector> {
    text.split(',').map(parse_complex).collect()
}
