//! Homogeneous polynomial right-hand sides.
//!
//! A [`PolynomialSystem`] holds the coefficients `c[n, m]` of
//!
//! ```text
//! dz_n/dt = sum over |m| = M of c[n, m] * z_1^m_1 * ... * z_N^m_N,   n = 1..N
//! ```
//!
//! in sparse form: absent monomials are zero. Iteration, serialization and
//! floating-point summation all follow the canonical multi-index order,
//! lexicographically descending on the exponent tuple, so `(4,0)` comes
//! before `(3,1)` and `(0,4)` is last.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Deref, DerefMut};
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Exponent tuple `(m_1, ..., m_N)` identifying a monomial.
///
/// `Ord` is the canonical order: lexicographically *descending* on the
/// exponents, so sorted collections iterate `(M,0,..)` first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(exponents: Vec<u32>) -> Self {
        MultiIndex(exponents)
    }

    /// The monomial `z_var^degree` in `dim` variables.
    pub fn pure(dim: usize, var: usize, degree: u32) -> Self {
        let mut e = vec![0; dim];
        e[var] = degree;
        MultiIndex(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Total degree `sum m_l`.
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Checks that the index belongs to a system with `dim` variables and degree `degree`.
    pub fn validate(&self, dim: usize, degree: u32) -> Result<()> {
        if self.len() != dim {
            return Err(Error::InvalidMultiIndex(format!(
                "{self} has {} exponents, system has {dim} variables",
                self.len()
            )));
        }
        if self.degree() != degree {
            return Err(Error::InvalidMultiIndex(format!(
                "{self} has total degree {}, system degree is {degree}",
                self.degree()
            )));
        }
        Ok(())
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.cmp(&self.0)
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Dash-separated exponents, e.g. `4-0`.
impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("-")?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

impl FromStr for MultiIndex {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.split('-')
            .map(|p| {
                p.trim()
                    .parse::<u32>()
                    .map_err(|e| Error::Parse(format!("bad exponent {p:?} in {s:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()
            .map(MultiIndex)
    }
}

/// All multi-indices of length `dim` summing to `degree`, in canonical order.
///
/// The count is `binomial(degree + dim - 1, dim - 1)`.
pub fn enumerate_multi_indices(dim: usize, degree: u32) -> Result<Vec<MultiIndex>> {
    if dim == 0 {
        return Err(Error::InvalidArgument(
            "multi-indices need at least one variable".into(),
        ));
    }
    let mut out =
        Vec::with_capacity(binomial(degree as u64 + dim as u64 - 1, dim as u64 - 1) as usize);
    let mut current = vec![0u32; dim];
    fill(&mut current, 0, degree, &mut out);
    Ok(out)
}

fn fill(current: &mut [u32], pos: usize, remaining: u32, out: &mut Vec<MultiIndex>) {
    if pos + 1 == current.len() {
        current[pos] = remaining;
        out.push(MultiIndex(current.to_vec()));
        return;
    }
    for e in (0..=remaining).rev() {
        current[pos] = e;
        fill(current, pos + 1, remaining - e, out);
    }
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// Ordered tuple of complex state components `z_1, ..., z_N`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct StateVector(pub Vec<Complex64>);

impl StateVector {
    pub fn zeros(dim: usize) -> Self {
        StateVector(vec![Complex64::new(0.0, 0.0); dim])
    }

    /// Largest component modulus; zero for an empty vector.
    pub fn max_modulus(&self) -> f64 {
        self.0.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| c.re == 0.0 && c.im == 0.0)
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.is_finite())
    }
}

impl Deref for StateVector {
    type Target = Vec<Complex64>;

    fn deref(&self) -> &Self::Target {
        &self.0
    }
}

impl DerefMut for StateVector {
    fn deref_mut(&mut self) -> &mut Self::Target {
        &mut self.0
    }
}

impl From<Vec<Complex64>> for StateVector {
    fn from(v: Vec<Complex64>) -> Self {
        StateVector(v)
    }
}

impl FromIterator<Complex64> for StateVector {
    fn from_iter<I: IntoIterator<Item = Complex64>>(iter: I) -> Self {
        StateVector(iter.into_iter().collect())
    }
}

/// Componentwise `lambda * z`.
pub fn scale_state(z: &StateVector, lambda: Complex64) -> StateVector {
    z.iter().map(|c| c * lambda).collect()
}

/// `N` equations, each a homogeneous polynomial of degree `M` in `N` complex variables.
///
/// Equation indices are zero-based in this API; the file formats and the CLI
/// use one-based indices.
#[derive(Debug, Clone, PartialEq)]
pub struct PolynomialSystem {
    dim: usize,
    degree: u32,
    // one map per equation; values are never exactly zero
    equations: Vec<BTreeMap<MultiIndex, Complex64>>,
}

impl PolynomialSystem {
    /// An all-zero system. Both `dim` and `degree` must be at least 2.
    pub fn new(dim: usize, degree: u32) -> Result<Self> {
        if dim < 2 || degree < 2 {
            return Err(Error::InvalidSystem(format!(
                "need N >= 2 and M >= 2, got N = {dim}, M = {degree}"
            )));
        }
        Ok(PolynomialSystem {
            dim,
            degree,
            equations: vec![BTreeMap::new(); dim],
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// Sets `c[eq, index]`; storing zero removes the entry.
    pub fn set(&mut self, eq: usize, index: MultiIndex, value: Complex64) -> Result<()> {
        if eq >= self.dim {
            return Err(Error::InvalidSystem(format!(
                "equation index {} out of range 1..={}",
                eq + 1,
                self.dim
            )));
        }
        index.validate(self.dim, self.degree)?;
        if !value.is_finite() {
            return Err(Error::InvalidSystem(format!(
                "coefficient c[{}, {index}] is not finite",
                eq + 1
            )));
        }
        if value.re == 0.0 && value.im == 0.0 {
            self.equations[eq].remove(&index);
        } else {
            self.equations[eq].insert(index, value);
        }
        Ok(())
    }

    /// Builder form of [`set`](Self::set).
    pub fn with(mut self, eq: usize, exponents: &[u32], value: Complex64) -> Result<Self> {
        self.set(eq, MultiIndex::new(exponents.to_vec()), value)?;
        Ok(self)
    }

    pub fn coefficient(&self, eq: usize, index: &MultiIndex) -> Complex64 {
        self.equations
            .get(eq)
            .and_then(|m| m.get(index))
            .copied()
            .unwrap_or_default()
    }

    /// Stored terms of equation `eq` in canonical order.
    pub fn terms(&self, eq: usize) -> impl Iterator<Item = (&MultiIndex, &Complex64)> {
        self.equations[eq].iter()
    }

    /// All stored `(eq, index, coefficient)` triples, equation-major, canonical order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, &MultiIndex, &Complex64)> {
        self.equations
            .iter()
            .enumerate()
            .flat_map(|(n, m)| m.iter().map(move |(k, v)| (n, k, v)))
    }

    /// Number of stored (nonzero) coefficients.
    pub fn num_terms(&self) -> usize {
        self.equations.iter().map(BTreeMap::len).sum()
    }

    pub(crate) fn check_state(&self, z: &StateVector) -> Result<()> {
        if z.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: z.len(),
            });
        }
        Ok(())
    }

    /// Evaluates every right-hand side at `z`.
    pub fn evaluate_rhs(&self, z: &StateVector) -> Result<StateVector> {
        self.check_state(z)?;
        let powers = PowerTable::new(z, self.degree);
        Ok(self
            .equations
            .iter()
            .map(|terms| {
                terms
                    .iter()
                    .fold(Complex64::new(0.0, 0.0), |acc, (idx, c)| {
                        acc + c * powers.monomial(idx)
                    })
            })
            .collect())
    }
}

/// Integer powers `z_l^k`, `k = 0..=degree`, built by repeated multiplication.
pub(crate) struct PowerTable {
    powers: Vec<Vec<Complex64>>,
}

impl PowerTable {
    pub(crate) fn new(z: &[Complex64], degree: u32) -> Self {
        let powers = z
            .iter()
            .map(|&zl| {
                let mut row = Vec::with_capacity(degree as usize + 1);
                let mut p = Complex64::new(1.0, 0.0);
                row.push(p);
                for _ in 0..degree {
                    p *= zl;
                    row.push(p);
                }
                row
            })
            .collect();
        PowerTable { powers }
    }

    /// `z^index`; a zero exponent contributes the factor 1, so `0^0 = 1`.
    pub(crate) fn monomial(&self, index: &MultiIndex) -> Complex64 {
        index
            .exponents()
            .iter()
            .zip(&self.powers)
            .fold(Complex64::new(1.0, 0.0), |acc, (&e, row)| {
                acc * row[e as usize]
            })
    }

    /// `d/dz_var z^index`, i.e. `m_var * z^(index - e_var)`.
    pub(crate) fn monomial_derivative(&self, index: &MultiIndex, var: usize) -> Complex64 {
        let m = index.exponents()[var];
        if m == 0 {
            return Complex64::new(0.0, 0.0);
        }
        let rest = index.exponents().iter().zip(&self.powers).enumerate().fold(
            Complex64::new(1.0, 0.0),
            |acc, (l, (&e, row))| {
                let e = if l == var { e - 1 } else { e };
                acc * row[e as usize]
            },
        );
        rest * m as f64
    }
}
