//! Dense complex linear solves for the tiny systems that constraint solving produces.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Row-major square matrix.
pub type ComplexMatrix = Vec<Vec<Complex64>>;

/// Relative pivot threshold: a pivot is declared zero below this times the
/// largest entry modulus of the original matrix.
pub const PIVOT_THRESHOLD: f64 = 1e-13;

/// Solves `a x = b` by Gaussian elimination with partial pivoting.
pub fn solve(a: &ComplexMatrix, b: &[Complex64]) -> Result<Vec<Complex64>> {
    let n = b.len();
    if a.len() != n || a.iter().any(|row| row.len() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: a.len(),
        });
    }
    let scale = a
        .iter()
        .flat_map(|row| row.iter().map(|c| c.norm()))
        .fold(0.0, f64::max);
    let threshold = PIVOT_THRESHOLD * scale;
    let mut m: Vec<Vec<Complex64>> = a
        .iter()
        .zip(b)
        .map(|(row, &bi)| {
            let mut r = row.clone();
            r.push(bi);
            r
        })
        .collect();

    for col in 0..n {
        let (pivot_row, pivot_mod) =
            (col..n)
                .map(|r| (r, m[r][col].norm()))
                .fold(
                    (col, -1.0),
                    |best, cur| if cur.1 > best.1 { cur } else { best },
                );
        if pivot_mod <= threshold || scale == 0.0 {
            return Err(Error::SingularSystem {
                pivot: pivot_mod,
                threshold,
            });
        }
        m.swap(col, pivot_row);
        let pivot = m[col][col];
        for r in col + 1..n {
            let factor = m[r][col] / pivot;
            if factor.re == 0.0 && factor.im == 0.0 {
                continue;
            }
            let (upper, lower) = m.split_at_mut(r);
            for (dst, src) in lower[0][col..].iter_mut().zip(&upper[col][col..]) {
                *dst -= factor * src;
            }
        }
    }

    let mut x = vec![Complex64::new(0.0, 0.0); n];
    for r in (0..n).rev() {
        let mut acc = m[r][n];
        for c in r + 1..n {
            acc -= m[r][c] * x[c];
        }
        x[r] = acc / m[r][r];
    }
    Ok(x)
}
