//! Exact linear algebra over Q(q).
//!
//! Solves rectangular systems by fraction-free (Bareiss) elimination after
//! clearing row denominators, with a deterministic pivot choice: columns are
//! processed left to right and the pivot is the first remaining row with a
//! nonzero entry. The full affine solution set is returned as a particular
//! solution plus a kernel basis; each kernel vector is scaled so its first
//! nonzero coordinate is 1.

use crate::error::{Error, Result};
use crate::scalar::{Laurent, Scalar};

/// Affine solution set of a linear system.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearSolution {
    pub particular: Vec<Scalar>,
    pub kernel: Vec<Vec<Scalar>>,
}

impl LinearSolution {
    pub fn is_unique(&self) -> bool {
        self.kernel.is_empty()
    }
}

/// Solve `matrix * x = rhs` exactly. `ncols` fixes the number of unknowns so
/// the degenerate 0-row system still describes the full space.
pub fn linsolve(ncols: usize, matrix: &[Vec<Scalar>], rhs: &[Scalar]) -> Result<LinearSolution> {
    if matrix.len() != rhs.len() {
        return Err(Error::DimensionMismatch { expected: matrix.len(), got: rhs.len() });
    }
    for row in matrix {
        if row.len() != ncols {
            return Err(Error::DimensionMismatch { expected: ncols, got: row.len() });
        }
    }

    // Clear denominators row-wise so elimination stays in Q[q,q^-1].
    let nrows = matrix.len();
    let mut rows: Vec<Vec<Laurent>> = Vec::with_capacity(nrows);
    let mut right: Vec<Laurent> = Vec::with_capacity(nrows);
    for (row, r) in matrix.iter().zip(rhs) {
        let mut lcm = Laurent::one();
        for s in row.iter().chain(std::iter::once(r)) {
            let d = s.denominator();
            let g = lcm.gcd(d);
            lcm = lcm.mul(&d.exact_div(&g).expect("gcd divides"));
        }
        let scale = Scalar::from_laurent(lcm);
        let mut cleared = Vec::with_capacity(ncols);
        for s in row {
            let v = s.mul(&scale);
            cleared.push(v.as_laurent().expect("denominator cleared").clone());
        }
        rows.push(cleared);
        right.push(r.mul(&scale).as_laurent().expect("denominator cleared").clone());
    }

    // Bareiss fraction-free forward elimination.
    let mut pivot_cols: Vec<usize> = Vec::new();
    let mut prev = Laurent::one();
    let mut rank = 0usize;
    for col in 0..ncols {
        let Some(pr) = (rank..nrows).find(|r| !rows[*r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pr);
        right.swap(rank, pr);
        let pivot = rows[rank][col].clone();
        for r in rank + 1..nrows {
            let factor = rows[r][col].clone();
            for c in 0..ncols {
                let v = pivot.mul(&rows[r][c]).sub(&factor.mul(&rows[rank][c]));
                rows[r][c] = v
                    .exact_div(&prev)
                    .ok_or_else(|| Error::Internal("Bareiss division not exact".into()))?;
            }
            let v = pivot.mul(&right[r]).sub(&factor.mul(&right[rank]));
            right[r] = v
                .exact_div(&prev)
                .ok_or_else(|| Error::Internal("Bareiss division not exact".into()))?;
        }
        prev = pivot;
        pivot_cols.push(col);
        rank += 1;
        if rank == nrows {
            break;
        }
    }

    // Zero coefficient rows with nonzero rhs witness inconsistency.
    for r in rank..nrows {
        if !right[r].is_zero() {
            return Err(Error::Inconsistent);
        }
    }

    // Back substitution for the particular solution (free unknowns at 0).
    let is_pivot: Vec<Option<usize>> = {
        let mut v = vec![None; ncols];
        for (i, c) in pivot_cols.iter().enumerate() {
            v[*c] = Some(i);
        }
        v
    };
    let back_substitute = |rhs_col: &dyn Fn(usize) -> Scalar, free_value: &dyn Fn(usize) -> Scalar| -> Result<Vec<Scalar>> {
        let mut x = vec![Scalar::zero(); ncols];
        for (c, slot) in is_pivot.iter().enumerate() {
            if slot.is_none() {
                x[c] = free_value(c);
            }
        }
        for (i, pc) in pivot_cols.iter().enumerate().rev() {
            let mut acc = rhs_col(i);
            for c in pc + 1..ncols {
                if !rows[i][c].is_zero() && !x[c].is_zero() {
                    acc = acc.sub(&Scalar::from_laurent(rows[i][c].clone()).mul(&x[c]));
                }
            }
            x[*pc] = acc.div(&Scalar::from_laurent(rows[i][*pc].clone()))?;
        }
        Ok(x)
    };

    let particular = back_substitute(&|i| Scalar::from_laurent(right[i].clone()), &|_| Scalar::zero())?;

    let mut kernel = Vec::new();
    for free in (0..ncols).filter(|c| is_pivot[*c].is_none()) {
        let v = back_substitute(&|_| Scalar::zero(), &|c| {
            if c == free {
                Scalar::one()
            } else {
                Scalar::zero()
            }
        })?;
        kernel.push(normalize_kernel_vector(v)?);
    }

    Ok(LinearSolution { particular, kernel })
}

/// Kernel basis of `matrix` (homogeneous system).
pub fn kernel_basis(ncols: usize, matrix: &[Vec<Scalar>]) -> Result<Vec<Vec<Scalar>>> {
    let rhs = vec![Scalar::zero(); matrix.len()];
    Ok(linsolve(ncols, matrix, &rhs)?.kernel)
}

fn normalize_kernel_vector(mut v: Vec<Scalar>) -> Result<Vec<Scalar>> {
    let Some(first) = v.iter().find(|s| !s.is_zero()).cloned() else {
        return Err(Error::Internal("zero kernel vector produced".into()));
    };
    let inv = first.inv()?;
    for s in &mut v {
        if !s.is_zero() {
            *s = s.mul(&inv);
        }
    }
    Ok(v)
}
