//! Torus deformation data and the bicharacter.
//!
//! A deformation is an antisymmetric integer matrix theta on Z^n. The
//! bicharacter chi(m, m') = q^(m^T theta m') realizes the cotriangular
//! structure on the grading torus; antisymmetry gives chi(m,m')*chi(m',m) = 1
//! and chi(m,m) = 1, so repeated generators never pick up phases.

use crate::error::{Error, Result};
use crate::scalar::Laurent;
use std::fmt;

/// A Z^n grading label.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DegreeVector(pub Vec<i64>);

impl DegreeVector {
    pub fn zero(rank: usize) -> Self {
        DegreeVector(vec![0; rank])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| *c == 0)
    }

    pub fn add(&self, other: &DegreeVector) -> DegreeVector {
        DegreeVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &DegreeVector) -> DegreeVector {
        DegreeVector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> DegreeVector {
        DegreeVector(self.0.iter().map(|a| -a).collect())
    }

    pub fn scaled(&self, k: i64) -> DegreeVector {
        DegreeVector(self.0.iter().map(|a| a * k).collect())
    }
}

impl fmt::Display for DegreeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Torus rank and the antisymmetric integer deformation matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeformationData {
    rank: usize,
    theta: Vec<Vec<i64>>,
}

impl DeformationData {
    pub fn new(theta: Vec<Vec<i64>>) -> Result<Self> {
        let rank = theta.len();
        if rank == 0 {
            return Err(Error::DimensionMismatch { expected: 1, got: 0 });
        }
        for (i, row) in theta.iter().enumerate() {
            if row.len() != rank {
                return Err(Error::DimensionMismatch { expected: rank, got: row.len() });
            }
            for (j, v) in row.iter().enumerate() {
                if *v != -theta[j][i] {
                    return Err(Error::NotAntisymmetric { row: i, col: j });
                }
            }
        }
        Ok(DeformationData { rank, theta })
    }

    /// The zero deformation (commutative limit) of the given rank.
    pub fn commutative(rank: usize) -> Self {
        DeformationData { rank, theta: vec![vec![0; rank]; rank] }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn theta(&self) -> &[Vec<i64>] {
        &self.theta
    }

    fn check(&self, m: &DegreeVector) -> Result<()> {
        if m.len() != self.rank {
            return Err(Error::DimensionMismatch { expected: self.rank, got: m.len() });
        }
        Ok(())
    }

    /// The q-exponent m^T theta m'.
    pub fn chi_exponent(&self, m: &DegreeVector, m2: &DegreeVector) -> Result<i64> {
        self.check(m)?;
        self.check(m2)?;
        let mut e = 0i64;
        for (j, mj) in m.0.iter().enumerate() {
            if *mj == 0 {
                continue;
            }
            for (k, mk) in m2.0.iter().enumerate() {
                e += mj * self.theta[j][k] * mk;
            }
        }
        Ok(e)
    }

    /// The bicharacter chi(m, m') = q^(m^T theta m').
    pub fn chi(&self, m: &DegreeVector, m2: &DegreeVector) -> Result<Laurent> {
        Ok(Laurent::q_pow(self.chi_exponent(m, m2)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn theta2() -> DeformationData {
        DeformationData::new(vec![vec![0, 1], vec![-1, 0]]).unwrap()
    }

    #[test]
    fn rejects_non_antisymmetric() {
        assert!(DeformationData::new(vec![vec![0, 1], vec![1, 0]]).is_err());
        assert!(DeformationData::new(vec![vec![1]]).is_err());
        assert!(DeformationData::new(vec![vec![0, 1]]).is_err());
    }

    #[test]
    fn zero_vector_gives_unit() {
        let d = theta2();
        let zero = DegreeVector::zero(2);
        let m = DegreeVector(vec![3, -2]);
        assert!(d.chi(&zero, &m).unwrap().is_one());
        assert!(d.chi(&m, &zero).unwrap().is_one());
    }

    #[test]
    fn explicit_pairing() {
        let d = theta2();
        let m = DegreeVector(vec![1, 0]);
        let m2 = DegreeVector(vec![0, 1]);
        assert_eq!(d.chi(&m, &m2).unwrap(), Laurent::q_pow(1));
        assert_eq!(d.chi(&m2, &m).unwrap(), Laurent::q_pow(-1));
    }

    #[test]
    fn dimension_mismatch() {
        let d = theta2();
        let m = DegreeVector(vec![1]);
        let m2 = DegreeVector(vec![0, 1]);
        assert_eq!(
            d.chi(&m, &m2),
            Err(Error::DimensionMismatch { expected: 2, got: 1 })
        );
    }

    #[test]
    fn antisymmetry_cancels() {
        let d = theta2();
        let m = DegreeVector(vec![2, -3]);
        let m2 = DegreeVector(vec![-1, 5]);
        let prod = d.chi(&m, &m2).unwrap().mul(&d.chi(&m2, &m).unwrap());
        assert!(prod.is_one());
    }
}
