//! Tesler polytopes `Tes_n(a)` and their full-dimensional projected copies
//! `PTes_n(a)`.
//!
//! `Tes_n(a)` is the set of non-negative upper-triangular `n x n` matrices
//! whose hook-sum vector equals `a`. Erasing the diagonal maps it
//! unimodularly onto `PTes_n(a)` in the space of `(n-1) x (n-1)`
//! upper-triangular matrices, where it is full-dimensional.

mod deformation;
mod faces;
mod matrix;
mod vertices;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::ratlinalg::rational::pq_vec;
use crate::ratlinalg::{int, LinAlgError, Rational};

pub use deformation::{verify_deformation, DeformationReport};
pub use faces::{
    dimension, enumerate_faces, facet_normal, facet_positions, is_valid_face_support, FaceSupport,
};
pub use matrix::{positions, triangle_len, Position, UTMatrix};
pub use vertices::{enumerate_vertices, VertexGraph};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TeslerError {
    #[error("the first hook sum must be positive")]
    NonPositiveFirstEntry,
    #[error("hook sums must be non-negative")]
    NegativeHookSum,
    #[error("hook sums must be strictly positive after trimming leading zeros")]
    NotStrictlyPositive,
    #[error("hook-sum vector is entirely zero")]
    AllZero,
    #[error("matrix size {0} is too small for this operation")]
    SizeTooSmall(usize),
    #[error("dimensions do not match")]
    DimensionMismatch,
    #[error("{0} is not a position of the matrix")]
    InvalidPosition(Position),
    #[error("{0} does not index a facet")]
    InvalidFacet(Position),
    #[error("support zeroes row {0}")]
    ZeroRow(usize),
    #[error("codimension {codim} exceeds the dimension {dim}")]
    CodimOutOfRange { codim: usize, dim: usize },
    #[error("vertex for support {0} is infeasible")]
    InfeasibleVertex(String),
    #[error("vertex map is invalid: {0}")]
    InvalidMap(String),
    #[error(transparent)]
    LinAlg(#[from] LinAlgError),
}

/// A hook-sum vector `a` with non-negative entries.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawHookSums", into = "RawHookSums")]
pub struct HookSumVector(Vec<Rational>);

#[derive(Serialize, Deserialize)]
struct RawHookSums(#[serde(with = "pq_vec")] Vec<Rational>);

impl TryFrom<RawHookSums> for HookSumVector {
    type Error = TeslerError;
    fn try_from(raw: RawHookSums) -> Result<Self, Self::Error> {
        Self::new(raw.0)
    }
}

impl From<HookSumVector> for RawHookSums {
    fn from(a: HookSumVector) -> Self {
        RawHookSums(a.0)
    }
}

impl HookSumVector {
    pub fn new(values: Vec<Rational>) -> Result<Self, TeslerError> {
        if values.iter().any(Signed::is_negative) {
            return Err(TeslerError::NegativeHookSum);
        }
        Ok(Self(values))
    }

    pub fn from_integers(values: &[i64]) -> Result<Self, TeslerError> {
        Self::new(values.iter().map(|&v| int(v)).collect())
    }

    /// The all-ones vector of length `n`.
    pub fn ones(n: usize) -> Self {
        Self(vec![int(1); n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn values(&self) -> &[Rational] {
        &self.0
    }

    pub fn is_strictly_positive(&self) -> bool {
        self.0.iter().all(Signed::is_positive)
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(|v| v.denom() == &1.into())
    }

    /// Non-negative integer entries, if every entry is integral.
    pub fn to_u64(&self) -> Option<Vec<u64>> {
        self.0
            .iter()
            .map(|v| {
                if v.is_integer() {
                    u64::try_from(v.numer()).ok()
                } else {
                    None
                }
            })
            .collect()
    }

    /// Drops the leading zero entries. `Tes_n(a)` with `p` leading zeros is
    /// isomorphic to `Tes_{n-p}(b)` for the remaining entries `b`.
    pub fn trim_leading_zeros(&self) -> Result<(usize, HookSumVector), TeslerError> {
        let p = self.0.iter().take_while(|v| v.is_zero()).count();
        if p == self.0.len() {
            return Err(TeslerError::AllZero);
        }
        Ok((p, HookSumVector(self.0[p..].to_vec())))
    }

    /// Trims leading zeros and requires the rest to be strictly positive.
    pub fn normalized(&self) -> Result<(usize, HookSumVector), TeslerError> {
        let (p, rest) = self.trim_leading_zeros()?;
        if !rest.is_strictly_positive() {
            return Err(TeslerError::NotStrictlyPositive);
        }
        Ok((p, rest))
    }
}

/// `eta_k(M)`: row-`k` sum minus the above-diagonal part of column `k`.
pub fn hook_sum(m: &UTMatrix) -> Vec<Rational> {
    let n = m.size();
    (1..=n)
        .map(|k| {
            let row: Rational = (k..=n).map(|j| m.at(k, j)).sum();
            let col: Rational = (1..k).map(|i| m.at(i, k)).sum();
            row - col
        })
        .collect()
}

/// A point of `Tes_n(a)` with every entry strictly positive, built row by
/// row with constant rows `c_k = (c_1 + ... + c_{k-1} + a_k) / (n - k + 1)`.
pub fn interior_point(a: &HookSumVector) -> Result<UTMatrix, TeslerError> {
    let n = a.len();
    if n == 0 {
        return Err(TeslerError::SizeTooSmall(0));
    }
    if !a.values()[0].is_positive() {
        return Err(TeslerError::NonPositiveFirstEntry);
    }
    let mut m = UTMatrix::zeros(n);
    let mut prefix = Rational::zero();
    for k in 1..=n {
        let c = (&prefix + &a.values()[k - 1]) / int((n - k + 1) as i64);
        for j in k..=n {
            m.set(Position::new(k, j), c.clone())?;
        }
        prefix += c;
    }
    Ok(m)
}

/// Erases the diagonal: `y_{i,j} = x_{i,j+1}`.
pub fn psi_diag(m: &UTMatrix) -> Result<UTMatrix, TeslerError> {
    let n = m.size();
    if n < 2 {
        return Err(TeslerError::SizeTooSmall(n));
    }
    let entries = positions(n - 1)
        .map(|p| m.at(p.row, p.col + 1).clone())
        .collect();
    UTMatrix::from_entries(n - 1, entries)
}

/// Inverse of [`psi_diag`] on the affine space of matrices with hook sums
/// `a`: copies the off-diagonal entries and solves each diagonal entry from
/// its hook-sum equation.
pub fn lift_psi_diag(y: &UTMatrix, a: &HookSumVector) -> Result<UTMatrix, TeslerError> {
    let n = y.size() + 1;
    if a.len() != n {
        return Err(TeslerError::DimensionMismatch);
    }
    let mut x = UTMatrix::zeros(n);
    for p in positions(n - 1) {
        x.set(Position::new(p.row, p.col + 1), y.at(p.row, p.col).clone())?;
    }
    for k in 1..=n {
        let off_row: Rational = (k + 1..=n).map(|j| x.at(k, j)).sum();
        let col: Rational = (1..k).map(|i| x.at(i, k)).sum();
        x.set(Position::new(k, k), &a.values()[k - 1] - off_row + col)?;
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratlinalg::rat;
    use proptest::prelude::*;

    fn ut(n: usize, vals: &[i64]) -> UTMatrix {
        UTMatrix::from_entries(n, vals.iter().map(|&v| int(v)).collect()).unwrap()
    }

    #[test]
    fn hook_sum_small() {
        // x11 = a, x12 = b, x22 = c gives (a + b, c - b).
        assert_eq!(hook_sum(&ut(2, &[5, 2, 7])), vec![int(7), int(5)]);
        assert_eq!(hook_sum(&UTMatrix::zeros(4)), vec![int(0); 4]);
    }

    #[test]
    fn interior_point_examples() {
        assert_eq!(
            interior_point(&HookSumVector::ones(1)).unwrap().entries(),
            &[int(1)]
        );
        let x = interior_point(&HookSumVector::ones(2)).unwrap();
        assert_eq!(x.entries(), &[rat(1, 2), rat(1, 2), rat(3, 2)]);
        let a3 = HookSumVector::ones(3);
        let x3 = interior_point(&a3).unwrap();
        assert_eq!(hook_sum(&x3), a3.values());
        assert!(x3.entries().iter().all(Signed::is_positive));
        let zero_first = HookSumVector::from_integers(&[0, 1]).unwrap();
        assert_eq!(
            interior_point(&zero_first),
            Err(TeslerError::NonPositiveFirstEntry)
        );
    }

    #[test]
    fn psi_diag_examples() {
        assert_eq!(psi_diag(&ut(2, &[4, 9, 2])).unwrap().entries(), &[int(9)]);
        let diag = ut(3, &[1, 0, 0, 1, 0, 1]);
        assert_eq!(psi_diag(&diag).unwrap(), UTMatrix::zeros(2));
        assert_eq!(
            psi_diag(&UTMatrix::zeros(1)),
            Err(TeslerError::SizeTooSmall(1))
        );
    }

    #[test]
    fn lift_examples() {
        let a = HookSumVector::ones(2);
        assert_eq!(
            lift_psi_diag(&ut(1, &[0]), &a).unwrap().entries(),
            &[int(1), int(0), int(1)]
        );
        assert_eq!(
            lift_psi_diag(&ut(1, &[1]), &a).unwrap().entries(),
            &[int(0), int(1), int(2)]
        );
    }

    #[test]
    fn trimming() {
        let a = HookSumVector::from_integers(&[0, 0, 2, 1]).unwrap();
        let (p, b) = a.normalized().unwrap();
        assert_eq!(p, 2);
        assert_eq!(b, HookSumVector::from_integers(&[2, 1]).unwrap());
        let gap = HookSumVector::from_integers(&[1, 0, 1]).unwrap();
        assert_eq!(gap.normalized(), Err(TeslerError::NotStrictlyPositive));
        let zeros = HookSumVector::from_integers(&[0, 0]).unwrap();
        assert_eq!(zeros.normalized(), Err(TeslerError::AllZero));
        assert_eq!(
            HookSumVector::from_integers(&[1, -1]),
            Err(TeslerError::NegativeHookSum)
        );
    }

    proptest! {
        #[test]
        fn lift_then_project_round_trips(vals in prop::collection::vec(-5i64..=5, 6), a in prop::collection::vec(0i64..=4, 4)) {
            let y = ut(3, &vals);
            let a = HookSumVector::from_integers(&a).unwrap();
            let x = lift_psi_diag(&y, &a).unwrap();
            prop_assert_eq!(hook_sum(&x), a.values());
            prop_assert_eq!(psi_diag(&x).unwrap(), y);
        }

        #[test]
        fn project_then_lift_round_trips(vals in prop::collection::vec(-5i64..=5, 10)) {
            let x = ut(4, &vals);
            let eta = hook_sum(&x);
            // Arbitrary matrices may have negative hook sums; lift only needs the values.
            let a = HookSumVector(eta.clone());
            let back = lift_psi_diag(&psi_diag(&x).unwrap(), &a).unwrap();
            prop_assert_eq!(hook_sum(&back), eta);
            prop_assert_eq!(back, x);
        }
    }
}
