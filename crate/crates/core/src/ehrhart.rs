//! Lattice-point counts of dilated Tesler polytopes and their faces,
//! Ehrhart polynomials by exact interpolation, and McMullen's formula
//! `e_i = sum over i-dimensional faces F of alpha(F) * vol(F)`.
//!
//! `vol(F)` is the relative lattice volume of `F`, i.e. the leading
//! coefficient of the Ehrhart polynomial of `F`. Counting happens in the
//! original `Tes_n` coordinates; dropping the diagonal is a lattice
//! bijection onto `PTes_n`, so the counts are the same.

use std::collections::HashMap;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::alpha::{alpha_of_face, AlphaError};
use crate::ratlinalg::rational::{pq, pq_vec};
use crate::ratlinalg::{int, lagrange_interpolate, LinAlgError, Polynomial, Rational};
use crate::tesler::{dimension, enumerate_faces, FaceSupport, HookSumVector, Position, TeslerError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EhrhartError {
    #[error("lattice-point count overflowed")]
    Overflow,
    #[error("hook-sum vector must be non-negative and integral")]
    NotIntegral,
    #[error("interpolated polynomial gives {got} at t = {t}, but the count is {expected}")]
    InterpolationMismatch { t: u64, expected: u128, got: String },
    #[error("McMullen sums need faces of codimension at most 3 (asked for dimension {i} of {d})")]
    UnsupportedCodim { i: usize, d: usize },
    #[error(transparent)]
    Tesler(#[from] TeslerError),
    #[error(transparent)]
    LinAlg(#[from] LinAlgError),
    #[error(transparent)]
    Alpha(#[from] AlphaError),
}

/// Which entries are forced to zero: `zero[row-1][col-1]`.
struct Mask {
    zero: Vec<Vec<bool>>,
}

impl Mask {
    fn new(n: usize, support: &[Position]) -> Self {
        let mut zero = vec![vec![false; n]; n];
        for p in support {
            zero[p.row - 1][p.col - 1] = true;
        }
        Self { zero }
    }
}

/// Calls `f` on every vector `x` over the allowed slots with entries
/// summing to at most `s` (exactly `s` when `exact`).
fn for_each_row_choice(allowed: &[bool], s: u64, exact: bool, f: &mut impl FnMut(&[u64])) {
    fn go(
        allowed: &[bool],
        idx: usize,
        left: u64,
        exact: bool,
        x: &mut Vec<u64>,
        f: &mut impl FnMut(&[u64]),
    ) {
        if idx == allowed.len() {
            if !exact || left == 0 {
                f(x);
            }
            return;
        }
        if !allowed[idx] {
            x.push(0);
            go(allowed, idx + 1, left, exact, x, f);
            x.pop();
            return;
        }
        for v in 0..=left {
            x.push(v);
            go(allowed, idx + 1, left - v, exact, x, f);
            x.pop();
        }
    }
    go(allowed, 0, s, exact, &mut Vec::with_capacity(allowed.len()), f);
}

fn count_masked(n: usize, a: &[u64], t: u64, mask: &Mask) -> Result<u128, EhrhartError> {
    // State before row k: inflow into columns k..n from rows above.
    let mut layer: HashMap<Vec<u64>, u128> = HashMap::from([(vec![0; n], 1)]);
    for (k, &ak) in a.iter().enumerate().take(n.saturating_sub(1)) {
        let allowed: Vec<bool> = (k + 1..n).map(|j| !mask.zero[k][j]).collect();
        let exact = mask.zero[k][k];
        let mut next: HashMap<Vec<u64>, u128> = HashMap::new();
        let mut overflow = false;
        for (tail, ways) in &layer {
            let s = ak
                .checked_mul(t)
                .and_then(|v| v.checked_add(tail[0]))
                .ok_or(EhrhartError::Overflow)?;
            for_each_row_choice(&allowed, s, exact, &mut |x| {
                let key: Vec<u64> = tail[1..].iter().zip(x).map(|(c, v)| c + v).collect();
                let slot = next.entry(key).or_insert(0);
                match slot.checked_add(*ways) {
                    Some(v) => *slot = v,
                    None => overflow = true,
                }
            });
        }
        if overflow {
            return Err(EhrhartError::Overflow);
        }
        layer = next;
    }
    // The last row is forced: x_{n,n} = t a_n + inflow >= 0.
    layer
        .values()
        .try_fold(0u128, |acc, w| acc.checked_add(*w))
        .ok_or(EhrhartError::Overflow)
}

fn integral_hooks(n: usize, a: &HookSumVector) -> Result<Vec<u64>, EhrhartError> {
    if a.len() != n {
        return Err(TeslerError::DimensionMismatch.into());
    }
    a.to_u64().ok_or(EhrhartError::NotIntegral)
}

/// Number of non-negative integer upper-triangular matrices with hook-sum
/// vector `t a`.
pub fn count_points(n: usize, a: &HookSumVector, t: u64) -> Result<u128, EhrhartError> {
    let a = integral_hooks(n, a)?;
    count_masked(n, &a, t, &Mask::new(n, &[]))
}

/// Lattice points of `t F`, where `F` is the face of `Tes_n(a)` on which
/// every entry of `support` vanishes.
pub fn count_face_points(
    n: usize,
    a: &HookSumVector,
    support: &FaceSupport,
    t: u64,
) -> Result<u128, EhrhartError> {
    let a = integral_hooks(n, a)?;
    count_masked(n, &a, t, &Mask::new(n, support.positions()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EhrhartPoly {
    pub n: usize,
    pub a: HookSumVector,
    pub degree: usize,
    /// `e_0, ..., e_degree`.
    #[serde(with = "pq_vec")]
    pub coefficients: Vec<Rational>,
    /// `(t, count)` for every sampled dilation, including the two checks.
    pub sample_counts: Vec<(u64, u128)>,
}

impl EhrhartPoly {
    pub fn polynomial(&self) -> Polynomial {
        Polynomial::new(self.coefficients.clone())
    }

    pub fn coefficient(&self, i: usize) -> Rational {
        self.coefficients.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn eval(&self, t: i64) -> Rational {
        self.polynomial().eval(&int(t))
    }
}

/// `(t, count)` pairs.
type Samples = Vec<(u64, u128)>;

/// Interpolates counts at `t = 0..=degree` and checks two further points.
fn interpolate_counts(
    degree: usize,
    count: impl Fn(u64) -> Result<u128, EhrhartError> + Sync,
) -> Result<(Vec<Rational>, Samples), EhrhartError> {
    let ts: Vec<u64> = (0..=degree as u64 + 2).collect();
    let counts = ts
        .par_iter()
        .map(|&t| count(t).map(|c| (t, c)))
        .collect::<Result<Vec<_>, _>>()?;
    let points: Vec<(i64, Rational)> = counts[..=degree]
        .iter()
        .map(|&(t, c)| (t as i64, Rational::from_integer(c.into())))
        .collect();
    let poly = lagrange_interpolate(&points)?;
    for &(t, c) in &counts[degree + 1..] {
        let got = poly.eval(&int(t as i64));
        if got != Rational::from_integer(c.into()) {
            return Err(EhrhartError::InterpolationMismatch {
                t,
                expected: c,
                got: got.to_string(),
            });
        }
    }
    let mut coefficients = poly.coefficients().to_vec();
    coefficients.resize(degree + 1, Rational::zero());
    Ok((coefficients, counts))
}

/// Ehrhart polynomial of `Tes_n(a)` for strictly positive integral `a`.
pub fn ehrhart_poly(n: usize, a: &HookSumVector) -> Result<EhrhartPoly, EhrhartError> {
    if !a.is_strictly_positive() {
        return Err(TeslerError::NotStrictlyPositive.into());
    }
    let hooks = integral_hooks(n, a)?;
    let degree = dimension(n);
    let mask = Mask::new(n, &[]);
    let (coefficients, sample_counts) =
        interpolate_counts(degree, |t| count_masked(n, &hooks, t, &mask))?;
    Ok(EhrhartPoly {
        n,
        a: a.clone(),
        degree,
        coefficients,
        sample_counts,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FaceVolume {
    pub support: FaceSupport,
    pub dim: usize,
    /// Relative lattice volume: leading Ehrhart coefficient of the face.
    #[serde(with = "pq")]
    pub volume: Rational,
    /// `dim! * volume`.
    #[serde(with = "pq")]
    pub normalized_volume: Rational,
}

pub fn face_volume(
    n: usize,
    a: &HookSumVector,
    support: &FaceSupport,
) -> Result<FaceVolume, EhrhartError> {
    let hooks = integral_hooks(n, a)?;
    let dim = support.dim();
    let mask = Mask::new(n, support.positions());
    let (coefficients, _) = interpolate_counts(dim, |t| count_masked(n, &hooks, t, &mask))?;
    let volume = coefficients[dim].clone();
    let factorial: Rational = (1..=dim as i64).map(int).product();
    Ok(FaceVolume {
        support: support.clone(),
        dim,
        normalized_volume: &volume * factorial,
        volume,
    })
}

/// `sum over i-dimensional faces of alpha * vol`, for `d - i <= 3`.
pub fn mcmullen_coefficient(n: usize, a: &HookSumVector, i: usize) -> Result<Rational, EhrhartError> {
    let d = dimension(n);
    if i > d || d - i > 3 {
        return Err(EhrhartError::UnsupportedCodim { i, d });
    }
    let faces = enumerate_faces(n, d - i)?;
    let terms = faces
        .par_iter()
        .map(|f| {
            let alpha = alpha_of_face(n, f)?.value;
            Ok(alpha * face_volume(n, a, f)?.volume)
        })
        .collect::<Result<Vec<Rational>, EhrhartError>>()?;
    Ok(terms.into_iter().sum())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct McMullenRow {
    pub i: usize,
    pub faces: usize,
    #[serde(with = "pq")]
    pub ehrhart: Rational,
    #[serde(with = "pq")]
    pub mcmullen: Rational,
    pub matches: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct McMullenReport {
    pub polynomial: EhrhartPoly,
    pub rows: Vec<McMullenRow>,
    pub passed: bool,
}

/// Compares every Ehrhart coefficient `e_i` with `d - i <= 3` against the
/// McMullen sum.
pub fn mcmullen_check(n: usize, a: &HookSumVector) -> Result<McMullenReport, EhrhartError> {
    let polynomial = ehrhart_poly(n, a)?;
    let d = polynomial.degree;
    let rows = (d.saturating_sub(3)..=d)
        .rev()
        .map(|i| {
            let mcmullen = mcmullen_coefficient(n, a, i)?;
            let ehrhart = polynomial.coefficient(i);
            Ok(McMullenRow {
                i,
                faces: enumerate_faces(n, d - i)?.len(),
                matches: mcmullen == ehrhart,
                ehrhart,
                mcmullen,
            })
        })
        .collect::<Result<Vec<_>, EhrhartError>>()?;
    let passed = rows.iter().all(|r| r.matches) && polynomial.coefficient(0).is_one();
    Ok(McMullenReport {
        polynomial,
        rows,
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratlinalg::rat;
    use crate::tesler::{lift_psi_diag, positions, UTMatrix};

    fn ones(n: usize) -> HookSumVector {
        HookSumVector::ones(n)
    }

    /// Odometer over `len` digits in `0..=bound`.
    fn for_each_box_point(len: usize, bound: i64, mut f: impl FnMut(&[i64])) {
        let mut digits = vec![0i64; len];
        loop {
            f(&digits);
            let mut k = 0;
            while k < len && digits[k] == bound {
                digits[k] = 0;
                k += 1;
            }
            if k == len {
                return;
            }
            digits[k] += 1;
        }
    }

    /// Hook sums of an integer upper-triangular matrix given row by row.
    fn int_hook_sums(cells: &[Position], n: usize, x: &[i64]) -> Vec<i64> {
        let mut eta = vec![0i64; n];
        for (p, v) in cells.iter().zip(x) {
            eta[p.row - 1] += v;
            if p.row < p.col {
                eta[p.col - 1] -= v;
            }
        }
        eta
    }

    /// Every upper-triangular matrix with entries in `0..=t * sum(a)`,
    /// filtered by hook sums.
    fn naive_count(n: usize, a: &[i64], t: i64) -> u128 {
        let cells: Vec<Position> = positions(n).collect();
        let target: Vec<i64> = a.iter().map(|&x| x * t).collect();
        let mut count = 0;
        for_each_box_point(cells.len(), t * a.iter().sum::<i64>(), |x| {
            if int_hook_sums(&cells, n, x) == target {
                count += 1;
            }
        });
        count
    }

    /// Counts in projected coordinates: integer points `y` whose lift is
    /// non-negative.
    fn naive_projected_count(n: usize, t: i64) -> u128 {
        let a = HookSumVector::from_integers(&vec![t; n]).unwrap();
        let mut count = 0;
        for_each_box_point(positions(n - 1).count(), t * n as i64, |d| {
            let y = UTMatrix::from_entries(n - 1, d.iter().map(|&v| int(v)).collect()).unwrap();
            if lift_psi_diag(&y, &a).unwrap().is_nonnegative() {
                count += 1;
            }
        });
        count
    }

    #[test]
    fn dp_matches_naive_box() {
        for a in [vec![1, 1], vec![2, 1], vec![1, 1, 1], vec![1, 2, 1], vec![0, 1, 1]] {
            let n = a.len();
            let hv = HookSumVector::from_integers(&a).unwrap();
            for t in 0..=3 {
                assert_eq!(count_points(n, &hv, t).unwrap(), naive_count(n, &a, t as i64), "{a:?} t={t}");
            }
        }
    }

    #[test]
    fn projected_counts_agree() {
        for t in 0..=3 {
            assert_eq!(count_points(3, &ones(3), t as u64).unwrap(), naive_projected_count(3, t));
        }
    }

    #[test]
    fn small_counts() {
        for t in 0..6 {
            assert_eq!(count_points(2, &ones(2), t).unwrap(), t as u128 + 1);
        }
        assert_eq!(count_points(3, &ones(3), 1).unwrap(), 7);
        for n in 1..=5 {
            assert_eq!(count_points(n, &ones(n), 0).unwrap(), 1);
        }
    }

    #[test]
    fn polynomials() {
        let e2 = ehrhart_poly(2, &ones(2)).unwrap();
        assert_eq!(e2.polynomial().to_string(), "t + 1");
        let e3 = ehrhart_poly(3, &ones(3)).unwrap();
        assert_eq!(e3.degree, 3);
        assert_eq!(e3.coefficient(0), int(1));
        assert_eq!(e3.eval(1), int(7));
        assert!(e3.coefficients.iter().all(|c| *c > Rational::zero()));
        assert_eq!(e3.sample_counts.len(), 6);
    }

    #[test]
    fn positive_coefficients_up_to_n4() {
        for n in 2..=4 {
            let e = ehrhart_poly(n, &ones(n)).unwrap();
            assert_eq!(e.coefficients.len(), dimension(n) + 1);
            assert!(e.coefficients.iter().all(|c| *c > Rational::zero()), "n={n}");
        }
    }

    #[test]
    fn face_volumes() {
        for v in enumerate_faces(3, 3).unwrap() {
            let fv = face_volume(3, &ones(3), &v).unwrap();
            assert_eq!((fv.dim, fv.volume.clone()), (0, int(1)));
        }
        let whole = FaceSupport::new(2, vec![]).unwrap();
        assert_eq!(face_volume(2, &ones(2), &whole).unwrap().volume, int(1));
        // An edge of Tes_3(1,1,2): lattice length read off its count.
        let a = HookSumVector::from_integers(&[1, 1, 2]).unwrap();
        for e in enumerate_faces(3, 2).unwrap() {
            let fv = face_volume(3, &a, &e).unwrap();
            let len = count_face_points(3, &a, &e, 1).unwrap() - 1;
            assert_eq!(fv.volume, Rational::from_integer(len.into()), "{e}");
        }
    }

    #[test]
    fn mcmullen_small() {
        let r2 = mcmullen_check(2, &ones(2)).unwrap();
        assert!(r2.passed);
        assert_eq!(r2.rows.len(), 2);
        let r3 = mcmullen_check(3, &ones(3)).unwrap();
        assert!(r3.passed, "{:?}", r3.rows);
        assert_eq!(r3.rows.iter().map(|r| r.i).collect::<Vec<_>>(), vec![3, 2, 1, 0]);
        assert!(matches!(
            mcmullen_coefficient(4, &ones(4), 2),
            Err(EhrhartError::UnsupportedCodim { .. })
        ));
    }

    #[test]
    fn mcmullen_other_hook_sums() {
        // alpha depends only on the normal fan, so any positive a works.
        let a = HookSumVector::from_integers(&[2, 1, 3]).unwrap();
        assert!(mcmullen_check(3, &a).unwrap().passed);
        assert_eq!(mcmullen_coefficient(3, &a, 3).unwrap(), ehrhart_poly(3, &a).unwrap().coefficient(3));
        assert!(rat(1, 2) > Rational::zero());
    }

    #[test]
    fn rejects_bad_hooks() {
        let half = HookSumVector::new(vec![rat(1, 2), int(1)]).unwrap();
        assert_eq!(count_points(2, &half, 1), Err(EhrhartError::NotIntegral));
        let zero = HookSumVector::from_integers(&[0, 1]).unwrap();
        assert!(ehrhart_poly(2, &zero).is_err());
    }
}
