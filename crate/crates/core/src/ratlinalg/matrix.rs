use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use super::rational::{to_pq, Rational};
use super::LinAlgError;

pub type RatVector = Vec<Rational>;

/// Dense row-major matrix of exact rationals.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(size: usize) -> Self {
        let mut m = Self::zeros(size, size);
        for i in 0..size {
            m.entries[i * size + i] = Rational::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self, LinAlgError> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(LinAlgError::DimensionMismatch);
        }
        Ok(Self {
            rows: nrows,
            cols: ncols,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    /// Convenience constructor from small integer literals.
    pub fn from_i64(rows: &[&[i64]]) -> Result<Self, LinAlgError> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| Rational::from_integer(v.into())).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Rational {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: Rational) {
        self.entries[r * self.cols + c] = value;
    }

    pub fn row(&self, r: usize) -> &[Rational] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &RatMatrix) -> Result<RatMatrix, LinAlgError> {
        if self.cols != other.rows {
            return Err(LinAlgError::DimensionMismatch);
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for c in 0..other.cols {
                let mut acc = Rational::zero();
                for k in 0..self.cols {
                    let a = self.get(r, k);
                    if !a.is_zero() {
                        acc += a * other.get(k, c);
                    }
                }
                out.set(r, c, acc);
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<RatVector, LinAlgError> {
        if self.cols != v.len() {
            return Err(LinAlgError::DimensionMismatch);
        }
        Ok((0..self.rows).map(|r| dot(self.row(r), v)).collect())
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && *self == Self::identity(self.rows)
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|r| (0..r).all(|c| self.get(r, c) == self.get(c, r)))
    }

    /// Reorders rows and columns together: entry `(i, j)` of the result is
    /// entry `(perm[i], perm[j])` of `self`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let k = perm.len();
        let mut out = Self::zeros(k, k);
        for i in 0..k {
            for j in 0..k {
                out.set(i, j, self.get(perm[i], perm[j]).clone());
            }
        }
        out
    }

    /// Determinants of the leading `1x1, 2x2, ...` blocks.
    pub fn leading_principal_minors(&self) -> Vec<Rational> {
        (1..=self.rows.min(self.cols))
            .map(|k| {
                let mut block = Self::zeros(k, k);
                for r in 0..k {
                    for c in 0..k {
                        block.set(r, c, self.get(r, c).clone());
                    }
                }
                determinant(&block).expect("square block")
            })
            .collect()
    }
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(r, c))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Serialized as a list of rows of `"p/q"` strings.
impl Serialize for RatMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.rows))?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(to_pq).collect();
            seq.serialize_element(&row)?;
        }
        seq.end()
    }
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .filter(|(x, y)| !x.is_zero() && !y.is_zero())
        .map(|(x, y)| x * y)
        .sum()
}

/// Gram matrix of pairwise dot products.
pub fn gram(vectors: &[RatVector]) -> Result<RatMatrix, LinAlgError> {
    let k = vectors.len();
    if let Some(first) = vectors.first() {
        if vectors.iter().any(|v| v.len() != first.len()) {
            return Err(LinAlgError::DimensionMismatch);
        }
    }
    let mut out = RatMatrix::zeros(k, k);
    for i in 0..k {
        for j in i..k {
            let d = dot(&vectors[i], &vectors[j]);
            out.set(j, i, d.clone());
            out.set(i, j, d);
        }
    }
    Ok(out)
}

/// Row-scales `a` to an integer matrix. Returns the integer rows and the
/// per-row multipliers `d_i` with `int_rows[i] = d_i * a[i]`.
fn integer_rows(a: &RatMatrix) -> (Vec<Vec<BigInt>>, Vec<BigInt>) {
    let mut rows = Vec::with_capacity(a.rows);
    let mut scales = Vec::with_capacity(a.rows);
    for r in 0..a.rows {
        let lcm = a.row(r).iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
        rows.push(
            a.row(r)
                .iter()
                .map(|v| v.numer() * (&lcm / v.denom()))
                .collect(),
        );
        scales.push(lcm);
    }
    (rows, scales)
}

fn exact_div(num: BigInt, den: &BigInt) -> BigInt {
    let (q, rem) = num.div_rem(den);
    debug_assert!(rem.is_zero(), "fraction-free step left a remainder");
    q
}

/// Fraction-free Gauss-Jordan on `[A | B]` with integer `A` (square).
/// On success the left block is `p * I` and the right block is `p * A^-1 B`,
/// where `p` is the returned final pivot; `swaps` counts row exchanges.
#[allow(clippy::needless_range_loop)]
fn bareiss_gauss_jordan(
    mut rows: Vec<Vec<BigInt>>,
    size: usize,
) -> Result<(Vec<Vec<BigInt>>, BigInt, usize), LinAlgError> {
    let width = rows.first().map_or(0, Vec::len);
    let mut prev = BigInt::one();
    let mut swaps = 0;
    for k in 0..size {
        let pivot_row = (k..size)
            .find(|&r| !rows[r][k].is_zero())
            .ok_or(LinAlgError::Singular)?;
        if pivot_row != k {
            rows.swap(pivot_row, k);
            swaps += 1;
        }
        let pivot = rows[k][k].clone();
        for i in 0..size {
            if i == k {
                continue;
            }
            let factor = rows[i][k].clone();
            for j in 0..width {
                if j == k {
                    continue;
                }
                let updated = &pivot * &rows[i][j] - &factor * &rows[k][j];
                rows[i][j] = exact_div(updated, &prev);
            }
            rows[i][k] = BigInt::zero();
        }
        prev = pivot;
    }
    Ok((rows, prev, swaps))
}

/// Exact inverse by fraction-free Gauss-Jordan elimination.
#[allow(clippy::needless_range_loop)]
pub fn mat_invert(a: &RatMatrix) -> Result<RatMatrix, LinAlgError> {
    if !a.is_square() {
        return Err(LinAlgError::DimensionMismatch);
    }
    let n = a.rows;
    let (int_rows, scales) = integer_rows(a);
    let augmented: Vec<Vec<BigInt>> = int_rows
        .into_iter()
        .enumerate()
        .map(|(i, mut row)| {
            row.extend((0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }));
            row
        })
        .collect();
    let (reduced, pivot, _) = bareiss_gauss_jordan(augmented, n)?;
    // (D A)^-1 = reduced_right / pivot, and A^-1 = (D A)^-1 D.
    let mut out = RatMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let value = Rational::new(&reduced[i][n + j] * &scales[j], pivot.clone());
            out.set(i, j, value);
        }
    }
    Ok(out)
}

/// Exact determinant (fraction-free elimination). Zero for singular input.
pub fn determinant(a: &RatMatrix) -> Result<Rational, LinAlgError> {
    if !a.is_square() {
        return Err(LinAlgError::DimensionMismatch);
    }
    if a.rows == 0 {
        return Ok(Rational::one());
    }
    let (int_rows, scales) = integer_rows(a);
    match bareiss_gauss_jordan(int_rows, a.rows) {
        Ok((_, pivot, swaps)) => {
            let signed = if swaps % 2 == 1 { -pivot } else { pivot };
            let denom = scales.iter().fold(BigInt::one(), |acc, s| acc * s);
            Ok(Rational::new(signed, denom))
        }
        Err(LinAlgError::Singular) => Ok(Rational::zero()),
        Err(e) => Err(e),
    }
}

/// Solves `A x = b` for `A` with full column rank (square or tall).
pub fn solve(a: &RatMatrix, b: &[Rational]) -> Result<RatVector, LinAlgError> {
    if a.rows != b.len() {
        return Err(LinAlgError::DimensionMismatch);
    }
    let (m, n) = (a.rows, a.cols);
    let mut rows: Vec<Vec<Rational>> = (0..m)
        .map(|r| {
            let mut row = a.row(r).to_vec();
            row.push(b[r].clone());
            row
        })
        .collect();

    let mut pivot_row = 0;
    for col in 0..n {
        let Some(found) = (pivot_row..m).find(|&r| !rows[r][col].is_zero()) else {
            return Err(LinAlgError::RankDeficient);
        };
        rows.swap(found, pivot_row);
        let pivot = rows[pivot_row][col].clone();
        for v in rows[pivot_row].iter_mut() {
            *v /= &pivot;
        }
        let pivot_vals = rows[pivot_row].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == pivot_row || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (v, p) in row.iter_mut().zip(&pivot_vals) {
                if !p.is_zero() {
                    *v -= &factor * p;
                }
            }
        }
        pivot_row += 1;
    }
    // Rows past the pivots must reduce to 0 = 0.
    if rows[n..].iter().any(|row| !row[n].is_zero()) {
        return Err(LinAlgError::Inconsistent);
    }
    Ok(rows.into_iter().take(n).map(|mut row| row.pop().unwrap()).collect())
}

/// `true` iff the matrix is symmetric and every leading principal minor is
/// strictly positive.
pub fn is_positive_definite(a: &RatMatrix) -> bool {
    a.is_symmetric() && a.leading_principal_minors().iter().all(Signed::is_positive)
}
