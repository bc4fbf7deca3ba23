use std::collections::BTreeMap;
use std::fmt;

use num_traits::{Signed, Zero};
use serde::de::Error as _;
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::ratlinalg::rational::{parse_rational, to_pq};
use crate::ratlinalg::{dot, int, Rational};

use super::TeslerError;

/// A position `(row, col)` of an upper-triangular matrix, 1-indexed with
/// `row <= col`. Ordered lexicographically.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Position {
    pub row: usize,
    pub col: usize,
}

impl Position {
    pub const fn new(row: usize, col: usize) -> Self {
        Self { row, col }
    }

    pub fn is_diagonal(self) -> bool {
        self.row == self.col
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.row, self.col)
    }
}

impl Serialize for Position {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [self.row, self.col].serialize(s)
    }
}

impl<'de> Deserialize<'de> for Position {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let [row, col] = <[usize; 2]>::deserialize(d)?;
        if row == 0 || row > col {
            return Err(D::Error::custom(format!(
                "({row},{col}) is not an upper-triangular position"
            )));
        }
        Ok(Self { row, col })
    }
}

/// All positions of an `n x n` upper-triangular matrix in lexicographic order.
pub fn positions(n: usize) -> impl Iterator<Item = Position> {
    (1..=n).flat_map(move |i| (i..=n).map(move |j| Position::new(i, j)))
}

pub fn triangle_len(n: usize) -> usize {
    n * (n + 1) / 2
}

/// An `n x n` upper-triangular matrix of rationals, stored flat in
/// lexicographic position order. `n = 0` is the empty matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct UTMatrix {
    n: usize,
    entries: Vec<Rational>,
}

impl UTMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            entries: vec![Rational::zero(); triangle_len(n)],
        }
    }

    /// `entries` must list the `C(n+1, 2)` values in lexicographic order.
    pub fn from_entries(n: usize, entries: Vec<Rational>) -> Result<Self, TeslerError> {
        if entries.len() != triangle_len(n) {
            return Err(TeslerError::DimensionMismatch);
        }
        Ok(Self { n, entries })
    }

    /// Basis matrix with a single `1` at `pos`.
    pub fn basis(n: usize, pos: Position) -> Result<Self, TeslerError> {
        let mut m = Self::zeros(n);
        m.set(pos, int(1))?;
        Ok(m)
    }

    /// The `k`-th shifted hook-sum matrix of size `n`: `+1` along row `k`
    /// from the diagonal rightwards, `-1` on column `k - 1` above row `k`.
    pub fn shifted_hook_sum(n: usize, k: usize) -> Result<Self, TeslerError> {
        if k == 0 || k > n {
            return Err(TeslerError::InvalidPosition(Position::new(k, k)));
        }
        let mut m = Self::zeros(n);
        for j in k..=n {
            m.set(Position::new(k, j), int(1))?;
        }
        for i in 1..k {
            m.set(Position::new(i, k - 1), int(-1))?;
        }
        Ok(m)
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    fn index(&self, pos: Position) -> Option<usize> {
        let Position { row, col } = pos;
        if row == 0 || row > col || col > self.n {
            return None;
        }
        let start = (row - 1) * self.n - (row - 1) * row.saturating_sub(2) / 2;
        Some(start + (col - row))
    }

    pub fn get(&self, pos: Position) -> Result<&Rational, TeslerError> {
        let idx = self.index(pos).ok_or(TeslerError::InvalidPosition(pos))?;
        Ok(&self.entries[idx])
    }

    pub fn set(&mut self, pos: Position, value: Rational) -> Result<(), TeslerError> {
        let idx = self.index(pos).ok_or(TeslerError::InvalidPosition(pos))?;
        self.entries[idx] = value;
        Ok(())
    }

    /// Entry at `(row, col)`; panics on an out-of-range position.
    pub fn at(&self, row: usize, col: usize) -> &Rational {
        self.get(Position::new(row, col))
            .unwrap_or_else(|_| panic!("({row},{col}) outside a size-{} matrix", self.n))
    }

    /// Frobenius inner product in the lexicographic flattening.
    pub fn dot(&self, other: &UTMatrix) -> Result<Rational, TeslerError> {
        if self.n != other.n {
            return Err(TeslerError::DimensionMismatch);
        }
        Ok(dot(&self.entries, &other.entries))
    }

    pub fn is_nonnegative(&self) -> bool {
        self.entries.iter().all(|v| !v.is_negative())
    }

    pub fn scaled(&self, factor: &Rational) -> UTMatrix {
        UTMatrix {
            n: self.n,
            entries: self.entries.iter().map(|v| v * factor).collect(),
        }
    }

    pub fn sub(&self, other: &UTMatrix) -> Result<UTMatrix, TeslerError> {
        if self.n != other.n {
            return Err(TeslerError::DimensionMismatch);
        }
        Ok(UTMatrix {
            n: self.n,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }
}

impl fmt::Debug for UTMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut map = f.debug_map();
        for (pos, v) in positions(self.n).zip(&self.entries) {
            map.entry(&format_args!("{pos}"), &format_args!("{v}"));
        }
        map.finish()
    }
}

/// JSON form: an object mapping `"i,j"` to `"p/q"`, keys in lexicographic
/// position order.
impl Serialize for UTMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.entries.len()))?;
        for (pos, v) in positions(self.n).zip(&self.entries) {
            map.serialize_entry(&format!("{},{}", pos.row, pos.col), &to_pq(v))?;
        }
        map.end()
    }
}

impl<'de> Deserialize<'de> for UTMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = BTreeMap::<String, String>::deserialize(d)?;
        let mut parsed = BTreeMap::new();
        for (key, value) in &raw {
            let (i, j) = key
                .split_once(',')
                .ok_or_else(|| D::Error::custom(format!("bad position key {key:?}")))?;
            let pos = Position::new(
                i.trim().parse().map_err(D::Error::custom)?,
                j.trim().parse().map_err(D::Error::custom)?,
            );
            let v = parse_rational(value).map_err(D::Error::custom)?;
            parsed.insert(pos, v);
        }
        let n = parsed.keys().map(|p| p.col).max().unwrap_or(0);
        if parsed.len() != triangle_len(n) || positions(n).any(|p| !parsed.contains_key(&p)) {
            return Err(D::Error::custom(format!(
                "expected all {} upper-triangular entries of a size-{n} matrix",
                triangle_len(n)
            )));
        }
        Ok(UTMatrix {
            n,
            entries: parsed.into_values().collect(),
        })
    }
}
