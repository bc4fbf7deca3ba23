use std::fmt;

use itertools::Itertools;
use serde::{Serialize, Serializer};

use super::{Position, TeslerError, UTMatrix};

/// Dimension `C(n, 2)` of `Tes_n(a)` (and `PTes_n(a)`) for strictly positive `a`.
pub fn dimension(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Positions whose non-negativity constraint cuts out a facet: every
/// `(i,j)` with `1 <= i <= j <= n` except `(n,n)`.
pub fn facet_positions(n: usize) -> Vec<Position> {
    super::positions(n)
        .filter(|p| !(p.row == n && p.col == n))
        .collect()
}

fn is_facet_position(n: usize, pos: Position) -> bool {
    pos.row >= 1 && pos.row <= pos.col && pos.col <= n && !(pos.row == n && pos.col == n)
}

/// Primitive outer normal of the facet `F_{i,j}` of `PTes_n(a)`, living in
/// the size-`(n-1)` matrices: the shifted hook sum `s_i` for a diagonal
/// position, `-e_{i,j-1}` otherwise.
pub fn facet_normal(n: usize, pos: Position) -> Result<UTMatrix, TeslerError> {
    if n < 2 {
        return Err(TeslerError::SizeTooSmall(n));
    }
    if !is_facet_position(n, pos) {
        return Err(TeslerError::InvalidFacet(pos));
    }
    if pos.is_diagonal() {
        UTMatrix::shifted_hook_sum(n - 1, pos.row)
    } else {
        let mut e = UTMatrix::basis(n - 1, Position::new(pos.row, pos.col - 1))?;
        e = e.scaled(&crate::ratlinalg::int(-1));
        Ok(e)
    }
}

/// First row `i` whose positions `(i,i), ..., (i,n)` all lie in `support`.
fn zeroed_row(n: usize, support: &[Position]) -> Option<usize> {
    (1..=n).find(|&i| (i..=n).all(|j| support.contains(&Position::new(i, j))))
}

/// `true` iff no row of the matrix is entirely covered by `support`.
pub fn is_valid_face_support(n: usize, support: &[Position]) -> bool {
    zeroed_row(n, support).is_none()
}

/// A set of facet positions naming one face of `PTes_n(a)`: the face where
/// all the listed entries vanish. The number of positions is the face's
/// codimension.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FaceSupport {
    n: usize,
    positions: Vec<Position>,
}

impl FaceSupport {
    /// Validates and sorts `positions`.
    pub fn new(n: usize, mut positions: Vec<Position>) -> Result<Self, TeslerError> {
        positions.sort();
        positions.dedup();
        if let Some(bad) = positions.iter().find(|p| !is_facet_position(n, **p)) {
            return Err(TeslerError::InvalidFacet(*bad));
        }
        if let Some(row) = zeroed_row(n, &positions) {
            return Err(TeslerError::ZeroRow(row));
        }
        Ok(Self { n, positions })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn codim(&self) -> usize {
        self.positions.len()
    }

    pub fn dim(&self) -> usize {
        dimension(self.n) - self.codim()
    }

    pub fn positions(&self) -> &[Position] {
        &self.positions
    }

    pub fn contains(&self, pos: Position) -> bool {
        self.positions.binary_search(&pos).is_ok()
    }

    pub fn is_subset_of(&self, other: &FaceSupport) -> bool {
        self.positions.iter().all(|p| other.contains(*p))
    }

    pub fn diagonal_count(&self) -> usize {
        self.positions.iter().filter(|p| p.is_diagonal()).count()
    }
}

impl fmt::Debug for FaceSupport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, p) in self.positions.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Display for FaceSupport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// JSON form: array of `[i, j]` pairs.
impl Serialize for FaceSupport {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.positions.serialize(s)
    }
}

/// All supports of codimension-`k` faces, sorted.
///
/// Subsets are enumerated directly when `k` is small and through their
/// complements (which must leave a free position in every row) when `k` is
/// close to the number of facets.
pub fn enumerate_faces(n: usize, k: usize) -> Result<Vec<FaceSupport>, TeslerError> {
    let dim = dimension(n);
    if k > dim {
        return Err(TeslerError::CodimOutOfRange { codim: k, dim });
    }
    let facets = facet_positions(n);
    let total = facets.len();
    let mut out: Vec<FaceSupport> = if k <= total - k {
        facets
            .iter()
            .copied()
            .combinations(k)
            .filter(|s| is_valid_face_support(n, s))
            .map(|positions| FaceSupport { n, positions })
            .collect()
    } else {
        facets
            .iter()
            .copied()
            .combinations(total - k)
            // The complement keeps every row 1..n-1 partly free; row n has no facets.
            .filter(|free| (1..n).all(|i| free.iter().any(|p| p.row == i)))
            .map(|free| FaceSupport {
                n,
                positions: facets.iter().copied().filter(|p| !free.contains(p)).collect(),
            })
            .collect()
    };
    out.sort();
    Ok(out)
}
