//! Berline-Vergne alpha values for faces of codimension at most 3.
//!
//! For a unimodular pointed feasible cone with Gram matrix `M`:
//!
//! - codim 0: `1`; codim 1: `1/2`;
//! - codim 2: `1/4 + (m12/m11 + m12/m22) / 12`;
//! - codim 3: `1/8 + (sum of the six ratios m_ij/m_ii, m_ij/m_jj) / 24`.
//!
//! Faces of `PTes_n(1)` fall into finitely many cases determined by how the
//! support meets the hooks of its diagonal positions. Each case has a
//! symbolic normal-cone matrix, feasible-cone matrix and alpha value as
//! rational functions of `n`; [`verify_tables`] checks every face against
//! them.

use std::fmt;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::cones::{fcone_mdp, ncone_mdp, ConeError};
use crate::ratlinalg::rational::pq;
use crate::ratlinalg::{int, rat, RatMatrix, Rational};
use crate::tesler::{dimension, enumerate_faces, FaceSupport, Position, TeslerError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlphaError {
    #[error("alpha is only available for codimension 0 to 3, not {0}")]
    UnsupportedCodim(usize),
    #[error("case {label} does not occur for n = {n}")]
    CaseUnavailable { label: String, n: usize },
    #[error("feasible-cone matrix is not symmetric")]
    NotSymmetric,
    #[error("feasible-cone matrix has a zero diagonal entry")]
    ZeroDiagonal,
    #[error(transparent)]
    Cone(#[from] ConeError),
    #[error(transparent)]
    Tesler(#[from] TeslerError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AlphaMethod {
    Constant,
    MdpFormula,
    ClosedFormCase,
    HypercubeFastPath,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AlphaValue {
    #[serde(with = "pq")]
    pub value: Rational,
    pub codim: usize,
    pub method: AlphaMethod,
}

pub fn alpha_codim01(codim: usize) -> Result<AlphaValue, AlphaError> {
    let value = match codim {
        0 => int(1),
        1 => rat(1, 2),
        k => return Err(AlphaError::UnsupportedCodim(k)),
    };
    Ok(AlphaValue {
        value,
        codim,
        method: AlphaMethod::Constant,
    })
}

pub fn alpha_hypercube(k: usize) -> AlphaValue {
    AlphaValue {
        value: Rational::new(One::one(), num_bigint::BigInt::from(2u8).pow(k as u32)),
        codim: k,
        method: AlphaMethod::HypercubeFastPath,
    }
}

fn check_mdp(m: &RatMatrix, k: usize) -> Result<(), AlphaError> {
    if m.rows() != k || m.cols() != k {
        return Err(AlphaError::UnsupportedCodim(m.rows()));
    }
    if !m.is_symmetric() {
        return Err(AlphaError::NotSymmetric);
    }
    if (0..k).any(|i| m.get(i, i).is_zero()) {
        return Err(AlphaError::ZeroDiagonal);
    }
    Ok(())
}

/// Sum over pairs `i < j` of `m_ij/m_ii + m_ij/m_jj`.
fn ratio_sum(m: &RatMatrix) -> Rational {
    let k = m.rows();
    let mut s = Rational::zero();
    for i in 0..k {
        for j in i + 1..k {
            s += m.get(i, j) / m.get(i, i) + m.get(i, j) / m.get(j, j);
        }
    }
    s
}

pub fn alpha_codim2(m: &RatMatrix) -> Result<AlphaValue, AlphaError> {
    check_mdp(m, 2)?;
    Ok(AlphaValue {
        value: rat(1, 4) + ratio_sum(m) / int(12),
        codim: 2,
        method: AlphaMethod::MdpFormula,
    })
}

pub fn alpha_codim3(m: &RatMatrix) -> Result<AlphaValue, AlphaError> {
    check_mdp(m, 3)?;
    Ok(AlphaValue {
        value: rat(1, 8) + ratio_sum(m) / int(24),
        codim: 3,
        method: AlphaMethod::MdpFormula,
    })
}

/// Alpha from a feasible-cone Gram matrix of size 0 to 3.
pub fn alpha_from_mdp(m: &RatMatrix) -> Result<AlphaValue, AlphaError> {
    match m.rows() {
        0 | 1 => alpha_codim01(m.rows()),
        2 => alpha_codim2(m),
        3 => alpha_codim3(m),
        k => Err(AlphaError::UnsupportedCodim(k)),
    }
}

/// Polynomial in `n` with integer coefficients, lowest degree first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntPoly(pub Vec<i64>);

impl IntPoly {
    pub fn eval(&self, n: usize) -> Rational {
        let x = int(n as i64);
        self.0
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, &c| acc * &x + int(c))
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (deg, &c) in self.0.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let sign = if c < 0 { "-" } else { "+" };
            if first {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.unsigned_abs();
            match deg {
                0 => write!(f, "{a}")?,
                _ => {
                    if a != 1 {
                        write!(f, "{a}")?;
                    }
                    write!(f, "n")?;
                    if deg > 1 {
                        write!(f, "^{deg}")?;
                    }
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Rational function `num(n) / den(n)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalFn {
    pub num: IntPoly,
    pub den: IntPoly,
}

impl RationalFn {
    pub fn new(num: &[i64], den: &[i64]) -> Self {
        Self {
            num: IntPoly(num.to_vec()),
            den: IntPoly(den.to_vec()),
        }
    }

    pub fn constant(num: i64, den: i64) -> Self {
        Self::new(&[num], &[den])
    }

    /// `None` when the denominator vanishes at `n`.
    pub fn eval(&self, n: usize) -> Option<Rational> {
        let d = self.den.eval(n);
        (!d.is_zero()).then(|| self.num.eval(n) / d)
    }
}

impl fmt::Display for RationalFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})/({})", self.num, self.den)
    }
}

/// `(1/scale(n)) * [[entries_ij(n)]]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolicMatrix {
    pub scale: IntPoly,
    pub entries: Vec<Vec<IntPoly>>,
}

impl SymbolicMatrix {
    fn new(scale: &[i64], rows: &[&[&[i64]]]) -> Self {
        Self {
            scale: IntPoly(scale.to_vec()),
            entries: rows
                .iter()
                .map(|r| r.iter().map(|c| IntPoly(c.to_vec())).collect())
                .collect(),
        }
    }

    pub fn eval(&self, n: usize) -> Option<RatMatrix> {
        let s = self.scale.eval(n);
        if s.is_zero() {
            return None;
        }
        let rows = self
            .entries
            .iter()
            .map(|r| r.iter().map(|p| p.eval(n) / &s).collect())
            .collect();
        RatMatrix::from_rows(rows).ok()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Codim2Case {
    /// One diagonal `l`; the other position lies on row `l`.
    OnRow,
    /// One diagonal `l`; the other position lies on column `l`.
    OnColumn,
    /// One diagonal `l`; the other position misses hook `l`.
    OffHook,
    /// Two diagonal positions.
    TwoDiagonals,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Codim3Case {
    OneDiagNoneOnHook,
    OneDiagRowAndOff,
    OneDiagColumnAndOff,
    OneDiagTwoOnRow,
    OneDiagRowAndColumn,
    OneDiagTwoOnColumn,
    TwoDiagOffHooks,
    TwoDiagOnRow,
    TwoDiagOnColumn,
    TwoDiagRowAndColumn,
    ThreeDiagonals,
}

impl Codim2Case {
    pub const ALL: [Codim2Case; 4] = [Self::OnRow, Self::OnColumn, Self::OffHook, Self::TwoDiagonals];

    pub fn label(self) -> &'static str {
        match self {
            Self::OnRow => "(1)(i)",
            Self::OnColumn => "(1)(ii)",
            Self::OffHook => "(1)(iii)",
            Self::TwoDiagonals => "(2)",
        }
    }
}

impl Codim3Case {
    pub const ALL: [Codim3Case; 11] = [
        Self::OneDiagNoneOnHook,
        Self::OneDiagRowAndOff,
        Self::OneDiagColumnAndOff,
        Self::OneDiagTwoOnRow,
        Self::OneDiagRowAndColumn,
        Self::OneDiagTwoOnColumn,
        Self::TwoDiagOffHooks,
        Self::TwoDiagOnRow,
        Self::TwoDiagOnColumn,
        Self::TwoDiagRowAndColumn,
        Self::ThreeDiagonals,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Self::OneDiagNoneOnHook => "(1)(i)",
            Self::OneDiagRowAndOff => "(1)(ii)",
            Self::OneDiagColumnAndOff => "(1)(iii)",
            Self::OneDiagTwoOnRow => "(1)(iv)",
            Self::OneDiagRowAndColumn => "(1)(v)",
            Self::OneDiagTwoOnColumn => "(1)(vi)",
            Self::TwoDiagOffHooks => "(2)(i)",
            Self::TwoDiagOnRow => "(2)(ii)",
            Self::TwoDiagOnColumn => "(2)(iii)",
            Self::TwoDiagRowAndColumn => "(2)(iv)",
            Self::ThreeDiagonals => "(3)",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CaseLabel {
    Codim2(Codim2Case),
    Codim3(Codim3Case),
    /// No diagonal position; the argument is the codimension.
    Hypercube(usize),
}

impl CaseLabel {
    pub fn codim(self) -> usize {
        match self {
            Self::Codim2(_) => 2,
            Self::Codim3(_) => 3,
            Self::Hypercube(k) => k,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Codim2(c) => c.label(),
            Self::Codim3(c) => c.label(),
            Self::Hypercube(_) => "hypercube",
        }
    }

    /// All labels of a given codimension (2 or 3), hypercube last.
    pub fn all(codim: usize) -> Vec<CaseLabel> {
        let mut out: Vec<CaseLabel> = match codim {
            2 => Codim2Case::ALL.iter().map(|&c| Self::Codim2(c)).collect(),
            3 => Codim3Case::ALL.iter().map(|&c| Self::Codim3(c)).collect(),
            _ => Vec::new(),
        };
        out.push(Self::Hypercube(codim));
        out
    }

    /// Smallest `n` for which the case has a well-defined closed form.
    pub fn min_n(self) -> usize {
        use Codim3Case::*;
        match self {
            Self::Codim3(OneDiagTwoOnRow | OneDiagRowAndColumn | OneDiagTwoOnColumn | ThreeDiagonals) => 4,
            Self::Hypercube(_) => 2,
            _ => 3,
        }
    }
}

impl fmt::Display for CaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl Serialize for CaseLabel {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

/// Case of a face together with its support ordered as in the case's
/// symbolic matrices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CaseTag {
    pub codim: usize,
    pub label: CaseLabel,
    pub ordered: Vec<Position>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Incidence {
    Row,
    Column,
    Off,
}

fn incidence(l: usize, p: Position) -> Incidence {
    if p.row == l {
        Incidence::Row
    } else if p.col == l {
        Incidence::Column
    } else {
        Incidence::Off
    }
}

/// Classifies a support of size 2 or 3 by its hook-incidence pattern.
pub fn classify_case(support: &FaceSupport) -> Result<CaseTag, AlphaError> {
    let k = support.codim();
    if !(2..=3).contains(&k) {
        return Err(AlphaError::UnsupportedCodim(k));
    }
    let (diag, off): (Vec<Position>, Vec<Position>) =
        support.positions().iter().partition(|p| p.is_diagonal());
    let tag = |label, ordered| CaseTag {
        codim: k,
        label,
        ordered,
    };
    if diag.is_empty() {
        return Ok(tag(CaseLabel::Hypercube(k), off));
    }
    use Incidence::*;
    Ok(match (k, diag.len()) {
        (2, 1) => {
            let (l, p) = (diag[0], off[0]);
            let case = match incidence(l.row, p) {
                Row => Codim2Case::OnRow,
                Column => Codim2Case::OnColumn,
                Off => Codim2Case::OffHook,
            };
            tag(CaseLabel::Codim2(case), vec![l, p])
        }
        (2, _) => tag(CaseLabel::Codim2(Codim2Case::TwoDiagonals), diag),
        (3, 1) => {
            let l = diag[0];
            let (mut a, mut b) = (off[0], off[1]);
            let (mut ia, mut ib) = (incidence(l.row, a), incidence(l.row, b));
            // Put the more hook-bound position first: Row before Column before Off.
            let rank = |i: Incidence| match i {
                Row => 0,
                Column => 1,
                Off => 2,
            };
            if rank(ib) < rank(ia) {
                std::mem::swap(&mut a, &mut b);
                std::mem::swap(&mut ia, &mut ib);
            }
            let case = match (ia, ib) {
                (Off, _) => Codim3Case::OneDiagNoneOnHook,
                (Row, Off) => Codim3Case::OneDiagRowAndOff,
                (Column, Off) => Codim3Case::OneDiagColumnAndOff,
                (Row, Row) => Codim3Case::OneDiagTwoOnRow,
                (Row, Column) => Codim3Case::OneDiagRowAndColumn,
                (Column, _) => Codim3Case::OneDiagTwoOnColumn,
            };
            tag(CaseLabel::Codim3(case), vec![l, a, b])
        }
        (3, 2) => {
            let (l, m, p) = (diag[0], diag[1], off[0]);
            let (il, im) = (incidence(l.row, p), incidence(m.row, p));
            let (case, ordered) = match (il, im) {
                (Off, Off) => (Codim3Case::TwoDiagOffHooks, vec![l, m, p]),
                (Row, Column) => (Codim3Case::TwoDiagRowAndColumn, vec![l, m, p]),
                (Column, Row) => (Codim3Case::TwoDiagRowAndColumn, vec![m, l, p]),
                (Row, _) => (Codim3Case::TwoDiagOnRow, vec![m, l, p]),
                (_, Row) => (Codim3Case::TwoDiagOnRow, vec![l, m, p]),
                (Column, _) => (Codim3Case::TwoDiagOnColumn, vec![m, l, p]),
                (_, Column) => (Codim3Case::TwoDiagOnColumn, vec![l, m, p]),
            };
            tag(CaseLabel::Codim3(case), ordered)
        }
        _ => tag(CaseLabel::Codim3(Codim3Case::ThreeDiagonals), diag),
    })
}

fn identity_template(k: usize) -> SymbolicMatrix {
    SymbolicMatrix {
        scale: IntPoly(vec![1]),
        entries: (0..k)
            .map(|i| (0..k).map(|j| IntPoly(vec![(i == j) as i64])).collect())
            .collect(),
    }
}

// Shorthand polynomials in n.
const N1: &[i64] = &[-1, 1]; // n - 1
const N2: &[i64] = &[-2, 1]; // n - 2
const NN2: &[i64] = &[0, -2, 1]; // n^2 - 2n
const NN3: &[i64] = &[0, -3, 1]; // n^2 - 3n
const D: &[i64] = &[1, -3, 1]; // n^2 - 3n + 1
const ONE: &[i64] = &[1];
const ZERO: &[i64] = &[0];
const M1: &[i64] = &[-1];

/// Symbolic normal-cone Gram matrix of the case, in `CaseTag::ordered` order.
pub fn ncone_template(label: CaseLabel) -> SymbolicMatrix {
    use Codim2Case as C2;
    use Codim3Case as C3;
    let m = |rows: &[&[&[i64]]]| SymbolicMatrix::new(ONE, rows);
    match label {
        CaseLabel::Hypercube(k) => identity_template(k),
        CaseLabel::Codim2(c) => match c {
            C2::OnRow => m(&[&[N1, M1], &[M1, ONE]]),
            C2::OnColumn => m(&[&[N1, ONE], &[ONE, ONE]]),
            C2::OffHook => m(&[&[N1, ZERO], &[ZERO, ONE]]),
            C2::TwoDiagonals => m(&[&[N1, M1], &[M1, N1]]),
        },
        CaseLabel::Codim3(c) => match c {
            C3::OneDiagNoneOnHook => m(&[&[N1, ZERO, ZERO], &[ZERO, ONE, ZERO], &[ZERO, ZERO, ONE]]),
            C3::OneDiagRowAndOff => m(&[&[N1, M1, ZERO], &[M1, ONE, ZERO], &[ZERO, ZERO, ONE]]),
            C3::OneDiagColumnAndOff => m(&[&[N1, ONE, ZERO], &[ONE, ONE, ZERO], &[ZERO, ZERO, ONE]]),
            C3::OneDiagTwoOnRow => m(&[&[N1, M1, M1], &[M1, ONE, ZERO], &[M1, ZERO, ONE]]),
            C3::OneDiagRowAndColumn => m(&[&[N1, M1, ONE], &[M1, ONE, ZERO], &[ONE, ZERO, ONE]]),
            C3::OneDiagTwoOnColumn => m(&[&[N1, ONE, ONE], &[ONE, ONE, ZERO], &[ONE, ZERO, ONE]]),
            C3::TwoDiagOffHooks => m(&[&[N1, M1, ZERO], &[M1, N1, ZERO], &[ZERO, ZERO, ONE]]),
            C3::TwoDiagOnRow => m(&[&[N1, M1, ZERO], &[M1, N1, M1], &[ZERO, M1, ONE]]),
            C3::TwoDiagOnColumn => m(&[&[N1, M1, ZERO], &[M1, N1, ONE], &[ZERO, ONE, ONE]]),
            C3::TwoDiagRowAndColumn => m(&[&[N1, M1, M1], &[M1, N1, ONE], &[M1, ONE, ONE]]),
            C3::ThreeDiagonals => m(&[&[N1, M1, M1], &[M1, N1, M1], &[M1, M1, N1]]),
        },
    }
}

/// Symbolic feasible-cone Gram matrix of the case, in `CaseTag::ordered` order.
pub fn fcone_template(label: CaseLabel) -> SymbolicMatrix {
    use Codim2Case as C2;
    use Codim3Case as C3;
    let m = SymbolicMatrix::new;
    match label {
        CaseLabel::Hypercube(k) => identity_template(k),
        CaseLabel::Codim2(c) => match c {
            C2::OnRow => m(N2, &[&[ONE, ONE], &[ONE, N1]]),
            C2::OnColumn => m(N2, &[&[ONE, M1], &[M1, N1]]),
            C2::OffHook => m(N1, &[&[ONE, ZERO], &[ZERO, N1]]),
            C2::TwoDiagonals => m(NN2, &[&[N1, ONE], &[ONE, N1]]),
        },
        CaseLabel::Codim3(c) => match c {
            C3::OneDiagNoneOnHook => m(N1, &[&[ONE, ZERO, ZERO], &[ZERO, N1, ZERO], &[ZERO, ZERO, N1]]),
            C3::OneDiagRowAndOff => m(N2, &[&[ONE, ONE, ZERO], &[ONE, N1, ZERO], &[ZERO, ZERO, N2]]),
            C3::OneDiagColumnAndOff => m(N2, &[&[ONE, M1, ZERO], &[M1, N1, ZERO], &[ZERO, ZERO, N2]]),
            C3::OneDiagTwoOnRow => m(&[-3, 1], &[&[ONE, ONE, ONE], &[ONE, N2, ONE], &[ONE, ONE, N2]]),
            C3::OneDiagRowAndColumn => m(&[-3, 1], &[&[ONE, ONE, M1], &[ONE, N2, M1], &[M1, M1, N2]]),
            C3::OneDiagTwoOnColumn => m(&[-3, 1], &[&[ONE, M1, M1], &[M1, N2, ONE], &[M1, ONE, N2]]),
            C3::TwoDiagOffHooks => m(NN2, &[&[N1, ONE, ZERO], &[ONE, N1, ZERO], &[ZERO, ZERO, NN2]]),
            C3::TwoDiagOnRow => m(D, &[&[N2, ONE, ONE], &[ONE, N1, N1], &[ONE, N1, NN2]]),
            C3::TwoDiagOnColumn => m(D, &[&[N2, ONE, M1], &[ONE, N1, &[1, -1]], &[M1, &[1, -1], NN2]]),
            C3::TwoDiagRowAndColumn => m(N2, &[&[ONE, ZERO, ONE], &[ZERO, ONE, M1], &[ONE, M1, &[0, 1]]]),
            C3::ThreeDiagonals => m(NN3, &[&[N2, ONE, ONE], &[ONE, N2, ONE], &[ONE, ONE, N2]]),
        },
    }
}

/// Closed-form alpha of the case as a rational function of `n`.
pub fn alpha_template(label: CaseLabel) -> RationalFn {
    use Codim2Case as C2;
    use Codim3Case as C3;
    let f = RationalFn::new;
    match label {
        CaseLabel::Hypercube(k) => RationalFn::constant(1, 1 << k),
        CaseLabel::Codim2(c) => match c {
            // 1/4 + n/(12(n-1))
            C2::OnRow => f(&[-3, 4], &[-12, 12]),
            // 1/4 - n/(12(n-1))
            C2::OnColumn => f(&[-3, 2], &[-12, 12]),
            C2::OffHook => RationalFn::constant(1, 4),
            // 1/4 + 1/(6(n-1))
            C2::TwoDiagonals => f(&[-1, 3], &[-12, 12]),
        },
        CaseLabel::Codim3(c) => match c {
            C3::OneDiagNoneOnHook => RationalFn::constant(1, 8),
            // 1/8 + n/(24(n-1))
            C3::OneDiagRowAndOff => f(&[-3, 4], &[-24, 24]),
            // 1/8 - n/(24(n-1))
            C3::OneDiagColumnAndOff => f(&[-3, 2], &[-24, 24]),
            // 1/8 + n/(12(n-2))
            C3::OneDiagTwoOnRow => f(&[-6, 5], &[-48, 24]),
            // 1/8 - 1/(12(n-2))
            C3::OneDiagRowAndColumn => f(&[-8, 3], &[-48, 24]),
            C3::OneDiagTwoOnColumn => RationalFn::constant(1, 24),
            // 1/8 + 1/(12(n-1))
            C3::TwoDiagOffHooks => f(&[-1, 3], &[-24, 24]),
            // 1/8 + (n^2+n-3)/(24(n^2-3n+2))
            C3::TwoDiagOnRow => f(&[3, -8, 4], &[48, -72, 24]),
            // 1/8 - (n^2-3n+3)/(24(n^2-3n+2))
            C3::TwoDiagOnColumn => f(&[3, -6, 2], &[48, -72, 24]),
            C3::TwoDiagRowAndColumn => RationalFn::constant(1, 8),
            // 1/8 + 1/(4(n-2))
            C3::ThreeDiagonals => f(&[0, 1], &[-16, 8]),
        },
    }
}

fn check_available(n: usize, label: CaseLabel) -> Result<(), AlphaError> {
    if n < label.min_n() {
        return Err(AlphaError::CaseUnavailable {
            label: label.name().to_string(),
            n,
        });
    }
    Ok(())
}

pub fn closed_form_alpha(n: usize, tag: &CaseTag) -> Result<AlphaValue, AlphaError> {
    check_available(n, tag.label)?;
    if let CaseLabel::Hypercube(k) = tag.label {
        return Ok(alpha_hypercube(k));
    }
    let value = alpha_template(tag.label)
        .eval(n)
        .ok_or_else(|| AlphaError::CaseUnavailable {
            label: tag.label.name().to_string(),
            n,
        })?;
    Ok(AlphaValue {
        value,
        codim: tag.codim,
        method: AlphaMethod::ClosedFormCase,
    })
}

/// Alpha of a face of `PTes_n(1)` of codimension at most 3.
pub fn alpha_of_face(n: usize, support: &FaceSupport) -> Result<AlphaValue, AlphaError> {
    match support.codim() {
        k @ (0 | 1) => alpha_codim01(k),
        k @ (2 | 3) if support.diagonal_count() == 0 => Ok(alpha_hypercube(k)),
        2 | 3 => alpha_from_mdp(&fcone_mdp(n, support.positions())?.entries),
        k => Err(AlphaError::UnsupportedCodim(k)),
    }
}

/// Per-face outcome of [`verify_tables`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FaceCheck {
    pub support: FaceSupport,
    pub tag: CaseTag,
    pub ncone_match: bool,
    pub fcone_match: bool,
    pub inverse_identity: bool,
    pub alpha_match: bool,
    #[serde(with = "pq")]
    pub alpha: Rational,
}

impl FaceCheck {
    pub fn passed(&self) -> bool {
        self.ncone_match && self.fcone_match && self.inverse_identity && self.alpha_match
    }
}

/// Aggregate for one case label.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CaseSummary {
    pub codim: usize,
    pub label: CaseLabel,
    pub count: usize,
    pub mdp_match: bool,
    pub alpha_match: bool,
    /// Closed-form value at this `n`; `None` if the case does not occur.
    #[serde(serialize_with = "opt_pq")]
    pub alpha_value: Option<Rational>,
    pub available: bool,
}

fn opt_pq<S: Serializer>(v: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(r) => pq::serialize(r, s),
        None => s.serialize_none(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TableReport {
    pub n: usize,
    pub cases: Vec<CaseSummary>,
    pub faces: Vec<FaceCheck>,
    pub passed: bool,
}

impl TableReport {
    pub fn first_failure(&self) -> Option<&FaceCheck> {
        self.faces.iter().find(|f| !f.passed())
    }

    pub fn face_count(&self, codim: usize) -> usize {
        self.faces.iter().filter(|f| f.tag.codim == codim).count()
    }

    pub fn case(&self, label: CaseLabel) -> Option<&CaseSummary> {
        self.cases.iter().find(|c| c.label == label)
    }
}

fn check_face(n: usize, support: &FaceSupport) -> Result<FaceCheck, AlphaError> {
    let tag = classify_case(support)?;
    let c = ncone_mdp(n, &tag.ordered)?.entries;
    let m = fcone_mdp(n, &tag.ordered)?.entries;
    let ncone_match = ncone_template(tag.label).eval(n).as_ref() == Some(&c);
    let fcone_match = fcone_template(tag.label).eval(n).as_ref() == Some(&m);
    let inverse_identity = c.mul(&m).map(|p| p.is_identity()).unwrap_or(false);
    let alpha = alpha_from_mdp(&m)?.value;
    let alpha_match = closed_form_alpha(n, &tag)
        .map(|a| a.value == alpha)
        .unwrap_or(false);
    Ok(FaceCheck {
        support: support.clone(),
        tag,
        ncone_match,
        fcone_match,
        inverse_identity,
        alpha_match,
        alpha,
    })
}

/// Checks every codim-2 and codim-3 face of `PTes_n(1)` against the case
/// tables: normal-cone matrix, feasible-cone matrix, `C M = I`, and alpha.
pub fn verify_tables(n: usize) -> Result<TableReport, AlphaError> {
    if n < 3 {
        return Err(AlphaError::CaseUnavailable {
            label: "codim-2".to_string(),
            n,
        });
    }
    let mut supports = enumerate_faces(n, 2)?;
    supports.extend(enumerate_faces(n, 3)?);
    let faces = supports
        .par_iter()
        .map(|s| check_face(n, s))
        .collect::<Result<Vec<_>, _>>()?;

    let cases = [2, 3]
        .iter()
        .flat_map(|&k| CaseLabel::all(k))
        .map(|label| {
            let members: Vec<&FaceCheck> = faces.iter().filter(|f| f.tag.label == label).collect();
            let available = n >= label.min_n();
            let alpha_value = if available {
                closed_form_alpha(
                    n,
                    &CaseTag {
                        codim: label.codim(),
                        label,
                        ordered: Vec::new(),
                    },
                )
                .ok()
                .map(|a| a.value)
            } else {
                None
            };
            CaseSummary {
                codim: label.codim(),
                label,
                count: members.len(),
                mdp_match: members.iter().all(|f| f.ncone_match && f.fcone_match && f.inverse_identity),
                alpha_match: members.iter().all(|f| f.alpha_match),
                alpha_value,
                available,
            }
        })
        .collect::<Vec<_>>();
    // Cases that cannot occur at this n must have no faces.
    let passed = faces.iter().all(FaceCheck::passed)
        && cases.iter().all(|c| c.available || c.count == 0);
    Ok(TableReport {
        n,
        cases,
        faces,
        passed,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtremalAlpha {
    pub codim: usize,
    #[serde(with = "pq")]
    pub min: Rational,
    pub argmin: Vec<FaceSupport>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PositivityReport {
    pub n: usize,
    pub codim2: ExtremalAlpha,
    pub codim3: ExtremalAlpha,
    /// `1/4 - n/(12(n-1))`.
    #[serde(with = "pq")]
    pub expected_codim2_min: Rational,
    pub codim2_min_matches: bool,
    pub all_positive: bool,
}

/// Minimum alpha over all faces of the given codimension, with the faces
/// attaining it.
pub fn minimum_alpha(n: usize, codim: usize) -> Result<ExtremalAlpha, AlphaError> {
    let faces = enumerate_faces(n, codim)?;
    let values = faces
        .par_iter()
        .map(|s| alpha_of_face(n, s).map(|a| a.value))
        .collect::<Result<Vec<_>, _>>()?;
    let min = values
        .iter()
        .min()
        .cloned()
        .ok_or(AlphaError::UnsupportedCodim(codim))?;
    let argmin = faces
        .into_iter()
        .zip(&values)
        .filter(|(_, v)| **v == min)
        .map(|(s, _)| s)
        .collect();
    Ok(ExtremalAlpha { codim, min, argmin })
}

pub fn positivity_report(n: usize) -> Result<PositivityReport, AlphaError> {
    if n < 3 || dimension(n) < 3 {
        return Err(AlphaError::CaseUnavailable {
            label: "codim-3".to_string(),
            n,
        });
    }
    let codim2 = minimum_alpha(n, 2)?;
    let codim3 = minimum_alpha(n, 3)?;
    let expected_codim2_min = alpha_template(CaseLabel::Codim2(Codim2Case::OnColumn))
        .eval(n)
        .expect("n >= 3");
    let zero = Rational::zero();
    Ok(PositivityReport {
        n,
        codim2_min_matches: codim2.min == expected_codim2_min,
        all_positive: codim2.min > zero && codim3.min > zero,
        codim2,
        codim3,
        expected_codim2_min,
    })
}
