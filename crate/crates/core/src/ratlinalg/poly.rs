use std::fmt;

use num_traits::{One, Signed, Zero};

use super::rational::{int, Rational};
use super::LinAlgError;

/// Univariate polynomial with exact rational coefficients, lowest degree
/// first. Trailing zero coefficients are trimmed.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Polynomial {
    coeffs: Vec<Rational>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn coefficients(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Coefficient of `t^i`; zero beyond the degree.
    pub fn coefficient(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, t: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * t + c)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let mag = c.abs();
            let show_coeff = i == 0 || !mag.is_one();
            if show_coeff {
                if mag.denom().is_one() {
                    write!(f, "{}", mag.numer())?;
                } else {
                    write!(f, "({mag})")?;
                }
                if i > 0 {
                    write!(f, "*")?;
                }
            }
            match i {
                0 => {}
                1 => write!(f, "t")?,
                _ => write!(f, "t^{i}")?,
            }
        }
        Ok(())
    }
}

/// Unique polynomial of degree `< points.len()` through the given points.
pub fn lagrange_interpolate(points: &[(i64, Rational)]) -> Result<Polynomial, LinAlgError> {
    for (i, (ti, _)) in points.iter().enumerate() {
        if points[..i].iter().any(|(tj, _)| tj == ti) {
            return Err(LinAlgError::DuplicateAbscissa);
        }
    }
    let k = points.len();
    let mut acc = vec![Rational::zero(); k];
    for (i, (ti, yi)) in points.iter().enumerate() {
        // basis_i(t) = prod_{j != i} (t - t_j) / (t_i - t_j)
        let mut basis = vec![Rational::one()];
        let mut denom = Rational::one();
        for (j, (tj, _)) in points.iter().enumerate() {
            if i == j {
                continue;
            }
            let root = int(*tj);
            let mut next = vec![Rational::zero(); basis.len() + 1];
            for (d, c) in basis.iter().enumerate() {
                next[d + 1] += c;
                next[d] -= c * &root;
            }
            basis = next;
            denom *= int(ti - tj);
        }
        let scale = yi / denom;
        for (slot, c) in acc.iter_mut().zip(&basis) {
            *slot += c * &scale;
        }
    }
    Ok(Polynomial::new(acc))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratlinalg::rational::rat;
    use proptest::prelude::*;

    #[test]
    fn line_through_two_points() {
        let p = lagrange_interpolate(&[(0, int(1)), (1, int(2))]).unwrap();
        assert_eq!(p.coefficients(), &[int(1), int(1)]);
        assert_eq!(p.to_string(), "t + 1");
    }

    #[test]
    fn higher_terms_vanish() {
        let pts: Vec<_> = (0..4).map(|t| (t, int(t + 1))).collect();
        let p = lagrange_interpolate(&pts).unwrap();
        assert_eq!(p.degree(), Some(1));
        assert_eq!(p.coefficient(3), int(0));
    }

    #[test]
    fn duplicate_abscissa() {
        assert_eq!(
            lagrange_interpolate(&[(1, int(1)), (1, int(2))]),
            Err(LinAlgError::DuplicateAbscissa)
        );
    }

    #[test]
    fn display_mixed_signs() {
        let p = Polynomial::new(vec![int(1), rat(-1, 2), int(0), int(3)]);
        assert_eq!(p.to_string(), "3*t^3 - (1/2)*t + 1");
        assert_eq!(Polynomial::new(vec![int(0)]).to_string(), "0");
    }

    proptest! {
        #[test]
        fn interpolation_reproduces_points(ys in prop::collection::vec((-20i64..20, 1i64..5), 1..7)) {
            let pts: Vec<(i64, Rational)> = ys.iter().enumerate().map(|(i, &(p, q))| (i as i64 * 2 - 3, rat(p, q))).collect();
            let poly = lagrange_interpolate(&pts).unwrap();
            prop_assert!(poly.degree().map_or(0, |d| d + 1) <= pts.len());
            for (t, y) in &pts {
                prop_assert_eq!(&poly.eval(&int(*t)), y);
            }
        }
    }
}
