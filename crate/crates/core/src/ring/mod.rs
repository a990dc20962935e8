//! The intersection ring of `X = P(O ⊕ O(n-1))` over `P^{n-1}`.
//!
//! The ring is generated by `L` and `H` subject to `L^2 = (n-1)LH`,
//! `LH^{n-1} = 1` and `H^n = 0`. In degree `d >= 1` every class is
//! `a·LH^{d-1} + b·H^d`; in degree `n` the `H^n` part vanishes and the
//! `LH^{n-1}` coefficient is the intersection number.

mod dsl;

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::exact::{format_rational, int, Rational};

pub use dsl::{eval_class_expr, parse_class_expr, ClassExpr, DslError, Symbol};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RingError {
    #[error("dimension must be at least 2, got {0}")]
    DimensionTooSmall(u32),
    #[error("degree exceeds dimension ({degree} > {dim})")]
    DegreeOverflow { degree: u32, dim: u32 },
    #[error("dimension mismatch ({0} vs {1})")]
    DimensionMismatch(u32, u32),
    #[error("not a top class (degree {degree}, dimension {dim})")]
    NotTopClass { degree: u32, dim: u32 },
    #[error("cannot add classes of degree {0} and {1}")]
    Inhomogeneous(u32, u32),
}

/// A homogeneous class in normal form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GradedClass {
    dim: u32,
    degree: u32,
    scalar: Rational,
    lh: Rational,
    h: Rational,
}

fn check_dim(dim: u32) -> Result<(), RingError> {
    if dim < 2 {
        Err(RingError::DimensionTooSmall(dim))
    } else {
        Ok(())
    }
}

impl GradedClass {
    /// `lh·LH^{degree-1} + h·H^degree`. At `degree = dim` the `H` part is
    /// dropped because `H^n = 0`.
    pub fn from_parts(dim: u32, degree: u32, lh: Rational, h: Rational) -> Result<Self, RingError> {
        check_dim(dim)?;
        if degree == 0 {
            return Ok(Self::scalar(dim, lh + h));
        }
        if degree > dim {
            return Err(RingError::DegreeOverflow { degree, dim });
        }
        let h = if degree == dim { Rational::zero() } else { h };
        Ok(GradedClass { dim, degree, scalar: Rational::zero(), lh, h })
    }

    /// A degree-0 class. Panics on `dim < 2`; callers construct through
    /// [`GradedClass::unit`] or [`GradedClass::from_parts`] first.
    pub fn scalar(dim: u32, value: Rational) -> Self {
        assert!(dim >= 2, "dimension must be at least 2");
        GradedClass { dim, degree: 0, scalar: value, lh: Rational::zero(), h: Rational::zero() }
    }

    pub fn unit(dim: u32) -> Result<Self, RingError> {
        check_dim(dim)?;
        Ok(Self::scalar(dim, Rational::one()))
    }

    pub fn l(dim: u32) -> Result<Self, RingError> {
        Self::from_parts(dim, 1, Rational::one(), Rational::zero())
    }

    pub fn h(dim: u32) -> Result<Self, RingError> {
        Self::from_parts(dim, 1, Rational::zero(), Rational::one())
    }

    /// The Kähler class `αL + βH`.
    pub fn kahler(dim: u32, alpha: &Rational, beta: &Rational) -> Result<Self, RingError> {
        Self::from_parts(dim, 1, alpha.clone(), beta.clone())
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// Value of a degree-0 class (zero otherwise).
    pub fn scalar_part(&self) -> &Rational {
        &self.scalar
    }

    pub fn coeff_lh(&self) -> &Rational {
        &self.lh
    }

    pub fn coeff_h(&self) -> &Rational {
        &self.h
    }

    pub fn is_zero(&self) -> bool {
        self.scalar.is_zero() && self.lh.is_zero() && self.h.is_zero()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        GradedClass {
            dim: self.dim,
            degree: self.degree,
            scalar: &self.scalar * c,
            lh: &self.lh * c,
            h: &self.h * c,
        }
    }

    /// Sum of two classes of the same degree. A zero scalar adopts the other
    /// operand's degree.
    pub fn add(&self, other: &GradedClass) -> Result<Self, RingError> {
        if self.dim != other.dim {
            return Err(RingError::DimensionMismatch(self.dim, other.dim));
        }
        if self.degree != other.degree {
            if self.degree == 0 && self.is_zero() {
                return Ok(other.clone());
            }
            if other.degree == 0 && other.is_zero() {
                return Ok(self.clone());
            }
            return Err(RingError::Inhomogeneous(self.degree, other.degree));
        }
        Ok(GradedClass {
            dim: self.dim,
            degree: self.degree,
            scalar: &self.scalar + &other.scalar,
            lh: &self.lh + &other.lh,
            h: &self.h + &other.h,
        })
    }

    pub fn sub(&self, other: &GradedClass) -> Result<Self, RingError> {
        self.add(&other.scale(&-Rational::one()))
    }
}

/// The class of `L^i H^j`.
pub fn monomial_normal_form(i: u32, j: u32, dim: u32) -> Result<GradedClass, RingError> {
    check_dim(dim)?;
    let degree = i + j;
    if degree > dim {
        return Err(RingError::DegreeOverflow { degree, dim });
    }
    if degree == 0 {
        return GradedClass::unit(dim);
    }
    if i == 0 {
        return GradedClass::from_parts(dim, degree, Rational::zero(), Rational::one());
    }
    let factor = num_traits::pow(BigInt::from(dim - 1), (i - 1) as usize);
    GradedClass::from_parts(dim, degree, Rational::from_integer(factor), Rational::zero())
}

/// Product in normal form, using `L^2 = (n-1)LH` and `H^n = 0`.
pub fn multiply(x: &GradedClass, y: &GradedClass) -> Result<GradedClass, RingError> {
    if x.dim != y.dim {
        return Err(RingError::DimensionMismatch(x.dim, y.dim));
    }
    let dim = x.dim;
    let degree = x.degree + y.degree;
    if degree > dim {
        return Err(RingError::DegreeOverflow { degree, dim });
    }
    if x.degree == 0 {
        return Ok(y.scale(&x.scalar));
    }
    if y.degree == 0 {
        return Ok(x.scale(&y.scalar));
    }
    // (aLH^{p-1} + bH^p)(cLH^{q-1} + dH^q)
    let (a, b, c, d) = (&x.lh, &x.h, &y.lh, &y.h);
    let lh = a * c * int(i64::from(dim) - 1) + a * d + b * c;
    GradedClass::from_parts(dim, degree, lh, b * d)
}

pub fn power(x: &GradedClass, k: u32) -> Result<GradedClass, RingError> {
    let degree = x.degree.saturating_mul(k);
    if degree > x.dim {
        return Err(RingError::DegreeOverflow { degree, dim: x.dim });
    }
    let mut acc = GradedClass::unit(x.dim)?;
    for _ in 0..k {
        acc = multiply(&acc, x)?;
    }
    Ok(acc)
}

/// Pairs a top-degree class with the fundamental class.
pub fn top_evaluate(x: &GradedClass) -> Result<Rational, RingError> {
    if x.degree != x.dim {
        return Err(RingError::NotTopClass { degree: x.degree, dim: x.dim });
    }
    Ok(x.lh.clone())
}

/// `c1 = 2L + H` and `c2 = 2nLH - n(n-1)/2·H^2`.
pub fn chern_classes_x(dim: u32) -> Result<(GradedClass, GradedClass), RingError> {
    check_dim(dim)?;
    let n = i64::from(dim);
    let c1 = GradedClass::from_parts(dim, 1, int(2), int(1))?;
    let c2 = GradedClass::from_parts(dim, 2, int(2 * n), int(-n * (n - 1)) / int(2))?;
    Ok((c1, c2))
}

impl fmt::Display for GradedClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.degree == 0 {
            return write!(f, "{}", format_rational(&self.scalar));
        }
        let h_exp = |k: u32| match k {
            0 => String::new(),
            1 => "H".to_string(),
            _ => format!("H^{k}"),
        };
        let lh_term = format!("L{}", h_exp(self.degree - 1));
        write!(f, "{}·{}", format_rational(&self.lh), lh_term)?;
        if self.degree < self.dim {
            let h = &self.h;
            let sign = if *h < Rational::zero() { "-" } else { "+" };
            let abs = if *h < Rational::zero() { -h } else { h.clone() };
            write!(f, " {sign} {}·{}", format_rational(&abs), h_exp(self.degree))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn class(dim: u32, degree: u32, lh: i64, h: i64) -> GradedClass {
        GradedClass::from_parts(dim, degree, int(lh), int(h)).unwrap()
    }

    /// Independent oracle: rewrite the word `L^i H^j` letter by letter,
    /// replacing each leading `LL` by `(n-1)·LH`.
    fn substitution_oracle(i: u32, j: u32, n: u32) -> (i64, String) {
        let mut word = "L".repeat(i as usize) + &"H".repeat(j as usize);
        let mut coeff = 1i64;
        while let Some(pos) = word.find("LL") {
            word.replace_range(pos..pos + 2, "LH");
            coeff *= i64::from(n) - 1;
            let (ls, hs): (String, String) = word.chars().partition(|&c| c == 'L');
            word = ls + &hs;
        }
        (coeff, word)
    }

    #[test]
    fn monomials_reduce_by_relation() {
        assert_eq!(monomial_normal_form(2, 0, 3).unwrap(), class(3, 2, 2, 0));
        assert_eq!(monomial_normal_form(1, 1, 3).unwrap(), class(3, 2, 1, 0));
        assert_eq!(monomial_normal_form(3, 0, 4).unwrap(), class(4, 3, 9, 0));
        assert_eq!(monomial_normal_form(0, 2, 3).unwrap(), class(3, 2, 0, 1));
        assert_eq!(
            monomial_normal_form(3, 2, 4),
            Err(RingError::DegreeOverflow { degree: 5, dim: 4 })
        );
        assert_eq!(RingError::DegreeOverflow { degree: 5, dim: 4 }.to_string(), "degree exceeds dimension (5 > 4)");
    }

    #[test]
    fn monomials_match_substitution_oracle() {
        for n in 2..8u32 {
            for i in 1..=n {
                for j in 0..=(n - i) {
                    let (coeff, word) = substitution_oracle(i, j, n);
                    assert_eq!(word, format!("L{}", "H".repeat((i + j - 1) as usize)));
                    assert_eq!(monomial_normal_form(i, j, n).unwrap(), class(n, i + j, coeff, 0));
                }
            }
        }
    }

    #[test]
    fn products() {
        let l = GradedClass::l(2).unwrap();
        let h = GradedClass::h(2).unwrap();
        let s = l.add(&h).unwrap();
        // L^2 + 2LH + H^2 = 3LH (+ H^2 = 0 at top degree)
        let sq = multiply(&s, &s).unwrap();
        assert_eq!(sq, class(2, 2, 3, 0));
        assert_eq!(top_evaluate(&sq).unwrap(), int(3));
        let c1 = GradedClass::from_parts(2, 1, int(2), int(1)).unwrap();
        assert_eq!(top_evaluate(&multiply(&c1, &c1).unwrap()).unwrap(), int(8));
        let one = GradedClass::unit(2).unwrap();
        assert_eq!(multiply(&c1, &one).unwrap(), c1);
        let three = GradedClass::unit(3).unwrap();
        assert_eq!(multiply(&c1, &three), Err(RingError::DimensionMismatch(2, 3)));
    }

    #[test]
    fn powers() {
        let w = GradedClass::kahler(3, &int(1), &int(1)).unwrap();
        assert_eq!(power(&w, 3).unwrap(), class(3, 3, 13, 0));
        assert_eq!(power(&w, 1).unwrap(), w);
        assert_eq!(power(&w, 0).unwrap(), GradedClass::unit(3).unwrap());
        for n in 2..10 {
            let h = GradedClass::h(n).unwrap();
            assert!(power(&h, n).unwrap().is_zero());
        }
        assert!(matches!(power(&w, 4), Err(RingError::DegreeOverflow { .. })));
    }

    #[test]
    fn top_evaluation() {
        let x = GradedClass::from_parts(2, 2, int(3), int(5)).unwrap();
        assert_eq!(top_evaluate(&x).unwrap(), int(3));
        let m = monomial_normal_form(3, 2, 5).unwrap();
        assert_eq!(top_evaluate(&m).unwrap(), int(16));
        let zero = GradedClass::from_parts(4, 4, int(0), int(0)).unwrap();
        assert_eq!(top_evaluate(&zero).unwrap(), int(0));
        let low = GradedClass::l(4).unwrap();
        assert_eq!(top_evaluate(&low), Err(RingError::NotTopClass { degree: 1, dim: 4 }));
    }

    #[test]
    fn chern_classes_of_x() {
        let (c1, c2) = chern_classes_x(2).unwrap();
        assert_eq!(c1, class(2, 1, 2, 1));
        // the H^2 part of c2 vanishes at n = 2
        assert_eq!(c2, class(2, 2, 4, 0));
        assert_eq!(top_evaluate(&power(&c1, 2).unwrap()).unwrap(), int(8));
        assert_eq!(top_evaluate(&c2).unwrap(), int(4));
        let (_, c2) = chern_classes_x(5).unwrap();
        assert_eq!(c2, class(5, 2, 10, -10));
        assert_eq!(chern_classes_x(1), Err(RingError::DimensionTooSmall(1)));
    }

    #[test]
    fn display() {
        assert_eq!(class(4, 2, 8, -6).to_string(), "8·LH - 6·H^2");
        assert_eq!(class(3, 3, 13, 0).to_string(), "13·LH^2");
        assert_eq!(class(3, 1, 2, 1).to_string(), "2·L + 1·H");
        assert_eq!(GradedClass::unit(3).unwrap().to_string(), "1");
    }
}
