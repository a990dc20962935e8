//! Rational functions of `n`, kept reduced with a monic denominator.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::poly::PolyN;
use super::rational::{int, Rational};
use super::ArithError;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalFunctionN {
    num: PolyN,
    den: PolyN,
}

/// Reduces `num/den`: divides out the gcd and makes the denominator monic.
pub fn rf_simplify(num: &PolyN, den: &PolyN) -> Result<RationalFunctionN, ArithError> {
    RationalFunctionN::new(num.clone(), den.clone())
}

/// Evaluates at `n0`; a vanishing denominator is a pole.
pub fn rf_eval(f: &RationalFunctionN, n0: &Rational) -> Result<Rational, ArithError> {
    f.eval(n0)
}

impl RationalFunctionN {
    pub fn new(num: PolyN, den: PolyN) -> Result<Self, ArithError> {
        if den.is_zero() {
            return Err(ArithError::ZeroPolynomial);
        }
        if num.is_zero() {
            return Ok(Self::zero());
        }
        let g = PolyN::gcd(&num, &den);
        let (num, _) = num.div_rem(&g)?;
        let (den, _) = den.div_rem(&g)?;
        let lead = den.leading().expect("nonzero").recip();
        Ok(RationalFunctionN { num: num.scale(&lead), den: den.scale(&lead) })
    }

    pub fn zero() -> Self {
        RationalFunctionN { num: PolyN::zero(), den: PolyN::one() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        RationalFunctionN { num: PolyN::constant(c), den: PolyN::one() }
    }

    pub fn from_int(c: i64) -> Self {
        Self::constant(int(c))
    }

    pub fn from_poly(p: PolyN) -> Self {
        RationalFunctionN { num: p, den: PolyN::one() }
    }

    /// The dimension symbol `n`.
    pub fn n() -> Self {
        Self::from_poly(PolyN::n())
    }

    pub fn numerator(&self) -> &PolyN {
        &self.num
    }

    pub fn denominator(&self) -> &PolyN {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn eval(&self, at: &Rational) -> Result<Rational, ArithError> {
        let d = self.den.eval(at);
        if d.is_zero() {
            return Err(ArithError::Pole);
        }
        Ok(self.num.eval(at) / d)
    }

    pub fn recip(&self) -> Result<Self, ArithError> {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self, ArithError> {
        if rhs.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        Self::new(&self.num * &rhs.den, &self.den * &rhs.num)
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(), |acc, _| &acc * self)
    }

    /// Numerator and denominator rescaled to coprime integer coefficients with
    /// a positive leading denominator coefficient; used for display.
    pub fn integral_parts(&self) -> (PolyN, PolyN) {
        let lcm = self.num.denominator_lcm() * self.den.denominator_lcm();
        let scale = Rational::from_integer(lcm);
        let (num, den) = (self.num.scale(&scale), self.den.scale(&scale));
        let content = num_integer::Integer::gcd(&num.numerator_gcd(), &den.numerator_gcd());
        let shrink = Rational::new(One::one(), content);
        (num.scale(&shrink), den.scale(&shrink))
    }
}

fn wrap(text: String, is_atom: bool) -> String {
    if is_atom {
        text
    } else {
        format!("({text})")
    }
}

fn single_term(p: &PolyN) -> bool {
    p.coeffs().iter().filter(|c| !c.is_zero()).count() <= 1
}

// a denominator prints bare only as a plain integer or a bare power of n
fn bare_denominator(p: &PolyN) -> bool {
    single_term(p) && (p.degree() == Some(0) || p.leading().is_some_and(One::is_one))
}

impl fmt::Display for RationalFunctionN {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (num, den) = self.integral_parts();
        if den == PolyN::one() {
            return write!(f, "{num}");
        }
        let num_text = wrap(num.to_string(), single_term(&num));
        write!(f, "{}/{}", num_text, wrap(den.to_string(), bare_denominator(&den)))
    }
}

impl Add for &RationalFunctionN {
    type Output = RationalFunctionN;
    fn add(self, rhs: &RationalFunctionN) -> RationalFunctionN {
        let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        RationalFunctionN::new(num, &self.den * &rhs.den).expect("nonzero denominators")
    }
}

impl Sub for &RationalFunctionN {
    type Output = RationalFunctionN;
    fn sub(self, rhs: &RationalFunctionN) -> RationalFunctionN {
        self + &(-rhs)
    }
}

impl Mul for &RationalFunctionN {
    type Output = RationalFunctionN;
    fn mul(self, rhs: &RationalFunctionN) -> RationalFunctionN {
        RationalFunctionN::new(&self.num * &rhs.num, &self.den * &rhs.den).expect("nonzero denominators")
    }
}

/// Panics on a zero divisor; use [`RationalFunctionN::checked_div`] for untrusted input.
impl Div for &RationalFunctionN {
    type Output = RationalFunctionN;
    fn div(self, rhs: &RationalFunctionN) -> RationalFunctionN {
        self.checked_div(rhs).expect("division by the zero rational function")
    }
}

impl Neg for &RationalFunctionN {
    type Output = RationalFunctionN;
    fn neg(self) -> RationalFunctionN {
        RationalFunctionN { num: -&self.num, den: self.den.clone() }
    }
}

impl Neg for RationalFunctionN {
    type Output = RationalFunctionN;
    fn neg(self) -> RationalFunctionN {
        -&self
    }
}

macro_rules! forward_ops {
    ($tr:ident, $m:ident) => {
        impl $tr for RationalFunctionN {
            type Output = RationalFunctionN;
            fn $m(self, rhs: RationalFunctionN) -> RationalFunctionN {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&RationalFunctionN> for RationalFunctionN {
            type Output = RationalFunctionN;
            fn $m(self, rhs: &RationalFunctionN) -> RationalFunctionN {
                (&self).$m(rhs)
            }
        }
        impl $tr<i64> for RationalFunctionN {
            type Output = RationalFunctionN;
            fn $m(self, rhs: i64) -> RationalFunctionN {
                (&self).$m(&RationalFunctionN::from_int(rhs))
            }
        }
        impl $tr<RationalFunctionN> for i64 {
            type Output = RationalFunctionN;
            fn $m(self, rhs: RationalFunctionN) -> RationalFunctionN {
                (&RationalFunctionN::from_int(self)).$m(&rhs)
            }
        }
    };
}
forward_ops!(Add, add);
forward_ops!(Sub, sub);
forward_ops!(Mul, mul);
forward_ops!(Div, div);

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::frac;

    fn n() -> RationalFunctionN {
        RationalFunctionN::n()
    }

    #[test]
    fn simplify_cancels_common_factor() {
        let f = rf_simplify(&PolyN::from_ints(&[-4, 0, 1]), &PolyN::from_ints(&[2, 1])).unwrap();
        assert_eq!(f, RationalFunctionN::from_poly(PolyN::from_ints(&[-2, 1])));
        assert_eq!(f.to_string(), "n - 2");
    }

    #[test]
    fn simplify_keeps_coprime_pair() {
        let f = rf_simplify(&PolyN::from_ints(&[-4, 2]), &PolyN::from_ints(&[0, 2, 1])).unwrap();
        assert_eq!(f.to_string(), "(2n - 4)/(n^2 + 2n)");
        assert_eq!(f.denominator(), &PolyN::from_ints(&[0, 2, 1]));
    }

    #[test]
    fn simplify_zero_and_errors() {
        let z = rf_simplify(&PolyN::zero(), &PolyN::n()).unwrap();
        assert!(z.is_zero());
        assert_eq!(z.to_string(), "0");
        assert_eq!(rf_simplify(&PolyN::n(), &PolyN::zero()), Err(ArithError::ZeroPolynomial));
    }

    #[test]
    fn eval_and_pole() {
        let tian = (n() + 2) / (8 * n() * n() * (n() + 1));
        assert_eq!(rf_eval(&tian, &int(2)).unwrap(), frac(1, 24));
        assert_eq!(tian.to_string(), "(n + 2)/(8n^3 + 8n^2)");
        assert_eq!(rf_eval(&(n() - 2), &int(2)).unwrap(), int(0));
        let inv = RationalFunctionN::one() / (n() - 1);
        assert_eq!(rf_eval(&inv, &int(1)), Err(ArithError::Pole));
        assert_eq!(ArithError::Pole.to_string(), "pole");
    }

    #[test]
    fn besse_difference_is_reduced() {
        let corrected = -(2 * n()) / (n() + 2);
        let erroneous = -(2 * (n() - 1)) / n();
        assert_eq!((corrected - erroneous).to_string(), "(2n - 4)/(n^2 + 2n)");
    }
}
