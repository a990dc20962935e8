//! Univariate polynomials over Q in the formal dimension symbol `n`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::rational::{int, Rational};
use super::ArithError;

/// Coefficients indexed by degree; the leading coefficient is never zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PolyN {
    coeffs: Vec<Rational>,
}

impl PolyN {
    pub fn new(coeffs: Vec<Rational>) -> Self {
        let mut poly = PolyN { coeffs };
        poly.trim();
        poly
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| int(c)).collect())
    }

    pub fn zero() -> Self {
        PolyN { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// The symbol `n` itself.
    pub fn n() -> Self {
        Self::from_ints(&[0, 1])
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Horner evaluation at a rational point.
    pub fn eval(&self, at: &Rational) -> Rational {
        self.coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * at + c)
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            Some(lc) => self.scale(&lc.recip()),
            None => Self::zero(),
        }
    }

    pub fn div_rem(&self, divisor: &PolyN) -> Result<(PolyN, PolyN), ArithError> {
        let dd = divisor.degree().ok_or(ArithError::ZeroPolynomial)?;
        let lead = divisor.coeffs[dd].clone();
        let mut rem = self.coeffs.clone();
        let qlen = (self.coeffs.len() + 1).saturating_sub(divisor.coeffs.len());
        let mut quot = vec![Rational::zero(); qlen];
        for k in (0..qlen).rev() {
            let c = &rem[k + dd] / &lead;
            if c.is_zero() {
                continue;
            }
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[k + j] -= &c * d;
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        Ok((PolyN::new(quot), PolyN::new(rem)))
    }

    /// Monic gcd by the Euclidean algorithm; `gcd(0, 0) = 0`.
    pub fn gcd(a: &PolyN, b: &PolyN) -> PolyN {
        let (mut x, mut y) = (a.clone(), b.clone());
        while !y.is_zero() {
            let (_, r) = x.div_rem(&y).expect("nonzero divisor");
            x = y;
            y = r;
        }
        x.monic()
    }

    /// Least common multiple of the coefficient denominators.
    pub fn denominator_lcm(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }

    /// Gcd of the numerators (for integer-coefficient polynomials, the content).
    pub fn numerator_gcd(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c.numer()))
    }

    /// All rational roots, ascending, without multiplicity.
    pub fn rational_roots(&self) -> Vec<Rational> {
        let Some(deg) = self.degree() else {
            return Vec::new();
        };
        if deg == 0 {
            return Vec::new();
        }
        let mut roots = Vec::new();
        // strip roots at zero
        let low = self.coeffs.iter().position(|c| !c.is_zero()).unwrap_or(0);
        if low > 0 {
            roots.push(Rational::zero());
        }
        let scale = Rational::from_integer(self.denominator_lcm());
        let ints: Vec<BigInt> = self.coeffs[low..].iter().map(|c| (c * &scale).to_integer()).collect();
        let constant = ints[0].abs();
        let leading = ints[ints.len() - 1].abs();
        if ints.len() > 1 {
            let ps = divisors(&constant);
            let qs = divisors(&leading);
            for p in &ps {
                for q in &qs {
                    for sign in [-1, 1] {
                        let cand = Rational::new(p * BigInt::from(sign), q.clone());
                        if self.eval(&cand).is_zero() && !roots.contains(&cand) {
                            roots.push(cand);
                        }
                    }
                }
            }
        }
        roots.sort();
        roots
    }
}

fn divisors(m: &BigInt) -> Vec<BigInt> {
    let mut out = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= *m {
        if (m % &d).is_zero() {
            out.push(d.clone());
            let other = m / &d;
            if other != d {
                out.push(other);
            }
        }
        d += 1;
    }
    out
}

impl Add for &PolyN {
    type Output = PolyN;
    fn add(self, rhs: &PolyN) -> PolyN {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        PolyN::new((0..len).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &PolyN {
    type Output = PolyN;
    fn sub(self, rhs: &PolyN) -> PolyN {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        PolyN::new((0..len).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Mul for &PolyN {
    type Output = PolyN;
    fn mul(self, rhs: &PolyN) -> PolyN {
        if self.is_zero() || rhs.is_zero() {
            return PolyN::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        PolyN::new(out)
    }
}

impl Neg for &PolyN {
    type Output = PolyN;
    fn neg(self) -> PolyN {
        PolyN::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for PolyN {
            type Output = PolyN;
            fn $m(self, rhs: PolyN) -> PolyN {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

/// Prints with `n` as the variable, highest degree first, e.g. `n^3 - 2n^2 + 1/2`.
impl fmt::Display for PolyN {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let negative = c.is_negative();
            let abs = c.abs();
            match (first, negative) {
                (true, true) => write!(f, "-")?,
                (true, false) => {}
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
            }
            first = false;
            let text = super::rational::format_rational(&abs);
            let coeff = if k > 0 && abs.is_one() {
                String::new()
            } else if k > 0 && !abs.is_integer() {
                format!("({text})")
            } else {
                text
            };
            match k {
                0 => write!(f, "{coeff}")?,
                1 => write!(f, "{coeff}n")?,
                _ => write!(f, "{coeff}n^{k}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::frac;

    #[test]
    fn arithmetic_and_display() {
        let n = PolyN::n();
        let p = &(&n * &n) - &PolyN::from_ints(&[4]);
        assert_eq!(p.to_string(), "n^2 - 4");
        assert_eq!(PolyN::from_ints(&[8, -4, -2, 1]).to_string(), "n^3 - 2n^2 - 4n + 8");
        assert_eq!(PolyN::new(vec![frac(1, 2), frac(-3, 4)]).to_string(), "-(3/4)n + 1/2");
        assert_eq!(PolyN::zero().to_string(), "0");
        assert_eq!(p.eval(&int(3)), int(5));
    }

    #[test]
    fn division_and_gcd() {
        let a = PolyN::from_ints(&[-4, 0, 1]);
        let b = PolyN::from_ints(&[2, 1]);
        let (q, r) = a.div_rem(&b).unwrap();
        assert_eq!(q, PolyN::from_ints(&[-2, 1]));
        assert!(r.is_zero());
        assert_eq!(PolyN::gcd(&a, &PolyN::from_ints(&[-4, 2])), PolyN::from_ints(&[-2, 1]));
        assert_eq!(PolyN::gcd(&a, &PolyN::from_ints(&[1, 1])), PolyN::one());
        assert_eq!(a.div_rem(&PolyN::zero()), Err(ArithError::ZeroPolynomial));
    }

    #[test]
    fn rational_roots_by_candidate_search() {
        assert_eq!(PolyN::from_ints(&[-4, 2]).rational_roots(), vec![int(2)]);
        let p = PolyN::from_ints(&[0, -1, 0, 4]); // 4n^3 - n = n(2n-1)(2n+1)
        assert_eq!(p.rational_roots(), vec![frac(-1, 2), int(0), frac(1, 2)]);
        assert!(PolyN::from_ints(&[1, 0, 1]).rational_roots().is_empty());
    }
}
