//! Multivariate Laurent polynomials with exact rational coefficients.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::Rational;

/// Exponent vector, one entry per variable; entries may be negative.
pub type Exponents = Vec<i64>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaurentPoly {
    vars: usize,
    terms: BTreeMap<Exponents, Rational>,
}

impl LaurentPoly {
    pub fn zero(vars: usize) -> Self {
        LaurentPoly {
            vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: usize, c: Rational) -> Self {
        Self::monomial(vec![0; vars], c)
    }

    pub fn monomial(exponents: Exponents, coefficient: Rational) -> Self {
        let vars = exponents.len();
        let mut terms = BTreeMap::new();
        if !coefficient.is_zero() {
            terms.insert(exponents, coefficient);
        }
        LaurentPoly { vars, terms }
    }

    /// The variable `x_index`.
    pub fn var(vars: usize, index: usize) -> Self {
        let mut e = vec![0; vars];
        e[index] = 1;
        Self::monomial(e, Rational::one())
    }

    /// Builds from `(exponents, coefficient)` pairs, summing repeated exponents.
    pub fn from_terms(vars: usize, terms: impl IntoIterator<Item = (Exponents, Rational)>) -> Self {
        let mut p = Self::zero(vars);
        for (e, c) in terms {
            debug_assert_eq!(e.len(), vars);
            p.add_term(e, c);
        }
        p
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Exponents, &Rational)> + '_ {
        self.terms.iter()
    }

    pub fn coefficient(&self, exponents: &[i64]) -> Rational {
        self.terms.get(exponents).cloned().unwrap_or_else(Rational::zero)
    }

    fn add_term(&mut self, e: Exponents, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            alloc::collections::btree_map::Entry::Vacant(slot) => {
                slot.insert(c);
            }
            alloc::collections::btree_map::Entry::Occupied(mut slot) => {
                *slot.get_mut() += c;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    /// The single term, if there is exactly one.
    pub fn as_monomial(&self) -> Option<(&Exponents, &Rational)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.vars);
        }
        LaurentPoly {
            vars: self.vars,
            terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect(),
        }
    }

    /// Multiplies by the monomial `c · x^shift`.
    pub fn shift(&self, shift: &[i64], c: &Rational) -> Self {
        LaurentPoly {
            vars: self.vars,
            terms: self
                .terms
                .iter()
                .map(|(e, x)| (e.iter().zip(shift).map(|(a, b)| a + b).collect(), x * c))
                .collect(),
        }
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut result = Self::constant(self.vars, Rational::one());
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Sum of all coefficients (every variable set to 1).
    pub fn eval_ones(&self) -> Rational {
        self.terms.values().sum()
    }

    /// Substitutes rational values for every variable.
    pub fn eval(&self, point: &[Rational]) -> Rational {
        self.terms
            .iter()
            .map(|(e, c)| {
                e.iter().zip(point).fold(c.clone(), |acc, (&k, x)| {
                    if k >= 0 {
                        acc * crate::arith::rational_pow(x, k as u64)
                    } else {
                        acc / crate::arith::rational_pow(x, k.unsigned_abs())
                    }
                })
            })
            .sum()
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        self.scale(&-Rational::one())
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    // monomials multiply by adding exponents
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero(self.vars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e: Exponents = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn arithmetic() {
        let x = LaurentPoly::var(2, 0);
        let y = LaurentPoly::var(2, 1);
        let s = &x + &y;
        let sq = s.pow(2);
        assert_eq!(sq.coefficient(&[1, 1]), r(2, 1));
        assert_eq!(sq.len(), 3);
        assert!((&sq - &sq).is_zero());
        let inv_x = LaurentPoly::monomial(vec![-1, 0], r(1, 1));
        assert_eq!(&inv_x * &x, LaurentPoly::constant(2, r(1, 1)));
        assert_eq!(sq.eval_ones(), r(4, 1));
        assert_eq!(sq.eval(&[r(1, 2), r(3, 1)]), r(49, 4));
        assert_eq!(inv_x.eval(&[r(2, 1), r(1, 1)]), r(1, 2));
        assert_eq!((-&x).coefficient(&[1, 0]), r(-1, 1));
        assert_eq!(x.shift(&[-2, 1], &r(3, 1)).coefficient(&[-1, 1]), r(3, 1));
    }

    #[test]
    fn monomial_detection() {
        let x = LaurentPoly::var(3, 2);
        assert_eq!(x.as_monomial().unwrap().0, &vec![0, 0, 1]);
        assert!((&x + &LaurentPoly::var(3, 0)).as_monomial().is_none());
        assert!(LaurentPoly::monomial(vec![1, 1], Rational::zero()).is_zero());
    }
}
