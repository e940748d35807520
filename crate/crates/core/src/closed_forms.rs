//! Closed-form laws for specific schemes, evaluated in exact rationals.
//!
//! Each function is written straight from its formula and shares no code with
//! the engines, so the engines can be checked against it.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::arith::{binomial, rational_pow};
use crate::error::{Result, UrnError};
use crate::{Pmf, Rational};

/// Cached rows of `T_{θ,n,k} = [x^k] (1 + x + ... + x^θ)^n`.
#[derive(Debug, Clone)]
pub struct ExtendedBinomialTable {
    theta: u64,
    rows: Vec<Vec<BigInt>>,
}

impl ExtendedBinomialTable {
    pub fn new(theta: u64) -> Result<Self> {
        if theta < 1 {
            return Err(UrnError::Domain(format!("theta = {theta}, need theta >= 1")));
        }
        Ok(ExtendedBinomialTable {
            theta,
            rows: vec![vec![BigInt::one()]],
        })
    }

    pub fn theta(&self) -> u64 {
        self.theta
    }

    /// `T_{θ,n,·}` for `k = 0..=θn`.
    pub fn row(&mut self, n: usize) -> &[BigInt] {
        while self.rows.len() <= n {
            let prev = &self.rows[self.rows.len() - 1];
            let width = prev.len() + self.theta as usize;
            let next: Vec<BigInt> = (0..width)
                .map(|k| {
                    let lo = k.saturating_sub(self.theta as usize);
                    (lo..=k.min(prev.len() - 1)).map(|i| &prev[i]).sum()
                })
                .collect();
            self.rows.push(next);
        }
        &self.rows[n]
    }

    pub fn get(&mut self, n: usize, k: i64) -> BigInt {
        let row = self.row(n);
        if k < 0 || k as usize >= row.len() {
            BigInt::zero()
        } else {
            row[k as usize].clone()
        }
    }
}

/// `T_{θ,n,k}`; zero for `k` outside `0..=θn`.
pub fn extended_binomial(theta: u64, n: usize, k: i64) -> Result<BigInt> {
    Ok(ExtendedBinomialTable::new(theta)?.get(n, k))
}

fn check_probability(p: &Rational) -> Result<()> {
    if p.is_negative() || *p > Rational::one() {
        return Err(UrnError::Domain(format!("p = {p} outside [0, 1]")));
    }
    Ok(())
}

fn check_nonempty(total: u64) -> Result<()> {
    if total == 0 {
        return Err(UrnError::Domain("initial urn is empty".into()));
    }
    Ok(())
}

fn int(x: impl Into<BigInt>) -> Rational {
    Rational::from_integer(x.into())
}

/// Coupon collection with delay: law of the uncollected count `B_n`,
/// `Σ_{j=b}^{b0} (-1)^{j-b} C(b0,j) C(j,b) ((s0 - p j)/s0)^n`.
pub fn coupon_delay_pmf(b0: u64, w0: u64, p: &Rational, n: u64, b: i64) -> Result<Rational> {
    check_probability(p)?;
    let s0 = b0 + w0;
    check_nonempty(s0)?;
    if b < 0 || b as u64 > b0 {
        return Ok(Rational::zero());
    }
    let b = b as u64;
    let mut acc = Rational::zero();
    for j in b..=b0 {
        let base = (int(s0) - p * int(j)) / int(s0);
        let term = int(binomial(b0, j) * binomial(j, b)) * rational_pow(&base, n);
        if (j - b).is_multiple_of(2) {
            acc += term;
        } else {
            acc -= term;
        }
    }
    Ok(acc)
}

/// Binomial urn at `p = 1/2`: `B_n = b0 + Bin(θn, 1/2)`.
pub fn binomial_half_pmf(theta: u64, b0: u64, w0: u64, n: u64, b: i64) -> Result<Rational> {
    if theta < 1 {
        return Err(UrnError::Domain(format!("theta = {theta}, need theta >= 1")));
    }
    check_nonempty(b0 + w0)?;
    let trials = theta * n;
    let k = b - b0 as i64;
    if k < 0 || k as u64 > trials {
        return Ok(Rational::zero());
    }
    Ok(Rational::new(
        binomial(trials, k as u64),
        num_traits::pow(BigInt::from(2u32), trials as usize),
    ))
}

/// Uniform urn: `T_{θ,n,b-b0} / (θ+1)^n`.
pub fn uniform_pmf(theta: u64, b0: u64, w0: u64, n: u64, b: i64) -> Result<Rational> {
    let mut table = ExtendedBinomialTable::new(theta)?;
    check_nonempty(b0 + w0)?;
    uniform_pmf_with(&mut table, b0, n, b)
}

fn uniform_pmf_with(table: &mut ExtendedBinomialTable, b0: u64, n: u64, b: i64) -> Result<Rational> {
    let t = table.get(n as usize, b - b0 as i64);
    Ok(Rational::new(
        t,
        num_traits::pow(BigInt::from(table.theta() + 1), n as usize),
    ))
}

fn check_open_probability(p: &Rational) -> Result<()> {
    if !p.is_positive() || *p >= Rational::one() {
        return Err(UrnError::Domain(format!(
            "p = {p} must lie strictly between 0 and 1; for p = 0 or 1 use the two-color coupon law"
        )));
    }
    Ok(())
}

/// Two-type coupon collection, law of the red count `R_n`, in the published form
///
/// `(p/(1-p))^r Σ_{j=0}^{b0} (-1)^j C(j,r) C(b0,j) (1-p)^j Σ_{k=0}^{j} C(j,k) (-1)^k (k/s0)^n`
///
/// with `0^0 = 1`. The expression does not involve `r0` or the split of the
/// non-black balls, and it is only correct when the urn starts with black
/// balls only (`r0 = g0 = 0`). [`two_type_coupon_red_pmf_general`] is the
/// coefficient extraction that holds for every start.
pub fn two_type_coupon_red_pmf(b0: u64, r0: u64, g0: u64, p: &Rational, n: u64, r: i64) -> Result<Rational> {
    check_open_probability(p)?;
    let s0 = b0 + r0 + g0;
    check_nonempty(s0)?;
    if r < 0 || r as u64 > b0 + r0 {
        return Ok(Rational::zero());
    }
    let r = r as u64;
    let q = Rational::one() - p;
    let mut outer = Rational::zero();
    for j in 0..=b0 {
        let mut inner = Rational::zero();
        for k in 0..=j {
            let power = rational_pow(&Rational::new(BigInt::from(k), BigInt::from(s0)), n);
            let term = int(binomial(j, k)) * power;
            if k % 2 == 0 {
                inner += term;
            } else {
                inner -= term;
            }
        }
        let term = int(binomial(j, r) * binomial(b0, j)) * rational_pow(&q, j) * inner;
        if j % 2 == 0 {
            outer += term;
        } else {
            outer -= term;
        }
    }
    Ok(rational_pow(&(p / &q), r) * outer)
}

/// Two-type coupon collection, law of `R_n` for any start `(b0, r0, g0)`:
///
/// `P(R_n = r0 + m) = Σ_j C(b0,j) p^j C(j,m) (-1)^{j-m} Σ_{k=0}^{j} C(j,k) (-1)^{j-k} ((s0-j+k)/s0)^n`,
///
/// read off `[y^{r0+m} z^n] (p (y-1)(e^z-1) + e^z)^{b0} y^{r0} e^{(r0+g0) z}`.
/// Valid for every `p` in `[0, 1]`.
pub fn two_type_coupon_red_pmf_general(
    b0: u64,
    r0: u64,
    g0: u64,
    p: &Rational,
    n: u64,
    r: i64,
) -> Result<Rational> {
    check_probability(p)?;
    let s0 = b0 + r0 + g0;
    check_nonempty(s0)?;
    let m = r - r0 as i64;
    if m < 0 || m as u64 > b0 {
        return Ok(Rational::zero());
    }
    let m = m as u64;
    let mut outer = Rational::zero();
    for j in m..=b0 {
        let mut inner = Rational::zero();
        for k in 0..=j {
            let base = Rational::new(BigInt::from(s0 - j + k), BigInt::from(s0));
            let term = int(binomial(j, k)) * rational_pow(&base, n);
            if (j - k) % 2 == 0 {
                inner += term;
            } else {
                inner -= term;
            }
        }
        let term = int(binomial(b0, j) * binomial(j, m)) * rational_pow(p, j) * inner;
        if (j - m).is_multiple_of(2) {
            outer += term;
        } else {
            outer -= term;
        }
    }
    Ok(outer)
}

/// The closed forms by name, with enough parameters to evaluate the full support.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClosedForm {
    CouponDelay { b0: u64, w0: u64, p: Rational },
    BinomialHalf { theta: u64, b0: u64, w0: u64 },
    Uniform { theta: u64, b0: u64, w0: u64 },
    TwoTypeCouponRed { b0: u64, r0: u64, g0: u64, p: Rational },
}

impl ClosedForm {
    pub const NAMES: [&'static str; 4] = ["coupon-delay", "binomial-half", "uniform", "two-type-coupon-red"];

    pub fn name(&self) -> &'static str {
        match self {
            ClosedForm::CouponDelay { .. } => "coupon-delay",
            ClosedForm::BinomialHalf { .. } => "binomial-half",
            ClosedForm::Uniform { .. } => "uniform",
            ClosedForm::TwoTypeCouponRed { .. } => "two-type-coupon-red",
        }
    }

    /// Values the counted color can take after `n` draws.
    pub fn support(&self, n: u64) -> core::ops::RangeInclusive<i64> {
        match self {
            ClosedForm::CouponDelay { b0, .. } => 0..=*b0 as i64,
            ClosedForm::BinomialHalf { theta, b0, .. } | ClosedForm::Uniform { theta, b0, .. } => {
                *b0 as i64..=(*b0 + theta * n) as i64
            }
            ClosedForm::TwoTypeCouponRed { b0, r0, .. } => 0..=(*b0 + *r0) as i64,
        }
    }

    pub fn pmf(&self, n: u64, value: i64) -> Result<Rational> {
        match self {
            ClosedForm::CouponDelay { b0, w0, p } => coupon_delay_pmf(*b0, *w0, p, n, value),
            ClosedForm::BinomialHalf { theta, b0, w0 } => binomial_half_pmf(*theta, *b0, *w0, n, value),
            ClosedForm::Uniform { theta, b0, w0 } => uniform_pmf(*theta, *b0, *w0, n, value),
            ClosedForm::TwoTypeCouponRed { b0, r0, g0, p } => {
                two_type_coupon_red_pmf(*b0, *r0, *g0, p, n, value)
            }
        }
    }

    /// Full distribution over [`Self::support`], zero entries dropped.
    pub fn distribution(&self, n: u64) -> Result<Pmf> {
        let mut out = BTreeMap::new();
        if let ClosedForm::Uniform { theta, b0, w0 } = self {
            check_nonempty(b0 + w0)?;
            let mut table = ExtendedBinomialTable::new(*theta)?;
            for b in self.support(n) {
                let p = uniform_pmf_with(&mut table, *b0, n, b)?;
                if !p.is_zero() {
                    out.insert(b as u64, p);
                }
            }
            return Ok(out);
        }
        for v in self.support(n) {
            let p = self.pmf(n, v)?;
            if !p.is_zero() {
                out.insert(v as u64, p);
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn extended_binomial_values() {
        assert_eq!(extended_binomial(2, 2, 2).unwrap(), BigInt::from(3));
        assert_eq!(extended_binomial(2, 2, 5).unwrap(), BigInt::zero());
        assert_eq!(extended_binomial(2, 2, -1).unwrap(), BigInt::zero());
        assert_eq!(extended_binomial(3, 0, 0).unwrap(), BigInt::one());
        assert!(extended_binomial(0, 2, 0).is_err());
        for n in 0..10u64 {
            for k in 0..=n {
                assert_eq!(extended_binomial(1, n as usize, k as i64).unwrap(), binomial(n, k));
            }
        }
    }

    #[test]
    fn extended_binomial_row_sums_and_symmetry() {
        for theta in 1..=4u64 {
            let mut t = ExtendedBinomialTable::new(theta).unwrap();
            for n in 0..=12usize {
                let row = t.row(n).to_vec();
                let sum: BigInt = row.iter().sum();
                assert_eq!(sum, num_traits::pow(BigInt::from(theta + 1), n));
                let top = theta as usize * n;
                for k in 0..=top {
                    assert_eq!(row[k], row[top - k]);
                }
            }
        }
    }

    #[test]
    fn coupon_delay_basics() {
        assert_eq!(coupon_delay_pmf(1, 1, &r(1, 1), 1, 0).unwrap(), r(1, 2));
        for n in 0..6 {
            assert_eq!(coupon_delay_pmf(3, 2, &r(0, 1), n, 3).unwrap(), r(1, 1));
        }
        assert_eq!(coupon_delay_pmf(3, 2, &r(1, 2), 4, 4).unwrap(), r(0, 1));
        assert_eq!(coupon_delay_pmf(3, 2, &r(1, 2), 4, -1).unwrap(), r(0, 1));
        assert!(coupon_delay_pmf(3, 2, &r(3, 2), 4, 1).is_err());
        assert!(coupon_delay_pmf(0, 0, &r(1, 2), 4, 0).is_err());
    }

    #[test]
    fn binomial_half_basics() {
        assert_eq!(binomial_half_pmf(1, 1, 1, 2, 2).unwrap(), r(1, 2));
        assert_eq!(binomial_half_pmf(1, 1, 1, 2, 0).unwrap(), r(0, 1));
        assert!(binomial_half_pmf(0, 1, 1, 2, 1).is_err());
    }

    #[test]
    fn uniform_basics() {
        assert_eq!(uniform_pmf(2, 1, 1, 2, 3).unwrap(), r(1, 3));
        for n in 0..8u64 {
            for b in 0..=(n as i64 + 2) {
                assert_eq!(
                    uniform_pmf(1, 2, 1, n, b).unwrap(),
                    binomial_half_pmf(1, 2, 1, n, b).unwrap()
                );
            }
        }
    }

    #[test]
    fn two_type_basics() {
        let p = r(2, 7);
        assert_eq!(two_type_coupon_red_pmf(1, 0, 0, &p, 1, 1).unwrap(), p);
        assert_eq!(two_type_coupon_red_pmf(2, 1, 0, &p, 3, 4).unwrap(), r(0, 1));
        assert!(two_type_coupon_red_pmf(2, 0, 0, &r(0, 1), 3, 1).is_err());
        assert!(two_type_coupon_red_pmf(2, 0, 0, &r(1, 1), 3, 1).is_err());
        // 0^0 = 1 gives a point mass at r0 = 0 when n = 0
        assert_eq!(two_type_coupon_red_pmf(3, 0, 0, &p, 0, 0).unwrap(), r(1, 1));
        assert_eq!(two_type_coupon_red_pmf_general(1, 0, 0, &p, 1, 1).unwrap(), p);
        assert_eq!(two_type_coupon_red_pmf_general(2, 1, 1, &p, 0, 1).unwrap(), r(1, 1));
    }

    #[test]
    fn every_closed_form_sums_to_one() {
        let forms = [
            ClosedForm::CouponDelay { b0: 4, w0: 2, p: r(1, 3) },
            ClosedForm::BinomialHalf { theta: 2, b0: 1, w0: 2 },
            ClosedForm::Uniform { theta: 3, b0: 2, w0: 1 },
            ClosedForm::TwoTypeCouponRed { b0: 3, r0: 0, g0: 0, p: r(1, 3) },
        ];
        for form in &forms {
            for n in 0..8 {
                let total: Rational = form.distribution(n).unwrap().values().sum();
                assert_eq!(total, r(1, 1), "{} n = {n}", form.name());
            }
        }
    }
}
