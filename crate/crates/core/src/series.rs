//! The polynomial ODE system attached to a scheme, solved as truncated formal
//! power series.
//!
//! Row `i` contributes `Σ_v p_v · x_i · ∏_j x_j^{v_j}` to `x_i'`. With symbolic
//! initial values `X_i(0) = x_i`, the weighted generating function of the urn is
//! `∏_i X_i(z)^{c_i}` where `c` is the initial configuration, so `n!` times its
//! `z^n` coefficient is the step-`n` weight polynomial.

use alloc::collections::btree_map::Entry;
use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Write;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Result, UrnError};
use crate::exact::WeightedStateVector;
use crate::laurent::{Exponents, LaurentPoly};
use crate::scheme::{Configuration, UrnScheme};
use crate::Rational;

/// Power series in `t` truncated after `coeffs.len()` terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormalSeries {
    coeffs: Vec<LaurentPoly>,
}

impl FormalSeries {
    pub fn new(coeffs: Vec<LaurentPoly>) -> Self {
        assert!(!coeffs.is_empty(), "series needs a constant term");
        FormalSeries { coeffs }
    }

    /// `c + 0·t + ...` with `len` coefficients.
    pub fn constant(c: LaurentPoly, len: usize) -> Self {
        let vars = c.vars();
        let mut coeffs = vec![c];
        coeffs.resize(len.max(1), LaurentPoly::zero(vars));
        FormalSeries { coeffs }
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Highest known power of `t`.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn vars(&self) -> usize {
        self.coeffs[0].vars()
    }

    pub fn coefficient(&self, m: usize) -> &LaurentPoly {
        &self.coeffs[m]
    }

    pub fn coefficients(&self) -> &[LaurentPoly] {
        &self.coeffs
    }

    pub fn truncated(&self, len: usize) -> Self {
        FormalSeries {
            coeffs: self.coeffs[..len.min(self.coeffs.len()).max(1)].to_vec(),
        }
    }

    /// Cauchy product, truncated to the shorter operand.
    pub fn mul(&self, other: &FormalSeries) -> FormalSeries {
        let len = self.len().min(other.len());
        let vars = self.vars();
        let coeffs = (0..len)
            .map(|m| {
                (0..=m).fold(LaurentPoly::zero(vars), |acc, l| {
                    &acc + &(&self.coeffs[l] * &other.coeffs[m - l])
                })
            })
            .collect();
        FormalSeries { coeffs }
    }

    /// `1 / self`; the constant term must be a single monomial.
    pub fn recip(&self) -> Result<FormalSeries> {
        let (e0, c0) = self.coeffs[0].as_monomial().ok_or(UrnError::NonUnitLeadingTerm)?;
        let inv_shift: Exponents = e0.iter().map(|e| -e).collect();
        let inv_c = c0.recip();
        let vars = self.vars();
        let mut out: Vec<LaurentPoly> = Vec::with_capacity(self.len());
        out.push(LaurentPoly::monomial(inv_shift.clone(), inv_c.clone()));
        for m in 1..self.len() {
            let acc = (1..=m).fold(LaurentPoly::zero(vars), |acc, l| {
                &acc + &(&self.coeffs[l] * &out[m - l])
            });
            out.push(acc.shift(&inv_shift, &-inv_c.clone()));
        }
        Ok(FormalSeries { coeffs: out })
    }

    pub fn pow(&self, exp: u64) -> FormalSeries {
        let one = LaurentPoly::constant(self.vars(), Rational::one());
        let mut result = FormalSeries::constant(one, self.len());
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Integer power; negative exponents go through [`Self::recip`].
    pub fn powi(&self, exp: i64) -> Result<FormalSeries> {
        if exp >= 0 {
            Ok(self.pow(exp as u64))
        } else {
            Ok(self.recip()?.pow(exp.unsigned_abs()))
        }
    }
}

/// One term `coefficient · ∏_j x_j^{exponents_j}` of a right-hand side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OdeTerm {
    pub coefficient: Rational,
    pub exponents: Exponents,
}

/// `x_i' = Σ terms` for each color `i`; terms sorted by descending exponent vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OdeSystem {
    names: Vec<String>,
    equations: Vec<Vec<OdeTerm>>,
}

impl OdeSystem {
    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn equations(&self) -> &[Vec<OdeTerm>] {
        &self.equations
    }

    pub fn k(&self) -> usize {
        self.equations.len()
    }

    /// Right-hand side of equation `i` as a polynomial in the color variables.
    pub fn rhs_polynomial(&self, i: usize) -> LaurentPoly {
        LaurentPoly::from_terms(
            self.k(),
            self.equations[i]
                .iter()
                .map(|t| (t.exponents.clone(), t.coefficient.clone())),
        )
    }
}

/// Variable names: `x, y` for two colors, `x, y, h` for three, `x0, x1, ...` beyond.
pub fn variable_names(k: usize) -> Vec<String> {
    match k {
        2 => vec!["x".to_string(), "y".to_string()],
        3 => vec!["x".to_string(), "y".to_string(), "h".to_string()],
        _ => (0..k).map(|i| alloc::format!("x{i}")).collect(),
    }
}

pub fn build_system(scheme: &UrnScheme) -> OdeSystem {
    let k = scheme.k();
    let equations = scheme
        .rows()
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut merged: BTreeMap<Exponents, Rational> = BTreeMap::new();
            for (v, p) in row.realizations() {
                let mut e = v.clone();
                e[i] += 1;
                *merged.entry(e).or_insert_with(Rational::zero) += p;
            }
            merged
                .into_iter()
                .rev()
                .filter(|(_, c)| !c.is_zero())
                .map(|(exponents, coefficient)| OdeTerm {
                    coefficient,
                    exponents,
                })
                .collect()
        })
        .collect();
    OdeSystem {
        names: variable_names(k),
        equations,
    }
}

fn render_monomial(names: &[String], exponents: &[i64]) -> String {
    let mut parts: Vec<String> = Vec::new();
    for (name, &e) in names.iter().zip(exponents) {
        match e {
            0 => {}
            1 => parts.push(name.clone()),
            _ => parts.push(alloc::format!("{name}^{e}")),
        }
    }
    if parts.is_empty() {
        "1".to_string()
    } else {
        parts.join("*")
    }
}

/// One equation per line, e.g. `x' = 1/2*x + 1/2*y`.
pub fn render_system(system: &OdeSystem) -> String {
    let mut out = String::new();
    for (i, terms) in system.equations.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        let _ = write!(out, "{}' =", system.names[i]);
        if terms.is_empty() {
            out.push_str(" 0");
        }
        for (j, term) in terms.iter().enumerate() {
            let negative = term.coefficient < Rational::zero();
            let magnitude = if negative {
                -term.coefficient.clone()
            } else {
                term.coefficient.clone()
            };
            let sign = match (j, negative) {
                (0, false) => " ",
                (0, true) => " -",
                (_, false) => " + ",
                (_, true) => " - ",
            };
            out.push_str(sign);
            let mono = render_monomial(&system.names, &term.exponents);
            if magnitude.is_one() {
                out.push_str(&mono);
            } else if mono == "1" {
                let _ = write!(out, "{magnitude}");
            } else {
                let _ = write!(out, "{magnitude}*{mono}");
            }
        }
    }
    out
}

/// Taylor coefficients of the solution through `t^order`, with symbolic
/// initial values `X_i(0) = x_i`.
pub fn taylor_solve(system: &OdeSystem, order: usize) -> Result<Vec<FormalSeries>> {
    if order < 1 {
        return Err(UrnError::TruncationTooSmall {
            needed: 1,
            available: order,
        });
    }
    let k = system.k();
    let mut coeffs: Vec<Vec<LaurentPoly>> = (0..k).map(|i| vec![LaurentPoly::var(k, i)]).collect();
    for m in 0..order {
        let known: Vec<FormalSeries> = coeffs.iter().map(|c| FormalSeries::new(c.clone())).collect();
        let mut powers: BTreeMap<(usize, i64), FormalSeries> = BTreeMap::new();
        let mut next: Vec<LaurentPoly> = Vec::with_capacity(k);
        for terms in &system.equations {
            let mut rhs_m = LaurentPoly::zero(k);
            for term in terms {
                let mut product: Option<FormalSeries> = None;
                for (j, &e) in term.exponents.iter().enumerate() {
                    if e == 0 {
                        continue;
                    }
                    let factor = match powers.entry((j, e)) {
                        Entry::Occupied(o) => o.into_mut(),
                        Entry::Vacant(v) => v.insert(known[j].powi(e)?),
                    };
                    product = Some(match product {
                        None => factor.clone(),
                        Some(p) => p.mul(factor),
                    });
                }
                let c_m = match product {
                    Some(p) => p.coefficient(m).clone(),
                    None if m == 0 => LaurentPoly::constant(k, Rational::one()),
                    None => LaurentPoly::zero(k),
                };
                rhs_m = &rhs_m + &c_m.scale(&term.coefficient);
            }
            let divisor = Rational::from_integer(BigInt::from(m as u64 + 1)).recip();
            next.push(rhs_m.scale(&divisor));
        }
        for (c, n) in coeffs.iter_mut().zip(next) {
            c.push(n);
        }
    }
    Ok(coeffs.into_iter().map(FormalSeries::new).collect())
}

/// `q_n = n! [z^n] ∏_i X_i(z)^{initial_i}` for `n = 0..=order`.
pub fn q_coefficients(
    series: &[FormalSeries],
    initial: &Configuration,
    order: usize,
) -> Result<Vec<LaurentPoly>> {
    let available = series.iter().map(FormalSeries::order).min().unwrap_or(0);
    if available < order {
        return Err(UrnError::TruncationTooSmall {
            needed: order,
            available,
        });
    }
    let k = series.len();
    let len = order + 1;
    let mut product = FormalSeries::constant(LaurentPoly::constant(k, Rational::one()), len);
    for (s, &c) in series.iter().zip(initial.counts()) {
        if c > 0 {
            product = product.mul(&s.truncated(len).pow(c));
        }
    }
    let mut factorial = BigInt::one();
    Ok((0..len)
        .map(|n| {
            if n > 0 {
                factorial *= BigInt::from(n as u64);
            }
            product
                .coefficient(n)
                .scale(&Rational::from_integer(factorial.clone()))
        })
        .collect())
}

/// The weighted state vector read as a polynomial `Σ_c Q_{n,c} ∏ x_i^{c_i}`.
pub fn state_polynomial(state: &WeightedStateVector, k: usize) -> LaurentPoly {
    LaurentPoly::from_terms(
        k,
        state
            .weights()
            .map(|(c, w)| (c.counts().iter().map(|&x| x as i64).collect(), w)),
    )
}

/// First monomial (in exponent order) where two polynomials differ.
pub fn first_difference(a: &LaurentPoly, b: &LaurentPoly) -> Option<(Exponents, Rational, Rational)> {
    let diff = a - b;
    let first = diff.terms().next().map(|(e, _)| e.clone());
    first.map(|e| {
        let (x, y) = (a.coefficient(&e), b.coefficient(&e));
        (e, x, y)
    })
}
