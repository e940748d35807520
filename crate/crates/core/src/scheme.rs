//! Urn schemes with random replacement rows.
//!
//! A row is stored as one joint law over `k`-vectors. Balance couples the
//! entries of a row (the off-diagonal entry of a two-color row is `θ` minus the
//! diagonal one), so a product of per-entry laws would be the wrong model.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::arith::binomial;
use crate::error::{Invariant, Result, UrnError};
use crate::Rational;

/// Ball counts per color.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Configuration(Vec<u64>);

impl Configuration {
    pub fn new(counts: Vec<u64>) -> Self {
        Configuration(counts)
    }

    pub fn counts(&self) -> &[u64] {
        &self.0
    }

    pub fn colors(&self) -> usize {
        self.0.len()
    }

    pub fn count(&self, color: usize) -> u64 {
        self.0[color]
    }

    pub fn total(&self) -> u64 {
        self.0.iter().sum()
    }

    /// Adds `delta` componentwise, or `None` if some count would go negative.
    pub fn apply(&self, delta: &[i64]) -> Option<Configuration> {
        debug_assert_eq!(delta.len(), self.0.len());
        self.0
            .iter()
            .zip(delta)
            .map(|(&c, &d)| {
                let next = c as i128 + d as i128;
                (next >= 0).then_some(next as u64)
            })
            .collect::<Option<Vec<u64>>>()
            .map(Configuration)
    }
}

impl From<Vec<u64>> for Configuration {
    fn from(counts: Vec<u64>) -> Self {
        Configuration(counts)
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

fn check_probabilities<'a>(probs: impl Iterator<Item = &'a Rational>) -> Result<()> {
    let mut sum = Rational::zero();
    for p in probs {
        if p.is_negative() {
            return Err(Invariant::NegativeProbability(p.to_string()).into());
        }
        sum += p;
    }
    if !sum.is_one() {
        return Err(Invariant::ProbabilitySum(sum.to_string()).into());
    }
    Ok(())
}

/// Finite law of a single integer-valued replacement entry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EntryDistribution {
    support: Vec<(i64, Rational)>,
}

impl EntryDistribution {
    /// Builds a law from `(value, probability)` pairs. Zero-probability values are dropped.
    pub fn new(pairs: impl IntoIterator<Item = (i64, Rational)>) -> Result<Self> {
        let pairs: Vec<(i64, Rational)> = pairs.into_iter().collect();
        check_probabilities(pairs.iter().map(|(_, p)| p))?;
        let mut support: Vec<(i64, Rational)> =
            pairs.into_iter().filter(|(_, p)| !p.is_zero()).collect();
        support.sort_by_key(|(v, _)| *v);
        if let Some(w) = support.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(Invariant::DuplicateValue(w[0].0.to_string()).into());
        }
        if support.is_empty() {
            return Err(Invariant::EmptySupport.into());
        }
        Ok(EntryDistribution { support })
    }

    pub fn deterministic(value: i64) -> Self {
        EntryDistribution {
            support: vec![(value, Rational::one())],
        }
    }

    /// `Ber(p)`: 1 with probability `p`, 0 otherwise.
    pub fn bernoulli(p: Rational) -> Result<Self> {
        check_unit_interval(&p)?;
        let q = Rational::one() - &p;
        Self::new([(0, q), (1, p)])
    }

    /// `Bin(trials, p)`.
    pub fn binomial(trials: u64, p: Rational) -> Result<Self> {
        check_unit_interval(&p)?;
        let q = Rational::one() - &p;
        let pairs = (0..=trials).map(|k| {
            let c = Rational::from_integer(binomial(trials, k));
            let prob = c
                * crate::arith::rational_pow(&p, k)
                * crate::arith::rational_pow(&q, trials - k);
            (k as i64, prob)
        });
        Self::new(pairs)
    }

    /// Uniform on the integers `low..=high`.
    pub fn uniform(low: i64, high: i64) -> Result<Self> {
        if high < low {
            return Err(Invariant::EmptySupport.into());
        }
        let width = BigInt::from(high - low + 1);
        let each = Rational::new(BigInt::one(), width);
        Self::new((low..=high).map(|v| (v, each.clone())))
    }

    pub fn support(&self) -> &[(i64, Rational)] {
        &self.support
    }

    pub fn min(&self) -> i64 {
        self.support[0].0
    }

    pub fn max(&self) -> i64 {
        self.support[self.support.len() - 1].0
    }

    pub fn mean(&self) -> Rational {
        self.support
            .iter()
            .map(|(v, p)| p * Rational::from_integer(BigInt::from(*v)))
            .sum()
    }

    pub fn probability(&self, value: i64) -> Rational {
        self.support
            .binary_search_by_key(&value, |(v, _)| *v)
            .map(|i| self.support[i].1.clone())
            .unwrap_or_else(|_| Rational::zero())
    }
}

fn check_unit_interval(p: &Rational) -> Result<()> {
    if p.is_negative() || *p > Rational::one() {
        return Err(UrnError::Domain(alloc::format!(
            "probability {p} outside [0, 1]"
        )));
    }
    Ok(())
}

/// One entry of a row given in shorthand form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RowEntry {
    Fixed(i64),
    /// Independent of the other random entries of the row.
    Random(EntryDistribution),
    /// Whatever makes the row sum to `θ`.
    Complement,
}

/// Joint law of one row of the replacement matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReplacementRow {
    realizations: Vec<(Vec<i64>, Rational)>,
}

impl ReplacementRow {
    /// Explicit table of realizations. Zero-probability realizations are dropped.
    pub fn table(pairs: impl IntoIterator<Item = (Vec<i64>, Rational)>) -> Result<Self> {
        let pairs: Vec<(Vec<i64>, Rational)> = pairs.into_iter().collect();
        check_probabilities(pairs.iter().map(|(_, p)| p))?;
        let width = pairs.first().map(|(v, _)| v.len()).unwrap_or(0);
        if let Some((v, _)) = pairs.iter().find(|(v, _)| v.len() != width) {
            return Err(Invariant::RowWidth {
                expected: width,
                found: v.len(),
            }
            .into());
        }
        let mut realizations: Vec<(Vec<i64>, Rational)> =
            pairs.into_iter().filter(|(_, p)| !p.is_zero()).collect();
        realizations.sort_by(|a, b| a.0.cmp(&b.0));
        if let Some(w) = realizations.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(Invariant::DuplicateValue(alloc::format!("{:?}", w[0].0)).into());
        }
        if realizations.is_empty() {
            return Err(Invariant::EmptySupport.into());
        }
        Ok(ReplacementRow { realizations })
    }

    pub fn deterministic(values: Vec<i64>) -> Self {
        ReplacementRow {
            realizations: vec![(values, Rational::one())],
        }
    }

    /// Product law of the independent random entries, with at most one
    /// complement entry filled in so that every realization sums to `theta`.
    pub fn from_entries(entries: &[RowEntry], theta: i64) -> Result<Self> {
        let complement = entries
            .iter()
            .enumerate()
            .filter(|(_, e)| matches!(e, RowEntry::Complement))
            .map(|(i, _)| i)
            .collect::<Vec<_>>();
        if complement.len() > 1 {
            return Err(Invariant::MultipleComplements.into());
        }
        let mut partial: Vec<(Vec<i64>, Rational)> = vec![(Vec::new(), Rational::one())];
        for entry in entries {
            partial = match entry {
                RowEntry::Fixed(v) => partial
                    .into_iter()
                    .map(|(mut vec, p)| {
                        vec.push(*v);
                        (vec, p)
                    })
                    .collect(),
                RowEntry::Complement => partial
                    .into_iter()
                    .map(|(mut vec, p)| {
                        vec.push(0);
                        (vec, p)
                    })
                    .collect(),
                RowEntry::Random(dist) => partial
                    .into_iter()
                    .flat_map(|(vec, p)| {
                        dist.support().iter().map(move |(v, q)| {
                            let mut next = vec.clone();
                            next.push(*v);
                            (next, &p * q)
                        })
                    })
                    .collect(),
            };
        }
        if let Some(&slot) = complement.first() {
            for (vec, _) in partial.iter_mut() {
                let rest: i64 = vec.iter().sum();
                vec[slot] = theta - rest;
            }
        }
        // the same vector can arise twice only through a complement
        let mut merged: BTreeMap<Vec<i64>, Rational> = BTreeMap::new();
        for (vec, p) in partial {
            *merged.entry(vec).or_insert_with(Rational::zero) += p;
        }
        Self::table(merged)
    }

    pub fn realizations(&self) -> &[(Vec<i64>, Rational)] {
        &self.realizations
    }

    pub fn width(&self) -> usize {
        self.realizations[0].0.len()
    }

    /// Marginal law of one column.
    pub fn marginal(&self, column: usize) -> EntryDistribution {
        let mut acc: BTreeMap<i64, Rational> = BTreeMap::new();
        for (v, p) in &self.realizations {
            *acc.entry(v[column]).or_insert_with(Rational::zero) += p;
        }
        EntryDistribution {
            support: acc.into_iter().collect(),
        }
    }

    /// Least common denominator of the realization probabilities.
    pub fn common_denominator(&self) -> BigInt {
        use num_integer::Integer;
        self.realizations
            .iter()
            .fold(BigInt::one(), |acc, (_, p)| acc.lcm(p.denom()))
    }
}

/// Returns the common row sum `θ`, checking every realization of every row.
pub fn validate_balance(rows: &[ReplacementRow]) -> Result<u64> {
    let mut expected: Option<i64> = None;
    for (row, r) in rows.iter().enumerate() {
        for (v, _) in r.realizations() {
            let sum: i64 = v.iter().sum();
            match expected {
                None => expected = Some(sum),
                Some(e) if e != sum => {
                    return Err(UrnError::BalanceViolation {
                        row,
                        realization: v.clone(),
                        sum,
                        expected: e,
                    })
                }
                _ => {}
            }
        }
    }
    let theta = expected.ok_or(Invariant::EmptySupport)?;
    if theta < 0 {
        return Err(UrnError::NegativeBalance(theta));
    }
    Ok(theta as u64)
}

/// A validated balanced scheme with its initial configuration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UrnScheme {
    colors: Vec<String>,
    rows: Vec<ReplacementRow>,
    theta: u64,
    initial: Configuration,
}

impl UrnScheme {
    pub fn new(
        colors: Vec<String>,
        rows: Vec<ReplacementRow>,
        initial: Configuration,
    ) -> Result<Self> {
        let k = colors.len();
        if k < 2 {
            return Err(Invariant::TooFewColors(k).into());
        }
        for (i, name) in colors.iter().enumerate() {
            if colors[..i].contains(name) {
                return Err(Invariant::DuplicateColor(name.clone()).into());
            }
        }
        if rows.len() != k {
            return Err(Invariant::RowCount {
                colors: k,
                rows: rows.len(),
            }
            .into());
        }
        if let Some(row) = rows.iter().find(|r| r.width() != k) {
            return Err(Invariant::RowWidth {
                expected: k,
                found: row.width(),
            }
            .into());
        }
        if initial.colors() != k {
            return Err(Invariant::InitialWidth {
                expected: k,
                found: initial.colors(),
            }
            .into());
        }
        if initial.total() == 0 {
            return Err(Invariant::EmptyInitial.into());
        }
        let theta = validate_balance(&rows)?;
        Ok(UrnScheme {
            colors,
            rows,
            theta,
            initial,
        })
    }

    /// Names `c0, c1, ...` for anonymous schemes.
    pub fn default_colors(k: usize) -> Vec<String> {
        match k {
            2 => vec!["black".to_string(), "white".to_string()],
            3 => vec!["black".to_string(), "red".to_string(), "green".to_string()],
            _ => (0..k).map(|i| alloc::format!("c{i}")).collect(),
        }
    }

    /// Same rules, different starting configuration.
    pub fn with_initial(&self, initial: Configuration) -> Result<Self> {
        UrnScheme::new(self.colors.clone(), self.rows.clone(), initial)
    }

    pub fn colors(&self) -> &[String] {
        &self.colors
    }

    pub fn k(&self) -> usize {
        self.colors.len()
    }

    pub fn rows(&self) -> &[ReplacementRow] {
        &self.rows
    }

    pub fn row(&self, color: usize) -> &ReplacementRow {
        &self.rows[color]
    }

    pub fn theta(&self) -> u64 {
        self.theta
    }

    pub fn initial(&self) -> &Configuration {
        &self.initial
    }

    pub fn initial_total(&self) -> u64 {
        self.initial.total()
    }

    /// Total ball count after `n` draws.
    pub fn total_at(&self, n: usize) -> u64 {
        self.initial_total() + self.theta * n as u64
    }

    pub fn check_color(&self, color: usize) -> Result<()> {
        if color >= self.k() {
            return Err(UrnError::ColorOutOfRange {
                color,
                colors: self.k(),
            });
        }
        Ok(())
    }

    /// Smallest and largest value each entry `(row, column)` can take.
    pub fn support_bounds(&self) -> Vec<Vec<(i64, i64)>> {
        self.rows
            .iter()
            .map(|r| {
                (0..self.k())
                    .map(|c| {
                        let m = r.marginal(c);
                        (m.min(), m.max())
                    })
                    .collect()
            })
            .collect()
    }

    /// Least common denominator over all rows.
    pub fn common_denominator(&self) -> BigInt {
        use num_integer::Integer;
        self.rows
            .iter()
            .fold(BigInt::one(), |acc, r| acc.lcm(&r.common_denominator()))
    }
}
