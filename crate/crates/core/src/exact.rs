//! Weighted state vectors evolved by the pick-and-replace operator.
//!
//! The weight `Q_{n,c}` of a configuration `c` at step `n` is the total weight of
//! the length-`n` histories ending in `c`, where a history's weight is the
//! product of the rule probabilities along it. Weights sum to the kernel
//! `s_0 s_1 ... s_{n-1}` and `P(C_n = c) = Q_{n,c} / (s_0 ... s_{n-1})`.
//!
//! Weights are held as integer numerators over one shared denominator
//! (`D^n` where `D` is the scheme's common probability denominator), so a step
//! is pure integer arithmetic.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Result, UrnError};
use crate::scheme::{Configuration, UrnScheme};
use crate::{Pmf, Rational};

/// `Q_{n,·}` over all configurations reachable in `n` draws.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedStateVector {
    step: usize,
    initial_total: u64,
    theta: u64,
    denominator: BigInt,
    numerators: BTreeMap<Configuration, BigInt>,
}

impl WeightedStateVector {
    /// `{initial: 1}` at step 0.
    pub fn initial(scheme: &UrnScheme) -> Self {
        let mut numerators = BTreeMap::new();
        numerators.insert(scheme.initial().clone(), BigInt::one());
        WeightedStateVector {
            step: 0,
            initial_total: scheme.initial_total(),
            theta: scheme.theta(),
            denominator: BigInt::one(),
            numerators,
        }
    }

    pub fn step(&self) -> usize {
        self.step
    }

    pub fn len(&self) -> usize {
        self.numerators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.numerators.is_empty()
    }

    /// Total ball count shared by every configuration in the vector.
    pub fn total(&self) -> u64 {
        self.initial_total + self.theta * self.step as u64
    }

    pub fn kernel(&self) -> BigInt {
        kernel_total(self.initial_total, self.theta, self.step)
    }

    pub fn weight(&self, config: &Configuration) -> Rational {
        self.numerators
            .get(config)
            .map(|n| Rational::new(n.clone(), self.denominator.clone()))
            .unwrap_or_else(Rational::zero)
    }

    pub fn weights(&self) -> impl Iterator<Item = (&Configuration, Rational)> + '_ {
        self.numerators
            .iter()
            .map(|(c, n)| (c, Rational::new(n.clone(), self.denominator.clone())))
    }

    pub fn total_weight(&self) -> Rational {
        let sum: BigInt = self.numerators.values().sum();
        Rational::new(sum, self.denominator.clone())
    }

    /// Raw `(configuration, numerator)` entries over [`Self::denominator`].
    pub fn entries(&self) -> impl Iterator<Item = (&Configuration, &BigInt)> + '_ {
        self.numerators.iter()
    }

    pub fn denominator(&self) -> &BigInt {
        &self.denominator
    }

    /// Exact probability of each configuration.
    pub fn probabilities(&self) -> BTreeMap<Configuration, Rational> {
        let norm = &self.denominator * self.kernel();
        self.numerators
            .iter()
            .map(|(c, n)| (c.clone(), Rational::new(n.clone(), norm.clone())))
            .collect()
    }
}

/// A scheme compiled for repeated stepping: realization probabilities as
/// integer numerators over a common denominator.
#[derive(Debug, Clone)]
pub struct StepKernel {
    denominator: BigInt,
    rows: Vec<Vec<(Vec<i64>, BigInt)>>,
}

impl StepKernel {
    pub fn new(scheme: &UrnScheme) -> Self {
        let denominator = scheme.common_denominator();
        let rows = scheme
            .rows()
            .iter()
            .map(|row| {
                row.realizations()
                    .iter()
                    .map(|(v, p)| {
                        let scaled = p * Rational::from_integer(denominator.clone());
                        (v.clone(), scaled.to_integer())
                    })
                    .collect()
            })
            .collect();
        StepKernel { denominator, rows }
    }

    /// Contributions of a subset of source configurations to the next step,
    /// with numerators scaled by one extra factor of the common denominator.
    pub fn contributions<'a>(
        &self,
        sources: impl IntoIterator<Item = (&'a Configuration, &'a BigInt)>,
    ) -> Result<BTreeMap<Configuration, BigInt>> {
        let mut next: BTreeMap<Configuration, BigInt> = BTreeMap::new();
        for (config, weight) in sources {
            for (color, row) in self.rows.iter().enumerate() {
                let count = config.count(color);
                if count == 0 {
                    continue;
                }
                let picked = weight * BigInt::from(count);
                for (v, num) in row {
                    let target = config.apply(v).ok_or_else(|| UrnError::NegativeCount {
                        configuration: config.clone(),
                        color,
                        realization: v.clone(),
                    })?;
                    *next.entry(target).or_insert_with(BigInt::zero) += &picked * num;
                }
            }
        }
        Ok(next)
    }

    /// Sums partial contribution maps into the step-`n+1` vector. Addition is
    /// exact, so the result does not depend on how sources were partitioned.
    pub fn assemble(
        &self,
        previous: &WeightedStateVector,
        parts: impl IntoIterator<Item = BTreeMap<Configuration, BigInt>>,
    ) -> WeightedStateVector {
        let mut numerators: BTreeMap<Configuration, BigInt> = BTreeMap::new();
        for part in parts {
            for (c, w) in part {
                *numerators.entry(c).or_insert_with(BigInt::zero) += w;
            }
        }
        numerators.retain(|_, w| !w.is_zero());
        WeightedStateVector {
            step: previous.step + 1,
            initial_total: previous.initial_total,
            theta: previous.theta,
            denominator: &previous.denominator * &self.denominator,
            numerators,
        }
    }

    pub fn step(&self, state: &WeightedStateVector) -> Result<WeightedStateVector> {
        let part = self.contributions(state.entries())?;
        Ok(self.assemble(state, [part]))
    }
}

/// One application of the pick-and-replace operator.
pub fn step(scheme: &UrnScheme, state: &WeightedStateVector) -> Result<WeightedStateVector> {
    StepKernel::new(scheme).step(state)
}

/// `n` steps from `{initial: 1}`.
pub fn evolve(scheme: &UrnScheme, n: usize) -> Result<WeightedStateVector> {
    let kernel = StepKernel::new(scheme);
    let mut state = WeightedStateVector::initial(scheme);
    for _ in 0..n {
        state = kernel.step(&state)?;
    }
    Ok(state)
}

/// `s_0 s_1 ... s_{n-1}` with `s_i = s_0 + θ i`.
pub fn kernel_total(initial_total: u64, theta: u64, n: usize) -> BigInt {
    (0..n as u64)
        .map(|i| BigInt::from(initial_total) + BigInt::from(theta) * BigInt::from(i))
        .product()
}

/// Law of the count of `color` in `state`.
pub fn marginal_pmf(state: &WeightedStateVector, color: usize) -> Pmf {
    let mut sums: BTreeMap<u64, BigInt> = BTreeMap::new();
    for (c, n) in state.entries() {
        *sums.entry(c.count(color)).or_insert_with(BigInt::zero) += n;
    }
    let norm = state.denominator() * state.kernel();
    sums.into_iter()
        .map(|(b, n)| (b, Rational::new(n, norm.clone())))
        .collect()
}

/// Exact raw moment `E[count^order]` for `order` in `1..=4`.
pub fn moments(state: &WeightedStateVector, color: usize, order: u32) -> Result<Rational> {
    if !(1..=4).contains(&order) {
        return Err(UrnError::Domain(alloc::format!(
            "moment order {order} outside 1..=4"
        )));
    }
    Ok(pmf_moment(&marginal_pmf(state, color), order))
}

pub fn pmf_moment(pmf: &Pmf, order: u32) -> Rational {
    pmf.iter()
        .map(|(b, p)| p * Rational::from_integer(num_traits::pow(BigInt::from(*b), order as usize)))
        .sum()
}

/// Mean and variance of a pmf.
pub fn mean_variance(pmf: &Pmf) -> (Rational, Rational) {
    let mean = pmf_moment(pmf, 1);
    let second = pmf_moment(pmf, 2);
    let var = second - &mean * &mean;
    (mean, var)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;
    use alloc::vec;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn cfg(v: &[u64]) -> Configuration {
        Configuration::new(v.to_vec())
    }

    #[test]
    fn polya_eggenberger_first_step() {
        let s = presets::polya_friedman(r(1, 1), [1, 1]).unwrap();
        let st = evolve(&s, 1).unwrap();
        let got: Vec<_> = st.weights().map(|(c, w)| (c.clone(), w)).collect();
        assert_eq!(got, vec![(cfg(&[1, 2]), r(1, 1)), (cfg(&[2, 1]), r(1, 1))]);
    }

    #[test]
    fn coupon_first_step() {
        let s = presets::coupon(r(1, 2), [1, 0]).unwrap();
        let st = evolve(&s, 1).unwrap();
        assert_eq!(st.weight(&cfg(&[0, 1])), r(1, 2));
        assert_eq!(st.weight(&cfg(&[1, 0])), r(1, 2));
        assert_eq!(st.len(), 2);
    }

    #[test]
    fn three_color_first_step() {
        let p = r(2, 7);
        let s = presets::three_color_coupon(p.clone(), [1, 0, 0]).unwrap();
        let st = evolve(&s, 1).unwrap();
        assert_eq!(st.weight(&cfg(&[0, 1, 0])), p);
        assert_eq!(st.weight(&cfg(&[0, 0, 1])), r(5, 7));
        assert_eq!(st.len(), 2);
    }

    #[test]
    fn zero_steps_is_identity() {
        let s = presets::uniform(3, [2, 5]).unwrap();
        let st = evolve(&s, 0).unwrap();
        assert_eq!(st.len(), 1);
        assert_eq!(st.weight(&cfg(&[2, 5])), r(1, 1));
        let pmf = marginal_pmf(&st, 0);
        assert_eq!(pmf.into_iter().collect::<Vec<_>>(), vec![(2, r(1, 1))]);
        for order in 1..=4 {
            assert_eq!(moments(&st, 0, order).unwrap(), r(2i64.pow(order), 1));
        }
    }

    #[test]
    fn binomial_urn_two_steps() {
        let s = presets::binomial(1, r(1, 2), [1, 1]).unwrap();
        let st = evolve(&s, 2).unwrap();
        // kernel 2*3 = 6; probabilities C(2, b-1)/4
        let pmf = marginal_pmf(&st, 0);
        assert_eq!(pmf[&1], r(1, 4));
        assert_eq!(pmf[&2], r(1, 2));
        assert_eq!(pmf[&3], r(1, 4));
        assert_eq!(st.weight(&cfg(&[2, 2])), r(3, 1));
    }

    #[test]
    fn uniform_urn_two_steps() {
        let s = presets::uniform(2, [1, 1]).unwrap();
        let pmf = marginal_pmf(&evolve(&s, 2).unwrap(), 0);
        assert_eq!(pmf[&3], r(1, 3));
        assert_eq!(pmf[&1], r(1, 9));
    }

    #[test]
    fn polya_eggenberger_is_uniform() {
        let s = presets::polya_friedman(r(1, 1), [1, 1]).unwrap();
        let pmf = marginal_pmf(&evolve(&s, 10).unwrap(), 0);
        assert_eq!(pmf.len(), 11);
        assert!(pmf.iter().all(|(b, p)| (1..=11).contains(b) && *p == r(1, 11)));
    }

    #[test]
    fn kernel_values() {
        assert_eq!(kernel_total(2, 1, 3), BigInt::from(24));
        assert_eq!(kernel_total(4, 0, 5), BigInt::from(1024));
        assert_eq!(kernel_total(7, 3, 0), BigInt::one());
    }

    #[test]
    fn binomial_urn_moments() {
        let s = presets::binomial(1, r(1, 2), [1, 1]).unwrap();
        for n in 0..8usize {
            let st = evolve(&s, n).unwrap();
            let (mean, var) = mean_variance(&marginal_pmf(&st, 0));
            assert_eq!(mean, r(st.total() as i64, 2));
            assert_eq!(var, r(n as i64, 4));
        }
        let st = evolve(&s, 3).unwrap();
        assert!(moments(&st, 0, 5).is_err());
        assert!(moments(&st, 0, 0).is_err());
    }

    #[test]
    fn untenable_scheme_reports_negative_count() {
        let s = presets::plus_minus_two([2, 1]).unwrap();
        match evolve(&s, 1) {
            Err(UrnError::NegativeCount { color, .. }) => assert_eq!(color, 1),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn partitioned_step_matches() {
        let s = presets::polya_friedman(r(2, 5), [2, 3]).unwrap();
        let k = StepKernel::new(&s);
        let st = evolve(&s, 6).unwrap();
        let entries: Vec<_> = st.entries().collect();
        let parts: Vec<_> = entries
            .chunks(2)
            .map(|chunk| k.contributions(chunk.iter().copied()).unwrap())
            .collect();
        assert_eq!(k.assemble(&st, parts.into_iter().rev()), k.step(&st).unwrap());
    }
}
