//! Seeded Monte Carlo simulation of urn histories.
//!
//! A draw picks a ball uniformly (`below(s)` against cumulative color counts),
//! then a rule realization by `below(D)` against cumulative integer numerators
//! over the row's common denominator `D`. No rejection loop is used.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::ops::Range;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Result, UrnError};
use crate::rng::{history_seed, SplitMix64};
use crate::scheme::{Configuration, UrnScheme};
use crate::{Pmf, Rational};

#[derive(Debug, Clone)]
struct RowSampler {
    denominator: u64,
    cumulative: Vec<u64>,
    realizations: Vec<Vec<i64>>,
}

/// A scheme compiled to 64-bit thresholds.
#[derive(Debug, Clone)]
pub struct Sampler {
    initial: Configuration,
    rows: Vec<RowSampler>,
}

impl Sampler {
    pub fn new(scheme: &UrnScheme) -> Result<Self> {
        let rows = scheme
            .rows()
            .iter()
            .map(|row| {
                let d = row.common_denominator();
                let denominator = d.to_u64().ok_or(UrnError::SamplerPrecision)?;
                let mut acc = 0u64;
                let mut cumulative = Vec::new();
                let mut realizations = Vec::new();
                for (v, p) in row.realizations() {
                    let scaled = (p * Rational::from_integer(d.clone())).to_integer();
                    acc += scaled.to_u64().ok_or(UrnError::SamplerPrecision)?;
                    cumulative.push(acc);
                    realizations.push(v.clone());
                }
                debug_assert_eq!(acc, denominator);
                Ok(RowSampler {
                    denominator,
                    cumulative,
                    realizations,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Sampler {
            initial: scheme.initial().clone(),
            rows,
        })
    }

    /// One history of `steps` draws from the given generator seed.
    pub fn history(&self, steps: usize, seed: u64) -> Result<Trajectory> {
        let mut rng = SplitMix64::new(seed);
        let mut path = Vec::with_capacity(steps + 1);
        let mut current = self.initial.clone();
        path.push(current.clone());
        for step in 0..steps {
            let total = current.total();
            if total == 0 {
                return Err(UrnError::DeadlockEncountered {
                    step,
                    configuration: current,
                });
            }
            let ball = rng.below(total);
            let mut seen = 0u64;
            let color = current
                .counts()
                .iter()
                .position(|&c| {
                    seen += c;
                    ball < seen
                })
                .expect("ball index below total");
            let row = &self.rows[color];
            let ticket = rng.below(row.denominator);
            let idx = row.cumulative.partition_point(|&c| c <= ticket);
            match current.apply(&row.realizations[idx]) {
                Some(next) => current = next,
                None => {
                    return Err(UrnError::DeadlockEncountered {
                        step,
                        configuration: current,
                    })
                }
            }
            path.push(current.clone());
        }
        Ok(Trajectory { configurations: path })
    }
}

/// Configurations `C_0, ..., C_n` of one history.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trajectory {
    pub configurations: Vec<Configuration>,
}

impl Trajectory {
    pub fn steps(&self) -> usize {
        self.configurations.len() - 1
    }

    pub fn terminal(&self) -> &Configuration {
        &self.configurations[self.configurations.len() - 1]
    }

    /// Checks that consecutive totals differ by `θ` and every transition is a
    /// positive-probability rule of a color present before the draw.
    pub fn is_consistent_with(&self, scheme: &UrnScheme) -> bool {
        if self.configurations.first() != Some(scheme.initial()) {
            return false;
        }
        self.configurations.windows(2).all(|w| {
            let (a, b) = (&w[0], &w[1]);
            if b.total() != a.total() + scheme.theta() {
                return false;
            }
            let delta: Vec<i64> = a
                .counts()
                .iter()
                .zip(b.counts())
                .map(|(&x, &y)| y as i64 - x as i64)
                .collect();
            (0..scheme.k()).any(|color| {
                a.count(color) > 0
                    && scheme
                        .row(color)
                        .realizations()
                        .iter()
                        .any(|(v, _)| *v == delta)
            })
        })
    }
}

/// `histories` independent runs of `steps` draws under one master seed.
#[derive(Debug, Clone)]
pub struct SimulationPlan {
    pub scheme: UrnScheme,
    pub steps: usize,
    pub histories: u64,
    pub master_seed: u64,
}

impl SimulationPlan {
    pub fn new(scheme: UrnScheme, steps: usize, histories: u64, master_seed: u64) -> Self {
        SimulationPlan {
            scheme,
            steps,
            histories,
            master_seed,
        }
    }

    pub fn sampler(&self) -> Result<Sampler> {
        Sampler::new(&self.scheme)
    }

    /// History `index`, reproducible on its own.
    pub fn history(&self, sampler: &Sampler, index: u64) -> Result<Trajectory> {
        sampler.history(self.steps, history_seed(self.master_seed, index))
    }

    /// Terminal counts of `color` for the histories in `range`, in index order.
    pub fn terminal_counts(&self, sampler: &Sampler, range: Range<u64>, color: usize) -> Result<Vec<u64>> {
        range
            .map(|i| self.history(sampler, i).map(|t| t.terminal().count(color)))
            .collect()
    }
}

/// One history from a seed.
pub fn simulate_history(scheme: &UrnScheme, steps: usize, seed: u64) -> Result<Trajectory> {
    Sampler::new(scheme)?.history(steps, seed)
}

/// Frequencies of terminal counts over `histories` runs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmpiricalPmf {
    pub histories: u64,
    pub counts: BTreeMap<u64, u64>,
}

impl EmpiricalPmf {
    pub fn from_values(values: impl IntoIterator<Item = u64>) -> Self {
        let mut counts = BTreeMap::new();
        let mut histories = 0;
        for v in values {
            *counts.entry(v).or_insert(0) += 1;
            histories += 1;
        }
        EmpiricalPmf { histories, counts }
    }

    pub fn probability(&self, value: u64) -> Rational {
        let c = self.counts.get(&value).copied().unwrap_or(0);
        Rational::new(BigInt::from(c), BigInt::from(self.histories))
    }

    pub fn to_pmf(&self) -> Pmf {
        self.counts
            .keys()
            .map(|&v| (v, self.probability(v)))
            .collect()
    }
}

/// Empirical law of the terminal count of `color`, sequentially.
pub fn empirical_pmf(plan: &SimulationPlan, color: usize) -> Result<EmpiricalPmf> {
    plan.scheme.check_color(color)?;
    if plan.histories == 0 {
        return Err(UrnError::Domain("at least one history is required".into()));
    }
    let sampler = plan.sampler()?;
    let values = plan.terminal_counts(&sampler, 0..plan.histories, color)?;
    Ok(EmpiricalPmf::from_values(values))
}

/// `½ Σ |a(v) - b(v)|`, exactly.
pub fn total_variation(a: &Pmf, b: &Pmf) -> Rational {
    let mut sum = Rational::zero();
    let zero = Rational::zero();
    for v in a.keys().chain(b.keys().filter(|v| !a.contains_key(v))) {
        let x = a.get(v).unwrap_or(&zero);
        let y = b.get(v).unwrap_or(&zero);
        let d = x - y;
        sum += if d < zero { -d } else { d };
    }
    sum / Rational::from_integer(BigInt::from(2))
}
