//! Tenability checking by exhaustive exploration of reachable configurations.
//!
//! A configuration deadlocks when some color with at least one ball has a
//! positive-probability rule that would drive a count below zero. For `θ = 0`
//! the total is constant, the reachable set is finite, and the verdict is
//! exact. For `θ > 0` the search stops after `horizon` draws.

use alloc::collections::{BTreeMap, VecDeque};
use alloc::vec::Vec;

use crate::scheme::{Configuration, UrnScheme};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    TenableExact,
    TenableUpToHorizon,
    Untenable,
}

/// One draw along a witness path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessStep {
    pub configuration: Configuration,
    pub color: usize,
    pub realization: Vec<i64>,
}

/// Rule with a negative off-diagonal entry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StaticViolation {
    pub row: usize,
    pub column: usize,
    pub realization: Vec<i64>,
}

/// Path from the initial configuration to a deadlock. The last step is the
/// draw whose rule cannot be applied.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub steps: Vec<WitnessStep>,
    pub static_violation: Option<StaticViolation>,
}

impl Witness {
    /// Replays the path against `scheme`: every step must be a positive-probability
    /// draw from the current configuration, every step but the last must apply,
    /// and the last must drive some count negative.
    pub fn replays(&self, scheme: &UrnScheme) -> bool {
        let Some((last, prefix)) = self.steps.split_last() else {
            return false;
        };
        let mut current = scheme.initial().clone();
        let legal = |c: &Configuration, s: &WitnessStep| {
            s.configuration == *c
                && s.color < scheme.k()
                && c.count(s.color) > 0
                && scheme
                    .row(s.color)
                    .realizations()
                    .iter()
                    .any(|(v, _)| *v == s.realization)
        };
        for s in prefix {
            if !legal(&current, s) {
                return false;
            }
            match current.apply(&s.realization) {
                Some(next) => current = next,
                None => return false,
            }
        }
        legal(&current, last) && current.apply(&last.realization).is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TenabilityReport {
    pub verdict: Verdict,
    /// Draws explored; for exact verdicts, the depth at which the search closed.
    pub horizon: usize,
    pub witness: Option<Witness>,
}

pub const DEFAULT_HORIZON: usize = 50;

fn static_violation(scheme: &UrnScheme) -> Option<StaticViolation> {
    scheme.rows().iter().enumerate().find_map(|(row, r)| {
        r.realizations().iter().find_map(|(v, _)| {
            v.iter()
                .enumerate()
                .find(|&(column, &x)| column != row && x < 0)
                .map(|(column, _)| StaticViolation {
                    row,
                    column,
                    realization: v.clone(),
                })
        })
    })
}

type Parent = Option<(Configuration, usize, Vec<i64>)>;

fn path_to(parents: &BTreeMap<Configuration, Parent>, target: &Configuration) -> Vec<WitnessStep> {
    let mut steps = Vec::new();
    let mut cursor = target.clone();
    while let Some(Some((prev, color, realization))) = parents.get(&cursor) {
        steps.push(WitnessStep {
            configuration: prev.clone(),
            color: *color,
            realization: realization.clone(),
        });
        cursor = prev.clone();
    }
    steps.reverse();
    steps
}

/// Checks the static conditions, then explores all positive-probability
/// transitions breadth first. A deadlock found this way comes with a
/// shortest witness.
pub fn check_tenability(scheme: &UrnScheme, horizon: usize) -> TenabilityReport {
    let exact = scheme.theta() == 0;
    let violation = static_violation(scheme);

    let mut parents: BTreeMap<Configuration, Parent> = BTreeMap::new();
    let mut order: Vec<Configuration> = Vec::new();
    let mut queue: VecDeque<(Configuration, usize)> = VecDeque::new();
    parents.insert(scheme.initial().clone(), None);
    queue.push_back((scheme.initial().clone(), 0));
    let mut depth_reached = 0;

    while let Some((config, depth)) = queue.pop_front() {
        order.push(config.clone());
        if !exact && depth >= horizon {
            continue;
        }
        depth_reached = depth_reached.max(depth + 1);
        for color in 0..scheme.k() {
            if config.count(color) == 0 {
                continue;
            }
            for (v, _) in scheme.row(color).realizations() {
                match config.apply(v) {
                    None => {
                        let mut steps = path_to(&parents, &config);
                        steps.push(WitnessStep {
                            configuration: config.clone(),
                            color,
                            realization: v.clone(),
                        });
                        return TenabilityReport {
                            verdict: Verdict::Untenable,
                            horizon: depth + 1,
                            witness: Some(Witness {
                                steps,
                                static_violation: violation,
                            }),
                        };
                    }
                    Some(next) => {
                        if !parents.contains_key(&next) {
                            parents.insert(next.clone(), Some((config.clone(), color, v.clone())));
                            queue.push_back((next, depth + 1));
                        }
                    }
                }
            }
        }
    }

    let explored = if exact { depth_reached } else { horizon };
    if let Some(violation) = violation {
        let steps = drain_witness(&parents, &order, &violation).unwrap_or_default();
        return TenabilityReport {
            verdict: Verdict::Untenable,
            horizon: explored,
            witness: Some(Witness {
                steps,
                static_violation: Some(violation),
            }),
        };
    }
    TenabilityReport {
        verdict: if exact {
            Verdict::TenableExact
        } else {
            Verdict::TenableUpToHorizon
        },
        horizon: explored,
        witness: None,
    }
}

/// Applies the offending rule repeatedly from the first reachable configuration
/// where its color is present, until it can no longer be applied.
fn drain_witness(
    parents: &BTreeMap<Configuration, Parent>,
    order: &[Configuration],
    violation: &StaticViolation,
) -> Option<Vec<WitnessStep>> {
    let color = violation.row;
    let rule = &violation.realization;
    for start in order.iter().filter(|c| c.count(color) > 0) {
        let mut steps = path_to(parents, start);
        let mut current = start.clone();
        // the offending column strictly decreases, so this terminates
        loop {
            if current.count(color) == 0 {
                break;
            }
            let step = WitnessStep {
                configuration: current.clone(),
                color,
                realization: rule.clone(),
            };
            steps.push(step);
            match current.apply(rule) {
                None => return Some(steps),
                Some(next) => current = next,
            }
        }
    }
    None
}
