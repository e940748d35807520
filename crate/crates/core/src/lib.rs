//! Exact analysis of balanced, tenable Pólya urns whose replacement rules are random.
//!
//! A scheme with `k` colors is a `k`-row replacement law: when a ball of color `i`
//! is drawn it is returned, and a vector drawn from row `i`'s joint law is added to
//! the configuration. Every realization of every row sums to the same balance `θ`,
//! so the total after `n` draws is `s_0 + θ n`.
//!
//! The crate computes the law of the configuration after `n` draws three ways:
//!
//! - [`exact`]: iterates the pick-and-replace operator on the weighted state vector,
//! - [`series`]: solves the associated polynomial ODE system as a truncated formal
//!   power series with Laurent-polynomial coefficients and expands `∏ X_i(z)^{c_i}`,
//! - [`closed_forms`]: evaluates known closed-form laws for specific schemes.
//!
//! [`oracle`] enumerates histories one by one for small `n` and [`simulate`] draws
//! seeded Monte Carlo trajectories. Everything is exact rational arithmetic except
//! the simulator's sampling, which is exact up to the 64-bit multiply-shift bound.
//!
//! The crate is `no_std` and needs only `alloc`.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod closed_forms;
pub mod error;
pub mod exact;
pub mod laurent;
pub mod oracle;
pub mod presets;
pub mod rng;
pub mod scheme;
pub mod series;
pub mod simulate;
pub mod tenability;

mod arith;

pub use arith::{binomial, parse_rational};
pub use error::{Invariant, Result, UrnError};
pub use exact::{evolve, kernel_total, marginal_pmf, moments, step, WeightedStateVector};
pub use scheme::{
    validate_balance, Configuration, EntryDistribution, ReplacementRow, RowEntry, UrnScheme,
};
pub use tenability::{check_tenability, TenabilityReport, Verdict, Witness, WitnessStep};

/// Exact rational number used for every probability and weight.
pub type Rational = num_rational::BigRational;

/// Probability mass function over the count of one color.
pub type Pmf = alloc::collections::BTreeMap<u64, Rational>;
