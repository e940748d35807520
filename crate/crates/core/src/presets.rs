//! Constructors for the standard schemes.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::Result;
use crate::scheme::{Configuration, EntryDistribution, ReplacementRow, RowEntry, UrnScheme};
use crate::Rational;

fn two_color(row0: &[RowEntry], row1: &[RowEntry], theta: i64, initial: Vec<u64>) -> Result<UrnScheme> {
    UrnScheme::new(
        UrnScheme::default_colors(2),
        vec![
            ReplacementRow::from_entries(row0, theta)?,
            ReplacementRow::from_entries(row1, theta)?,
        ],
        Configuration::new(initial),
    )
}

/// `[[B, 1-B], [1-B, B]]` with `B ~ Ber(p)`: Pólya-Eggenberger at `p = 1`, Friedman at `p = 0`.
pub fn polya_friedman(p: Rational, initial: impl Into<Vec<u64>>) -> Result<UrnScheme> {
    let b = EntryDistribution::bernoulli(p)?;
    two_color(
        &[RowEntry::Random(b.clone()), RowEntry::Complement],
        &[RowEntry::Complement, RowEntry::Random(b)],
        1,
        initial.into(),
    )
}

/// Coupon collection with delay: `[[-B, B], [0, 0]]`, `B ~ Ber(p)`.
pub fn coupon(p: Rational, initial: impl Into<Vec<u64>>) -> Result<UrnScheme> {
    let b = EntryDistribution::bernoulli(p)?;
    two_color(
        &[RowEntry::Complement, RowEntry::Random(b)],
        &[RowEntry::Fixed(0), RowEntry::Fixed(0)],
        0,
        initial.into(),
    )
}

/// `[[X, θ-X], [θ-X, X]]` with `X ~ Bin(θ, p)`.
pub fn binomial(theta: u64, p: Rational, initial: impl Into<Vec<u64>>) -> Result<UrnScheme> {
    let x = EntryDistribution::binomial(theta, p)?;
    two_color(
        &[RowEntry::Random(x.clone()), RowEntry::Complement],
        &[RowEntry::Complement, RowEntry::Random(x)],
        theta as i64,
        initial.into(),
    )
}

/// `[[U, θ-U], [θ-U, U]]` with `U` uniform on `0..=θ`.
pub fn uniform(theta: u64, initial: impl Into<Vec<u64>>) -> Result<UrnScheme> {
    let u = EntryDistribution::uniform(0, theta as i64)?;
    two_color(
        &[RowEntry::Random(u.clone()), RowEntry::Complement],
        &[RowEntry::Complement, RowEntry::Random(u)],
        theta as i64,
        initial.into(),
    )
}

/// Three colors (black, red, green): a drawn black ball turns red with
/// probability `p`, green otherwise; red and green are inert.
pub fn three_color_coupon(p: Rational, initial: impl Into<Vec<u64>>) -> Result<UrnScheme> {
    let b = EntryDistribution::bernoulli(p)?;
    UrnScheme::new(
        UrnScheme::default_colors(3),
        vec![
            ReplacementRow::from_entries(
                &[RowEntry::Fixed(-1), RowEntry::Random(b), RowEntry::Complement],
                0,
            )?,
            ReplacementRow::deterministic(vec![0, 0, 0]),
            ReplacementRow::deterministic(vec![0, 0, 0]),
        ],
        Configuration::new(initial.into()),
    )
}

/// The deterministic `[[-2, 2], [2, -2]]` scheme; tenable only from even counts.
pub fn plus_minus_two(initial: impl Into<Vec<u64>>) -> Result<UrnScheme> {
    UrnScheme::new(
        UrnScheme::default_colors(2),
        vec![
            ReplacementRow::deterministic(vec![-2, 2]),
            ReplacementRow::deterministic(vec![2, -2]),
        ],
        Configuration::new(initial.into()),
    )
}
