//! Brute-force history enumeration.
//!
//! Walks every length-`n` sequence of (drawn color, rule realization) choices
//! depth first and multiplies the step probabilities `c_i / s · p_v` along each
//! path. No configurations are merged, so it shares nothing with the
//! weighted-state engine beyond the scheme itself.

use alloc::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Result, UrnError};
use crate::scheme::{Configuration, UrnScheme};
use crate::{Pmf, Rational};

pub const DEFAULT_CAP: usize = 8;

/// Marginal law of `color` after `n` draws by full enumeration.
pub fn brute_force_pmf(scheme: &UrnScheme, n: usize, color: usize, cap: usize) -> Result<Pmf> {
    if n > cap {
        return Err(UrnError::CapExceeded { n, cap });
    }
    scheme.check_color(color)?;
    let mut acc: Pmf = BTreeMap::new();
    walk(scheme, scheme.initial(), Rational::one(), n, color, &mut acc)?;
    acc.retain(|_, p| !p.is_zero());
    Ok(acc)
}

fn walk(
    scheme: &UrnScheme,
    config: &Configuration,
    prob: Rational,
    remaining: usize,
    color: usize,
    acc: &mut Pmf,
) -> Result<()> {
    if remaining == 0 {
        *acc.entry(config.count(color)).or_insert_with(Rational::zero) += prob;
        return Ok(());
    }
    let total = BigInt::from(config.total());
    for drawn in 0..scheme.k() {
        let count = config.count(drawn);
        if count == 0 {
            continue;
        }
        let pick = Rational::new(BigInt::from(count), total.clone());
        for (v, p) in scheme.row(drawn).realizations() {
            let next = config.apply(v).ok_or_else(|| UrnError::NegativeCount {
                configuration: config.clone(),
                color: drawn,
                realization: v.clone(),
            })?;
            walk(scheme, &next, &prob * &pick * p, remaining - 1, color, acc)?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{evolve, marginal_pmf};
    use crate::presets;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn zero_steps_point_mass() {
        let s = presets::coupon(r(1, 3), [4, 2]).unwrap();
        let pmf = brute_force_pmf(&s, 0, 0, DEFAULT_CAP).unwrap();
        assert_eq!(pmf.len(), 1);
        assert_eq!(pmf[&4], r(1, 1));
    }

    #[test]
    fn cap_enforced() {
        let s = presets::coupon(r(1, 3), [4, 2]).unwrap();
        assert_eq!(
            brute_force_pmf(&s, 9, 0, DEFAULT_CAP),
            Err(UrnError::CapExceeded { n: 9, cap: 8 })
        );
        assert!(brute_force_pmf(&s, 1, 2, DEFAULT_CAP).is_err());
    }

    #[test]
    fn matches_engine_on_polya_friedman() {
        let s = presets::polya_friedman(r(1, 2), [1, 1]).unwrap();
        let brute = brute_force_pmf(&s, 2, 0, DEFAULT_CAP).unwrap();
        assert_eq!(brute, marginal_pmf(&evolve(&s, 2).unwrap(), 0));
    }
}
