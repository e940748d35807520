//! Invariants over randomly generated small schemes.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;

use urn_core::exact::{evolve, kernel_total, marginal_pmf};
use urn_core::oracle::{brute_force_pmf, DEFAULT_CAP};
use urn_core::series::{build_system, q_coefficients, state_polynomial, taylor_solve};
use urn_core::simulate::simulate_history;
use urn_core::tenability::{check_tenability, Verdict};
use urn_core::{validate_balance, Configuration, Rational, ReplacementRow, UrnScheme};

/// Balanced scheme with nonnegative off-diagonal entries; the diagonal
/// absorbs the rest and may be negative.
fn scheme_strategy() -> impl Strategy<Value = UrnScheme> {
    (2usize..=3, 0i64..=2).prop_flat_map(|(k, theta)| {
        let realization = proptest::collection::vec(0i64..=2, k - 1);
        let row = proptest::collection::vec((realization, 1u32..=4), 1..=3);
        (
            proptest::collection::vec(row, k),
            proptest::collection::vec(0u64..=3, k),
            Just(theta),
        )
            .prop_filter_map("empty urn", move |(rows, initial, theta)| {
                if initial.iter().sum::<u64>() == 0 {
                    return None;
                }
                let rows = rows
                    .into_iter()
                    .enumerate()
                    .map(|(i, table)| {
                        let total: u32 = table.iter().map(|(_, w)| w).sum();
                        let mut merged = std::collections::BTreeMap::new();
                        for (off, w) in table {
                            let mut v = Vec::with_capacity(k);
                            let mut off = off.into_iter();
                            for j in 0..k {
                                v.push(if j == i { 0 } else { off.next().unwrap() });
                            }
                            v[i] = theta - v.iter().sum::<i64>();
                            *merged.entry(v).or_insert(0u32) += w;
                        }
                        ReplacementRow::table(merged.into_iter().map(|(v, w)| {
                            (v, Rational::new(BigInt::from(w), BigInt::from(total)))
                        }))
                        .unwrap()
                    })
                    .collect();
                UrnScheme::new(UrnScheme::default_colors(k), rows, Configuration::new(initial)).ok()
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn every_realization_sums_to_theta(scheme in scheme_strategy()) {
        let theta = validate_balance(scheme.rows()).unwrap();
        prop_assert_eq!(theta, scheme.theta());
        for row in scheme.rows() {
            for (v, _) in row.realizations() {
                prop_assert_eq!(v.iter().sum::<i64>(), theta as i64);
            }
        }
    }

    #[test]
    fn zero_balance_verdict_is_exact(scheme in scheme_strategy()) {
        let report = check_tenability(&scheme, 6);
        if scheme.theta() == 0 {
            prop_assert!(report.verdict != Verdict::TenableUpToHorizon);
        }
        if let Some(w) = &report.witness {
            prop_assert_eq!(report.verdict, Verdict::Untenable);
            if !w.steps.is_empty() {
                prop_assert!(w.replays(&scheme));
            }
        }
    }

    #[test]
    fn engines_agree(scheme in scheme_strategy(), n in 0usize..=4) {
        let report = check_tenability(&scheme, n);
        match evolve(&scheme, n) {
            Err(_) => {
                prop_assert_eq!(report.verdict, Verdict::Untenable);
                let w = report.witness.unwrap();
                prop_assert!(!w.steps.is_empty() && w.steps.len() <= n);
                prop_assert!(w.replays(&scheme));
            }
            Ok(state) => {
                prop_assert!(report.verdict != Verdict::Untenable || report.witness.is_some());
                let total = scheme.total_at(n);
                prop_assert!(state.weights().all(|(c, w)| c.total() == total && w > Rational::zero()));
                let kernel = Rational::from_integer(kernel_total(scheme.initial_total(), scheme.theta(), n));
                prop_assert_eq!(state.total_weight(), kernel.clone());
                for color in 0..scheme.k() {
                    let pmf = marginal_pmf(&state, color);
                    prop_assert_eq!(pmf.values().sum::<Rational>(), Rational::one());
                    prop_assert_eq!(&pmf, &brute_force_pmf(&scheme, n, color, DEFAULT_CAP).unwrap());
                }
                let order = n.max(1);
                let sol = taylor_solve(&build_system(&scheme), order).unwrap();
                let q = q_coefficients(&sol, scheme.initial(), n).unwrap();
                prop_assert_eq!(&q[n], &state_polynomial(&state, scheme.k()));
                prop_assert_eq!(q[n].eval_ones(), kernel);
            }
        }
    }

    #[test]
    fn trajectories_are_legal(scheme in scheme_strategy(), seed in any::<u64>()) {
        if let Ok(t) = simulate_history(&scheme, 12, seed) {
            prop_assert!(t.is_consistent_with(&scheme));
            prop_assert_eq!(t.steps(), 12);
        }
    }

    #[test]
    fn kernel_is_gamma_ratio(s0 in 1u64..=6, theta in 1u64..=3, n in 0usize..=10) {
        // θ^n Γ(n + s0/θ) / Γ(s0/θ) = θ^n ∏_{i<n} (s0/θ + i)
        let ratio: Rational = (0..n as u64)
            .map(|i| Rational::new(BigInt::from(s0), BigInt::from(theta)) + Rational::from_integer(BigInt::from(i)))
            .product::<Rational>()
            * Rational::from_integer(num_traits::pow(BigInt::from(theta), n));
        prop_assert_eq!(Rational::from_integer(kernel_total(s0, theta, n)), ratio);
    }
}

#[test]
fn empty_product_is_one() {
    assert!(kernel_total(5, 2, 0).is_one());
    assert!(!kernel_total(5, 2, 1).is_zero());
}
