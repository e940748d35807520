//! Exact engine against closed forms, brute force, and a mixture-of-rules DP.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use urn_core::closed_forms::{
    binomial_half_pmf, coupon_delay_pmf, two_type_coupon_red_pmf, two_type_coupon_red_pmf_general,
    uniform_pmf, ClosedForm,
};
use urn_core::exact::{evolve, marginal_pmf, mean_variance};
use urn_core::oracle::{brute_force_pmf, DEFAULT_CAP};
use urn_core::{presets, Configuration, Rational, ReplacementRow, UrnScheme};

fn r(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn engine_pmf(scheme: &UrnScheme, n: usize, color: usize) -> BTreeMap<u64, Rational> {
    marginal_pmf(&evolve(scheme, n).unwrap(), color)
}

#[test]
fn coupon_delay_matches_engine() {
    for p in [r(1, 4), r(1, 2), r(1, 1)] {
        for (b0, w0) in [(1, 0), (2, 0), (3, 2)] {
            let s = presets::coupon(p.clone(), [b0, w0]).unwrap();
            for n in 0..=8usize {
                let pmf = engine_pmf(&s, n, 0);
                for b in 0..=b0 {
                    let expected = pmf.get(&b).cloned().unwrap_or_else(Rational::zero);
                    assert_eq!(coupon_delay_pmf(b0, w0, &p, n as u64, b as i64).unwrap(), expected);
                }
            }
        }
    }
}

#[test]
fn coupon_delay_at_one_matches_brute_force() {
    let s = presets::coupon(r(1, 1), [3, 1]).unwrap();
    for n in 0..=6usize {
        let bf = brute_force_pmf(&s, n, 0, DEFAULT_CAP).unwrap();
        for b in 0..=3u64 {
            let expected = bf.get(&b).cloned().unwrap_or_else(Rational::zero);
            assert_eq!(coupon_delay_pmf(3, 1, &r(1, 1), n as u64, b as i64).unwrap(), expected);
        }
    }
}

#[test]
fn binomial_half_and_uniform_match_engine() {
    for theta in 1..=3u64 {
        let half = presets::binomial(theta, r(1, 2), [2, 1]).unwrap();
        let unif = presets::uniform(theta, [2, 1]).unwrap();
        for n in 0..=6usize {
            let a = engine_pmf(&half, n, 0);
            let b = engine_pmf(&unif, n, 0);
            for v in 2..=2 + theta * n as u64 {
                let z = Rational::zero();
                assert_eq!(binomial_half_pmf(theta, 2, 1, n as u64, v as i64).unwrap(), *a.get(&v).unwrap_or(&z));
                assert_eq!(uniform_pmf(theta, 2, 1, n as u64, v as i64).unwrap(), *b.get(&v).unwrap_or(&z));
            }
        }
    }
}

#[test]
fn uniform_theta_two_small_case() {
    // (1 + x + x^2)^2 = 1 + 2x + 3x^2 + 2x^3 + x^4
    let d = ClosedForm::Uniform { theta: 2, b0: 1, w0: 1 }.distribution(2).unwrap();
    let expected: Vec<_> = [(1, 1), (2, 2), (3, 3), (4, 2), (5, 1)]
        .into_iter()
        .map(|(b, c)| (b, r(c, 9)))
        .collect();
    assert_eq!(d.into_iter().collect::<Vec<_>>(), expected);
}

#[test]
fn two_type_red_one_step() {
    let p = r(1, 3);
    assert_eq!(two_type_coupon_red_pmf(1, 0, 0, &p, 1, 1).unwrap(), p);
    assert_eq!(two_type_coupon_red_pmf_general(1, 0, 0, &p, 1, 1).unwrap(), p);
}

#[test]
fn two_type_red_formulas_against_engine() {
    // The published form agrees from an all-black start; the general form
    // (which conditions on r0 and g0) agrees everywhere.
    for p in [r(1, 4), r(1, 3), r(1, 2)] {
        for init in [[1u64, 0, 0], [3, 0, 0], [2, 1, 1], [3, 0, 2]] {
            let s = presets::three_color_coupon(p.clone(), init).unwrap();
            for n in 0..=6usize {
                let pmf = engine_pmf(&s, n, 1);
                let [b0, r0, g0] = init;
                for red in 0..=b0 + r0 {
                    let z = Rational::zero();
                    let exact = pmf.get(&red).unwrap_or(&z);
                    let general = two_type_coupon_red_pmf_general(b0, r0, g0, &p, n as u64, red as i64).unwrap();
                    assert_eq!(&general, exact, "general {init:?} p={p} n={n} r={red}");
                    if r0 == 0 && g0 == 0 {
                        let published = two_type_coupon_red_pmf(b0, r0, g0, &p, n as u64, red as i64).unwrap();
                        assert_eq!(&published, exact, "published {init:?} p={p} n={n} r={red}");
                    }
                }
            }
        }
    }
}

/// Each step applies the Pólya-Eggenberger rule with probability p and the
/// Friedman rule otherwise, whichever color is drawn.
fn mixture_dp(p: &Rational, init: [u64; 2], n: usize) -> BTreeMap<u64, Rational> {
    let rules: [(Rational, [[u64; 2]; 2]); 2] = [
        (p.clone(), [[1, 0], [0, 1]]),
        (Rational::one() - p, [[0, 1], [1, 0]]),
    ];
    let mut dist: BTreeMap<[u64; 2], Rational> = [(init, Rational::one())].into_iter().collect();
    for _ in 0..n {
        let mut next = BTreeMap::new();
        for (c, w) in &dist {
            let s = Rational::from_integer(BigInt::from(c[0] + c[1]));
            for color in 0..2 {
                if c[color] == 0 {
                    continue;
                }
                let draw = Rational::from_integer(BigInt::from(c[color])) / &s;
                for (q, m) in &rules {
                    if q.is_zero() {
                        continue;
                    }
                    let add = m[color];
                    let to = [c[0] + add[0], c[1] + add[1]];
                    *next.entry(to).or_insert_with(Rational::zero) += w * &draw * q;
                }
            }
        }
        dist = next;
    }
    let mut out = BTreeMap::new();
    for (c, w) in dist {
        *out.entry(c[0]).or_insert_with(Rational::zero) += w;
    }
    out
}

#[test]
fn polya_friedman_is_a_rule_mixture() {
    for p in [r(0, 1), r(2, 5), r(4, 5), r(1, 1)] {
        let s = presets::polya_friedman(p.clone(), [2, 1]).unwrap();
        for n in 0..=8 {
            assert_eq!(engine_pmf(&s, n, 0), mixture_dp(&p, [2, 1], n), "p = {p}, n = {n}");
        }
    }
}

#[test]
fn polya_friedman_endpoints_are_deterministic_urns() {
    let det = |m: [[i64; 2]; 2]| {
        UrnScheme::new(
            UrnScheme::default_colors(2),
            m.iter().map(|row| ReplacementRow::deterministic(row.to_vec())).collect(),
            Configuration::new(vec![1, 2]),
        )
        .unwrap()
    };
    let polya = det([[1, 0], [0, 1]]);
    let friedman = det([[0, 1], [1, 0]]);
    for n in 0..=12 {
        let at_one = presets::polya_friedman(r(1, 1), [1, 2]).unwrap();
        let at_zero = presets::polya_friedman(r(0, 1), [1, 2]).unwrap();
        assert_eq!(evolve(&at_one, n).unwrap(), evolve(&polya, n).unwrap());
        assert_eq!(evolve(&at_zero, n).unwrap(), evolve(&friedman, n).unwrap());
    }
    // Pólya-Eggenberger from (1,1): uniform on 1..=n+1
    let pe = presets::polya_friedman(r(1, 1), [1, 1]).unwrap();
    let pmf = engine_pmf(&pe, 20, 0);
    assert_eq!(pmf.len(), 21);
    assert!(pmf.values().all(|v| *v == r(1, 21)));
}

#[test]
fn binomial_mean_and_variance() {
    // B_n = 1 + Bin(n, 1/2) for θ = 1, p = 1/2
    let s = presets::binomial(1, r(1, 2), [1, 1]).unwrap();
    let (mean, var) = mean_variance(&engine_pmf(&s, 10, 0));
    assert_eq!(mean, r(6, 1));
    assert_eq!(var, r(5, 2));
}
