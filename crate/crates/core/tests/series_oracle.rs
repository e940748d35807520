//! Taylor coefficients of the known explicit solutions against `taylor_solve`,
//! and rendered systems against golden files.

use num_bigint::BigInt;
use num_traits::One;

use urn_core::laurent::LaurentPoly;
use urn_core::presets;
use urn_core::series::{build_system, render_system, taylor_solve};
use urn_core::Rational;

const ORDER: usize = 10;

fn r(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn factorial(m: usize) -> Rational {
    Rational::from_integer((1..=m as u64).map(BigInt::from).product())
}

fn rat_pow(x: &Rational, m: usize) -> Rational {
    num_traits::pow(x.clone(), m)
}

/// `[t^m] (1 - θ u t)^{-1/θ} = u^m ∏_{i<m} (1 + iθ) / m!`
fn power_law_coefficient(u: &LaurentPoly, theta: u64, m: usize) -> LaurentPoly {
    let num: Rational = (0..m as u64)
        .map(|i| Rational::from_integer(BigInt::from(1 + i * theta)))
        .product();
    u.pow(m as u32).scale(&(num / factorial(m)))
}

#[test]
fn coupon_solution() {
    // X = y e^t + (x - y) e^{(1-p) t},  Y = y e^t
    let p = r(1, 3);
    let s = presets::coupon(p.clone(), [2, 1]).unwrap();
    let sol = taylor_solve(&build_system(&s), ORDER).unwrap();
    let x = LaurentPoly::var(2, 0);
    let y = LaurentPoly::var(2, 1);
    let q = Rational::one() - &p;
    for m in 0..=ORDER {
        let fm = factorial(m).recip();
        let expect_x = &y.scale(&fm) + &(&x - &y).scale(&(rat_pow(&q, m) * &fm));
        assert_eq!(sol[0].coefficient(m), &expect_x, "X, m = {m}");
        assert_eq!(sol[1].coefficient(m), &y.scale(&fm), "Y, m = {m}");
    }
}

#[test]
fn binomial_half_solution() {
    for theta in 1..=3u64 {
        let s = presets::binomial(theta, r(1, 2), [1, 1]).unwrap();
        let sol = taylor_solve(&build_system(&s), ORDER).unwrap();
        let x = LaurentPoly::var(2, 0);
        let y = LaurentPoly::var(2, 1);
        let u = (&x + &y).scale(&r(1, 2)).pow(theta as u32);
        for m in 0..=ORDER {
            let c = power_law_coefficient(&u, theta, m);
            assert_eq!(sol[0].coefficient(m), &(&x * &c), "theta {theta}, m = {m}");
            assert_eq!(sol[1].coefficient(m), &(&y * &c), "theta {theta}, m = {m}");
        }
    }
}

#[test]
fn uniform_solution() {
    for theta in 1..=3u64 {
        let s = presets::uniform(theta, [1, 1]).unwrap();
        let sol = taylor_solve(&build_system(&s), ORDER).unwrap();
        let x = LaurentPoly::var(2, 0);
        let y = LaurentPoly::var(2, 1);
        let u = LaurentPoly::from_terms(
            2,
            (0..=theta as i64).map(|l| (vec![l, theta as i64 - l], r(1, theta as i64 + 1))),
        );
        for m in 0..=ORDER {
            let c = power_law_coefficient(&u, theta, m);
            assert_eq!(sol[0].coefficient(m), &(&x * &c), "theta {theta}, m = {m}");
            assert_eq!(sol[1].coefficient(m), &(&y * &c), "theta {theta}, m = {m}");
        }
    }
}

#[test]
fn three_color_solution() {
    // X = (p y + (1-p) h)(e^t - 1) + x,  Y = y e^t,  H = h e^t
    let p = r(1, 3);
    let s = presets::three_color_coupon(p.clone(), [2, 1, 1]).unwrap();
    let sol = taylor_solve(&build_system(&s), ORDER).unwrap();
    let x = LaurentPoly::var(3, 0);
    let y = LaurentPoly::var(3, 1);
    let h = LaurentPoly::var(3, 2);
    let mix = &y.scale(&p) + &h.scale(&(Rational::one() - &p));
    for m in 0..=ORDER {
        let fm = factorial(m).recip();
        let expect_x = if m == 0 { x.clone() } else { mix.scale(&fm) };
        assert_eq!(sol[0].coefficient(m), &expect_x, "m = {m}");
        assert_eq!(sol[1].coefficient(m), &y.scale(&fm));
        assert_eq!(sol[2].coefficient(m), &h.scale(&fm));
    }
}

#[test]
fn negative_diagonal_below_minus_one_uses_reciprocals() {
    // θ = 0 scheme with a -2 diagonal: x' = x^{-1} y^2, y' = x^2 y^{-1}
    let s = presets::plus_minus_two([2, 2]).unwrap();
    let sys = build_system(&s);
    assert_eq!(render_system(&sys), "x' = x^-1*y^2\ny' = x^2*y^-1");
    let sol = taylor_solve(&sys, 4).unwrap();
    // X(t) = x + x^{-1} y^2 t + ...
    assert_eq!(
        sol[0].coefficient(1),
        &LaurentPoly::monomial(vec![-1, 2], Rational::one())
    );
}

fn golden(name: &str) -> String {
    let path = format!("{}/tests/data/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path)
        .unwrap_or_else(|e| panic!("{path}: {e}"))
        .trim_end()
        .to_string()
}

#[test]
fn golden_systems() {
    let cases = [
        ("coupon_p1_2.txt", presets::coupon(r(1, 2), [1, 1]).unwrap()),
        ("polya_friedman_p2_5.txt", presets::polya_friedman(r(2, 5), [1, 1]).unwrap()),
        ("binomial_theta2_p1_2.txt", presets::binomial(2, r(1, 2), [1, 1]).unwrap()),
        ("uniform_theta3.txt", presets::uniform(3, [1, 1]).unwrap()),
        ("three_color_p1_3.txt", presets::three_color_coupon(r(1, 3), [1, 0, 0]).unwrap()),
    ];
    for (file, scheme) in cases {
        assert_eq!(render_system(&build_system(&scheme)), golden(file), "{file}");
    }
}
