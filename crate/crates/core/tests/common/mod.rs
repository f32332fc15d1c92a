//! Test-side oracles, written without reference to the library's algorithms.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

fn factorial(n: u32) -> Q {
    (1..=n).fold(Q::one(), |acc, k| acc * Q::from_integer(BigInt::from(k)))
}

/// Rational bounds `[lo, hi]` on `e^t` for `0 <= t <= 1`: forty Taylor terms
/// plus the Lagrange remainder, bounded using `e^t <= 3`.
pub fn exp_bounds(t: &Q) -> (Q, Q) {
    assert!(*t >= Q::zero() && *t <= Q::one());
    let mut sum = Q::zero();
    let mut power = Q::one();
    for n in 0..40u32 {
        sum += &power / factorial(n);
        power *= t;
    }
    let rem = Q::from_integer(BigInt::from(3)) * power / factorial(40);
    (sum.clone(), sum + rem)
}

/// Bounds on `(cos t, sin t)` for `|t| <= 1`, forty terms of each series with
/// the alternating-series remainder.
pub fn cos_sin_bounds(t: &Q) -> ((Q, Q), (Q, Q)) {
    assert!(t.abs() <= Q::one());
    let mut cos = Q::zero();
    let mut sin = Q::zero();
    let mut power = Q::one();
    for n in 0..80u32 {
        let term = &power / factorial(n);
        match n % 4 {
            0 => cos += term,
            1 => sin += term,
            2 => cos -= term,
            _ => sin -= term,
        }
        power *= t;
    }
    // next terms: t^80/80! for cos, t^81/81! for sin
    let rc = power.abs() / factorial(80);
    let rs = (&power * t).abs() / factorial(81);
    ((&cos - &rc, &cos + &rc), (&sin - &rs, &sin + &rs))
}

/// All rationals `p/d` in `[lo, hi]` with `1 <= d <= max_den`.
pub fn grid(lo: &Q, hi: &Q, max_den: i64) -> Vec<Q> {
    let mut out = Vec::new();
    for d in 1..=max_den {
        let dq = Q::from_integer(BigInt::from(d));
        let mut p = (lo * &dq).ceil().to_integer();
        while Q::new(p.clone(), BigInt::from(d)) <= *hi {
            out.push(Q::new(p.clone(), BigInt::from(d)));
            p += 1;
        }
    }
    out.sort();
    out.dedup();
    out
}
