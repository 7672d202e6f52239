//! Exact rational arithmetic and the small number-theoretic helpers the rest
//! of the crate is built on.
//!
//! - [`Rational`]: arbitrary-precision rationals (always in lowest terms)
//! - [`bernoulli_b`] / [`sawtooth_p2`]: second Bernoulli polynomial and its periodization
//! - [`RootOfUnity`]: symbolic `e^{2 pi i n / M}`
//! - [`PrimeContext`]: the per-prime data `(p, g, k, ell)` plus a discrete-log table

mod primes;
mod root;

pub use primes::{
    is_prime, make_context, mod_pow, odd_primitive_root, primes_in, DiscreteLog, PrimeContext,
};
pub use root::RootOfUnity;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;

/// Exact rational number in lowest terms with positive denominator.
pub type Rational = num_rational::BigRational;

/// `n / d` as a [`Rational`]. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Integer as a [`Rational`].
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Fractional part `{x} = x - floor(x)`, always in `[0, 1)`.
pub fn frac(x: &Rational) -> Rational {
    x - x.floor()
}

/// Second Bernoulli polynomial `B(x) = x^2 - x + 1/6`.
pub fn bernoulli_b(x: &Rational) -> Rational {
    x * x - x + rat(1, 6)
}

/// Second Bernoulli function `P_2(x) = {x}^2 - {x} + 1/6`.
pub fn sawtooth_p2(x: &Rational) -> Rational {
    bernoulli_b(&frac(x))
}

/// Non-negative gcd of two machine integers.
pub fn gcd(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}

/// Returns `(g, x, y)` with `a x + b y = g = gcd(a, b) >= 0`.
pub fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    let e = a.extended_gcd(&b);
    if e.gcd < 0 {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn mod_inv(a: i64, m: i64) -> Option<i64> {
    let (g, x, _) = ext_gcd(a.rem_euclid(m), m);
    (g == 1).then(|| x.rem_euclid(m))
}

/// True when the rational is an integer.
pub fn is_integer(x: &Rational) -> bool {
    x.denom().is_one()
}

/// Integer value of `x` as `i64`, if `x` is an integer that fits.
pub fn to_i64(x: &Rational) -> Option<i64> {
    use num_traits::ToPrimitive;
    if is_integer(x) {
        x.numer().to_i64()
    } else {
        None
    }
}

/// `x` as a double; only used at the numeric boundary.
pub fn to_f64(x: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap_or_else(|| {
        // extreme magnitudes: fall back to a scaled division
        let n = x.numer().to_f64().unwrap_or(f64::NAN);
        let d = x.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Smallest positive multiple `m` such that `m * x` is an integer (the denominator).
pub fn denom_u64(x: &Rational) -> u64 {
    use num_traits::ToPrimitive;
    x.denom().to_u64().expect("denominator fits in u64")
}
