use std::sync::Arc;

use crate::error::{Error, Result};

/// Trial-division primality test; the primes handled here are small.
pub fn is_prime(n: i64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n % 2 == 0 || n % 3 == 0 {
        return false;
    }
    let mut d = 5;
    while d * d <= n {
        if n % d == 0 || n % (d + 2) == 0 {
            return false;
        }
        d += 6;
    }
    true
}

/// Primes in the inclusive range `[lo, hi]`.
pub fn primes_in(lo: i64, hi: i64) -> Vec<i64> {
    (lo.max(2)..=hi).filter(|&n| is_prime(n)).collect()
}

/// `base^exp mod m` for `m > 0`.
pub fn mod_pow(base: i64, exp: u64, m: i64) -> i64 {
    let m = m as i128;
    let mut b = (base as i128).rem_euclid(m);
    let mut e = exp;
    let mut acc: i128 = 1 % m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc as i64
}

fn prime_factors(mut n: i64) -> Vec<i64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn is_generator(g: i64, p: i64, factors: &[i64]) -> bool {
    factors.iter().all(|&q| mod_pow(g, ((p - 1) / q) as u64, p) != 1)
}

fn check_prime(p: i64) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p < 5 {
        return Err(Error::PrimeTooSmall(p));
    }
    Ok(())
}

/// Smallest primitive root mod `p`, shifted by `p` when it is even, so the
/// result is odd and still generates `(Z/pZ)^*`.
pub fn odd_primitive_root(p: i64) -> Result<i64> {
    check_prime(p)?;
    let factors = prime_factors(p - 1);
    let g = (2..p)
        .find(|&g| is_generator(g, p, &factors))
        .expect("every prime has a primitive root");
    Ok(if g % 2 == 0 { g + p } else { g })
}

/// Discrete logarithms base `g` modulo a prime `p`, precomputed as a table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscreteLog {
    p: u64,
    // log[x] for x in 1..p; log[0] is unused
    log: Vec<u32>,
}

impl DiscreteLog {
    pub fn new(g: i64, p: i64) -> Self {
        let mut log = vec![0u32; p as usize];
        let mut x = 1i64;
        for e in 0..(p - 1) {
            log[x as usize] = e as u32;
            x = x * g.rem_euclid(p) % p;
        }
        DiscreteLog { p: p as u64, log }
    }

    /// `log_g(x mod p)` in `[0, p - 1)`; `None` when `p | x`.
    pub fn log(&self, x: i64) -> Option<u64> {
        let r = x.rem_euclid(self.p as i64);
        (r != 0).then(|| self.log[r as usize] as u64)
    }
}

/// Per-prime data: the prime `p >= 5`, an odd generator `g`, the degree
/// `k = N_p = (p-1)/gcd(p-1, 12)` and `ell = gcd(p-1, 12)/2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeContext {
    pub p: u64,
    pub g: u64,
    pub k: u64,
    pub ell: u64,
    dlog: Arc<DiscreteLog>,
}

impl PrimeContext {
    pub fn p_i64(&self) -> i64 {
        self.p as i64
    }

    /// `N_p`, the degree of the maximal unramified subcover of `X_1(p) -> X_0(p)`.
    pub fn np(&self) -> u64 {
        self.k
    }

    /// Degree `2 N_p` of the cyclic covering being certified.
    pub fn degree(&self) -> u64 {
        2 * self.k
    }

    pub fn dlog(&self) -> &DiscreteLog {
        &self.dlog
    }

    pub fn p_mod_4(&self) -> u64 {
        self.p % 4
    }

    /// `g^e mod p`.
    pub fn g_pow_mod(&self, e: u64) -> i64 {
        mod_pow(self.g as i64, e, self.p as i64)
    }
}

/// Builds the [`PrimeContext`] for a prime `p >= 5`.
pub fn make_context(p: i64) -> Result<PrimeContext> {
    let g = odd_primitive_root(p)?;
    let d = num_integer::gcd(p - 1, 12);
    let k = (p - 1) / d;
    let ell = d / 2;
    debug_assert_eq!(k * ell, (p - 1) / 2);
    Ok(PrimeContext {
        p: p as u64,
        g: g as u64,
        k: k as u64,
        ell: ell as u64,
        dlog: Arc::new(DiscreteLog::new(g, p)),
    })
}
