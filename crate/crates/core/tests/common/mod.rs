//! Brute-force oracles shared by the integration tests. Nothing here calls
//! the library's expansion code.

#![allow(dead_code)]

use eta_cover::arith::{rat, Rational};
use eta_cover::qexp::QSeries;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// `sum_{i < len} coeffs[i] q^{base + i}`, exact for `i < len`.
#[derive(Clone, Debug, PartialEq)]
pub struct Laurent {
    pub base: Rational,
    pub coeffs: Vec<BigInt>,
}

fn b2(x: &Rational) -> Rational {
    x * x - x + rat(1, 6)
}

impl Laurent {
    fn normalized(base: Rational, arr: Vec<BigInt>, len: usize) -> Self {
        let i0 = arr.iter().position(|c| !c.is_zero()).expect("nonzero product");
        assert!(i0 + len <= arr.len(), "oracle window too short");
        Laurent { base: base + Rational::from_integer(i0.into()), coeffs: arr[i0..i0 + len].to_vec() }
    }

    pub fn one(len: usize) -> Self {
        Laurent { base: Rational::zero(), coeffs: one_vec(len) }
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn mul(&self, o: &Self) -> Self {
        let len = self.len().min(o.len());
        let mut out = vec![BigInt::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate().take(len) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate().take(len - i) {
                out[i + j] += a * b;
            }
        }
        Laurent { base: &self.base + &o.base, coeffs: out }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut out = Laurent::one(self.len());
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    pub fn neg(&self) -> Self {
        Laurent { base: self.base.clone(), coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    /// Inverse of a series with leading coefficient `+-1`.
    pub fn inverse(&self) -> Self {
        let a0 = &self.coeffs[0];
        assert!(a0.abs().is_one());
        let len = self.len();
        let mut inv = vec![BigInt::zero(); len];
        inv[0] = a0.clone();
        for n in 1..len {
            let mut s = BigInt::zero();
            for k in 1..=n {
                s += &self.coeffs[k] * &inv[n - k];
            }
            inv[n] = -s * a0;
        }
        Laurent { base: -&self.base, coeffs: inv }
    }

    /// Nonzero terms with exponent below `bound`.
    pub fn terms_below(&self, bound: &Rational) -> Vec<(Rational, BigInt)> {
        let mut out = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            let e = &self.base + Rational::from_integer(i.into());
            if &e >= bound {
                break;
            }
            if !c.is_zero() {
                out.push((e, c.clone()));
            }
        }
        assert!(
            &self.base + Rational::from_integer(self.len().into()) >= *bound,
            "oracle shorter than the comparison bound"
        );
        out
    }

    /// Exact agreement with a library series below `bound`.
    pub fn agrees_with(&self, s: &QSeries, bound: &Rational) -> bool {
        assert!(s.truncation_order() >= bound, "library series truncated below the bound");
        let lib: Vec<(Rational, BigInt)> = s
            .terms()
            .filter(|(e, _)| e < bound)
            .map(|(e, c)| {
                assert!(c.is_integer(), "non-integral coefficient");
                (e, c.to_integer())
            })
            .collect();
        lib == self.terms_below(bound)
    }
}

fn one_vec(len: usize) -> Vec<BigInt> {
    let mut v = vec![BigInt::zero(); len];
    v[0] = BigInt::one();
    v
}

/// `E_g` at level `n`, `len` integer steps from its leading term, straight
/// from the product definition. The index is only reduced modulo `2n`; a
/// representative in `(n, 2n)` keeps its factor `1 - q^{n - g} = 1 - q^{-a}`,
/// so the sign of `E_{g+n} = -E_g` comes out of the arithmetic.
pub fn e_oracle(g: i64, n: i64, len: usize) -> Laurent {
    let r = g.rem_euclid(2 * n);
    assert!(r % n != 0, "index divisible by the level");
    let raw_lead = rat(n, 2) * b2(&rat(r, n));
    let offset = n as usize;
    let size = offset + len + n as usize + 2;
    let mut arr = vec![BigInt::zero(); size];
    arr[offset] = BigInt::one();
    let mut shifts = Vec::new();
    let mut m = 1i64;
    loop {
        let s1 = n * (m - 1) + r;
        let s2 = n * m - r;
        if s1.min(s2) >= size as i64 {
            break;
        }
        shifts.push(s1);
        shifts.push(s2);
        m += 1;
    }
    // the one negative shift first, while the array is still a monomial
    shifts.sort();
    for s in shifts {
        if s < 0 {
            let a = (-s) as usize;
            for i in 0..size - a {
                let t = arr[i + a].clone();
                arr[i] -= t;
            }
        } else {
            let s = s as usize;
            for i in (s..size).rev() {
                let t = arr[i - s].clone();
                arr[i] -= t;
            }
        }
    }
    let base = raw_lead - Rational::from_integer((offset as i64).into());
    Laurent::normalized(base, arr, len)
}

/// `eta(s tau) = q^{s/24} prod (1 - q^{s n})`.
pub fn eta_oracle(s: i64, len: usize) -> Laurent {
    let mut arr = one_vec(len);
    let mut step = s as usize;
    while step < len {
        for i in (step..len).rev() {
            let t = arr[i - step].clone();
            arr[i] -= t;
        }
        step += s as usize;
    }
    Laurent { base: rat(s, 24), coeffs: arr }
}

/// `prod E_{g_i}^{e_i}` (nonnegative exponents) at level `n`.
pub fn product_oracle(factors: &[(i64, u32)], n: i64, len: usize) -> Laurent {
    let mut out = Laurent::one(len);
    for &(g, e) in factors {
        out = out.mul(&e_oracle(g, n, len).pow(e));
    }
    out
}

/// Smallest generator of `(Z/p)^*`, moved to the odd representative.
pub fn odd_generator(p: i64) -> i64 {
    let order = |g: i64| {
        let mut x = g % p;
        let mut k = 1;
        while x != 1 {
            x = x * g % p;
            k += 1;
        }
        k
    };
    let g = (2..p).find(|&g| order(g) == p - 1).unwrap();
    if g % 2 == 0 {
        g + p
    } else {
        g
    }
}

/// `(k, ell)` with `k = (p-1)/gcd(p-1,12)`, `ell = gcd(p-1,12)/2`.
pub fn k_ell(p: i64) -> (i64, i64) {
    let mut a = p - 1;
    let mut b = 12;
    while b != 0 {
        (a, b) = (b, a % b);
    }
    ((p - 1) / a, a / 2)
}

/// Factors of `F_h` as raw integer indices (`g^{jk} h` taken mod `2p`) and
/// the common exponent `6/ell`.
pub fn f_factors(h: i64, p: i64) -> Vec<(i64, u32)> {
    let (k, ell) = k_ell(p);
    let g = odd_generator(p);
    let m = 2 * p;
    let mut gk = 1i64;
    for _ in 0..k {
        gk = gk * g % m;
    }
    let mut idx = h.rem_euclid(m);
    let mut out = Vec::new();
    for _ in 0..ell {
        out.push((idx, (6 / ell) as u32));
        idx = idx * gk % m;
    }
    out
}

pub fn primes(lo: i64, hi: i64) -> Vec<i64> {
    (lo..=hi).filter(|&n| n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0)).collect()
}
