//! Generalized Dedekind eta functions and the eta products built from them.
//!
//! For a level `N` and an integer `g` not divisible by `N`,
//!
//! ```text
//! E_g(tau) = q^{N B(g/N) / 2} prod_{m >= 1} (1 - q^{N(m-1)+g}) (1 - q^{Nm-g})
//! ```
//!
//! satisfies `E_{g+N} = E_{-g} = -E_g`, hence also `E_{N-g} = E_g`. Every
//! index is therefore `+-` an index in `[1, N/2]`; [`reduce_index`] finds it.
//!
//! Products `prod E_g^{e_g}` are kept symbolically as [`EtaProduct`] and
//! expanded with a dense integer kernel: after factoring out the leading
//! power of `q`, every function here is a product of `(1 - q^n)^{e_n}`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::arith::{bernoulli_b, int, is_prime, rat, sawtooth_p2, PrimeContext, Rational};
use crate::congruence::SL2Matrix;
use crate::error::{Error, Result};
use crate::qexp::{from_dense_integers, QSeries};

/// Lattice denominator used for level `N` expansions.
pub fn lattice_for_level(level: u64) -> u64 {
    24 * level
}

/// `E_g = sign * E_{g_reduced}` with `g_reduced` in `[1, N/2]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct EtaIndex {
    pub level: u64,
    pub g_reduced: u64,
    pub sign: i32,
}

/// Reduces `g` using `E_{g+N} = -E_g` and `E_{-g} = -E_g`.
pub fn reduce_index(g: impl Into<BigInt>, level: u64) -> Result<EtaIndex> {
    let g: BigInt = g.into();
    if level < 2 {
        return Err(Error::BadLevel(level));
    }
    let n = BigInt::from(level);
    let (q, r) = g.div_mod_floor(&n);
    if r.is_zero() {
        return Err(Error::ZeroIndex { g: g.to_string(), level });
    }
    let sign = if q.is_odd() { -1 } else { 1 };
    let mut r = r.to_u64().expect("residue fits in u64");
    if 2 * r > level {
        // E_r = E_{-(N-r) + N} = -E_{-(N-r)} = E_{N-r}
        r = level - r;
    }
    Ok(EtaIndex { level, g_reduced: r, sign })
}

/// Leading exponent `N B(g/N) / 2` of `E_g`.
pub fn e_leading_exponent(g: i64, level: u64) -> Rational {
    let n = level as i64;
    int(n) * bernoulli_b(&rat(g, n)) / int(2)
}

/// Multiset of factors `(1 - q^n)^{e_n}`.
#[derive(Clone, Debug, Default)]
struct FactorTable(BTreeMap<u64, i64>);

impl FactorTable {
    fn add(&mut self, n: u64, e: i64) {
        if n == 0 || e == 0 {
            return;
        }
        let v = self.0.entry(n).or_insert(0);
        *v += e;
        if *v == 0 {
            self.0.remove(&n);
        }
    }

    /// Factors of `E_g` (times `e`) with exponent below `len`.
    fn add_e(&mut self, g: u64, level: u64, e: i64, len: u64) {
        let mut m = 1u64;
        loop {
            let a = level * (m - 1) + g;
            let b = level * m - g;
            if a >= len && b >= len {
                break;
            }
            if a < len {
                self.add(a, e);
            }
            if b < len {
                self.add(b, e);
            }
            m += 1;
        }
    }

    fn add_eta(&mut self, scale: u64, e: i64, len: u64) {
        let mut n = scale;
        while n < len {
            self.add(n, e);
            n += scale;
        }
    }

    /// Dense coefficients of `prod (1 - q^n)^{e_n}` for exponents `0..len`.
    fn expand(&self, len: u64) -> Vec<BigInt> {
        let len = len as usize;
        let mut c = vec![BigInt::zero(); len];
        if len == 0 {
            return c;
        }
        c[0] = BigInt::one();
        for (&n, &e) in &self.0 {
            let n = n as usize;
            if n >= len {
                continue;
            }
            if e > 0 {
                for _ in 0..e {
                    for j in (n..len).rev() {
                        let t = c[j - n].clone();
                        c[j] -= t;
                    }
                }
            } else {
                // multiply by 1 / (1 - q^n) = 1 + q^n + q^{2n} + ...
                for _ in 0..(-e) {
                    for j in n..len {
                        let t = c[j - n].clone();
                        c[j] += t;
                    }
                }
            }
        }
        c
    }
}

/// Number of integer steps `j >= 0` with `lead + j < bound`.
fn steps_below(lead: &Rational, bound: &Rational) -> u64 {
    let rel = bound - lead;
    if rel <= Rational::zero() {
        0
    } else {
        rel.ceil().to_integer().to_u64().expect("precision fits in u64")
    }
}

fn expand_table(
    denom: u64,
    lead: &Rational,
    table: &FactorTable,
    len: u64,
    bound: &Rational,
    sign: i32,
) -> QSeries {
    let mut coeffs = table.expand(len);
    if sign < 0 {
        for c in coeffs.iter_mut() {
            *c = -&*c;
        }
    }
    from_dense_integers(denom, lead, &coeffs, &(bound - lead))
}

/// Exact expansion of `E_g` at level `N` up to (excluding) `q^bound`.
/// Requires `1 <= g <= N - 1`.
pub fn expand_e(g: i64, level: u64, bound: &Rational) -> Result<QSeries> {
    if level < 2 {
        return Err(Error::BadLevel(level));
    }
    if g < 1 || g as u64 >= level {
        return Err(Error::UnreducedIndex { g, max: level - 1 });
    }
    let lead = e_leading_exponent(g, level);
    let len = steps_below(&lead, bound);
    let mut t = FactorTable::default();
    t.add_e(g as u64, level, 1, len);
    Ok(expand_table(lattice_for_level(level), &lead, &t, len, bound, 1))
}

/// Expansion of `eta(s tau) = q^{s/24} prod_{m >= 1} (1 - q^{s m})`.
pub fn expand_eta(scale: u64, bound: &Rational) -> QSeries {
    assert!(scale > 0, "eta scale must be positive");
    let lead = rat(scale as i64, 24);
    let len = steps_below(&lead, bound);
    let mut t = FactorTable::default();
    t.add_eta(scale, 1, len);
    expand_table(24, &lead, &t, len, bound, 1)
}

/// A formal product `sign * prod_g E_g^{e_g}` at level `N`, with every
/// index reduced into `[1, N/2]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EtaProduct {
    level: u64,
    exponents: BTreeMap<u64, i64>,
    sign: i32,
    label: String,
}

impl EtaProduct {
    /// The empty product (the constant `1`).
    pub fn one(level: u64, label: impl Into<String>) -> Self {
        EtaProduct { level, exponents: BTreeMap::new(), sign: 1, label: label.into() }
    }

    /// Builds `prod E_{g_i}^{e_i}` from unreduced indices.
    pub fn from_factors<I, G>(level: u64, label: impl Into<String>, factors: I) -> Result<Self>
    where
        I: IntoIterator<Item = (G, i64)>,
        G: Into<BigInt>,
    {
        let mut out = Self::one(level, label);
        for (g, e) in factors {
            out.push_factor(g, e)?;
        }
        Ok(out)
    }

    /// Multiplies in `E_g^e`, folding the reduction sign into the global sign.
    pub fn push_factor(&mut self, g: impl Into<BigInt>, e: i64) -> Result<()> {
        let idx = reduce_index(g, self.level)?;
        if idx.sign < 0 && e.rem_euclid(2) == 1 {
            self.sign = -self.sign;
        }
        let v = self.exponents.entry(idx.g_reduced).or_insert(0);
        *v += e;
        if *v == 0 {
            self.exponents.remove(&idx.g_reduced);
        }
        Ok(())
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn sign(&self) -> i32 {
        self.sign
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn exponents(&self) -> &BTreeMap<u64, i64> {
        &self.exponents
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        out.sign = -out.sign;
        out
    }

    pub fn pow(&self, n: i64) -> Self {
        let sign = if self.sign < 0 && n.rem_euclid(2) == 1 { -1 } else { 1 };
        EtaProduct {
            level: self.level,
            exponents: if n == 0 {
                BTreeMap::new()
            } else {
                self.exponents.iter().map(|(&g, &e)| (g, e * n)).collect()
            },
            sign,
            label: format!("({})^{}", self.label, n),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.level, other.level, "eta products must share a level");
        let mut exponents = self.exponents.clone();
        for (&g, &e) in &other.exponents {
            let v = exponents.entry(g).or_insert(0);
            *v += e;
            if *v == 0 {
                exponents.remove(&g);
            }
        }
        EtaProduct {
            level: self.level,
            exponents,
            sign: self.sign * other.sign,
            label: format!("{}*{}", self.label, other.label),
        }
    }

    /// Same symbol up to the global sign.
    pub fn same_factors(&self, other: &Self) -> bool {
        self.level == other.level && self.exponents == other.exponents
    }

    /// `sum_g e_g`.
    pub fn total_exponent(&self) -> i64 {
        self.exponents.values().sum()
    }

    /// Leading exponent of the expansion at infinity.
    pub fn leading_exponent(&self) -> Rational {
        self.exponents
            .iter()
            .map(|(&g, &e)| int(e) * e_leading_exponent(g as i64, self.level))
            .fold(Rational::zero(), |a, b| a + b)
    }

    /// Exact expansion up to (excluding) `q^bound`, including the global sign.
    pub fn expand(&self, bound: &Rational) -> QSeries {
        let lead = self.leading_exponent();
        let len = steps_below(&lead, bound);
        let mut t = FactorTable::default();
        for (&g, &e) in &self.exponents {
            t.add_e(g, self.level, e, len);
        }
        expand_table(lattice_for_level(self.level), &lead, &t, len, bound, self.sign)
    }

    /// Expansion to `steps` integer powers of `q` past the leading exponent.
    pub fn expand_steps(&self, steps: u64) -> QSeries {
        self.expand(&(self.leading_exponent() + int(steps as i64)))
    }
}

impl fmt::Display for EtaProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.sign < 0 {
            write!(f, "-")?;
        }
        if self.exponents.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> =
            self.exponents.iter().map(|(g, e)| format!("E{g}^{e}")).collect();
        write!(f, "{}", parts.join("*"))
    }
}

/// Exact expansion of an eta product (free-function form).
pub fn expand_product(prod: &EtaProduct, bound: &Rational) -> QSeries {
    prod.expand(bound)
}

/// `g^e * h` as an exact integer.
fn g_power_times(g: u64, e: u64, h: &BigInt) -> BigInt {
    num_traits::pow(BigInt::from(g), e as usize) * h
}

/// `F_h = (prod_{j=0}^{ell-1} E_{g^{jk} h})^{6/ell}` at level `p`, with the
/// indices `g^{jk} h` taken as exact integers.
pub fn build_f(h: impl Into<BigInt>, ctx: &PrimeContext) -> Result<EtaProduct> {
    let h: BigInt = h.into();
    let p = BigInt::from(ctx.p);
    if (&h % &p).is_zero() {
        return Err(Error::ZeroIndex { g: h.to_string(), level: ctx.p });
    }
    assert!(6 % ctx.ell == 0, "ell divides 6");
    let e = (6 / ctx.ell) as i64;
    let mut prod = EtaProduct::one(ctx.p, format!("F_{h}"));
    for j in 0..ctx.ell {
        prod.push_factor(g_power_times(ctx.g, j * ctx.k, &h), e)?;
    }
    Ok(prod)
}

fn check_eleven_mod_twelve(p: u64) -> Result<()> {
    if !is_prime(p as i64) {
        return Err(Error::NotPrime(p as i64));
    }
    if p % 12 != 11 {
        return Err(Error::NotElevenModTwelve(p));
    }
    Ok(())
}

/// `G_h = (E_{h1} E_{h2} E_{h3})^2` for `p = 11 mod 12` and
/// `h1^2 + h2^2 + h3^2 = 0 mod p`.
pub fn build_g(triplet: (i64, i64, i64), p: u64) -> Result<EtaProduct> {
    check_eleven_mod_twelve(p)?;
    let pi = p as i64;
    let (h1, h2, h3) = triplet;
    for h in [h1, h2, h3] {
        if h.rem_euclid(pi) == 0 {
            return Err(Error::TripletZeroEntry(h));
        }
    }
    let s = (h1 as i128).pow(2) + (h2 as i128).pow(2) + (h3 as i128).pow(2);
    if s.rem_euclid(pi as i128) != 0 {
        return Err(Error::TripletNotIsotropic(s as i64));
    }
    EtaProduct::from_factors(p, format!("G_({h1},{h2},{h3})"), [(h1, 2), (h2, 2), (h3, 2)])
}

/// Lexicographically smallest `1 <= h1 <= h2 <= h3 <= (p-1)/2` with
/// `h1^2 + h2^2 + h3^2 = 0 mod p`.
pub fn find_triplet(p: u64) -> Result<(i64, i64, i64)> {
    check_eleven_mod_twelve(p)?;
    let p = p as i64;
    let half = (p - 1) / 2;
    // smallest square root in [1, half] of each residue
    let mut root = vec![0i64; p as usize];
    for x in (1..=half).rev() {
        root[(x * x % p) as usize] = x;
    }
    for h1 in 1..=half {
        for h2 in h1..=half {
            let need = (-(h1 * h1 + h2 * h2)).rem_euclid(p);
            let r = root[need as usize];
            if r == 0 {
                continue;
            }
            // roots of need are r and p - r; only r lies in [1, half]
            if r >= h2 {
                return Ok((h1, h2, r));
            }
        }
    }
    unreachable!("a nonzero isotropic triplet exists for every p = 11 mod 12")
}

/// Leading exponent of `E_g(sigma tau)` in `q`, for `sigma = (a *; c *)`:
/// `(c, N)^2 / (2N) * P_2(a g / (c, N))`.
pub fn leading_delta(g: i64, level: u64, sigma: &SL2Matrix) -> Result<Rational> {
    let n = level as i64;
    if level < 2 {
        return Err(Error::BadLevel(level));
    }
    if g.rem_euclid(n) == 0 {
        return Err(Error::ZeroIndex { g: g.to_string(), level });
    }
    let d = sigma.c.gcd(&n);
    let ag = Rational::new(BigInt::from(sigma.a) * g, BigInt::from(d));
    Ok(rat(d * d, 2 * n) * sawtooth_p2(&ag))
}

/// Modularity criterion for `prod E_g^{e_g}` on `Gamma_1(N)`:
/// `sum e_g = 0 mod 12`, `sum g e_g = 0 mod 2`, `sum g^2 e_g = 0 mod 2N`,
/// reduced for odd `N` to `sum e_g = 0 mod 12`, `sum g^2 e_g = 0 mod N`.
pub fn modularity_criterion(prod: &EtaProduct) -> bool {
    let n = prod.level as i128;
    let (mut s0, mut s1, mut s2) = (0i128, 0i128, 0i128);
    for (&g, &e) in prod.exponents() {
        let (g, e) = (g as i128, e as i128);
        s0 += e;
        s1 += g * e;
        s2 += g * g * e;
    }
    if n % 2 == 1 {
        s0.rem_euclid(12) == 0 && s2.rem_euclid(n) == 0
    } else {
        s0.rem_euclid(12) == 0 && s1.rem_euclid(2) == 0 && s2.rem_euclid(2 * n) == 0
    }
}

/// `z = (eta(tau) / eta(p tau))^{12 / gcd(p-1, 12)}`, computed from the
/// two eta expansions with generic series arithmetic.
pub fn build_z(ctx: &PrimeContext, bound: &Rational) -> QSeries {
    let e = z_exponent(ctx);
    let lead = z_leading_exponent(ctx);
    let rel = bound - &lead;
    let top = expand_eta(1, &(rat(1, 24) + &rel));
    let bottom = expand_eta(ctx.p, &(rat(ctx.p as i64, 24) + &rel));
    let num = top.pow(e).expect("positive power");
    let den = bottom.pow(-e).expect("eta has unit leading coefficient");
    num.mul(&den).rescale(lattice_for_level(ctx.p))
}

/// `12 / gcd(p - 1, 12)`.
pub fn z_exponent(ctx: &PrimeContext) -> i64 {
    12 / num_integer::gcd(ctx.p as i64 - 1, 12)
}

/// Leading exponent `(1 - p) e / 24` of `z`.
pub fn z_leading_exponent(ctx: &PrimeContext) -> Rational {
    rat((1 - ctx.p as i64) * z_exponent(ctx), 24)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{make_context, primes_in};
    use proptest::prelude::*;

    // brute-force truncated polynomial product, independent of the kernel
    fn naive_product(exps: &[u64], len: usize) -> Vec<i64> {
        let mut c = vec![0i64; len];
        if len > 0 {
            c[0] = 1;
        }
        for &n in exps {
            let mut next = c.clone();
            for j in 0..len {
                if j + n as usize >= len {
                    break;
                }
                next[j + n as usize] -= c[j];
            }
            c = next;
        }
        c
    }

    #[test]
    fn leading_delta_examples() {
        for n in [2u64, 5, 7, 12] {
            for g in 1..n as i64 {
                let d = leading_delta(g, n, &SL2Matrix::IDENTITY).unwrap();
                assert_eq!(d, e_leading_exponent(g, n));
            }
        }
        let s = SL2Matrix::with_first_column(3, 4).unwrap();
        for g in 1..5 {
            assert_eq!(leading_delta(g, 5, &s).unwrap(), rat(1, 60));
        }
        let s = SL2Matrix::with_first_column(2, 5).unwrap();
        assert_eq!(leading_delta(2, 5, &s).unwrap(), rat(1, 60));
        assert!(leading_delta(5, 5, &s).is_err());
    }

    // |E_g(sigma(iy))| decays like e^{-2 pi y delta}; the slope in y is an
    // independent check of the formula.
    #[test]
    fn leading_delta_matches_decay_rate() {
        use crate::numeric::{ln_e, Terms, UpperHalfPoint};
        for n in [5u64, 6, 7] {
            for (a, c) in [(1, 0), (1, 1), (2, 3), (1, n as i64), (3, 2 * n as i64), (2, 5)] {
                if a.gcd(&c) != 1 {
                    continue;
                }
                let s = SL2Matrix::with_first_column(a, c).unwrap();
                for g in 1..n as i64 {
                    let at = |y: f64| {
                        let tau = UpperHalfPoint::new(0.0, y).unwrap().act(&s).unwrap();
                        ln_e(g, n, &tau, Terms::Auto).unwrap().re
                    };
                    let slope = (at(50.0) - at(40.0)) / 10.0;
                    let delta = crate::arith::to_f64(&leading_delta(g, n, &s).unwrap());
                    assert!(
                        (slope + std::f64::consts::TAU * delta).abs() < 1e-6,
                        "N = {n}, g = {g}, sigma = {s}: {slope} vs {delta}"
                    );
                }
            }
        }
    }

    #[test]
    fn reduce_index_examples() {
        // E_3 = E_{5-2} = E_2 at level 5
        assert_eq!(reduce_index(3, 5).unwrap(), EtaIndex { level: 5, g_reduced: 2, sign: 1 });
        assert_eq!(reduce_index(1, 5).unwrap(), EtaIndex { level: 5, g_reduced: 1, sign: 1 });
        assert_eq!(reduce_index(6, 5).unwrap(), EtaIndex { level: 5, g_reduced: 1, sign: -1 });
        assert_eq!(reduce_index(-2, 5).unwrap(), EtaIndex { level: 5, g_reduced: 2, sign: -1 });
        assert!(matches!(reduce_index(10, 5), Err(Error::ZeroIndex { .. })));
    }

    #[test]
    fn reduce_index_is_idempotent() {
        for n in 2..20u64 {
            for g in -60i64..60 {
                if g.rem_euclid(n as i64) == 0 {
                    continue;
                }
                let r = reduce_index(g, n).unwrap();
                let again = reduce_index(r.g_reduced as i64, n).unwrap();
                assert_eq!(again.g_reduced, r.g_reduced);
                assert_eq!(again.sign, 1);
            }
        }
    }

    #[test]
    fn expand_e_first_terms() {
        let s = expand_e(1, 5, &int(2)).unwrap();
        assert_eq!(s.leading().unwrap(), (rat(1, 60), int(1)));
        // q^{1/60} (1 - q - q^4 + ...) truncated below q^2
        assert_eq!(s.coefficient(&rat(61, 60)), int(-1));
        assert_eq!(s.len(), 2);
        assert_eq!(s.truncation_order(), &int(2));

        let s = expand_e(1, 5, &int(7)).unwrap();
        let expected = naive_product(&[1, 4, 6], 7);
        for (j, c) in expected.iter().enumerate() {
            assert_eq!(s.coefficient(&(rat(1, 60) + int(j as i64))), int(*c));
        }
    }

    #[test]
    fn expand_e_leading_exponent_level_five() {
        // 5/2 (4/25 - 2/5 + 1/6) = -11/60
        let s = expand_e(2, 5, &int(3)).unwrap();
        assert_eq!(s.leading().unwrap(), (rat(-11, 60), int(1)));
        assert_eq!(e_leading_exponent(2, 5), rat(-11, 60));
    }

    #[test]
    fn expand_e_rejects_unreduced() {
        assert!(expand_e(0, 5, &int(2)).is_err());
        assert!(expand_e(5, 5, &int(2)).is_err());
        assert!(expand_e(-1, 5, &int(2)).is_err());
    }

    #[test]
    fn expand_e_mirror_is_identical() {
        for n in 2..16u64 {
            for g in 1..n as i64 {
                let a = expand_e(g, n, &int(8)).unwrap();
                let b = expand_e(n as i64 - g, n, &int(8)).unwrap();
                assert_eq!(a, b);
            }
        }
    }

    // pentagonal numbers k(3k-1)/2 with sign (-1)^k
    fn pentagonal(len: usize) -> Vec<i64> {
        let mut c = vec![0i64; len];
        for k in -20i64..=20 {
            let e = k * (3 * k - 1) / 2;
            if (e as usize) < len {
                c[e as usize] += if k % 2 == 0 { 1 } else { -1 };
            }
        }
        c
    }

    #[test]
    fn eta_matches_pentagonal_theorem() {
        let s = expand_eta(1, &int(40));
        let pent = pentagonal(40);
        for (j, c) in pent.iter().enumerate() {
            let e = rat(1, 24) + int(j as i64);
            if e < int(40) {
                assert_eq!(s.coefficient(&e), int(*c), "j = {j}");
            }
        }
        let s = expand_eta(1, &int(3));
        assert_eq!(s.to_string(), "1*q^(1/24) + -1*q^(25/24) + -1*q^(49/24) + O(q^(3/1))");
        assert_eq!(expand_eta(5, &int(3)).leading().unwrap().0, rat(5, 24));
    }

    #[test]
    fn build_f_level_five() {
        let ctx = make_context(5).unwrap();
        assert_eq!(ctx.g, 7);
        let f = build_f(1, &ctx).unwrap();
        // indices 1 and 7 = 2 + 5, so E_7 = -E_2 and the cube keeps the sign
        assert_eq!(f.exponents(), &BTreeMap::from([(1, 3), (2, 3)]));
        assert_eq!(f.sign(), -1);
        let direct = expand_e(1, 5, &int(6))
            .unwrap()
            .mul(&expand_e(2, 5, &int(6)).unwrap())
            .pow(3)
            .unwrap()
            .neg();
        let bound = direct.truncation_order().clone();
        assert!(f.expand(&bound).equal_upto(&direct, &bound).unwrap());
    }

    #[test]
    fn build_f_levels_seven_and_thirteen() {
        let ctx = make_context(7).unwrap();
        let f = build_f(1, &ctx).unwrap();
        // g = 3, k = 1: indices 1, 3, 9 -> 1, 3, 2 (9 = 2 + 7)
        assert_eq!(f.exponents(), &BTreeMap::from([(1, 2), (2, 2), (3, 2)]));
        assert_eq!(f.sign(), 1);

        let ctx = make_context(13).unwrap();
        let f = build_f(1, &ctx).unwrap();
        assert_eq!(f.total_exponent(), 6);
        assert!(f.exponents().values().all(|&e| e == 1 || e == 2));
        assert!(build_f(26, &ctx).is_err());
    }

    #[test]
    fn expand_product_examples() {
        let single = EtaProduct::from_factors(5, "E1", [(1, 1)]).unwrap();
        assert_eq!(single.expand(&int(6)), expand_e(1, 5, &int(6)).unwrap());
        let empty = EtaProduct::one(7, "1");
        assert_eq!(empty.expand(&int(3)).to_string(), "1*q^(0/1) + O(q^(3/1))");
    }

    #[test]
    fn triplets() {
        assert_eq!(find_triplet(11).unwrap(), (1, 1, 3));
        assert!(build_g((1, 3, 10), 11).is_ok());
        assert_eq!(build_g((1, 2, 4), 11), Err(Error::TripletNotIsotropic(21)));
        assert_eq!(build_g((1, 11, 4), 11), Err(Error::TripletZeroEntry(11)));
        assert_eq!(build_g((1, 1, 3), 13), Err(Error::NotElevenModTwelve(13)));
        assert_eq!(find_triplet(13), Err(Error::NotElevenModTwelve(13)));
    }

    #[test]
    fn triplets_match_exhaustive_search() {
        for p in primes_in(11, 400).into_iter().filter(|p| p % 12 == 11) {
            let half = (p - 1) / 2;
            let mut best = None;
            'outer: for a in 1..=half {
                for b in a..=half {
                    for c in b..=half {
                        if (a * a + b * b + c * c) % p == 0 {
                            best = Some((a, b, c));
                            break 'outer;
                        }
                    }
                }
            }
            assert_eq!(find_triplet(p as u64).unwrap(), best.unwrap(), "p = {p}");
        }
    }

    #[test]
    fn build_g_merges_repeated_indices() {
        let g = build_g((1, 1, 3), 11).unwrap();
        assert_eq!(g.exponents(), &BTreeMap::from([(1, 4), (3, 2)]));
        assert_eq!(g.total_exponent(), 6);
    }

    #[test]
    fn modularity_examples() {
        let ctx = make_context(13).unwrap();
        assert!(modularity_criterion(&build_f(1, &ctx).unwrap().pow(2)));
        let e1 = EtaProduct::from_factors(5, "E1", [(1, 1)]).unwrap();
        assert!(!modularity_criterion(&e1));
        let g = build_g(find_triplet(11).unwrap(), 11).unwrap();
        assert!(modularity_criterion(&g.pow(2)));
        // ell = 1: F_h^2 = E_h^12 fails, which is why the G-branch exists
        assert!(!modularity_criterion(&build_f(1, &make_context(11).unwrap()).unwrap().pow(2)));
    }

    #[test]
    fn modularity_even_level() {
        // E_1^12 E_3^-12 at N = 8: sums 0, -24, -96 = 0 mod 16
        let prod = EtaProduct::from_factors(8, "x", [(1, 12), (3, -12)]).unwrap();
        assert!(modularity_criterion(&prod));
        let prod = EtaProduct::from_factors(8, "x", [(1, 12)]).unwrap();
        assert!(!modularity_criterion(&prod));
    }

    #[test]
    fn modularity_of_f_and_g_over_a_range() {
        for p in primes_in(5, 200) {
            let ctx = make_context(p).unwrap();
            if p % 12 == 11 {
                let g = build_g(find_triplet(ctx.p).unwrap(), ctx.p).unwrap();
                assert!(modularity_criterion(&g.pow(2)), "p = {p}");
            } else {
                for h in [1, 2, 3, p - 1, p + 2] {
                    let f = build_f(h, &ctx).unwrap();
                    assert!(modularity_criterion(&f.pow(2)), "p = {p}, h = {h}");
                }
            }
        }
    }

    #[test]
    fn f_has_integer_coefficients() {
        for p in [5, 7, 13, 17, 37] {
            let ctx = make_context(p).unwrap();
            let s = build_f(2, &ctx).unwrap().expand_steps(12);
            assert!(s.has_integer_coefficients());
        }
    }

    #[test]
    fn z_examples() {
        let c5 = make_context(5).unwrap();
        assert_eq!(z_exponent(&c5), 3);
        assert_eq!(build_z(&c5, &int(4)).leading().unwrap(), (rat(-1, 2), int(1)));
        let c11 = make_context(11).unwrap();
        assert_eq!(z_exponent(&c11), 6);
        assert_eq!(build_z(&c11, &int(4)).leading().unwrap().0, rat(-5, 2));
        let c13 = make_context(13).unwrap();
        assert_eq!(z_exponent(&c13), 1);
        assert_eq!(build_z(&c13, &int(4)).leading().unwrap().0, rat(-1, 2));
        let z = build_z(&c13, &int(4));
        assert_eq!(z.truncation_order(), &int(4));
    }

    proptest! {
        #[test]
        fn unreduced_representatives_agree(n in 2u64..25, g in 1i64..25, m in -4i64..5, neg in any::<bool>()) {
            prop_assume!((g as u64) < n);
            let bound = int(6);
            let base = expand_e(g, n, &bound).unwrap();
            let rep = if neg { -g + m * n as i64 } else { g + m * n as i64 };
            let idx = reduce_index(rep, n).unwrap();
            let via = expand_e(idx.g_reduced as i64, n, &bound).unwrap().scale(&int(idx.sign as i64));
            // E_{-g + mN} = (-1)^{m+1} E_g and E_{g + mN} = (-1)^m E_g
            let expected_sign = if neg { if m.rem_euclid(2) == 0 { -1 } else { 1 } } else if m.rem_euclid(2) == 0 { 1 } else { -1 };
            prop_assert_eq!(via, base.scale(&int(expected_sign)));
        }

        #[test]
        fn leading_exponent_is_half_level_p2(n in 2u64..60, g in 1i64..60) {
            prop_assume!((g as u64) < n);
            let s = expand_e(g, n, &(e_leading_exponent(g, n) + int(2))).unwrap();
            let p2 = crate::arith::sawtooth_p2(&rat(g, n as i64));
            prop_assert_eq!(s.leading().unwrap().0, int(n as i64) * p2 / int(2));
        }
    }
}
