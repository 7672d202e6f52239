//! Truncated formal series in `q` with exponents on a lattice `(1/D) Z` and
//! exact rational coefficients.
//!
//! A [`QSeries`] is a sparse map from exponent numerators `n` (standing for
//! `q^(n/D)`) to nonzero coefficients, together with an explicit truncation
//! order `T`: every coefficient of exponent `< T` is known exactly, nothing
//! at or beyond `T` is. Products report honest precision:
//! `T(a b) = min(T(a) + lead(b), T(b) + lead(a))`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{int, Rational};
use crate::error::{Error, Result};
use crate::par::{self, Execution};

/// Pairs of terms above which [`QSeries::mul`] splits the work across threads.
const PAR_MUL_THRESHOLD: usize = 1 << 14;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QSeries {
    denom: i64,
    terms: BTreeMap<i64, Rational>,
    trunc: Rational,
}

impl QSeries {
    /// The zero series `O(q^trunc)` on lattice `(1/denom) Z`.
    pub fn zero(denom: u64, trunc: Rational) -> Self {
        assert!(denom > 0, "lattice denominator must be positive");
        QSeries { denom: denom as i64, terms: BTreeMap::new(), trunc }
    }

    /// Builds a series from `(numerator, coefficient)` pairs. Zero
    /// coefficients and terms at or beyond `trunc` are dropped; repeated
    /// numerators are summed.
    pub fn from_terms<I>(denom: u64, terms: I, trunc: Rational) -> Self
    where
        I: IntoIterator<Item = (i64, Rational)>,
    {
        let mut s = Self::zero(denom, trunc);
        for (n, c) in terms {
            s.add_term(n, c);
        }
        s
    }

    pub fn constant(c: Rational, trunc: Rational) -> Self {
        Self::from_terms(1, [(0, c)], trunc)
    }

    pub fn one(trunc: Rational) -> Self {
        Self::constant(int(1), trunc)
    }

    /// `coeff * q^exponent + O(q^trunc)`.
    pub fn monomial(coeff: Rational, exponent: &Rational, trunc: Rational) -> Self {
        let d = exponent.denom().to_i64().expect("exponent denominator fits in i64");
        let n = exponent.numer().to_i64().expect("exponent numerator fits in i64");
        Self::from_terms(d as u64, [(n, coeff)], trunc)
    }

    pub fn lattice_denominator(&self) -> u64 {
        self.denom as u64
    }

    pub fn truncation_order(&self) -> &Rational {
        &self.trunc
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// True when no coefficient below the truncation order is nonzero.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    fn exponent_of(&self, n: i64) -> Rational {
        Rational::new(n.into(), self.denom.into())
    }

    fn below_trunc(&self, n: i64) -> bool {
        self.exponent_of(n) < self.trunc
    }

    fn add_term(&mut self, n: i64, c: Rational) {
        if c.is_zero() || !self.below_trunc(n) {
            return;
        }
        match self.terms.entry(n) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// Terms as `(exponent, coefficient)` in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (Rational, &Rational)> + '_ {
        self.terms.iter().map(move |(&n, c)| (self.exponent_of(n), c))
    }

    /// Coefficient of `q^exponent` (zero when absent or off-lattice).
    pub fn coefficient(&self, exponent: &Rational) -> Rational {
        let scaled = exponent * Rational::from_integer(self.denom.into());
        if !scaled.is_integer() {
            return Rational::zero();
        }
        scaled
            .to_integer()
            .to_i64()
            .and_then(|n| self.terms.get(&n).cloned())
            .unwrap_or_else(Rational::zero)
    }

    /// Re-expresses the series on lattice `(1/new_denom) Z`; `new_denom`
    /// must be a multiple of the current denominator.
    pub fn rescale(&self, new_denom: u64) -> Self {
        let new_denom = new_denom as i64;
        assert!(new_denom % self.denom == 0, "lattice can only be refined");
        let f = new_denom / self.denom;
        QSeries {
            denom: new_denom,
            terms: self.terms.iter().map(|(&n, c)| (n * f, c.clone())).collect(),
            trunc: self.trunc.clone(),
        }
    }

    fn common(a: &Self, b: &Self) -> (Self, Self) {
        let d = a.denom.lcm(&b.denom) as u64;
        (a.rescale(d), b.rescale(d))
    }

    /// Drops everything at or beyond `bound` (never raises the truncation order).
    pub fn restrict(&self, bound: &Rational) -> Self {
        let trunc = if bound < &self.trunc { bound.clone() } else { self.trunc.clone() };
        let mut out = Self::zero(self.denom as u64, trunc);
        for (&n, c) in &self.terms {
            if out.below_trunc(n) {
                out.terms.insert(n, c.clone());
            } else {
                break;
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let (mut a, b) = Self::common(self, other);
        if b.trunc < a.trunc {
            a = a.restrict(&b.trunc);
        }
        for (n, c) in b.terms {
            a.add_term(n, c);
        }
        a
    }

    pub fn neg(&self) -> Self {
        QSeries {
            denom: self.denom,
            terms: self.terms.iter().map(|(&n, c)| (n, -c)).collect(),
            trunc: self.trunc.clone(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.denom as u64, self.trunc.clone());
        }
        QSeries {
            denom: self.denom,
            terms: self.terms.iter().map(|(&n, x)| (n, x * c)).collect(),
            trunc: self.trunc.clone(),
        }
    }

    /// Multiplies by `q^e`, shifting the truncation order with it.
    pub fn shift(&self, e: &Rational) -> Self {
        let d = self.denom.lcm(&e.denom().to_i64().expect("denominator fits in i64"));
        let s = self.rescale(d as u64);
        let off = (e * Rational::from_integer(d.into())).to_integer().to_i64().expect("shift fits");
        QSeries {
            denom: d,
            terms: s.terms.into_iter().map(|(n, c)| (n + off, c)).collect(),
            trunc: &self.trunc + e,
        }
    }

    /// Smallest exponent with a nonzero coefficient, or the truncation order
    /// for the zero series.
    fn lead_or_trunc(&self) -> Rational {
        match self.terms.keys().next() {
            Some(&n) => self.exponent_of(n),
            None => self.trunc.clone(),
        }
    }

    /// Leading `(exponent, coefficient)`.
    pub fn leading(&self) -> Result<(Rational, Rational)> {
        self.terms
            .iter()
            .next()
            .map(|(&n, c)| (self.exponent_of(n), c.clone()))
            .ok_or(Error::ZeroSeries)
    }

    /// Cauchy product with honest truncation.
    pub fn mul(&self, other: &Self) -> Self {
        self.mul_with(other, Execution::default())
    }

    pub fn mul_with(&self, other: &Self, exec: Execution) -> Self {
        let (a, b) = Self::common(self, other);
        let trunc = std::cmp::min(&a.trunc + b.lead_or_trunc(), &b.trunc + a.lead_or_trunc());
        let d = a.denom;
        // numerator bound: exponents n/d < trunc  <=>  n < limit
        let limit = (&trunc * Rational::from_integer(d.into())).ceil().to_integer();
        let limit = limit.to_i64().unwrap_or(i64::MAX);

        let bt: Vec<(i64, &Rational)> = b.terms.iter().map(|(&n, c)| (n, c)).collect();
        let at: Vec<(i64, &Rational)> = a.terms.iter().map(|(&n, c)| (n, c)).collect();
        let partial = |chunk: &[(i64, &Rational)]| {
            let mut acc: BTreeMap<i64, Rational> = BTreeMap::new();
            for &(na, ca) in chunk {
                for &(nb, cb) in &bt {
                    let n = na + nb;
                    if n >= limit {
                        break;
                    }
                    *acc.entry(n).or_insert_with(Rational::zero) += ca * cb;
                }
            }
            acc
        };

        let work = at.len() * bt.len();
        let maps: Vec<BTreeMap<i64, Rational>> = if exec.is_parallel() && work >= PAR_MUL_THRESHOLD {
            let chunks: Vec<&[(i64, &Rational)]> = at.chunks(at.len().div_ceil(16).max(1)).collect();
            par::map(exec, &chunks, |c| partial(c))
        } else {
            vec![partial(&at)]
        };

        let mut out = Self::zero(d as u64, trunc);
        for m in maps {
            for (n, c) in m {
                out.add_term(n, c);
            }
        }
        out
    }

    /// Multiplicative inverse. The series must have a nonzero leading term.
    pub fn inverse(&self) -> Result<Self> {
        let (&n0, c0) = self.terms.iter().next().ok_or(Error::NotInvertible)?;
        let lead = self.exponent_of(n0);
        let c0_inv = c0.recip();
        // unit part 1 + u, u supported on positive numerators
        let u: Vec<(i64, Rational)> =
            self.terms.iter().skip(1).map(|(&n, c)| (n - n0, c * &c0_inv)).collect();
        let rel = &self.trunc - &lead;
        let d = self.denom;
        let step = u.iter().fold(0i64, |g, &(n, _)| g.gcd(&n)).max(1);
        // number of lattice points j*step/d < rel
        let len = (&rel * Rational::from_integer(d.into()) / Rational::from_integer(step.into()))
            .ceil()
            .to_integer()
            .to_i64()
            .unwrap_or(0)
            .max(0) as usize;
        let us: Vec<(usize, &Rational)> =
            u.iter().map(|(n, c)| ((n / step) as usize, c)).collect();
        let mut inv: Vec<Rational> = Vec::with_capacity(len);
        for j in 0..len {
            if j == 0 {
                inv.push(Rational::one());
                continue;
            }
            let mut acc = Rational::zero();
            for &(i, c) in &us {
                if i > j {
                    break;
                }
                if !inv[j - i].is_zero() {
                    acc -= c * &inv[j - i];
                }
            }
            inv.push(acc);
        }
        let trunc = &rel - &lead;
        Ok(Self::from_terms(
            d as u64,
            inv.into_iter()
                .enumerate()
                .map(|(j, c)| (j as i64 * step - n0, c * &c0_inv)),
            trunc,
        ))
    }

    /// Integer power by repeated squaring; negative powers invert first.
    pub fn pow(&self, n: i64) -> Result<Self> {
        if n == 0 {
            let lead = self.lead_or_trunc();
            return Ok(QSeries::one(&self.trunc - lead).rescale(self.denom as u64));
        }
        let base = if n < 0 { self.inverse()? } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut result: Option<QSeries> = None;
        let mut power = base;
        while e > 0 {
            if e & 1 == 1 {
                result = Some(match result {
                    None => power.clone(),
                    Some(r) => r.mul(&power),
                });
            }
            e >>= 1;
            if e > 0 {
                power = power.mul(&power);
            }
        }
        Ok(result.expect("n != 0"))
    }

    /// Exact agreement of all coefficients with exponent `< bound`. Fails
    /// loudly when `bound` exceeds either truncation order.
    pub fn equal_upto(&self, other: &Self, bound: &Rational) -> Result<bool> {
        for s in [self, other] {
            if bound > &s.trunc {
                return Err(Error::InsufficientPrecision {
                    bound: bound.to_string(),
                    truncation: s.trunc.to_string(),
                });
            }
        }
        let (a, b) = Self::common(self, other);
        let ra = a.restrict(bound);
        let rb = b.restrict(bound);
        Ok(ra.terms == rb.terms)
    }

    /// True when every stored coefficient is an integer.
    pub fn has_integer_coefficients(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    /// Largest absolute value of a coefficient (zero for the zero series).
    pub fn max_abs_coefficient(&self) -> Rational {
        self.terms.values().map(|c| c.abs()).max().unwrap_or_else(Rational::zero)
    }
}

fn fmt_exponent(e: &Rational) -> String {
    format!("{}/{}", e.numer(), e.denom())
}

impl fmt::Display for QSeries {
    /// `c_1*q^(a_1/b_1) + c_2*q^(a_2/b_2) + ... + O(q^(a/b))`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (e, c) in self.terms() {
            write!(f, "{}*q^({}) + ", c, fmt_exponent(&e))?;
        }
        write!(f, "O(q^({}))", fmt_exponent(&self.trunc))
    }
}

/// Integer-coefficient series `sum_j c_j q^j` (dense) placed at `q^lead`,
/// returned on lattice `(1/denom) Z` with truncation `lead + len`.
pub(crate) fn from_dense_integers(
    denom: u64,
    lead: &Rational,
    coeffs: &[BigInt],
    rel_trunc: &Rational,
) -> QSeries {
    let d = denom as i64;
    let lead_scaled = lead * Rational::from_integer(d.into());
    assert!(lead_scaled.is_integer(), "leading exponent {lead} is not on lattice 1/{denom}");
    let ln = lead_scaled.to_integer().to_i64().expect("leading exponent fits");
    QSeries::from_terms(
        denom,
        coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(j, c)| (ln + j as i64 * d, Rational::from_integer(c.clone()))),
        lead + rel_trunc,
    )
}
