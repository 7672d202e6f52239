use std::fmt;

use rand::Rng;

use crate::arith::{gcd, mod_inv, PrimeContext};

use super::characters::{gamma2_exponent, psi};
use super::SL2Matrix;

/// The subgroups of level `p` that appear in the covering tower
/// `Gamma_1(p) < Gamma_2'(p) ... Gamma_2(p) < Gamma_0(p)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Subgroup {
    Gamma0,
    Gamma1,
    Gamma2,
    Gamma2Prime,
}

impl Subgroup {
    pub fn name(self) -> &'static str {
        match self {
            Subgroup::Gamma0 => "Gamma0",
            Subgroup::Gamma1 => "Gamma1",
            Subgroup::Gamma2 => "Gamma2",
            Subgroup::Gamma2Prime => "Gamma2Prime",
        }
    }
}

impl fmt::Display for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A subgroup together with the prime data it depends on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubgroupTag {
    pub kind: Subgroup,
    pub ctx: PrimeContext,
}

impl SubgroupTag {
    pub fn new(kind: Subgroup, ctx: PrimeContext) -> Self {
        SubgroupTag { kind, ctx }
    }

    /// Membership test.
    ///
    /// `Gamma_2(p)` is tested arithmetically: `c = 0 mod p` and `a mod p`
    /// lies in `<g^k>` (which contains `-1 = g^{k ell}`). `Gamma_2'(p)` is the
    /// kernel of `psi chi` (`p = 1 mod 4`) or of `psi` (`p = 3 mod 4`) on it.
    pub fn contains(&self, m: &SL2Matrix) -> bool {
        membership(m, self.kind, &self.ctx)
    }
}

pub fn membership(m: &SL2Matrix, kind: Subgroup, ctx: &PrimeContext) -> bool {
    let p = ctx.p_i64();
    if m.c.rem_euclid(p) != 0 {
        return false;
    }
    match kind {
        Subgroup::Gamma0 => true,
        Subgroup::Gamma1 => m.a.rem_euclid(p) == 1 && m.d.rem_euclid(p) == 1,
        Subgroup::Gamma2 => gamma2_exponent(m.a, ctx).is_some(),
        Subgroup::Gamma2Prime => match gamma2_exponent(m.a, ctx) {
            None => false,
            Some(n) => {
                let chi = if ctx.ell.is_multiple_of(2) && n % 2 == 1 { -1 } else { 1 };
                psi(m) * chi == 1
            }
        },
    }
}

/// A matrix of `Gamma_0(p)` with top-left entry `a` (for `p` not dividing `a`)
/// and lower-left entry `p`.
pub fn coset_representative(a: i64, p: i64) -> SL2Matrix {
    let a = a.rem_euclid(p);
    assert!(a != 0, "a must be a unit mod p");
    let d = mod_inv(a, p).expect("unit");
    let b = (a * d - 1) / p;
    SL2Matrix::new(a, b, p, d).expect("determinant one by construction")
}

/// The explicit lift `(g^k *; p *)` generating `Gamma_2(p)` over `Gamma_1(p)`.
pub fn gamma2_generator(ctx: &PrimeContext) -> SL2Matrix {
    coset_representative(ctx.g_pow_mod(ctx.k), ctx.p_i64())
}

/// A pseudo-random element of the given subgroup with small entries:
/// lower-left entry `p c'` with `|c'| <= 2`, occasionally a pure translation.
pub fn random_in<R: Rng>(kind: Subgroup, ctx: &PrimeContext, rng: &mut R) -> SL2Matrix {
    loop {
        let m = random_candidate(kind, ctx, rng);
        if membership(&m, kind, ctx) {
            return m;
        }
    }
}

fn random_candidate<R: Rng>(kind: Subgroup, ctx: &PrimeContext, rng: &mut R) -> SL2Matrix {
    let p = ctx.p_i64();
    let shift: i64 = rng.random_range(-3..=3);
    if rng.random_range(0..8) == 0 {
        let s = match kind {
            Subgroup::Gamma1 => 1,
            _ => {
                if rng.random_bool(0.5) {
                    1
                } else {
                    -1
                }
            }
        };
        return SL2Matrix::new(s, shift * s, 0, s).expect("translation");
    }
    let c = p * [-2, -1, 1, 2][rng.random_range(0..4)];
    loop {
        let residue = match kind {
            Subgroup::Gamma0 => rng.random_range(1..p),
            Subgroup::Gamma1 => 1,
            Subgroup::Gamma2 | Subgroup::Gamma2Prime => {
                let n = rng.random_range(0..2 * ctx.ell);
                ctx.g_pow_mod(n * ctx.k)
            }
        };
        let d = residue + p * rng.random_range(-2..=2);
        if d == 0 || gcd(d, c) != 1 {
            continue;
        }
        // a d = 1 mod c, b = (a d - 1) / c
        let a = mod_inv(d, c.abs()).expect("coprime");
        let b = (a * d - 1) / c;
        let m = SL2Matrix::new(a, b, c, d).expect("determinant one by construction");
        return SL2Matrix::t_pow(shift).mul(&m);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::make_context;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn identity_in_all() {
        let ctx = make_context(13).unwrap();
        for kind in [Subgroup::Gamma0, Subgroup::Gamma1, Subgroup::Gamma2, Subgroup::Gamma2Prime] {
            assert!(membership(&SL2Matrix::IDENTITY, kind, &ctx));
        }
    }

    #[test]
    fn translation_and_gamma2_prime() {
        let t = SL2Matrix::t_pow(1);
        for p in [5, 7, 11, 13, 19, 23] {
            let ctx = make_context(p).unwrap();
            assert!(membership(&t, Subgroup::Gamma1, &ctx));
            // chi(T) = 1, psi(T) = -1: T is never in Gamma_2'
            assert!(!membership(&t, Subgroup::Gamma2Prime, &ctx));
            assert!(membership(&t.mul(&t), Subgroup::Gamma2Prime, &ctx));
        }
    }

    #[test]
    fn minus_identity() {
        for p in [5, 7, 11, 13, 17] {
            let ctx = make_context(p).unwrap();
            let m = SL2Matrix::MINUS_IDENTITY;
            assert!(membership(&m, Subgroup::Gamma2, &ctx));
            assert!(!membership(&m, Subgroup::Gamma1, &ctx));
            // psi(-I) = 1; chi(-I) = (-1)^ell = 1 when ell is even
            assert!(membership(&m, Subgroup::Gamma2Prime, &ctx));
        }
    }

    #[test]
    fn generator_of_gamma2() {
        let ctx = make_context(17).unwrap();
        assert!(ctx.k > 1);
        let m = gamma2_generator(&ctx);
        assert!(membership(&m, Subgroup::Gamma2, &ctx));
        assert!(!membership(&m, Subgroup::Gamma1, &ctx));
        let a_g = coset_representative(ctx.g_pow_mod(1), 17);
        assert!(membership(&a_g, Subgroup::Gamma0, &ctx));
        assert!(!membership(&a_g, Subgroup::Gamma2, &ctx));
    }

    #[test]
    fn random_elements_respect_chain() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for p in [5, 7, 11, 13, 17, 19, 23, 29, 31] {
            let ctx = make_context(p).unwrap();
            for kind in [Subgroup::Gamma0, Subgroup::Gamma1, Subgroup::Gamma2, Subgroup::Gamma2Prime] {
                for _ in 0..30 {
                    let m = random_in(kind, &ctx, &mut rng);
                    assert!(membership(&m, kind, &ctx));
                    assert!(membership(&m, Subgroup::Gamma0, &ctx));
                    if membership(&m, Subgroup::Gamma1, &ctx) {
                        assert!(membership(&m, Subgroup::Gamma2, &ctx));
                    }
                    if kind == Subgroup::Gamma2Prime {
                        assert!(membership(&m, Subgroup::Gamma2, &ctx));
                    }
                }
            }
            if p % 4 == 3 {
                // Gamma_1 is not inside Gamma_2' here: T is a witness with psi = -1
                let t = SL2Matrix::t_pow(1);
                assert!(membership(&t, Subgroup::Gamma1, &ctx) && !membership(&t, Subgroup::Gamma2Prime, &ctx));
            }
        }
    }

    #[test]
    fn gamma2_prime_is_closed() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for p in [5, 7, 13, 17, 19, 29, 37] {
            let ctx = make_context(p).unwrap();
            for _ in 0..40 {
                let x = random_in(Subgroup::Gamma2Prime, &ctx, &mut rng);
                let y = random_in(Subgroup::Gamma2Prime, &ctx, &mut rng);
                assert!(membership(&x.mul(&y), Subgroup::Gamma2Prime, &ctx));
                assert!(membership(&x.inverse(), Subgroup::Gamma2Prime, &ctx));
                // normal in Gamma_0
                let z = random_in(Subgroup::Gamma0, &ctx, &mut rng);
                assert!(membership(&z.mul(&x).mul(&z.inverse()), Subgroup::Gamma2Prime, &ctx));
            }
        }
    }
}
