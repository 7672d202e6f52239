//! The cyclic quotient `Gamma_0(p) / Gamma_2'(p)`.
//!
//! `rho(gamma) = zeta^{log_g(a)}` with `zeta` a primitive `(p-1)/2`-th root
//! of unity is a character of `Gamma_0(p)` with kernel `+-Gamma_1(p)`. The
//! subgroup `Gamma_2'(p)` is the kernel of `rho^ell psi` when `ell` is odd and
//! of `rho^{ell/2} psi` when `ell` is even; on `Gamma_2(p)` the latter
//! restricts to `chi psi`.

use std::collections::BTreeSet;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::arith::{PrimeContext, RootOfUnity};
use crate::error::{Error, Result};

use super::characters::psi;
use super::groups::coset_representative;
use super::SL2Matrix;

/// `rho(gamma)` for `gamma` in `Gamma_0(p)`.
pub fn rho(m: &SL2Matrix, ctx: &PrimeContext) -> Result<RootOfUnity> {
    let p = ctx.p_i64();
    if m.c.rem_euclid(p) != 0 {
        return Err(Error::NotInGroup("Gamma_0(p)"));
    }
    let e = ctx.dlog().log(m.a).expect("a is a unit mod p");
    Ok(RootOfUnity::new(e as i64, (ctx.p - 1) / 2))
}

/// The character of `Gamma_0(p)` whose kernel is `Gamma_2'(p)`.
pub fn cutting_character(m: &SL2Matrix, ctx: &PrimeContext) -> Result<RootOfUnity> {
    let r = rho(m, ctx)?;
    let e = if ctx.ell.is_multiple_of(2) { ctx.ell / 2 } else { ctx.ell };
    Ok(r.pow(e as i64) * RootOfUnity::from_sign(psi(m)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientReport {
    /// `[Gamma_0 : Gamma_2]`, counted modulo `+-I`.
    pub index_gamma0_gamma2: u64,
    /// `[Gamma_2 : Gamma_1]`, counted modulo `+-I`.
    pub index_gamma2_gamma1: u64,
    /// Order of the image of [`cutting_character`].
    pub image_order: u64,
    pub expected_order: u64,
    pub passed: bool,
}

/// Computes both indices from the unit group mod `p` and the image of the
/// cutting character from its values on `T`, `-I` and one coset
/// representative of `Gamma_1(p)` per unit.
pub fn quotient_structure(ctx: &PrimeContext) -> Result<QuotientReport> {
    let p = ctx.p_i64();
    if p < 5 {
        return Err(Error::PrimeTooSmall(p));
    }
    let logs: Vec<u64> = (1..p).map(|a| ctx.dlog().log(a).expect("unit")).collect();
    let classes: BTreeSet<u64> = logs.iter().map(|e| e % ctx.k).collect();
    let in_gamma2 = logs.iter().filter(|&&e| e % ctx.k == 0).count() as u64;
    // a and -a give the same element of PSL(2)
    let index_gamma0_gamma2 = classes.len() as u64;
    let index_gamma2_gamma1 = in_gamma2 / 2;

    let mut gens = vec![SL2Matrix::t_pow(1), SL2Matrix::MINUS_IDENTITY];
    gens.extend((1..p).map(|a| coset_representative(a, p)));
    let values = gens.iter().map(|m| cutting_character(m, ctx)).collect::<Result<Vec<_>>>()?;
    let image_order = values.iter().fold(1u64, |acc, v| acc.lcm(&v.order()));

    // the image must also be exhausted by closing the value set under products
    let mut closure: BTreeSet<(u64, u64)> = BTreeSet::from([(1, 0)]);
    let mut frontier = vec![RootOfUnity::ONE];
    while let Some(x) = frontier.pop() {
        for v in &values {
            let y = x * *v;
            if closure.insert((y.order(), y.exponent())) {
                frontier.push(y);
            }
        }
    }

    let expected_order = 2 * ctx.k;
    let passed = image_order == expected_order
        && closure.len() as u64 == image_order
        && index_gamma0_gamma2 == ctx.k
        && index_gamma2_gamma1 == ctx.ell;
    Ok(QuotientReport { index_gamma0_gamma2, index_gamma2_gamma1, image_order, expected_order, passed })
}
