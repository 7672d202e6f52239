//! The multiplier `epsilon`, the characters `psi` and `chi`, and the
//! transformation multiplier of `E_g` under `Gamma_0(N)`.

use crate::arith::{bernoulli_b, int, rat, PrimeContext, Rational, RootOfUnity};
use crate::error::{Error, Result};

use super::groups::{Subgroup, SubgroupTag};
use super::SL2Matrix;

/// The two published branches of `epsilon(a, b, c, d)`, each present only
/// when its parity hypothesis holds (`c` odd, resp. `d` odd).
pub fn epsilon_branches(
    a: i64,
    b: i64,
    c: i64,
    d: i64,
) -> Result<(Option<RootOfUnity>, Option<RootOfUnity>)> {
    SL2Matrix::new(a, b, c, d)?;
    let (a, b, c, d) = (a as i128, b as i128, c as i128, d as i128);
    // both are e^{2 pi i x / 12}; the d-odd branch carries an extra -i = e^{2 pi i 18/24}
    let c_branch = (c.rem_euclid(2) == 1).then(|| {
        let x = (b * d * (1 - c * c) + c * (a + d - 3)).rem_euclid(12);
        RootOfUnity::new(x as i64, 12)
    });
    let d_branch = (d.rem_euclid(2) == 1).then(|| {
        let x = (a * c * (1 - d * d) + d * (b - c + 3)).rem_euclid(12);
        RootOfUnity::new(2 * x as i64 + 18, 24)
    });
    Ok((c_branch, d_branch))
}

/// `epsilon(a, b, c, d)`, a 24th root of unity. Uses the `c`-odd branch
/// when `c` is odd and the `d`-odd branch otherwise.
pub fn epsilon(a: i64, b: i64, c: i64, d: i64) -> Result<RootOfUnity> {
    let (cb, db) = epsilon_branches(a, b, c, d)?;
    Ok(cb.or(db).expect("c and d are coprime, so one of them is odd"))
}

/// The order-2 character of `SL(2, Z)`:
/// `(-1)^{a+d-1}` for odd `c`, `(-1)^b` for even `c`.
pub fn psi(m: &SL2Matrix) -> i32 {
    let e = if m.c.rem_euclid(2) == 1 { m.a + m.d - 1 } else { m.b };
    if e.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// Exponent `n` (mod `2 ell`) with `a = g^{nk} mod p`, for `a` in `<g^k>`.
pub(crate) fn gamma2_exponent(a: i64, ctx: &PrimeContext) -> Option<u64> {
    let e = ctx.dlog().log(a)?;
    (e % ctx.k == 0).then(|| e / ctx.k)
}

/// `chi(gamma) = (-1)^n` where `a = g^{nk} mod p`; defined on `Gamma_2(p)`
/// for `p = 1 mod 4`.
pub fn chi(m: &SL2Matrix, ctx: &PrimeContext) -> Result<i32> {
    if !ctx.ell.is_multiple_of(2) {
        return Err(Error::ChiUndefined(ctx.p));
    }
    if !SubgroupTag::new(Subgroup::Gamma2, ctx.clone()).contains(m) {
        return Err(Error::NotInGroup("Gamma_2(p)"));
    }
    let n = gamma2_exponent(m.a, ctx).expect("member of Gamma_2");
    Ok(if n.is_multiple_of(2) { 1 } else { -1 })
}

/// The multiplier of `E_g` under `gamma = (a b; cN d)` in `Gamma_0(N)`:
/// `E_g(gamma tau) = multiplier * E_{new_index}(tau)`.
///
/// For `c = 0` the matrix is `+-T^b` and the multiplier is
/// `e^{pi i t N B(g/N)}` for the translation `t = b d`; otherwise it is
/// `epsilon(a, bN, c, d) e^{pi i (g^2 a b / N - g b)}` with new index `a g`.
pub fn multiplier_e(g: i64, level: u64, m: &SL2Matrix) -> Result<(RootOfUnity, i64)> {
    let n = level as i64;
    if g.rem_euclid(n) == 0 {
        return Err(Error::ZeroIndex { g: g.to_string(), level });
    }
    if m.c.rem_euclid(n) != 0 {
        return Err(Error::NotInGroup("Gamma_0(N)"));
    }
    let c = m.c / n;
    if c == 0 {
        let t = m.b * m.d;
        let x = int(t) * int(n) * bernoulli_b(&rat(g, n));
        return Ok((RootOfUnity::from_half_turns(&x), g));
    }
    let eps = epsilon(m.a, m.b * n, c, m.d)?;
    let (g, a, b) = (g as i128, m.a as i128, m.b as i128);
    let num = g * g * a * b - g * b * n as i128;
    let x = Rational::new(num.into(), n.into());
    let new_index = i64::try_from(a * g).expect("index overflow");
    Ok((eps * RootOfUnity::from_half_turns(&x), new_index))
}
