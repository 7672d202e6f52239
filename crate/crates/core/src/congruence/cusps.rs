//! Cusps of the level-`p` subgroups and their widths.
//!
//! Two cusps `x`, `y` are equivalent under `Gamma` iff some transporter
//! `sigma_y (+-T^n) sigma_x^{-1}` lies in `Gamma`, where `sigma_x` sends
//! `infinity` to `x`. Every group handled here contains `Gamma(p)`, so `n`
//! only needs to run over `0..p`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::gcd;
use crate::error::{Error, Result};

use super::groups::{Subgroup, SubgroupTag};
use super::SL2Matrix;

/// The cusp `a/c` in lowest terms with `c >= 0`; infinity is `1/0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Cusp {
    pub a: i64,
    pub c: i64,
}

impl Cusp {
    pub const INFINITY: Cusp = Cusp { a: 1, c: 0 };

    pub fn new(a: i64, c: i64) -> Self {
        assert!(a != 0 || c != 0, "0/0 is not a cusp");
        if c == 0 {
            return Cusp::INFINITY;
        }
        let g = gcd(a, c);
        let (a, c) = (a / g, c / g);
        if c < 0 {
            Cusp { a: -a, c: -c }
        } else {
            Cusp { a, c }
        }
    }

    /// A matrix `sigma` with `sigma(infinity) = a/c`.
    pub fn sigma(&self) -> SL2Matrix {
        SL2Matrix::with_first_column(self.a, self.c).expect("cusp is in lowest terms")
    }
}

impl fmt::Display for Cusp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.c == 0 {
            write!(f, "oo")
        } else {
            write!(f, "{}/{}", self.a, self.c)
        }
    }
}

fn check_supported(tag: &SubgroupTag) -> Result<()> {
    match tag.kind {
        Subgroup::Gamma2Prime => Err(Error::UnsupportedSubgroup("Gamma2Prime")),
        _ => Ok(()),
    }
}

/// Smallest `w > 0` with `sigma T^w sigma^{-1}` in the group.
pub fn cusp_width(cusp: &Cusp, tag: &SubgroupTag) -> Result<u64> {
    check_supported(tag)?;
    let s = cusp.sigma();
    let si = s.inverse();
    (1..=tag.ctx.p as i64)
        .find(|&w| tag.contains(&s.mul(&SL2Matrix::t_pow(w)).mul(&si)))
        .map(|w| w as u64)
        .ok_or(Error::UnsupportedSubgroup("width exceeds the level"))
}

/// Whether `x` and `y` are in the same orbit of the group.
pub fn cusps_equivalent(x: &Cusp, y: &Cusp, tag: &SubgroupTag) -> Result<bool> {
    check_supported(tag)?;
    let sx_inv = x.sigma().inverse();
    let sy = y.sigma();
    for n in 0..tag.ctx.p as i64 {
        let t = SL2Matrix::t_pow(n);
        for u in [t, t.neg()] {
            if tag.contains(&sy.mul(&u).mul(&sx_inv)) {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// Candidate cusps: every `Gamma_1(p)` class contains one of `a/p` or `1/c`.
fn candidates(p: i64) -> Vec<Cusp> {
    let mut out = vec![Cusp::INFINITY];
    out.extend((2..p).map(|a| Cusp::new(a, p)));
    out.push(Cusp::new(0, 1));
    out.extend((2..p).map(|c| Cusp::new(1, c)));
    out
}

/// Orbit representatives with their widths, duplicate-free, for
/// `Gamma_0(p)`, `Gamma_1(p)` and `Gamma_2(p)`.
pub fn cusp_set(tag: &SubgroupTag) -> Result<Vec<(Cusp, u64)>> {
    check_supported(tag)?;
    let mut reps: Vec<Cusp> = Vec::new();
    for x in candidates(tag.ctx.p_i64()) {
        let mut seen = false;
        for r in &reps {
            // equivalence of the two types (p | c vs p does not divide c) is impossible
            if (r.c % tag.ctx.p_i64() == 0) != (x.c % tag.ctx.p_i64() == 0) {
                continue;
            }
            if cusps_equivalent(&x, r, tag)? {
                seen = true;
                break;
            }
        }
        if !seen {
            reps.push(x);
        }
    }
    reps.into_iter().map(|c| Ok((c, cusp_width(&c, tag)?))).collect()
}

/// `[PSL(2, Z) : image of the group]`, which the widths must sum to.
pub fn projective_index(tag: &SubgroupTag) -> u64 {
    let p = tag.ctx.p;
    match tag.kind {
        Subgroup::Gamma0 => p + 1,
        Subgroup::Gamma1 => (p * p - 1) / 2,
        Subgroup::Gamma2 => (p + 1) * tag.ctx.k,
        // Gamma_2' has index 2 in Gamma_2 and contains -I
        Subgroup::Gamma2Prime => 2 * (p + 1) * tag.ctx.k,
    }
}
