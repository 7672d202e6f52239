//! Exact generalized Dedekind eta products and the congruence-subgroup
//! machinery needed to certify, prime by prime, the cyclic covering
//! `X_2'(p) -> X_0(p)` of degree `2 N_p`.
//!
//! - [`arith`]: rationals, Bernoulli functions, roots of unity, primitive roots
//! - [`qexp`]: truncated `q`-series on fractional exponent lattices
//! - [`eta`]: `E_g`, `eta`, and the eta products `F_h`, `G_h`, `z`
//! - [`congruence`]: `SL(2, Z)`, subgroups of level `p`, characters, cusps
//! - [`numeric`]: complex evaluation used to check transformation laws
//! - [`certifier`]: per-prime certification reports
//! - [`cli`]: the command-line front end

pub mod arith;
pub mod certifier;
pub mod cli;
pub mod congruence;
pub mod error;
pub mod eta;
pub mod numeric;
pub mod par;
pub mod qexp;

pub use error::{Error, Result};
