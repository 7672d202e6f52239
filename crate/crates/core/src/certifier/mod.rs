//! Per-prime certification of the cyclic covering `X_2'(p) -> X_0(p)` of
//! degree `2 N_p`.
//!
//! [`certify`] runs every check for one prime and assembles a [`CertReport`];
//! [`certify_range`] does so for all primes in a range, one report per prime.

mod checks;
mod report;

use std::fs;
use std::path::{Path, PathBuf};

pub use checks::{
    certified_function, cusp_order, cusp_orders, invariance_group, verify_integrality, verify_invariance,
    verify_multiplier, verify_quotient, verify_shifting, verify_transform, verify_z_relation, z_product,
};
pub use report::{Branch, CertReport, CheckResult, CuspRow, Status};

use crate::arith::{is_prime, make_context, odd_primitive_root, primes_in, PrimeContext};
use crate::error::{Error, Result};
use crate::numeric::Sampling;
use crate::par::{self, Execution};

#[derive(Clone, Debug)]
pub struct CertConfig {
    /// Index `h` of `F_h`.
    pub h: i64,
    /// Exact series are compared this many integer powers of `q` past the
    /// leading exponent.
    pub steps: u64,
    /// Random group elements per numeric check (and per group where two are used).
    pub group_samples: usize,
    pub seed: u64,
    pub tol: f64,
    pub sampling: Sampling,
}

impl Default for CertConfig {
    fn default() -> Self {
        CertConfig { h: 1, steps: 10, group_samples: 20, seed: 0x5eed, tol: 1e-8, sampling: Sampling::default() }
    }
}

impl CertConfig {
    pub fn with_execution(mut self, exec: Execution) -> Self {
        self.sampling.exec = exec;
        self
    }

    fn exec(&self) -> Execution {
        self.sampling.exec
    }
}

pub fn branch_of(ctx: &PrimeContext) -> Branch {
    match ctx.ell {
        1 => Branch::G,
        l if l % 2 == 0 => Branch::FChi,
        _ => Branch::FPsi,
    }
}

/// `p = 2, 3`: the cover is `x -> x^2` on the multiplicative group, of degree 2.
fn small_prime_report(p: u64) -> CertReport {
    // (p - 1, 12) / 2 is 0 for p = 2 and 1 for p = 3; g is 1 resp. 5
    let (g, ell) = if p == 2 { (1, 0) } else { (5, 1) };
    CertReport {
        p,
        g,
        k: 1,
        ell,
        np: 1,
        degree: 2,
        branch: Branch::SmallP,
        checks: Vec::new(),
        cusps: Vec::new(),
        overall: true,
    }
}

const CHECKS: usize = 7;

/// Runs all checks for the prime `p`.
pub fn certify(p: i64, config: &CertConfig) -> Result<CertReport> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p < 5 {
        return Ok(small_prime_report(p as u64));
    }
    debug_assert!(odd_primitive_root(p).is_ok());
    let ctx = make_context(p)?;
    let cfg = config;
    let n = cfg.group_samples;
    // independent checks; the cusp table travels with the cusp-order check
    let results = par::map_range(cfg.exec(), CHECKS, |i| match i {
        0 => (verify_shifting(&ctx, cfg.steps), None),
        1 => (verify_invariance(&ctx, cfg.h, cfg.steps, &cfg.sampling, n, cfg.seed, cfg.tol), None),
        2 => {
            let (c, rows) = cusp_orders(&ctx, cfg.h);
            (c, Some(rows))
        }
        3 => (verify_z_relation(&ctx, cfg.steps), None),
        4 => (verify_quotient(&ctx), None),
        5 => (verify_multiplier(&ctx, &cfg.sampling, n, cfg.seed, cfg.tol), None),
        6 => (verify_transform(&ctx, cfg.h, &cfg.sampling, n, cfg.seed, cfg.tol), None),
        _ => unreachable!(),
    });
    let mut checks = Vec::with_capacity(CHECKS + 1);
    let mut cusps = Vec::new();
    for (c, rows) in results {
        checks.push(c);
        if let Some(rows) = rows {
            cusps = rows;
        }
    }
    checks.push(verify_integrality(&ctx, cfg.h, cfg.steps));
    let overall = CertReport::verdict(&checks);
    Ok(CertReport {
        p: ctx.p,
        g: ctx.g,
        k: ctx.k,
        ell: ctx.ell,
        np: ctx.np(),
        degree: ctx.degree(),
        branch: branch_of(&ctx),
        checks,
        cusps,
        overall,
    })
}

/// Certifies every prime in `lo..=hi`, fanning out over primes.
pub fn certify_range(lo: i64, hi: i64, config: &CertConfig) -> Vec<CertReport> {
    let primes = primes_in(lo, hi);
    par::map(config.exec(), &primes, |&p| certify(p, config).expect("p is prime"))
}

/// File name used for the report of `p`.
pub fn report_file_name(p: u64) -> String {
    format!("p{p:04}.json")
}

/// Writes the report as pretty-printed JSON into `dir`, returning the path.
pub fn write_report(dir: &Path, report: &CertReport) -> std::io::Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let path = dir.join(report_file_name(report.p));
    fs::write(&path, report.to_json() + "\n")?;
    Ok(path)
}
