//! Command-line front end.
//!
//! Exit codes: `0` on success, `2` on invalid input (including usage errors),
//! `1` when a computation fails or a certification does not pass.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::arith::{int, is_prime, make_context, primes_in, Rational};
use crate::certifier::{self, CertConfig, CertReport, Status};
use crate::congruence::{chi, cusp_set, epsilon, psi, SL2Matrix, Subgroup, SubgroupTag};
use crate::error::Error;
use crate::eta::{build_f, build_g, build_z, expand_eta, find_triplet, z_leading_exponent, EtaProduct};
use crate::par::Execution;

#[derive(Debug, Parser)]
#[command(name = "eta-cover", version, about = "Generalized eta products and level-p coverings of X_0(p)")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print an exact q-expansion.
    Expand(ExpandArgs),
    /// Evaluate psi, chi or the multiplier epsilon on a matrix.
    Character(CharacterArgs),
    /// List cusp representatives and widths of a level-p subgroup.
    Cusps(CuspsArgs),
    /// Certify one prime or a range of primes.
    Certify(CertifyArgs),
    /// Compare z = (eta / eta(p .))^e with the product of the F_(g^j).
    ZRelation(ZArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Function {
    /// E_g at level p (any level >= 2)
    #[value(name = "E")]
    E,
    /// F_h at the prime p
    #[value(name = "F")]
    F,
    /// G_h at p = 11 mod 12, with the smallest isotropic triplet
    #[value(name = "G")]
    G,
    /// z at the prime p
    #[value(name = "z")]
    Z,
    /// eta(s tau) with s = --index
    #[value(name = "eta")]
    Eta,
}

#[derive(Debug, Args)]
pub struct ExpandArgs {
    #[arg(long)]
    pub p: Option<i64>,
    #[arg(long, value_enum)]
    pub function: Function,
    #[arg(long, allow_hyphen_values = true)]
    pub index: Option<i64>,
    /// Integer powers of q past the leading exponent.
    #[arg(long, default_value_t = 10)]
    pub prec: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Which {
    Psi,
    Chi,
    Epsilon,
}

#[derive(Debug, Args)]
pub struct CharacterArgs {
    #[arg(long)]
    pub p: Option<i64>,
    /// Matrix entries `a,b,c,d`.
    #[arg(long, allow_hyphen_values = true)]
    pub matrix: String,
    #[arg(long, value_enum)]
    pub which: Which,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Group {
    #[value(name = "Gamma0", alias = "gamma0")]
    Gamma0,
    #[value(name = "Gamma1", alias = "gamma1")]
    Gamma1,
    #[value(name = "Gamma2", alias = "gamma2")]
    Gamma2,
}

#[derive(Debug, Args)]
pub struct CuspsArgs {
    #[arg(long)]
    pub p: i64,
    #[arg(long, value_enum, default_value = "Gamma2")]
    pub group: Group,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct CertifyArgs {
    #[arg(long, conflicts_with = "range", required_unless_present = "range")]
    pub p: Option<i64>,
    /// Inclusive range `A..B` (or `A..=B`).
    #[arg(long, value_parser = parse_range)]
    pub range: Option<(i64, i64)>,
    /// Directory receiving one JSON report per prime.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Print the reports as JSON instead of a summary table.
    #[arg(long)]
    pub json: bool,
    /// Index h of F_h.
    #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
    pub h: i64,
    /// Random group elements per numeric check.
    #[arg(long, default_value_t = 20)]
    pub samples: usize,
    #[arg(long, default_value_t = 10)]
    pub prec: u64,
    #[arg(long, default_value_t = 0x5eed)]
    pub seed: u64,
    /// Run without the thread pool.
    #[arg(long)]
    pub sequential: bool,
}

#[derive(Debug, Args)]
pub struct ZArgs {
    #[arg(long)]
    pub p: i64,
    #[arg(long, default_value_t = 10)]
    pub prec: u64,
}

fn parse_range(s: &str) -> Result<(i64, i64), String> {
    let (a, b) = s
        .split_once("..=")
        .or_else(|| s.split_once(".."))
        .ok_or_else(|| format!("expected A..B, got {s:?}"))?;
    let a: i64 = a.trim().parse().map_err(|_| format!("bad range start {a:?}"))?;
    let b: i64 = b.trim().parse().map_err(|_| format!("bad range end {b:?}"))?;
    if a > b {
        return Err(format!("empty range {a}..{b}"));
    }
    Ok((a, b))
}

/// A command failure with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure { code: if e.is_input_error() { 2 } else { 1 }, message: e.to_string() }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure { code: 1, message: e.to_string() }
    }
}

fn invalid(message: impl Into<String>) -> Failure {
    Failure { code: 2, message: message.into() }
}

fn require_p(p: Option<i64>) -> Result<i64, Failure> {
    p.ok_or_else(|| invalid("--p is required for this function"))
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return e.exit_code();
        }
    };
    match dispatch(&cli.command, out, err) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn dispatch(cmd: &Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    match cmd {
        Command::Expand(a) => expand(a, out),
        Command::Character(a) => character(a, out),
        Command::Cusps(a) => cusps(a, out),
        Command::Certify(a) => certify(a, out, err),
        Command::ZRelation(a) => z_relation(a, out),
    }
}

fn expand(a: &ExpandArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let steps = int(a.prec as i64);
    let series = match a.function {
        Function::E => {
            let n = require_p(a.p)?;
            if n < 2 {
                return Err(Error::BadLevel(n.max(0) as u64).into());
            }
            let g = a.index.ok_or_else(|| invalid("--index is required for E"))?;
            let prod = EtaProduct::from_factors(n as u64, format!("E_{g}"), [(g, 1)])?;
            prod.expand(&(prod.leading_exponent() + steps))
        }
        Function::F => {
            let ctx = make_context(require_p(a.p)?)?;
            let f = build_f(a.index.unwrap_or(1), &ctx)?;
            f.expand(&(f.leading_exponent() + steps))
        }
        Function::G => {
            let p = require_p(a.p)?;
            if !is_prime(p) {
                return Err(Error::NotPrime(p).into());
            }
            let g = build_g(find_triplet(p as u64)?, p as u64)?;
            g.expand(&(g.leading_exponent() + steps))
        }
        Function::Z => {
            let ctx = make_context(require_p(a.p)?)?;
            build_z(&ctx, &(z_leading_exponent(&ctx) + steps))
        }
        Function::Eta => {
            let s = a.index.unwrap_or(1);
            if s < 1 {
                return Err(invalid(format!("eta scale must be positive, got {s}")));
            }
            let lead = Rational::new(s.into(), 24.into());
            expand_eta(s as u64, &(lead + steps))
        }
    };
    writeln!(out, "{series}")?;
    Ok(0)
}

fn character(a: &CharacterArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let m: SL2Matrix = a.matrix.parse()?;
    match a.which {
        Which::Psi => writeln!(out, "{}", psi(&m))?,
        Which::Chi => {
            let ctx = make_context(require_p(a.p)?)?;
            writeln!(out, "{}", chi(&m, &ctx)?)?
        }
        Which::Epsilon => writeln!(out, "{}", epsilon(m.a, m.b, m.c, m.d)?)?,
    }
    Ok(0)
}

fn cusps(a: &CuspsArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let ctx = make_context(a.p)?;
    let kind = match a.group {
        Group::Gamma0 => Subgroup::Gamma0,
        Group::Gamma1 => Subgroup::Gamma1,
        Group::Gamma2 => Subgroup::Gamma2,
    };
    let set = cusp_set(&SubgroupTag::new(kind, ctx))?;
    if a.json {
        let rows: Vec<_> = set
            .iter()
            .map(|(c, w)| serde_json::json!({ "a": c.a, "c": c.c, "width": w }))
            .collect();
        writeln!(out, "{}", serde_json::to_string_pretty(&rows).expect("json"))?;
    } else {
        writeln!(out, "{:>8}  {:>5}", "cusp", "width")?;
        for (c, w) in &set {
            writeln!(out, "{:>8}  {:>5}", c.to_string(), w)?;
        }
    }
    Ok(0)
}

fn certify(a: &CertifyArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    let primes: Vec<i64> = match (a.p, a.range) {
        (Some(p), _) => {
            if !is_prime(p) {
                return Err(Error::NotPrime(p).into());
            }
            vec![p]
        }
        (None, Some((lo, hi))) => {
            let ps = primes_in(lo, hi);
            if ps.is_empty() {
                return Err(invalid(format!("no primes in {lo}..{hi}")));
            }
            ps
        }
        (None, None) => return Err(invalid("either --p or --range is required")),
    };
    if a.h == 0 {
        return Err(invalid("--h must not be 0"));
    }
    let exec = if a.sequential { Execution::Sequential } else { Execution::default() };
    let config = CertConfig { h: a.h, steps: a.prec, group_samples: a.samples, seed: a.seed, ..CertConfig::default() }
        .with_execution(exec);
    let reports: Vec<CertReport> = if primes.len() == 1 {
        vec![certifier::certify(primes[0], &config)?]
    } else {
        crate::par::map(exec, &primes, |&p| certifier::certify(p, &config))
            .into_iter()
            .collect::<crate::error::Result<_>>()?
    };
    if let Some(dir) = &a.out {
        for r in &reports {
            certifier::write_report(dir, r)?;
        }
        writeln!(err, "wrote {} report(s) to {}", reports.len(), dir.display())?;
    }
    if a.json {
        let text = if reports.len() == 1 {
            reports[0].to_json()
        } else {
            serde_json::to_string_pretty(&reports).expect("json")
        };
        writeln!(out, "{text}")?;
    } else {
        write_summary(&reports, out)?;
    }
    Ok(if reports.iter().all(|r| r.overall) { 0 } else { 1 })
}

fn write_summary(reports: &[CertReport], out: &mut dyn Write) -> std::io::Result<()> {
    writeln!(out, "{:>5}  {:<7}  {:>4}  {:>6}  {:>5}  {:>7}  result", "p", "branch", "Np", "degree", "cusps", "skipped")?;
    for r in reports {
        let skipped = r.checks.iter().filter(|c| c.status == Status::Skipped).count();
        let failed: Vec<&str> =
            r.checks.iter().filter(|c| c.status == Status::Fail).map(|c| c.name.as_str()).collect();
        let result = if r.overall { "pass".to_string() } else { format!("FAIL ({})", failed.join(", ")) };
        writeln!(
            out,
            "{:>5}  {:<7}  {:>4}  {:>6}  {:>5}  {:>7}  {}",
            r.p,
            r.branch.to_string(),
            r.np,
            r.degree,
            r.cusps.len(),
            skipped,
            result
        )?;
    }
    Ok(())
}

fn z_relation(a: &ZArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let ctx = make_context(a.p)?;
    let c = certifier::verify_z_relation(&ctx, a.prec);
    let product = certifier::z_product(&ctx)?;
    match c.status {
        Status::Skipped => {
            writeln!(out, "skipped: {}", c.reason.unwrap_or_default())?;
            Ok(0)
        }
        Status::Pass => {
            let sign = c.witness.as_ref().and_then(|w| w["sign"].as_i64()).unwrap_or(0);
            let s = if sign < 0 { "-" } else { "+" };
            writeln!(out, "z = {s}{}", product.label())?;
            writeln!(out, "checked to q^({})", z_leading_exponent(&ctx) + int(a.prec as i64))?;
            Ok(0)
        }
        Status::Fail => {
            writeln!(out, "z relation fails: {}", c.reason.unwrap_or_default())?;
            Ok(1)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut full = vec!["eta-cover"];
        full.extend_from_slice(args);
        let code = run(full, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn ranges() {
        assert_eq!(parse_range("5..50"), Ok((5, 50)));
        assert_eq!(parse_range("5..=7"), Ok((5, 7)));
        assert!(parse_range("9..5").is_err());
        assert!(parse_range("x..5").is_err());
    }

    #[test]
    fn characters() {
        assert_eq!(call(&["character", "--matrix", "1,1,0,1", "--which", "psi"]).1, "-1\n");
        assert_eq!(call(&["character", "--matrix", "1,0,1,1", "--which", "epsilon"]).1, "e^(2*pi*i*11/12)\n");
        assert_eq!(call(&["character", "--matrix", "-1,0,0,-1", "--which", "psi"]).1, "1\n");
        assert_eq!(call(&["character", "--matrix", "1,1,1,1", "--which", "psi"]).0, 2);
        assert_eq!(call(&["character", "--p", "7", "--matrix", "1,0,7,1", "--which", "chi"]).0, 2);
        assert_eq!(call(&["character", "--p", "13", "--matrix", "1,1,13,14", "--which", "chi"]).1, "1\n");
    }

    #[test]
    fn expansions() {
        let (code, out, _) = call(&["expand", "--p", "13", "--function", "z", "--prec", "10"]);
        assert_eq!(code, 0);
        assert!(out.starts_with("1*q^(-1/2) + "), "{out}");
        assert_eq!(call(&["expand", "--p", "5", "--function", "E", "--index", "0"]).0, 2);
        assert_eq!(call(&["expand", "--p", "4", "--function", "F"]).0, 2);
        assert_eq!(call(&["expand", "--p", "13", "--function", "G"]).0, 2);
        assert_eq!(call(&["expand", "--function", "eta", "--prec", "2"]).0, 0);
    }

    #[test]
    fn certify_exit_codes() {
        assert_eq!(call(&["certify", "--p", "4"]).0, 2);
        assert!(call(&["certify", "--p", "4"]).2.contains("not prime"));
        assert_eq!(call(&["certify"]).0, 2);
        let (code, out, _) = call(&["certify", "--p", "13", "--samples", "2"]);
        assert_eq!(code, 0);
        assert!(out.contains("pass"));
    }
}
