//! The individual per-prime checks. Each returns a [`CheckResult`]; errors
//! raised while checking are reported as failures, never propagated.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::arith::{int, is_integer, to_i64, PrimeContext, Rational};
use crate::congruence::{cusp_set, projective_index, quotient_structure, random_in, Subgroup, SubgroupTag};
use crate::error::Result;
use crate::eta::{build_f, build_z, leading_delta, modularity_criterion, EtaProduct};
use crate::numeric::{check_e_multiplier, check_f_transform, check_g_transform, transform_residual, Sampling};

use super::report::{CheckResult, CuspRow};

fn big_pow(g: u64, e: u64) -> BigInt {
    num_traits::pow(BigInt::from(g), e as usize)
}

fn or_fail(name: &str, r: Result<CheckResult>) -> CheckResult {
    r.unwrap_or_else(|e| CheckResult::failed(name, e.to_string()))
}

/// `F_h = F_{-h} = F_{p+h}` and `F_{g^k h} = -F_h` (`p = 1 mod 4`) or `F_h`
/// (`p = 3 mod 4`), as exact series `steps` integer powers past the leading
/// term, for `h` in `{1, 2, g}`.
pub fn verify_shifting(ctx: &PrimeContext, steps: u64) -> CheckResult {
    const NAME: &str = "shifting";
    if ctx.ell == 1 {
        return CheckResult::skipped(NAME, "ell = 1: F-branch replaced by G-branch");
    }
    or_fail(NAME, shifting(ctx, steps))
}

fn shifting(ctx: &PrimeContext, steps: u64) -> Result<CheckResult> {
    let p = BigInt::from(ctx.p);
    let expected = if ctx.p_mod_4() == 1 { -1 } else { 1 };
    let mut ok = true;
    let mut failures = Vec::new();
    let hs = [BigInt::one(), BigInt::from(2), BigInt::from(ctx.g)];
    for h in &hs {
        let base = build_f(h.clone(), ctx)?;
        let bound = base.leading_exponent() + int(steps as i64);
        let s = base.expand(&bound);
        let variants = [
            ("-h", -h.clone(), 1),
            ("p+h", &p + h, 1),
            ("g^k h", big_pow(ctx.g, ctx.k) * h, expected),
        ];
        for (label, idx, sign) in variants {
            let f = build_f(idx, ctx)?;
            let mut t = f.expand(&bound);
            if sign < 0 {
                t = t.neg();
            }
            if !s.equal_upto(&t, &bound)? {
                ok = false;
                failures.push(format!("h = {h}: {label}"));
            }
        }
    }
    let hs: Vec<String> = hs.iter().map(|h| h.to_string()).collect();
    let mut r = CheckResult::new(
        "shifting",
        ok,
        json!({ "h": hs, "steps": steps, "g^k_sign": expected }),
    );
    if !ok {
        r = r.with_reason(failures.join("; "));
    }
    Ok(r)
}

/// The function whose square root generates the covering: `F_h^2`, or
/// `G_h^2` on the `ell = 1` branch.
pub fn certified_function(ctx: &PrimeContext, h: i64) -> Result<EtaProduct> {
    let base = if ctx.ell == 1 {
        let t = crate::eta::find_triplet(ctx.p)?;
        crate::eta::build_g(t, ctx.p)?
    } else {
        build_f(h, ctx)?
    };
    Ok(base.pow(2))
}

/// The group the certified function is invariant under.
pub fn invariance_group(ctx: &PrimeContext) -> Subgroup {
    if ctx.ell == 1 {
        Subgroup::Gamma1
    } else {
        Subgroup::Gamma2
    }
}

pub(crate) fn rng_for(seed: u64, p: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ p.wrapping_mul(0x9e37_79b9_7f4a_7c15));
    rng.set_stream(stream);
    rng
}

/// Modularity criterion, numeric invariance under random group elements,
/// and rational (in fact integral) expansion coefficients.
pub fn verify_invariance(
    ctx: &PrimeContext,
    h: i64,
    steps: u64,
    sampling: &Sampling,
    count: usize,
    seed: u64,
    tol: f64,
) -> CheckResult {
    or_fail("invariance", invariance(ctx, h, steps, sampling, count, seed, tol))
}

fn invariance(
    ctx: &PrimeContext,
    h: i64,
    steps: u64,
    sampling: &Sampling,
    count: usize,
    seed: u64,
    tol: f64,
) -> Result<CheckResult> {
    let f = certified_function(ctx, h)?;
    let criterion = modularity_criterion(&f);
    let kind = invariance_group(ctx);
    let mut rng = rng_for(seed, ctx.p, 1);
    let mut max = 0.0f64;
    for _ in 0..count {
        let gamma = random_in(kind, ctx, &mut rng);
        let r = transform_residual(&f, &gamma, crate::arith::RootOfUnity::ONE, &f, sampling)?;
        max = if r.is_nan() { r } else { max.max(r) };
    }
    let integral = f.expand_steps(steps).has_integer_coefficients();
    let ok = criterion && max < tol && integral;
    Ok(CheckResult::new(
        "invariance",
        ok,
        json!({
            "function": f.to_string(),
            "group": kind.name(),
            "modularity_criterion": criterion,
            "max_residual": max,
            "samples": count,
            "integral_coefficients": integral,
        }),
    ))
}

/// Order of `prod E_g^{e_g}` at the cusp, in the local parameter `q^{1/width}`.
pub fn cusp_order(prod: &EtaProduct, cusp: &crate::congruence::Cusp, width: u64) -> Result<Rational> {
    let sigma = cusp.sigma();
    let mut sum = Rational::zero();
    for (&g, &e) in prod.exponents() {
        sum += int(e) * leading_delta(g as i64, prod.level(), &sigma)?;
    }
    Ok(sum * int(width as i64))
}

/// Orders of the certified function at every cusp of `X_2(p)` (`X_1(p)`
/// when `ell = 1`): all must be odd integers, and equal to `1` where `p`
/// does not divide `c`.
pub fn cusp_orders(ctx: &PrimeContext, h: i64) -> (CheckResult, Vec<CuspRow>) {
    match cusp_table(ctx, h) {
        Ok(x) => x,
        Err(e) => (CheckResult::failed("cusp-orders", e.to_string()), Vec::new()),
    }
}

fn cusp_table(ctx: &PrimeContext, h: i64) -> Result<(CheckResult, Vec<CuspRow>)> {
    let f = certified_function(ctx, h)?;
    let tag = SubgroupTag::new(invariance_group(ctx), ctx.clone());
    let set = cusp_set(&tag)?;
    let mut rows = Vec::with_capacity(set.len());
    let mut problems = Vec::new();
    for (cusp, width) in &set {
        let order = cusp_order(&f, cusp, *width)?;
        if !is_integer(&order) {
            problems.push(format!("{cusp}: non-integer order {order}"));
            continue;
        }
        let n = to_i64(&order).expect("order fits in i64");
        if n.rem_euclid(2) != 1 {
            problems.push(format!("{cusp}: even order {n}"));
        }
        if cusp.c % ctx.p_i64() != 0 && n != 1 {
            problems.push(format!("{cusp}: order {n} at a cusp with p not dividing c"));
        }
        rows.push(CuspRow { a: cusp.a, c: cusp.c, width: *width, order: n });
    }
    let width_sum: u64 = set.iter().map(|(_, w)| w).sum();
    let index = projective_index(&tag);
    if width_sum != index {
        problems.push(format!("width sum {width_sum} differs from index {index}"));
    }
    let ok = problems.is_empty();
    let mut r = CheckResult::new(
        "cusp-orders",
        ok,
        json!({
            "function": f.to_string(),
            "group": tag.kind.name(),
            "cusp_count": set.len(),
            "width_sum": width_sum,
            "index": index,
            // odd order at every cusp: the square root ramifies there with index 2
            "ramification_index": 2,
        }),
    );
    if !ok {
        r = r.with_reason(problems.join("; "));
    }
    Ok((r, rows))
}

/// `z = (eta / eta(p .))^{12/(p-1,12)} = +-prod_{j<k} F_{g^j}` as exact series.
pub fn verify_z_relation(ctx: &PrimeContext, steps: u64) -> CheckResult {
    const NAME: &str = "z-relation";
    if ctx.p % 8 == 1 {
        return CheckResult::skipped(NAME, "p = 1 mod 8");
    }
    or_fail(NAME, z_relation(ctx, steps))
}

/// `prod_{j<k} F_{g^j}` with exact integer indices.
pub fn z_product(ctx: &PrimeContext) -> Result<EtaProduct> {
    let mut prod = EtaProduct::one(ctx.p, "prod F");
    for j in 0..ctx.k {
        prod = prod.mul(&build_f(big_pow(ctx.g, j), ctx)?);
    }
    Ok(prod.with_label(format!("prod_(j<{}) F_(g^j)", ctx.k)))
}

fn z_relation(ctx: &PrimeContext, steps: u64) -> Result<CheckResult> {
    let lead = crate::eta::z_leading_exponent(ctx);
    let bound = &lead + int(steps as i64);
    let z = build_z(ctx, &bound);
    let prod = z_product(ctx)?;
    let s = prod.expand(&bound);
    let sign = if z.equal_upto(&s, &bound)? {
        Some(1)
    } else if z.equal_upto(&s.neg(), &bound)? {
        Some(-1)
    } else {
        None
    };
    let witness = json!({ "sign": sign, "steps": steps, "leading_exponent": lead.to_string() });
    let r = CheckResult::new("z-relation", sign.is_some(), witness);
    Ok(if sign.is_none() { r.with_reason("neither sign matches") } else { r })
}

/// `[Gamma_0 : Gamma_2] = k`, `[Gamma_2 : Gamma_1] = ell`, and the
/// character cutting out `Gamma_2'` has image of order `2k = 2 N_p`.
pub fn verify_quotient(ctx: &PrimeContext) -> CheckResult {
    or_fail(
        "quotient",
        quotient_structure(ctx).map(|q| {
            let ok = q.passed && q.image_order == ctx.degree();
            CheckResult::new(
                "quotient",
                ok,
                json!({
                    "index_gamma0_gamma2": q.index_gamma0_gamma2,
                    "index_gamma2_gamma1": q.index_gamma2_gamma1,
                    "image_order": q.image_order,
                    "degree": ctx.degree(),
                }),
            )
        }),
    )
}

/// The certified function's expansion at infinity has integer coefficients
/// and odd leading exponent, so its square root is not in `Q(X_2(p))`.
pub fn verify_integrality(ctx: &PrimeContext, h: i64, steps: u64) -> CheckResult {
    or_fail(
        "integrality",
        certified_function(ctx, h).and_then(|f| {
            let s = f.expand_steps(steps);
            let (lead, coeff) = s.leading()?;
            let integral = s.has_integer_coefficients();
            let odd = to_i64(&lead).is_some_and(|n| n.rem_euclid(2) == 1);
            Ok(CheckResult::new(
                "integrality",
                integral && odd && coeff.is_integer(),
                json!({
                    "leading_exponent": lead.to_string(),
                    "leading_coefficient": coeff.to_string(),
                    "integral_coefficients": integral,
                }),
            ))
        }),
    )
}

/// `E_g(gamma tau) = multiplier E_{ag}(tau)` for every reduced `g` and
/// random `gamma` in `Gamma_0(p)`.
pub fn verify_multiplier(ctx: &PrimeContext, sampling: &Sampling, count: usize, seed: u64, tol: f64) -> CheckResult {
    or_fail("multiplier", multiplier(ctx, sampling, count, seed, tol))
}

fn multiplier(ctx: &PrimeContext, sampling: &Sampling, count: usize, seed: u64, tol: f64) -> Result<CheckResult> {
    let mut rng = rng_for(seed, ctx.p, 2);
    let mut max = 0.0f64;
    for _ in 0..count {
        let gamma = random_in(Subgroup::Gamma0, ctx, &mut rng);
        for g in 1..=(ctx.p as i64 - 1) / 2 {
            let r = check_e_multiplier(g, ctx.p, &gamma, sampling, tol)?;
            max = if r.max.is_nan() { r.max } else { max.max(r.max) };
        }
    }
    Ok(CheckResult::new("multiplier", max < tol, json!({ "max_residual": max, "samples": count })))
}

/// `F_h(gamma tau) = psi(gamma) F_{ah}(tau)` on `Gamma_0(p)` together with the
/// `Gamma_2(p)` form; on the `ell = 1` branch `G_h(gamma tau) = psi(gamma) G_h(tau)`
/// on `Gamma_1(p)`.
pub fn verify_transform(
    ctx: &PrimeContext,
    h: i64,
    sampling: &Sampling,
    count: usize,
    seed: u64,
    tol: f64,
) -> CheckResult {
    or_fail("transform", transform(ctx, h, sampling, count, seed, tol))
}

fn transform(
    ctx: &PrimeContext,
    h: i64,
    sampling: &Sampling,
    count: usize,
    seed: u64,
    tol: f64,
) -> Result<CheckResult> {
    let mut rng = rng_for(seed, ctx.p, 3);
    let mut max = 0.0f64;
    let mut bump = |r: f64| max = if r.is_nan() { r } else { max.max(r) };
    if ctx.ell == 1 {
        let t = crate::eta::find_triplet(ctx.p)?;
        for _ in 0..count {
            let gamma = random_in(Subgroup::Gamma1, ctx, &mut rng);
            bump(check_g_transform(ctx.p, t, &gamma, sampling, tol)?.max);
        }
        return Ok(CheckResult::new(
            "transform",
            max < tol,
            json!({ "function": "G", "triplet": [t.0, t.1, t.2], "max_residual": max, "samples": count }),
        ));
    }
    for kind in [Subgroup::Gamma0, Subgroup::Gamma2] {
        for _ in 0..count {
            let gamma = random_in(kind, ctx, &mut rng);
            bump(check_f_transform(ctx, h, &gamma, sampling, tol)?.max);
        }
    }
    Ok(CheckResult::new(
        "transform",
        max < tol,
        json!({ "function": "F", "h": h, "max_residual": max, "samples": 2 * count }),
    ))
}
