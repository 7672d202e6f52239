//! Double-precision evaluation of `E_g`, `eta` and eta products in the upper
//! half-plane, used to check transformation laws numerically.
//!
//! Everything is computed as a logarithm: `ln E_g = 2 pi i tau lead + sum ln(1 - q^n)`
//! with `q^n = e^{2 pi i n tau}` formed directly. Ratios are then
//! `exp(ln b - ln a)`, which stays accurate when `gamma tau` sits close to
//! the real axis and the values themselves under- or overflow.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use num_traits::ToPrimitive;

use crate::arith::{int, to_f64, PrimeContext, Rational, RootOfUnity};
use crate::congruence::{membership, multiplier_e, psi, SL2Matrix, Subgroup};
use crate::error::{Error, Result};
use crate::eta::{build_f, build_g, e_leading_exponent, reduce_index, EtaProduct};
use crate::par::{self, Execution};
use crate::qexp::QSeries;

/// Default lower bound on the imaginary part of sample points.
pub const DEFAULT_FLOOR: f64 = 0.5;

/// Lower bound accepted for images `gamma tau`; the term count grows like
/// `1 / Im`, so this only guards against runaway evaluations.
pub const IMAGE_FLOOR: f64 = 1e-7;

/// Truncated tails are dropped once `|q|^n` falls below this.
const TAIL: f64 = 1e-18;

/// A point `tau` with `Im tau` above a floor.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UpperHalfPoint {
    re: f64,
    im: f64,
}

impl UpperHalfPoint {
    /// A point with `Im tau >= 0.5`.
    pub fn new(re: f64, im: f64) -> Result<Self> {
        Self::with_floor(re, im, DEFAULT_FLOOR)
    }

    pub fn with_floor(re: f64, im: f64, floor: f64) -> Result<Self> {
        if im.is_nan() || im <= 0.0 || !re.is_finite() || !im.is_finite() {
            return Err(Error::NotUpperHalf(im));
        }
        if im < floor {
            return Err(Error::BelowFloor { im, floor });
        }
        Ok(UpperHalfPoint { re, im })
    }

    pub fn re(&self) -> f64 {
        self.re
    }

    pub fn im(&self) -> f64 {
        self.im
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }

    /// `gamma tau = (a tau + b) / (c tau + d)`, checked against [`IMAGE_FLOOR`].
    pub fn act(&self, m: &SL2Matrix) -> Result<Self> {
        let t = self.to_complex();
        let num = t * m.a as f64 + m.b as f64;
        let den = t * m.c as f64 + m.d as f64;
        let w = num / den;
        // Im(gamma tau) = Im(tau) / |c tau + d|^2 exactly
        let im = self.im / den.norm_sqr();
        Self::with_floor(w.re, im, IMAGE_FLOOR)
    }

    /// `gamma tau` computed in exact rational arithmetic from the two
    /// doubles and rounded once at the end.
    pub fn act_exact(&self, m: &SL2Matrix) -> Result<Self> {
        let x = Rational::from_float(self.re).ok_or(Error::NotUpperHalf(self.im))?;
        let y = Rational::from_float(self.im).ok_or(Error::NotUpperHalf(self.im))?;
        let (a, b, c, d) = (int(m.a), int(m.b), int(m.c), int(m.d));
        // (a tau + b)(c conj(tau) + d) / |c tau + d|^2
        let den_re = &c * &x + &d;
        let den_im = &c * &y;
        let norm = &den_re * &den_re + &den_im * &den_im;
        let num_re = &a * &x + &b;
        let re = (&num_re * &den_re + &a * &y * &den_im) / &norm;
        let im = &y / &norm;
        Self::with_floor(to_f64(&re), to_f64(&im), IMAGE_FLOOR)
    }

    /// `s tau` for a positive integer `s`.
    pub fn scaled(&self, s: u64) -> Self {
        UpperHalfPoint { re: self.re * s as f64, im: self.im * s as f64 }
    }
}

/// The four default sample points `i`, `1/4 + i`, `-1/3 + 2i`, `0.1 + 0.8i`.
pub fn default_samples() -> Vec<UpperHalfPoint> {
    [(0.0, 1.0), (0.25, 1.0), (-1.0 / 3.0, 2.0), (0.1, 0.8)]
        .into_iter()
        .map(|(x, y)| UpperHalfPoint::new(x, y).expect("default samples respect the floor"))
        .collect()
}

/// How many factors of an infinite product to keep.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Terms {
    /// Enough factors that the dropped tail is below double precision.
    #[default]
    Auto,
    /// Exactly this many values of `m` in the product over `m >= 1`.
    Fixed(u64),
}

impl Terms {
    fn factors(self, level: u64, tau: &UpperHalfPoint) -> u64 {
        match self {
            Terms::Fixed(m) => m.max(1),
            Terms::Auto => {
                let n_max = (-TAIL.ln() / (TAU * tau.im)).ceil() as u64;
                n_max / level + 2
            }
        }
    }
}

/// `q^n = e^{2 pi i n tau}`, reducing the phase before exponentiating.
fn q_pow(n: u64, tau: &UpperHalfPoint) -> Complex64 {
    // n re = hi + lo exactly; hi mod 1 is exact, so the phase keeps full
    // precision even for the very large n needed close to the real axis
    let n = n as f64;
    let hi = n * tau.re;
    let lo = n.mul_add(tau.re, -hi);
    let phase = hi.rem_euclid(1.0) + lo;
    Complex64::from_polar((-TAU * n * tau.im).exp(), TAU * phase)
}

/// `2 pi i tau x` for a real exponent `x`.
fn q_log(x: f64, tau: &UpperHalfPoint) -> Complex64 {
    Complex64::new(-TAU * tau.im * x, TAU * tau.re * x)
}

fn ln_one_minus(w: Complex64) -> Complex64 {
    if w.norm() < 1e-4 {
        // -w - w^2/2 - w^3/3, exact to double precision here
        -(w + w * w / 2.0 + w * w * w / 3.0)
    } else {
        (Complex64::new(1.0, 0.0) - w).ln()
    }
}

/// A logarithm of `E_g(tau)` for `1 <= g <= N - 1`.
pub fn ln_e(g: i64, level: u64, tau: &UpperHalfPoint, terms: Terms) -> Result<Complex64> {
    let n = level as i64;
    if level < 2 {
        return Err(Error::BadLevel(level));
    }
    if g < 1 || g > n - 1 {
        return Err(Error::UnreducedIndex { g, max: level - 1 });
    }
    let lead = to_f64(&e_leading_exponent(g, level));
    let mut acc = q_log(lead, tau);
    let g = g as u64;
    for m in 1..=terms.factors(level, tau) {
        acc += ln_one_minus(q_pow(level * (m - 1) + g, tau));
        acc += ln_one_minus(q_pow(level * m - g, tau));
    }
    Ok(acc)
}

/// `E_g(tau)` by direct truncated-product evaluation.
pub fn eval_e(g: i64, level: u64, tau: &UpperHalfPoint, terms: Terms) -> Result<Complex64> {
    Ok(ln_e(g, level, tau, terms)?.exp())
}

/// A logarithm of `eta(s tau)`.
pub fn ln_eta(scale: u64, tau: &UpperHalfPoint, terms: Terms) -> Complex64 {
    let t = tau.scaled(scale);
    let mut acc = q_log(1.0 / 24.0, &t);
    for n in 1..=terms.factors(1, &t) {
        acc += ln_one_minus(q_pow(n, &t));
    }
    acc
}

/// A logarithm of an eta product, including its global sign.
pub fn ln_product(prod: &EtaProduct, tau: &UpperHalfPoint, terms: Terms) -> Result<Complex64> {
    let mut acc = if prod.sign() < 0 { Complex64::new(0.0, PI) } else { Complex64::new(0.0, 0.0) };
    for (&g, &e) in prod.exponents() {
        acc += ln_e(g as i64, prod.level(), tau, terms)? * e as f64;
    }
    Ok(acc)
}

pub fn eval_product(prod: &EtaProduct, tau: &UpperHalfPoint, terms: Terms) -> Result<Complex64> {
    Ok(ln_product(prod, tau, terms)?.exp())
}

/// A logarithm of `z = (eta(tau) / eta(p tau))^e`.
pub fn ln_z(ctx: &PrimeContext, tau: &UpperHalfPoint, terms: Terms) -> Complex64 {
    let e = crate::eta::z_exponent(ctx) as f64;
    (ln_eta(1, tau, terms) - ln_eta(ctx.p, tau, terms)) * e
}

/// Sums an exact series at `tau`. The dropped tail, relative to the leading
/// term, must be below `1e-15`.
pub fn eval_series(s: &QSeries, tau: &UpperHalfPoint) -> Result<Complex64> {
    let trunc = s.truncation_order();
    let reference = match s.leading() {
        Ok((lead, _)) => lead,
        Err(_) => num_traits::Zero::zero(),
    };
    let gap = to_f64(&(trunc - &reference));
    if (-TAU * tau.im * gap).exp() > 1e-15 {
        return Err(Error::InsufficientPrecision {
            bound: format!("relative order {gap} at Im(tau) = {}", tau.im),
            truncation: trunc.to_string(),
        });
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for (e, c) in s.terms() {
        let c = c.to_f64().unwrap_or_else(|| to_f64(c));
        acc += q_log(to_f64(&e), tau).exp() * c;
    }
    Ok(acc)
}

/// `|1 - exp(b - a)|`: the relative distance between `e^a` and `e^b`.
pub fn relative_residual(ln_a: Complex64, ln_b: Complex64) -> f64 {
    (Complex64::new(1.0, 0.0) - (ln_b - ln_a).exp()).norm()
}

fn ln_root(r: RootOfUnity) -> Complex64 {
    Complex64::new(0.0, TAU * to_f64(&r.turns()))
}

/// A maximal residual together with the tolerance it is judged against.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Residual {
    pub max: f64,
    pub tol: f64,
}

impl Residual {
    pub fn passed(&self) -> bool {
        self.max.is_finite() && self.max < self.tol
    }
}

/// Sample points, truncation policy and execution mode for the checks below.
#[derive(Clone, Debug)]
pub struct Sampling {
    pub samples: Vec<UpperHalfPoint>,
    pub terms: Terms,
    pub exec: Execution,
}

impl Default for Sampling {
    fn default() -> Self {
        Sampling { samples: default_samples(), terms: Terms::Auto, exec: Execution::default() }
    }
}

impl Sampling {
    fn max_over<F>(&self, f: F) -> Result<f64>
    where
        F: Fn(&UpperHalfPoint) -> Result<f64> + Sync + Send,
    {
        let vals = par::map(self.exec, &self.samples, f);
        let mut max = 0.0f64;
        for v in vals {
            let v = v?;
            // NaN must not be swallowed by f64::max
            max = if v.is_nan() || max.is_nan() { f64::NAN } else { max.max(v) };
        }
        Ok(max)
    }
}

/// Max over samples of the relative residual of
/// `lhs(gamma tau) = factor * rhs(tau)`.
pub fn transform_residual(
    lhs: &EtaProduct,
    gamma: &SL2Matrix,
    factor: RootOfUnity,
    rhs: &EtaProduct,
    sampling: &Sampling,
) -> Result<f64> {
    let inverse = gamma.inverse();
    sampling.max_over(|tau| {
        // Near the real axis ln f changes by ~1/Im^2 per unit of tau, so the
        // rounded image is taken as exact and pulled back exactly; both
        // sides are then evaluated at points related by gamma to full
        // precision.
        let image = tau.act(gamma)?;
        let back = image.act_exact(&inverse)?;
        let a = ln_product(lhs, &image, sampling.terms)?;
        let b = ln_product(rhs, &back, sampling.terms)? + ln_root(factor);
        Ok(relative_residual(a, b))
    })
}

/// Checks `E_g(gamma tau) = multiplier * E_{new index}(tau)` for `gamma` in
/// `Gamma_0(N)`; the right-hand index is reduced before evaluating.
pub fn check_e_multiplier(
    g: i64,
    level: u64,
    gamma: &SL2Matrix,
    sampling: &Sampling,
    tol: f64,
) -> Result<Residual> {
    let (mult, new_index) = multiplier_e(g, level, gamma)?;
    let lhs = EtaProduct::from_factors(level, format!("E_{g}"), [(g, 1)])?;
    let rhs = EtaProduct::from_factors(level, format!("E_{new_index}"), [(new_index, 1)])?;
    let max = transform_residual(&lhs, gamma, mult, &rhs, sampling)?;
    Ok(Residual { max, tol })
}

/// Checks `F_h(gamma tau) = psi(gamma) F_{ah}(tau)` on `Gamma_0(p)` and, for
/// `gamma` in `Gamma_2(p)`, `F_h(gamma tau) = psi(gamma) chi(gamma) F_h(tau)`
/// (`p = 1 mod 4`) or `psi(gamma) F_h(tau)` (`p = 3 mod 4`).
pub fn check_f_transform(
    ctx: &PrimeContext,
    h: i64,
    gamma: &SL2Matrix,
    sampling: &Sampling,
    tol: f64,
) -> Result<Residual> {
    if ctx.ell == 1 {
        return Err(Error::FBranchUnavailable(ctx.p));
    }
    if !membership(gamma, Subgroup::Gamma0, ctx) {
        return Err(Error::NotInGroup("Gamma_0(p)"));
    }
    let f = build_f(h, ctx)?;
    let f_ah = build_f(num_bigint::BigInt::from(gamma.a) * h, ctx)?;
    let s = RootOfUnity::from_sign(psi(gamma));
    let mut max = transform_residual(&f, gamma, s, &f_ah, sampling)?;
    if membership(gamma, Subgroup::Gamma2, ctx) {
        let c = if ctx.ell.is_multiple_of(2) { crate::congruence::chi(gamma, ctx)? } else { 1 };
        let r = transform_residual(&f, gamma, s * RootOfUnity::from_sign(c), &f, sampling)?;
        max = if r.is_nan() { r } else { max.max(r) };
    }
    Ok(Residual { max, tol })
}

/// Checks `G_h(gamma tau) = psi(gamma) G_h(tau)` for `gamma` in `Gamma_1(p)`.
pub fn check_g_transform(
    p: u64,
    triplet: (i64, i64, i64),
    gamma: &SL2Matrix,
    sampling: &Sampling,
    tol: f64,
) -> Result<Residual> {
    let g = build_g(triplet, p)?;
    let pi = p as i64;
    if gamma.c.rem_euclid(pi) != 0 || gamma.a.rem_euclid(pi) != 1 || gamma.d.rem_euclid(pi) != 1 {
        return Err(Error::NotInGroup("Gamma_1(p)"));
    }
    let s = RootOfUnity::from_sign(psi(gamma));
    let max = transform_residual(&g, gamma, s, &g, sampling)?;
    Ok(Residual { max, tol })
}

/// Relative distance between direct evaluation of `prod` and the sum of its
/// exact expansion, maximised over the samples.
pub fn cross_backend_residual(prod: &EtaProduct, series: &QSeries, sampling: &Sampling) -> Result<f64> {
    sampling.max_over(|tau| {
        let direct = ln_product(prod, tau, sampling.terms)?;
        let summed = eval_series(series, tau)?;
        Ok(relative_residual(direct, summed.ln()))
    })
}

/// `E_g(tau)` for any `g` not divisible by `N`, via `E_g = sign * E_{g_reduced}`.
pub fn eval_e_any(g: i64, level: u64, tau: &UpperHalfPoint, terms: Terms) -> Result<Complex64> {
    let idx = reduce_index(g, level)?;
    Ok(eval_e(idx.g_reduced as i64, level, tau, terms)? * idx.sign as f64)
}
