//! Γ, γ(x) = Γ(x)/Γ(1−x), s(x) = π/sin(πx) and rational powers at a chosen precision.
//!
//! `ln Γ` is evaluated by shifting the argument to `z = x + n ≥ M` and summing the
//! Stirling series
//!
//! ```text
//! ln Γ(z) = (z − ½) ln z − z + ½ ln 2π + Σ_{k≥1} B_{2k} / (2k(2k−1) z^{2k−1}) + R_K(z)
//! ```
//!
//! For real `z > 0` the remainder after `K` terms has the sign of, and is bounded in
//! magnitude by, the first omitted term. With `M ≈ 0.12·bits` the terms fall below
//! `2^-bits` long before they start to grow (their minimum is near `e^{-2πz}`), so the
//! series is truncated at the first term smaller than the working epsilon. The shift is
//! undone with `ln Π_{k<n}(x + k)`. Bernoulli numbers are exact rationals.

use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, Zero};

use crate::bigreal::{big_rational, BigReal, PrecisionContext};
use crate::error::{Error, Result};
use crate::report::{residual, Residual, VerificationReport};

static STIRLING: OnceLock<Mutex<Vec<BigRational>>> = OnceLock::new();

/// `B_{2k} / (2k(2k−1))` for `k = 1..=count`.
fn stirling_coefficients(count: usize) -> Vec<BigRational> {
    let cache = STIRLING.get_or_init(|| Mutex::new(Vec::new()));
    let mut coeffs = cache.lock().expect("stirling cache poisoned");
    if coeffs.len() < count {
        let bern = bernoulli_numbers(2 * count);
        *coeffs = (1..=count)
            .map(|k| {
                let d = BigInt::from((2 * k) as u64 * (2 * k - 1) as u64);
                &bern[2 * k] / BigRational::from_integer(d)
            })
            .collect();
    }
    coeffs[..count].to_vec()
}

/// `B_0..=B_m` from `Σ_{k≤m} C(m+1,k) B_k = 0`.
pub fn bernoulli_numbers(m: usize) -> Vec<BigRational> {
    let mut b: Vec<BigRational> = Vec::with_capacity(m + 1);
    b.push(BigRational::one());
    for n in 1..=m {
        if n > 1 && n % 2 == 1 {
            b.push(BigRational::zero());
            continue;
        }
        let mut sum = BigRational::zero();
        let mut binom = BigInt::one();
        for (k, bk) in b.iter().enumerate() {
            if !bk.is_zero() {
                sum += bk * BigRational::from_integer(binom.clone());
            }
            binom = binom * BigInt::from(n + 1 - k) / BigInt::from(k + 1);
        }
        b.push(-sum / BigRational::from_integer(BigInt::from(n + 1)));
    }
    b
}

fn domain(function: &'static str, x: Rational64) -> Error {
    Error::Domain { function, value: x.to_string() }
}

/// `ln Γ(x)` for real `x > 0`.
pub fn ln_gamma(x: &BigReal) -> Result<BigReal> {
    if !x.is_positive() {
        return Err(Error::Domain { function: "ln_gamma", value: x.to_decimal(20) });
    }
    let ctx = x.context();
    let bits = ctx.bits();
    let m = (0.12 * bits as f64).ceil() as i64 + 2;
    let floor = x.to_f64().floor() as i64;
    let shift = (m - floor).max(0);

    let mut z = x.clone();
    let mut prod = BigReal::one(ctx);
    for _ in 0..shift {
        prod = &prod * &z;
        z = &z + &BigReal::one(ctx);
    }

    let half = BigReal::from_ratio(1, 2, ctx);
    let two_pi = BigReal::pi(ctx) * BigReal::from_i64(2, ctx);
    let mut acc = &(&z - &half) * &z.ln()? - &z + &half * &two_pi.ln()?;

    let tiny_exp = -(bits as i64) - 4;
    let zinv = z.recip();
    let zinv2 = &zinv * &zinv;
    let mut zpow = zinv;
    let mut count = 16;
    let mut k = 0;
    loop {
        let coeffs = stirling_coefficients(count);
        while k < count {
            let term = &big_rational(&coeffs[k], ctx) * &zpow;
            acc = &acc + &term;
            k += 1;
            if term.binary_exponent().map_or(true, |e| e < tiny_exp) {
                return Ok(acc - prod.ln()?);
            }
            zpow = &zpow * &zinv2;
        }
        count *= 2;
        debug_assert!(count < 4 * bits, "Stirling series failed to converge");
    }
}

/// Γ(x) for rational `x` that is not a nonpositive integer.
pub fn gamma(x: Rational64, ctx: PrecisionContext) -> Result<BigReal> {
    if x.is_integer() && *x.numer() <= 0 {
        return Err(Error::Pole(x.to_string()));
    }
    if x.is_positive() {
        return Ok(ln_gamma(&BigReal::from_rational(&x, ctx))?.exp());
    }
    // Γ(x) = π / (sin(πx) Γ(1 − x))
    let one_minus = Rational64::one() - x;
    let pi = BigReal::pi(ctx);
    let sin = (&pi * &BigReal::from_rational(&x, ctx)).sin();
    Ok(&pi / &(&sin * &gamma(one_minus, ctx)?))
}

/// `ln Γ(x)` for rational `x > 0`.
pub fn ln_gamma_rational(x: Rational64, ctx: PrecisionContext) -> Result<BigReal> {
    if !x.is_positive() {
        return Err(domain("ln_gamma", x));
    }
    ln_gamma(&BigReal::from_rational(&x, ctx))
}

/// γ(x) = Γ(x)/Γ(1−x) on `0 < x < 1`.
pub fn gamma_tilde(x: Rational64, ctx: PrecisionContext) -> Result<BigReal> {
    if !in_unit_interval(x) {
        return Err(domain("gamma_tilde", x));
    }
    let one_minus = Rational64::one() - x;
    Ok((ln_gamma_rational(x, ctx)? - ln_gamma_rational(one_minus, ctx)?).exp())
}

/// γ(x) = Γ(x)/Γ(1−x) for any rational `x` away from the poles of both factors.
pub fn gamma_ratio(x: Rational64, ctx: PrecisionContext) -> Result<BigReal> {
    if x.is_integer() {
        return Err(domain("gamma_ratio", x));
    }
    Ok(gamma(x, ctx)? / gamma(Rational64::one() - x, ctx)?)
}

/// s(x) = π / sin(πx) on `0 < x < 1`.
pub fn s_factor(x: Rational64, ctx: PrecisionContext) -> Result<BigReal> {
    if !in_unit_interval(x) {
        return Err(domain("s_factor", x));
    }
    Ok(BigReal::pi(ctx) / sin_pi(x, ctx))
}

/// `base^e` for `base > 0`.
pub fn pow_rat(base: &BigReal, e: Rational64) -> Result<BigReal> {
    if !base.is_positive() {
        return Err(Error::Domain { function: "pow_rat", value: base.to_decimal(20) });
    }
    if e.is_integer() {
        return Ok(base.powi(*e.numer()));
    }
    let ctx = base.context();
    Ok((base.ln()? * BigReal::from_rational(&e, ctx)).exp())
}

/// `n^e` for a positive integer `n`.
pub fn int_pow_rat(n: i64, e: Rational64, ctx: PrecisionContext) -> Result<BigReal> {
    pow_rat(&BigReal::from_i64(n, ctx), e)
}

/// sin(πx).
pub fn sin_pi(x: Rational64, ctx: PrecisionContext) -> BigReal {
    (BigReal::pi(ctx) * BigReal::from_rational(&x, ctx)).sin()
}

/// cos(πx).
pub fn cos_pi(x: Rational64, ctx: PrecisionContext) -> BigReal {
    (BigReal::pi(ctx) * BigReal::from_rational(&x, ctx)).cos()
}

fn in_unit_interval(x: Rational64) -> bool {
    x.is_positive() && x < Rational64::one()
}

/// Residuals of the elementary trigonometric identities used to reduce the E8 and E7
/// Γ-products to closed form. Tolerance is the context epsilon.
pub fn trig_identities_suite(ctx: PrecisionContext) -> VerificationReport {
    let r = |p: i64, q: i64| Rational64::new(p, q);
    let s = |p: i64, q: i64| sin_pi(r(p, q), ctx);
    let c = |p: i64, q: i64| cos_pi(r(p, q), ctx);
    let n = |p: i64| BigReal::from_i64(p, ctx);
    let q = |p: i64, d: i64| BigReal::from_ratio(p, d, ctx);
    let sqrt5 = n(5).sqrt().expect("positive");
    let sqrt3 = n(3).sqrt().expect("positive");
    let alpha = s(1, 5);
    let phi4 = (n(1) + &sqrt5) / n(4);
    let psi4 = (&sqrt5 - n(1)) / n(4);
    let half_sqrt3 = &sqrt3 / n(2);

    let mut rows: Vec<(&str, BigReal, BigReal)> = Vec::new();
    for (label, num, den) in [("2a", 1, 7), ("2b", 2, 9)] {
        let x = r(num, den);
        let sx = sin_pi(x, ctx);
        let cx = cos_pi(x, ctx);
        let s3 = sin_pi(x * 3, ctx);
        if label == "2a" {
            rows.push(("2a", s3, &sx * &(n(4) * &cx * &cx - n(1))));
        } else {
            rows.push(("2b", s3, &sx * &(n(3) - n(4) * &sx * &sx)));
        }
    }
    rows.push(("3a.1", c(1, 5), s(3, 10)));
    rows.push(("3a.2", c(1, 5), phi4.clone()));
    rows.push(("3a.3", c(1, 5).recip(), &sqrt5 - n(1)));
    rows.push(("3b.1", c(2, 5), s(1, 10)));
    rows.push(("3b.2", c(2, 5), psi4.clone()));
    rows.push(("3c", &alpha * &alpha, (n(5) - &sqrt5) / n(8)));
    rows.push(("3d", &alpha * &s(2, 5), &sqrt5 / n(4)));
    rows.push(("3e", s(2, 5), (&sqrt5 + n(1)) / n(2) * &alpha));
    rows.push(("4", s(3, 10) / s(1, 10), n(4) * c(1, 5) * c(1, 5)));
    rows.push(("5a", s(1, 15) * s(4, 15), q(1, 2) * (c(1, 5) - c(1, 3))));
    rows.push(("5b", s(1, 15) * s(4, 15), (&sqrt5 - n(1)) / n(8)));
    rows.push(("6a", s(2, 15), -q(1, 2) * &alpha + &phi4 * &half_sqrt3));
    rows.push(("6b", s(4, 15), &phi4 * &alpha + &psi4 * &half_sqrt3));
    rows.push(("6c", s(8, 15), q(1, 2) * &alpha + &phi4 * &half_sqrt3));
    rows.push(("6d", s(1, 15), &phi4 * &alpha - &psi4 * &half_sqrt3));
    rows.push(("7a", s(1, 15) * s(4, 15), (&sqrt5 - n(1)) / n(8)));
    rows.push(("7b", s(2, 15) * s(8, 15), (&sqrt5 + n(1)) / n(8)));
    rows.push(("8a", s(7, 30), (n(1) - &sqrt5) / n(8) + (n(1) + &sqrt5) * &sqrt3 / n(4) * &alpha));
    rows.push(("8b", s(11, 30), (n(1) + &sqrt5) / n(8) + &half_sqrt3 * &alpha));
    rows.push(("8c.1", s(7, 30) * s(13, 30), (n(3) + &sqrt5) / n(8)));
    rows.push(("8c.2", s(7, 30) * s(13, 30), s(3, 10) * s(3, 10)));
    rows.push(("9", s(4, 15) * s(8, 15), s(3, 10) * s(11, 30)));
    rows.push(("*", s(1, 9) * s(2, 9) * s(4, 9), &sqrt3 / n(8)));

    let residuals: Vec<Residual> = rows.into_iter().map(|(label, lhs, rhs)| residual(label, lhs - rhs)).collect();
    VerificationReport::new("identities", "-", ctx.epsilon(), residuals)
}

/// Residual `|Γ(x)Γ(1−x) sin(πx)/π − 1|`.
pub fn reflection_residual(x: Rational64, ctx: PrecisionContext) -> Result<BigReal> {
    let lhs = gamma(x, ctx)? * gamma(Rational64::one() - x, ctx)? * sin_pi(x, ctx) / BigReal::pi(ctx);
    Ok((lhs - BigReal::one(ctx)).abs())
}

/// Relative residual of `Π_{i<n} Γ(x + i/n) = (2π)^{(n−1)/2} n^{1/2 − nx} Γ(nx)`.
pub fn multiplication_residual(x: Rational64, n: i64, ctx: PrecisionContext) -> Result<BigReal> {
    let mut lhs = BigReal::zero(ctx);
    for i in 0..n {
        lhs = lhs + ln_gamma_rational(x + Rational64::new(i, n), ctx)?;
    }
    let two_pi = BigReal::pi(ctx) * BigReal::from_i64(2, ctx);
    let rhs = BigReal::from_ratio(n - 1, 2, ctx) * two_pi.ln()?
        + BigReal::from_rational(&(Rational64::new(1, 2) - x * n), ctx) * BigReal::from_i64(n, ctx).ln()?
        + ln_gamma_rational(x * n, ctx)?;
    // relative error of the products equals |e^{lhs−rhs} − 1|
    Ok(((lhs - rhs).exp() - BigReal::one(ctx)).abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> PrecisionContext {
        PrecisionContext::default()
    }

    fn close(a: &BigReal, b: &BigReal, tol_exp: i64) -> bool {
        let tol = BigReal::from_i64(10, a.context()).powi(tol_exp);
        a.relative_error(b) < tol
    }

    #[test]
    fn bernoulli_small() {
        let b = bernoulli_numbers(12);
        let r = |p: i64, q: i64| BigRational::new(p.into(), q.into());
        assert_eq!(b[1], r(-1, 2));
        assert_eq!(b[2], r(1, 6));
        assert_eq!(b[4], r(-1, 30));
        assert_eq!(b[10], r(5, 66));
        assert_eq!(b[12], r(-691, 2730));
        assert!(b[11].is_zero());
    }

    #[test]
    fn gamma_half_is_sqrt_pi() {
        let g = gamma(Rational64::new(1, 2), ctx()).unwrap();
        let sp = BigReal::pi(ctx()).sqrt().unwrap();
        assert!(close(&g, &sp, -45));
    }

    #[test]
    fn gamma_integers_are_factorials() {
        let g = gamma(Rational64::from_integer(7), ctx()).unwrap();
        assert!(close(&g, &BigReal::from_i64(720, ctx()), -45));
        let g1 = gamma(Rational64::one(), ctx()).unwrap();
        assert!(close(&g1, &BigReal::one(ctx()), -45));
    }

    #[test]
    fn gamma_third_pair() {
        let c = ctx();
        let prod = gamma(Rational64::new(1, 3), c).unwrap() * gamma(Rational64::new(2, 3), c).unwrap();
        let expect = BigReal::pi(c) * BigReal::from_i64(2, c) / BigReal::from_i64(3, c).sqrt().unwrap();
        assert!(close(&prod, &expect, -45));
    }

    #[test]
    fn gamma_known_digits() {
        let g = gamma(Rational64::new(1, 3), ctx()).unwrap();
        let reference = BigReal::parse("2.6789385347077476336556929409746776441286893779573", ctx()).unwrap();
        assert!(close(&g, &reference, -48));
    }

    #[test]
    fn negative_arguments_and_poles() {
        let c = ctx();
        let g = gamma(Rational64::new(-1, 2), c).unwrap();
        let expect = -(BigReal::pi(c).sqrt().unwrap() * BigReal::from_i64(2, c));
        assert!(close(&g, &expect, -45));
        assert!(matches!(gamma(Rational64::zero(), c), Err(Error::Pole(_))));
        assert!(matches!(gamma(Rational64::from_integer(-3), c), Err(Error::Pole(_))));
    }

    #[test]
    fn tilde_and_s_domains() {
        let c = ctx();
        assert!(gamma_tilde(Rational64::one(), c).is_err());
        assert!(gamma_tilde(Rational64::zero(), c).is_err());
        assert!(s_factor(Rational64::new(3, 2), c).is_err());
        let g = gamma_tilde(Rational64::new(1, 2), c).unwrap();
        assert!(close(&g, &BigReal::one(c), -45));
        let pair = gamma_tilde(Rational64::new(1, 3), c).unwrap() * gamma_tilde(Rational64::new(2, 3), c).unwrap();
        assert!(close(&pair, &BigReal::one(c), -45));
    }

    #[test]
    fn s_factor_values() {
        let c = ctx();
        let pi = BigReal::pi(c);
        assert!(close(&s_factor(Rational64::new(1, 2), c).unwrap(), &pi, -45));
        let s4 = s_factor(Rational64::new(1, 4), c).unwrap();
        assert!(close(&s4, &(BigReal::from_i64(2, c).sqrt().unwrap() * &pi), -45));
        let ratio = s_factor(Rational64::new(1, 12), c).unwrap() / s_factor(Rational64::new(5, 12), c).unwrap();
        let r3 = BigReal::from_i64(3, c).sqrt().unwrap() + BigReal::one(c);
        assert!(close(&ratio, &(&r3 * &r3 / BigReal::from_i64(2, c)), -45));
    }

    #[test]
    fn gamma_squared_is_gamma_tilde_times_s() {
        let c = ctx();
        for x in [Rational64::new(1, 30), Rational64::new(7, 12), Rational64::new(2, 5)] {
            let g = gamma(x, c).unwrap();
            let rhs = gamma_tilde(x, c).unwrap() * s_factor(x, c).unwrap();
            assert!(close(&(&g * &g), &rhs, -45));
        }
    }

    #[test]
    fn pow_rat_cases() {
        let c = ctx();
        let two = pow_rat(&BigReal::from_i64(4, c), Rational64::new(1, 2)).unwrap();
        assert!(close(&two, &BigReal::from_i64(2, c), -45));
        assert!(pow_rat(&BigReal::zero(c), Rational64::new(1, 2)).is_err());
        assert!(pow_rat(&BigReal::from_i64(-2, c), Rational64::one()).is_err());
        let cube = pow_rat(&BigReal::from_i64(8, c), Rational64::new(-2, 3)).unwrap();
        assert!(close(&cube, &BigReal::from_ratio(1, 4, c), -45));
    }

    #[test]
    fn identities_pass_at_default_precision() {
        let rep = trig_identities_suite(ctx());
        assert!(rep.pass, "{:?}", rep.failures().collect::<Vec<_>>());
        assert_eq!(rep.residuals.len(), 25);
        assert!(rep.max_residual().log10_abs() < -40.0);
    }

    #[test]
    fn residuals_shrink_with_precision() {
        let lo = PrecisionContext::new(25).unwrap();
        let hi = PrecisionContext::new(50).unwrap();
        for x in [Rational64::new(1, 12), Rational64::new(7, 30), Rational64::new(11, 17)] {
            let a = reflection_residual(x, lo).unwrap().log10_abs();
            let b = reflection_residual(x, hi).unwrap().log10_abs();
            assert!(b == f64::NEG_INFINITY || (a.is_finite() && a - b >= 10.0), "{x}: {a} vs {b}");
        }
    }
}
