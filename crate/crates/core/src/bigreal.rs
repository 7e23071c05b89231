//! Arbitrary-precision reals bound to a decimal working precision.
//!
//! [`BigReal`] wraps an `astro_float::BigFloat`. Every value remembers the
//! [`PrecisionContext`] it was produced under; binary operations run at the
//! larger of the two precisions. Internally each context carries
//! [`GUARD_DIGITS`] extra decimal digits, so a chain of a few hundred
//! correctly rounded operations still meets the advertised bound of
//! `10^(10 - digits)` relative error.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use astro_float::{BigFloat, Consts, Radix, RoundingMode, Sign};
use num_bigint::BigInt;
use num_rational::Rational64;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Extra decimal digits carried beyond the requested precision.
pub const GUARD_DIGITS: u32 = 20;
pub const DEFAULT_DIGITS: u32 = 50;
pub const MIN_DIGITS: u32 = 20;

const RM: RoundingMode = RoundingMode::ToEven;
const LOG2_10: f64 = std::f64::consts::LOG2_10;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("astro-float constants cache"));
}

fn with_consts<T>(f: impl FnOnce(&mut Consts) -> T) -> T {
    CONSTS.with(|cc| f(&mut cc.borrow_mut()))
}

/// Decimal working precision shared by a computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrecisionContext {
    digits: u32,
}

impl PrecisionContext {
    pub fn new(digits: u32) -> Result<Self> {
        if digits < MIN_DIGITS {
            return Err(Error::Precision { min: MIN_DIGITS, got: digits });
        }
        Ok(Self { digits })
    }

    /// Requested (guaranteed) decimal digits.
    pub fn digits(&self) -> u32 {
        self.digits
    }

    /// Binary working precision, guard digits included, rounded up to whole words.
    pub fn bits(&self) -> usize {
        let bits = ((self.digits + GUARD_DIGITS) as f64 * LOG2_10).ceil() as usize;
        bits.div_ceil(64) * 64
    }

    /// The context used for intermediate results that need more headroom.
    pub fn widened(&self, extra_digits: u32) -> Self {
        Self { digits: self.digits + extra_digits }
    }

    /// Advertised relative error of each primitive: `10^(10 - digits)`.
    pub fn epsilon(&self) -> BigReal {
        BigReal::from_i64(10, *self).powi(10 - self.digits as i64)
    }
}

impl Default for PrecisionContext {
    fn default() -> Self {
        Self { digits: DEFAULT_DIGITS }
    }
}

/// A finite real number carried at a [`PrecisionContext`].
#[derive(Clone)]
pub struct BigReal {
    value: BigFloat,
    ctx: PrecisionContext,
}

impl BigReal {
    fn wrap(value: BigFloat, ctx: PrecisionContext) -> Self {
        debug_assert!(!value.is_nan(), "BigReal produced NaN");
        Self { value, ctx }
    }

    pub fn context(&self) -> PrecisionContext {
        self.ctx
    }

    /// Re-binds the value to `ctx`, rounding if the new precision is lower.
    pub fn with_context(&self, ctx: PrecisionContext) -> Self {
        let mut value = self.value.clone();
        let _ = value.set_precision(ctx.bits(), RM);
        Self { value, ctx }
    }

    pub fn zero(ctx: PrecisionContext) -> Self {
        Self::from_i64(0, ctx)
    }

    pub fn one(ctx: PrecisionContext) -> Self {
        Self::from_i64(1, ctx)
    }

    pub fn from_i64(n: i64, ctx: PrecisionContext) -> Self {
        Self::wrap(BigFloat::from_i64(n, ctx.bits()), ctx)
    }

    pub fn from_ratio(num: i64, den: i64, ctx: PrecisionContext) -> Self {
        assert!(den != 0, "zero denominator");
        Self::from_i64(num, ctx) / Self::from_i64(den, ctx)
    }

    pub fn from_rational(r: &Rational64, ctx: PrecisionContext) -> Self {
        Self::from_ratio(*r.numer(), *r.denom(), ctx)
    }

    pub fn from_bigint(n: &BigInt, ctx: PrecisionContext) -> Self {
        let digits = n.to_string();
        let value = with_consts(|cc| BigFloat::parse(&digits, Radix::Dec, ctx.bits(), RM, cc));
        Self::wrap(value, ctx)
    }

    pub fn from_big_ratio(num: &BigInt, den: &BigInt, ctx: PrecisionContext) -> Self {
        Self::from_bigint(num, ctx) / Self::from_bigint(den, ctx)
    }

    /// Exact conversion of an `f64` (useful for bridging to double-precision code).
    pub fn from_f64(x: f64, ctx: PrecisionContext) -> Self {
        Self::wrap(BigFloat::from_f64(x, ctx.bits()), ctx)
    }

    /// Parses a decimal literal such as `"1.5"` or `"-2.25e-3"`.
    pub fn parse(s: &str, ctx: PrecisionContext) -> Option<Self> {
        let value = with_consts(|cc| BigFloat::parse(s, Radix::Dec, ctx.bits(), RM, cc));
        if value.is_nan() || value.is_inf() {
            None
        } else {
            Some(Self::wrap(value, ctx))
        }
    }

    pub fn pi(ctx: PrecisionContext) -> Self {
        Self::wrap(with_consts(|cc| cc.pi(ctx.bits(), RM)), ctx)
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        !self.value.is_zero() && self.value.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        !self.value.is_zero() && self.value.is_negative()
    }

    pub fn abs(&self) -> Self {
        Self::wrap(self.value.abs(), self.ctx)
    }

    pub fn recip(&self) -> Self {
        Self::one(self.ctx) / self
    }

    pub fn sqrt(&self) -> Result<Self> {
        if self.is_negative() {
            return Err(domain("sqrt", self));
        }
        Ok(Self::wrap(self.value.sqrt(self.ctx.bits(), RM), self.ctx))
    }

    pub fn exp(&self) -> Self {
        let p = self.ctx.bits();
        Self::wrap(with_consts(|cc| self.value.exp(p, RM, cc)), self.ctx)
    }

    pub fn ln(&self) -> Result<Self> {
        if !self.is_positive() {
            return Err(domain("ln", self));
        }
        let p = self.ctx.bits();
        Ok(Self::wrap(with_consts(|cc| self.value.ln(p, RM, cc)), self.ctx))
    }

    pub fn sin(&self) -> Self {
        let p = self.ctx.bits();
        Self::wrap(with_consts(|cc| self.value.sin(p, RM, cc)), self.ctx)
    }

    pub fn cos(&self) -> Self {
        let p = self.ctx.bits();
        Self::wrap(with_consts(|cc| self.value.cos(p, RM, cc)), self.ctx)
    }

    /// Integer power by repeated squaring; negative exponents invert.
    pub fn powi(&self, n: i64) -> Self {
        let mut result = Self::one(self.ctx);
        let mut base = self.clone();
        let mut e = n.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        if n < 0 {
            result.recip()
        } else {
            result
        }
    }

    /// `self^exponent` for a positive base.
    pub fn powf(&self, exponent: &BigReal) -> Result<Self> {
        if !self.is_positive() {
            return Err(domain("pow", self));
        }
        Ok((&self.ln()? * exponent).exp())
    }

    pub fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    /// Approximate base-2 exponent: `|x|` lies in `[2^(e-1), 2^e)`. `None` for zero.
    pub fn binary_exponent(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            self.value.exponent().map(i64::from)
        }
    }

    /// Nearest double (53 significant bits of the mantissa).
    pub fn to_f64(&self) -> f64 {
        let Some((words, _, sign, exp, _)) = self.value.as_raw_parts() else {
            return f64::NAN;
        };
        if self.value.is_zero() {
            return 0.0;
        }
        let top = *words.last().expect("non-empty mantissa") as f64;
        let next = if words.len() > 1 { words[words.len() - 2] as f64 } else { 0.0 };
        let mant = (top + next / 2f64.powi(64)) / 2f64.powi(64);
        let x = mant * 2f64.powi(exp);
        if sign == Sign::Neg {
            -x
        } else {
            x
        }
    }

    /// `round(self * 10^scale)` as an exact integer.
    pub fn to_scaled_bigint(&self, scale: u32) -> BigInt {
        let scaled = self * &Self::from_bigint(&BigInt::from(10u8).pow(scale), self.ctx);
        let Some((words, _, sign, exp, _)) = scaled.value.as_raw_parts() else {
            return BigInt::zero();
        };
        if scaled.value.is_zero() {
            return BigInt::zero();
        }
        // value = mantissa / 2^(64 * len) * 2^exp
        let mut mant = BigInt::zero();
        for w in words.iter().rev() {
            mant = (mant << 64) + BigInt::from(*w);
        }
        let shift = exp as i64 - 64 * words.len() as i64;
        let mut n = if shift >= 0 {
            mant << shift as usize
        } else {
            let s = (-shift) as usize;
            let half = if s > 0 { BigInt::one() << (s - 1) } else { BigInt::zero() };
            (mant + half) >> s
        };
        if sign == Sign::Neg {
            n = -n;
        }
        n
    }

    /// Decimal rendering rounded to `sig` significant digits. Plain notation is used
    /// for moderate magnitudes, scientific otherwise; trailing zeros are trimmed.
    pub fn to_decimal(&self, sig: usize) -> String {
        let sig = sig.max(1);
        if self.value.is_zero() {
            return "0".to_string();
        }
        let raw = with_consts(|cc| self.value.format(Radix::Dec, RM, cc)).expect("formatting a finite value");
        let (negative, body) = match raw.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, raw.as_str()),
        };
        let (mantissa, exp10) = match body.split_once(['e', 'E']) {
            Some((m, e)) => (m, e.parse::<i64>().expect("decimal exponent")),
            None => (body, 0),
        };
        // Digits d0 d1 d2 ... with value 0.d0d1d2... * 10^(point)
        let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
        let mut digits: Vec<u8> = int_part.bytes().chain(frac_part.bytes()).map(|b| b - b'0').collect();
        let mut point = exp10 + int_part.len() as i64;
        let lead = digits.iter().take_while(|&&d| d == 0).count();
        digits.drain(..lead);
        point -= lead as i64;
        if digits.is_empty() {
            return "0".to_string();
        }
        if digits.len() > sig {
            let round_up = digits[sig] >= 5;
            digits.truncate(sig);
            if round_up {
                let mut i = sig;
                loop {
                    if i == 0 {
                        digits.insert(0, 1);
                        digits.truncate(sig);
                        point += 1;
                        break;
                    }
                    i -= 1;
                    if digits[i] == 9 {
                        digits[i] = 0;
                    } else {
                        digits[i] += 1;
                        break;
                    }
                }
            }
        }
        while digits.len() > 1 && *digits.last().unwrap() == 0 {
            digits.pop();
        }
        let text: String = digits.iter().map(|d| (b'0' + d) as char).collect();
        let mut out = String::new();
        if negative {
            out.push('-');
        }
        if (-5..=21).contains(&point) {
            if point <= 0 {
                out.push_str("0.");
                out.extend(std::iter::repeat('0').take((-point) as usize));
                out.push_str(&text);
            } else if point as usize >= text.len() {
                out.push_str(&text);
                out.extend(std::iter::repeat('0').take(point as usize - text.len()));
            } else {
                out.push_str(&text[..point as usize]);
                out.push('.');
                out.push_str(&text[point as usize..]);
            }
        } else {
            out.push_str(&text[..1]);
            if text.len() > 1 {
                out.push('.');
                out.push_str(&text[1..]);
            }
            out.push_str(&format!("e{}", point - 1));
        }
        out
    }

    /// `|self - other| / max(|other|, tiny)`; falls back to the absolute error at zero.
    pub fn relative_error(&self, reference: &BigReal) -> BigReal {
        let diff = (self - reference).abs();
        if reference.is_zero() {
            diff
        } else {
            &diff / &reference.abs()
        }
    }

    /// `log10 |self|` as a double, or `-inf` for zero; handy for residual reporting.
    pub fn log10_abs(&self) -> f64 {
        match self.binary_exponent() {
            None => f64::NEG_INFINITY,
            Some(e) => {
                let m = self.abs().to_f64() / 2f64.powi(e as i32);
                (m.log2() + e as f64) / LOG2_10
            }
        }
    }
}

fn domain(function: &'static str, x: &BigReal) -> Error {
    Error::Domain { function, value: x.to_decimal(20) }
}

fn joint(a: &BigReal, b: &BigReal) -> PrecisionContext {
    a.ctx.max(b.ctx)
}

macro_rules! bin_op {
    ($trait:ident, $method:ident) => {
        impl<'a> $trait<&'a BigReal> for &'a BigReal {
            type Output = BigReal;
            fn $method(self, rhs: &'a BigReal) -> BigReal {
                let ctx = joint(self, rhs);
                BigReal::wrap(self.value.$method(&rhs.value, ctx.bits(), RM), ctx)
            }
        }
        impl $trait<BigReal> for BigReal {
            type Output = BigReal;
            fn $method(self, rhs: BigReal) -> BigReal {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $trait<&'a BigReal> for BigReal {
            type Output = BigReal;
            fn $method(self, rhs: &'a BigReal) -> BigReal {
                (&self).$method(rhs)
            }
        }
        impl<'a> $trait<BigReal> for &'a BigReal {
            type Output = BigReal;
            fn $method(self, rhs: BigReal) -> BigReal {
                self.$method(&rhs)
            }
        }
    };
}

bin_op!(Add, add);
bin_op!(Sub, sub);
bin_op!(Mul, mul);
bin_op!(Div, div);

impl Neg for BigReal {
    type Output = BigReal;
    fn neg(self) -> BigReal {
        BigReal::wrap(BigFloat::neg(&self.value), self.ctx)
    }
}

impl Neg for &BigReal {
    type Output = BigReal;
    fn neg(self) -> BigReal {
        BigReal::wrap(BigFloat::neg(&self.value), self.ctx)
    }
}

impl PartialEq for BigReal {
    fn eq(&self, other: &Self) -> bool {
        self.partial_cmp(other) == Some(Ordering::Equal)
    }
}

impl PartialOrd for BigReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.value.cmp(&other.value).map(|c| c.cmp(&0))
    }
}

impl fmt::Display for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sig = f.precision().unwrap_or(self.ctx.digits as usize);
        f.write_str(&self.to_decimal(sig))
    }
}

impl fmt::Debug for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BigReal({})", self.to_decimal(self.ctx.digits as usize))
    }
}

/// Largest absolute value in a slice (zero for an empty slice).
pub fn max_abs<'a>(values: impl IntoIterator<Item = &'a BigReal>, ctx: PrecisionContext) -> BigReal {
    values.into_iter().fold(BigReal::zero(ctx), |acc, v| acc.max(v.abs()))
}

/// Exact rational to BigReal through a big-integer numerator and denominator.
pub fn big_rational(r: &num_rational::BigRational, ctx: PrecisionContext) -> BigReal {
    if r.denom().is_one() {
        BigReal::from_bigint(r.numer(), ctx)
    } else if r.numer().is_negative() {
        -BigReal::from_big_ratio(&-r.numer(), r.denom(), ctx)
    } else {
        BigReal::from_big_ratio(r.numer(), r.denom(), ctx)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> PrecisionContext {
        PrecisionContext::default()
    }

    #[test]
    fn rejects_low_precision() {
        assert!(PrecisionContext::new(19).is_err());
        assert_eq!(PrecisionContext::new(20).unwrap().digits(), 20);
    }

    #[test]
    fn bits_include_guard_digits() {
        let c = ctx();
        assert!(c.bits() as f64 >= 70.0 * LOG2_10);
        assert_eq!(c.bits() % 64, 0);
    }

    #[test]
    fn pi_digits() {
        let pi = BigReal::pi(ctx());
        assert_eq!(pi.to_decimal(30), "3.14159265358979323846264338328");
    }

    #[test]
    fn decimal_rendering() {
        let c = ctx();
        assert_eq!(BigReal::from_i64(1, c).to_decimal(10), "1");
        assert_eq!(BigReal::from_i64(-12345, c).to_decimal(3), "-12300");
        assert_eq!(BigReal::from_ratio(1, 8, c).to_decimal(10), "0.125");
        assert_eq!(BigReal::from_ratio(2, 3, c).to_decimal(5), "0.66667");
        assert_eq!(BigReal::from_ratio(999_999, 1_000_000, c).to_decimal(3), "1");
        assert_eq!(BigReal::from_i64(10, c).powi(-30).to_decimal(5), "1e-30");
        assert_eq!(BigReal::zero(c).to_decimal(5), "0");
    }

    #[test]
    fn scaled_bigint_rounds() {
        let c = ctx();
        let x = BigReal::from_ratio(-7, 3, c);
        assert_eq!(x.to_scaled_bigint(5), BigInt::from(-233_333));
        let y = BigReal::from_ratio(2, 3, c);
        assert_eq!(y.to_scaled_bigint(3), BigInt::from(667));
    }

    #[test]
    fn to_f64_matches() {
        let c = ctx();
        let x = BigReal::from_ratio(-22, 7, c);
        assert!((x.to_f64() + 22.0 / 7.0).abs() < 1e-15);
        assert!((BigReal::pi(c).powi(-40).to_f64() / std::f64::consts::PI.powi(-40) - 1.0).abs() < 1e-13);
    }

    #[test]
    fn elementary_functions() {
        let c = ctx();
        let two = BigReal::from_i64(2, c);
        let r2 = two.sqrt().unwrap();
        assert!((&(&r2 * &r2) - &two).abs() < c.epsilon());
        let e = BigReal::one(c).exp();
        assert!((e.ln().unwrap() - BigReal::one(c)).abs() < c.epsilon());
        let half_pi = BigReal::pi(c) / two.clone();
        assert!((half_pi.sin() - BigReal::one(c)).abs() < c.epsilon());
        assert!(half_pi.cos().abs() < c.epsilon());
        assert!(BigReal::from_i64(-1, c).ln().is_err());
        assert!(BigReal::from_i64(-1, c).sqrt().is_err());
    }

    #[test]
    fn from_bigint_exact() {
        let c = ctx();
        let big = BigInt::from(3u8).pow(60);
        let x = BigReal::from_bigint(&big, c);
        assert_eq!(x.to_scaled_bigint(0), big);
    }

    #[test]
    fn log10_abs_estimates() {
        let c = ctx();
        let x = BigReal::from_i64(10, c).powi(-42);
        assert!((x.log10_abs() + 42.0).abs() < 1e-9);
    }
}
