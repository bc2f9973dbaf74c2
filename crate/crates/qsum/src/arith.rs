//! Arbitrary-precision real and complex arithmetic under an explicit
//! precision context.
//!
//! * [`PrecisionContext`] fixes the working precision (decimal digits),
//!   the truncation threshold `trunc_eps = 10^(-digits+5)` used when
//!   cutting off infinite products and series tails, and the comparison
//!   tolerance `cmp_tol = 10^(-digits+15)` used when deciding whether two
//!   finished values agree.
//! * [`Real`] wraps an arbitrary-precision binary float; every operation
//!   rounds to the context's working precision (which carries 64 guard
//!   bits over the requested decimal digits).
//! * [`Complex`] is a pair of [`Real`]s with the usual field operations,
//!   principal `exp`/`ln`, and integer powers.
//! * [`relative_error`] is scale-aware: `|x - y| / max(|x|, |y|, 1)`, so
//!   values near zero are compared absolutely and large values relatively.
//!
//! Contexts are immutable after creation and safe to share across threads;
//! the internal constants cache sits behind a mutex.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Mutex;

use astro_float::{BigFloat, Consts, Radix, RoundingMode, Sign};

use crate::error::{Error, Result, MIN_DIGITS};

const RM: RoundingMode = RoundingMode::ToEven;
const GUARD_BITS: usize = 64;
const LOG10_2: f64 = std::f64::consts::LOG10_2;

// ---------------------------------------------------------------------------
// Precision context
// ---------------------------------------------------------------------------

/// Cache of Stirling-series data used by the classical gamma function;
/// filled lazily by `qpoch::gamma_classical`.
#[derive(Default)]
pub(crate) struct GammaCache {
    /// `B_{2j} / ((2j)(2j-1))` for `j = 1, 2, ...` at working precision.
    pub coeffs: Vec<Real>,
    /// `ln(2*pi)/2` at working precision.
    pub ln_sqrt_two_pi: Option<Real>,
}

/// Immutable precision context shared by every operation in the crate.
pub struct PrecisionContext {
    digits: u32,
    bits: usize,
    trunc_eps: Real,
    cmp_tol: Real,
    consts: Mutex<Consts>,
    pub(crate) gamma: Mutex<GammaCache>,
}

impl fmt::Debug for PrecisionContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PrecisionContext")
            .field("digits", &self.digits)
            .field("bits", &self.bits)
            .finish()
    }
}

/// Create a context carrying `digits` decimal digits of precision.
///
/// Fails with [`Error::InvalidDigits`] below 20 digits: the comparison
/// tolerance `10^(-digits+15)` would stop being meaningful.
pub fn make_context(digits: u32) -> Result<PrecisionContext> {
    PrecisionContext::new(digits)
}

impl PrecisionContext {
    /// See [`make_context`].
    pub fn new(digits: u32) -> Result<Self> {
        if digits < MIN_DIGITS {
            return Err(Error::InvalidDigits(digits));
        }
        // digits * log2(10), rounded up, plus guard bits.
        let bits = (digits as usize * 3322).div_ceil(1000) + GUARD_BITS;
        Ok(Self::with_bits(digits, bits))
    }

    /// Context with explicitly chosen mantissa bits; the digit-derived
    /// thresholds stay tied to `digits`.
    pub(crate) fn with_bits(digits: u32, bits: usize) -> Self {
        let consts = Consts::new().expect("constants cache allocation");
        let mut ctx = PrecisionContext {
            digits,
            bits,
            trunc_eps: Real(BigFloat::from_u64(0, bits)),
            cmp_tol: Real(BigFloat::from_u64(0, bits)),
            consts: Mutex::new(consts),
            gamma: Mutex::new(GammaCache::default()),
        };
        ctx.trunc_eps = ctx.ten_pow(5 - digits as i64);
        ctx.cmp_tol = ctx.ten_pow(15 - digits as i64);
        ctx
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    /// Working precision in bits (includes guard bits).
    pub fn bits(&self) -> usize {
        self.bits
    }

    /// Truncation threshold `10^(-digits+5)` for product/series tails.
    pub fn trunc_eps(&self) -> &Real {
        &self.trunc_eps
    }

    /// Comparison tolerance `10^(-digits+15)` for finished values.
    pub fn cmp_tol(&self) -> &Real {
        &self.cmp_tol
    }

    pub(crate) fn with_consts<T>(&self, f: impl FnOnce(&mut Consts) -> T) -> T {
        let mut guard = self.consts.lock().expect("constants cache poisoned");
        f(&mut guard)
    }

    // -- constructors -------------------------------------------------------

    pub fn zero(&self) -> Real {
        Real(BigFloat::from_u64(0, self.bits))
    }

    pub fn one(&self) -> Real {
        Real(BigFloat::from_u64(1, self.bits))
    }

    pub fn real_from_u64(&self, v: u64) -> Real {
        Real(BigFloat::from_u64(v, self.bits))
    }

    pub fn real_from_i64(&self, v: i64) -> Real {
        Real(BigFloat::from_i64(v, self.bits))
    }

    pub fn real_from_f64(&self, v: f64) -> Real {
        Real(BigFloat::from_f64(v, self.bits))
    }

    /// Parse a decimal string (optional sign, fraction, `e` exponent) at
    /// full working precision.
    pub fn real_from_str(&self, s: &str) -> Result<Real> {
        let t = s.trim();
        // astro-float's parser accepts some junk by stopping early; insist
        // on a well-formed decimal literal first.
        if !is_decimal_literal(t) {
            return Err(Error::Param(format!("cannot parse `{s}` as a number")));
        }
        let v = self.with_consts(|cc| BigFloat::parse(t, Radix::Dec, self.bits, RM, cc));
        if v.is_nan() {
            return Err(Error::Param(format!("cannot parse `{s}` as a number")));
        }
        Ok(Real(v))
    }

    /// Exact power of ten at working precision.
    pub fn ten_pow(&self, e: i64) -> Real {
        let ten = self.real_from_u64(10);
        ten.powi(e, self)
    }

    pub fn pi(&self) -> Real {
        let bits = self.bits;
        Real(self.with_consts(|cc| cc.pi(bits, RM)))
    }

    pub fn complex(&self, re: Real, im: Real) -> Complex {
        Complex { re, im }
    }

    pub fn complex_from_f64(&self, re: f64, im: f64) -> Complex {
        Complex {
            re: self.real_from_f64(re),
            im: self.real_from_f64(im),
        }
    }

    pub fn complex_zero(&self) -> Complex {
        Complex {
            re: self.zero(),
            im: self.zero(),
        }
    }

    pub fn complex_one(&self) -> Complex {
        Complex {
            re: self.one(),
            im: self.zero(),
        }
    }
}

// ---------------------------------------------------------------------------
// Real
// ---------------------------------------------------------------------------

/// Arbitrary-precision real number tied to a [`PrecisionContext`] at the
/// call sites (the value itself does not carry the context).
#[derive(Clone, Debug)]
pub struct Real(BigFloat);

impl Real {
    pub fn add(&self, rhs: &Real, ctx: &PrecisionContext) -> Real {
        Real(self.0.add(&rhs.0, ctx.bits, RM))
    }

    pub fn sub(&self, rhs: &Real, ctx: &PrecisionContext) -> Real {
        Real(self.0.sub(&rhs.0, ctx.bits, RM))
    }

    pub fn mul(&self, rhs: &Real, ctx: &PrecisionContext) -> Real {
        Real(self.0.mul(&rhs.0, ctx.bits, RM))
    }

    pub fn div(&self, rhs: &Real, ctx: &PrecisionContext) -> Real {
        Real(self.0.div(&rhs.0, ctx.bits, RM))
    }

    pub fn neg(&self) -> Real {
        Real(self.0.neg())
    }

    pub fn abs(&self) -> Real {
        Real(self.0.abs())
    }

    pub fn recip(&self, ctx: &PrecisionContext) -> Real {
        ctx.one().div(self, ctx)
    }

    pub fn sqrt(&self, ctx: &PrecisionContext) -> Real {
        Real(self.0.sqrt(ctx.bits, RM))
    }

    pub fn exp(&self, ctx: &PrecisionContext) -> Real {
        let bits = ctx.bits;
        Real(ctx.with_consts(|cc| self.0.exp(bits, RM, cc)))
    }

    pub fn ln(&self, ctx: &PrecisionContext) -> Real {
        let bits = ctx.bits;
        Real(ctx.with_consts(|cc| self.0.ln(bits, RM, cc)))
    }

    pub fn sin(&self, ctx: &PrecisionContext) -> Real {
        let bits = ctx.bits;
        Real(ctx.with_consts(|cc| self.0.sin(bits, RM, cc)))
    }

    pub fn cos(&self, ctx: &PrecisionContext) -> Real {
        let bits = ctx.bits;
        Real(ctx.with_consts(|cc| self.0.cos(bits, RM, cc)))
    }

    pub fn atan(&self, ctx: &PrecisionContext) -> Real {
        let bits = ctx.bits;
        Real(ctx.with_consts(|cc| self.0.atan(bits, RM, cc)))
    }

    /// Principal-branch `atan2(self, x)`: the argument of the point
    /// `(x, self)`, in `(-pi, pi]`.
    pub fn atan2(&self, x: &Real, ctx: &PrecisionContext) -> Real {
        let y = self;
        if x.is_zero() && y.is_zero() {
            return ctx.zero();
        }
        if x.is_zero() {
            let half_pi = ctx.pi().div(&ctx.real_from_u64(2), ctx);
            return if y.is_negative() {
                half_pi.neg()
            } else {
                half_pi
            };
        }
        let t = y.div(x, ctx).atan(ctx);
        if x.is_negative() {
            let pi = ctx.pi();
            if y.is_negative() {
                t.sub(&pi, ctx)
            } else {
                t.add(&pi, ctx)
            }
        } else {
            t
        }
    }

    /// Integer power by binary exponentiation; `0^0 = 1`.
    pub fn powi(&self, e: i64, ctx: &PrecisionContext) -> Real {
        if e == 0 {
            return ctx.one();
        }
        let mut result = ctx.one();
        let mut base = self.clone();
        let mut n = e.unsigned_abs();
        while n > 0 {
            if n & 1 == 1 {
                result = result.mul(&base, ctx);
            }
            base = base.mul(&base, ctx);
            n >>= 1;
        }
        if e < 0 {
            result.recip(ctx)
        } else {
            result
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_nan(&self) -> bool {
        self.0.is_nan()
    }

    pub fn is_negative(&self) -> bool {
        !self.0.is_zero() && self.0.sign() == Some(Sign::Neg)
    }

    /// Total order on non-NaN values; panics if either side is NaN
    /// (which the crate's guarded operations never produce).
    pub fn compare(&self, rhs: &Real) -> Ordering {
        match self.0.cmp(&rhs.0) {
            Some(v) if v < 0 => Ordering::Less,
            Some(v) if v > 0 => Ordering::Greater,
            Some(_) => Ordering::Equal,
            None => panic!("NaN in comparison"),
        }
    }

    pub fn lt(&self, rhs: &Real) -> bool {
        self.compare(rhs) == Ordering::Less
    }

    pub fn le(&self, rhs: &Real) -> bool {
        self.compare(rhs) != Ordering::Greater
    }

    pub fn gt(&self, rhs: &Real) -> bool {
        self.compare(rhs) == Ordering::Greater
    }

    pub fn ge(&self, rhs: &Real) -> bool {
        self.compare(rhs) != Ordering::Less
    }

    pub fn max(&self, rhs: &Real) -> Real {
        if self.ge(rhs) {
            self.clone()
        } else {
            rhs.clone()
        }
    }

    /// If the value is within `1e-9` of an integer that fits in `i64`,
    /// return that integer.
    pub fn to_i64_exact(&self, ctx: &PrecisionContext) -> Option<i64> {
        if self.is_nan() {
            return None;
        }
        let nearest = Real(self.0.round(0, RM));
        let gap = self.sub(&nearest, ctx).abs();
        if gap.gt(&ctx.ten_pow(-9)) {
            return None;
        }
        let bound = ctx.real_from_u64(1 << 40);
        if nearest.abs().gt(&bound) {
            return None;
        }
        // "123" is the positional form for this magnitude; anything else
        // means a stray fraction survived and the parse correctly fails.
        let s = nearest.to_decimal(18, ctx);
        s.parse::<i64>().ok()
    }

    /// Deterministic decimal rendering with `sig` significant digits.
    ///
    /// Small magnitudes render positionally (`0.00125`), large or tiny ones
    /// in scientific form (`1.25e-21`); trailing zeros are trimmed.
    pub fn to_decimal(&self, sig: usize, ctx: &PrecisionContext) -> String {
        assert!(sig >= 1);
        if self.is_nan() {
            return "nan".into();
        }
        if self.is_zero() {
            return "0".into();
        }
        let neg = self.is_negative();
        let mut m = self.abs();
        // Estimate the decimal exponent from the binary one, then correct.
        let e2 = m.0.exponent().unwrap_or(0) as f64;
        let mut d = ((e2 - 1.0) * LOG10_2).floor() as i64;
        if d != 0 {
            m = m.div(&ctx.ten_pow(d), ctx);
        }
        let ten = ctx.real_from_u64(10);
        let one = ctx.one();
        while m.ge(&ten) {
            m = m.div(&ten, ctx);
            d += 1;
        }
        while m.lt(&one) {
            m = m.mul(&ten, ctx);
            d -= 1;
        }
        // Extract sig+1 digits, round half-up on the last.
        let small: Vec<Real> = (0..=10).map(|k| ctx.real_from_u64(k)).collect();
        let mut digs: Vec<u8> = Vec::with_capacity(sig + 1);
        for _ in 0..=sig {
            let mut di = 0u8;
            for k in (1..=9u8).rev() {
                if m.ge(&small[k as usize]) {
                    di = k;
                    break;
                }
            }
            digs.push(di);
            m = m.sub(&small[di as usize], ctx).mul(&ten, ctx);
        }
        let round_up = digs.pop().unwrap() >= 5;
        if round_up {
            let mut i = digs.len();
            loop {
                if i == 0 {
                    digs.insert(0, 1);
                    digs.pop();
                    d += 1;
                    break;
                }
                i -= 1;
                if digs[i] == 9 {
                    digs[i] = 0;
                } else {
                    digs[i] += 1;
                    break;
                }
            }
        }
        let body: String = digs.iter().map(|x| (b'0' + x) as char).collect();
        let mut out = String::new();
        if neg {
            out.push('-');
        }
        if (-5..=20).contains(&d) {
            if d >= 0 {
                let du = d as usize;
                if du + 1 >= body.len() {
                    out.push_str(&body);
                    out.push_str(&"0".repeat(du + 1 - body.len()));
                } else {
                    out.push_str(&body[..=du]);
                    let frac = body[du + 1..].trim_end_matches('0');
                    if !frac.is_empty() {
                        out.push('.');
                        out.push_str(frac);
                    }
                }
            } else {
                out.push_str("0.");
                out.push_str(&"0".repeat((-d - 1) as usize));
                out.push_str(body.trim_end_matches('0'));
            }
        } else {
            out.push_str(&body[..1]);
            let frac = body[1..].trim_end_matches('0');
            if !frac.is_empty() {
                out.push('.');
                out.push_str(frac);
            }
            out.push('e');
            out.push_str(&d.to_string());
        }
        out
    }
}

// ---------------------------------------------------------------------------
// Complex
// ---------------------------------------------------------------------------

/// Complex number as a pair of [`Real`]s.
#[derive(Clone, Debug)]
pub struct Complex {
    pub re: Real,
    pub im: Real,
}

impl Complex {
    pub fn from_real(re: Real, ctx: &PrecisionContext) -> Complex {
        Complex { re, im: ctx.zero() }
    }

    pub fn add(&self, rhs: &Complex, ctx: &PrecisionContext) -> Complex {
        Complex {
            re: self.re.add(&rhs.re, ctx),
            im: self.im.add(&rhs.im, ctx),
        }
    }

    pub fn sub(&self, rhs: &Complex, ctx: &PrecisionContext) -> Complex {
        Complex {
            re: self.re.sub(&rhs.re, ctx),
            im: self.im.sub(&rhs.im, ctx),
        }
    }

    pub fn mul(&self, rhs: &Complex, ctx: &PrecisionContext) -> Complex {
        let re = self
            .re
            .mul(&rhs.re, ctx)
            .sub(&self.im.mul(&rhs.im, ctx), ctx);
        let im = self
            .re
            .mul(&rhs.im, ctx)
            .add(&self.im.mul(&rhs.re, ctx), ctx);
        Complex { re, im }
    }

    /// Division; fails with [`Error::Pole`] when the divisor's modulus is
    /// below the context's `trunc_eps`.
    pub fn div(&self, rhs: &Complex, ctx: &PrecisionContext) -> Result<Complex> {
        if rhs.is_small(ctx.trunc_eps(), ctx) {
            return Err(Error::Pole("division by a vanishing quantity".into()));
        }
        let den = rhs.abs_sq(ctx);
        let re = self
            .re
            .mul(&rhs.re, ctx)
            .add(&self.im.mul(&rhs.im, ctx), ctx)
            .div(&den, ctx);
        let im = self
            .im
            .mul(&rhs.re, ctx)
            .sub(&self.re.mul(&rhs.im, ctx), ctx)
            .div(&den, ctx);
        Ok(Complex { re, im })
    }

    /// Unguarded division for callers that have already ruled out a true
    /// pole and may legitimately divide by quantities far below
    /// `trunc_eps` (for example a ratio of two infinite products that
    /// underflow the threshold together).
    pub(crate) fn div_raw(&self, rhs: &Complex, ctx: &PrecisionContext) -> Complex {
        let den = rhs.abs_sq(ctx);
        let re = self
            .re
            .mul(&rhs.re, ctx)
            .add(&self.im.mul(&rhs.im, ctx), ctx)
            .div(&den, ctx);
        let im = self
            .im
            .mul(&rhs.re, ctx)
            .sub(&self.re.mul(&rhs.im, ctx), ctx)
            .div(&den, ctx);
        Complex { re, im }
    }

    pub fn neg(&self) -> Complex {
        Complex {
            re: self.re.neg(),
            im: self.im.neg(),
        }
    }

    pub fn scale(&self, k: &Real, ctx: &PrecisionContext) -> Complex {
        Complex {
            re: self.re.mul(k, ctx),
            im: self.im.mul(k, ctx),
        }
    }

    pub fn abs_sq(&self, ctx: &PrecisionContext) -> Real {
        self.re
            .mul(&self.re, ctx)
            .add(&self.im.mul(&self.im, ctx), ctx)
    }

    pub fn abs(&self, ctx: &PrecisionContext) -> Real {
        self.abs_sq(ctx).sqrt(ctx)
    }

    /// `|self| < eps`, computed without a square root.
    pub fn is_small(&self, eps: &Real, ctx: &PrecisionContext) -> bool {
        self.abs_sq(ctx).lt(&eps.mul(eps, ctx))
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_nan(&self) -> bool {
        self.re.is_nan() || self.im.is_nan()
    }

    pub fn exp(&self, ctx: &PrecisionContext) -> Complex {
        let r = self.re.exp(ctx);
        Complex {
            re: r.mul(&self.im.cos(ctx), ctx),
            im: r.mul(&self.im.sin(ctx), ctx),
        }
    }

    /// Principal logarithm; fails on zero.
    pub fn ln(&self, ctx: &PrecisionContext) -> Result<Complex> {
        if self.is_small(ctx.trunc_eps(), ctx) {
            return Err(Error::Domain("log of a vanishing quantity".into()));
        }
        Ok(Complex {
            re: self.abs(ctx).ln(ctx),
            im: self.im.atan2(&self.re, ctx),
        })
    }

    /// Integer power by binary exponentiation; negative powers of a
    /// vanishing value fail with [`Error::Pole`].
    pub fn powi(&self, e: i64, ctx: &PrecisionContext) -> Result<Complex> {
        if e == 0 {
            return Ok(ctx.complex_one());
        }
        // Invert the base up front for negative exponents: the checked
        // division then rejects only a genuinely vanishing base, whereas
        // 1 / self^|e| would also reject representable results whenever
        // the positive power underflows the truncation threshold.
        let mut base = if e < 0 {
            ctx.complex_one().div(self, ctx)?
        } else {
            self.clone()
        };
        let mut result = ctx.complex_one();
        let mut n = e.unsigned_abs();
        while n > 0 {
            if n & 1 == 1 {
                result = result.mul(&base, ctx);
            }
            base = base.mul(&base, ctx);
            n >>= 1;
        }
        Ok(result)
    }

    /// Principal power `self^w = exp(w ln self)`.
    pub fn pow(&self, w: &Complex, ctx: &PrecisionContext) -> Result<Complex> {
        Ok(w.mul(&self.ln(ctx)?, ctx).exp(ctx))
    }

    /// True when the imaginary part vanishes to working precision.
    pub fn is_real(&self, ctx: &PrecisionContext) -> bool {
        let scale = self.re.abs().max(&ctx.one());
        self.im.abs().le(&scale.mul(ctx.trunc_eps(), ctx))
    }

    /// Parse `a`, `bi`, or `a+bi` (also `a-bi`), each part a decimal
    /// number with optional `e` exponent, at full working precision.
    pub fn parse(s: &str, ctx: &PrecisionContext) -> Result<Complex> {
        let t = s.trim();
        if t.is_empty() {
            return Err(Error::Param("empty number".into()));
        }
        if let Some(body) = t.strip_suffix(['i', 'I']) {
            // Find the split between real and imaginary parts: the last
            // '+'/'-' that is not a leading sign and not an exponent sign.
            let bytes = body.as_bytes();
            let mut split = None;
            for i in (1..bytes.len()).rev() {
                let c = bytes[i];
                if (c == b'+' || c == b'-') && !matches!(bytes[i - 1], b'e' | b'E') {
                    split = Some(i);
                    break;
                }
            }
            match split {
                Some(i) => {
                    let re = ctx.real_from_str(&body[..i])?;
                    let ims = &body[i..];
                    let im = if ims == "+" {
                        ctx.one()
                    } else if ims == "-" {
                        ctx.one().neg()
                    } else {
                        ctx.real_from_str(ims)?
                    };
                    Ok(Complex { re, im })
                }
                None => {
                    let im = if body.is_empty() {
                        ctx.one()
                    } else if body == "-" {
                        ctx.one().neg()
                    } else {
                        ctx.real_from_str(body)?
                    };
                    Ok(Complex { re: ctx.zero(), im })
                }
            }
        } else {
            Ok(Complex {
                re: ctx.real_from_str(t)?,
                im: ctx.zero(),
            })
        }
    }

    /// Deterministic rendering: real part alone when the value is real,
    /// otherwise `a+bi` / `a-bi`.
    pub fn to_decimal(&self, sig: usize, ctx: &PrecisionContext) -> String {
        if self.im.is_zero() {
            return self.re.to_decimal(sig, ctx);
        }
        let re = self.re.to_decimal(sig, ctx);
        let im = self.im.to_decimal(sig, ctx);
        if im.starts_with('-') {
            format!("{re}{im}i")
        } else {
            format!("{re}+{im}i")
        }
    }
}

// ---------------------------------------------------------------------------
// Comparison helpers
// ---------------------------------------------------------------------------

/// Scale-aware relative error `|x - y| / max(|x|, |y|, 1)`.
///
/// Symmetric in its arguments; zero iff the values coincide; for values of
/// modulus at most 1 it reduces to the absolute error, so comparisons near
/// zero do not blow up.
pub fn relative_error(x: &Complex, y: &Complex, ctx: &PrecisionContext) -> Real {
    let diff = x.sub(y, ctx).abs(ctx);
    let scale = x.abs(ctx).max(&y.abs(ctx)).max(&ctx.one());
    diff.div(&scale, ctx)
}

/// `relative_error(x, y) <= cmp_tol`.
pub fn approx_equal(x: &Complex, y: &Complex, ctx: &PrecisionContext) -> bool {
    relative_error(x, y, ctx).le(ctx.cmp_tol())
}

/// Shape check for a decimal literal:
/// `[+-]? (digits [. digits*] | . digits+) ([eE] [+-]? digits+)?`
fn is_decimal_literal(t: &str) -> bool {
    let rest = t.strip_prefix(['+', '-']).unwrap_or(t);
    let mantissa_end = rest.find(['e', 'E']).unwrap_or(rest.len());
    let (mantissa, exp) = rest.split_at(mantissa_end);
    let mut dot_seen = false;
    let mut digit_seen = false;
    for c in mantissa.chars() {
        match c {
            '0'..='9' => digit_seen = true,
            '.' if !dot_seen => dot_seen = true,
            _ => return false,
        }
    }
    if !digit_seen {
        return false;
    }
    if exp.is_empty() {
        return true;
    }
    let exp = exp[1..].strip_prefix(['+', '-']).unwrap_or(&exp[1..]);
    !exp.is_empty() && exp.bytes().all(|b| b.is_ascii_digit())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ctx50() -> PrecisionContext {
        make_context(50).unwrap()
    }

    #[test]
    fn context_thresholds_at_50_digits() {
        let ctx = ctx50();
        assert_eq!(ctx.digits(), 50);
        let eps = ctx.ten_pow(-45);
        let tol = ctx.ten_pow(-35);
        assert_eq!(ctx.trunc_eps().compare(&eps), Ordering::Equal);
        assert_eq!(ctx.cmp_tol().compare(&tol), Ordering::Equal);
    }

    #[test]
    fn context_accepts_minimum_and_rejects_below() {
        assert!(make_context(20).is_ok());
        assert!(matches!(make_context(19), Err(Error::InvalidDigits(19))));
        assert!(matches!(make_context(10), Err(Error::InvalidDigits(10))));
    }

    #[test]
    fn relative_error_on_zero_and_equal_values() {
        let ctx = ctx50();
        let z = ctx.complex_zero();
        assert!(relative_error(&z, &z, &ctx).is_zero());
        let two = ctx.complex_from_f64(2.0, 0.0);
        assert!(relative_error(&two, &two, &ctx).is_zero());
    }

    #[test]
    fn relative_error_resolves_tiny_perturbations() {
        let ctx = ctx50();
        let one = ctx.complex_one();
        let bumped = Complex::from_real(ctx.one().add(&ctx.ten_pow(-40), &ctx), &ctx);
        let err = relative_error(&one, &bumped, &ctx);
        // |x-y| = 1e-40, scale = 1 + 1e-40.
        assert!(err.gt(&ctx.ten_pow(-41)));
        assert!(err.lt(&ctx.ten_pow(-39)));
    }

    #[test]
    fn relative_error_is_absolute_near_zero() {
        let ctx = ctx50();
        let x = Complex::from_real(ctx.ten_pow(-50), &ctx);
        let y = Complex::from_real(ctx.ten_pow(-50).mul(&ctx.real_from_u64(2), &ctx), &ctx);
        let err = relative_error(&x, &y, &ctx);
        // Bare relative error would be 0.5; the scale floor keeps it at 1e-50.
        assert!(err.le(&ctx.ten_pow(-49)));
    }

    #[test]
    fn approx_equal_respects_cmp_tol() {
        let ctx = ctx50();
        let one = ctx.complex_one();
        let close = Complex::from_real(ctx.one().add(&ctx.ten_pow(-40), &ctx), &ctx);
        let far = Complex::from_real(ctx.one().add(&ctx.ten_pow(-30), &ctx), &ctx);
        assert!(approx_equal(&one, &close, &ctx));
        assert!(!approx_equal(&one, &far, &ctx));
    }

    #[test]
    fn complex_field_operations() {
        let ctx = ctx50();
        let a = ctx.complex_from_f64(1.0, 2.0);
        let b = ctx.complex_from_f64(3.0, 4.0);
        let prod = a.mul(&b, &ctx);
        let want = ctx.complex_from_f64(-5.0, 10.0);
        assert!(approx_equal(&prod, &want, &ctx));
        let back = prod.div(&b, &ctx).unwrap();
        assert!(approx_equal(&back, &a, &ctx));
    }

    #[test]
    fn division_by_vanishing_value_is_a_pole() {
        let ctx = ctx50();
        let one = ctx.complex_one();
        let tiny = Complex::from_real(ctx.ten_pow(-47), &ctx);
        assert!(matches!(one.div(&tiny, &ctx), Err(Error::Pole(_))));
    }

    #[test]
    fn exp_ln_round_trip_covers_all_quadrants() {
        let ctx = ctx50();
        for (re, im) in [
            (2.0, 1.0),
            (-2.0, 1.0),
            (-2.0, -1.0),
            (2.0, -1.0),
            (0.0, 3.0),
        ] {
            let z = ctx.complex_from_f64(re, im);
            let back = z.ln(&ctx).unwrap().exp(&ctx);
            assert!(
                approx_equal(&z, &back, &ctx),
                "exp(ln(z)) != z for ({re}, {im})"
            );
        }
    }

    #[test]
    fn ln_of_minus_one_is_i_pi() {
        let ctx = ctx50();
        let z = ctx.complex_from_f64(-1.0, 0.0);
        let l = z.ln(&ctx).unwrap();
        let want = ctx.complex(ctx.zero(), ctx.pi());
        assert!(approx_equal(&l, &want, &ctx));
    }

    #[test]
    fn integer_powers_including_negative() {
        let ctx = ctx50();
        let z = ctx.complex_from_f64(1.5, -0.5);
        let p3 = z.powi(3, &ctx).unwrap();
        let manual = z.mul(&z, &ctx).mul(&z, &ctx);
        assert!(approx_equal(&p3, &manual, &ctx));
        let pm3 = z.powi(-3, &ctx).unwrap();
        let one = p3.mul(&pm3, &ctx);
        assert!(approx_equal(&one, &ctx.complex_one(), &ctx));
    }

    #[test]
    fn parse_complex_forms() {
        let ctx = ctx50();
        // Expectations are themselves decimal-parsed: an f64 literal such as
        // 0.2 carries a ~1e-17 binary representation error, far above the
        // comparison tolerance of a 50-digit context.
        let z = Complex::parse("0.2+0.1i", &ctx).unwrap();
        let want = ctx.complex(
            ctx.real_from_str("0.2").unwrap(),
            ctx.real_from_str("0.1").unwrap(),
        );
        assert!(approx_equal(&z, &want, &ctx));
        let z = Complex::parse("-1.5e-2-2i", &ctx).unwrap();
        let want = ctx.complex(
            ctx.real_from_str("-0.015").unwrap(),
            ctx.real_from_f64(-2.0),
        );
        assert!(approx_equal(&z, &want, &ctx));
        let z = Complex::parse("0.5", &ctx).unwrap();
        assert!(z.im.is_zero());
        let z = Complex::parse("0.5i", &ctx).unwrap();
        assert!(z.re.is_zero());
        assert!(Complex::parse("zebra", &ctx).is_err());
        assert!(Complex::parse("", &ctx).is_err());
        assert!(Complex::parse("1..2", &ctx).is_err());
    }

    #[test]
    fn decimal_rendering_is_stable_and_round_trips() {
        let ctx = ctx50();
        assert_eq!(ctx.zero().to_decimal(10, &ctx), "0");
        assert_eq!(ctx.real_from_f64(0.375).to_decimal(10, &ctx), "0.375");
        assert_eq!(ctx.real_from_u64(24).to_decimal(10, &ctx), "24");
        assert_eq!(ctx.real_from_f64(-0.375).to_decimal(10, &ctx), "-0.375");
        assert_eq!(ctx.ten_pow(-45).to_decimal(8, &ctx), "1e-45");
        // round-trip at full digits
        let x = ctx.real_from_str("0.89001009998999").unwrap();
        let s = x.to_decimal(50, &ctx);
        let y = ctx.real_from_str(&s).unwrap();
        assert!(x.sub(&y, &ctx).abs().le(&ctx.ten_pow(-45)));
    }

    #[test]
    fn to_i64_exact_accepts_integers_only() {
        let ctx = ctx50();
        assert_eq!(ctx.real_from_i64(-3).to_i64_exact(&ctx), Some(-3));
        assert_eq!(ctx.real_from_u64(8).to_i64_exact(&ctx), Some(8));
        assert_eq!(ctx.real_from_f64(2.5).to_i64_exact(&ctx), None);
    }

    proptest! {
        #[test]
        fn multiplicative_round_trip(v in -1.0e6f64..1.0e6f64) {
            prop_assume!(v.abs() > 1e-6);
            let ctx = ctx50();
            let x = Complex::from_real(ctx.real_from_f64(v), &ctx);
            let inv = ctx.complex_one().div(&x, &ctx).unwrap();
            let back = x.mul(&inv, &ctx);
            let err = relative_error(&back, &ctx.complex_one(), &ctx);
            prop_assert!(err.le(&ctx.ten_pow(-48)));
        }

        #[test]
        fn relative_error_is_symmetric(a in -100.0f64..100.0, b in -100.0f64..100.0) {
            let ctx = ctx50();
            let x = ctx.complex_from_f64(a, b);
            let y = ctx.complex_from_f64(b, a);
            let e1 = relative_error(&x, &y, &ctx);
            let e2 = relative_error(&y, &x, &ctx);
            prop_assert_eq!(e1.compare(&e2), Ordering::Equal);
        }

        #[test]
        fn format_parse_round_trip(v in -1.0e10f64..1.0e10f64) {
            prop_assume!(v != 0.0);
            let ctx = ctx50();
            let x = ctx.real_from_f64(v);
            let s = x.to_decimal(50, &ctx);
            let y = ctx.real_from_str(&s).unwrap();
            let gap = x.sub(&y, &ctx).abs();
            let bound = x.abs().mul(&ctx.ten_pow(-48), &ctx).add(&ctx.ten_pow(-48), &ctx);
            prop_assert!(gap.le(&bound));
        }
    }
}
