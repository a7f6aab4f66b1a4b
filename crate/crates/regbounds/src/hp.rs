//! High-precision real arithmetic.
//!
//! All inexact quantities in this crate (log absolute values, heights,
//! regulators, δ-norms) are binary floats of a fixed working precision,
//! carried by [`HPReal`]. Every operation goes through a [`Ctx`], which
//! pins the precision, the rounding mode and the comparison tolerance τ.
//! Values are never compared for exact equality; predicates that decide
//! an inequality or identity always allow a τ margin.

use std::cell::RefCell;
use std::cmp::Ordering;

use astro_float::{BigFloat, Consts, Radix, RoundingMode};
use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};

/// Arbitrary-precision binary float. Carries its own precision in bits.
pub type HPReal = BigFloat;

const RM: RoundingMode = RoundingMode::ToEven;

/// Default working precision in bits.
pub const DEFAULT_PRECISION: usize = 128;

/// Arithmetic context: precision, rounding and tolerance.
pub struct Ctx {
    prec: usize,
    tau: HPReal,
    consts: RefCell<Consts>,
}

impl Ctx {
    /// Context with the default tolerance τ = 2^(-precision/2).
    pub fn new(precision: usize) -> Self {
        let precision = precision.max(64);
        let mut tau = BigFloat::from_i8(1, precision);
        let e = tau.exponent().expect("one has an exponent");
        tau.set_exponent(e - (precision as i32) / 2);
        Ctx {
            prec: precision,
            tau,
            consts: RefCell::new(Consts::new().expect("constants cache")),
        }
    }

    /// Context with an explicit tolerance given as a decimal string.
    pub fn with_tolerance(precision: usize, tolerance: &str) -> Result<Self> {
        let mut ctx = Ctx::new(precision);
        let tau = ctx.parse(tolerance)?;
        if tau.is_negative() || tau.is_zero() {
            return Err(Error::Number(format!("tolerance must be positive: {tolerance}")));
        }
        ctx.tau = tau;
        Ok(ctx)
    }

    pub fn precision(&self) -> usize {
        self.prec
    }

    pub fn tau(&self) -> &HPReal {
        &self.tau
    }

    pub fn zero(&self) -> HPReal {
        BigFloat::from_i8(0, self.prec)
    }

    pub fn one(&self) -> HPReal {
        BigFloat::from_i8(1, self.prec)
    }

    pub fn from_i64(&self, v: i64) -> HPReal {
        BigFloat::from_i64(v, self.prec)
    }

    pub fn from_f64(&self, v: f64) -> HPReal {
        BigFloat::from_f64(v, self.prec)
    }

    pub fn from_bigint(&self, v: &BigInt) -> HPReal {
        // Round-trip through decimal; exact whenever the value fits the mantissa.
        let mut cc = self.consts.borrow_mut();
        BigFloat::parse(&v.to_string(), Radix::Dec, self.prec, RM, &mut cc)
    }

    pub fn from_ratio(&self, v: &BigRational) -> HPReal {
        let n = self.from_bigint(v.numer());
        let d = self.from_bigint(v.denom());
        self.div(&n, &d)
    }

    /// Parse a decimal string at working precision.
    pub fn parse(&self, s: &str) -> Result<HPReal> {
        let t = s.trim();
        let ok = !t.is_empty()
            && t.chars()
                .all(|c| c.is_ascii_digit() || matches!(c, '+' | '-' | '.' | 'e' | 'E'));
        if !ok {
            return Err(Error::Number(s.to_string()));
        }
        let mut cc = self.consts.borrow_mut();
        let v = BigFloat::parse(t, Radix::Dec, self.prec, RM, &mut cc);
        if v.is_nan() || v.is_inf() {
            return Err(Error::Number(s.to_string()));
        }
        Ok(v)
    }

    pub fn add(&self, a: &HPReal, b: &HPReal) -> HPReal {
        a.add(b, self.prec, RM)
    }

    pub fn sub(&self, a: &HPReal, b: &HPReal) -> HPReal {
        a.sub(b, self.prec, RM)
    }

    pub fn mul(&self, a: &HPReal, b: &HPReal) -> HPReal {
        a.mul(b, self.prec, RM)
    }

    pub fn div(&self, a: &HPReal, b: &HPReal) -> HPReal {
        a.div(b, self.prec, RM)
    }

    pub fn neg(&self, a: &HPReal) -> HPReal {
        a.neg()
    }

    pub fn abs(&self, a: &HPReal) -> HPReal {
        a.abs()
    }

    pub fn sqrt(&self, a: &HPReal) -> HPReal {
        a.sqrt(self.prec, RM)
    }

    pub fn ln(&self, a: &HPReal) -> HPReal {
        let mut cc = self.consts.borrow_mut();
        a.ln(self.prec, RM, &mut cc)
    }

    pub fn sum<'a, I: IntoIterator<Item = &'a HPReal>>(&self, it: I) -> HPReal {
        let mut acc = self.zero();
        for x in it {
            acc = self.add(&acc, x);
        }
        acc
    }

    pub fn product<'a, I: IntoIterator<Item = &'a HPReal>>(&self, it: I) -> HPReal {
        let mut acc = self.one();
        for x in it {
            acc = self.mul(&acc, x);
        }
        acc
    }

    /// Total order; valid inputs never produce NaN.
    pub fn cmp(&self, a: &HPReal, b: &HPReal) -> Ordering {
        match a.cmp(b) {
            Some(v) => v.cmp(&0),
            None => panic!("NaN in comparison"),
        }
    }

    /// max(0, x): positive part.
    pub fn pos(&self, x: &HPReal) -> HPReal {
        if x.is_positive() && !x.is_zero() {
            x.clone()
        } else {
            self.zero()
        }
    }

    /// max(0, -x): negative part.
    pub fn negpart(&self, x: &HPReal) -> HPReal {
        self.pos(&x.neg())
    }

    pub fn max(&self, a: &HPReal, b: &HPReal) -> HPReal {
        if self.cmp(a, b) == Ordering::Less {
            b.clone()
        } else {
            a.clone()
        }
    }

    /// a ≤ b + τ
    pub fn le_tau(&self, a: &HPReal, b: &HPReal) -> bool {
        self.cmp(a, &self.add(b, &self.tau)) != Ordering::Greater
    }

    /// |a - b| ≤ τ
    pub fn eq_tau(&self, a: &HPReal, b: &HPReal) -> bool {
        self.cmp(&self.sub(a, b).abs(), &self.tau) != Ordering::Greater
    }

    /// |x| ≤ τ
    pub fn is_zero_tau(&self, x: &HPReal) -> bool {
        self.cmp(&x.abs(), &self.tau) != Ordering::Greater
    }

    /// Nearest integer, plus the rounding residual x - round(x).
    pub fn round_to_bigint(&self, x: &HPReal) -> (BigInt, HPReal) {
        let half = {
            let mut h = self.one();
            let e = h.exponent().expect("one has an exponent");
            h.set_exponent(e - 1);
            h
        };
        let shifted = if x.is_negative() {
            self.sub(x, &half)
        } else {
            self.add(x, &half)
        };
        let int_part = shifted.int();
        let mut cc = self.consts.borrow_mut();
        let s = int_part
            .format(Radix::Dec, RM, &mut cc)
            .expect("finite value formats");
        drop(cc);
        let n: BigInt = parse_sci_int(&s);
        let back = self.from_bigint(&n);
        let resid = self.sub(x, &back);
        (n, resid)
    }

    /// Convert to f64 (used only for search envelopes and sampling, never
    /// for accepted results).
    pub fn to_f64(&self, x: &HPReal) -> f64 {
        if x.is_zero() {
            return 0.0;
        }
        let mut cc = self.consts.borrow_mut();
        let reduced = x.clone();
        let s = reduced
            .format(Radix::Dec, RM, &mut cc)
            .expect("finite value formats");
        s.parse::<f64>().unwrap_or(f64::NAN)
    }

    /// Decimal rendering with `digits` significant digits: plain decimal
    /// for moderate magnitudes, scientific form otherwise.
    pub fn format_sig(&self, x: &HPReal, digits: usize) -> String {
        if x.is_zero() {
            return "0".to_string();
        }
        let bits = (digits as f64 * std::f64::consts::LOG2_10).ceil() as usize + 2;
        let mut y = x.clone();
        if y.set_precision(bits.max(32), RM).is_err() {
            return format!("{x}");
        }
        let mut cc = self.consts.borrow_mut();
        match y.format(Radix::Dec, RM, &mut cc) {
            Ok(s) => {
                let t = trim_sig(&s, digits);
                sci_to_plain(&t).unwrap_or(t)
            }
            Err(_) => format!("{x}"),
        }
    }
}

/// Truncates a scientific-notation string to `digits` significant digits.
fn trim_sig(s: &str, digits: usize) -> String {
    let (mant, exp) = match s.split_once(['e', 'E']) {
        Some((m, e)) => (m, Some(e)),
        None => (s, None),
    };
    let neg = mant.starts_with('-');
    let m = mant.trim_start_matches(['-', '+']);
    let (int_part, frac_part) = m.split_once('.').unwrap_or((m, ""));
    let frac_keep: &str = &frac_part[..frac_part.len().min(digits.saturating_sub(int_part.len()))];
    let frac_keep = frac_keep.trim_end_matches('0');
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    out.push_str(int_part);
    if !frac_keep.is_empty() {
        out.push('.');
        out.push_str(frac_keep);
    }
    if let Some(e) = exp {
        out.push('e');
        out.push_str(e);
    }
    out
}

/// Rewrites scientific notation as a plain decimal when the exponent is
/// small enough to read comfortably; None keeps the original form.
fn sci_to_plain(s: &str) -> Option<String> {
    let (mant, exp) = s.split_once(['e', 'E'])?;
    let exp: i64 = exp.parse().ok()?;
    let neg = mant.starts_with('-');
    let mant = mant.trim_start_matches(['-', '+']);
    let (int_part, frac_part) = mant.split_once('.').unwrap_or((mant, ""));
    let digits = format!("{int_part}{frac_part}");
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    // Position of the decimal point counted from the left of `digits`.
    let point = int_part.len() as i64 + exp;
    if !(-8..=48).contains(&point) {
        return None;
    }
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    if point <= 0 {
        out.push_str("0.");
        for _ in 0..-point {
            out.push('0');
        }
        out.push_str(digits.trim_end_matches('0'));
    } else if point as usize >= digits.len() {
        out.push_str(&digits);
        for _ in 0..point as usize - digits.len() {
            out.push('0');
        }
    } else {
        out.push_str(&digits[..point as usize]);
        let frac = digits[point as usize..].trim_end_matches('0');
        if !frac.is_empty() {
            out.push('.');
            out.push_str(frac);
        }
    }
    Some(out)
}

/// Parse astro-float's scientific decimal output (e.g. "4.2e+1") as an integer.
fn parse_sci_int(s: &str) -> BigInt {
    let s = s.trim();
    let (mant, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i64>().unwrap_or(0)),
        None => (s, 0),
    };
    let neg = mant.starts_with('-');
    let mant = mant.trim_start_matches(['-', '+']);
    let (int_part, frac_part) = match mant.find('.') {
        Some(i) => (&mant[..i], mant[i + 1..].trim_end_matches('0')),
        None => (mant, ""),
    };
    let mut digits: String = int_part.to_string();
    digits.push_str(frac_part);
    let mut exp = exp - frac_part.len() as i64;
    if digits.is_empty() {
        digits.push('0');
    }
    let mut n: BigInt = digits.parse().unwrap_or_default();
    while exp > 0 {
        n *= 10;
        exp -= 1;
    }
    while exp < 0 {
        n /= 10;
        exp += 1;
    }
    if neg {
        -n
    } else {
        n
    }
}
