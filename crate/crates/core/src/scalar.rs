//! Coefficient fields.
//!
//! Every algebraic routine in the crate is generic over [`Scalar`], so the
//! same code runs in exact rational arithmetic (where identities must hold
//! with residual exactly zero) and in `f64` (where they hold up to
//! rounding).

use std::fmt::{self, Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

/// Exact rational numbers with arbitrary-precision numerator and denominator.
pub type Rational = BigRational;

pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
    + 'static
{
    /// True for exact backends. Tolerances are ignored when this is set.
    const EXACT: bool;

    fn from_rational(q: &Rational) -> Self;

    fn to_f64(&self) -> f64;

    fn from_i64(n: i64) -> Self {
        Self::from_rational(&Rational::from_integer(BigInt::from(n)))
    }

    fn ratio(num: i64, den: i64) -> Self {
        Self::from_rational(&Rational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// Zero within `tol` for floats; exactly zero for exact backends.
    fn is_negligible(&self, tol: f64) -> bool {
        if Self::EXACT {
            self.is_zero()
        } else {
            self.to_f64().abs() <= tol
        }
    }

    /// Magnitude used for pivot selection.
    fn magnitude(&self) -> f64 {
        self.to_f64().abs()
    }

    /// Square root if it exists in this field.
    fn sqrt(&self) -> Option<Self>;

    /// Round-trippable text form.
    fn to_text(&self) -> String;

    fn from_text(s: &str) -> Result<Self>;
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_rational(q: &Rational) -> Self {
        rational_to_f64(q)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn sqrt(&self) -> Option<Self> {
        (*self >= 0.0).then(|| f64::sqrt(*self))
    }

    fn to_text(&self) -> String {
        format!("{self:?}")
    }

    fn from_text(s: &str) -> Result<Self> {
        s.trim()
            .parse::<f64>()
            .ok()
            .filter(|x| x.is_finite())
            .ok_or_else(|| Error::parse(1, format!("invalid number: `{s}`")))
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }

    fn to_f64(&self) -> f64 {
        rational_to_f64(self)
    }

    fn sqrt(&self) -> Option<Self> {
        if self.is_negative() {
            return None;
        }
        let num = exact_isqrt(self.numer())?;
        let den = exact_isqrt(self.denom())?;
        Some(Rational::new(num, den))
    }

    fn to_text(&self) -> String {
        format_rational(self)
    }

    fn from_text(s: &str) -> Result<Self> {
        parse_rational(s).map(|(q, _)| q)
    }
}

fn exact_isqrt(n: &BigInt) -> Option<BigInt> {
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

pub fn rational_to_f64(q: &Rational) -> f64 {
    ToPrimitive::to_f64(q).unwrap_or_else(|| {
        // Fallback for huge numerators/denominators.
        let n = q.numer().to_f64().unwrap_or(f64::NAN);
        let d = q.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// How a textual rational was written.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Notation {
    /// `p`, `-p` or `p/q`.
    Fraction,
    /// Decimal or scientific notation, converted exactly from its digits.
    Decimal,
}

/// Parses `"3/2"`, `"-4"`, `"0.25"` or `"1e-3"` into an exact rational.
///
/// Decimal input is converted from its written digits, so `"0.1"` becomes
/// exactly `1/10`; the returned [`Notation`] lets callers warn about it.
pub fn parse_rational(text: &str) -> Result<(Rational, Notation)> {
    let s = text.trim();
    let bad = |msg: &str| Error::parse(1, format!("{msg}: `{text}`"));
    if s.is_empty() {
        return Err(bad("empty number"));
    }
    if let Some((n, d)) = s.split_once('/') {
        let n = parse_integer(n).ok_or_else(|| bad("invalid numerator"))?;
        let d = parse_integer(d).ok_or_else(|| bad("invalid denominator"))?;
        if d.is_zero() {
            return Err(bad("zero denominator"));
        }
        return Ok((Rational::new(n, d), Notation::Fraction));
    }
    if let Some(n) = parse_integer(s) {
        return Ok((Rational::from_integer(n), Notation::Fraction));
    }
    parse_decimal(s)
        .map(|q| (q, Notation::Decimal))
        .ok_or_else(|| bad("invalid number"))
}

fn parse_integer(s: &str) -> Option<BigInt> {
    let s = s.trim();
    let digits = s.strip_prefix(['+', '-']).unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.strip_prefix('+').unwrap_or(s).parse().ok()
}

fn parse_decimal(s: &str) -> Option<Rational> {
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => {
            let exp: i32 = s[pos + 1..].parse().ok()?;
            (&s[..pos], exp)
        }
        None => (s, 0),
    };
    let (negative, body) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (whole, frac) = body.split_once('.').unwrap_or((body, ""));
    if whole.is_empty() && frac.is_empty() {
        return None;
    }
    if !whole.bytes().chain(frac.bytes()).all(|b| b.is_ascii_digit()) {
        return None;
    }
    // Keep the exponent range sane so hostile input cannot allocate 10^huge.
    let scale = exponent.checked_sub(i32::try_from(frac.len()).ok()?)?;
    if scale.unsigned_abs() > 4096 {
        return None;
    }
    let digits: BigInt = format!("0{whole}{frac}").parse().ok()?;
    let ten = BigInt::from(10);
    let mut q = Rational::from_integer(digits);
    let power = num_traits::pow(ten, scale.unsigned_abs() as usize);
    if scale >= 0 {
        q *= Rational::from_integer(power);
    } else {
        q /= Rational::from_integer(power);
    }
    Some(if negative { -q } else { q })
}

/// Formats a rational as `p` or `p/q`.
pub fn format_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// A real number of the form `coeff · π^pi_power` with rational `coeff`.
///
/// Bilinear-form scales such as `1/(16π²)` and volumes such as `2π²` are
/// kept in this shape so that their products cancel exactly.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PiMultiple {
    #[serde(serialize_with = "serialize_rational")]
    pub coeff: Rational,
    pub pi_power: i32,
}

impl PiMultiple {
    pub fn new(coeff: Rational, pi_power: i32) -> Self {
        Self { coeff, pi_power }
    }

    pub fn rational(coeff: Rational) -> Self {
        Self::new(coeff, 0)
    }

    pub fn one() -> Self {
        Self::rational(Rational::one())
    }

    /// `1/(16π²)`, the normalization making the trace-form CS class integral.
    pub fn sixteen_pi_sq_inv() -> Self {
        Self::new(rat(1, 16), -2)
    }

    /// Exact value when the π powers cancel.
    pub fn as_rational(&self) -> Option<&Rational> {
        (self.pi_power == 0 || self.coeff.is_zero()).then_some(&self.coeff)
    }

    pub fn to_f64(&self) -> f64 {
        rational_to_f64(&self.coeff) * std::f64::consts::PI.powi(self.pi_power)
    }

    pub fn scale(&self, q: &Rational) -> Self {
        Self::new(&self.coeff * q, self.pi_power)
    }
}

impl Mul for &PiMultiple {
    type Output = PiMultiple;

    fn mul(self, rhs: &PiMultiple) -> PiMultiple {
        PiMultiple::new(&self.coeff * &rhs.coeff, self.pi_power + rhs.pi_power)
    }
}

impl Display for PiMultiple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = format_rational(&self.coeff);
        match self.pi_power {
            0 => write!(f, "{c}"),
            1 => write!(f, "{c}·π"),
            p => write!(f, "{c}·π^{p}"),
        }
    }
}

pub(crate) fn serialize_rational<S: serde::Serializer>(
    q: &Rational,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(q))
}
