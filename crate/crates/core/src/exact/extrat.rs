use std::fmt;
use std::ops::{Add, Mul};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::Rat;
use crate::error::{Error, Result};

/// A nonnegative rational number or `+inf`.
///
/// Capacities are stored in units of pi: the cylinder value `k * pi` of the
/// k-th Ekeland-Hofer capacity is the integer `k` here. Finite values are
/// kept in lowest terms and every finite value is smaller than `+inf`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExtRat(Repr);

// Variant order matters: the derived `Ord` puts every finite value below `Infinite`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Repr {
    Finite(Rat),
    Infinite,
}

impl ExtRat {
    pub fn zero() -> Self {
        ExtRat(Repr::Finite(Rat::zero()))
    }

    pub fn one() -> Self {
        ExtRat(Repr::Finite(Rat::one()))
    }

    pub fn infinity() -> Self {
        ExtRat(Repr::Infinite)
    }

    pub fn integer(n: u64) -> Self {
        ExtRat(Repr::Finite(Rat::from_integer(n.into())))
    }

    /// `num / den`. Panics when `den == 0`; use [`ExtRat::infinity`] for `+inf`.
    pub fn ratio(num: u64, den: u64) -> Self {
        assert!(den != 0, "ExtRat::ratio with zero denominator");
        ExtRat(Repr::Finite(Rat::new(num.into(), den.into())))
    }

    /// Wraps a signed rational, rejecting negative values.
    pub fn from_rat(r: Rat) -> Result<Self> {
        if r.is_negative() {
            return Err(Error::Domain { value: r.to_string(), domain: "[0, inf]" });
        }
        Ok(ExtRat(Repr::Finite(r)))
    }

    pub(crate) fn from_rat_unchecked(r: Rat) -> Self {
        debug_assert!(!r.is_negative());
        ExtRat(Repr::Finite(r))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self.0, Repr::Infinite)
    }

    pub fn is_finite(&self) -> bool {
        !self.is_infinite()
    }

    pub fn is_zero(&self) -> bool {
        matches!(&self.0, Repr::Finite(r) if r.is_zero())
    }

    pub fn as_rat(&self) -> Option<&Rat> {
        match &self.0 {
            Repr::Finite(r) => Some(r),
            Repr::Infinite => None,
        }
    }

    /// The finite value, or a domain error naming `what` for `+inf`.
    pub fn finite(&self, what: &'static str) -> Result<&Rat> {
        self.as_rat().ok_or(Error::Domain { value: "inf".into(), domain: what })
    }

    pub fn numer(&self) -> Option<BigUint> {
        self.as_rat().map(|r| r.numer().magnitude().clone())
    }

    pub fn denom(&self) -> Option<BigUint> {
        self.as_rat().map(|r| r.denom().magnitude().clone())
    }

    /// `1/x`, with `1/0 = inf` and `1/inf = 0`.
    pub fn recip(&self) -> ExtRat {
        match &self.0 {
            Repr::Infinite => ExtRat::zero(),
            Repr::Finite(r) if r.is_zero() => ExtRat::infinity(),
            Repr::Finite(r) => ExtRat(Repr::Finite(r.recip())),
        }
    }

    /// `self - rhs`, or `None` when the result would be negative or is `inf - inf`.
    pub fn checked_sub(&self, rhs: &ExtRat) -> Option<ExtRat> {
        match (&self.0, &rhs.0) {
            (Repr::Infinite, Repr::Finite(_)) => Some(ExtRat::infinity()),
            (Repr::Finite(a), Repr::Finite(b)) if a >= b => Some(ExtRat(Repr::Finite(a - b))),
            _ => None,
        }
    }

    /// `self / rhs`, or `None` for `0/0` and `inf/inf`.
    pub fn checked_div(&self, rhs: &ExtRat) -> Option<ExtRat> {
        match (&self.0, &rhs.0) {
            (Repr::Infinite, Repr::Infinite) => None,
            (Repr::Infinite, _) => Some(ExtRat::infinity()),
            (Repr::Finite(_), Repr::Infinite) => Some(ExtRat::zero()),
            (Repr::Finite(a), Repr::Finite(b)) => {
                if b.is_zero() {
                    if a.is_zero() {
                        None
                    } else {
                        Some(ExtRat::infinity())
                    }
                } else {
                    Some(ExtRat(Repr::Finite(a / b)))
                }
            }
        }
    }

    pub fn pow(&self, exp: u32) -> ExtRat {
        match &self.0 {
            Repr::Infinite if exp == 0 => ExtRat::one(),
            Repr::Infinite => ExtRat::infinity(),
            Repr::Finite(r) => ExtRat(Repr::Finite(num_traits::pow(r.clone(), exp as usize))),
        }
    }

    pub fn min(self, other: ExtRat) -> ExtRat {
        std::cmp::min(self, other)
    }

    pub fn floor(&self) -> Option<BigInt> {
        self.as_rat().map(|r| r.floor().to_integer())
    }

    pub fn to_f64(&self) -> f64 {
        match &self.0 {
            Repr::Infinite => f64::INFINITY,
            Repr::Finite(r) => rat_to_f64(r),
        }
    }
}

/// Nearest `f64` to a rational, for display only.
pub fn rat_to_f64(r: &Rat) -> f64 {
    // Shift both parts down to f64 range before dividing so huge operands survive.
    let n = r.numer();
    let d = r.denom();
    let shift = n.bits().max(d.bits()).saturating_sub(1000);
    let n = (n >> shift).to_f64().unwrap_or(f64::NAN);
    let d = (d >> shift).to_f64().unwrap_or(f64::NAN);
    n / d
}

impl Default for ExtRat {
    fn default() -> Self {
        ExtRat::zero()
    }
}

impl From<u64> for ExtRat {
    fn from(n: u64) -> Self {
        ExtRat::integer(n)
    }
}

impl TryFrom<Rat> for ExtRat {
    type Error = Error;
    fn try_from(r: Rat) -> Result<Self> {
        ExtRat::from_rat(r)
    }
}

impl Add<&ExtRat> for &ExtRat {
    type Output = ExtRat;
    fn add(self, rhs: &ExtRat) -> ExtRat {
        match (&self.0, &rhs.0) {
            (Repr::Finite(a), Repr::Finite(b)) => ExtRat(Repr::Finite(a + b)),
            _ => ExtRat::infinity(),
        }
    }
}

impl Add for ExtRat {
    type Output = ExtRat;
    fn add(self, rhs: ExtRat) -> ExtRat {
        &self + &rhs
    }
}

/// Multiplication uses the measure-theoretic convention `0 * inf = 0`.
impl Mul<&ExtRat> for &ExtRat {
    type Output = ExtRat;
    fn mul(self, rhs: &ExtRat) -> ExtRat {
        match (&self.0, &rhs.0) {
            (Repr::Finite(a), Repr::Finite(b)) => ExtRat(Repr::Finite(a * b)),
            (Repr::Finite(a), Repr::Infinite) | (Repr::Infinite, Repr::Finite(a)) if a.is_zero() => {
                ExtRat::zero()
            }
            _ => ExtRat::infinity(),
        }
    }
}

impl Mul for ExtRat {
    type Output = ExtRat;
    fn mul(self, rhs: ExtRat) -> ExtRat {
        &self * &rhs
    }
}

impl fmt::Display for ExtRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Infinite => f.write_str("inf"),
            Repr::Finite(r) => write!(f, "{}", r),
        }
    }
}

impl fmt::Debug for ExtRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl serde::Serialize for ExtRat {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Parses `inf`, `p`, `p/q` and finite decimals such as `0.41` (exactly).
impl FromStr for ExtRat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("invalid nonnegative rational `{s}`"));
        if s == "inf" || s == "∞" {
            return Ok(ExtRat::infinity());
        }
        if let Some((p, q)) = s.split_once('/') {
            let p = parse_decimal(p.trim()).ok_or_else(bad)?;
            let q = parse_decimal(q.trim()).ok_or_else(bad)?;
            if q.is_zero() {
                return Err(bad());
            }
            return Ok(ExtRat(Repr::Finite(p / q)));
        }
        parse_decimal(s).map(|r| ExtRat(Repr::Finite(r))).ok_or_else(bad)
    }
}

fn parse_decimal(s: &str) -> Option<Rat> {
    if s.is_empty() || s.starts_with(['+', '-']) {
        return None;
    }
    let (int, frac) = s.split_once('.').unwrap_or((s, ""));
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits: BigInt = format!("{int}{frac}").parse().ok()?;
    let scale = num_traits::pow(BigInt::from(10u8), frac.len());
    Some(Rat::new(digits, scale))
}
