use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};

use super::extrat::rat_to_f64;
use super::{ExtRat, Rat};
use crate::error::{Error, Result};

/// A nonnegative real of the form `radicand^(1/root_index)` with rational radicand.
///
/// The set of such numbers is closed under products, quotients and rational
/// powers, which covers volume capacities `(a1...an)^(1/n)` and weighted
/// geometric means. It is not closed under sums; see [`AlgValue::checked_add`].
///
/// Values are canonical: the root index is the smallest possible, so structural
/// equality is numeric equality. Ordering is decided exactly by cross-powering.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AlgValue {
    radicand: ExtRat,
    root_index: u32,
}

impl AlgValue {
    pub fn rational(q: ExtRat) -> Self {
        AlgValue { radicand: q, root_index: 1 }
    }

    pub fn zero() -> Self {
        Self::rational(ExtRat::zero())
    }

    pub fn one() -> Self {
        Self::rational(ExtRat::one())
    }

    pub fn infinity() -> Self {
        Self::rational(ExtRat::infinity())
    }

    /// `q^(1/n)`, canonicalized. Panics if `n == 0`.
    pub fn root(q: ExtRat, n: u32) -> Self {
        assert!(n > 0, "zeroth root");
        canonical(q, n)
    }

    pub fn radicand(&self) -> &ExtRat {
        &self.radicand
    }

    pub fn root_index(&self) -> u32 {
        self.root_index
    }

    pub fn is_rational(&self) -> bool {
        self.root_index == 1
    }

    pub fn as_rational(&self) -> Option<&ExtRat> {
        self.is_rational().then_some(&self.radicand)
    }

    pub fn is_infinite(&self) -> bool {
        self.radicand.is_infinite()
    }

    pub fn is_zero(&self) -> bool {
        self.radicand.is_zero()
    }

    /// `radicand` raised to `exp`, as the radicand of a root of index `root_index * exp`.
    fn lifted(&self, exp: u32) -> ExtRat {
        self.radicand.pow(exp)
    }

    pub fn mul(&self, rhs: &AlgValue) -> AlgValue {
        if self.is_zero() || rhs.is_zero() {
            return AlgValue::zero();
        }
        let l = self.root_index.lcm(&rhs.root_index);
        let q = &self.lifted(l / self.root_index) * &rhs.lifted(l / rhs.root_index);
        canonical(q, l)
    }

    pub fn recip(&self) -> AlgValue {
        canonical(self.radicand.recip(), self.root_index)
    }

    /// `self / rhs`, or `None` for `0/0` and `inf/inf`.
    pub fn checked_div(&self, rhs: &AlgValue) -> Option<AlgValue> {
        if self.is_infinite() && rhs.is_infinite() || self.is_zero() && rhs.is_zero() {
            return None;
        }
        Some(self.mul(&rhs.recip()))
    }

    pub fn scale(&self, alpha: &ExtRat) -> AlgValue {
        self.mul(&AlgValue::rational(alpha.clone()))
    }

    /// `self^(p/d)` for a nonnegative rational exponent.
    pub fn pow_ratio(&self, p: u32, d: u32) -> AlgValue {
        assert!(d > 0, "zero exponent denominator");
        if p == 0 {
            return AlgValue::one();
        }
        canonical(self.radicand.pow(p), self.root_index * d)
    }

    /// Exact sum when the summands are rational multiples of one another.
    ///
    /// Returns `None` when the sum of two incommensurable radicals is requested,
    /// since such a sum is not of the form `q^(1/n)` in general.
    pub fn checked_add(&self, rhs: &AlgValue) -> Option<AlgValue> {
        if self.is_infinite() || rhs.is_infinite() {
            return Some(AlgValue::infinity());
        }
        if self.is_zero() {
            return Some(rhs.clone());
        }
        if rhs.is_zero() {
            return Some(self.clone());
        }
        let ratio = rhs.checked_div(self)?;
        let r = ratio.as_rational()?;
        Some(self.scale(&(&ExtRat::one() + r)))
    }

    pub fn to_f64(&self) -> f64 {
        match self.radicand.as_rat() {
            None => f64::INFINITY,
            Some(r) if self.root_index == 1 => rat_to_f64(r),
            Some(r) if r.is_zero() => 0.0,
            Some(r) => {
                let direct = rat_to_f64(r);
                if direct.is_finite() && direct > 0.0 {
                    direct.powf(1.0 / f64::from(self.root_index))
                } else {
                    (rat_ln(r) / f64::from(self.root_index)).exp()
                }
            }
        }
    }
}

fn rat_ln(r: &Rat) -> f64 {
    fn big_ln(n: &BigInt) -> f64 {
        let bits = n.bits();
        let shift = bits.saturating_sub(60);
        let top: f64 = num_traits::ToPrimitive::to_f64(&(n >> shift)).unwrap_or(1.0);
        top.ln() + shift as f64 * std::f64::consts::LN_2
    }
    big_ln(r.numer()) - big_ln(r.denom())
}

fn exact_root(n: &BigUint, k: u32) -> Option<BigUint> {
    let r = n.nth_root(k);
    (num_traits::pow(r.clone(), k as usize) == *n).then_some(r)
}

fn rational_root(q: &Rat, k: u32) -> Option<Rat> {
    let num = exact_root(q.numer().magnitude(), k)?;
    let den = exact_root(q.denom().magnitude(), k)?;
    Some(Rat::new(num.into(), den.into()))
}

fn prime_factors(mut n: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn canonical(q: ExtRat, mut n: u32) -> AlgValue {
    let Some(r) = q.as_rat() else {
        return AlgValue::infinity();
    };
    if r.is_zero() || r.is_one() {
        return AlgValue::rational(q);
    }
    let mut r = r.clone();
    'outer: while n > 1 {
        for p in prime_factors(n) {
            if let Some(root) = rational_root(&r, p) {
                r = root;
                n /= p;
                continue 'outer;
            }
        }
        break;
    }
    AlgValue { radicand: ExtRat::from_rat_unchecked(r), root_index: n }
}

impl Ord for AlgValue {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.is_infinite(), other.is_infinite()) {
            (true, true) => return Ordering::Equal,
            (true, false) => return Ordering::Greater,
            (false, true) => return Ordering::Less,
            _ => {}
        }
        let l = self.root_index.lcm(&other.root_index);
        self.lifted(l / self.root_index).cmp(&other.lifted(l / other.root_index))
    }
}

impl PartialOrd for AlgValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<ExtRat> for AlgValue {
    fn from(q: ExtRat) -> Self {
        AlgValue::rational(q)
    }
}

impl fmt::Display for AlgValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.root_index == 1 {
            return write!(f, "{}", self.radicand);
        }
        let q = self.radicand.as_rat().expect("finite radicand for proper roots");
        if q.is_integer() {
            write!(f, "{}^(1/{})", q, self.root_index)
        } else {
            write!(f, "({})^(1/{})", q, self.root_index)
        }
    }
}

impl fmt::Debug for AlgValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl serde::Serialize for AlgValue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Parses the [`Display`](fmt::Display) forms: `p/q`, `inf`, `q^(1/n)`, `(p/q)^(1/n)`.
impl FromStr for AlgValue {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let Some((base, idx)) = s.split_once("^(1/") else {
            return Ok(AlgValue::rational(s.parse()?));
        };
        let idx = idx
            .strip_suffix(')')
            .and_then(|i| i.parse::<u32>().ok())
            .filter(|&i| i > 0)
            .ok_or_else(|| Error::Parse(format!("invalid root index in `{s}`")))?;
        let base = base.trim().trim_start_matches('(').trim_end_matches(')');
        Ok(AlgValue::root(base.parse()?, idx))
    }
}
