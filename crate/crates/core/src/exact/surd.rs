use std::cmp::Ordering;
use std::fmt;

use num_traits::{One, Signed, Zero};

use super::extrat::rat_to_f64;
use super::{AlgValue, Rat};

/// A signed real `rational + coeff * sqrt(radicand)` with rational parts.
///
/// Appears where a linear piece meets the hyperbola `2a/(1+a)`: the extremum of
/// their difference lies at `a = sqrt(2/s) - 1`. Comparisons are exact, also
/// between surds with different radicands.
#[derive(Clone)]
pub struct QuadSurd {
    rational: Rat,
    coeff: Rat,
    radicand: Rat,
}

impl QuadSurd {
    pub fn new(rational: Rat, coeff: Rat, radicand: Rat) -> Self {
        assert!(!radicand.is_negative(), "negative radicand");
        if coeff.is_zero() || radicand.is_zero() {
            return Self::from_rat(rational);
        }
        QuadSurd { rational, coeff, radicand }
    }

    pub fn from_rat(r: Rat) -> Self {
        QuadSurd { rational: r, coeff: Rat::zero(), radicand: Rat::zero() }
    }

    pub fn rational_part(&self) -> &Rat {
        &self.rational
    }

    pub fn as_rational(&self) -> Option<&Rat> {
        self.coeff.is_zero().then_some(&self.rational)
    }

    pub fn neg(&self) -> Self {
        QuadSurd { rational: -&self.rational, coeff: -&self.coeff, radicand: self.radicand.clone() }
    }

    pub fn add_rat(&self, r: &Rat) -> Self {
        QuadSurd { rational: &self.rational + r, ..self.clone() }
    }

    /// `self^n`, staying inside `Q(sqrt(radicand))`.
    pub fn pow(&self, n: u32) -> Self {
        let (mut p, mut q) = (Rat::one(), Rat::zero());
        for _ in 0..n {
            let np = &p * &self.rational + &q * &self.coeff * &self.radicand;
            let nq = &p * &self.coeff + &q * &self.rational;
            p = np;
            q = nq;
        }
        QuadSurd::new(p, q, self.radicand.clone())
    }

    pub fn signum(&self) -> Ordering {
        sign1(&self.rational, &self.coeff, &self.radicand)
    }

    /// Exact comparison with `value`, a nonnegative `q^(1/n)`.
    pub fn cmp_alg(&self, value: &AlgValue) -> Ordering {
        if value.is_infinite() {
            return Ordering::Less;
        }
        if self.signum() != Ordering::Greater {
            return if value.is_zero() && self.signum() == Ordering::Equal {
                Ordering::Equal
            } else {
                Ordering::Less
            };
        }
        // Both sides positive: x^n against the radicand.
        let q = value.radicand().as_rat().expect("finite");
        self.pow(value.root_index()).add_rat(&-q).signum()
    }

    pub fn to_f64(&self) -> f64 {
        rat_to_f64(&self.rational) + rat_to_f64(&self.coeff) * rat_to_f64(&self.radicand).sqrt()
    }
}

fn sgn(r: &Rat) -> Ordering {
    r.cmp(&Rat::zero())
}

/// Sign of `a + b sqrt(s)`.
fn sign1(a: &Rat, b: &Rat, s: &Rat) -> Ordering {
    let sa = sgn(a);
    let sb = if s.is_zero() { Ordering::Equal } else { sgn(b) };
    match (sa, sb) {
        (x, Ordering::Equal) => x,
        (Ordering::Equal, y) => y,
        (x, y) if x == y => x,
        (x, _) => {
            // Opposite signs: the larger magnitude wins.
            let mag = sgn(&(a * a - b * b * s));
            if mag == Ordering::Equal {
                Ordering::Equal
            } else if mag == Ordering::Greater {
                x
            } else {
                x.reverse()
            }
        }
    }
}

/// Sign of `a + b sqrt(s) + c sqrt(t)`.
fn sign2(a: &Rat, b: &Rat, s: &Rat, c: &Rat, t: &Rat) -> Ordering {
    let sx = sign1(a, b, s);
    let sy = if t.is_zero() { Ordering::Equal } else { sgn(c) };
    match (sx, sy) {
        (x, Ordering::Equal) => x,
        (Ordering::Equal, y) => y,
        (x, y) if x == y => x,
        (x, _) => {
            // |X| vs |Y| through X^2 - Y^2 = (a^2 + b^2 s - c^2 t) + 2ab sqrt(s).
            let two = Rat::from_integer(2.into());
            let mag = sign1(&(a * a + b * b * s - c * c * t), &(two * a * b), s);
            if mag == Ordering::Equal {
                Ordering::Equal
            } else if mag == Ordering::Greater {
                x
            } else {
                x.reverse()
            }
        }
    }
}

impl PartialEq for QuadSurd {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for QuadSurd {}

impl Ord for QuadSurd {
    fn cmp(&self, other: &Self) -> Ordering {
        sign2(
            &(&self.rational - &other.rational),
            &self.coeff,
            &self.radicand,
            &-&other.coeff,
            &other.radicand,
        )
    }
}

impl PartialOrd for QuadSurd {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<Rat> for QuadSurd {
    fn from(r: Rat) -> Self {
        QuadSurd::from_rat(r)
    }
}

impl fmt::Display for QuadSurd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeff.is_zero() {
            return write!(f, "{}", self.rational);
        }
        if !self.rational.is_zero() {
            write!(f, "{} ", self.rational)?;
            f.write_str(if self.coeff.is_negative() { "- " } else { "+ " })?;
        } else if self.coeff.is_negative() {
            f.write_str("-")?;
        }
        write!(f, "{}*sqrt({})", self.coeff.abs(), self.radicand)
    }
}

impl fmt::Debug for QuadSurd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl serde::Serialize for QuadSurd {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}
