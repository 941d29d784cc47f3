//! Exact piecewise-linear functions on `(0, 1]`.
//!
//! A normalized capacity on 4-dimensional ellipsoids is a function
//! `c(a) = c(E(a, 1))`; the normalized Ekeland-Hofer capacities are piecewise
//! linear in this picture. The domain is open at 0, so the function is stored as
//! its limit at `0+` followed by knots `(x_i, f(x_i))` with `x_last = 1`.

use std::cmp::Ordering;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{ExtRat, Rat};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiecewiseLinearFn {
    at_zero: Rat,
    knots: Vec<(Rat, Rat)>,
}

/// Outcome of [`PiecewiseLinearFn::compare`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PlComparison {
    Equal,
    /// `f <= g` everywhere, strictly somewhere.
    Below,
    /// `f >= g` everywhere, strictly somewhere.
    Above,
    /// `f(above_at) > g(above_at)` and `f(below_at) < g(below_at)`.
    Incomparable { above_at: Rat, below_at: Rat },
}

impl PlComparison {
    pub fn is_le(&self) -> bool {
        matches!(self, PlComparison::Equal | PlComparison::Below)
    }

    pub fn is_ge(&self) -> bool {
        matches!(self, PlComparison::Equal | PlComparison::Above)
    }
}

/// A linear piece `[x0, x1]` with its endpoint values. For the first piece `x0 = 0`
/// stands for the open end.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Piece {
    pub x0: Rat,
    pub y0: Rat,
    pub x1: Rat,
    pub y1: Rat,
}

impl Piece {
    pub fn slope(&self) -> Rat {
        (&self.y1 - &self.y0) / (&self.x1 - &self.x0)
    }
}

fn domain_err(a: &dyn std::fmt::Display) -> Error {
    Error::Domain { value: a.to_string(), domain: "(0, 1]" }
}

impl PiecewiseLinearFn {
    /// Builds the function from `f(0+)` and its knots.
    ///
    /// Knot abscissae must increase strictly inside `(0, 1]` and end at 1; values
    /// must be nonnegative and nondecreasing. Collinear knots are dropped, so two
    /// functions compare equal exactly when they agree pointwise.
    pub fn new(at_zero: Rat, knots: Vec<(Rat, Rat)>) -> Result<Self> {
        let invalid = |msg: &str| Error::InvalidExpr(format!("piecewise-linear function: {msg}"));
        if knots.last().map(|k| k.0.is_one()) != Some(true) {
            return Err(invalid("last knot must sit at a = 1"));
        }
        if at_zero.is_negative() {
            return Err(invalid("negative value"));
        }
        let mut prev = (Rat::zero(), at_zero.clone());
        for (x, y) in &knots {
            if *x <= prev.0 {
                return Err(invalid("knots must increase strictly in (0, 1]"));
            }
            if *y < prev.1 {
                return Err(invalid("function must be nondecreasing"));
            }
            prev = (x.clone(), y.clone());
        }
        let mut f = PiecewiseLinearFn { at_zero, knots };
        f.drop_collinear();
        Ok(f)
    }

    /// A function with `f(0+) = 0`.
    pub fn through_origin(knots: Vec<(Rat, Rat)>) -> Result<Self> {
        Self::new(Rat::zero(), knots)
    }

    /// Builds from the initial slope and `(slope, value at right breakpoint)` segments
    /// following the first breakpoint.
    pub fn from_slopes(breakpoints: Vec<Rat>, left_slope: Rat, segments: Vec<(Rat, Rat)>) -> Result<Self> {
        if breakpoints.len() != segments.len() + 1 {
            return Err(Error::InvalidExpr("one segment per breakpoint after the first".into()));
        }
        let mut knots = Vec::with_capacity(breakpoints.len());
        knots.push((breakpoints[0].clone(), &left_slope * &breakpoints[0]));
        for (i, (slope, value)) in segments.into_iter().enumerate() {
            let (x0, y0) = knots[i].clone();
            let x1 = breakpoints[i + 1].clone();
            if &y0 + &slope * (&x1 - &x0) != value {
                return Err(Error::InvalidExpr("segment slope and value disagree".into()));
            }
            knots.push((x1, value));
        }
        Self::through_origin(knots)
    }

    pub fn identity() -> Self {
        PiecewiseLinearFn { at_zero: Rat::zero(), knots: vec![(Rat::one(), Rat::one())] }
    }

    pub fn constant(c: Rat) -> Result<Self> {
        Self::new(c.clone(), vec![(Rat::one(), c)])
    }

    fn drop_collinear(&mut self) {
        let mut out: Vec<(Rat, Rat)> = Vec::with_capacity(self.knots.len());
        for k in std::mem::take(&mut self.knots) {
            while let Some(last) = out.last() {
                let (px, py) = out.len().checked_sub(2).map_or((Rat::zero(), self.at_zero.clone()), |i| out[i].clone());
                // Drop `last` when it lies on the segment from the previous point to `k`.
                if (&last.1 - &py) * (&k.0 - &px) == (&k.1 - &py) * (&last.0 - &px) {
                    out.pop();
                } else {
                    break;
                }
            }
            out.push(k);
        }
        self.knots = out;
    }

    pub fn value_at_zero(&self) -> &Rat {
        &self.at_zero
    }

    pub fn knots(&self) -> &[(Rat, Rat)] {
        &self.knots
    }

    /// Breakpoints in `(0, 1]`, always including 1.
    pub fn breakpoints(&self) -> impl Iterator<Item = &Rat> {
        self.knots.iter().map(|k| &k.0)
    }

    /// Slope of the initial piece starting at `0+`.
    pub fn left_slope(&self) -> Rat {
        self.pieces().next().expect("nonempty").slope()
    }

    /// `(slope, value at right breakpoint)` for every piece after the initial one.
    pub fn segments(&self) -> Vec<(Rat, Rat)> {
        self.pieces().skip(1).map(|p| (p.slope(), p.y1)).collect()
    }

    pub fn pieces(&self) -> impl Iterator<Item = Piece> + '_ {
        let starts = std::iter::once((Rat::zero(), self.at_zero.clone())).chain(self.knots.iter().cloned());
        starts.zip(self.knots.iter()).map(|((x0, y0), (x1, y1))| Piece { x0, y0, x1: x1.clone(), y1: y1.clone() })
    }

    /// Exact value at `a` in `(0, 1]`.
    pub fn eval_rat(&self, a: &Rat) -> Result<Rat> {
        if !a.is_positive() || *a > Rat::one() {
            return Err(domain_err(a));
        }
        let i = self.knots.partition_point(|k| k.0 < *a);
        let (x1, y1) = &self.knots[i];
        if x1 == a {
            return Ok(y1.clone());
        }
        let (x0, y0) = if i == 0 { (Rat::zero(), self.at_zero.clone()) } else { self.knots[i - 1].clone() };
        Ok(&y0 + (y1 - &y0) * (a - &x0) / (x1 - &x0))
    }

    pub fn eval(&self, a: &ExtRat) -> Result<ExtRat> {
        let r = a.as_rat().ok_or_else(|| domain_err(a))?;
        self.eval_rat(r).map(ExtRat::from_rat_unchecked)
    }

    /// `f` multiplied by a nonnegative constant.
    pub fn scaled(&self, alpha: &Rat) -> Self {
        assert!(!alpha.is_negative());
        let mut f = PiecewiseLinearFn {
            at_zero: &self.at_zero * alpha,
            knots: self.knots.iter().map(|(x, y)| (x.clone(), y * alpha)).collect(),
        };
        f.drop_collinear();
        f
    }

    /// The first piece on which `f(a)/a` increases, if any.
    ///
    /// `f(a)/a` is nonincreasing on a piece `[x0, x1]` of slope `s` exactly when
    /// `s <= f(x0)/x0`; on the initial piece this reads `f(0+) >= 0`.
    pub fn ratio_violation(&self) -> Option<Piece> {
        self.pieces().find(|p| {
            if p.x0.is_zero() {
                p.y0.is_negative()
            } else {
                p.slope() * &p.x0 > p.y0
            }
        })
    }

    /// True when the function is nondecreasing and `f(a)/a` is nonincreasing.
    pub fn is_capacity_profile(&self) -> bool {
        self.ratio_violation().is_none()
    }

    fn merged_grid(&self, other: &Self) -> Vec<Rat> {
        let mut xs: Vec<Rat> = self.breakpoints().chain(other.breakpoints()).cloned().collect();
        xs.sort();
        xs.dedup();
        xs
    }

    /// Exact pointwise comparison.
    ///
    /// The difference `f - g` is linear between consecutive points of the merged
    /// breakpoint set, so its sign pattern is decided by the values there and at `0+`.
    pub fn compare(&self, other: &Self) -> PlComparison {
        let grid = self.merged_grid(other);
        let mut prev = (Rat::zero(), &self.at_zero - &other.at_zero);
        let mut above_at = None;
        let mut below_at = None;
        for x in grid {
            let d = self.eval_rat(&x).unwrap() - other.eval_rat(&x).unwrap();
            let witness = |sign: Ordering| -> Rat {
                if d.cmp(&Rat::zero()) == sign {
                    return x.clone();
                }
                // Only the open end at 0 has this sign on the piece; step inside it.
                let (x0, d0) = &prev;
                let root = x0 + (&x - x0) * d0 / (d0 - &d);
                (x0 + root) / Rat::from_integer(2.into())
            };
            for (sign, slot) in [(Ordering::Greater, &mut above_at), (Ordering::Less, &mut below_at)] {
                if slot.is_none() && (d.cmp(&Rat::zero()) == sign || (prev.0.is_zero() && prev.1.cmp(&Rat::zero()) == sign)) {
                    *slot = Some(witness(sign));
                }
            }
            prev = (x, d);
        }
        match (above_at, below_at) {
            (None, None) => PlComparison::Equal,
            (None, Some(_)) => PlComparison::Below,
            (Some(_), None) => PlComparison::Above,
            (Some(above_at), Some(below_at)) => PlComparison::Incomparable { above_at, below_at },
        }
    }

    fn combine(&self, other: &Self, pick_max: bool) -> Self {
        let pick = |a: Rat, b: Rat| if (a > b) == pick_max { a } else { b };
        let mut xs = Vec::new();
        let mut prev = (Rat::zero(), &self.at_zero - &other.at_zero);
        for x in self.merged_grid(other) {
            let d = self.eval_rat(&x).unwrap() - other.eval_rat(&x).unwrap();
            if prev.1.signum() * d.signum() == -Rat::one() {
                let (x0, d0) = &prev;
                xs.push(x0 + (&x - x0) * d0 / (d0 - &d));
            }
            xs.push(x.clone());
            prev = (x, d);
        }
        let knots = xs
            .into_iter()
            .map(|x| {
                let v = pick(self.eval_rat(&x).unwrap(), other.eval_rat(&x).unwrap());
                (x, v)
            })
            .collect();
        let at_zero = pick(self.at_zero.clone(), other.at_zero.clone());
        PiecewiseLinearFn::new(at_zero, knots).expect("min/max of valid functions is valid")
    }
}

fn fold(fs: &[PiecewiseLinearFn], pick_max: bool) -> Result<PiecewiseLinearFn> {
    let (first, rest) = fs.split_first().ok_or_else(|| Error::InvalidExpr("empty list".into()))?;
    Ok(rest.iter().fold(first.clone(), |acc, f| acc.combine(f, pick_max)))
}

/// Pointwise minimum; crossing points are solved exactly.
pub fn pl_min(fs: &[PiecewiseLinearFn]) -> Result<PiecewiseLinearFn> {
    fold(fs, false)
}

/// Pointwise maximum; crossing points are solved exactly.
pub fn pl_max(fs: &[PiecewiseLinearFn]) -> Result<PiecewiseLinearFn> {
    fold(fs, true)
}
