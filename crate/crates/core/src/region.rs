//! Ellipsoids, polydiscs, and their products and disjoint unions.
//!
//! Sizes are areas in units of pi: `E(a1, ..., an)` is `sum |z_i|^2 / a_i < 1`
//! after rescaling by pi, and `P(a1, ..., an)` is the product of discs of area
//! `pi * a_i`. Ball and cylinder are the aliases `E(r, ..., r)` and `E(r, inf, ..., inf)`.

use std::fmt;

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};
use crate::exact::{ExtRat, Rat};

fn check_sizes(kind: &str, mut sizes: Vec<ExtRat>) -> Result<Vec<ExtRat>> {
    if sizes.is_empty() {
        return Err(Error::InvalidRegion(format!("{kind} needs at least one axis")));
    }
    if sizes.iter().any(ExtRat::is_zero) {
        return Err(Error::InvalidRegion(format!("{kind} axes must be positive")));
    }
    if sizes.iter().all(ExtRat::is_infinite) {
        return Err(Error::InvalidRegion(format!("{kind} with all axes infinite is the whole space")));
    }
    sizes.sort();
    Ok(sizes)
}

fn scale_sizes(sizes: &[ExtRat], alpha: &ExtRat) -> Vec<ExtRat> {
    sizes.iter().map(|a| a * alpha).collect()
}

fn check_scale(alpha: &ExtRat) -> Result<()> {
    if alpha.is_zero() || alpha.is_infinite() {
        return Err(Error::Domain { value: alpha.to_string(), domain: "(0, inf)" });
    }
    Ok(())
}

fn product_of(sizes: &[ExtRat]) -> ExtRat {
    sizes.iter().fold(ExtRat::one(), |acc, a| &acc * a)
}

pub(crate) fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * BigUint::from(i))
}

/// `E(a1, ..., an)` with nondecreasing axes.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ellipsoid {
    axes: Vec<ExtRat>,
}

impl Ellipsoid {
    /// Sorts the axes; rejects empty, zero, or all-infinite axis lists.
    pub fn new(axes: Vec<ExtRat>) -> Result<Self> {
        Ok(Ellipsoid { axes: check_sizes("ellipsoid", axes)? })
    }

    /// `B^{2n}(r) = E(r, ..., r)`.
    pub fn ball(n: usize, r: ExtRat) -> Result<Self> {
        Self::new(vec![r; n])
    }

    /// `Z^{2n}(r) = E(r, inf, ..., inf)`.
    pub fn cylinder(n: usize, r: ExtRat) -> Result<Self> {
        if n == 0 {
            return Self::new(Vec::new());
        }
        let mut axes = vec![ExtRat::infinity(); n];
        axes[0] = r;
        Self::new(axes)
    }

    pub fn axes(&self) -> &[ExtRat] {
        &self.axes
    }

    pub fn half_dim(&self) -> usize {
        self.axes.len()
    }

    pub fn smallest(&self) -> &ExtRat {
        &self.axes[0]
    }

    pub fn is_bounded(&self) -> bool {
        self.axes.iter().all(ExtRat::is_finite)
    }

    pub fn scaled(&self, alpha: &ExtRat) -> Result<Self> {
        check_scale(alpha)?;
        Ok(Ellipsoid { axes: scale_sizes(&self.axes, alpha) })
    }

    /// `vol(E) / vol(B^{2n}) = a1 * ... * an`.
    pub fn volume_ratio(&self) -> ExtRat {
        product_of(&self.axes)
    }
}

/// `P(a1, ..., an)` with nondecreasing widths.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polydisc {
    widths: Vec<ExtRat>,
}

impl Polydisc {
    pub fn new(widths: Vec<ExtRat>) -> Result<Self> {
        Ok(Polydisc { widths: check_sizes("polydisc", widths)? })
    }

    pub fn cube(n: usize, r: ExtRat) -> Result<Self> {
        Self::new(vec![r; n])
    }

    pub fn widths(&self) -> &[ExtRat] {
        &self.widths
    }

    pub fn half_dim(&self) -> usize {
        self.widths.len()
    }

    pub fn smallest(&self) -> &ExtRat {
        &self.widths[0]
    }

    pub fn is_bounded(&self) -> bool {
        self.widths.iter().all(ExtRat::is_finite)
    }

    pub fn scaled(&self, alpha: &ExtRat) -> Result<Self> {
        check_scale(alpha)?;
        Ok(Polydisc { widths: scale_sizes(&self.widths, alpha) })
    }

    /// `vol(P) / vol(B^{2n}) = n! * a1 * ... * an`.
    pub fn volume_ratio(&self) -> ExtRat {
        let n = Rat::from_integer(factorial(self.half_dim()).into());
        &product_of(&self.widths) * &ExtRat::from_rat_unchecked(n)
    }
}

/// A region of `R^{2n}`.
///
/// Build composites with [`Region::product`] and [`Region::disjoint_union`],
/// which check the arity and dimension invariants.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Region {
    Ellipsoid(Ellipsoid),
    Polydisc(Polydisc),
    Product(Vec<Region>),
    DisjointUnion(Vec<Region>),
}

impl From<Ellipsoid> for Region {
    fn from(e: Ellipsoid) -> Self {
        Region::Ellipsoid(e)
    }
}

impl From<Polydisc> for Region {
    fn from(p: Polydisc) -> Self {
        Region::Polydisc(p)
    }
}

impl Region {
    pub fn ellipsoid(axes: Vec<ExtRat>) -> Result<Self> {
        Ellipsoid::new(axes).map(Region::Ellipsoid)
    }

    pub fn polydisc(widths: Vec<ExtRat>) -> Result<Self> {
        Polydisc::new(widths).map(Region::Polydisc)
    }

    pub fn product(factors: Vec<Region>) -> Result<Self> {
        if factors.len() < 2 {
            return Err(Error::InvalidRegion("a product needs at least two factors".into()));
        }
        Ok(Region::Product(factors))
    }

    /// Components must share one dimension.
    pub fn disjoint_union(parts: Vec<Region>) -> Result<Self> {
        if parts.len() < 2 {
            return Err(Error::InvalidRegion("a disjoint union needs at least two components".into()));
        }
        let n = parts[0].half_dim();
        if parts.iter().any(|p| p.half_dim() != n) {
            return Err(Error::InvalidRegion("disjoint union components differ in dimension".into()));
        }
        Ok(Region::DisjointUnion(parts))
    }

    /// Half the real dimension.
    pub fn half_dim(&self) -> usize {
        match self {
            Region::Ellipsoid(e) => e.half_dim(),
            Region::Polydisc(p) => p.half_dim(),
            Region::Product(fs) => fs.iter().map(Region::half_dim).sum(),
            Region::DisjointUnion(ps) => ps[0].half_dim(),
        }
    }

    pub fn is_bounded(&self) -> bool {
        match self {
            Region::Ellipsoid(e) => e.is_bounded(),
            Region::Polydisc(p) => p.is_bounded(),
            Region::Product(rs) | Region::DisjointUnion(rs) => rs.iter().all(Region::is_bounded),
        }
    }

    /// The region with its symplectic form multiplied by `alpha` (all areas scaled).
    pub fn scaled(&self, alpha: &ExtRat) -> Result<Self> {
        Ok(match self {
            Region::Ellipsoid(e) => Region::Ellipsoid(e.scaled(alpha)?),
            Region::Polydisc(p) => Region::Polydisc(p.scaled(alpha)?),
            Region::Product(fs) => {
                Region::Product(fs.iter().map(|f| f.scaled(alpha)).collect::<Result<_>>()?)
            }
            Region::DisjointUnion(ps) => {
                Region::DisjointUnion(ps.iter().map(|p| p.scaled(alpha)).collect::<Result<_>>()?)
            }
        })
    }

    /// `vol(R) / vol(B^{2n}(1))`; `inf` for unbounded regions.
    ///
    /// Volumes add over disjoint unions. For a product of factors of half-dimensions
    /// `n_i` the ratio picks up the multinomial `n! / (n_1! ... n_l!)`.
    pub fn volume_ratio(&self) -> ExtRat {
        match self {
            Region::Ellipsoid(e) => e.volume_ratio(),
            Region::Polydisc(p) => p.volume_ratio(),
            Region::DisjointUnion(ps) => {
                ps.iter().fold(ExtRat::zero(), |acc, p| &acc + &p.volume_ratio())
            }
            Region::Product(fs) => {
                let mut denom = BigUint::one();
                let mut acc = ExtRat::one();
                for f in fs {
                    acc = &acc * &f.volume_ratio();
                    denom *= factorial(f.half_dim());
                }
                let multinomial = Rat::new(factorial(self.half_dim()).into(), denom.into());
                &acc * &ExtRat::from_rat_unchecked(multinomial)
            }
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Region::Ellipsoid(_) => "ellipsoid",
            Region::Polydisc(_) => "polydisc",
            Region::Product(_) => "product",
            Region::DisjointUnion(_) => "disjoint union",
        }
    }
}

fn write_sizes(f: &mut fmt::Formatter<'_>, tag: char, sizes: &[ExtRat]) -> fmt::Result {
    write!(f, "{tag}(")?;
    for (i, a) in sizes.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{a}")?;
    }
    f.write_str(")")
}

impl fmt::Display for Ellipsoid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_sizes(f, 'E', &self.axes)
    }
}

impl fmt::Display for Polydisc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_sizes(f, 'P', &self.widths)
    }
}

/// Prints in the grammar accepted by [`crate::grammar::parse_region`]; composites
/// nested inside composites are parenthesized.
impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let nested = |f: &mut fmt::Formatter<'_>, r: &Region| match r {
            Region::Product(_) | Region::DisjointUnion(_) => write!(f, "({r})"),
            _ => write!(f, "{r}"),
        };
        match self {
            Region::Ellipsoid(e) => write!(f, "{e}"),
            Region::Polydisc(p) => write!(f, "{p}"),
            Region::Product(rs) | Region::DisjointUnion(rs) => {
                let sep = if matches!(self, Region::Product(_)) { "x" } else { "+" };
                for (i, r) in rs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(sep)?;
                    }
                    nested(f, r)?;
                }
                Ok(())
            }
        }
    }
}
