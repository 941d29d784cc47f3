//! Capacities as expressions.
//!
//! Homogeneous monotone functions of capacities are again capacities, so an
//! expression tree over a few base capacities and the usual means is a capacity
//! whenever its leaves are. The module also hosts the bounds that turn capacity
//! values into embedding obstructions.

use std::fmt;
use std::str::FromStr;

use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::classic::{gromov_radius, lagrangian_capacity, volume_capacity};
use crate::error::{Error, Result};
use crate::exact::{AlgValue, ExtRat, Rat};
use crate::region::{Ellipsoid, Region};
use crate::report::VerificationReport;
use crate::spectrum::{eh_capacity, limit_capacity, normalized_eh};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BaseCapacity {
    GromovRadius,
    EkelandHofer(usize),
    NormalizedEkelandHofer(usize),
    Volume,
    LimitCInfinity,
    /// Lagrangian capacity; its ellipsoid values are conjectural.
    LagrangianConjectural,
}

impl BaseCapacity {
    /// Every base capacity with EH indices up to `kmax`.
    pub fn all(kmax: usize) -> Vec<BaseCapacity> {
        let mut out = vec![BaseCapacity::GromovRadius, BaseCapacity::Volume, BaseCapacity::LimitCInfinity];
        for k in 1..=kmax {
            out.push(BaseCapacity::EkelandHofer(k));
            out.push(BaseCapacity::NormalizedEkelandHofer(k));
        }
        out.push(BaseCapacity::LagrangianConjectural);
        out
    }

    fn eval(&self, region: &Region) -> Result<Evaluated> {
        let certain = |value: AlgValue| Evaluated { value, conjectural: false };
        let rational = |v: ExtRat| certain(AlgValue::rational(v));
        Ok(match self {
            BaseCapacity::GromovRadius => rational(gromov_radius(region)?),
            BaseCapacity::EkelandHofer(k) => rational(eh_capacity(region, *k)?),
            BaseCapacity::NormalizedEkelandHofer(k) => rational(normalized_eh(region, *k)?),
            BaseCapacity::Volume => certain(volume_capacity(region)),
            BaseCapacity::LimitCInfinity => rational(limit_capacity(region)?),
            BaseCapacity::LagrangianConjectural => {
                let f = lagrangian_capacity(region)?;
                Evaluated { value: AlgValue::rational(f.value), conjectural: f.conjectural }
            }
        })
    }
}

impl fmt::Display for BaseCapacity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaseCapacity::GromovRadius => f.write_str("gromov"),
            BaseCapacity::EkelandHofer(k) => write!(f, "eh:{k}"),
            BaseCapacity::NormalizedEkelandHofer(k) => write!(f, "neh:{k}"),
            BaseCapacity::Volume => f.write_str("vol"),
            BaseCapacity::LimitCInfinity => f.write_str("cinf"),
            BaseCapacity::LagrangianConjectural => f.write_str("lag"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mean {
    Arithmetic,
    Geometric,
    Harmonic,
}

/// Expression tree. Build composite nodes through the checked constructors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CapacityExpr {
    Base(BaseCapacity),
    Min(Vec<CapacityExpr>),
    Max(Vec<CapacityExpr>),
    /// Weights are nonnegative rationals summing to 1.
    WeightedMean(Mean, Vec<(Rat, CapacityExpr)>),
    /// Positive constant multiple.
    Scale(Rat, Box<CapacityExpr>),
}

impl From<BaseCapacity> for CapacityExpr {
    fn from(b: BaseCapacity) -> Self {
        CapacityExpr::Base(b)
    }
}

fn nonempty(children: &[CapacityExpr]) -> Result<()> {
    if children.is_empty() {
        return Err(Error::InvalidExpr("combinator needs at least one argument".into()));
    }
    Ok(())
}

impl CapacityExpr {
    pub fn min(children: Vec<CapacityExpr>) -> Result<Self> {
        nonempty(&children)?;
        Ok(CapacityExpr::Min(children))
    }

    pub fn max(children: Vec<CapacityExpr>) -> Result<Self> {
        nonempty(&children)?;
        Ok(CapacityExpr::Max(children))
    }

    /// Rejects negative weights and weights not summing to exactly 1.
    pub fn mean(kind: Mean, weighted: Vec<(Rat, CapacityExpr)>) -> Result<Self> {
        if weighted.is_empty() {
            return Err(Error::InvalidExpr("a mean needs at least one argument".into()));
        }
        if weighted.iter().any(|(w, _)| w.is_negative()) {
            return Err(Error::InvalidExpr("mean weights must be nonnegative".into()));
        }
        let total: Rat = weighted.iter().map(|(w, _)| w.clone()).sum();
        if total != Rat::from_integer(1.into()) {
            return Err(Error::InvalidExpr(format!("mean weights sum to {total}, not 1")));
        }
        if kind == Mean::Geometric
            && weighted.iter().any(|(w, _)| w.numer().to_u32().is_none() || w.denom().to_u32().is_none())
        {
            return Err(Error::InvalidExpr("geometric mean weights need 32-bit numerators and denominators".into()));
        }
        Ok(CapacityExpr::WeightedMean(kind, weighted))
    }

    pub fn scale(alpha: Rat, inner: CapacityExpr) -> Result<Self> {
        if !alpha.is_positive() {
            return Err(Error::InvalidExpr("scale factor must be positive".into()));
        }
        Ok(CapacityExpr::Scale(alpha, Box::new(inner)))
    }

    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        1 + match self {
            CapacityExpr::Base(_) => 0,
            CapacityExpr::Min(cs) | CapacityExpr::Max(cs) => cs.iter().map(Self::size).sum(),
            CapacityExpr::WeightedMean(_, ws) => ws.iter().map(|(_, c)| c.size()).sum(),
            CapacityExpr::Scale(_, c) => c.size(),
        }
    }
}

impl fmt::Display for CapacityExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn list<T>(f: &mut fmt::Formatter<'_>, name: &str, items: &[T], each: impl Fn(&mut fmt::Formatter<'_>, &T) -> fmt::Result) -> fmt::Result {
            write!(f, "{name}(")?;
            for (i, it) in items.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                each(f, it)?;
            }
            f.write_str(")")
        }
        match self {
            CapacityExpr::Base(b) => write!(f, "{b}"),
            CapacityExpr::Min(cs) => list(f, "min", cs, |f, c| write!(f, "{c}")),
            CapacityExpr::Max(cs) => list(f, "max", cs, |f, c| write!(f, "{c}")),
            CapacityExpr::WeightedMean(kind, ws) => {
                let name = match kind {
                    Mean::Arithmetic => "amean",
                    Mean::Geometric => "gmean",
                    Mean::Harmonic => "hmean",
                };
                list(f, name, ws, |f, (w, c)| write!(f, "{w}*{c}"))
            }
            CapacityExpr::Scale(a, c) => write!(f, "{a}*{c}"),
        }
    }
}

/// Parses the notation produced by `Display`.
///
/// ```text
/// expr := [q '*'] atom
/// atom := base | ('min' | 'max') '(' expr (',' expr)* ')'
///       | ('amean' | 'gmean' | 'hmean') '(' q '*' expr (',' q '*' expr)* ')'
/// base := 'gromov' | 'vol' | 'cinf' | 'lag' | 'eh:' k | 'neh:' k
///       | 'hz' | 'displacement' | 'cz' | 'eh1'
/// ```
///
/// The aliases `hz`, `displacement`, `cz` and `eh1` agree with the Gromov radius on
/// ellipsoids and polydiscs and parse to it.
impl FromStr for CapacityExpr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut p = ExprParser { s: s.as_bytes(), pos: 0 };
        let e = p.expr()?;
        p.skip_ws();
        if p.pos != p.s.len() {
            return Err(p.err("trailing input"));
        }
        Ok(e)
    }
}

struct ExprParser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl ExprParser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse(format!("{msg} at offset {} in capacity spec", self.pos))
    }

    fn skip_ws(&mut self) {
        while self.s.get(self.pos).is_some_and(u8::is_ascii_whitespace) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        self.skip_ws();
        if self.s.get(self.pos) == Some(&c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn span(&mut self, ok: impl Fn(u8) -> bool) -> &str {
        self.skip_ws();
        let start = self.pos;
        while self.s.get(self.pos).is_some_and(|&c| ok(c)) {
            self.pos += 1;
        }
        std::str::from_utf8(&self.s[start..self.pos]).expect("ascii")
    }

    fn rational(&mut self) -> Option<Rat> {
        let save = self.pos;
        let text = self.span(|c| c.is_ascii_digit() || c == b'/');
        match text.parse::<Rat>() {
            Ok(q) if !text.is_empty() => Some(q),
            _ => {
                self.pos = save;
                None
            }
        }
    }

    fn weight(&mut self) -> Result<Rat> {
        let w = self.rational().ok_or_else(|| self.err("expected a weight"))?;
        if !self.eat(b'*') {
            return Err(self.err("expected `*` after the weight"));
        }
        Ok(w)
    }

    fn expr(&mut self) -> Result<CapacityExpr> {
        let save = self.pos;
        if let Some(alpha) = self.rational() {
            if self.eat(b'*') {
                return CapacityExpr::scale(alpha, self.expr()?);
            }
            self.pos = save;
        }
        self.atom()
    }

    fn index(&mut self) -> Result<usize> {
        if !self.eat(b':') {
            return Err(self.err("expected `:` and an index"));
        }
        let k: usize = self.span(|c| c.is_ascii_digit()).parse().map_err(|_| self.err("expected an index"))?;
        if k == 0 {
            return Err(self.err("capacity indices start at 1"));
        }
        Ok(k)
    }

    fn args<T>(&mut self, mut one: impl FnMut(&mut Self) -> Result<T>) -> Result<Vec<T>> {
        if !self.eat(b'(') {
            return Err(self.err("expected `(`"));
        }
        let mut out = vec![one(self)?];
        while self.eat(b',') {
            out.push(one(self)?);
        }
        if !self.eat(b')') {
            return Err(self.err("expected `)`"));
        }
        Ok(out)
    }

    fn atom(&mut self) -> Result<CapacityExpr> {
        let name = self.span(|c| c.is_ascii_alphanumeric()).to_owned();
        let base = |b: BaseCapacity| Ok(CapacityExpr::Base(b));
        match name.as_str() {
            "gromov" | "hz" | "displacement" | "cz" | "eh1" => base(BaseCapacity::GromovRadius),
            "vol" => base(BaseCapacity::Volume),
            "cinf" => base(BaseCapacity::LimitCInfinity),
            "lag" => base(BaseCapacity::LagrangianConjectural),
            "eh" => base(BaseCapacity::EkelandHofer(self.index()?)),
            "neh" => base(BaseCapacity::NormalizedEkelandHofer(self.index()?)),
            "min" => CapacityExpr::min(self.args(Self::expr)?),
            "max" => CapacityExpr::max(self.args(Self::expr)?),
            "amean" | "gmean" | "hmean" => {
                let kind = match name.as_str() {
                    "amean" => Mean::Arithmetic,
                    "gmean" => Mean::Geometric,
                    _ => Mean::Harmonic,
                };
                let ws = self.args(|p| Ok((p.weight()?, p.expr()?)))?;
                CapacityExpr::mean(kind, ws)
            }
            "" => Err(self.err("expected a capacity")),
            other => Err(Error::Parse(format!("unknown capacity `{other}`"))),
        }
    }
}

/// Value of an expression and whether any conjectural leaf contributed to it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Evaluated {
    pub value: AlgValue,
    pub conjectural: bool,
}

fn to_ext(r: &Rat) -> ExtRat {
    ExtRat::from_rat(r.clone()).expect("nonnegative")
}

fn add(a: &AlgValue, b: &AlgValue) -> Result<AlgValue> {
    a.checked_add(b)
        .ok_or_else(|| Error::NotExact(format!("{a} + {b} is not a single radical")))
}

/// Exact value of `expr` on `region`, in units of pi.
///
/// Arithmetic and harmonic means are exact only when their arguments are rational
/// multiples of one another; otherwise the result is [`Error::NotExact`].
pub fn eval_expr(expr: &CapacityExpr, region: &Region) -> Result<Evaluated> {
    match expr {
        CapacityExpr::Base(b) => b.eval(region),
        CapacityExpr::Min(cs) | CapacityExpr::Max(cs) => {
            let vals = cs.iter().map(|c| eval_expr(c, region)).collect::<Result<Vec<_>>>()?;
            let conjectural = vals.iter().any(|v| v.conjectural);
            let it = vals.into_iter().map(|v| v.value);
            let value = if matches!(expr, CapacityExpr::Min(_)) { it.min() } else { it.max() };
            Ok(Evaluated { value: value.expect("nonempty"), conjectural })
        }
        CapacityExpr::WeightedMean(kind, ws) => {
            let mut conjectural = false;
            let mut acc = match kind {
                Mean::Geometric => AlgValue::one(),
                _ => AlgValue::zero(),
            };
            for (w, c) in ws.iter().filter(|(w, _)| !w.is_zero()) {
                let v = eval_expr(c, region)?;
                conjectural |= v.conjectural;
                acc = match kind {
                    Mean::Arithmetic => add(&acc, &v.value.scale(&to_ext(w)))?,
                    Mean::Geometric => {
                        let (p, q) = (w.numer().to_u32().expect("checked"), w.denom().to_u32().expect("checked"));
                        acc.mul(&v.value.pow_ratio(p, q))
                    }
                    Mean::Harmonic => add(&acc, &v.value.recip().scale(&to_ext(w)))?,
                };
            }
            let value = if *kind == Mean::Harmonic { acc.recip() } else { acc };
            Ok(Evaluated { value, conjectural })
        }
        CapacityExpr::Scale(alpha, c) => {
            let v = eval_expr(c, region)?;
            Ok(Evaluated { value: v.value.scale(&to_ext(alpha)), ..v })
        }
    }
}

fn certified(expr: &CapacityExpr, region: &Region) -> Result<AlgValue> {
    let v = eval_expr(expr, region)?;
    if v.conjectural {
        return Err(Error::Conjectural(format!("{expr} on {region}")));
    }
    Ok(v.value)
}

/// Checks monotonicity on ordered pairs and conformality under the given scalars.
///
/// Each pair `(A, B)` must satisfy `a_i <= b_i` componentwise, so `A` sits inside `B`.
/// Conformality is checked as `c(alpha A) = alpha c(A)` on the first member of every pair.
pub fn check_axioms(expr: &CapacityExpr, samples: &[(Ellipsoid, Ellipsoid)], scalars: &[ExtRat]) -> VerificationReport {
    let parts: Vec<VerificationReport> = samples
        .par_iter()
        .enumerate()
        .map(|(i, (a, b))| {
            let mut rep = VerificationReport::new("axioms");
            let (ra, rb) = (Region::Ellipsoid(a.clone()), Region::Ellipsoid(b.clone()));
            let ordered = a.half_dim() == b.half_dim() && a.axes().iter().zip(b.axes()).all(|(x, y)| x <= y);
            rep.check(format!("pair {i}: ordered input"), ordered, || vec![("small", a.to_string()), ("large", b.to_string())]);
            match (eval_expr(expr, &ra), eval_expr(expr, &rb)) {
                (Ok(va), Ok(vb)) => rep.check(format!("pair {i}: monotonicity"), va.value <= vb.value, || {
                    vec![("small", a.to_string()), ("large", b.to_string()), ("c(small)", va.value.to_string()), ("c(large)", vb.value.to_string())]
                }),
                (Err(e), _) | (_, Err(e)) => rep.check(format!("pair {i}: evaluation"), false, || vec![("error", e.to_string())]),
            }
            for alpha in scalars {
                let scaled = ra.scaled(alpha);
                let res = scaled.and_then(|s| Ok((eval_expr(expr, &s)?, eval_expr(expr, &ra)?)));
                match res {
                    Ok((vs, v)) => {
                        let expected = v.value.scale(alpha);
                        rep.check(format!("pair {i}: conformality at {alpha}"), vs.value == expected, || {
                            vec![("region", a.to_string()), ("alpha", alpha.to_string()), ("c(alpha E)", vs.value.to_string()), ("alpha c(E)", expected.to_string())]
                        })
                    }
                    Err(e) => rep.check(format!("pair {i}: conformality at {alpha}"), false, || vec![("error", e.to_string())]),
                }
            }
            rep
        })
        .collect();
    let mut report = VerificationReport::new("axioms")
        .with_param("expr", expr)
        .with_param("pairs", samples.len())
        .with_param("scalars", scalars.len());
    for p in parts {
        report.absorb(p);
    }
    report
}

/// Certified lower bound for the embedding capacity `c^{target}(source)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LowerBound {
    pub value: AlgValue,
    /// Index into the basis of the capacity attaining the bound (first on ties).
    pub argmax: usize,
}

/// `max_c c(source)/c(target)` over the basis.
///
/// Basis elements with zero or infinite value on the target are skipped; a
/// conjectural value anywhere is an error.
pub fn embedding_lower_bound(target: &Region, source: &Region, basis: &[CapacityExpr]) -> Result<LowerBound> {
    let mut best: Option<LowerBound> = None;
    for (i, c) in basis.iter().enumerate() {
        let t = certified(c, target)?;
        let s = certified(c, source)?;
        if t.is_zero() || t.is_infinite() {
            continue;
        }
        let ratio = s.checked_div(&t).expect("finite nonzero denominator");
        if best.as_ref().is_none_or(|b| ratio > b.value) {
            best = Some(LowerBound { value: ratio, argmax: i });
        }
    }
    best.ok_or_else(|| Error::NotApplicable("no basis capacity is finite and nonzero on the target".into()))
}

fn finite_volume(x: &Region) -> Result<ExtRat> {
    let v = x.volume_ratio();
    if v.is_infinite() {
        return Err(Error::Unsupported { what: "volume bound", region: x.to_string() });
    }
    Ok(v)
}

/// Upper bound `c_vol(M) / c_vol(k copies of X)` for the largest scaling of `X` whose
/// `k` disjoint copies embed into `M`.
pub fn packing_volume_bound(x: &Region, k: usize, m: &Region) -> Result<AlgValue> {
    if k == 0 {
        return Err(Error::IndexRange("a packing needs at least one copy".into()));
    }
    if x.half_dim() != m.half_dim() {
        return Err(Error::InvalidRegion("packing pieces and target differ in dimension".into()));
    }
    let vx = &finite_volume(x)? * &ExtRat::integer(k as u64);
    let ratio = m.volume_ratio().checked_div(&vx).expect("positive volume");
    Ok(AlgValue::root(ratio, m.half_dim() as u32))
}

/// Lower bound `(a^(n-1) vol(B)/vol(X))^(1/n)` for the scaling of `X` that receives
/// the skinny ellipsoid `E(a, 1, ..., 1)`.
pub fn skinny_volume_bound(x: &Region, a: &ExtRat) -> Result<AlgValue> {
    if a.is_zero() || *a > ExtRat::one() {
        return Err(Error::Domain { value: a.to_string(), domain: "(0, 1]" });
    }
    let n = x.half_dim();
    let ratio = a.pow(n as u32 - 1).checked_div(&finite_volume(x)?).expect("positive volume");
    Ok(AlgValue::root(ratio, n as u32))
}
