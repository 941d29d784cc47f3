//! Recovering a bounded ellipsoid from its Ekeland-Hofer capacities.
//!
//! The input is a nondecreasing run `d_1 <= d_2 <= ...` taken from the start of the
//! spectrum `{m a_i}` of an ellipsoid `E(a_1, ..., a_n)`, with at most `n0` entries
//! removed. Values may carry a formal unit `u<i>`: `3/2*u1` stands for `3/2 * tau_1`
//! where the `tau_i` are pairwise incommensurable irrationals. Values with different
//! units are never rational multiples of each other, so they land in different
//! commensurability classes and are never compared with each other.
//!
//! Two methods are offered.
//!
//! * [`Method::Blocks`] follows the classical argument: inside each class find
//!   `n0 + 1` blocks of `l` equal values, take the smallest gap to the next value as
//!   the smallest axis, sieve out its multiples and repeat. It needs the prefix to
//!   reach `n0 + 1` common multiples of all axes in a class, which can be very far.
//! * [`Method::Sieve`] searches all axis sets that explain the prefix with at most
//!   `n0` deletions and answers only when exactly one survives. The next axis always
//!   divides the smallest unexplained value `r` as `r/m` with `m <= n0 + 1`, so the
//!   search is finite.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::Rat;

/// A spectrum value `value * tau_unit`; unit 0 is the plain rational unit.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SpectrumValue {
    pub unit: u32,
    pub value: Rat,
}

impl SpectrumValue {
    pub fn plain(value: Rat) -> Self {
        SpectrumValue { unit: 0, value }
    }

    pub fn tagged(value: Rat, unit: u32) -> Self {
        SpectrumValue { unit, value }
    }
}

impl fmt::Display for SpectrumValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.unit == 0 {
            write!(f, "{}", self.value)
        } else {
            write!(f, "{}*u{}", self.value, self.unit)
        }
    }
}

impl FromStr for SpectrumValue {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad spectrum value `{s}`"));
        let (num, unit) = match s.trim().split_once('*') {
            Some((v, u)) => {
                let idx = u.trim().strip_prefix('u').ok_or_else(bad)?;
                let unit: u32 = idx.parse().map_err(|_| bad())?;
                (v.trim(), unit)
            }
            None => (s.trim(), 0),
        };
        let value: Rat = num.parse().map_err(|_| bad())?;
        if !value.is_positive() {
            return Err(Error::MalformedSpectrum(format!("nonpositive value `{s}`")));
        }
        Ok(SpectrumValue { unit, value })
    }
}

/// Parses the spectrum file format: one value per line, `#` starts a comment.
///
/// Values must be nondecreasing within each unit.
pub fn parse_spectrum(text: &str) -> Result<Vec<SpectrumValue>> {
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let body = line.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let v: SpectrumValue = body.parse().map_err(|e| match e {
            Error::Parse(msg) => Error::Parse(format!("line {}: {msg}", lineno + 1)),
            other => other,
        })?;
        out.push(v);
    }
    check_order(&out)?;
    Ok(out)
}

fn check_order(values: &[SpectrumValue]) -> Result<()> {
    let mut last: BTreeMap<u32, &Rat> = BTreeMap::new();
    for (i, v) in values.iter().enumerate() {
        if !v.value.is_positive() {
            return Err(Error::MalformedSpectrum(format!("entry {} is not positive", i + 1)));
        }
        if let Some(prev) = last.insert(v.unit, &v.value) {
            if *prev > v.value {
                return Err(Error::MalformedSpectrum(format!("entry {} ({v}) decreases", i + 1)));
            }
        }
    }
    Ok(())
}

/// A damaged spectrum prefix together with the dimension and the deletion bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectrumInput {
    values: Vec<SpectrumValue>,
    n: usize,
    n0: usize,
}

impl SpectrumInput {
    pub fn new(values: Vec<SpectrumValue>, n: usize, n0: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidRegion("the half-dimension must be positive".into()));
        }
        check_order(&values)?;
        Ok(SpectrumInput { values, n, n0 })
    }

    pub fn values(&self) -> &[SpectrumValue] {
        &self.values
    }

    /// Values split by unit, each list nondecreasing.
    fn classes(&self) -> Vec<(u32, Vec<Rat>)> {
        let mut by_unit: BTreeMap<u32, Vec<Rat>> = BTreeMap::new();
        for v in &self.values {
            by_unit.entry(v.unit).or_default().push(v.value.clone());
        }
        by_unit.into_iter().collect()
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Method {
    Blocks,
    #[default]
    Sieve,
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "blocks" => Ok(Method::Blocks),
            "sieve" => Ok(Method::Sieve),
            _ => Err(Error::Parse(format!("unknown reconstruction method `{s}`"))),
        }
    }
}

/// Recovers the axes, sorted by unit and then by value.
///
/// Fails with [`Error::NeedsMoreData`] when the prefix does not yet single out one
/// ellipsoid and with [`Error::MalformedSpectrum`] when no ellipsoid fits.
pub fn reconstruct(input: &SpectrumInput, method: Method) -> Result<Vec<SpectrumValue>> {
    if input.values.is_empty() {
        return Err(Error::NeedsMoreData);
    }
    match method {
        Method::Blocks => blocks(input),
        Method::Sieve => sieve(input),
    }
}

/// Feeds ever longer prefixes from `next` into [`reconstruct`] until it succeeds.
///
/// The prefix length doubles from `8n` up to `cap`. Running out of input before an
/// answer gives [`Error::NeedsMoreData`]; reaching `cap` gives [`Error::CapExceeded`].
pub fn reconstruct_adaptive<F>(mut next: F, n: usize, n0: usize, cap: usize, method: Method) -> Result<Vec<SpectrumValue>>
where
    F: FnMut() -> Option<SpectrumValue>,
{
    if cap == 0 {
        return Err(Error::CapExceeded(0));
    }
    let mut values = Vec::new();
    let mut target = (8 * n).clamp(1, cap);
    loop {
        let mut exhausted = false;
        while values.len() < target {
            match next() {
                Some(v) => values.push(v),
                None => {
                    exhausted = true;
                    break;
                }
            }
        }
        match reconstruct(&SpectrumInput::new(values.clone(), n, n0)?, method) {
            Err(Error::NeedsMoreData) if exhausted => return Err(Error::NeedsMoreData),
            Err(Error::NeedsMoreData) if target >= cap => return Err(Error::CapExceeded(cap)),
            Err(Error::NeedsMoreData) => target = (target * 2).min(cap),
            other => return other,
        }
    }
}

type Multiset = BTreeMap<Rat, usize>;

fn take(ms: &mut Multiset, v: &Rat) -> bool {
    match ms.get_mut(v) {
        Some(c) if *c > 1 => {
            *c -= 1;
            true
        }
        Some(_) => {
            ms.remove(v);
            true
        }
        None => false,
    }
}

/// Removes one copy of every multiple `j a` with `j >= first` up to `top`.
///
/// Missing multiples strictly below `top` are deletions; a missing `top` may simply lie
/// beyond the end of the prefix. Returns the number of deletions, or `None` once it
/// exceeds `budget`.
fn sieve_out(ms: &mut Multiset, a: &Rat, first: usize, top: &Rat, budget: usize) -> Option<usize> {
    let mut used = 0;
    let mut j = first;
    loop {
        let v = a * Rat::from_integer(BigInt::from(j));
        if v > *top {
            return Some(used);
        }
        if !take(ms, &v) && v < *top {
            used += 1;
            if used > budget {
                return None;
            }
        }
        j += 1;
    }
}

struct Search<'a> {
    classes: &'a [(u32, Vec<Rat>)],
    n: usize,
    complete: BTreeSet<Vec<SpectrumValue>>,
    partial: bool,
}

impl Search<'_> {
    fn settled(&self) -> bool {
        self.complete.len() + usize::from(self.partial) > 1
    }

    fn run(&mut self, ci: usize, rest: Multiset, axes: &mut Vec<SpectrumValue>, budget: usize) {
        if self.settled() {
            return;
        }
        let Some((unit, values)) = self.classes.get(ci) else {
            if axes.len() == self.n {
                let mut found = axes.clone();
                found.sort();
                self.complete.insert(found);
            } else {
                // Further axes may lie beyond every value seen so far.
                self.partial = true;
            }
            return;
        };
        let Some((r0, _)) = rest.first_key_value() else {
            let next = self.classes.get(ci + 1).map(|(_, v)| multiset(v)).unwrap_or_default();
            return self.run(ci + 1, next, axes, budget);
        };
        if axes.len() == self.n {
            return;
        }
        let top = values.last().expect("classes are nonempty");
        for m in 1..=budget + 1 {
            let a = r0 / Rat::from_integer(BigInt::from(m));
            let mut left = rest.clone();
            // The multiples below r0 are missing from the input, so all were deleted.
            let Some(used) = sieve_out(&mut left, &a, m, top, budget - (m - 1)) else { continue };
            axes.push(SpectrumValue::tagged(a, *unit));
            self.run(ci, left, axes, budget - (m - 1) - used);
            axes.pop();
        }
    }
}

fn multiset(values: &[Rat]) -> Multiset {
    let mut ms = Multiset::new();
    for v in values {
        *ms.entry(v.clone()).or_default() += 1;
    }
    ms
}

fn sieve(input: &SpectrumInput) -> Result<Vec<SpectrumValue>> {
    let classes = input.classes();
    if classes.len() > input.n {
        return Err(Error::MalformedSpectrum(format!("{} incommensurable classes for n = {}", classes.len(), input.n)));
    }
    let mut search = Search { classes: &classes, n: input.n, complete: BTreeSet::new(), partial: false };
    search.run(0, multiset(&classes[0].1), &mut Vec::new(), input.n0);
    match (search.complete.len(), search.partial) {
        (1, false) => Ok(search.complete.pop_first().expect("one solution")),
        (0, false) => Err(Error::MalformedSpectrum(format!("no ellipsoid in dimension {} explains the values with at most {} deletions", 2 * input.n, input.n0))),
        _ => Err(Error::NeedsMoreData),
    }
}

/// Maximal runs of equal values: `(start, length)`.
fn runs(values: &[Rat]) -> Vec<(usize, usize)> {
    let mut out: Vec<(usize, usize)> = Vec::new();
    for (i, v) in values.iter().enumerate() {
        match out.last_mut() {
            Some((s, len)) if values[*s] == *v => *len += 1,
            _ => out.push((i, 1)),
        }
    }
    out
}

fn blocks(input: &SpectrumInput) -> Result<Vec<SpectrumValue>> {
    let classes = input.classes();
    let widths: Vec<usize> = classes.iter().map(|(_, v)| runs(v).iter().map(|r| r.1).max().unwrap_or(0)).collect();
    // Stop rule (i): the block widths account for every axis.
    let total: usize = widths.iter().sum();
    if total > input.n {
        return Err(Error::MalformedSpectrum(format!("{total} equal values exceed n = {}", input.n)));
    }
    if total < input.n {
        return Err(Error::NeedsMoreData);
    }
    let mut axes = Vec::new();
    for ((unit, values), width) in classes.into_iter().zip(widths) {
        let mut values = values;
        for l in (1..=width).rev() {
            let a = smallest_axis(&values, l, input.n0)?;
            let mut ms = multiset(&values);
            let top = values.last().expect("nonempty").clone();
            sieve_out(&mut ms, &a, 1, &top, usize::MAX);
            values = ms.into_iter().flat_map(|(v, c)| std::iter::repeat_n(v, c)).collect();
            axes.push(SpectrumValue::tagged(a, unit));
            if values.is_empty() && l > 1 {
                return Err(Error::NeedsMoreData);
            }
        }
    }
    axes.sort();
    Ok(axes)
}

/// Minimum gap after the first `n0 + 1` blocks of `l` equal values that are followed
/// by a larger value. Stop rule (ii) asks for that many blocks.
fn smallest_axis(values: &[Rat], l: usize, n0: usize) -> Result<Rat> {
    let gaps: Vec<Rat> = runs(values)
        .into_iter()
        .filter(|&(s, len)| len == l && s + len < values.len())
        .take(n0 + 1)
        .map(|(s, len)| &values[s + len] - &values[s])
        .collect();
    if gaps.len() < n0 + 1 {
        return Err(Error::NeedsMoreData);
    }
    let a = gaps.into_iter().min().expect("nonempty");
    if a.is_zero() || a.is_negative() {
        return Err(Error::MalformedSpectrum("gap pattern is inconsistent".into()));
    }
    Ok(a)
}

/// The plain-unit axes as rationals, if every axis has unit 0.
pub fn plain_axes(axes: &[SpectrumValue]) -> Option<Vec<Rat>> {
    axes.iter().map(|a| (a.unit == 0).then(|| a.value.clone())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, ExtRat};
    use crate::region::Ellipsoid;
    use crate::spectrum::SpectrumStream;

    fn vals(xs: &[(i64, i64)]) -> Vec<SpectrumValue> {
        xs.iter().map(|&(p, q)| SpectrumValue::plain(rat(p, q))).collect()
    }

    fn ints(xs: &[i64]) -> Vec<SpectrumValue> {
        xs.iter().map(|&p| SpectrumValue::plain(rat(p, 1))).collect()
    }

    fn run(values: Vec<SpectrumValue>, n: usize, n0: usize, m: Method) -> Result<Vec<SpectrumValue>> {
        reconstruct(&SpectrumInput::new(values, n, n0).unwrap(), m)
    }

    #[test]
    fn small_examples() {
        let e12 = ints(&[1, 2, 2, 3, 4, 4, 5, 6, 6, 7, 8, 8]);
        for m in [Method::Blocks, Method::Sieve] {
            assert_eq!(run(e12.clone(), 2, 0, m).unwrap(), ints(&[1, 2]));
            assert_eq!(run(ints(&[1, 1, 2, 2, 3, 3]), 2, 0, m).unwrap(), ints(&[1, 1]));
        }
        let damaged: Vec<SpectrumValue> = e12[1..].to_vec();
        assert_eq!(run(damaged.clone(), 2, 1, Method::Sieve).unwrap(), ints(&[1, 2]));
        assert_eq!(run(damaged, 2, 1, Method::Blocks).unwrap(), ints(&[1, 2]));
    }

    #[test]
    fn ambiguous_and_malformed() {
        // [1, 2] alone is E(1, 2) or E(1, b) with b beyond the prefix.
        assert_eq!(run(ints(&[1, 2]), 2, 0, Method::Sieve), Err(Error::NeedsMoreData));
        assert_eq!(run(ints(&[1, 2, 2]), 2, 0, Method::Blocks), Err(Error::NeedsMoreData));
        // Three equal values cannot come from two axes.
        assert!(matches!(run(ints(&[1, 1, 1, 2]), 2, 0, Method::Sieve), Err(Error::MalformedSpectrum(_))));
        assert!(matches!(run(ints(&[1, 1, 1, 2]), 2, 0, Method::Blocks), Err(Error::MalformedSpectrum(_))));
        // 1, 3/2, 7/4 needs three axes.
        assert!(matches!(run(vals(&[(1, 1), (3, 2), (7, 4), (2, 1)]), 1, 0, Method::Sieve), Err(Error::MalformedSpectrum(_))));
        assert!(SpectrumInput::new(ints(&[2, 1]), 2, 0).is_err());
        assert!(SpectrumInput::new(ints(&[1]), 0, 0).is_err());
    }

    #[test]
    fn file_format() {
        let text = "# E(1,2)\n1\n2\n2 # a block\n\n3\n7/2*u1\n4\n4*u1\n";
        let v = parse_spectrum(text).unwrap();
        assert_eq!(v.len(), 7);
        assert_eq!(v[4], SpectrumValue::tagged(rat(7, 2), 1));
        assert_eq!(v[4].to_string(), "7/2*u1");
        assert!(matches!(parse_spectrum("2\n1\n"), Err(Error::MalformedSpectrum(_))));
        assert!(matches!(parse_spectrum("x\n"), Err(Error::Parse(_))));
        assert!(matches!(parse_spectrum("0\n"), Err(Error::MalformedSpectrum(_))));
        assert!(matches!(parse_spectrum("1*v2\n"), Err(Error::Parse(_))));
    }

    fn stream(axes: &[Rat]) -> impl Iterator<Item = SpectrumValue> {
        let e = Ellipsoid::new(axes.iter().map(|a| ExtRat::from_rat(a.clone()).unwrap()).collect()).unwrap();
        SpectrumStream::new(&e).map(|v| SpectrumValue::plain(v.as_rat().unwrap().clone()))
    }

    #[test]
    fn adaptive_examples() {
        let axes = [rat(2, 3), rat(5, 7)];
        let mut s = stream(&axes).enumerate().filter(|(i, _)| ![0, 5].contains(i)).map(|x| x.1);
        let got = reconstruct_adaptive(|| s.next(), 2, 2, 10_000, Method::Sieve).unwrap();
        assert_eq!(plain_axes(&got).unwrap(), axes);

        let ball = [rat(1, 1), rat(1, 1), rat(1, 1)];
        let mut s = stream(&ball);
        assert_eq!(plain_axes(&reconstruct_adaptive(|| s.next(), 3, 0, 100, Method::Sieve).unwrap()).unwrap(), ball);

        let axes = [rat(1, 1), rat(3, 2), rat(9, 4)];
        let mut s = stream(&axes).skip(1);
        assert_eq!(plain_axes(&reconstruct_adaptive(|| s.next(), 3, 1, 10_000, Method::Sieve).unwrap()).unwrap(), axes);
        let mut s = stream(&axes).skip(1);
        assert_eq!(plain_axes(&reconstruct_adaptive(|| s.next(), 3, 1, 10_000, Method::Blocks).unwrap()).unwrap(), axes);

        let mut s = stream(&[rat(1, 1), rat(1000, 1)]);
        assert_eq!(reconstruct_adaptive(|| s.next(), 2, 0, 64, Method::Sieve), Err(Error::CapExceeded(64)));
    }

    #[test]
    fn incommensurable_classes() {
        // E(1, 2 tau_1, 3/2): classes {1, 3/2} and {2 tau_1}, interleaved arbitrarily.
        let plain: Vec<SpectrumValue> = stream(&[rat(1, 1), rat(3, 2)]).take(40).collect();
        let tagged: Vec<SpectrumValue> = (1..=15).map(|m| SpectrumValue::tagged(rat(2 * m, 1), 1)).collect();
        let mut mixed = Vec::new();
        for (i, v) in plain.into_iter().enumerate() {
            mixed.push(v);
            if i % 3 == 0 && i / 3 < tagged.len() {
                mixed.push(tagged[i / 3].clone());
            }
        }
        let want = vec![SpectrumValue::plain(rat(1, 1)), SpectrumValue::plain(rat(3, 2)), SpectrumValue::tagged(rat(2, 1), 1)];
        for m in [Method::Sieve, Method::Blocks] {
            assert_eq!(run(mixed.clone(), 3, 0, m).unwrap(), want, "{m:?}");
        }
        // With one deletion in the tagged class.
        let damaged: Vec<SpectrumValue> = mixed.iter().filter(|v| **v != SpectrumValue::tagged(rat(2, 1), 1)).cloned().collect();
        assert_eq!(run(damaged, 3, 1, Method::Sieve).unwrap(), want);
        // Too many classes for n.
        assert!(matches!(run(mixed, 1, 0, Method::Sieve), Err(Error::MalformedSpectrum(_))));
    }

    #[test]
    fn longer_prefixes_keep_the_answer() {
        let axes = [rat(3, 4), rat(5, 6)];
        let full: Vec<SpectrumValue> = stream(&axes).take(300).enumerate().filter(|(i, _)| *i != 2).map(|x| x.1).collect();
        let mut first = None;
        for len in 1..=full.len() {
            match run(full[..len].to_vec(), 2, 1, Method::Sieve) {
                Ok(a) => {
                    first.get_or_insert(len);
                    assert_eq!(plain_axes(&a).unwrap(), axes, "len {len}");
                }
                Err(e) => assert!(first.is_none(), "len {len}: {e}"),
            }
        }
        assert!(first.is_some());
    }
}
