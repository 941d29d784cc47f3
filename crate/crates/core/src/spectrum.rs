//! Action spectra and Ekeland-Hofer capacities.
//!
//! On an ellipsoid `E(a_1, ..., a_n)` the k-th Ekeland-Hofer capacity is the k-th
//! smallest element of the multiset `{m a_i : m >= 1}` (in units of pi). Polydiscs
//! give `k min a_i`, and products are handled by the min-plus convolution
//! `c_k(U x V) = min_{i+j=k} c_i(U) + c_j(V)` with `c_0 = 0`.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exact::{ExtRat, Rat};
use crate::classic::volume_capacity;
use crate::region::{Ellipsoid, Region};
use crate::report::VerificationReport;

/// Largest capacity index accepted by the spectrum routines.
pub const MAX_INDEX: usize = 1_000_000;

/// Sorted stream of the multiples `m a_i`, repetitions included.
///
/// Infinite axes contribute nothing. The heap holds one cursor per finite axis.
#[derive(Clone, Debug)]
pub struct SpectrumStream {
    axes: Vec<Rat>,
    heap: BinaryHeap<Reverse<(Rat, usize, u64)>>,
}

impl SpectrumStream {
    pub fn new(e: &Ellipsoid) -> Self {
        let axes: Vec<Rat> = e.axes().iter().filter_map(|a| a.as_rat().cloned()).collect();
        let heap = axes.iter().enumerate().map(|(i, a)| Reverse((a.clone(), i, 1))).collect();
        SpectrumStream { axes, heap }
    }
}

impl Iterator for SpectrumStream {
    type Item = ExtRat;

    fn next(&mut self) -> Option<ExtRat> {
        let Reverse((value, i, m)) = self.heap.pop()?;
        let next = &self.axes[i] * Rat::from_integer(BigInt::from(m + 1));
        self.heap.push(Reverse((next, i, m + 1)));
        Some(ExtRat::from_rat_unchecked(value))
    }
}

fn check_index(k: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::IndexRange("capacity indices start at 1".into()));
    }
    if k > MAX_INDEX {
        return Err(Error::TooLarge(k, MAX_INDEX));
    }
    Ok(())
}

/// The first `count` elements `d_1 <= ... <= d_count` of the action spectrum.
pub fn spectrum_prefix(e: &Ellipsoid, count: usize) -> Result<Vec<ExtRat>> {
    check_index(count)?;
    Ok(SpectrumStream::new(e).take(count).collect())
}

/// `c^EH_1, ..., c^EH_k` of `region`.
pub fn eh_sequence(region: &Region, k: usize) -> Result<Vec<ExtRat>> {
    check_index(k)?;
    match region {
        Region::Ellipsoid(e) => spectrum_prefix(e, k),
        Region::Polydisc(p) => {
            let w = p.smallest();
            Ok((1..=k as u64).map(|m| &ExtRat::integer(m) * w).collect())
        }
        Region::Product(factors) => {
            let mut acc: Option<Vec<ExtRat>> = None;
            for f in factors {
                let seq = eh_sequence(f, k)?;
                acc = Some(match acc {
                    None => seq,
                    Some(prev) => chekanov_convolution(&prev, &seq),
                });
            }
            Ok(acc.expect("products have factors"))
        }
        Region::DisjointUnion(_) => Err(unsupported("Ekeland-Hofer capacity", region)),
    }
}

/// Min-plus convolution of two capacity sequences indexed from 1, with `c_0 = 0`.
pub fn chekanov_convolution(u: &[ExtRat], v: &[ExtRat]) -> Vec<ExtRat> {
    let k = u.len().min(v.len());
    let at = |s: &[ExtRat], i: usize| if i == 0 { ExtRat::zero() } else { s[i - 1].clone() };
    (1..=k)
        .map(|total| (0..=total).map(|i| &at(u, i) + &at(v, total - i)).min().expect("nonempty"))
        .collect()
}

fn unsupported(what: &'static str, region: &Region) -> Error {
    Error::Unsupported { what, region: region.to_string() }
}

/// The k-th Ekeland-Hofer capacity in units of pi.
pub fn eh_capacity(region: &Region, k: usize) -> Result<ExtRat> {
    check_index(k)?;
    match region {
        Region::Polydisc(p) => Ok(&ExtRat::integer(k as u64) * p.smallest()),
        Region::Ellipsoid(e) => Ok(SpectrumStream::new(e).nth(k - 1).expect("stream is infinite")),
        _ => Ok(eh_sequence(region, k)?.pop().expect("k >= 1")),
    }
}

/// Ball value `[(k+n-1)/n]` of the k-th capacity.
pub fn ball_value(n: usize, k: usize) -> u64 {
    ((k + n - 1) / n) as u64
}

/// `c^EH_k / [(k+n-1)/n]`, equal to 1 on the unit ball.
pub fn normalized_eh(region: &Region, k: usize) -> Result<ExtRat> {
    let c = eh_capacity(region, k)?;
    Ok(c.checked_div(&ExtRat::integer(ball_value(region.half_dim(), k))).expect("positive divisor"))
}

/// Uniform limit `c_inf` of the normalized capacities.
///
/// On ellipsoids this is `n / sum(1/a_i)`; on polydiscs `n min a_i`.
pub fn limit_capacity(region: &Region) -> Result<ExtRat> {
    match region {
        Region::Ellipsoid(e) => {
            let sum = e.axes().iter().fold(ExtRat::zero(), |s, a| &s + &a.recip());
            Ok(ExtRat::integer(e.half_dim() as u64).checked_div(&sum).expect("some axis is finite"))
        }
        Region::Polydisc(p) => Ok(&ExtRat::integer(p.half_dim() as u64) * p.smallest()),
        _ => Err(unsupported("limit capacity", region)),
    }
}

/// Upper bound for `|c̄_k(E) - c_inf(E)|` following the uniform convergence argument.
///
/// After rescaling to `a_n = 1` the argument runs with `delta = a_1/2`, giving
/// `2n/(k delta - 2n)` once `k > 4n/a_1`; the result is scaled back by `a_n`.
pub fn convergence_bound(e: &Ellipsoid, k: usize) -> Result<ExtRat> {
    check_index(k)?;
    if !e.is_bounded() {
        return Err(Error::NotApplicable("the bound needs every axis finite".into()));
    }
    let top = e.axes().last().expect("nonempty").as_rat().expect("bounded").clone();
    let a1 = e.smallest().as_rat().expect("bounded") / &top;
    let n = Rat::from_integer(BigInt::from(e.half_dim()));
    let k = Rat::from_integer(BigInt::from(k));
    let delta = &a1 / Rat::from_integer(2.into());
    let two_n = &n * Rat::from_integer(2.into());
    let denom = &k * &delta - &two_n;
    if denom <= Rat::zero() {
        return Err(Error::NotApplicable(format!("k must exceed 4n/a_1 = {}", &two_n * Rat::from_integer(2.into()) / &a1)));
    }
    Ok(ExtRat::from_rat_unchecked(two_n / denom * top))
}

/// Both sides of the Chekanov product example: the product capacity and the
/// smaller of the factor capacities.
pub fn product_vs_factor_min(factors: &[Region], k: usize) -> Result<(ExtRat, ExtRat)> {
    let product = eh_capacity(&Region::product(factors.to_vec())?, k)?;
    let mut min = ExtRat::infinity();
    for f in factors {
        min = min.min(eh_capacity(f, k)?);
    }
    Ok((product, min))
}

/// `c^EH_k` of a ball `B^{2n}(r)` by the closed formula.
pub fn ball_formula(n: usize, r: &ExtRat, k: usize) -> ExtRat {
    &ExtRat::integer(ball_value(n, k)) * r
}

/// `c^EH_k` of a cylinder `Z^{2n}(r)` by the closed formula.
pub fn cylinder_formula(r: &ExtRat, k: usize) -> ExtRat {
    &ExtRat::integer(k as u64) * r
}

/// Checks the ordering claim of the `E(1,...,1,3^n+1)` versus `E(3,...,3)` example.
///
/// Returns the first index `k <= horizon` where `c_k(E) < c_k(F)` fails, if any.
pub fn ex333_first_failure(n: usize, horizon: usize) -> Result<Option<usize>> {
    let (e, f) = ex333_pair(n)?;
    let ce = eh_sequence(&e, horizon)?;
    let cf = eh_sequence(&f, horizon)?;
    Ok(ce.iter().zip(&cf).position(|(x, y)| x >= y).map(|i| i + 1))
}

/// The pair `(E(1,...,1,3^n+1), E(3,...,3))` in dimension `2n`.
pub fn ex333_pair(n: usize) -> Result<(Region, Region)> {
    if n < 2 {
        return Err(Error::IndexRange("the example needs n >= 2".into()));
    }
    let mut axes = vec![ExtRat::one(); n - 1];
    axes.push(ExtRat::integer(3u64.pow(n as u32) + 1));
    Ok((Region::ellipsoid(axes)?, Region::ellipsoid(vec![ExtRat::integer(3); n])?))
}

/// The `E(1,...,1,3^n+1)` versus `E(3,...,3)` example: every Ekeland-Hofer capacity
/// of the first is smaller up to `horizon`, the limit capacities order the same way
/// (so the slopes `c_k ~ k c_inf / n` do too), and the volumes order the other way.
pub fn verify_ex333(n: usize, horizon: usize) -> Result<VerificationReport> {
    let (e, f) = ex333_pair(n)?;
    let mut rep = VerificationReport::new("ex333").with_param("n", n).with_param("horizon", horizon);
    let ce = eh_sequence(&e, horizon)?;
    let cf = eh_sequence(&f, horizon)?;
    for (k, (x, y)) in ce.iter().zip(&cf).enumerate() {
        rep.check(format!("k={}", k + 1), x < y, || vec![("c_k(E)", x.to_string()), ("c_k(F)", y.to_string())]);
    }
    let (le, lf) = (limit_capacity(&e)?, limit_capacity(&f)?);
    rep.check("limit capacities", le < lf, || vec![("c_inf(E)", le.to_string()), ("c_inf(F)", lf.to_string())]);
    let (ve, vf) = (volume_capacity(&e), volume_capacity(&f));
    rep.check("volumes reversed", ve > vf, || vec![("c_vol(E)", ve.to_string()), ("c_vol(F)", vf.to_string())]);
    rep.note(format!("capacity ordering checked for k <= {horizon}; beyond that it follows from the limit capacities"));
    Ok(rep)
}

/// `c_3(B^4(4) x E(3,8)) = 7` while both factors have `c_3 = 8`, so the product
/// formula with `min` fails for the third capacity. The first two capacities do
/// have the product property on this example.
pub fn verify_chekanov() -> Result<VerificationReport> {
    let four = ExtRat::integer(4);
    let factors = vec![
        Region::Ellipsoid(Ellipsoid::ball(2, four)?),
        Region::ellipsoid(vec![ExtRat::integer(3), ExtRat::integer(8)])?,
    ];
    let mut rep = VerificationReport::new("chekanov");
    let (p3, m3) = product_vs_factor_min(&factors, 3)?;
    rep.check("k=3 product", p3 == ExtRat::integer(7), || vec![("c_3(UxV)", p3.to_string())]);
    rep.check("k=3 factor min", m3 == ExtRat::integer(8), || vec![("min c_3", m3.to_string())]);
    for k in 1..=2 {
        let (p, m) = product_vs_factor_min(&factors, k)?;
        rep.check(format!("k={k} product property"), p == m, || vec![("product", p.to_string()), ("factor min", m.to_string())]);
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammar::parse_region;
    use proptest::prelude::*;

    fn r(s: &str) -> Region {
        parse_region(s).unwrap()
    }

    fn ints(v: &[u64]) -> Vec<ExtRat> {
        v.iter().map(|&x| ExtRat::integer(x)).collect()
    }

    fn ell(s: &str) -> Ellipsoid {
        match r(s) {
            Region::Ellipsoid(e) => e,
            _ => unreachable!(),
        }
    }

    #[test]
    fn prefixes() {
        assert_eq!(spectrum_prefix(&ell("E(1,4)"), 6).unwrap(), ints(&[1, 2, 3, 4, 4, 5]));
        assert_eq!(spectrum_prefix(&ell("E(1,1)"), 4).unwrap(), ints(&[1, 1, 2, 2]));
        assert_eq!(spectrum_prefix(&ell("E(1,inf)"), 5).unwrap(), ints(&[1, 2, 3, 4, 5]));
        assert!(spectrum_prefix(&ell("E(1)"), 0).is_err());
        assert!(matches!(spectrum_prefix(&ell("E(1)"), MAX_INDEX + 1), Err(Error::TooLarge(..))));
    }

    #[test]
    fn capacities() {
        assert_eq!(eh_capacity(&r("B4(1)"), 3).unwrap(), ExtRat::integer(2));
        assert_eq!(eh_capacity(&r("E(3,8)"), 3).unwrap(), ExtRat::integer(8));
        assert_eq!(eh_capacity(&r("B4(4)xE(3,8)"), 3).unwrap(), ExtRat::integer(7));
        assert_eq!(eh_capacity(&r("P(2,3)"), 5).unwrap(), ExtRat::integer(10));
        assert!(matches!(eh_capacity(&r("E(1,1)+E(1,2)"), 1), Err(Error::Unsupported { .. })));
        let (prod, min) = product_vs_factor_min(&[r("B4(4)"), r("E(3,8)")], 3).unwrap();
        assert_eq!((prod, min), (ExtRat::integer(7), ExtRat::integer(8)));
    }

    #[test]
    fn normalized_and_limit() {
        assert_eq!(normalized_eh(&r("E(1/4,1)"), 2).unwrap(), ExtRat::ratio(1, 2));
        assert_eq!(normalized_eh(&r("P(1,1)"), 6).unwrap(), ExtRat::integer(2));
        for k in 1..20 {
            assert_eq!(normalized_eh(&r("E(1,1,1)"), k).unwrap(), ExtRat::one());
        }
        assert_eq!(limit_capacity(&r("E(1,1,1)")).unwrap(), ExtRat::one());
        assert_eq!(limit_capacity(&r("E(1/3,1)")).unwrap(), ExtRat::ratio(1, 2));
        assert_eq!(limit_capacity(&r("P(1,1)")).unwrap(), ExtRat::integer(2));
        assert_eq!(limit_capacity(&r("Z4(1)")).unwrap(), ExtRat::integer(2));
        assert!(limit_capacity(&r("B4(1)xB2(1)")).is_err());
    }

    #[test]
    fn convergence_examples() {
        for (s, k) in [("E(1,1)", 100), ("E(1/2,1)", 64), ("E(1/4,1)", 200)] {
            let e = r(s);
            let bound = convergence_bound(&ell(s), k).unwrap();
            let c = normalized_eh(&e, k).unwrap();
            let l = limit_capacity(&e).unwrap();
            let diff = c.checked_sub(&l).or_else(|| l.checked_sub(&c)).unwrap();
            assert!(diff <= bound, "{s} {k}");
        }
        assert!(convergence_bound(&ell("E(1/4,1)"), 10).is_err());
        assert!(convergence_bound(&ell("E(1,inf)"), 1000).is_err());
    }

    #[test]
    fn ex333_small_horizon() {
        assert_eq!(ex333_first_failure(2, 200).unwrap(), None);
        assert_eq!(ex333_first_failure(3, 200).unwrap(), None);
    }

    fn axis() -> impl Strategy<Value = ExtRat> {
        (1u64..20, 1u64..20).prop_map(|(p, q)| ExtRat::ratio(p, q))
    }

    fn ellipsoid() -> impl Strategy<Value = Ellipsoid> {
        proptest::collection::vec(axis(), 1..4).prop_map(|a| Ellipsoid::new(a).unwrap())
    }

    /// Brute-force spectrum: all multiples up to a safe bound, sorted.
    fn brute_prefix(e: &Ellipsoid, count: usize) -> Vec<ExtRat> {
        let top = &ExtRat::integer(count as u64) * e.smallest();
        let mut all = Vec::new();
        for a in e.axes() {
            let mut m = 1;
            while let Some(v) = Some(&ExtRat::integer(m) * a).filter(|v| *v <= top) {
                all.push(v);
                m += 1;
            }
        }
        all.sort();
        all.truncate(count);
        all
    }

    proptest! {
        #[test]
        fn stream_matches_brute_force(e in ellipsoid(), count in 1usize..60) {
            prop_assert_eq!(spectrum_prefix(&e, count).unwrap(), brute_prefix(&e, count));
        }

        #[test]
        fn prefix_stable_and_monotone(e in ellipsoid(), m in 1usize..40, extra in 0usize..40) {
            let short = spectrum_prefix(&e, m).unwrap();
            let long = spectrum_prefix(&e, m + extra).unwrap();
            prop_assert_eq!(&long[..m], &short[..]);
            prop_assert!(long.windows(2).all(|w| w[0] <= w[1]));
            let region = Region::Ellipsoid(e);
            prop_assert_eq!(eh_capacity(&region, m).unwrap(), short[m - 1].clone());
        }

        #[test]
        fn product_matches_brute_minimization(u in ellipsoid(), v in ellipsoid(), k in 1usize..25) {
            let (ru, rv) = (Region::Ellipsoid(u), Region::Ellipsoid(v));
            let prod = eh_capacity(&Region::product(vec![ru.clone(), rv.clone()]).unwrap(), k).unwrap();
            let cap = |r: &Region, i: usize| if i == 0 { ExtRat::zero() } else { eh_capacity(r, i).unwrap() };
            let brute = (0..=k).map(|i| &cap(&ru, i) + &cap(&rv, k - i)).min().unwrap();
            prop_assert_eq!(&prod, &brute);
            let c1 = eh_capacity(&Region::product(vec![ru.clone(), rv.clone()]).unwrap(), 1).unwrap();
            prop_assert_eq!(c1, eh_capacity(&ru, 1).unwrap().min(eh_capacity(&rv, 1).unwrap()));
            let c2 = eh_capacity(&Region::product(vec![ru.clone(), rv.clone()]).unwrap(), 2).unwrap();
            prop_assert_eq!(c2, eh_capacity(&ru, 2).unwrap().min(eh_capacity(&rv, 2).unwrap()));
        }

        #[test]
        fn uniform_convergence_bound_holds(a in (1u64..20, 1u64..20), b in (1u64..20, 1u64..20), extra in 0usize..200) {
            let e = Ellipsoid::new(vec![ExtRat::ratio(a.0, a.1), ExtRat::ratio(b.0, b.1)]).unwrap();
            let a1 = e.smallest().as_rat().unwrap() / e.axes()[1].as_rat().unwrap();
            let kmin = (Rat::from_integer(8.into()) / a1).to_integer();
            let k: usize = usize::try_from(kmin).unwrap() + 1 + extra;
            let bound = convergence_bound(&e, k).unwrap();
            let region = Region::Ellipsoid(e);
            let c = normalized_eh(&region, k).unwrap();
            let l = limit_capacity(&region).unwrap();
            let diff = c.checked_sub(&l).or_else(|| l.checked_sub(&c)).unwrap();
            prop_assert!(diff <= bound);
        }
    }

    #[test]
    fn monotone_in_k() {
        for s in ["E(2/3,5/7)", "P(1,3)", "B4(4)xE(3,8)", "E(1,inf)xP(2)"] {
            let seq = eh_sequence(&r(s), 80).unwrap();
            assert!(seq.windows(2).all(|w| w[0] <= w[1]), "{s}");
        }
    }

    #[test]
    fn example_verifiers() {
        assert!(verify_ex333(2, 500).unwrap().passed());
        assert!(verify_ex333(3, 500).unwrap().passed());
        let rep = verify_chekanov().unwrap();
        assert!(rep.passed(), "{:?}", rep.failures);
    }
}
