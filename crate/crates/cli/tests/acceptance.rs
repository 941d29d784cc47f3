//! Acceptance suite. Prints one line per criterion and exits nonzero if any fails.
//!
//! Every check is exact. Each criterion also has a pinned wall-clock bound.

use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use symcap_cli::plot;
use symcap_core::algebra::{check_axioms, BaseCapacity, CapacityExpr, Mean};
use symcap_core::classic::volume_capacity;
use symcap_core::dim4::{
    deviation_from_limit, normalized_eh_pl, plateau_count, plateau_endpoints, sup_distance_to_limit, verify_corollary_2ml,
    verify_polydisc_representation, verify_representation, verify_representation2,
};
use symcap_core::reconstruct::{plain_axes, reconstruct_adaptive, Method, SpectrumValue};
use symcap_core::spectrum::{eh_sequence, normalized_eh, product_vs_factor_min, verify_ex333, SpectrumStream};
use symcap_core::{parse_region, AlgValue, Ellipsoid, ExtRat, QuadSurd, Rat, Region};

type Check = fn() -> Result<(), String>;

fn rq(p: usize, q: usize) -> Rat {
    Rat::new(p.into(), q.into())
}

fn ext(r: &Rat) -> ExtRat {
    ExtRat::from_rat(r.clone()).unwrap()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

/// Ball and cylinder values for n = 1..4 and k <= 200.
fn ac1() -> Result<(), String> {
    for n in 1..=4 {
        for r in [ExtRat::one(), ExtRat::ratio(3, 2)] {
            let ball = Region::Ellipsoid(Ellipsoid::ball(n, r.clone()).map_err(err)?);
            let cyl = Region::Ellipsoid(Ellipsoid::cylinder(n, r.clone()).map_err(err)?);
            let (bs, cs) = (eh_sequence(&ball, 200).map_err(err)?, eh_sequence(&cyl, 200).map_err(err)?);
            for k in 1..=200usize {
                let want_ball = &ExtRat::integer(((k + n - 1) / n) as u64) * &r;
                let want_cyl = &ExtRat::integer(k as u64) * &r;
                ensure(bs[k - 1] == want_ball, || format!("ball n={n} r={r} k={k}: {}", bs[k - 1]))?;
                ensure(cs[k - 1] == want_cyl, || format!("cylinder n={n} r={r} k={k}: {}", cs[k - 1]))?;
            }
        }
    }
    Ok(())
}

/// `c_3(B^4(4) x E(3,8)) = 7` against a factor minimum of 8.
fn ac2() -> Result<(), String> {
    let factors = vec![parse_region("B4(4)").map_err(err)?, parse_region("E(3,8)").map_err(err)?];
    let (product, min) = product_vs_factor_min(&factors, 3).map_err(err)?;
    ensure(product == ExtRat::integer(7) && min == ExtRat::integer(8), || format!("product {product}, factor min {min}"))
}

/// Sup-norm distance to the limit: `1/(k+1)` for even k <= 50, `(m-1)/(mk)` for odd 3 <= k <= 49.
fn ac3() -> Result<(), String> {
    for k in 2..=50usize {
        let want = if k % 2 == 0 {
            rq(1, k + 1)
        } else {
            let m = (k + 1) / 2;
            rq(m - 1, m * k)
        };
        let got = sup_distance_to_limit(k).map_err(err)?;
        ensure(got == QuadSurd::from_rat(want.clone()), || format!("k={k}: {got} != {want}"))?;
    }
    Ok(())
}

/// `c̄_k - c_inf >= 0` for even k <= 50 and `<= 0` for odd k <= 49.
fn ac4() -> Result<(), String> {
    let zero = QuadSurd::from_rat(Rat::from_integer(0.into()));
    for k in 1..=50usize {
        let d = deviation_from_limit(&normalized_eh_pl(k).map_err(err)?);
        if k % 2 == 0 {
            ensure(d.inf >= zero, || format!("k={k}: infimum {}", d.inf))?;
        } else {
            ensure(d.sup <= zero, || format!("k={k}: supremum {}", d.sup))?;
        }
    }
    Ok(())
}

/// The three representation verifiers for 2 <= k <= 30.
fn ac5() -> Result<(), String> {
    for k in 2..=30 {
        for rep in [
            verify_representation(k).map_err(err)?,
            verify_representation2(k).map_err(err)?,
            verify_polydisc_representation(k, 100).map_err(err)?,
        ] {
            ensure(rep.passed(), || format!("{} k={k}: {:?}", rep.checker, rep.failures.first()))?;
        }
    }
    Ok(())
}

/// `c̄_{2rs} <= c̄_{2r}` for all r s <= 50.
fn ac6() -> Result<(), String> {
    for r in 1..=50 {
        for s in 1..=50 / r {
            let rep = verify_corollary_2ml(r, s).map_err(err)?;
            ensure(rep.passed(), || format!("r={r} s={s}: {:?}", rep.failures.first()))?;
        }
    }
    Ok(())
}

/// 100 random ellipsoids, n0 = 0..3 deletions at adversarial positions, prefix cap 10^4.
fn ac7() -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for trial in 0..100 {
        let n = rng.gen_range(1..=4);
        let mut axes: Vec<Rat> = (0..n).map(|_| rq(rng.gen_range(1..=20), rng.gen_range(1..=20))).collect();
        axes.sort();
        let e = Ellipsoid::new(axes.iter().map(ext).collect()).map_err(err)?;
        let full: Vec<Rat> = SpectrumStream::new(&e).take(10_100).map(|v| v.as_rat().unwrap().clone()).collect();
        for n0 in 0..=3usize {
            let gone: Vec<usize> = match (trial + n0) % 3 {
                // The very first entries, including the smallest axis itself.
                0 => (0..n0).collect(),
                // Entries inside runs of equal values, then the front.
                1 => {
                    let mut v: Vec<usize> = (1..full.len()).filter(|&i| full[i] == full[i - 1]).take(n0).collect();
                    v.extend((0..).filter(|i| !v.contains(i)).take(n0 - v.len()).collect::<Vec<_>>());
                    v
                }
                _ => {
                    let mut pool: Vec<usize> = (0..300).collect();
                    pool.shuffle(&mut rng);
                    pool.truncate(n0);
                    pool
                }
            };
            let mut it = full.iter().enumerate().filter(|(i, _)| !gone.contains(i)).map(|(_, v)| SpectrumValue::plain(v.clone()));
            let got = reconstruct_adaptive(|| it.next(), n, n0, 10_000, Method::Sieve).map_err(|e| format!("trial {trial} n0={n0}: {e}"))?;
            let got = plain_axes(&got).ok_or("unexpected formal unit")?;
            ensure(got == axes, || format!("trial {trial} n0={n0} deletions {gone:?}: got {got:?}, want {axes:?}"))?;
        }
    }
    Ok(())
}

/// Closed-form `c̄_k` against the spectrum computation, k <= 100, 200 grid points.
fn ac8() -> Result<(), String> {
    for k in 1..=100 {
        let f = normalized_eh_pl(k).map_err(err)?;
        for i in 1..=200 {
            let a = rq(i, 200);
            let e = Region::ellipsoid(vec![ext(&a), ExtRat::one()]).map_err(err)?;
            let (x, y) = (ext(&f.eval_rat(&a).map_err(err)?), normalized_eh(&e, k).map_err(err)?);
            ensure(x == y, || format!("k={k} a={a}: {x} vs {y}"))?;
        }
    }
    Ok(())
}

fn random_size(rng: &mut ChaCha8Rng) -> (u64, u64) {
    (rng.gen_range(1..=30), rng.gen_range(1..=30))
}

fn ordered_pairs(rng: &mut ChaCha8Rng, count: usize) -> Vec<(Ellipsoid, Ellipsoid)> {
    (0..count)
        .map(|_| {
            let n = rng.gen_range(1..=3);
            let mut small = Vec::new();
            let mut large = Vec::new();
            for i in 0..n {
                let (p, q) = random_size(rng);
                small.push(ExtRat::ratio(p, q));
                large.push(if i > 0 && rng.gen_bool(0.1) { ExtRat::infinity() } else { ExtRat::ratio(p + rng.gen_range(0..5), q) });
            }
            (Ellipsoid::new(small).unwrap(), Ellipsoid::new(large).unwrap())
        })
        .collect()
}

/// Random expression; `rational` keeps every value rational so that arithmetic and
/// harmonic means stay exact.
fn random_expr(rng: &mut ChaCha8Rng, depth: usize, rational: bool) -> CapacityExpr {
    if depth == 0 || rng.gen_bool(0.3) {
        let mut bases = vec![
            BaseCapacity::GromovRadius,
            BaseCapacity::EkelandHofer(rng.gen_range(1..=10)),
            BaseCapacity::NormalizedEkelandHofer(rng.gen_range(1..=10)),
            BaseCapacity::LimitCInfinity,
        ];
        if !rational {
            bases.push(BaseCapacity::Volume);
        }
        return bases.choose(rng).unwrap().clone().into();
    }
    let kids = |rng: &mut ChaCha8Rng, rational: bool| -> Vec<CapacityExpr> {
        (0..rng.gen_range(1..=3)).map(|_| random_expr(rng, depth - 1, rational)).collect()
    };
    let weights = |rng: &mut ChaCha8Rng, len: usize| -> Vec<Rat> {
        let d = rng.gen_range(1..=6usize) * len;
        let mut cuts: Vec<usize> = (0..len - 1).map(|_| rng.gen_range(0..=d)).collect();
        cuts.sort();
        let mut prev = 0;
        let mut out = Vec::new();
        for c in cuts.into_iter().chain([d]) {
            out.push(rq(c - prev, d));
            prev = c;
        }
        out
    };
    let choices = if rational { 5 } else { 6 };
    match rng.gen_range(0..choices) {
        0 => CapacityExpr::min(kids(rng, rational)).unwrap(),
        1 => CapacityExpr::max(kids(rng, rational)).unwrap(),
        2 => CapacityExpr::scale(rq(rng.gen_range(1..=5), rng.gen_range(1..=3)), random_expr(rng, depth - 1, rational)).unwrap(),
        3 | 4 => {
            let args = kids(rng, true);
            let kind = if rng.gen_bool(0.5) { Mean::Arithmetic } else { Mean::Harmonic };
            let ws = weights(rng, args.len());
            CapacityExpr::mean(kind, ws.into_iter().zip(args).collect()).unwrap()
        }
        _ => {
            let args = kids(rng, false);
            let ws = weights(rng, args.len());
            CapacityExpr::mean(Mean::Geometric, ws.into_iter().zip(args).collect()).unwrap()
        }
    }
}

/// Every base capacity and 50 random expressions on 1000 ordered pairs and 10 scalars.
fn ac9() -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let pairs = ordered_pairs(&mut rng, 1000);
    let scalars: Vec<ExtRat> = [(1, 2), (3, 1), (2, 3), (5, 4), (1, 7), (7, 2), (1, 1), (9, 5), (4, 9), (11, 3)]
        .iter()
        .map(|&(p, q)| ExtRat::ratio(p, q))
        .collect();
    let mut exprs: Vec<CapacityExpr> = BaseCapacity::all(10).into_iter().map(Into::into).collect();
    exprs.extend((0..50).map(|_| random_expr(&mut rng, 3, false)));
    for e in &exprs {
        let rep = check_axioms(e, &pairs, &scalars);
        ensure(rep.passed() && rep.cases == pairs.len() * (2 + scalars.len()), || format!("{e}: {:?}", rep.failures.first()))?;
    }
    Ok(())
}

/// `E(1,...,1,3^n+1)` below `E(3,...,3)` for k <= 500 and in the limit, volumes reversed.
fn ac10() -> Result<(), String> {
    for n in [2, 3] {
        let rep = verify_ex333(n, 500).map_err(err)?;
        ensure(rep.passed() && rep.cases == 502, || format!("n={n}: {:?}", rep.failures.first()))?;
    }
    let v = volume_capacity(&parse_region("E(1,10)").map_err(err)?);
    ensure(v == AlgValue::root(ExtRat::integer(10), 2) && v > AlgValue::rational(ExtRat::integer(3)), || format!("volume {v}"))
}

fn csv_rows(text: &str) -> Result<(Vec<String>, Vec<Vec<String>>), String> {
    let body: String = text.lines().filter(|l| !l.starts_with('#')).map(|l| format!("{l}\n")).collect();
    let mut rdr = csv::Reader::from_reader(body.as_bytes());
    let header = rdr.headers().map_err(err)?.iter().map(str::to_owned).collect();
    let rows = rdr.records().map(|r| r.map(|r| r.iter().map(str::to_owned).collect())).collect::<Result<_, _>>().map_err(err)?;
    Ok((header, rows))
}

fn parse_alg(s: &str) -> Result<AlgValue, String> {
    match s.split_once("^(1/") {
        None => Ok(AlgValue::rational(s.parse().map_err(err)?)),
        Some((base, n)) => {
            let base = base.trim_start_matches('(').trim_end_matches(')');
            let n: u32 = n.trim_end_matches(')').parse().map_err(err)?;
            Ok(AlgValue::root(base.parse().map_err(err)?, n))
        }
    }
}

/// Exact plateaus of c̄_1..c̄_6 in the fi1 data; lower <= upper in fi0, equal to 1 on [1/2, 1].
fn ac11() -> Result<(), String> {
    let mut buf = Vec::new();
    plot::fi1(&mut buf, 100).map_err(err)?;
    let (header, rows) = csv_rows(&String::from_utf8(buf).map_err(err)?)?;
    let col = |name: &str| header.iter().position(|h| h == name).ok_or(format!("missing column {name}"));
    let value_at = |a: &Rat, c: usize| -> Option<String> { rows.iter().find(|r| r[0] == a.to_string()).map(|r| r[c].clone()) };
    for k in 1..=6 {
        let c = col(&format!("cbar{k}"))?;
        let m = plateau_count(k);
        for (l, (a, b)) in plateau_endpoints(k).into_iter().enumerate() {
            let h = rq(l + 1, m).to_string();
            for x in [&a, &b] {
                ensure(value_at(x, c).as_deref() == Some(h.as_str()), || format!("cbar{k} at {x}: {:?}, want {h}", value_at(x, c)))?;
            }
        }
    }
    let c6 = col("cbar6")?;
    for (x, h) in [(rq(1, 6), "1/3"), (rq(1, 5), "1/3"), (rq(2, 5), "2/3"), (rq(1, 2), "2/3"), (rq(3, 4), "1"), (rq(1, 1), "1")] {
        ensure(value_at(&x, c6).as_deref() == Some(h), || format!("cbar6 at {x}"))?;
    }

    let mut buf = Vec::new();
    plot::fi0(&mut buf, 200, 12).map_err(err)?;
    let (header, rows) = csv_rows(&String::from_utf8(buf).map_err(err)?)?;
    let (lo, up) = (header.iter().position(|h| h == "lower").unwrap(), header.iter().position(|h| h == "upper").unwrap());
    ensure(rows.len() >= 200, || format!("only {} rows", rows.len()))?;
    let half = rq(1, 2);
    for r in &rows {
        let a: Rat = r[0].parse().map_err(err)?;
        let (l, u) = (parse_alg(&r[lo])?, parse_alg(&r[up])?);
        ensure(l <= u, || format!("a={a}: lower {l} > upper {u}"))?;
        if a >= half {
            ensure(l == AlgValue::one() && u == AlgValue::one(), || format!("a={a}: bounds {l}, {u}"))?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let criteria: [(&str, Check, u64); 11] = [
        ("ball and cylinder Ekeland-Hofer values, n <= 4, k <= 200", ac1, 1),
        ("third capacity of B4(4) x E(3,8) is 7 against factor minimum 8", ac2, 1),
        ("sup distance of normalized capacities to the limit, k <= 50", ac3, 5),
        ("sign of the difference to the limit, k <= 50", ac4, 5),
        ("representation verifiers for 2 <= k <= 30", ac5, 10),
        ("c_2rs <= c_2r for r s <= 50", ac6, 5),
        ("reconstruction round trip, 100 ellipsoids, up to 3 deletions", ac7, 30),
        ("closed-form c_k equals the spectrum value, k <= 100, 200 points", ac8, 30),
        ("axioms for base capacities and 50 random expressions", ac9, 60),
        ("E(1,10) vs E(3,3) and E(1,1,28) vs E(3,3,3)", ac10, 5),
        ("figure data: fi1 plateaus, fi0 bounds", ac11, 5),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, check, bound)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_else(|| "panic".into()))
        });
        let elapsed = start.elapsed();
        let slow = elapsed > Duration::from_secs(*bound);
        let ok = outcome.is_ok() && !slow;
        failed += usize::from(!ok);
        let detail = match (&outcome, slow) {
            (Err(e), _) => format!(": {e}"),
            (Ok(()), true) => ": over the time bound".into(),
            _ => String::new(),
        };
        println!("AC{:<2} {} {name} [{:.3}s, bound {bound}s]{detail}", i + 1, if ok { "PASS" } else { "FAIL" }, elapsed.as_secs_f64());
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
