//! CSV data for the three figures of the 4-dimensional picture.
//!
//! Every file has an exact column per curve followed by decimal columns with the
//! suffix `_approx`. Sample points are the uniform grid `i/samples` together with
//! every breakpoint of the plotted curves, so plateaus and kinks appear exactly.

use std::collections::BTreeSet;
use std::io::Write;

use symcap_core::dim4::{self, cb_bounds, embed_from_fn, embed_to_fn, lagrangian_folding_bound, normalized_eh_pl, one_fold_bound};
use symcap_core::{rat_to_f64, AlgValue, Rat};

use crate::{approx, CliResult};

fn grid(samples: usize) -> BTreeSet<Rat> {
    (1..=samples).map(|i| Rat::new(i.into(), samples.into())).collect()
}

/// One row of exact cells; `None` leaves the cell empty.
struct Cell {
    exact: Option<String>,
    approx: Option<f64>,
}

impl Cell {
    fn rat(r: &Rat) -> Cell {
        Cell { exact: Some(r.to_string()), approx: Some(rat_to_f64(r)) }
    }

    fn alg(v: &AlgValue) -> Cell {
        Cell { exact: Some(v.to_string()), approx: Some(v.to_f64()) }
    }

    fn empty() -> Cell {
        Cell { exact: None, approx: None }
    }
}

fn write_table(out: &mut dyn Write, comments: &[String], names: &[&str], rows: Vec<Vec<Cell>>) -> CliResult<()> {
    for c in comments {
        writeln!(out, "# {c}")?;
    }
    let mut w = csv::Writer::from_writer(out);
    let header: Vec<String> = names.iter().map(|n| n.to_string()).chain(names.iter().map(|n| format!("{n}_approx"))).collect();
    w.write_record(&header)?;
    for row in rows {
        let exact = row.iter().map(|c| c.exact.clone().unwrap_or_default());
        let dec = row.iter().map(|c| c.approx.map(approx).unwrap_or_default());
        w.write_record(exact.chain(dec).collect::<Vec<_>>())?;
    }
    w.flush()?;
    Ok(())
}

/// `c̄_1, ..., c̄_6` and `c_inf = 2a/(1+a)`.
pub fn fi1(out: &mut dyn Write, samples: usize) -> CliResult<()> {
    let curves: Vec<_> = (1..=6).map(normalized_eh_pl).collect::<Result<_, _>>()?;
    let mut points = grid(samples);
    for f in &curves {
        points.extend(f.breakpoints().cloned());
    }
    let mut rows = Vec::new();
    for a in &points {
        let mut row = vec![Cell::rat(a)];
        for f in &curves {
            row.push(Cell::rat(&f.eval_rat(a)?));
        }
        row.push(Cell::rat(&dim4::c_infinity_4d(a)?));
        rows.push(row);
    }
    let names = ["a", "cbar1", "cbar2", "cbar3", "cbar4", "cbar5", "cbar6", "cinf"];
    write_table(out, &[], &names, rows)
}

/// Lower and upper bounds for `c^B(a)`.
pub fn fi0(out: &mut dyn Write, samples: usize, kmax: usize) -> CliResult<()> {
    let mut points = grid(samples);
    let smallest = Rat::new(1.into(), samples.into());
    for k in 1..=kmax {
        points.extend(normalized_eh_pl(k)?.breakpoints().cloned());
    }
    for k in 1usize.. {
        let knots = [Rat::new(1.into(), (k * (k + 1)).into()), Rat::new(1.into(), (k * (k + 2)).into())];
        if knots[0] < smallest {
            break;
        }
        points.extend(knots.into_iter().filter(|x| *x >= smallest));
    }
    let mut rows = Vec::new();
    for a in &points {
        let bounds = cb_bounds(a, kmax)?;
        let best_eh = (1..=kmax).map(|k| normalized_eh_pl(k)?.eval_rat(a)).collect::<Result<Vec<_>, _>>()?.into_iter().max().expect("kmax >= 1");
        let sqrt = AlgValue::root(symcap_core::ExtRat::from_rat(a.clone())?, 2);
        rows.push(vec![
            Cell::rat(a),
            Cell::alg(&sqrt),
            Cell::rat(&best_eh),
            Cell::alg(&bounds.lower),
            Cell::rat(&lagrangian_folding_bound(a)?),
            one_fold_bound(a).map_or_else(Cell::empty, |v| Cell::rat(&v)),
            Cell::alg(&bounds.upper),
        ]);
    }
    let comments = [
        format!("lower = max(sqrt_a, cbar_max) with cbar_max over k <= {kmax}; upper = min(1, folding, one_fold)"),
        format!("multiple folding gives c^B(1/4) <= {}; that curve is not reproduced", dim4::MULTIPLE_FOLDING_AT_QUARTER),
    ];
    let names = ["a", "sqrt_a", "cbar_max", "lower", "folding", "one_fold", "upper"];
    write_table(out, &comments, &names, rows)
}

/// `c^{E(1,b)}(a)` and `c_{E(1,b)}(a)` where their formulas are valid.
pub fn fi2(out: &mut dyn Write, samples: usize, b: &Rat) -> CliResult<()> {
    let (to, from) = (embed_to_fn(b)?, embed_from_fn(b)?);
    let mut points = grid(samples);
    points.extend(to.knots_within());
    points.extend(from.knots_within());
    let cell = |r: Result<Rat, _>| r.map_or_else(|_| Cell::empty(), |v| Cell::rat(&v));
    let rows = points.iter().map(|a| vec![Cell::rat(a), cell(to.eval(a)), cell(from.eval(a))]).collect();
    let comments = [format!("b = {b}; to = c^E(1,b) valid on {to}, from = c_E(1,b) valid on {from}; empty cells lie outside validity")];
    write_table(out, &comments, &["a", "to", "from"], rows)
}
