//! The `symcap` command line: exact capacity values, CSV tables and figure data,
//! verification reports and spectrum reconstruction.
//!
//! Exit codes: 0 success, 1 a verification failed, 2 usage or parse error,
//! 3 unsupported combination, 4 not enough data.

use std::fmt;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use symcap_core::algebra::{eval_expr, CapacityExpr};
use symcap_core::reconstruct::{parse_spectrum, reconstruct, Method, SpectrumInput};
use symcap_core::{dim4, parse_region, spectrum, AlgValue, Error, VerificationReport};

pub mod plot;

#[derive(Debug, Parser)]
#[command(name = "symcap", version, about = "Exact symplectic capacities of ellipsoids and polydiscs (values in units of pi)")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print one capacity of one region.
    Compute {
        /// Region, e.g. `E(1,4)`, `B4(1)`, `P(1,2)`, `B4(4)xE(3,8)`.
        #[arg(short, long)]
        region: String,
        /// Capacity, e.g. `gromov`, `eh:5`, `neh:2`, `vol`, `max(gromov, vol)`.
        #[arg(short, long)]
        capacity: String,
    },
    /// Write a CSV table `capacity,exact,approx` for one region.
    Table {
        #[arg(short, long)]
        region: String,
        /// Capacities; `eh:1..6` and `neh:1..6` expand to ranges.
        #[arg(short, long, value_delimiter = ';', required = true, num_args = 1..)]
        capacity: Vec<String>,
        /// Output file; standard output when absent.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Write the data behind one of the figures as CSV.
    Plotdata {
        /// `fi0` (bounds for c^B), `fi1` (c̄_1..c̄_6 and c_inf) or `fi2` (E(1,b) embedding functions).
        figure: String,
        #[arg(short, long, default_value_t = 100)]
        samples: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Largest normalized capacity index in the fi0 lower bound.
        #[arg(long, default_value_t = 12)]
        kmax: usize,
        /// Parameter b of fi2.
        #[arg(long, default_value = "5/2")]
        b: String,
    },
    /// Run a checker and print its JSON report.
    Verify {
        /// `limell`, `xk:<k>`, `xk2:<k>`, `pol:<k>`, `cor2ml:<r>,<s>`, `chekanov`, `ex333:<n>` or `lipschitz:<k>`.
        target: String,
    },
    /// Recover ellipsoid axes from a damaged spectrum prefix.
    Reconstruct {
        /// One value per line (`p/q`, or `p/q*u<i>` for a formal unit), `#` comments.
        file: PathBuf,
        #[arg(short, long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        n0: usize,
        #[arg(long, default_value = "sieve")]
        method: String,
    },
}

/// A failure with its exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse(_)
            | Error::Domain { .. }
            | Error::InvalidRegion(_)
            | Error::IndexRange(_)
            | Error::InvalidExpr(_)
            | Error::MalformedSpectrum(_) => 2,
            Error::NeedsMoreData | Error::CapExceeded(_) => 4,
            _ => 3,
        };
        CliError { code, message: e.to_string() }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError { code: 2, message: e.to_string() }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError { code: 2, message: e.to_string() }
    }
}

fn usage(message: impl Into<String>) -> CliError {
    CliError { code: 2, message: message.into() }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// Decimal annotation with 12 digits after the point.
pub fn approx(v: f64) -> String {
    if v.is_infinite() {
        "inf".into()
    } else {
        format!("{v:.12}")
    }
}

fn approx_alg(v: &AlgValue) -> String {
    approx(v.to_f64())
}

/// Runs one command, writing regular output to `out`. Returns the exit code.
pub fn run(cli: Cli, out: &mut dyn Write) -> CliResult<i32> {
    match cli.command {
        Command::Compute { region, capacity } => {
            let region = parse_region(&region)?;
            let expr: CapacityExpr = capacity.parse()?;
            let v = eval_expr(&expr, &region)?;
            let flag = if v.conjectural { " conjectural" } else { "" };
            writeln!(out, "exact={} approx={}{flag}", v.value, approx_alg(&v.value))?;
            Ok(0)
        }
        Command::Table { region, capacity, output } => {
            let region = parse_region(&region)?;
            let mut rows = Vec::new();
            for spec in capacity.iter().flat_map(|c| c.split(';')).map(str::trim).filter(|c| !c.is_empty()) {
                for expr in expand(spec)? {
                    let v = eval_expr(&expr, &region)?;
                    rows.push([expr.to_string(), v.value.to_string(), approx_alg(&v.value)]);
                }
            }
            let mut w = sink(output, out)?;
            {
                let mut csv = csv::Writer::from_writer(&mut w);
                csv.write_record(["capacity", "exact", "approx"])?;
                for r in &rows {
                    csv.write_record(r)?;
                }
                csv.flush()?;
            }
            Ok(0)
        }
        Command::Plotdata { figure, samples, output, kmax, b } => {
            if samples < 2 {
                return Err(usage("need at least 2 samples"));
            }
            let mut w = sink(output, out)?;
            match figure.as_str() {
                "fi0" => plot::fi0(&mut w, samples, kmax)?,
                "fi1" => plot::fi1(&mut w, samples)?,
                "fi2" => {
                    let b = b.parse().map_err(|_| usage(format!("bad value for b: `{b}`")))?;
                    plot::fi2(&mut w, samples, &b)?
                }
                other => return Err(usage(format!("unknown figure `{other}`; expected fi0, fi1 or fi2"))),
            }
            Ok(0)
        }
        Command::Verify { target } => {
            let report = verify(&target)?;
            serde_json::to_writer_pretty(&mut *out, &report).map_err(io::Error::from)?;
            writeln!(out)?;
            Ok(if report.passed() { 0 } else { 1 })
        }
        Command::Reconstruct { file, n, n0, method } => {
            let method: Method = method.parse()?;
            let text = fs::read_to_string(&file).map_err(|e| usage(format!("{}: {e}", file.display())))?;
            let values = parse_spectrum(&text)?;
            let axes = reconstruct(&SpectrumInput::new(values, n, n0)?, method)?;
            let shown: Vec<String> = axes.iter().map(ToString::to_string).collect();
            writeln!(out, "{}", shown.join(", "))?;
            Ok(0)
        }
    }
}

enum Sink<'a> {
    File(io::BufWriter<fs::File>),
    Out(&'a mut dyn Write),
}

impl Write for Sink<'_> {
    fn write(&mut self, buf: &[u8]) -> io::Result<usize> {
        match self {
            Sink::File(f) => f.write(buf),
            Sink::Out(o) => o.write(buf),
        }
    }

    fn flush(&mut self) -> io::Result<()> {
        match self {
            Sink::File(f) => f.flush(),
            Sink::Out(o) => o.flush(),
        }
    }
}

fn sink<'a>(path: Option<PathBuf>, out: &'a mut dyn Write) -> CliResult<Sink<'a>> {
    Ok(match path {
        Some(p) => Sink::File(io::BufWriter::new(fs::File::create(&p).map_err(|e| usage(format!("{}: {e}", p.display())))?)),
        None => Sink::Out(out),
    })
}

/// Expands `eh:1..6` and `neh:1..6`; anything else is a single expression.
fn expand(spec: &str) -> CliResult<Vec<CapacityExpr>> {
    for prefix in ["eh:", "neh:"] {
        if let Some((lo, hi)) = spec.strip_prefix(prefix).and_then(|r| r.split_once("..")) {
            let parse = |s: &str| s.trim().parse::<usize>().map_err(|_| usage(format!("bad range `{spec}`")));
            let (lo, hi) = (parse(lo)?, parse(hi)?);
            if lo == 0 || lo > hi {
                return Err(usage(format!("bad range `{spec}`")));
            }
            return (lo..=hi).map(|k| Ok(format!("{prefix}{k}").parse()?)).collect();
        }
    }
    Ok(vec![spec.parse()?])
}

fn number(s: &str, target: &str) -> CliResult<usize> {
    s.trim().parse().map_err(|_| usage(format!("bad number in verify target `{target}`")))
}

/// Runs the checker named by `target`.
pub fn verify(target: &str) -> CliResult<VerificationReport> {
    let (name, arg) = target.split_once(':').unwrap_or((target, ""));
    let need_arg = |what: &str| -> CliResult<usize> {
        if arg.is_empty() {
            return Err(usage(format!("verify target `{name}` needs {what}")));
        }
        number(arg, target)
    };
    let at_least = |k: usize, min: usize| -> CliResult<usize> {
        if k < min {
            return Err(usage(format!("verify target `{target}` needs an index of at least {min}")));
        }
        Ok(k)
    };
    Ok(match name {
        "limell" if arg.is_empty() => dim4::verify_limit_table(50)?,
        "xk" => dim4::verify_representation(at_least(need_arg("k")?, 2)?)?,
        "xk2" => dim4::verify_representation2(at_least(need_arg("k")?, 2)?)?,
        "pol" => dim4::verify_polydisc_representation(at_least(need_arg("k")?, 1)?, 100)?,
        "lipschitz" => {
            let k = at_least(need_arg("k")?, 1)?;
            dim4::lipschitz_check(&dim4::normalized_eh_pl(k)?).with_param("k", k)
        }
        "cor2ml" => {
            let (r, s) = arg.split_once(',').ok_or_else(|| usage("cor2ml needs `<r>,<s>`"))?;
            dim4::verify_corollary_2ml(number(r, target)?, number(s, target)?)?
        }
        "chekanov" if arg.is_empty() => spectrum::verify_chekanov()?,
        "ex333" => spectrum::verify_ex333(at_least(need_arg("n")?, 2)?, 500)?,
        _ => return Err(usage(format!("unknown verify target `{target}`"))),
    })
}
