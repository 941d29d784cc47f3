//! Gromov radius, volume capacity, Lagrangian capacity and the aliases of the
//! first Ekeland-Hofer capacity on ellipsoids and polydiscs.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::exact::{AlgValue, ExtRat};
use crate::region::Region;

fn unsupported(what: &'static str, region: &Region) -> Error {
    Error::Unsupported { what, region: region.to_string() }
}

fn smallest<'a>(what: &'static str, region: &'a Region) -> Result<&'a ExtRat> {
    match region {
        Region::Ellipsoid(e) => Ok(e.smallest()),
        Region::Polydisc(p) => Ok(p.smallest()),
        _ => Err(unsupported(what, region)),
    }
}

/// Largest `r` with `B(r)` embedding into the region: the smallest axis or width.
pub fn gromov_radius(region: &Region) -> Result<ExtRat> {
    smallest("Gromov radius", region).cloned()
}

/// `(vol(R)/vol(B^{2n}))^(1/n)`; `+inf` on unbounded regions.
pub fn volume_capacity(region: &Region) -> AlgValue {
    let ratio = region.volume_ratio();
    if ratio.is_infinite() {
        return AlgValue::infinity();
    }
    AlgValue::root(ratio, region.half_dim() as u32)
}

/// A capacity value together with whether it rests on an unproven statement.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct Flagged {
    pub value: ExtRat,
    pub conjectural: bool,
}

/// Lagrangian capacity in units of pi.
///
/// On polydiscs it is `min a_i`. On ellipsoids only the conjectured value
/// `1/sum(1/a_i)` is available, so the result carries the conjectural flag.
pub fn lagrangian_capacity(region: &Region) -> Result<Flagged> {
    match region {
        Region::Polydisc(p) => Ok(Flagged { value: p.smallest().clone(), conjectural: false }),
        Region::Ellipsoid(e) => {
            let sum = e.axes().iter().fold(ExtRat::zero(), |s, a| &s + &a.recip());
            Ok(Flagged { value: sum.recip(), conjectural: true })
        }
        _ => Err(unsupported("Lagrangian capacity", region)),
    }
}

/// Capacities that agree with the Gromov radius on convex Reinhardt domains.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Alias {
    HoferZehnder,
    Displacement,
    /// Cylindrical capacity, dimensionless.
    Cylindrical,
    FirstEkelandHofer,
}

impl FromStr for Alias {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hz" => Ok(Alias::HoferZehnder),
            "displacement" => Ok(Alias::Displacement),
            "cz" => Ok(Alias::Cylindrical),
            "eh1" => Ok(Alias::FirstEkelandHofer),
            _ => Err(Error::Parse(format!("unknown capacity alias `{s}`"))),
        }
    }
}

impl fmt::Display for Alias {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Alias::HoferZehnder => "hz",
            Alias::Displacement => "displacement",
            Alias::Cylindrical => "cz",
            Alias::FirstEkelandHofer => "eh1",
        })
    }
}

/// Value of an alias capacity on an ellipsoid or polydisc: the smallest size.
pub fn normalized_alias_value(alias: Alias, region: &Region) -> Result<ExtRat> {
    let what = match alias {
        Alias::HoferZehnder => "Hofer-Zehnder capacity",
        Alias::Displacement => "displacement energy",
        Alias::Cylindrical => "cylindrical capacity",
        Alias::FirstEkelandHofer => "first Ekeland-Hofer capacity",
    };
    smallest(what, region).cloned()
}
