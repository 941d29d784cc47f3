//! Exact symplectic capacities of ellipsoids and polydiscs.
//!
//! Every capacity value is a nonnegative rational multiple of pi (or an n-th root
//! of one, for volume capacities) and is stored without the factor pi.

pub mod algebra;
pub mod classic;
pub mod dim4;
pub mod error;
pub mod exact;
pub mod grammar;
pub mod pl;
pub mod reconstruct;
pub mod report;
pub mod region;
pub mod spectrum;

pub use error::{Error, Result};
pub use exact::{rat, rat_to_f64, AlgValue, ExtRat, QuadSurd, Rat};
pub use grammar::parse_region;
pub use pl::{pl_max, pl_min, PiecewiseLinearFn, PlComparison};
pub use region::{Ellipsoid, Polydisc, Region};
pub use report::VerificationReport;
