//! Exact number types. Capacity values are stored in units of pi.

mod alg;
mod extrat;
mod surd;

pub use alg::AlgValue;
pub use extrat::ExtRat;
pub use surd::QuadSurd;

/// Signed arbitrary-precision rational used for intermediate arithmetic.
pub type Rat = num_rational::BigRational;

pub use extrat::rat_to_f64;

/// `p/q` as a signed rational.
pub fn rat(p: i64, q: i64) -> Rat {
    Rat::new(p.into(), q.into())
}
