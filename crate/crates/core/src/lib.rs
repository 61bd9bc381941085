//! Divisor-class calculus for linear systems `L3(d; m1,…,mr)` of surfaces in
//! P³ through fat points lying on the quartic curve cut on a smooth quadric
//! by a second quadric.
//!
//! * [`divclass`]: classes on the blown-up threefold, quadric and plane.
//! * [`criteria`]: the non-speciality / base point free / very ample
//!   classifiers and their inductive certificates.
//! * [`oracle`]: brute-force verification by fat-point interpolation over a
//!   prime field.
//! * [`sweep`]: batch comparison of the two engines.

pub mod criteria;
pub mod divclass;
pub mod error;
pub mod oracle;
pub mod render;
pub mod sweep;

pub use divclass::{PlaneClass, QuadricClass, ThreefoldClass};
pub use error::{Error, Result};
