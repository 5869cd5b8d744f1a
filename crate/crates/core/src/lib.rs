//! Exact, finite-precision computer algebra for restricted power series whose
//! exponents live in `Z[1/p]` or `Q`, with coefficients drawn from finite
//! levels of an eka^d tower `Z_p[p^{1/d^K}]` and its residue avatars.
//!
//! Everything here is pure and allocation-only, so the crate builds without
//! `std`. File formats, the command line, and the self-test harness live in
//! the companion `eka` crate.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod blowup;
pub mod cech;
pub mod coeff;
pub mod error;
pub mod eval;
pub mod exponent;
pub mod functors;
pub mod linalg;
pub mod series;

pub use coeff::{CoeffElement, RingDescriptor, RingKind, Valuation};
pub use error::{Error, Result};
pub use eval::{Algebra, RootTower};
pub use exponent::{ExpMode, Exponent, MultiExponent};
pub use series::{RestrictedSeries, RingContext};
