//! Exact computational toolkit for higher-dimensional expansion and
//! topological overlap of finite cell complexes with F2 coefficients.
//!
//! The crate is organized around a handful of building blocks:
//!
//! * [`complex`] — finite polyhedral/simplicial complexes, their augmented
//!   cochain complex, cochains and weighted norms;
//! * [`gf2`] — packed-bit linear algebra over F2, including exact
//!   minimum-weight coset search;
//! * [`metrics`] — cofilling constants, cohomological expansion, cosystoles,
//!   local sparsity and the overlap threshold derived from them;
//! * [`geometry`] — exact rational affine geometry in R^d and on the circle
//!   (general-position predicates, crossing parities);
//! * [`pairing`] — intersection-number pairings between a circle
//!   triangulation and a graph mapped into the circle;
//! * [`overlap`] — exact geometric overlap points for affine maps into R^1
//!   and R^2;
//! * [`homotopy`] — the chain-cochain homotopy engine that replays the
//!   overlap certificate construction step by step;
//! * [`io`] — text formats for complexes, maps, weights and pairings.
//!
//! All arithmetic on norms, coordinates and thresholds is exact rational
//! arithmetic ([`Rat`]); nothing in this crate goes through floating point.

// Error variants deliberately carry exact rationals and witness cochains.
#![allow(clippy::result_large_err, clippy::large_enum_variant)]

pub mod complex;
pub mod geometry;
pub mod gf2;
pub mod homotopy;
pub mod io;
pub mod metrics;
pub mod overlap;
pub mod pairing;
pub mod rational;
pub mod report;

/// Exact rational scalar used throughout the crate.
pub type Rat = num::BigRational;

pub use complex::{Cochain, ComplexSkeleton, WeightedNorm};
pub use gf2::{Gf2Matrix, Gf2Vec};
pub use rational::Ext;
