//! Exact-arithmetic laboratory for cluster mutations of skew-symmetric
//! matrices ("quivers").
//!
//! Everything here is computed over arbitrary-precision rationals: quiver
//! mutations, the per-carriage polynomial extensions of the mutation map,
//! the flip graph on sign patterns, symbolic invariance checking of
//! carriage-wise polynomial functions, and a degree-bounded linear-algebra
//! search for all such invariants.

pub mod error;
pub mod flip_graph;
pub mod invariant;
pub mod linalg;
pub mod orbit;
pub mod piecewise;
pub mod poly;
pub mod positions;
pub mod quiver;
pub mod rat;
pub mod rng;
pub mod search;

pub use error::{Error, Result};

pub use poly::{Monomial, Poly, PolyVec};
pub use quiver::{Quiver, Sign, SignPattern};
pub use rat::Rat;
