//! Compatibility analysis of austenite-martensite interfaces for
//! cubic-to-orthorhombic shape-memory alloys.
//!
//! The crate answers one geometric question: for which mixtures of
//! martensite variants can a planar interface with undistorted austenite
//! exist? It covers the classical case (austenite against a single
//! Type-II laminate) and the non-classical crossing-twins case, where a
//! compound laminate of fraction `Lambda` intersects the Type-II laminate
//! of fraction `lambda`. The admissible pairs `(lambda, Lambda)` trace
//! branch curves, and each branch point carries two habit-plane normals.
//!
//! Pipeline, bottom up:
//!
//! - [`mat3`]: hand-rolled 3x3 kernel (determinant, cofactor, inverse,
//!   symmetric eigendecomposition).
//! - [`variants`]: the six orthorhombic stretch matrices and the cubic
//!   point group.
//! - [`twinning`]: the twinning equation `R U_j - U_i = b (x) n`, twin
//!   classification, compound counterparts.
//! - [`interface`]: rank-one connections to the identity and the
//!   classical interface fraction lambda*.
//! - [`crossing`]: the four-variant parallelogram assembly, the reduced
//!   polynomial g(lambda, Lambda), branch solving and normal curves.
//! - [`checks`]: a named invariant suite over the assembled system.
//!
//! All types are immutable values and every function is a pure function
//! of its inputs, so everything is safe to use from multiple threads.

pub mod checks;
pub mod crossing;
pub mod error;
pub mod interface;
pub mod mat3;
pub mod twinning;
pub mod variants;

pub use error::{Error, Result};
pub use mat3::{Mat3, SymEig3, Vec3};
