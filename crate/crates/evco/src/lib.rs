//! Exact computational toolkit for evenly convex sets and cone-ordered
//! set-valued maps over rational coordinate spaces.
//!
//! Sets are represented as finite systems of strict and weak linear
//! inequalities with rational coefficients ("e-polyhedra"), and set-valued
//! maps as finite families of graph pieces. All predicates are decided
//! exactly: the only numeric type in play is an arbitrary-precision rational.
//!
//! Layering, bottom up:
//! - [`rat`]: exact scalars and vectors.
//! - [`constraint`], [`polyhedron`]: inequality systems and their closure,
//!   emptiness, membership, and inclusion predicates.
//! - [`linalg`], [`lp`], [`fm`]: exact Gaussian elimination, simplex, and
//!   strict-aware Fourier-Motzkin projection.
//! - [`union`], [`faces`], [`geometry`]: finite unions, vertex/ray/face
//!   enumeration, separation, and the three hull operators.
//! - [`cone`], [`setvalued`]: ordering cones and K-epigraphs of set-valued
//!   maps, with K-hulls of maps.
//! - [`minorant`], [`conjugate`]: e-affine set-valued minorants and the
//!   conjugation/biconjugation calculus built on them.
//! - [`instance`], [`generate`], [`report`]: serialization schema, seeded
//!   instance generation, and machine-readable verification reports.

pub mod constraint;
pub mod cone;
pub mod conjugate;
pub mod error;
pub mod faces;
pub mod fm;
pub mod generate;
pub mod geometry;
pub mod instance;
pub mod linalg;
pub mod lp;
pub mod minorant;
pub mod polyhedron;
pub mod rat;
pub mod report;
pub mod setvalued;
pub mod union;

pub use error::{EvcoError, Result};
pub use rat::{rat, ExtRat, Rat, RatVector};
