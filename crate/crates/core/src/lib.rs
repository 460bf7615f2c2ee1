//! Metric multigraphs with marked points and the combinatorics of their
//! moduli spaces.
//!
//! The crate has two halves:
//!
//! * the *metric graph* side: multigraphs given by dart sets with an
//!   orientation-reversing involution ([`graph`]), exact edge lengths and
//!   marking functions ([`metric`]), edge/forest contraction and the
//!   bridge-shrinking retraction ([`contraction`]), and the stratum
//!   combinatorics of the moduli space ([`strata`]);
//! * the *homology* side: the cubical model of the torus quotient
//!   `X_{m+1} = T^m / Z_2` ([`torus`]) together with exact linear algebra
//!   over GF(2) and Z ([`homology`]).
//!
//! All metric computations are generic over an exact scalar type (see
//! [`scalar::Scalar`]); the crate-level aliases [`Q`] and [`Q64`] pick
//! arbitrary-precision and 64-bit rationals respectively. No floating
//! point is used anywhere.

pub mod complex_io;
pub mod contraction;
pub mod graph;
pub mod homology;
pub mod metric;
pub mod scalar;
pub mod strata;
pub mod textfmt;
pub mod torus;

/// Arbitrary-precision rational scalar, the default instantiation.
pub type Q = num::BigRational;
/// Fixed-width rational scalar for lighter workloads.
pub type Q64 = num::rational::Rational64;

/// Metric marked graph over arbitrary-precision rationals.
pub type MetricMarkedGraphQ = metric::MetricMarkedGraph<Q>;
/// Point of the geometric realization, over arbitrary-precision rationals.
pub type DeltaPointQ = metric::DeltaPoint<Q>;

pub use graph::{DartId, Edge, Graph, GraphIso, MarkId, RawGraph, VertexId};
