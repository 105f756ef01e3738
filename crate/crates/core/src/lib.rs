//! Spanning star forests with large stars.
//!
//! A star factor of a graph is a spanning forest whose components are all
//! stars. This crate builds star factors whose stars are large when the
//! minimum degree is large:
//!
//! * [`regular::star_factor_regular`] for d-regular graphs (random centers,
//!   resampled until every vertex sees between 1 and `6 + 6 ln d` of them,
//!   then quota matching);
//! * [`general::star_factor_general`] for any graph of minimum degree d
//!   (pruning, forced high-degree centers, rule-based classification with time
//!   labels, late random centers, time-respecting quota matching);
//! * [`basic::star_factor_basic`] as a baseline for small d.
//!
//! Supporting pieces: a resampling engine for bad-event systems
//! ([`resample`]), bipartite quota matching with Hall-violator certificates
//! ([`bmatch`]), instance generators ([`generators`]) and exact checking
//! ([`verify`]).

pub mod basic;
pub mod bmatch;
pub mod error;
pub mod factor;
pub mod general;
pub mod generators;
pub mod graph;
pub mod regular;
pub mod report;
pub mod resample;
pub mod verify;

pub use error::{Error, Result};
pub use factor::StarFactor;
pub use graph::{Graph, VertexSet};
