//! Finite graph bundles: a base graph, a fiber graph, and an edge-indexed
//! family of fiber automorphisms (a connection) determine a total graph
//! whose vertices are base-fiber pairs. This crate builds such bundles and
//! answers the questions that distinguish them from plain products:
//!
//! - [`bundle`] — connections, transports, holonomy, triviality with
//!   explicit witnesses, fixed fiber points, and gauge equivalence;
//! - [`walks`] — closed-walk counting, projections of bundle walks to base
//!   and fiber parts, shortest unbalanced loops, and the walk-count
//!   separation between a twisted bundle and its product;
//! - [`symmetry`] — canonical labeling, automorphism groups and orbits,
//!   vertex-transitivity, graph isomorphism, and the rotation map of
//!   cycle-based bundles;
//! - [`ricci`] — local frame certificates for flatness, their lift from
//!   base and fiber to the bundle, and the combined certificate that a
//!   bundle is flat but not vertex-transitive;
//! - [`examples`] — the named example catalog with expected properties;
//! - [`io`] — plain-text graph and connection formats plus DOT export.

#![forbid(unsafe_code)]

pub mod bundle;
pub mod error;
pub mod examples;
pub mod graph;
pub mod io;
pub mod perm;
pub mod ricci;
pub mod symmetry;
pub mod walks;

pub use bundle::{Bundle, Connection, Triviality};
pub use error::{Error, Result};
pub use graph::Graph;
pub use perm::Permutation;
