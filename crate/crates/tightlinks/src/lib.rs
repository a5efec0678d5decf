//! Tight (ropelength-critical) link configurations and a discrete
//! criticality verifier.
//!
//! The library has two halves:
//!
//! * Constructors for explicit critical configurations — the critical
//!   tau-clasp, a critical Borromean-rings configuration, and a small
//!   catalog of comparison fixtures (chains, wrapped polygons, covered
//!   circles, naive clasps).  These are produced from their defining
//!   integrals and nonlinear equations, not from stored coordinates.
//! * A verifier that takes any discretized configuration (polygonal
//!   components, endpoint constraints, half-space obstacles), finds its
//!   struts, and checks whether a nonnegative strut measure balances the
//!   discrete curvature force.  Criticality reduces to feasibility of a
//!   nonnegative least-squares system.

pub mod balance;
pub mod borromean;
pub mod catalog;
pub mod clasp;
pub mod error;
pub mod geometry;
pub mod numerics;

pub use error::{Error, Result};
