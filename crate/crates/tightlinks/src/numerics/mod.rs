//! Shared numerical kernels: adaptive quadrature, root finding, a damped
//! Newton solver, and a nonnegative least-squares solver.

mod brent;
mod newton;
mod nnls;
mod quad;

pub use brent::brent;
pub use newton::{newton_nd, NewtonConfig};
pub use nnls::{nnls, nnls_sparse, nnls_sparse_warm};
pub use quad::{integrate, Quadrature};
