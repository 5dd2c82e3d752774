//! Simulation and verification toolkit for non-local flows of strictly convex
//! plane curves.
//!
//! Curves are represented by samples of their support function on a uniform
//! tangent-angle grid. On top of that representation the crate provides:
//!
//! - [`geometry`]: static quantities (length, area, curvature bounds, inradius)
//!   and the classical inequality checks between them,
//! - [`spectral`]: the exact closed-form evolution of the flow in harmonic
//!   coordinates, used as an oracle,
//! - [`solver`]: explicit RK4 time steppers for the support-function and
//!   curvature forms of the flow under pluggable speed laws,
//! - [`diagnostics`]: scalar time series, decay-rate fits, and solver-vs-oracle
//!   comparison reports.

pub mod diagnostics;
mod error;
pub mod fourier;
pub mod geometry;
pub mod solver;
pub mod spectral;

pub use error::{Error, Result};

/// Formats a float with 17 significant digits, enough to round-trip `f64`.
pub fn fmt_g17(x: f64) -> String {
    format!("{x:.16e}")
}
