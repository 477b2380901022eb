//! Linear water waves over a submerged two-dimensional body in deep water.
//!
//! Coordinates: `x2` points down into the fluid, the free surface is
//! `x2 = 0` and the fluid occupies `x2 > 0` outside the body.  The unknown
//! solves `-Δu = f` in the fluid, `∂u/∂n = g1` on the body contour, and
//! `-∂u/∂x2 - νu = g2` on the free surface, and radiates outgoing waves
//! `d± e^{∓iνx1 - νx2}` as `x1 → ±∞`.
//!
//! The crate covers the full pipeline: the geometric conditions on the body
//! contour, the explicit constants of the a priori bound, a boundary-integral
//! solver built on the free-surface Green's function, and numerical
//! validation of the integral identities and of the bound itself.

pub mod conditions;
pub mod constants;
pub mod error;
pub mod geometry;
pub mod greens;
mod multipole;
mod par;
pub mod quadrature;
pub mod solver;
pub mod special;
pub mod validation;

pub use error::{Error, Result};
pub use num_complex::Complex64;
