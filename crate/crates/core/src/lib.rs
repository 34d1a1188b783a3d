//! Two-term semiclassical coefficients for the restricted fractional Laplacian.
//!
//! The crate is `no_std` (with `alloc`) unless the default `std` feature is on.
//! All math goes through [`num_traits::Float`], backed by `libm` without `std`.
//!
//! Modules:
//! - [`quadcore`]: special functions, Gauss rules, adaptive quadrature, Laplace transforms.
//! - [`halfline`]: the model operator `(-d²/dt²+1)^s` on the half-line — phase shift,
//!   generalized eigenfunctions, kernels, boundary-layer function `K(t)`.
//! - [`constants`]: `L¹`, `L²` (three routes), the Dirichlet-power constant, Cesàro/Riesz conversion.
//! - [`lattice`]: dense lattice discretizations and operator-level property checks.
//! - [`localization`]: the multiscale partition of unity.
#![cfg_attr(not(feature = "std"), no_std)]
// `!(x > 0.0)` is used on purpose so NaN is rejected; rule tables keep their published digits.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

extern crate alloc;

pub mod constants;
pub mod error;
pub mod halfline;
pub mod lattice;
pub mod localization;
pub mod quadcore;

pub use error::{Error, Result};
pub use halfline::{FractionalOrder, HalfLineModel};
pub use quadcore::{IntegralResult, OscillatoryPolicy, QuadratureSpec};
