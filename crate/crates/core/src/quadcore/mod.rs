//! Deterministic numerical kernels shared by every other module.

mod adaptive;
mod rules;
mod special;

pub use adaptive::{integrate, integrate_breaks, integrate_oscillatory, laplace, IntegralResult, OscillatoryPolicy, QuadratureSpec};
pub use rules::{gauss_legendre, Rule};
pub use special::{ball_volume, c_sd, gamma_fn, ln_gamma, sphere_area};
