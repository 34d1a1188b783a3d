//! The model operator `A⁺ = (−d²/dt²+1)^s` on L²(ℝ₊) (functions extended by zero)
//! and its whole-line analogue `A`.
//!
//! `A⁺` is diagonalized by generalized eigenfunctions
//! `F_λ(x) = sin(λx + ϑ_λ) − G_λ(x)` with eigenvalue `(1+λ²)^s`, where
//! `G_λ(x) = ∫₁^∞ e^{−xξ} γ_λ(ξ) dξ` is completely monotone with `G_λ(0) = sin ϑ_λ`,
//! so `F_λ(0) = 0`.
//!
//! Free functions here evaluate everything from scratch by adaptive quadrature.
//! [`HalfLineModel`] tabulates `ϑ_λ` and `γ_λ` once per order and is the fast path for
//! kernels, `K(t)` and the spectral shifts.

mod family;
mod model;
mod phi;

use core::f64::consts::PI;

#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::error::{domain, Result};
use crate::quadcore::{integrate_breaks, QuadratureSpec};

pub use family::{layer_grid, layer_k, layer_table, layer_tail, tangential_constant, DirichletFamily, EigenFamily, LayerRow, LayerTable};
pub use model::{HalfLineModel, TruncatedShift};
pub use phi::PhiGrid;

/// The fractional order `s ∈ (0,1)` together with the ambient dimension `d ≥ 2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FractionalOrder {
    pub s: f64,
    pub d: u32,
}

impl FractionalOrder {
    pub fn new(s: f64, d: u32) -> Result<Self> {
        if !(s > 0.0 && s < 1.0) {
            return Err(domain("fractional order needs 0 < s < 1"));
        }
        if d < 2 {
            return Err(domain("dimension needs d ≥ 2"));
        }
        Ok(FractionalOrder { s, d })
    }
}

fn check_s(s: f64) -> Result<()> {
    if s > 0.0 && s < 1.0 {
        Ok(())
    } else {
        Err(domain("fractional order needs 0 < s < 1"))
    }
}

/// ψ(E) = (E+1)^s − 1.
pub fn psi(e: f64, s: f64) -> f64 {
    (s * e.ln_1p()).exp_m1()
}

/// ψ′(E) = s (E+1)^{s−1}.
pub fn dpsi(e: f64, s: f64) -> f64 {
    s * ((s - 1.0) * e.ln_1p()).exp()
}

/// ω(λ) = (1+λ²)^s, the eigenvalue carried by `F_λ`.
pub fn omega(lambda: f64, s: f64) -> f64 {
    (s * (lambda * lambda).ln_1p()).exp()
}

/// Spectral edge Λ(μ) = √(μ^{1/s} − 1); zero for μ ≤ 1.
pub fn spectral_edge(mu: f64, s: f64) -> f64 {
    if mu <= 1.0 {
        0.0
    } else {
        ((mu.ln() / s).exp_m1()).sqrt()
    }
}

/// (x−y)/((1+x)^s − (1+y)^s), symmetric and accurate as x → y.
pub(crate) fn q_ratio(x: f64, y: f64, s: f64) -> f64 {
    let (hi, lo) = if x >= y { (x, y) } else { (y, x) };
    let d = (hi - lo) / (1.0 + lo);
    let r = if d < 1e-8 {
        (1.0 + 0.5 * (1.0 - s) * d) / s
    } else {
        d / (s * d.ln_1p()).exp_m1()
    };
    ((1.0 - s) * lo.ln_1p()).exp() * r
}

/// ln ψ_λ(E), where ψ_λ(E) = (1 − E/λ²)/(1 − ψ(E)/ψ(λ²)).
pub(crate) fn ln_psi_lambda(lambda: f64, e: f64, s: f64) -> f64 {
    let l2 = lambda * lambda;
    (psi(l2, s) / l2 * q_ratio(l2, e, s)).ln()
}

/// Phase shift ϑ_λ ∈ [0, π(1−s)/4).
///
/// Evaluated in the folded form `(1/π)∫₀¹ ln(q(λ²/z², λ²)/q(λ², λ²z²))/(1−z²) dz`,
/// substituted `z = v²` to tame the logarithm at `z = 0`.
pub fn theta(lambda: f64, s: f64) -> Result<f64> {
    theta_with(lambda, s, &QuadratureSpec::default().with_rel_tol(1e-11).with_abs_tol(1e-14))
}

pub(crate) fn theta_with(lambda: f64, s: f64, spec: &QuadratureSpec) -> Result<f64> {
    check_s(s)?;
    if !(lambda > 0.0) {
        return Err(domain("theta needs λ > 0"));
    }
    let l2 = lambda * lambda;
    let f = |v: f64| {
        let z = v * v;
        let z2 = z * z;
        let num = q_ratio(l2 / z2, l2, s);
        let den = q_ratio(l2, l2 * z2, s);
        2.0 * v * (num / den).ln() / (1.0 - z2)
    };
    let r = integrate_breaks(f, &[0.0, 0.5, 0.9, 1.0], spec)?;
    Ok(r.value / PI)
}

/// Limit of ϑ_λ as λ → ∞.
pub fn theta_infinity(s: f64) -> f64 {
    0.25 * PI * (1.0 - s)
}

/// φ_λ(t) = exp((1/π)∫₀^∞ t/(t²+ζ²) ln ψ_λ(ζ²) dζ), by adaptive quadrature in `u = ln ζ`.
pub fn phi_fn(lambda: f64, t: f64, s: f64) -> Result<f64> {
    check_s(s)?;
    if !(lambda > 0.0) || !(t >= 0.0) {
        return Err(domain("phi_fn needs λ > 0, t ≥ 0"));
    }
    if t == 0.0 {
        return Ok(1.0);
    }
    let c = t.ln();
    let ll = lambda.ln();
    // kernel t ζ/(t²+ζ²) = 1/(2 cosh(u − ln t)); split symmetrically around ζ = λ
    let f = |u: f64| {
        let k = 0.5 / (u - c).cosh();
        if k == 0.0 {
            0.0
        } else {
            k * ln_psi_lambda(lambda, (2.0 * u).exp(), s)
        }
    };
    let mut breaks = alloc::vec![c - 45.0, c, c + 45.0];
    for p in [ll - 1.0, ll, ll + 1.0] {
        if p > c - 45.0 && p < c + 45.0 {
            breaks.push(p);
        }
    }
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    let spec = QuadratureSpec::default().with_rel_tol(1e-12).with_abs_tol(1e-15);
    let r = integrate_breaks(f, &breaks, &spec)?;
    Ok((r.value / PI).exp())
}

/// Im-ratio prefactor of γ_λ(ξ): (ξ²−1)^s sin πs / |(1+λ²)^s − (ξ²−1)^s e^{iπs}|².
fn gamma_ratio(lambda: f64, xi: f64, s: f64) -> f64 {
    let x = xi - 1.0;
    let w = (s * (x * (2.0 + x)).ln()).exp();
    let a = omega(lambda, s);
    let (sn, cs) = (PI * s).sin_cos();
    let den = (a - w * cs).powi(2) + (w * sn).powi(2);
    w * sn / den
}

/// γ_λ(ξ) from the ratio and a precomputed φ_λ(ξ).
pub(crate) fn gamma_from_phi(lambda: f64, xi: f64, s: f64, phi: f64) -> f64 {
    if xi <= 1.0 {
        return 0.0;
    }
    let l2 = lambda * lambda;
    (psi(l2, s) * dpsi(l2, s)).sqrt() * gamma_ratio(lambda, xi, s) / (PI * phi)
}

/// Density γ_λ(ξ) of the Laplace part of `F_λ`; zero for ξ < 1.
pub fn gamma_density(lambda: f64, xi: f64, s: f64) -> Result<f64> {
    check_s(s)?;
    if !(lambda > 0.0) || !(xi > 0.0) {
        return Err(domain("gamma_density needs λ > 0, ξ > 0"));
    }
    if xi <= 1.0 {
        return Ok(0.0);
    }
    Ok(gamma_from_phi(lambda, xi, s, phi_fn(lambda, xi, s)?))
}

/// Closed form of g_λ(t) = ∫₀^∞ e^{−tτ} G_λ(τ) dτ.
pub fn g_closed(lambda: f64, t: f64, s: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(domain("g_closed needs t > 0"));
    }
    let th = theta(lambda, s)?;
    let l2 = lambda * lambda;
    let r = (dpsi(l2, s) / psi(l2, s)).sqrt();
    let den = l2 + t * t;
    Ok((lambda * th.cos() + t * th.sin()) / den - l2 * r * phi_fn(lambda, t, s)? / den)
}

/// t → 0⁺ limit of g_λ: cos ϑ_λ/λ − √(ψ′(λ²)/ψ(λ²)).
pub fn g_closed_at_zero(lambda: f64, s: f64) -> Result<f64> {
    let th = theta(lambda, s)?;
    let l2 = lambda * lambda;
    Ok(th.cos() / lambda - (dpsi(l2, s) / psi(l2, s)).sqrt())
}

/// Diagonal of (A−μ)₋ on the line: (1/π)∫₀^∞ (μ − (1+λ²)^s)₊ dλ.
pub fn a_line(mu: f64, s: f64) -> Result<f64> {
    check_s(s)?;
    let edge = spectral_edge(mu, s);
    if edge == 0.0 {
        return Ok(0.0);
    }
    let spec = QuadratureSpec::default().with_rel_tol(1e-12).with_abs_tol(0.0);
    let r = integrate_breaks(|l| mu - omega(l, s), &[0.0, edge], &spec)?;
    Ok(r.value / PI)
}

/// Diagonal of the whole-line spectral projector, e(μ) = Λ(μ)/π.
pub fn e_line(mu: f64, s: f64) -> f64 {
    spectral_edge(mu, s) / PI
}

/// F_λ(x) by direct quadrature (no tables): ϑ by its integral, G by a ξ-rule built for this λ.
pub fn eigenfunction_f(lambda: f64, x: f64, s: f64) -> Result<f64> {
    check_s(s)?;
    if !(lambda > 0.0) || !(x >= 0.0) {
        return Err(domain("eigenfunction_f needs λ > 0, x ≥ 0"));
    }
    let th = theta(lambda, s)?;
    let rule = model::gamma_rule(lambda, s);
    let g: f64 = rule.nodes.iter().zip(&rule.weights).map(|(xi, w)| w * (-xi * x).exp()).sum();
    Ok((lambda * x + th).sin() - g)
}

#[cfg(test)]
mod tests;
