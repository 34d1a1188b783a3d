//! Semiclassical coefficients of the Riesz mean
//! `Σ(Λ − λ_n)₊ = L¹|Ω|Λ^{1+d/2s} − L²|∂Ω|Λ^{1+(d−1)/2s} + o(…)`
//! and their conversion to eigenvalue-sum (Cesàro) coefficients.
//!
//! L² has three routes, all built on the same [`HalfLineModel`]:
//! - `K`-integral: `∫₀^T K` by nested quadrature plus the closed-form tail `∫_T^∞ K`;
//! - eigenfunction form: `∫ I_λ (1+λ²)^{−(d−1)/2} dλ` with the t-integral done per λ;
//! - ζ-route: `c_d ∫₀¹ ρ^{d−2} ζ(ρ^{−2s}) dρ`.

use core::f64::consts::PI;

#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::error::{domain, Result};
use crate::halfline::{layer_k, layer_tail, tangential_constant, DirichletFamily, EigenFamily, FractionalOrder, HalfLineModel};
use crate::quadcore::{integrate, integrate_breaks, sphere_area, IntegralResult, OscillatoryPolicy, QuadratureSpec};

/// Split point of the K-route: `∫₀^T K` numerically, `∫_T^∞ K` in closed form.
pub const K_SPLIT: f64 = 1.0;
/// Truncation used when the oscillatory tail is not handled analytically.
pub const K_TRUNCATION: f64 = 20.0;

/// L¹_{s,d} = (2π)^{−d} ∫ (|p|^{2s} − 1)₋ dp = |𝕊^{d−1}|/(2π)^d · 2s/(d(d+2s)).
pub fn l1(order: FractionalOrder) -> f64 {
    l1_sd(order.s, order.d).unwrap_or(f64::NAN)
}

/// [`l1`] for any dimension d ≥ 1 and 0 < s ≤ 1 (the lattice checks also run in 1D).
pub fn l1_sd(s: f64, d: u32) -> Result<f64> {
    if d == 0 || !(s > 0.0 && s <= 1.0) {
        return Err(crate::error::domain("L¹ needs d ≥ 1 and 0 < s ≤ 1"));
    }
    let area = sphere_area(d as i32 - 1)?;
    let df = d as f64;
    Ok(area / (2.0 * PI).powi(d as i32) * 2.0 * s / (df * (df + 2.0 * s)))
}

/// L¹ by radial quadrature of `(1 − ρ^{2s}) ρ^{d−1}` instead of the antiderivative.
pub fn l1_quadrature(order: FractionalOrder, spec: &QuadratureSpec) -> Result<IntegralResult> {
    let (s, d) = (order.s, order.d as f64);
    let c = sphere_area(order.d as i32 - 1)? / (2.0 * PI).powi(order.d as i32);
    let r = integrate(|rho| (1.0 - rho.powf(2.0 * s)) * rho.powf(d - 1.0), 0.0, 1.0, spec)?;
    Ok(IntegralResult {
        value: c * r.value,
        err_estimate: c * r.err_estimate,
        evaluations: r.evaluations,
    })
}

/// `∫₀^∞ K(t) dt` for any eigenfunction family, respecting the oscillatory policy:
/// closed-form tail after [`K_SPLIT`], Cesàro mean of partial integrals over
/// `[T, 2T]` with `T =` [`K_TRUNCATION`], or plain truncation at `2T`.
pub fn layer_integral<F: EigenFamily + ?Sized>(fam: &F, d: u32, quad: &QuadratureSpec) -> Result<IntegralResult> {
    let mut fail = None;
    let mut k = |t: f64| match layer_k(fam, d, t, quad) {
        Ok(v) => v.value,
        Err(e) => {
            fail = Some(e);
            0.0
        }
    };
    let t = K_TRUNCATION;
    let out = match quad.oscillatory_policy {
        OscillatoryPolicy::ClosedFormTail => {
            let head = integrate_breaks(&mut k, &[0.0, 0.1, K_SPLIT], quad)?;
            head + layer_tail(fam, d, K_SPLIT, quad)?
        }
        OscillatoryPolicy::AveragedTail => {
            let head = integrate_breaks(&mut k, &[0.0, 0.1, 1.0, 5.0, t], quad)?;
            // (1/T)∫_T^{2T} ∫₀^τ K dτ = ∫₀^T K + (1/T)∫_T^{2T} (2T − t) K(t) dt
            let avg = integrate_breaks(|u| (2.0 * t - u) / t * k(u), &[t, 1.5 * t, 2.0 * t], quad)?;
            head + avg
        }
        OscillatoryPolicy::None => integrate_breaks(&mut k, &[0.0, 0.1, 1.0, 5.0, t, 2.0 * t], quad)?,
    };
    match fail {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

/// L²_{s,d} = ∫₀^∞ K(t) dt (canonical route).
pub fn l2_via_k(model: &HalfLineModel, quad: &QuadratureSpec) -> Result<IntegralResult> {
    layer_integral(model, model.order.d, quad)
}

/// `∫₀^∞ I_λ (1+λ²)^{−p} dλ` where `I_λ` is the regular part of `∫₀^∞(1 − 2F_λ²)`.
fn weighted_i(model: &HalfLineModel, p: f64, quad: &QuadratureSpec) -> Result<IntegralResult> {
    let f = |l: f64| if l > 0.0 { model.i_reg(l) * (1.0 + l * l).powf(-p) } else { model.i_reg(0.0) };
    let mut breaks = alloc::vec![0.0];
    let mut b = 1e-4;
    while b <= 1.0e4 {
        breaks.push(b);
        b *= 10.0;
    }
    let body = integrate_breaks(f, &breaks, quad)?;
    let far = integrate(f, 1.0e4, f64::INFINITY, quad)?;
    Ok(body + far)
}

/// L²_{s,d} = 4s/((d−1+2s)(d−1)) · |𝕊^{d−2}|/(2π)^d · [π/4 + ∫₀^∞ I_λ (1+λ²)^{−(d−1)/2} dλ].
///
/// The `π/4` is the δ(λ)-mass of `∫₀^∞ cos(2λt + 2ϑ_λ) dt` at the bottom of the spectrum.
pub fn l2_via_eigenfunctions(model: &HalfLineModel, quad: &QuadratureSpec) -> Result<IntegralResult> {
    let (s, d) = (model.order.s, model.order.d);
    let dm = d as f64 - 1.0;
    let pre = 4.0 * s / ((dm + 2.0 * s) * dm) * sphere_area(d as i32 - 2)? / (2.0 * PI).powi(d as i32);
    let r = weighted_i(model, 0.5 * dm, quad)?;
    Ok(IntegralResult {
        value: pre * (0.25 * PI + r.value),
        err_estimate: pre * r.err_estimate,
        evaluations: r.evaluations,
    })
}

/// L²_{s,d} = ∫_{ℝ^{d−1}} ζ(|p′|^{−2s}) dp′/(2π)^{d−1} = c_d ∫₀¹ ρ^{d−2} ζ(ρ^{−2s}) dρ.
pub fn l2_via_zeta(model: &HalfLineModel, quad: &QuadratureSpec) -> Result<IntegralResult> {
    let (s, d) = (model.order.s, model.order.d);
    let cd = tangential_constant(d)?;
    let mut fail = None;
    let mut inner_err = 0.0;
    let r = integrate_breaks(
        |rho| {
            if rho <= 0.0 || rho >= 1.0 {
                return 0.0;
            }
            match model.zeta_shift(rho.powf(-2.0 * s)) {
                Ok(z) => {
                    let w = rho.powi(d as i32 - 2);
                    inner_err += w * z.err_estimate;
                    w * z.value
                }
                Err(e) => {
                    fail = Some(e);
                    0.0
                }
            }
        },
        &[0.0, 1e-4, 1e-2, 0.1, 0.5, 0.9, 1.0],
        quad,
    )?;
    if let Some(e) = fail {
        return Err(e);
    }
    Ok(IntegralResult {
        value: cd * r.value,
        err_estimate: cd * (r.err_estimate + inner_err / r.evaluations.max(1) as f64),
        evaluations: r.evaluations,
    })
}

/// L²_{1,d} of the Dirichlet Laplacian, through the same K-machinery with `F_λ = sin(λt)`.
pub fn l2_dirichlet(d: u32, quad: &QuadratureSpec) -> Result<IntegralResult> {
    layer_integral(&DirichletFamily, d, quad)
}

/// L̃²_{s,d} = s(d+1)/(d−1+2s) · L²_{1,d}: the second coefficient for `(−Δ_Ω^D)^s`.
pub fn l2_dirichlet_power(order: FractionalOrder, quad: &QuadratureSpec) -> Result<IntegralResult> {
    let (s, d) = (order.s, order.d as f64);
    let f = s * (d + 1.0) / (d - 1.0 + 2.0 * s);
    let r = l2_dirichlet(order.d, quad)?;
    Ok(IntegralResult {
        value: f * r.value,
        err_estimate: f * r.err_estimate,
        evaluations: r.evaluations,
    })
}

/// Which route produced the reported L².
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum L2Route {
    KIntegral,
    EigenfunctionForm,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct WeylErrors {
    pub l1: f64,
    pub l2: f64,
    pub l2_tilde: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeylCoefficients {
    pub order: FractionalOrder,
    pub l1: f64,
    pub l2: f64,
    pub l2_route: L2Route,
    pub l2_tilde: f64,
    pub err: WeylErrors,
}

impl WeylCoefficients {
    /// L¹, L² by `route` and L̃² for one order; `model` must match `order`.
    pub fn compute(model: &HalfLineModel, route: L2Route, quad: &QuadratureSpec) -> Result<Self> {
        let order = model.order;
        let l1q = l1_quadrature(order, quad)?;
        let l2 = match route {
            L2Route::KIntegral => l2_via_k(model, quad)?,
            L2Route::EigenfunctionForm => l2_via_eigenfunctions(model, quad)?,
        };
        let tilde = l2_dirichlet_power(order, quad)?;
        let l1v = l1(order);
        Ok(WeylCoefficients {
            order,
            l1: l1v,
            l2: l2.value,
            l2_route: route,
            l2_tilde: tilde.value,
            err: WeylErrors {
                l1: (l1v - l1q.value).abs() + l1q.err_estimate,
                l2: l2.err_estimate,
                l2_tilde: tilde.err_estimate,
            },
        })
    }
}

/// Both sides of the Cesàro ↔ Riesz equivalence
/// `Σ_{k≤N} λ_k = A N^{a+1} + B N^{b+1}` ⇔ `Σ(Λ−λ_k)₊ = C Λ^{(1+a)/a} − D Λ^{(1+b)/a}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RieszCoefficients {
    pub a_coef: f64,
    pub b_coef: f64,
    pub a: f64,
    pub b: f64,
    pub c_coef: f64,
    pub d_coef: f64,
}

impl RieszCoefficients {
    pub fn from_sums(a_coef: f64, b_coef: f64, a: f64, b: f64) -> Result<Self> {
        let (c_coef, d_coef) = cesaro_riesz_convert(a_coef, b_coef, a, b)?;
        Ok(RieszCoefficients { a_coef, b_coef, a, b, c_coef, d_coef })
    }

    pub fn from_riesz(c_coef: f64, d_coef: f64, a: f64, b: f64) -> Result<Self> {
        let (a_coef, b_coef) = riesz_cesaro_invert(c_coef, d_coef, a, b)?;
        Ok(RieszCoefficients { a_coef, b_coef, a, b, c_coef, d_coef })
    }
}

/// The second-order exponent `b` only matters when the second coefficient is nonzero;
/// with it zero the equivalence is the one-term statement, valid for any `a > 0`.
fn check_exponents(a: f64, b: f64, second: f64) -> Result<()> {
    if !(a > 0.0) {
        return Err(domain("exponents need a > 0"));
    }
    if second == 0.0 || (a - 1.0 < b && b < a) {
        Ok(())
    } else {
        Err(domain("exponents need −1 < a−1 < b < a"))
    }
}

/// (A, B, a, b) ↦ (C, D) with `C = A^{−1/a} a (a+1)^{−(1+a)/a}`, `D = B (A(a+1))^{−(1+b)/a}`.
pub fn cesaro_riesz_convert(a_coef: f64, b_coef: f64, a: f64, b: f64) -> Result<(f64, f64)> {
    check_exponents(a, b, b_coef)?;
    if !(a_coef > 0.0) || !b_coef.is_finite() {
        return Err(domain("need A > 0 and finite B"));
    }
    let c = a_coef.powf(-1.0 / a) * a * (a + 1.0).powf(-(1.0 + a) / a);
    let d = b_coef * (a_coef * (a + 1.0)).powf(-(1.0 + b) / a);
    Ok((c, d))
}

/// Inverse of [`cesaro_riesz_convert`].
pub fn riesz_cesaro_invert(c_coef: f64, d_coef: f64, a: f64, b: f64) -> Result<(f64, f64)> {
    check_exponents(a, b, d_coef)?;
    if !(c_coef > 0.0) || !d_coef.is_finite() {
        return Err(domain("need C > 0 and finite D"));
    }
    let a_coef = (c_coef * (a + 1.0).powf((1.0 + a) / a) / a).powf(-a);
    let b_coef = d_coef * (a_coef * (a + 1.0)).powf((1.0 + b) / a);
    Ok((a_coef, b_coef))
}

/// Exponents `(a, b) = (2s/d, (2s−1)/d)` of the eigenvalue sums of the fractional Laplacian.
pub fn fractional_exponents(order: FractionalOrder) -> (f64, f64) {
    let d = order.d as f64;
    (2.0 * order.s / d, (2.0 * order.s - 1.0) / d)
}

/// Universal coefficients `(C⁽¹⁾, C⁽²⁾)` of
/// `(1/N)Σλ_n = C⁽¹⁾|Ω|^{−2s/d}N^{2s/d} + C⁽²⁾|∂Ω||Ω|^{−(d−1+2s)/d}N^{(2s−1)/d}`,
/// obtained from `(L¹, L²)` by inverting the Riesz-side relation for a domain with the given
/// volume and surface. The result does not depend on them beyond rounding.
pub fn eigenvalue_sum_coefficients_from(order: FractionalOrder, l1: f64, l2: f64, volume: f64, surface: f64) -> Result<(f64, f64)> {
    if !(volume > 0.0 && surface > 0.0) {
        return Err(domain("volume and surface must be positive"));
    }
    let (a, b) = fractional_exponents(order);
    let (a_coef, b_coef) = riesz_cesaro_invert(l1 * volume, l2 * surface, a, b)?;
    let d = order.d as f64;
    let c1 = a_coef * volume.powf(2.0 * order.s / d);
    let c2 = b_coef * volume.powf((d - 1.0 + 2.0 * order.s) / d) / surface;
    Ok((c1, c2))
}

/// As [`eigenvalue_sum_coefficients_from`], computing L¹ and L² (K-route) first.
pub fn eigenvalue_sum_coefficients(order: FractionalOrder, volume: f64, surface: f64, quad: &QuadratureSpec) -> Result<(f64, f64)> {
    let model = HalfLineModel::with_quad(order, *quad)?;
    let l2 = l2_via_k(&model, quad)?;
    eigenvalue_sum_coefficients_from(order, l1(order), l2.value, volume, surface)
}
