//! Boundary-layer function `K(t)` for any half-line eigenfunction family.
//!
//! With `μ = r^{−2s}` and `Λ(r) = √(r^{−2} − 1)`,
//! `K(t) = c_d ∫₀¹ r^{d−1+2s} (1/π)∫₀^{Λ(r)} (μ − ω(λ)) (1 − 2F_λ(tr)²) dλ dr`,
//! `c_d = |𝕊^{d−2}|/(2π)^{d−1}`. The same code serves the fractional model and the
//! Dirichlet family `F_λ = sin(λt)` (s = 1).

use alloc::vec::Vec;
use core::f64::consts::PI;

#[cfg(not(feature = "std"))]
use num_traits::Float;

use super::model::edge_integral;
use super::HalfLineModel;
use crate::error::{domain, Result};
use crate::quadcore::{integrate_breaks, sphere_area, IntegralResult, QuadratureSpec};

/// A complete family of half-line generalized eigenfunctions `F_λ` with eigenvalues `(1+λ²)^s`.
pub trait EigenFamily {
    fn s(&self) -> f64;
    /// 1 − 2F_λ(x)²
    fn defect(&self, lambda: f64, x: f64) -> f64;
    /// Regular part of `∫_X^∞ (1 − 2F_λ(x)²) dx`. The distributional remainder is
    /// `(π/4)δ(λ)` on λ ≥ 0 for every family with `F_λ(0) = 0`.
    fn defect_tail(&self, lambda: f64, x: f64) -> f64;
}

impl EigenFamily for HalfLineModel {
    fn s(&self) -> f64 {
        self.order.s
    }

    fn defect(&self, lambda: f64, x: f64) -> f64 {
        let f = self.f(lambda, x);
        1.0 - 2.0 * f * f
    }

    fn defect_tail(&self, lambda: f64, x: f64) -> f64 {
        HalfLineModel::defect_tail(self, lambda, x)
    }
}

/// Dirichlet Laplacian on the half-line: `F_λ(t) = sin(λt)`, s = 1.
#[derive(Debug, Clone, Copy, Default)]
pub struct DirichletFamily;

impl EigenFamily for DirichletFamily {
    fn s(&self) -> f64 {
        1.0
    }

    fn defect(&self, lambda: f64, x: f64) -> f64 {
        (2.0 * lambda * x).cos()
    }

    fn defect_tail(&self, lambda: f64, x: f64) -> f64 {
        -(2.0 * lambda * x).sin() / (2.0 * lambda)
    }
}

/// c_d = |𝕊^{d−2}|/(2π)^{d−1}.
pub fn tangential_constant(d: u32) -> Result<f64> {
    if d < 2 {
        return Err(domain("dimension needs d ≥ 2"));
    }
    Ok(sphere_area(d as i32 - 2)? / (2.0 * PI).powi(d as i32 - 1))
}

const R_BREAKS: [f64; 11] = [0.0, 1e-6, 1e-4, 1e-3, 1e-2, 0.05, 0.2, 0.5, 0.8, 0.95, 1.0];

// Inner λ-integrals run tighter in relative terms; the absolute floor stays, since the
// tabulated F_λ carries noise near 1e−11 and a lower floor only burns evaluations.
fn inner_spec(spec: &QuadratureSpec) -> QuadratureSpec {
    QuadratureSpec {
        rel_tol: 0.1 * spec.rel_tol,
        ..*spec
    }
}

/// K(t) for t ≥ 0.
pub fn layer_k<F: EigenFamily + ?Sized>(fam: &F, d: u32, t: f64, spec: &QuadratureSpec) -> Result<IntegralResult> {
    if !(t >= 0.0) {
        return Err(domain("K needs t ≥ 0"));
    }
    let cd = tangential_constant(d)?;
    let s = fam.s();
    let ispec = inner_spec(spec);
    let mut inner_err = 0.0;
    let mut fail = None;
    let outer = integrate_breaks(
        |r| {
            if r <= 0.0 || r >= 1.0 {
                return 0.0;
            }
            let mu = r.powf(-2.0 * s);
            let edge = ((1.0 - r) * (1.0 + r)).sqrt() / r;
            let x = t * r;
            match edge_integral(|l| (mu - omega_s(l, s)) * fam.defect(l, x), edge, 2.0 * x, &ispec) {
                Ok(v) => {
                    let w = r.powf(d as f64 - 1.0 + 2.0 * s) / PI;
                    inner_err += w * v.err_estimate;
                    w * v.value
                }
                Err(e) => {
                    fail = Some(e);
                    0.0
                }
            }
        },
        &R_BREAKS,
        spec,
    )?;
    if let Some(e) = fail {
        return Err(e);
    }
    Ok(IntegralResult {
        value: cd * outer.value,
        err_estimate: cd * (outer.err_estimate + inner_err / outer.evaluations.max(1) as f64),
        evaluations: outer.evaluations,
    })
}

/// ∫_T^∞ K(t) dt, with the t-integral done per λ in closed form:
/// `c_d ∫₀¹ r^{d−2+2s} (1/π)[ ∫₀^Λ (μ−ω) J_λ(Tr) dλ + (π/4)(μ−1) ] dr`.
pub fn layer_tail<F: EigenFamily + ?Sized>(fam: &F, d: u32, t_cut: f64, spec: &QuadratureSpec) -> Result<IntegralResult> {
    if !(t_cut >= 0.0) {
        return Err(domain("tail cut needs T ≥ 0"));
    }
    let cd = tangential_constant(d)?;
    let s = fam.s();
    let ispec = inner_spec(spec);
    let mut fail = None;
    let outer = integrate_breaks(
        |r| {
            if r <= 0.0 || r >= 1.0 {
                return 0.0;
            }
            let mu = r.powf(-2.0 * s);
            let edge = ((1.0 - r) * (1.0 + r)).sqrt() / r;
            let x = t_cut * r;
            match edge_integral(|l| (mu - omega_s(l, s)) * fam.defect_tail(l, x), edge, 2.0 * x, &ispec) {
                Ok(v) => r.powf(d as f64 - 2.0 + 2.0 * s) / PI * (v.value + 0.25 * PI * (mu - 1.0)),
                Err(e) => {
                    fail = Some(e);
                    0.0
                }
            }
        },
        &R_BREAKS,
        spec,
    )?;
    if let Some(e) = fail {
        return Err(e);
    }
    Ok(IntegralResult {
        value: cd * outer.value,
        err_estimate: cd * outer.err_estimate,
        evaluations: outer.evaluations,
    })
}

fn omega_s(lambda: f64, s: f64) -> f64 {
    (s * (lambda * lambda).ln_1p()).exp()
}

/// One row of the boundary-layer table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LayerRow {
    pub t: f64,
    pub k: f64,
    /// ∫₀^t K
    pub cumulative: f64,
    pub err: f64,
}

/// `K(t)` on the grid `0, t_1 < … < t_n = T` with running integral; the closing value adds
/// the closed-form tail `∫_T^∞ K`.
#[derive(Debug, Clone, PartialEq)]
pub struct LayerTable {
    pub rows: Vec<LayerRow>,
    pub tail: IntegralResult,
    /// ∫₀^∞ K
    pub total: f64,
    pub total_err: f64,
}

/// Log grid `0, t_min·q^k, …, t_max` used for layer tables.
pub fn layer_grid(t_min: f64, t_max: f64, per_decade: usize) -> Vec<f64> {
    let mut g = alloc::vec![0.0];
    let n = ((t_max / t_min).log10() * per_decade as f64).ceil() as usize;
    for k in 0..=n {
        g.push(t_min * (t_max / t_min).powf(k as f64 / n as f64));
    }
    g
}

pub fn layer_table<F: EigenFamily + ?Sized>(fam: &F, d: u32, grid: &[f64], spec: &QuadratureSpec) -> Result<LayerTable> {
    if grid.len() < 2 || grid[0] != 0.0 || grid.windows(2).any(|p| !(p[1] > p[0])) {
        return Err(domain("layer grid must start at 0 and increase"));
    }
    let kspec = QuadratureSpec {
        rel_tol: spec.rel_tol,
        abs_tol: spec.abs_tol,
        ..*spec
    };
    let mut rows = Vec::with_capacity(grid.len());
    let mut cum = 0.0;
    let mut err = 0.0;
    let k0 = layer_k(fam, d, 0.0, &kspec)?;
    rows.push(LayerRow {
        t: 0.0,
        k: k0.value,
        cumulative: 0.0,
        err: 0.0,
    });
    for p in grid.windows(2) {
        let mut fail = None;
        let seg = integrate_breaks(
            |t| match layer_k(fam, d, t, &kspec) {
                Ok(v) => v.value,
                Err(e) => {
                    fail = Some(e);
                    0.0
                }
            },
            &[p[0], p[1]],
            spec,
        )?;
        if let Some(e) = fail {
            return Err(e);
        }
        cum += seg.value;
        err += seg.err_estimate;
        rows.push(LayerRow {
            t: p[1],
            k: layer_k(fam, d, p[1], &kspec)?.value,
            cumulative: cum,
            err,
        });
    }
    let tail = layer_tail(fam, d, *grid.last().expect("nonempty grid"), spec)?;
    Ok(LayerTable {
        rows,
        total: cum + tail.value,
        total_err: err + tail.err_estimate,
        tail,
    })
}

impl HalfLineModel {
    /// K(t) in the model's own dimension with its quadrature contract.
    pub fn k_layer(&self, t: f64) -> Result<IntegralResult> {
        layer_k(self, self.order.d, t, &self.quad)
    }
}
