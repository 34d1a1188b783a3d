//! Operator-level property checks on the lattice.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

#[cfg(not(feature = "std"))]
use num_traits::Float;
use num_complex::Complex64;

use super::dft::{cos_table, dft_2d, laplacian_symbol};
use super::eigen::eigh_dense;
use super::{build_dirichlet_power, build_restricted_fractional, eigen_decomposition, eigenvalues_sym, LatticeDomain};
use crate::constants::{l1, l1_sd};
use crate::error::{domain, Error, Result};
use crate::halfline::HalfLineModel;
use crate::localization::LocalizationFamily;
use crate::quadcore::c_sd;

/// Both sides of the Berezin–Li–Yau type bound for `Tr(φ H φ)₋`, `H = h^{2s}P M_s P − 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct BerezinReport {
    pub lhs: f64,
    /// L¹·Σφ²·Δ^d·h^{−d}.
    pub bound: f64,
    /// Σφ²·N^{−d}Σ_k(1 − h^{2s}σ_k^s)₊ — the same bound with the lattice symbol.
    pub lattice_bound: f64,
    pub holds: bool,
    pub holds_lattice: bool,
    /// (bound − lhs)/bound.
    pub slack: f64,
}

pub fn berezin_bound_check(domain: &LatticeDomain, s: f64, phi: &[f64], h: f64) -> Result<BerezinReport> {
    if phi.len() != domain.len() {
        return Err(Error::Lattice(format!("{} weights for {} mask points", phi.len(), domain.len())));
    }
    if !(h > 0.0) {
        return Err(self::domain("h must be positive"));
    }
    let m = build_restricted_fractional(domain, s)?;
    let n = m.n;
    let c = h.powf(2.0 * s);
    let mut a = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            let hij = c * m.get(i, j) - if i == j { 1.0 } else { 0.0 };
            a[i * n + j] = phi[i] * hij * phi[j];
        }
    }
    let (vals, _) = eigh_dense(a, n, false)?;
    let lhs: f64 = vals.iter().map(|&v| (-v).max(0.0)).sum();
    let mass: f64 = phi.iter().map(|v| v * v).sum();
    let dim = domain.dim as i32;
    let bound = l1_sd(s, domain.dim as u32)? * mass * domain.spacing.powi(dim) * h.powi(-dim);
    let nb = domain.box_points;
    let sig: Vec<f64> = (0..nb).map(|k| laplacian_symbol(k, nb, domain.spacing)).collect();
    let weight = |sg: f64| (1.0 - c * sg.powf(s)).max(0.0);
    let per_mode = if dim == 1 {
        sig.iter().map(|&v| weight(v)).sum::<f64>() / nb as f64
    } else {
        sig.iter().map(|&a| sig.iter().map(|&b| weight(a + b)).sum::<f64>()).sum::<f64>() / (nb * nb) as f64
    };
    let lattice_bound = mass * per_mode;
    let tol = 1e-10 * bound.max(lattice_bound);
    Ok(BerezinReport {
        lhs,
        bound,
        lattice_bound,
        holds: lhs <= bound + tol,
        holds_lattice: lhs <= lattice_bound + tol,
        slack: if bound > 0.0 { (bound - lhs) / bound } else { 0.0 },
    })
}

/// Coherent-state identity on a 2π-periodic N×N box.
#[derive(Debug, Clone, PartialEq)]
pub struct CoherentReport {
    pub lhs: f64,
    pub rhs: f64,
    /// |p|^{2s}‖φ‖² with the lattice symbol.
    pub first_term: f64,
    pub second_term: f64,
    pub gap: f64,
}

/// `phi` is a real N×N row-major profile; `p/h` must be an integer wavevector.
pub fn coherent_state_identity_check(s: f64, h: f64, p: [f64; 2], phi: &[f64], n: usize) -> Result<CoherentReport> {
    if phi.len() != n * n || n < 4 {
        return Err(Error::Lattice("profile must be N×N with N ≥ 4".into()));
    }
    if !(s > 0.0 && s <= 1.0) || !(h > 0.0) {
        return Err(domain("need 0 < s ≤ 1 and h > 0"));
    }
    let mut k0 = [0i64; 2];
    for j in 0..2 {
        let k = p[j] / h;
        if (k - k.round()).abs() > 1e-9 {
            return Err(domain(format!("p/h = {k} is not a lattice frequency")));
        }
        k0[j] = k.round() as i64;
    }
    let spacing = 2.0 * PI / n as f64;
    let nn = n as i64;
    let sym = |q1: i64, q2: i64| {
        let a = laplacian_symbol(q1.rem_euclid(nn) as usize, n, spacing);
        let b = laplacian_symbol(q2.rem_euclid(nn) as usize, n, spacing);
        let v = h * h * (a + b);
        if v <= 0.0 {
            0.0
        } else {
            v.powf(s)
        }
    };
    let norm = spacing * spacing / (n * n) as f64;
    let psi: Vec<Complex64> = (0..n * n)
        .map(|i| {
            let (x1, x2) = ((i / n) as f64 * spacing, (i % n) as f64 * spacing);
            Complex64::from_polar(phi[i], k0[0] as f64 * x1 + k0[1] as f64 * x2)
        })
        .collect();
    let psi_hat = dft_2d(&psi, n);
    let mut lhs = 0.0;
    for q1 in 0..n {
        for q2 in 0..n {
            lhs += sym(q1 as i64, q2 as i64) * psi_hat[q1 * n + q2].norm_sqr();
        }
    }
    lhs *= norm;
    let phi_c: Vec<Complex64> = phi.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    let phi_hat = dft_2d(&phi_c, n);
    let s0 = sym(k0[0], k0[1]);
    let mut mass = 0.0;
    let mut second = 0.0;
    for e1 in 0..n {
        for e2 in 0..n {
            let w = phi_hat[e1 * n + e2].norm_sqr();
            let (a, b) = (e1 as i64, e2 as i64);
            mass += w;
            second += (0.5 * (sym(k0[0] + a, k0[1] + b) + sym(k0[0] - a, k0[1] - b)) - s0) * w;
        }
    }
    let first = s0 * mass * norm;
    let second = second * norm;
    let rhs = first + second;
    Ok(CoherentReport { lhs, rhs, first_term: first, second_term: second, gap: (lhs - rhs).abs() / lhs.abs().max(f64::MIN_POSITIVE) })
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrderReport {
    pub min_eigenvalue: f64,
    pub max_eigenvalue: f64,
    pub norm: f64,
    pub holds: bool,
}

/// Spectrum of `(L_Ω)^s − P M_s P`; nonnegative up to roundoff.
pub fn operator_order_check(domain: &LatticeDomain, s: f64) -> Result<OrderReport> {
    let d = build_dirichlet_power(domain, s)?.sub(&build_restricted_fractional(domain, s)?)?;
    let norm = d.norm();
    let spec = eigenvalues_sym(&d)?;
    let min = spec.eigenvalues.first().copied().unwrap_or(0.0);
    let max = spec.eigenvalues.last().copied().unwrap_or(0.0);
    Ok(OrderReport { min_eigenvalue: min, max_eigenvalue: max, norm, holds: min >= -1e-8 * norm })
}

/// Lattice half-plane: periodic in x₁ with `tangential_points`, a slab of `depth_points`
/// in x₂ inside a periodic box of `box_depth`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfspaceConfig {
    pub spacing: f64,
    pub h: f64,
    pub depth_points: usize,
    pub box_depth: usize,
    pub tangential_points: usize,
    /// Rows reported: x_d/h up to this value.
    pub max_ratio: f64,
}

impl Default for HalfspaceConfig {
    fn default() -> Self {
        Self { spacing: 0.125, h: 1.0, depth_points: 128, box_depth: 384, tangential_points: 4096, max_ratio: 6.0 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HalfspaceRow {
    /// Distance to the wall, cell-centred: (j + ½)Δ.
    pub x_d: f64,
    pub ratio: f64,
    pub lattice: f64,
    pub continuum: f64,
    pub rel_gap: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HalfspaceReport {
    pub rows: Vec<HalfspaceRow>,
    /// Lattice density in the middle of the slab.
    pub interior: f64,
    /// h^{−2}L¹.
    pub interior_continuum: f64,
}

/// Diagonal of `(h^{2s}P M_s P − 1)₋` near the straight edge against h^{−2}(L¹ − K(x_d/h)).
pub fn halfspace_kernel_check(model: &HalfLineModel, cfg: &HalfspaceConfig) -> Result<HalfspaceReport> {
    let s = model.order.s;
    if model.order.d != 2 {
        return Err(domain("the lattice half-plane is two-dimensional"));
    }
    let (m, n2, n1, dx) = (cfg.depth_points, cfg.box_depth, cfg.tangential_points, cfg.spacing);
    if m < 8 || 3 * m > n2 || n1 < 4 {
        return Err(Error::Lattice("half-plane slab needs depth ≥ 8 and box ≥ 3·depth".into()));
    }
    if cfg.h < 4.0 * dx {
        return Err(Error::Lattice("h below 4Δ".into()));
    }
    let c = cfg.h.powf(2.0 * s);
    let ct = cos_table(n2);
    let sig2: Vec<f64> = (0..n2).map(|k| laplacian_symbol(k, n2, dx)).collect();
    let mut diag = vec![0.0; m];
    for k1 in 0..=n1 / 2 {
        let sig1 = laplacian_symbol(k1, n1, dx);
        // P(σ₁+σ₂)^sP ≥ σ₁^s: nothing below threshold beyond this k₁
        if c * sig1.powf(s) >= 1.0 {
            break;
        }
        let mult = if k1 == 0 || 2 * k1 == n1 { 1.0 } else { 2.0 };
        let sym: Vec<f64> = sig2.iter().map(|&v| (sig1 + v).powf(s)).collect();
        let kern: Vec<f64> = (0..m)
            .map(|r| sym.iter().enumerate().map(|(k, v)| v * ct[(k * r) % n2]).sum::<f64>() / n2 as f64)
            .collect();
        let mut block = vec![0.0; m * m];
        for i in 0..m {
            for j in 0..m {
                block[i * m + j] = kern[i.abs_diff(j)];
            }
        }
        let (vals, vecs) = eigh_dense(block, m, true)?;
        let vecs = vecs.unwrap_or_default();
        for (k, &mu) in vals.iter().enumerate() {
            let w = 1.0 - c * mu;
            if w <= 0.0 {
                break;
            }
            for (dj, v) in diag.iter_mut().zip(&vecs[k * m..(k + 1) * m]) {
                *dj += mult * w * v * v;
            }
        }
    }
    let scale = 1.0 / (n1 as f64 * dx * dx);
    let l1v = l1(model.order);
    let h2 = cfg.h * cfg.h;
    let mut rows = Vec::new();
    for (j, &dj) in diag.iter().enumerate().take(m / 2) {
        let x_d = (j as f64 + 0.5) * dx;
        let ratio = x_d / cfg.h;
        if ratio > cfg.max_ratio {
            break;
        }
        let lattice = dj * scale;
        let continuum = (l1v - model.k_layer(ratio)?.value) / h2;
        rows.push(HalfspaceRow { x_d, ratio, lattice, continuum, rel_gap: (lattice - continuum).abs() / continuum.abs() });
    }
    Ok(HalfspaceReport { rows, interior: diag[m / 2] * scale, interior_continuum: l1v / h2 })
}

/// Both sides of the localization identity `Tr γM = ∫Tr(γφ_u M φ_u) l^{−d} du − Tr γL`.
#[derive(Debug, Clone, PartialEq)]
pub struct ImsReport {
    pub lhs: f64,
    pub localized: f64,
    /// Tr γL with the lattice kernel ½(−M_xy)∫|φ_u(x)−φ_u(y)|² l^{−d} du.
    pub defect_lattice: f64,
    /// Tr γL with the continuum kernel C_{s,d}|φ_u(x)−φ_u(y)|²/|x−y|^{d+2s}.
    pub defect_continuum: f64,
    pub gap_lattice: f64,
    pub gap_continuum: f64,
    /// Largest |Σ_u w l^{−d} φ_u(x)² − 1| over the mask.
    pub partition_error: f64,
}

/// Localization identity for a sampled family given as (values on the mask, weight·l^{−d}).
pub fn ims_defect_with(domain: &LatticeDomain, s: f64, samples: &[(Vec<f64>, f64)]) -> Result<ImsReport> {
    if !(s > 0.0 && s < 1.0) {
        return Err(self::domain("IMS check needs 0 < s < 1"));
    }
    let m = build_restricted_fractional(domain, s)?;
    let n = m.n;
    if n < 3 {
        return Err(Error::Lattice("mask needs at least 3 points for a rank-3 projector".into()));
    }
    let (spec, vecs) = eigen_decomposition(&m)?;
    let modes: Vec<&[f64]> = (0..3).map(|k| &vecs[k * n..(k + 1) * n]).collect();
    let lhs: f64 = spec.eigenvalues[..3].iter().sum();
    let mut gamma = vec![0.0; n * n];
    for v in &modes {
        for i in 0..n {
            for j in 0..n {
                gamma[i * n + j] += v[i] * v[j];
            }
        }
    }
    let mut localized = 0.0;
    let mut part = vec![0.0; n];
    let mut cross = vec![0.0; n * n];
    for (vals, w) in samples {
        if vals.len() != n {
            return Err(Error::Lattice("sample length differs from mask size".into()));
        }
        let sup: Vec<usize> = (0..n).filter(|&i| vals[i] != 0.0).collect();
        for v in &modes {
            let mut q = 0.0;
            for &i in &sup {
                let a = v[i] * vals[i];
                for &j in &sup {
                    q += a * m.get(i, j) * v[j] * vals[j];
                }
            }
            localized += w * q;
        }
        for &i in &sup {
            part[i] += w * vals[i] * vals[i];
            for &j in &sup {
                cross[i * n + j] += w * vals[i] * vals[j];
            }
        }
    }
    let csd = c_sd(s, domain.dim as u32)?;
    let vol = domain.spacing.powi(domain.dim as i32);
    let expo = domain.dim as f64 + 2.0 * s;
    let pts: Vec<[f64; 2]> = (0..n).map(|k| domain.point(k)).collect();
    let (mut lat, mut cont) = (0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let dsq = part[i] + part[j] - 2.0 * cross[i * n + j];
            let g = gamma[i * n + j];
            lat += g * 0.5 * (-m.get(i, j)) * dsq;
            let r = ((pts[i][0] - pts[j][0]).powi(2) + (pts[i][1] - pts[j][1]).powi(2)).sqrt();
            cont += g * csd * dsq * vol / r.powf(expo);
        }
    }
    let partition_error = part.iter().map(|p| (p - 1.0).abs()).fold(0.0, f64::max);
    Ok(ImsReport {
        lhs,
        localized,
        defect_lattice: lat,
        defect_continuum: cont,
        gap_lattice: (lhs - (localized - lat)).abs() / lhs.abs(),
        gap_continuum: (lhs - (localized - cont)).abs() / lhs.abs(),
        partition_error,
    })
}

/// [`ims_defect_with`] for a localization family sampled on its u-grid.
pub fn ims_defect_check(domain: &LatticeDomain, s: f64, family: &LocalizationFamily, resolution: usize) -> Result<ImsReport> {
    if family.dim() != domain.dim {
        return Err(self::domain("family and lattice dimensions differ"));
    }
    let pts: Vec<[f64; 2]> = (0..domain.len()).map(|k| domain.point(k)).collect();
    let d = domain.dim as i32;
    let samples: Vec<(Vec<f64>, f64)> = family
        .u_grid(resolution)
        .into_iter()
        .filter_map(|(u, w)| {
            let vals: Vec<f64> = pts.iter().map(|&x| family.phi_u(x, u)).collect();
            if vals.iter().all(|&v| v == 0.0) {
                None
            } else {
                Some((vals, w * family.scale_l(u).powi(-d)))
            }
        })
        .collect();
    ims_defect_with(domain, s, &samples)
}
