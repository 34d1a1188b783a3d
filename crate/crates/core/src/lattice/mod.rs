//! Dense lattice models of the restricted fractional Laplacian.
//!
//! Ω is a mask of grid points inside a periodic box; the full-space operator is the
//! Fourier multiplier σ(k)^s of the discrete Laplacian and the restriction simply
//! drops the rows/columns outside the mask. Everything is dense, so sizes are capped
//! at [`DENSE_LIMIT`].

mod checks;
mod dft;
mod eigen;

pub use checks::{
    berezin_bound_check, coherent_state_identity_check, halfspace_kernel_check, ims_defect_check,
    operator_order_check, BerezinReport, CoherentReport, HalfspaceConfig, HalfspaceReport, HalfspaceRow,
    ImsReport, OrderReport,
};
pub use dft::{dft_2d, laplacian_symbol, multiplier_kernel_1d, multiplier_kernel_2d};

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::error::{Error, Result};

/// Largest matrix dimension handled by the dense routines.
pub const DENSE_LIMIT: usize = 4096;

/// Continuum measures of the shape the mask stands for.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdealShape {
    pub volume: f64,
    pub surface: f64,
}

/// A set of grid points (the mask) in a periodic box of `box_points` per axis.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeDomain {
    pub dim: usize,
    pub box_points: usize,
    pub spacing: f64,
    /// Box indices of the mask points; the second index is 0 in 1D.
    pub mask: Vec<[usize; 2]>,
    /// Faces between a mask point and a non-mask neighbour.
    pub boundary_count: usize,
    pub ideal: Option<IdealShape>,
    /// Physical coordinate of box index 0 is `(0 + ½)Δ − origin`.
    pub origin: [f64; 2],
}

impl LatticeDomain {
    /// Validate the mask and count its boundary faces.
    pub fn new(dim: usize, box_points: usize, spacing: f64, mut mask: Vec<[usize; 2]>) -> Result<Self> {
        if dim != 1 && dim != 2 {
            return Err(Error::Lattice(format!("dimension {dim} not supported")));
        }
        if !(spacing > 0.0) || box_points == 0 {
            return Err(Error::Lattice("spacing and box size must be positive".into()));
        }
        if mask.is_empty() {
            return Err(Error::Lattice("empty mask".into()));
        }
        mask.sort_unstable();
        mask.dedup();
        let n = box_points;
        for axis in 0..dim {
            let lo = mask.iter().map(|p| p[axis]).min().unwrap_or(0);
            let hi = mask.iter().map(|p| p[axis]).max().unwrap_or(0);
            if hi >= n {
                return Err(Error::Lattice(format!("mask index {hi} outside box of {n}")));
            }
            let high_margin = n - 1 - hi;
            if 3 * lo < n || 3 * high_margin < n {
                return Err(Error::Lattice(format!(
                    "margin ({lo}, {high_margin}) below box/3 = {:.1} on axis {axis}",
                    n as f64 / 3.0
                )));
            }
        }
        if dim == 1 && mask.iter().any(|p| p[1] != 0) {
            return Err(Error::Lattice("1D mask with nonzero second index".into()));
        }
        let mut dom = Self { dim, box_points, spacing, mask, boundary_count: 0, ideal: None, origin: [0.0; 2] };
        let index = dom.index_grid();
        let mut faces = 0;
        for p in &dom.mask {
            for axis in 0..dim {
                for step in [-1i64, 1] {
                    let mut q = *p;
                    q[axis] = (q[axis] as i64 + step) as usize;
                    if index[dom.flat(q)].is_none() {
                        faces += 1;
                    }
                }
            }
        }
        dom.boundary_count = faces;
        Ok(dom)
    }

    /// `m` points representing the interval (0, mΔ), box 3m.
    pub fn interval(m: usize, spacing: f64) -> Result<Self> {
        let mask = (m..2 * m).map(|i| [i, 0]).collect();
        let mut d = Self::new(1, 3 * m, spacing, mask)?;
        d.ideal = Some(IdealShape { volume: m as f64 * spacing, surface: 2.0 });
        d.origin = [m as f64 * spacing, 0.0];
        Ok(d)
    }

    /// `mx × my` points representing (0, mxΔ) × (0, myΔ), box 3·max(mx, my).
    pub fn rectangle(mx: usize, my: usize, spacing: f64) -> Result<Self> {
        let n = 3 * mx.max(my);
        let (ox, oy) = ((n - mx) / 2, (n - my) / 2);
        let mask = (ox..ox + mx).flat_map(|i| (oy..oy + my).map(move |j| [i, j])).collect();
        let mut d = Self::new(2, n, spacing, mask)?;
        let (a, b) = (mx as f64 * spacing, my as f64 * spacing);
        d.ideal = Some(IdealShape { volume: a * b, surface: 2.0 * (a + b) });
        d.origin = [ox as f64 * spacing, oy as f64 * spacing];
        Ok(d)
    }

    pub fn square(m: usize, spacing: f64) -> Result<Self> {
        Self::rectangle(m, m, spacing)
    }

    /// Cell centres inside the disk of the given radius centred at the origin.
    pub fn disk(radius: f64, spacing: f64) -> Result<Self> {
        if !(radius > spacing) {
            return Err(Error::Lattice("disk radius must exceed the spacing".into()));
        }
        let cells = (2.0 * radius / spacing).ceil() as usize;
        let n = 3 * cells + 3;
        let c = n as f64 * spacing / 2.0;
        let mut mask = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let x = (i as f64 + 0.5) * spacing - c;
                let y = (j as f64 + 0.5) * spacing - c;
                if x * x + y * y < radius * radius {
                    mask.push([i, j]);
                }
            }
        }
        let mut d = Self::new(2, n, spacing, mask)?;
        d.ideal = Some(IdealShape { volume: PI * radius * radius, surface: 2.0 * PI * radius });
        d.origin = [c, c];
        Ok(d)
    }

    pub fn len(&self) -> usize {
        self.mask.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mask.is_empty()
    }

    /// (#mask)·Δ^dim.
    pub fn volume_estimate(&self) -> f64 {
        self.mask.len() as f64 * self.spacing.powi(self.dim as i32)
    }

    /// Face count·Δ^{dim−1}.
    pub fn surface_estimate(&self) -> f64 {
        self.boundary_count as f64 * self.spacing.powi(self.dim as i32 - 1)
    }

    /// Ideal-shape volume when declared, else the mask estimate.
    pub fn volume(&self) -> f64 {
        self.ideal.map_or_else(|| self.volume_estimate(), |s| s.volume)
    }

    /// Ideal-shape surface when declared, else the staircase estimate.
    pub fn surface(&self) -> f64 {
        self.ideal.map_or_else(|| self.surface_estimate(), |s| s.surface)
    }

    /// Physical position of mask point `k`.
    pub fn point(&self, k: usize) -> [f64; 2] {
        let p = self.mask[k];
        let mut x = [0.0; 2];
        for axis in 0..self.dim {
            x[axis] = (p[axis] as f64 + 0.5) * self.spacing - self.origin[axis];
        }
        x
    }

    fn flat(&self, p: [usize; 2]) -> usize {
        if self.dim == 1 {
            p[0]
        } else {
            p[0] * self.box_points + p[1]
        }
    }

    /// Box-sized lookup from box index to mask position.
    fn index_grid(&self) -> Vec<Option<usize>> {
        let mut g = vec![None; self.box_points.pow(self.dim as u32)];
        for (k, p) in self.mask.iter().enumerate() {
            g[self.flat(*p)] = Some(k);
        }
        g
    }
}

/// Dense symmetric matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricOperator {
    pub n: usize,
    pub entries: Vec<f64>,
}

impl SymmetricOperator {
    pub fn new(n: usize, entries: Vec<f64>) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::Lattice(format!("{} entries for a {n}×{n} matrix", entries.len())));
        }
        Ok(Self { n, entries })
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    /// max |A − Aᵀ| relative to ‖A‖.
    pub fn asymmetry(&self) -> f64 {
        let n = self.n;
        let mut m = 0.0f64;
        for i in 0..n {
            for j in 0..i {
                m = m.max((self.get(i, j) - self.get(j, i)).abs());
            }
        }
        m / self.norm().max(f64::MIN_POSITIVE)
    }

    /// Max absolute row sum; bounds the spectral norm of a symmetric matrix.
    pub fn norm(&self) -> f64 {
        self.entries
            .chunks(self.n.max(1))
            .map(|r| r.iter().map(|v| v.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::Lattice("operator sizes differ".into()));
        }
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect();
        Ok(Self { n: self.n, entries })
    }
}

/// Ascending spectrum plus the worst residual among the sampled eigenpairs.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumResult {
    pub eigenvalues: Vec<f64>,
    pub residual_norm: f64,
}

/// Restricted multiplier `P M_s P` on the mask.
pub fn build_restricted_fractional(domain: &LatticeDomain, s: f64) -> Result<SymmetricOperator> {
    check_power(s)?;
    let n = domain.len();
    if n > DENSE_LIMIT {
        return Err(Error::Lattice(format!("{n} points exceed the dense limit {DENSE_LIMIT}")));
    }
    let nb = domain.box_points;
    let mut a = vec![0.0; n * n];
    if domain.dim == 1 {
        let k = multiplier_kernel_1d(nb, domain.spacing, s);
        for (i, p) in domain.mask.iter().enumerate() {
            for (j, q) in domain.mask.iter().enumerate() {
                a[i * n + j] = k[(p[0] + nb - q[0]) % nb];
            }
        }
    } else {
        let k = multiplier_kernel_2d(nb, domain.spacing, s);
        for (i, p) in domain.mask.iter().enumerate() {
            for (j, q) in domain.mask.iter().enumerate() {
                let r1 = (p[0] + nb - q[0]) % nb;
                let r2 = (p[1] + nb - q[1]) % nb;
                a[i * n + j] = k[r1 * nb + r2];
            }
        }
    }
    SymmetricOperator::new(n, a)
}

/// Discrete Dirichlet Laplacian on the mask (exterior values zero).
pub fn dirichlet_laplacian(domain: &LatticeDomain) -> SymmetricOperator {
    let n = domain.len();
    let grid = domain.index_grid();
    let inv = 1.0 / (domain.spacing * domain.spacing);
    let mut a = vec![0.0; n * n];
    for (i, p) in domain.mask.iter().enumerate() {
        a[i * n + i] = 2.0 * domain.dim as f64 * inv;
        for axis in 0..domain.dim {
            for step in [-1i64, 1] {
                let mut q = *p;
                q[axis] = (q[axis] as i64 + step) as usize;
                if let Some(j) = grid[domain.flat(q)] {
                    a[i * n + j] = -inv;
                }
            }
        }
    }
    SymmetricOperator { n, entries: a }
}

/// `(L_Ω)^s` by functional calculus of the Dirichlet Laplacian.
pub fn build_dirichlet_power(domain: &LatticeDomain, s: f64) -> Result<SymmetricOperator> {
    check_power(s)?;
    let l = dirichlet_laplacian(domain);
    if l.n > DENSE_LIMIT {
        return Err(Error::Lattice(format!("{} points exceed the dense limit {DENSE_LIMIT}", l.n)));
    }
    let (vals, vecs) = eigen_decomposition(&l)?;
    let n = l.n;
    let pw: Vec<f64> = vals.eigenvalues.iter().map(|&v| v.max(0.0).powf(s)).collect();
    let mut a = vec![0.0; n * n];
    for (k, &w) in pw.iter().enumerate() {
        let v = &vecs[k * n..(k + 1) * n];
        for i in 0..n {
            let wi = w * v[i];
            let row = &mut a[i * n..(i + 1) * n];
            for (aij, vj) in row.iter_mut().zip(v) {
                *aij += wi * vj;
            }
        }
    }
    // exact symmetry
    for i in 0..n {
        for j in 0..i {
            let m = 0.5 * (a[i * n + j] + a[j * n + i]);
            a[i * n + j] = m;
            a[j * n + i] = m;
        }
    }
    SymmetricOperator::new(n, a)
}

fn check_power(s: f64) -> Result<()> {
    if !(s > 0.0 && s <= 1.0) {
        return Err(crate::error::domain(format!("power s = {s} outside (0, 1]")));
    }
    Ok(())
}

fn sample_indices(n: usize) -> Vec<usize> {
    let k = n.min(5);
    (0..k).map(|i| (2 * i + 1) * n / (2 * k)).collect()
}

fn residual(op: &SymmetricOperator, lam: f64, v: &[f64]) -> f64 {
    let n = op.n;
    let mut r = 0.0f64;
    for i in 0..n {
        let av: f64 = op.entries[i * n..(i + 1) * n].iter().zip(v).map(|(a, b)| a * b).sum();
        r += (av - lam * v[i]).powi(2);
    }
    r.sqrt()
}

/// Full ascending spectrum. Five eigenpairs spread through the spectrum are rebuilt by
/// inverse iteration on the tridiagonal form and checked against the original matrix.
pub fn eigenvalues_sym(op: &SymmetricOperator) -> Result<SpectrumResult> {
    let n = op.n;
    if n > DENSE_LIMIT {
        return Err(Error::Lattice(format!("{n} exceeds the dense limit {DENSE_LIMIT}")));
    }
    let mut a = op.entries.clone();
    let (d, e, hs) = eigen::tridiagonalize(&mut a, n);
    let (mut dd, mut ee) = (d.clone(), e.clone());
    eigen::tql(&mut dd, &mut ee, None)?;
    dd.sort_by(f64::total_cmp);
    let mut worst = 0.0f64;
    for (t, k) in sample_indices(n).into_iter().enumerate() {
        let mut y = eigen::tridiagonal_vector(&d, &e, dd[k], 0x9e37_79b9 + t as u64);
        eigen::apply_q(&a, &hs, n, &mut y);
        worst = worst.max(residual(op, dd[k], &y));
    }
    Ok(SpectrumResult { eigenvalues: dd, residual_norm: worst })
}

/// Spectrum and orthonormal eigenvectors (row `k` of the returned matrix is the k-th vector).
pub fn eigen_decomposition(op: &SymmetricOperator) -> Result<(SpectrumResult, Vec<f64>)> {
    let n = op.n;
    let (vals, vecs) = eigen::eigh_dense(op.entries.clone(), n, true)?;
    let vecs = vecs.unwrap_or_default();
    let worst = sample_indices(n)
        .into_iter()
        .map(|k| residual(op, vals[k], &vecs[k * n..(k + 1) * n]))
        .fold(0.0, f64::max);
    Ok((SpectrumResult { eigenvalues: vals, residual_norm: worst }, vecs))
}

/// Σ (1 − h^{2s} λ)₊.
pub fn riesz_mean(eigenvalues: &[f64], h: f64, s: f64) -> f64 {
    let c = h.powf(2.0 * s);
    eigenvalues.iter().map(|&l| (1.0 - c * l).max(0.0)).sum()
}

/// Fit of `trace ≈ c0 h^{−d} + c1 h^{−d+1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticFit {
    pub c0: f64,
    pub c1: f64,
    pub h_samples: Vec<(f64, f64)>,
    /// RMS of the residual in units of h^{−d+1}.
    pub rms_residual: f64,
}

/// Ordinary least squares on the traces themselves (columns scaled to unit norm before
/// solving the 2×2 normal equations).
pub fn two_term_fit(samples: &[(f64, f64)], d: u32) -> Result<AsymptoticFit> {
    if samples.len() < 4 {
        return Err(Error::Fit(format!("{} samples, need at least 4", samples.len())));
    }
    if samples.iter().any(|&(h, t)| !(h > 0.0) || !t.is_finite()) {
        return Err(Error::Fit("samples need h > 0 and finite traces".into()));
    }
    let hmin = samples.iter().map(|s| s.0).fold(f64::INFINITY, f64::min);
    let hmax = samples.iter().map(|s| s.0).fold(0.0, f64::max);
    if hmax < 4.0 * hmin {
        return Err(Error::Fit(format!("h range {hmin:e}..{hmax:e} spans less than a factor 4")));
    }
    let di = d as i32;
    let cols: Vec<(f64, f64)> = samples.iter().map(|&(h, _)| (h.powi(-di), h.powi(1 - di))).collect();
    let n0 = cols.iter().map(|c| c.0 * c.0).sum::<f64>().sqrt();
    let n1 = cols.iter().map(|c| c.1 * c.1).sum::<f64>().sqrt();
    let (mut a00, mut a01, mut a11, mut b0, mut b1) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for (c, &(_, t)) in cols.iter().zip(samples) {
        let (x0, x1) = (c.0 / n0, c.1 / n1);
        a00 += x0 * x0;
        a01 += x0 * x1;
        a11 += x1 * x1;
        b0 += x0 * t;
        b1 += x1 * t;
    }
    let det = a00 * a11 - a01 * a01;
    if det <= 1e-14 {
        return Err(Error::Fit(format!("normal matrix nearly singular (det {det:e})")));
    }
    let c0 = (a11 * b0 - a01 * b1) / det / n0;
    let c1 = (a00 * b1 - a01 * b0) / det / n1;
    let m = samples.len() as f64;
    let rms = (samples
        .iter()
        .zip(&cols)
        .map(|(&(h, t), c)| ((t - c0 * c.0 - c1 * c.1) * h.powi(di - 1)).powi(2))
        .sum::<f64>()
        / m)
        .sqrt();
    Ok(AsymptoticFit { c0, c1, h_samples: samples.to_vec(), rms_residual: rms })
}

/// `count` geometric values on [lo, hi].
pub fn geometric_h_list(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    if count < 2 {
        return vec![lo];
    }
    (0..count).map(|i| lo * (hi / lo).powf(i as f64 / (count - 1) as f64)).collect()
}

#[cfg(test)]
mod tests;
