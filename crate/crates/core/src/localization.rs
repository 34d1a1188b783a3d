//! Multiscale ball covering: balls B_u of radius l(u) that shrink towards ∂Ω, with
//! weights φ_u satisfying ∫ φ_u(x)² l(u)^{−d} du = 1 for every x.
//!
//! Points are `[f64; 2]`; in 1D the second coordinate is ignored.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;

#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::error::{domain, Result};
use crate::quadcore::{integrate, integrate_breaks, QuadratureSpec};

pub type Point = [f64; 2];

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DomainGeometry {
    Interval { a: f64, b: f64 },
    Rectangle { lo: Point, hi: Point },
    Disk { center: Point, radius: f64 },
}

fn norm2(v: Point) -> f64 {
    (v[0] * v[0] + v[1] * v[1]).sqrt()
}

impl DomainGeometry {
    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            Self::Interval { a, b } => a < b,
            Self::Rectangle { lo, hi } => lo[0] < hi[0] && lo[1] < hi[1],
            Self::Disk { radius, .. } => radius > 0.0,
        };
        if ok {
            Ok(())
        } else {
            Err(domain(format!("degenerate geometry {self:?}")))
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::Interval { .. } => 1,
            _ => 2,
        }
    }

    /// d(u) = dist(u, ℝ^d ∖ Ω); zero outside Ω.
    pub fn distance(&self, u: Point) -> f64 {
        match *self {
            Self::Interval { a, b } => (u[0] - a).min(b - u[0]).max(0.0),
            Self::Rectangle { lo, hi } => (u[0] - lo[0]).min(hi[0] - u[0]).min(u[1] - lo[1]).min(hi[1] - u[1]).max(0.0),
            Self::Disk { center, radius } => (radius - norm2([u[0] - center[0], u[1] - center[1]])).max(0.0),
        }
    }

    /// ∇d(u). On ridges (equidistant walls, disk centre) one branch is picked.
    pub fn distance_gradient(&self, u: Point) -> Point {
        if self.distance(u) <= 0.0 {
            return [0.0; 2];
        }
        match *self {
            Self::Interval { a, b } => [if u[0] - a <= b - u[0] { 1.0 } else { -1.0 }, 0.0],
            Self::Rectangle { lo, hi } => {
                let walls = [
                    (u[0] - lo[0], [1.0, 0.0]),
                    (hi[0] - u[0], [-1.0, 0.0]),
                    (u[1] - lo[1], [0.0, 1.0]),
                    (hi[1] - u[1], [0.0, -1.0]),
                ];
                walls.iter().fold(walls[0], |m, w| if w.0 < m.0 { *w } else { m }).1
            }
            Self::Disk { center, .. } => {
                let v = [u[0] - center[0], u[1] - center[1]];
                let r = norm2(v);
                if r == 0.0 {
                    [0.0; 2]
                } else {
                    [-v[0] / r, -v[1] / r]
                }
            }
        }
    }

    /// Unsigned distance to ∂Ω.
    pub fn boundary_distance(&self, u: Point) -> f64 {
        let inside = self.distance(u);
        if inside > 0.0 {
            return inside;
        }
        match *self {
            Self::Interval { a, b } => (u[0] - a).abs().min((u[0] - b).abs()),
            Self::Rectangle { lo, hi } => {
                let dx = (lo[0] - u[0]).max(u[0] - hi[0]).max(0.0);
                let dy = (lo[1] - u[1]).max(u[1] - hi[1]).max(0.0);
                if dx == 0.0 && dy == 0.0 {
                    0.0
                } else {
                    (dx * dx + dy * dy).sqrt()
                }
            }
            Self::Disk { center, radius } => (norm2([u[0] - center[0], u[1] - center[1]]) - radius).abs(),
        }
    }

    /// Per-axis coordinate of the ridge of d (interval midpoint, disk centre, rectangle
    /// midlines), used to align quadrature cells.
    pub fn ridge(&self) -> [Option<f64>; 2] {
        match *self {
            Self::Interval { a, b } => [Some(0.5 * (a + b)), None],
            Self::Rectangle { lo, hi } => [Some(0.5 * (lo[0] + hi[0])), Some(0.5 * (lo[1] + hi[1]))],
            Self::Disk { center, .. } => [Some(center[0]), Some(center[1])],
        }
    }

    /// Bounding box (lo, hi).
    pub fn bounds(&self) -> (Point, Point) {
        match *self {
            Self::Interval { a, b } => ([a, 0.0], [b, 0.0]),
            Self::Rectangle { lo, hi } => (lo, hi),
            Self::Disk { center, radius } => (
                [center[0] - radius, center[1] - radius],
                [center[0] + radius, center[1] + radius],
            ),
        }
    }
}

/// The covering for one geometry and one l₀, with the normalized bump profile.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalizationFamily {
    pub geometry: DomainGeometry,
    pub l0: f64,
    /// c with ∫ (c·exp(−1/(1−|y|²)))² dy = 1.
    pub profile_norm: f64,
}

fn bump(r2: f64) -> f64 {
    if r2 >= 1.0 {
        0.0
    } else {
        (-1.0 / (1.0 - r2)).exp()
    }
}

impl LocalizationFamily {
    pub fn new(geometry: DomainGeometry, l0: f64) -> Result<Self> {
        geometry.validate()?;
        if !(l0 > 0.0 && l0 <= 0.5) {
            return Err(domain(format!("l0 = {l0} outside (0, 1/2]")));
        }
        let spec = QuadratureSpec::default().with_rel_tol(1e-13).with_abs_tol(0.0);
        let sq = if geometry.dim() == 1 {
            2.0 * integrate(|y| bump(y * y).powi(2), 0.0, 1.0, &spec)?.value
        } else {
            2.0 * PI * integrate(|r| r * bump(r * r).powi(2), 0.0, 1.0, &spec)?.value
        };
        Ok(Self { geometry, l0, profile_norm: sq.sqrt().recip() })
    }

    pub fn dim(&self) -> usize {
        self.geometry.dim()
    }

    /// Normalized base profile φ(y).
    pub fn profile(&self, y: Point) -> f64 {
        let r2 = if self.dim() == 1 { y[0] * y[0] } else { y[0] * y[0] + y[1] * y[1] };
        self.profile_norm * bump(r2)
    }

    fn l_of_d(&self, d: f64) -> f64 {
        0.5 / (1.0 + (d * d + self.l0 * self.l0).sqrt().recip())
    }

    /// l(u) = ½(1 + (d(u)² + l₀²)^{−1/2})^{−1}.
    pub fn scale_l(&self, u: Point) -> f64 {
        self.l_of_d(self.geometry.distance(u))
    }

    /// ∇l by the chain rule through d(u).
    pub fn grad_l(&self, u: Point) -> Point {
        let d = self.geometry.distance(u);
        let q = (d * d + self.l0 * self.l0).sqrt().recip();
        let c = 0.5 * d * q * q * q / ((1.0 + q) * (1.0 + q));
        let g = self.geometry.distance_gradient(u);
        [c * g[0], c * g[1]]
    }

    /// 1 + ∇l(u)·(x−u)/l(u), i.e. J(x,u)·l(u)^d.
    pub fn jacobian_factor(&self, x: Point, u: Point) -> f64 {
        let l = self.scale_l(u);
        let g = self.grad_l(u);
        let dot = g[0] * (x[0] - u[0]) + if self.dim() == 2 { g[1] * (x[1] - u[1]) } else { 0.0 };
        1.0 + dot / l
    }

    /// φ_u(x) = φ((x−u)/l(u)) √J(x,u) l(u)^{d/2}.
    pub fn phi_u(&self, x: Point, u: Point) -> f64 {
        let l = self.scale_l(u);
        let y = [(x[0] - u[0]) / l, (x[1] - u[1]) / l];
        let p = self.profile(y);
        if p == 0.0 {
            return 0.0;
        }
        p * self.jacobian_factor(x, u).max(0.0).sqrt()
    }

    /// Midpoint-rule value of ∫ φ_u(x)² l(u)^{−d} du on a uniform grid over the cube
    /// |u − x|_∞ ≤ 2l(x) (which contains every contributing u since ‖∇l‖ ≤ ½), with
    /// spacing l(x)/(8·resolution). Cell edges are aligned with the ridge of d, where ∇l
    /// jumps, so the rule stays second order there.
    pub fn partition_check(&self, x: Point, resolution: usize) -> f64 {
        let res = resolution.max(1);
        let lx = self.scale_l(x);
        let w = lx / (8 * res) as f64;
        let ridge = self.geometry.ridge();
        let axis_nodes = |k: usize| -> Vec<f64> {
            let lo = x[k] - 2.0 * lx;
            let start = ridge[k].map_or(lo, |r| r + ((lo - r) / w).floor() * w);
            let cells = ((x[k] + 2.0 * lx - start) / w).ceil() as usize;
            (0..cells).map(|i| start + (i as f64 + 0.5) * w).collect()
        };
        let d = self.dim();
        let mut acc = 0.0;
        if d == 1 {
            for u0 in axis_nodes(0) {
                let u = [u0, 0.0];
                let p = self.phi_u(x, u);
                acc += p * p / self.scale_l(u);
            }
            acc * w
        } else {
            let ys = axis_nodes(1);
            for u0 in axis_nodes(0) {
                for &u1 in &ys {
                    let u = [u0, u1];
                    let p = self.phi_u(x, u);
                    if p != 0.0 {
                        let l = self.scale_l(u);
                        acc += p * p / (l * l);
                    }
                }
            }
            acc * w * w
        }
    }

    /// Quadrature nodes and weights covering every u whose ball meets Ω̄.
    ///
    /// 1D: cells marched with width l(u)/(8·resolution), midpoint nodes. 2D: uniform
    /// tensor grid at the smallest scale, l(∂Ω)/(8·resolution).
    pub fn u_grid(&self, resolution: usize) -> Vec<(Point, f64)> {
        let res = resolution.max(1) as f64;
        let ext = self.l_of_d(0.0);
        let (lo, hi) = self.geometry.bounds();
        let mut out = Vec::new();
        if self.dim() == 1 {
            let (a, b) = (lo[0] - ext, hi[0] + ext);
            let mut u = a;
            while u < b {
                let w = (self.scale_l([u, 0.0]) / (8.0 * res)).min(b - u);
                // re-evaluate the width at the cell midpoint for symmetry
                let w = (self.scale_l([u + 0.5 * w, 0.0]) / (8.0 * res)).min(b - u);
                out.push(([u + 0.5 * w, 0.0], w));
                u += w;
            }
        } else {
            let step = ext / (8.0 * res);
            let nx = ((hi[0] - lo[0] + 2.0 * ext) / step).ceil() as usize;
            let ny = ((hi[1] - lo[1] + 2.0 * ext) / step).ceil() as usize;
            let (wx, wy) = ((hi[0] - lo[0] + 2.0 * ext) / nx as f64, (hi[1] - lo[1] + 2.0 * ext) / ny as f64);
            for i in 0..nx {
                for j in 0..ny {
                    let u = [lo[0] - ext + (i as f64 + 0.5) * wx, lo[1] - ext + (j as f64 + 0.5) * wy];
                    out.push((u, wx * wy));
                }
            }
        }
        out
    }

    /// The same family with another l₀.
    pub fn with_l0(&self, l0: f64) -> Result<Self> {
        if !(l0 > 0.0 && l0 <= 0.5) {
            return Err(domain(format!("l0 = {l0} outside (0, 1/2]")));
        }
        Ok(Self { l0, ..*self })
    }

    /// Depth t* inside Ω below which B_u meets ∂Ω: t* = l(t*) (t − l(t) is increasing).
    fn boundary_depth(&self) -> f64 {
        let (mut lo, mut hi) = (0.0, 1.0);
        for _ in 0..100 {
            let m = 0.5 * (lo + hi);
            if m - self.l_of_d(m) < 0.0 {
                lo = m;
            } else {
                hi = m;
            }
        }
        0.5 * (lo + hi)
    }

    /// ∫_{Ω∖U} l^{−2} du and ∫_U l^a du, U = {u : B_u ∩ ∂Ω ≠ ∅}. Interval and disk.
    pub fn neighborhood_pair(&self, a: f64) -> Result<(f64, f64)> {
        let spec = QuadratureSpec::default().with_rel_tol(1e-10).with_abs_tol(0.0);
        let t = self.boundary_depth();
        let ext = self.l_of_d(0.0);
        match self.geometry {
            DomainGeometry::Interval { a: lo, b: hi } => {
                let half = 0.5 * (hi - lo);
                if half <= t {
                    return Err(domain("interval too short: every ball meets the boundary"));
                }
                let bulk = 2.0 * integrate(|d| self.l_of_d(d).powi(-2), t, half, &spec)?.value;
                let inner = 2.0 * integrate(|d| self.l_of_d(d).powf(a), 0.0, t, &spec)?.value;
                Ok((bulk, inner + 2.0 * ext * ext.powf(a)))
            }
            DomainGeometry::Disk { radius, .. } => {
                if radius <= t {
                    return Err(domain("disk too small: every ball meets the boundary"));
                }
                let bulk = integrate_breaks(
                    |r| 2.0 * PI * r * self.l_of_d(radius - r).powi(-2),
                    &[0.0, radius - t],
                    &spec,
                )?
                .value;
                let inner = integrate(|r| 2.0 * PI * r * self.l_of_d(radius - r).powf(a), radius - t, radius, &spec)?.value;
                let outer = PI * ((radius + ext).powi(2) - radius * radius) * ext.powf(a);
                Ok((bulk, inner + outer))
            }
            DomainGeometry::Rectangle { .. } => Err(domain("neighborhood integrals implemented for interval and disk")),
        }
    }
}

/// Empirical l₀-scaling of the two neighbourhood integrals.
#[derive(Debug, Clone, PartialEq)]
pub struct NeighborhoodReport {
    pub a: f64,
    pub l0s: Vec<f64>,
    pub bulk: Vec<f64>,
    pub boundary: Vec<f64>,
    /// Least-squares slope of log(bulk) against log(l₀); expected ≈ −1.
    pub bulk_exponent: f64,
    /// Same for the boundary-layer integral; expected ≈ a + 1.
    pub boundary_exponent: f64,
}

pub const NEIGHBORHOOD_L0S: [f64; 3] = [0.1, 0.05, 0.025];

pub fn neighborhood_integrals(family: &LocalizationFamily, a: f64) -> Result<NeighborhoodReport> {
    let mut bulk = Vec::new();
    let mut boundary = Vec::new();
    for &l0 in &NEIGHBORHOOD_L0S {
        let (b, u) = family.with_l0(l0)?.neighborhood_pair(a)?;
        bulk.push(b);
        boundary.push(u);
    }
    let x: Vec<f64> = NEIGHBORHOOD_L0S.iter().map(|v| v.ln()).collect();
    Ok(NeighborhoodReport {
        a,
        l0s: NEIGHBORHOOD_L0S.to_vec(),
        bulk_exponent: slope(&x, &bulk),
        boundary_exponent: slope(&x, &boundary),
        bulk,
        boundary,
    })
}

fn slope(x: &[f64], y: &[f64]) -> f64 {
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    sxy / sxx
}
