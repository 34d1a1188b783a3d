use alloc::vec::Vec;
use core::f64::consts::PI;

#[cfg(not(feature = "std"))]
use num_traits::Float;

use super::{dpsi, gamma_from_phi, omega, psi, spectral_edge, theta_with, FractionalOrder, PhiGrid};
use crate::error::{Error, Result};
use crate::quadcore::{integrate_breaks, IntegralResult, QuadratureSpec, Rule};

// λ-table: log-spaced nodes on [1e−4, 1e4].
pub(crate) const LAMBDA_MIN: f64 = 1e-4;
pub(crate) const LAMBDA_MAX: f64 = 1e4;
pub(crate) const N_LAMBDA: usize = 400;
// x-table for G_λ(x) and ∫_x^∞ G_λ²: log-spaced on [1e−10, 80]; G_λ(80) < e^{−80}.
const X_MIN: f64 = 1e-10;
const X_MAX: f64 = 80.0;
const X_STEP: f64 = 0.05;
// ξ-rule: ξ = 1 + x, geometric panels for x ∈ [1e−12, 1e12], then a v = (ξ/ξ_T)^{−s} tail.
const XI_LO: f64 = 1e-12;
const XI_HI: f64 = 1e12;

/// Shared ξ-rule (nodes, base weights) for ∫₁^∞ · dξ, tuned to the x^s edge at ξ = 1
/// and the ξ^{−1−s} decay.
pub(crate) fn xi_rule(s: f64) -> Rule {
    let mut r = Rule::geometric(XI_LO, XI_HI, 2.0, 10).mapped(|x| 1.0 + x, |_| 1.0);
    let xt = 1.0 + XI_HI;
    let tail = Rule::composite(&[0.0, 1.0], 20).mapped(
        |v| xt * v.powf(-1.0 / s),
        |v| xt / s * v.powf(-1.0 / s - 1.0),
    );
    r.extend(tail);
    r
}

/// ξ-rule with weights `w_i γ_λ(ξ_i)`, so that `G_λ(x) ≈ Σ W_i e^{−ξ_i x}`.
pub(crate) fn gamma_rule(lambda: f64, s: f64) -> Rule {
    let base = xi_rule(s);
    let xmax = base.nodes.iter().cloned().fold(1.0, f64::max);
    let grid = PhiGrid::new(lambda, s, 1.0, xmax);
    let weights = base
        .nodes
        .iter()
        .zip(&base.weights)
        .map(|(&xi, &w)| w * gamma_from_phi(lambda, xi, s, grid.phi(xi)))
        .collect();
    Rule { nodes: base.nodes, weights }
}

/// Four-point Lagrange stencil at fractional grid position `p` on a grid of `n` points.
fn stencil(p: f64, n: usize) -> (usize, [f64; 4]) {
    let j0 = ((p.floor() as isize) - 1).clamp(0, n as isize - 4) as usize;
    let t = p - j0 as f64;
    let mut w = [0.0; 4];
    for (m, wm) in w.iter_mut().enumerate() {
        let mut l = 1.0;
        for k in 0..4 {
            if k != m {
                l *= (t - k as f64) / (m as f64 - k as f64);
            }
        }
        *wm = l;
    }
    (j0, w)
}

/// Monotone cubic Hermite on a uniform grid: fourth-order centred slopes, limited
/// (Fritsch–Carlson) only where they would break monotonicity.
#[derive(Debug, Clone)]
struct Pchip {
    x0: f64,
    h: f64,
    y: Vec<f64>,
    m: Vec<f64>,
}

impl Pchip {
    fn new(x0: f64, h: f64, y: Vec<f64>) -> Pchip {
        let n = y.len();
        let dl: Vec<f64> = y.windows(2).map(|p| (p[1] - p[0]) / h).collect();
        let mut m = alloc::vec![0.0; n];
        for k in 0..n {
            m[k] = if k >= 2 && k + 2 < n {
                (y[k - 2] - 8.0 * y[k - 1] + 8.0 * y[k + 1] - y[k + 2]) / (12.0 * h)
            } else if k == 0 {
                (-3.0 * y[0] + 4.0 * y[1] - y[2]) / (2.0 * h)
            } else if k == n - 1 {
                (3.0 * y[n - 1] - 4.0 * y[n - 2] + y[n - 3]) / (2.0 * h)
            } else {
                (y[k + 1] - y[k - 1]) / (2.0 * h)
            };
        }
        for k in 0..n - 1 {
            let d = dl[k];
            if d == 0.0 {
                m[k] = 0.0;
                m[k + 1] = 0.0;
                continue;
            }
            for j in [k, k + 1] {
                let r = m[j] / d;
                if r < 0.0 {
                    m[j] = 0.0;
                } else if r > 3.0 {
                    m[j] = 3.0 * d;
                }
            }
        }
        Pchip { x0, h, y, m }
    }

    fn eval(&self, x: f64) -> f64 {
        let n = self.y.len();
        let p = ((x - self.x0) / self.h).clamp(0.0, (n - 1) as f64);
        let k = (p.floor() as usize).min(n - 2);
        let t = p - k as f64;
        let (t2, t3) = (t * t, t * t * t);
        let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        let h10 = t3 - 2.0 * t2 + t;
        let h01 = -2.0 * t3 + 3.0 * t2;
        let h11 = t3 - t2;
        h00 * self.y[k] + h10 * self.h * self.m[k] + h01 * self.y[k + 1] + h11 * self.h * self.m[k + 1]
    }
}

/// Where a λ falls relative to the table.
enum Regime {
    /// below the table: G ∝ λ
    Small(f64),
    /// inside: node stencil
    Table(usize, [f64; 4]),
    /// above: massless scaling G_λ(x) = G_{λmax}(x λ/λmax); carries λ/λmax
    Large(f64),
}

/// Truncated spectral shift `ξ_T(μ) = ∫₀^T (e(μ) − e⁺(t,μ)) dt` with its T-doubling delta.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncatedShift {
    pub value: f64,
    pub t_cut: f64,
    /// |ξ_{2T} − ξ_T|
    pub doubling_delta: f64,
}

/// Tabulated spectral data of the half-line model for one order.
///
/// Construction evaluates ϑ_λ and the γ_λ-weights on a log-spaced λ grid, plus
/// `G_λ(x)` and `∫_x^∞ G_λ²` on a log-spaced x grid. Everything afterwards is
/// interpolation, closed forms and quadrature; the model is immutable.
#[derive(Debug, Clone)]
pub struct HalfLineModel {
    pub order: FractionalOrder,
    pub quad: QuadratureSpec,
    ln_lmin: f64,
    dl: f64,
    lambdas: Vec<f64>,
    theta_table: Vec<f64>,
    theta_interp: Pchip,
    xi: Vec<f64>,
    /// memoized γ_λ(ξ) quadrature weights: row j holds w_i γ_{λ_j}(ξ_i)
    gamma_cache: Vec<f64>,
    i_total: Vec<f64>,
    /// Power-law decay rate of I_λ fitted over the last decade of the table.
    i_decay: f64,
    ln_xmin: f64,
    nx: usize,
    g_table: Vec<f64>,
    q_table: Vec<f64>,
}

impl HalfLineModel {
    pub fn new(order: FractionalOrder) -> Result<Self> {
        Self::with_quad(order, QuadratureSpec::default())
    }

    pub fn with_quad(order: FractionalOrder, quad: QuadratureSpec) -> Result<Self> {
        let s = order.s;
        FractionalOrder::new(s, order.d)?;
        quad.validate()?;
        let ln_lmin = LAMBDA_MIN.ln();
        let dl = (LAMBDA_MAX.ln() - ln_lmin) / (N_LAMBDA - 1) as f64;
        let lambdas: Vec<f64> = (0..N_LAMBDA).map(|j| (ln_lmin + j as f64 * dl).exp()).collect();

        let tspec = QuadratureSpec::default().with_rel_tol(1e-11).with_abs_tol(1e-14);
        let mut theta_table = Vec::with_capacity(N_LAMBDA);
        for &l in &lambdas {
            theta_table.push(theta_with(l, s, &tspec)?);
        }

        let base = xi_rule(s);
        let nxi = base.len();
        let xmax = base.nodes.iter().cloned().fold(1.0, f64::max);
        let mut gamma_cache = Vec::with_capacity(N_LAMBDA * nxi);
        for &l in &lambdas {
            let grid = PhiGrid::new(l, s, 1.0, xmax);
            for (&xi, &w) in base.nodes.iter().zip(&base.weights) {
                gamma_cache.push(w * gamma_from_phi(l, xi, s, grid.phi(xi)));
            }
        }
        let xi = base.nodes;

        let mut i_total = Vec::with_capacity(N_LAMBDA);
        for (j, &l) in lambdas.iter().enumerate() {
            let w = &gamma_cache[j * nxi..(j + 1) * nxi];
            let (sn, cs) = theta_table[j].sin_cos();
            let mut sp = 0.0;
            let mut qp = 0.0;
            for i in 0..nxi {
                sp += w[i] * (xi[i] * sn + l * cs) / (xi[i] * xi[i] + l * l);
                let mut row = 0.5 * w[i] / (2.0 * xi[i]);
                for k in i + 1..nxi {
                    row += w[k] / (xi[i] + xi[k]);
                }
                qp += 2.0 * w[i] * row;
            }
            i_total.push(-(2.0 * theta_table[j]).sin() / (2.0 * l) + 4.0 * sp - 2.0 * qp);
        }

        let back = (N_LAMBDA - 1) / 8;
        let i_decay = ((i_total[N_LAMBDA - 1 - back] / i_total[N_LAMBDA - 1]).ln()
            / (lambdas[N_LAMBDA - 1] / lambdas[N_LAMBDA - 1 - back]).ln())
        .max(1.0);

        let ln_xmin = X_MIN.ln();
        let nx = ((X_MAX.ln() - ln_xmin) / X_STEP).ceil() as usize + 1;
        let xs: Vec<f64> = (0..nx).map(|k| (ln_xmin + k as f64 * X_STEP).exp()).collect();
        let mut ex = alloc::vec![0.0; nxi * nx];
        for (i, &xv) in xi.iter().enumerate() {
            for (k, &x) in xs.iter().enumerate() {
                ex[i * nx + k] = (-xv * x).exp();
            }
        }
        let mut g_table = alloc::vec![0.0; N_LAMBDA * nx];
        for j in 0..N_LAMBDA {
            let w = &gamma_cache[j * nxi..(j + 1) * nxi];
            let row = &mut g_table[j * nx..(j + 1) * nx];
            for i in 0..nxi {
                if w[i] == 0.0 {
                    continue;
                }
                let e = &ex[i * nx..(i + 1) * nx];
                for k in 0..nx {
                    row[k] += w[i] * e[k];
                }
            }
        }
        // ∫_{x_k}^∞ G² dx by cubic panels in u = ln x (integrand G² e^u)
        let mut q_table = alloc::vec![0.0; N_LAMBDA * nx];
        for j in 0..N_LAMBDA {
            let g = &g_table[j * nx..(j + 1) * nx];
            let f: Vec<f64> = (0..nx).map(|k| g[k] * g[k] * xs[k]).collect();
            let q = &mut q_table[j * nx..(j + 1) * nx];
            for k in (0..nx - 1).rev() {
                let panel = if k >= 1 && k + 2 < nx {
                    X_STEP * (-f[k - 1] + 13.0 * f[k] + 13.0 * f[k + 1] - f[k + 2]) / 24.0
                } else {
                    0.5 * X_STEP * (f[k] + f[k + 1])
                };
                q[k] = q[k + 1] + panel;
            }
        }

        let theta_interp = Pchip::new(ln_lmin, dl, theta_table.clone());
        Ok(HalfLineModel {
            order,
            quad,
            ln_lmin,
            dl,
            lambdas,
            theta_table,
            theta_interp,
            xi,
            gamma_cache,
            i_total,
            i_decay,
            ln_xmin,
            nx,
            g_table,
            q_table,
        })
    }

    pub fn s(&self) -> f64 {
        self.order.s
    }

    /// λ nodes of the tables.
    pub fn lambda_nodes(&self) -> &[f64] {
        &self.lambdas
    }

    /// ϑ at the λ nodes.
    pub fn theta_table(&self) -> &[f64] {
        &self.theta_table
    }

    /// Regular part of `∫₀^∞ (1 − 2F_λ²) dt` at the λ nodes.
    pub fn i_table(&self) -> &[f64] {
        &self.i_total
    }

    fn regime(&self, lambda: f64) -> Regime {
        if lambda < LAMBDA_MIN {
            Regime::Small(lambda / LAMBDA_MIN)
        } else if lambda > LAMBDA_MAX {
            Regime::Large(lambda / LAMBDA_MAX)
        } else {
            let (j0, w) = stencil((lambda.ln() - self.ln_lmin) / self.dl, N_LAMBDA);
            Regime::Table(j0, w)
        }
    }

    fn weights_row(&self, j: usize) -> &[f64] {
        let n = self.xi.len();
        &self.gamma_cache[j * n..(j + 1) * n]
    }

    /// ϑ_λ: monotone interpolation inside the table; outside, the end behaviour
    /// ϑ_λ ≈ ϑ′(0)λ and ϑ_∞ − ϑ_λ ∝ λ^{−2}, anchored at the end nodes.
    /// The free function [`super::theta`] evaluates anywhere by quadrature.
    pub fn theta(&self, lambda: f64) -> f64 {
        if lambda < LAMBDA_MIN {
            self.theta_table[0] * lambda / LAMBDA_MIN
        } else if lambda > LAMBDA_MAX {
            let inf = super::theta_infinity(self.s());
            let r = LAMBDA_MAX / lambda;
            inf - (inf - self.theta_table[N_LAMBDA - 1]) * r * r
        } else {
            self.theta_interp.eval(lambda.ln())
        }
    }

    fn g_node(&self, j: usize, x: f64) -> f64 {
        if x >= X_MAX {
            return 0.0;
        }
        if x < X_MIN {
            let w = self.weights_row(j);
            return self.xi.iter().zip(w).map(|(xi, w)| w * (-xi * x).exp()).sum();
        }
        let (k0, w) = stencil((x.ln() - self.ln_xmin) / X_STEP, self.nx);
        let row = &self.g_table[j * self.nx..(j + 1) * self.nx];
        (0..4).map(|m| w[m] * row[k0 + m]).sum()
    }

    fn q_node(&self, j: usize, x: f64) -> f64 {
        if x >= X_MAX {
            return 0.0;
        }
        let row = &self.q_table[j * self.nx..(j + 1) * self.nx];
        if x < X_MIN {
            let (g0, g1) = (self.g_node(j, x), self.g_table[j * self.nx]);
            return row[0] + 0.5 * (X_MIN - x) * (g0 * g0 + g1 * g1);
        }
        let (k0, w) = stencil((x.ln() - self.ln_xmin) / X_STEP, self.nx);
        (0..4).map(|m| w[m] * row[k0 + m]).sum()
    }

    /// G_λ(x) = ∫ e^{−xξ} γ_λ(ξ) dξ.
    pub fn big_g(&self, lambda: f64, x: f64) -> f64 {
        match self.regime(lambda) {
            Regime::Small(r) => r * self.g_node(0, x),
            Regime::Large(r) => self.g_node(N_LAMBDA - 1, x * r),
            Regime::Table(j0, w) => (0..4).map(|m| w[m] * self.g_node(j0 + m, x)).sum(),
        }
    }

    /// Generalized eigenfunction F_λ(x) = sin(λx + ϑ_λ) − G_λ(x).
    pub fn f(&self, lambda: f64, x: f64) -> f64 {
        (lambda * x + self.theta(lambda)).sin() - self.big_g(lambda, x)
    }

    /// Regular part of `∫₀^∞ (1 − 2F_λ(t)²) dt`:
    /// `−sin(2ϑ_λ)/(2λ) + 4∫ sin(λt+ϑ_λ)G_λ − 2∫ G_λ²`.
    /// The full t-integral additionally carries `(π/4)δ(λ)` from the cosine part.
    pub fn i_reg(&self, lambda: f64) -> f64 {
        match self.regime(lambda) {
            Regime::Small(_) => self.i_total[0],
            Regime::Large(r) => self.i_total[N_LAMBDA - 1] * r.powf(-self.i_decay),
            Regime::Table(j0, w) => (0..4).map(|m| w[m] * self.i_total[j0 + m]).sum(),
        }
    }

    /// Σᵢ wᵢ(λ) h(ξᵢ): G_λ as an exponential sum with interpolated weights, for
    /// closed-form x-integrals. `h` may return `None` to stop early (ξ ascending).
    fn expo_fold(&self, lambda: f64, mut h: impl FnMut(f64) -> Option<f64>) -> f64 {
        let mut acc = 0.0;
        match self.regime(lambda) {
            Regime::Small(r) => {
                for (xi, w) in self.xi.iter().zip(self.weights_row(0)) {
                    match h(*xi) {
                        Some(v) => acc += w * r * v,
                        None => break,
                    }
                }
            }
            Regime::Large(r) => {
                for (xi, w) in self.xi.iter().zip(self.weights_row(N_LAMBDA - 1)) {
                    match h(xi * r) {
                        Some(v) => acc += w * v,
                        None => break,
                    }
                }
            }
            Regime::Table(j0, wl) => {
                let n = self.xi.len();
                let rows = &self.gamma_cache[j0 * n..(j0 + 4) * n];
                for (i, xi) in self.xi.iter().enumerate() {
                    match h(*xi) {
                        Some(v) => {
                            let w = wl[0] * rows[i] + wl[1] * rows[n + i] + wl[2] * rows[2 * n + i] + wl[3] * rows[3 * n + i];
                            acc += w * v
                        }
                        None => break,
                    }
                }
            }
        }
        acc
    }

    /// ∫_X^∞ G_λ(x)² dx.
    pub fn g2_tail(&self, lambda: f64, x: f64) -> f64 {
        match self.regime(lambda) {
            Regime::Small(r) => r * r * self.q_node(0, x),
            Regime::Large(r) => self.q_node(N_LAMBDA - 1, x * r) / r,
            Regime::Table(j0, w) => (0..4).map(|m| w[m] * self.q_node(j0 + m, x)).sum(),
        }
    }

    /// ∫_X^∞ sin(λx + ϑ_λ) G_λ(x) dx in closed form over the exponential sum.
    pub fn sin_g_tail(&self, lambda: f64, x: f64) -> f64 {
        let (sn, cs) = (lambda * x + self.theta(lambda)).sin_cos();
        let l2 = lambda * lambda;
        self.expo_fold(lambda, |xi| {
            let a = xi * x;
            if a > 745.0 {
                return None;
            }
            Some((-a).exp() * (xi * sn + lambda * cs) / (xi * xi + l2))
        })
    }

    /// Regular part of `∫_X^∞ (1 − 2F_λ(x)²) dx` (the δ(λ) term excluded).
    pub fn defect_tail(&self, lambda: f64, x: f64) -> f64 {
        if x == 0.0 {
            return self.i_reg(lambda);
        }
        let th = self.theta(lambda);
        -(2.0 * lambda * x + 2.0 * th).sin() / (2.0 * lambda) + 4.0 * self.sin_g_tail(lambda, x) - 2.0 * self.g2_tail(lambda, x)
    }

    /// ξ-rule at an arbitrary λ (not interpolated): nodes ξ_i, weights w_i γ_λ(ξ_i).
    pub fn gamma_rule(&self, lambda: f64) -> Rule {
        gamma_rule(lambda, self.s())
    }

    /// e⁺(t,u,μ) = (2/π)∫₀^{Λ(μ)} F_λ(t)F_λ(u) dλ; exactly 0 for μ ≤ 1.
    pub fn kernel_e_plus(&self, t: f64, u: f64, mu: f64) -> Result<f64> {
        let edge = spectral_edge(mu, self.s());
        if edge == 0.0 {
            return Ok(0.0);
        }
        let r = edge_integral(|l| self.f(l, t) * self.f(l, u), edge, t + u, &self.quad)?;
        Ok(2.0 / PI * r.value)
    }

    /// Diagonal a⁺(t,μ) = (2/π)∫₀^{Λ(μ)} (μ − (1+λ²)^s) F_λ(t)² dλ; exactly 0 for μ ≤ 1.
    pub fn kernel_a_plus(&self, t: f64, mu: f64) -> Result<f64> {
        let s = self.s();
        let edge = spectral_edge(mu, s);
        if edge == 0.0 {
            return Ok(0.0);
        }
        let r = edge_integral(
            |l| {
                let f = self.f(l, t);
                (mu - omega(l, s)) * f * f
            },
            edge,
            2.0 * t,
            &self.quad,
        )?;
        Ok(2.0 / PI * r.value)
    }

    /// Spectral shift ζ(μ) = μ^{−1}∫₀^∞ (a(μ) − a⁺(t,μ)) dt, with the t-integral done per λ:
    /// `ζ(μ) = (1/(πμ)) [ (π/4)(μ−1) + ∫₀^{Λ(μ)} (μ − ω(λ)) I_λ dλ ]`.
    pub fn zeta_shift(&self, mu: f64) -> Result<IntegralResult> {
        let s = self.s();
        let edge = spectral_edge(mu, s);
        if edge == 0.0 {
            return Ok(IntegralResult::default());
        }
        let r = edge_integral(|l| (mu - omega(l, s)) * self.i_reg(l), edge, 0.0, &self.quad)?;
        let c = 1.0 / (PI * mu);
        Ok(IntegralResult {
            value: c * (0.25 * PI * (mu - 1.0) + r.value),
            err_estimate: c * r.err_estimate,
            evaluations: r.evaluations,
        })
    }

    /// ξ_T(μ) = ∫₀^T (e(μ) − e⁺(t,μ)) dt. Convergence as T → ∞ is not guaranteed a priori,
    /// so the value is reported together with |ξ_{2T} − ξ_T|; `Err(TruncationUnstable)` if
    /// that exceeds `tol`.
    pub fn xi_shift(&self, mu: f64, t_cut: f64, tol: f64) -> Result<TruncatedShift> {
        let v1 = self.xi_truncated(mu, t_cut)?;
        let v2 = self.xi_truncated(mu, 2.0 * t_cut)?;
        let delta = (v2 - v1).abs();
        if delta > tol {
            return Err(Error::TruncationUnstable { value: v2, delta });
        }
        Ok(TruncatedShift {
            value: v2,
            t_cut: 2.0 * t_cut,
            doubling_delta: delta,
        })
    }

    fn xi_truncated(&self, mu: f64, t_cut: f64) -> Result<f64> {
        let edge = spectral_edge(mu, self.s());
        if edge == 0.0 {
            return Ok(0.0);
        }
        let r = edge_integral(|l| self.defect_tail(l, 0.0) - self.defect_tail(l, t_cut), edge, 2.0 * t_cut, &self.quad)?;
        Ok(r.value / PI)
    }

    /// Plancherel check for f(x) = x^k e^{−cx}: returns (‖Φf‖², ‖f‖²),
    /// where Φf(λ) = √(2/π)∫₀^∞ f F_λ.
    pub fn plancherel(&self, k: u32, c: f64) -> (f64, f64) {
        let kf = k as f64;
        let fact = crate::quadcore::gamma_fn(kf + 1.0).unwrap_or(f64::NAN);
        let phi_f = |j: usize| {
            let l = self.lambdas[j];
            let th = self.theta_table[j];
            // ∫ x^k e^{−cx} sin(λx+ϑ) = Im(e^{iϑ} k!/(c − iλ)^{k+1})
            let z = num_complex::Complex64::new(c, -l);
            let sin_part = (num_complex::Complex64::from_polar(1.0, th) * fact / z.powu(k + 1)).im;
            let g_part: f64 = self
                .xi
                .iter()
                .zip(self.weights_row(j))
                .map(|(xi, w)| w * fact / (c + xi).powi(k as i32 + 1))
                .sum();
            (2.0 / PI).sqrt() * (sin_part - g_part)
        };
        let mut acc = 0.0;
        for j in 0..N_LAMBDA {
            let v = phi_f(j);
            let wt = if j == 0 || j == N_LAMBDA - 1 { 0.5 } else { 1.0 };
            acc += wt * v * v * self.lambdas[j];
        }
        acc *= self.dl;
        let v0 = phi_f(0);
        let v1 = phi_f(N_LAMBDA - 1);
        // |Φf|² ~ λ² at 0 and ~ λ^{−2k−2} at ∞
        acc += v0 * v0 * LAMBDA_MIN / 3.0 + v1 * v1 * LAMBDA_MAX / (2.0 * kf + 1.0);
        let norm = fact_ratio(k, c);
        (acc, norm)
    }

    /// Projector idempotence: returns (∫₀^∞ e⁺(t,w,μ)e⁺(w,u,μ) dw, e⁺(t,u,μ)).
    ///
    /// The w-integral is truncated at `w_cut` (where G is negligible) and the remainder
    /// added from the large-w asymptotics `e⁺(t,w) ≈ −(2/π)F_Λ(t)cos(Λw+ϑ_Λ)/w`.
    pub fn projector_check(&self, t: f64, u: f64, mu: f64, w_cut: f64) -> Result<(f64, f64)> {
        let s = self.s();
        let edge = spectral_edge(mu, s);
        if edge == 0.0 {
            return Ok((0.0, 0.0));
        }
        let n_l = (edge * w_cut / PI * 2.0).ceil() as usize + 64;
        let panels = n_l.div_ceil(20);
        let edges: Vec<f64> = (0..=panels).map(|k| edge * k as f64 / panels as f64).collect();
        let lr = Rule::composite(&edges, 20);
        let wpan = (w_cut * 2.0).ceil() as usize;
        let wedges: Vec<f64> = (0..=wpan).map(|k| w_cut * k as f64 / wpan as f64).collect();
        let wr = Rule::composite(&wedges, 12);
        let ft: Vec<f64> = lr.nodes.iter().map(|&l| self.f(l, t)).collect();
        let fu: Vec<f64> = lr.nodes.iter().map(|&l| self.f(l, u)).collect();
        let mut lhs = 0.0;
        let c = 2.0 / PI;
        for (&w, &ww) in wr.nodes.iter().zip(&wr.weights) {
            let (mut et, mut eu) = (0.0, 0.0);
            for (a, &l) in lr.nodes.iter().enumerate() {
                let fw = self.f(l, w) * lr.weights[a];
                et += ft[a] * fw;
                eu += fu[a] * fw;
            }
            lhs += ww * c * c * et * eu;
        }
        let thl = self.theta(edge);
        let tail = c * c * self.f(edge, t) * self.f(edge, u) * (0.5 / w_cut - (2.0 * edge * w_cut + 2.0 * thl).sin() / (4.0 * edge * w_cut * w_cut));
        let rhs = c * lr.sum(|l| self.f(l, t) * self.f(l, u));
        Ok((lhs + tail, rhs))
    }

    /// G_λ(x) straight from the cached exponential sum (no x-interpolation); for checks.
    pub fn big_g_exact_node(&self, j: usize, x: f64) -> f64 {
        self.xi.iter().zip(self.weights_row(j)).map(|(xi, w)| w * (-xi * x).exp()).sum()
    }

    /// ∫₀^∞ G_{λ_j}² by the O(n²) double sum; for checks against the table.
    pub fn g2_total_exact_node(&self, j: usize) -> f64 {
        let w = self.weights_row(j);
        let mut acc = 0.0;
        for i in 0..w.len() {
            for k in 0..w.len() {
                acc += w[i] * w[k] / (self.xi[i] + self.xi[k]);
            }
        }
        acc
    }

    /// √(ψ′(λ²)/ψ(λ²)), the amplitude in the closed form of g_λ.
    pub fn psi_ratio(&self, lambda: f64) -> f64 {
        let l2 = lambda * lambda;
        (dpsi(l2, self.s()) / psi(l2, self.s())).sqrt()
    }
}

// ‖x^k e^{−cx}‖² = (2k)!/(2c)^{2k+1}
fn fact_ratio(k: u32, c: f64) -> f64 {
    crate::quadcore::gamma_fn(2.0 * k as f64 + 1.0).unwrap_or(f64::NAN) / (2.0 * c).powi(2 * k as i32 + 1)
}

/// ∫₀^Λ f(λ) dλ. Initial panels: decades 10⁻⁴, 10⁻³, … below Λ (the integrands vary on
/// a log scale near λ ≈ 1 and are smooth at both ends), refined so that no panel spans more
/// than half a period of an oscillation `e^{i·freq·λ}`.
pub(crate) fn edge_integral(f: impl Fn(f64) -> f64, edge: f64, freq: f64, spec: &QuadratureSpec) -> Result<IntegralResult> {
    let mut breaks = alloc::vec![0.0];
    let mut p = 1e-4;
    while p < edge {
        breaks.push(p);
        p *= 10.0;
    }
    breaks.push(edge);
    if freq > 0.0 {
        let h = PI / freq;
        let mut fine = alloc::vec![0.0];
        for w in breaks.windows(2) {
            let k = ((w[1] - w[0]) / h).ceil().max(1.0) as usize;
            for i in 1..=k {
                fine.push(w[0] + (w[1] - w[0]) * i as f64 / k as f64);
            }
        }
        breaks = fine;
    }
    let spec = QuadratureSpec {
        max_subdivisions: spec.max_subdivisions.max(4 * breaks.len()),
        ..*spec
    };
    integrate_breaks(f, &breaks, &spec)
}
