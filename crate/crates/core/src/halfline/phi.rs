use alloc::vec::Vec;
use core::f64::consts::PI;

#[cfg(not(feature = "std"))]
use num_traits::Float;

use super::ln_psi_lambda;

// Trapezoid step in u = ln ζ. Both ln ψ_λ(e^{2u}) and the kernel 1/(2cosh) are analytic
// in |Im u| < π/2, so the error is O(exp(−π²/STEP)).
const STEP: f64 = 0.2;
// kernel cut: 1/(2cosh 42) ≈ 6e−19
const REACH: f64 = 42.0;

/// φ_λ(t) by the trapezoid rule on a uniform grid in `u = ln ζ`, with `ln ψ_λ` sampled once.
///
/// Spectrally accurate and cheap per evaluation; used to fill the γ tables. `t` outside the
/// grid's reach falls back to [`super::phi_fn`].
#[derive(Debug, Clone)]
pub struct PhiGrid {
    lambda: f64,
    s: f64,
    u0: f64,
    ez: Vec<f64>,
    lv: Vec<f64>,
}

impl PhiGrid {
    /// Grid good for `t ∈ [t_min, t_max]`.
    pub fn new(lambda: f64, s: f64, t_min: f64, t_max: f64) -> PhiGrid {
        let u0 = (t_min.ln() - REACH).floor();
        let u1 = (t_max.ln() + REACH).ceil();
        let n = ((u1 - u0) / STEP).ceil() as usize + 1;
        let mut ez = Vec::with_capacity(n);
        let mut lv = Vec::with_capacity(n);
        for k in 0..n {
            let u = u0 + k as f64 * STEP;
            ez.push(u.exp());
            lv.push(ln_psi_lambda(lambda, (2.0 * u).exp(), s));
        }
        PhiGrid { lambda, s, u0, ez, lv }
    }

    pub fn phi(&self, t: f64) -> f64 {
        if t == 0.0 {
            return 1.0;
        }
        let c = t.ln();
        let k0 = ((c - REACH - self.u0) / STEP).floor();
        let k1 = ((c + REACH - self.u0) / STEP).ceil();
        if k0 < 0.0 || k1 as usize >= self.ez.len() {
            return super::phi_fn(self.lambda, t, self.s).unwrap_or(f64::NAN);
        }
        let mut acc = 0.0;
        for k in k0 as usize..=k1 as usize {
            let a = self.ez[k];
            acc += self.lv[k] / (t / a + a / t);
        }
        (acc * STEP / PI).exp()
    }
}
