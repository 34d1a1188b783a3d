use alloc::collections::BinaryHeap;
use core::cmp::Ordering;
use core::f64::consts::PI;

#[cfg(not(feature = "std"))]
use num_traits::Float;

use super::rules::{WG10, WGK21, XGK21};
use crate::error::{domain, Error, Result};

/// How to treat `∫^∞ env(t) cos(ωt+φ) dt`, which converges only conditionally
/// when the envelope decays slowly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OscillatoryPolicy {
    /// Plain adaptive quadrature on the mapped infinite interval.
    None,
    /// Integrate to a cut and add the integration-by-parts tail in closed form.
    #[default]
    ClosedFormTail,
    /// Cesàro-average the partial integrals over one period past the cut.
    AveragedTail,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
    pub oscillatory_policy: OscillatoryPolicy,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            rel_tol: 1e-8,
            abs_tol: 1e-12,
            max_subdivisions: 2000,
            oscillatory_policy: OscillatoryPolicy::ClosedFormTail,
        }
    }
}

impl QuadratureSpec {
    pub fn new(rel_tol: f64, abs_tol: f64, max_subdivisions: usize) -> Result<Self> {
        let q = QuadratureSpec {
            rel_tol,
            abs_tol,
            max_subdivisions,
            ..Default::default()
        };
        q.validate()?;
        Ok(q)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0) || !(self.abs_tol >= 0.0) || self.max_subdivisions < 1 {
            return Err(domain("quadrature spec needs rel_tol > 0, abs_tol ≥ 0, max_subdivisions ≥ 1"));
        }
        Ok(())
    }

    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn with_abs_tol(mut self, abs_tol: f64) -> Self {
        self.abs_tol = abs_tol;
        self
    }

    pub fn with_policy(mut self, p: OscillatoryPolicy) -> Self {
        self.oscillatory_policy = p;
        self
    }

    fn target(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct IntegralResult {
    pub value: f64,
    pub err_estimate: f64,
    pub evaluations: usize,
}

impl core::ops::Add for IntegralResult {
    type Output = IntegralResult;
    fn add(self, o: IntegralResult) -> IntegralResult {
        IntegralResult {
            value: self.value + o.value,
            err_estimate: self.err_estimate + o.err_estimate,
            evaluations: self.evaluations + o.evaluations,
        }
    }
}

/// One 21-point Gauss–Kronrod panel: (value, error estimate), QUADPACK error heuristic.
fn gk21(f: &mut impl FnMut(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut rk = WGK21[10] * fc;
    let mut rg = 0.0;
    let mut fv = [(0.0, 0.0); 10];
    for i in 0..10 {
        let dx = h * XGK21[i];
        let (f1, f2) = (f(c - dx), f(c + dx));
        fv[i] = (f1, f2);
        rk += WGK21[i] * (f1 + f2);
        if i % 2 == 1 {
            rg += WG10[i / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * rk;
    let mut asc = WGK21[10] * (fc - mean).abs();
    for i in 0..10 {
        asc += WGK21[i] * ((fv[i].0 - mean).abs() + (fv[i].1 - mean).abs());
    }
    let asc = asc * h.abs();
    let value = rk * h;
    let mut err = ((rk - rg) * h).abs();
    if asc != 0.0 && err != 0.0 {
        err = asc * (1.0f64).min((200.0 * err / asc).powf(1.5));
    }
    // roundoff floor
    let floor = 50.0 * f64::EPSILON * (rk * h).abs();
    (value, err.max(floor))
}

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

impl PartialEq for Panel {
    fn eq(&self, o: &Self) -> bool {
        self.err == o.err
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Panel {
    fn cmp(&self, o: &Self) -> Ordering {
        self.err.total_cmp(&o.err)
    }
}

/// Adaptive bisection on a finite interval, starting from the given break points.
pub fn integrate_breaks(mut f: impl FnMut(f64) -> f64, breaks: &[f64], spec: &QuadratureSpec) -> Result<IntegralResult> {
    spec.validate()?;
    let mut heap = BinaryHeap::new();
    let (mut total, mut total_err) = (0.0, 0.0);
    let mut evals = 0;
    for w in breaks.windows(2) {
        if w[1] == w[0] {
            continue;
        }
        let (v, e) = gk21(&mut f, w[0], w[1]);
        evals += 21;
        total += v;
        total_err += e;
        heap.push(Panel { a: w[0], b: w[1], value: v, err: e });
    }
    let mut splits = heap.len();
    while total_err > spec.target(total) {
        if splits >= spec.max_subdivisions {
            return Err(Error::NonConvergence {
                value: total,
                err: total_err,
                evaluations: evals,
            });
        }
        let p = heap.pop().expect("nonempty heap");
        let m = 0.5 * (p.a + p.b);
        if m <= p.a || m >= p.b {
            // panel below resolution; accept what we have
            heap.push(p);
            break;
        }
        let (v1, e1) = gk21(&mut f, p.a, m);
        let (v2, e2) = gk21(&mut f, m, p.b);
        evals += 42;
        splits += 1;
        total += v1 + v2 - p.value;
        total_err += e1 + e2 - p.err;
        heap.push(Panel { a: p.a, b: m, value: v1, err: e1 });
        heap.push(Panel { a: m, b: p.b, value: v2, err: e2 });
    }
    // recompute sums to shed accumulated cancellation
    let (value, err) = heap.iter().fold((0.0, 0.0), |(v, e), p| (v + p.value, e + p.err));
    Ok(IntegralResult {
        value,
        err_estimate: err,
        evaluations: evals,
    })
}

/// ∫_a^b f, with `b = +∞` allowed (mapped by x = a + u/(1−u)).
pub fn integrate(mut f: impl FnMut(f64) -> f64, a: f64, b: f64, spec: &QuadratureSpec) -> Result<IntegralResult> {
    if a.is_nan() || b.is_nan() || a == f64::INFINITY {
        return Err(domain("integration limits must be ordered reals"));
    }
    if b == f64::INFINITY {
        let g = move |u: f64| {
            let om = 1.0 - u;
            let x = a + u / om;
            let y = f(x);
            if y == 0.0 {
                0.0
            } else {
                y / (om * om)
            }
        };
        return integrate_breaks(g, &[0.0, 0.5, 1.0], spec);
    }
    if b < a {
        return integrate(f, b, a, spec).map(|r| IntegralResult { value: -r.value, ..r });
    }
    integrate_breaks(f, &[a, b], spec)
}

/// ∫_a^∞ env(t) cos(ω t + φ) dt under the spec's oscillatory policy.
///
/// `env` should be smooth and eventually monotone; the tail past the cut is
/// handled according to [`OscillatoryPolicy`].
pub fn integrate_oscillatory(
    env: impl Fn(f64) -> f64,
    omega: f64,
    phase: f64,
    a: f64,
    spec: &QuadratureSpec,
) -> Result<IntegralResult> {
    if !(omega > 0.0) {
        return Err(domain("oscillatory frequency must be positive"));
    }
    let period = 2.0 * PI / omega;
    let g = |t: f64| env(t) * (omega * t + phase).cos();
    match spec.oscillatory_policy {
        OscillatoryPolicy::None => integrate(g, a, f64::INFINITY, spec),
        OscillatoryPolicy::ClosedFormTail => {
            // cut far enough that three integration-by-parts terms are accurate
            let cut = a + period * (64.0f64).max((8.0 / period).ceil());
            let head = periods(&g, a, cut, period, spec)?;
            let h = 1e-3 * (1.0 + cut.abs());
            let e0 = env(cut);
            let e1 = (env(cut + h) - env(cut - h)) / (2.0 * h);
            let e2 = (env(cut + h) - 2.0 * e0 + env(cut - h)) / (h * h);
            let th = omega * cut + phase;
            // ∫_T^∞ e cos = −e sin/ω − e′ cos/ω² + e″ sin/ω³ + …
            let tail = -e0 * th.sin() / omega - e1 * th.cos() / (omega * omega) + e2 * th.sin() / omega.powi(3);
            let e3 = e2.abs() / omega.powi(4) + e2.abs() * h;
            Ok(head
                + IntegralResult {
                    value: tail,
                    err_estimate: e3,
                    evaluations: 5,
                })
        }
        OscillatoryPolicy::AveragedTail => {
            let cut = a + period * 64.0;
            let head = periods(&g, a, cut, period, spec)?;
            // mean of partial integrals over one period (trapezoid is exact for the periodic part)
            let m = 16;
            let dt = period / m as f64;
            let mut partial = 0.0;
            let mut acc = 0.0;
            let mut err = 0.0;
            let mut evals = 0;
            for k in 0..m {
                let r = integrate_breaks(g, &[cut + k as f64 * dt, cut + (k + 1) as f64 * dt], spec)?;
                partial += r.value;
                err += r.err_estimate;
                evals += r.evaluations;
                acc += partial;
            }
            let mean_shift = acc / m as f64 - 0.5 * partial / m as f64;
            Ok(head
                + IntegralResult {
                    value: mean_shift,
                    err_estimate: err + (env(cut) / omega).abs() * 1e-3,
                    evaluations: evals,
                })
        }
    }
}

fn periods(g: &impl Fn(f64) -> f64, a: f64, b: f64, period: f64, spec: &QuadratureSpec) -> Result<IntegralResult> {
    let n = ((b - a) / period).round().max(1.0) as usize;
    let mut breaks = alloc::vec::Vec::with_capacity(n + 1);
    for k in 0..=n {
        breaks.push(a + (b - a) * k as f64 / n as f64);
    }
    let spec = QuadratureSpec {
        max_subdivisions: spec.max_subdivisions.max(4 * n),
        ..*spec
    };
    integrate_breaks(g, &breaks, &spec)
}

/// Laplace transform ∫₀^∞ e^{−tξ} f(ξ) dξ.
pub fn laplace(f: impl Fn(f64) -> f64, t: f64, spec: &QuadratureSpec) -> Result<f64> {
    if !(t > 0.0) {
        return Err(domain("Laplace variable must be positive"));
    }
    // rescale so the exponential has unit rate
    let r = integrate(|v| (-v).exp() * f(v / t), 0.0, f64::INFINITY, spec)?;
    Ok(r.value / t)
}
