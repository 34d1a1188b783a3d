use super::*;
use crate::quadcore::{integrate, laplace, IntegralResult};
use approx::assert_relative_eq;
use proptest::prelude::*;
use std::sync::OnceLock;

fn half() -> &'static HalfLineModel {
    static M: OnceLock<HalfLineModel> = OnceLock::new();
    M.get_or_init(|| HalfLineModel::new(FractionalOrder::new(0.5, 2).unwrap()).unwrap())
}

fn lap_spec() -> QuadratureSpec {
    QuadratureSpec::default().with_rel_tol(1e-10).with_abs_tol(1e-14)
}

/// g_λ(t) as the Laplace transform of the Laplace transform of γ_λ.
fn double_laplace(lambda: f64, t: f64, s: f64) -> f64 {
    let rule = model::gamma_rule(lambda, s);
    let big_g = |tau: f64| rule.sum_weighted(|xi| (-tau * xi).exp());
    laplace(big_g, t, &lap_spec()).unwrap()
}

impl crate::quadcore::Rule {
    fn sum_weighted(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(x, w)| w * f(*x)).sum()
    }
}

#[test]
fn psi_examples() {
    assert_eq!(psi(0.0, 0.3), 0.0);
    assert_relative_eq!(psi(3.0, 0.5), 1.0, max_relative = 1e-14);
    assert_relative_eq!(psi(1.0, 0.25), 2f64.powf(0.25) - 1.0, max_relative = 1e-14);
}

#[test]
fn order_validation() {
    assert!(FractionalOrder::new(0.0, 2).is_err());
    assert!(FractionalOrder::new(1.0, 2).is_err());
    assert!(FractionalOrder::new(0.5, 1).is_err());
    assert!(theta(-1.0, 0.5).is_err());
    assert!(theta(1.0, 1.5).is_err());
}

#[test]
fn theta_limits_and_order() {
    assert!(theta(1e-6, 0.5).unwrap() < 1e-4);
    assert!((theta(1e6, 0.5).unwrap() - PI / 8.0).abs() < 1e-3);
    for s in [0.3, 0.5, 0.7] {
        assert!(theta(2.0, s).unwrap() > theta(1.0, s).unwrap());
    }
}

#[test]
fn theta_slope_at_zero() {
    // dϑ/dλ|₀ = (1/π)∫₀^∞ ζ^{−2} ln(sζ²/((1+ζ²)^s − 1)) dζ
    for s in [0.25, 0.5, 0.75] {
        let f = |z: f64| {
            let z2 = z * z;
            if z2 < 1e-8 {
                // ln(sζ²/ψ(ζ²)) ≈ (1−s)ζ²/2
                return 0.5 * (1.0 - s);
            }
            (s * z2 / psi(z2, s)).ln() / z2
        };
        let slope = integrate(f, 0.0, f64::INFINITY, &lap_spec()).unwrap().value / PI;
        let h = 1e-4;
        assert_relative_eq!(theta(h, s).unwrap() / h, slope, max_relative = 1e-3);
        // φ′_λ(0) → dϑ/dλ|₀ as λ → 0
        let dt = 1e-5;
        let dphi = (phi_fn(1e-3, dt, s).unwrap() - 1.0) / dt;
        assert_relative_eq!(dphi, slope, max_relative = 2e-2);
    }
}

#[test]
fn phi_examples() {
    assert_eq!(phi_fn(1.0, 0.0, 0.5).unwrap(), 1.0);
    let dt = 1e-5;
    let dphi = (phi_fn(1e3, dt, 0.5).unwrap() - 1.0) / dt;
    assert!(dphi.abs() < 0.05, "φ′(0) at λ=1e3: {dphi}");
    // grid evaluation agrees with direct quadrature
    let grid = PhiGrid::new(2.0, 0.5, 1.0, 1e6);
    for t in [1.0, 3.7, 50.0, 1e4] {
        assert_relative_eq!(grid.phi(t), phi_fn(2.0, t, 0.5).unwrap(), max_relative = 1e-8);
    }
}

#[test]
fn gamma_support_and_laplace_bound() {
    assert_eq!(gamma_density(1.0, 0.5, 0.5).unwrap(), 0.0);
    assert!(gamma_density(1.0, 1.5, 0.5).unwrap() > 0.0);
    let spec = QuadratureSpec::default().with_rel_tol(1e-8);
    let g = laplace(|xi| if xi <= 1.0 { 0.0 } else { gamma_density(1.0, xi, 0.5).unwrap() }, 1.0, &spec).unwrap();
    assert!((0.0..=1.0).contains(&g), "G_1(1) = {g}");
    // G(0) = sin ϑ makes F(0) = 0
    for l in [0.1, 1.0, 10.0] {
        let rule = model::gamma_rule(l, 0.5);
        assert_relative_eq!(rule.sum_weighted(|_| 1.0), theta(l, 0.5).unwrap().sin(), max_relative = 1e-8);
    }
}

#[test]
fn double_laplace_matches_closed_form() {
    for (l, t, s) in [(2.0, 0.7, 0.5), (1.0, 1.0, 0.3)] {
        assert_relative_eq!(double_laplace(l, t, s), g_closed(l, t, s).unwrap(), max_relative = 1e-5);
    }
}

#[test]
fn g_closed_limits() {
    for l in [0.5, 2.0] {
        assert_relative_eq!(g_closed(l, 1e-7, 0.5).unwrap(), g_closed_at_zero(l, 0.5).unwrap(), max_relative = 1e-5);
    }
    assert!(g_closed(1.0, 1e3, 0.5).unwrap().abs() < 1e-2);
}

#[test]
fn eigenfunction_bound_and_far_field() {
    let m = half();
    for i in 0..10 {
        for k in 0..10 {
            let l = 10f64.powf(-2.0 + 0.5 * i as f64);
            let t = 10f64.powf(-2.0 + 0.45 * k as f64);
            assert!(m.f(l, t).abs() <= 2.0);
        }
    }
    assert!((m.f(1.0, 100.0) - (100.0 + m.theta(1.0)).sin()).abs() < 1e-6);
    assert!(m.f(0.7, 0.0).abs() < 1e-7);
}

#[test]
fn model_tables_match_direct_evaluation() {
    let m = half();
    for (l, x) in [(0.05, 0.3), (1.0, 1.0), (7.0, 0.02), (300.0, 0.001)] {
        assert_relative_eq!(m.theta(l), theta(l, 0.5).unwrap(), max_relative = 5e-8);
        assert!((m.f(l, x) - eigenfunction_f(l, x, 0.5).unwrap()).abs() < 1e-7);
    }
}

#[test]
fn plancherel_on_three_functions() {
    let m = half();
    for (k, c) in [(1, 1.0), (2, 0.5), (0, 2.0)] {
        let (phi, f) = m.plancherel(k, c);
        assert_relative_eq!(phi.sqrt(), f.sqrt(), max_relative = 1e-3);
    }
}

#[test]
fn projector_idempotence() {
    let m = half();
    let (lhs, rhs) = m.projector_check(1.0, 2.0, 4.0, 60.0).unwrap();
    assert_relative_eq!(lhs, rhs, max_relative = 1e-3);
}

#[test]
fn kernel_examples() {
    let m = half();
    assert_eq!(m.kernel_e_plus(1.0, 2.0, 0.5).unwrap(), 0.0);
    assert_eq!(m.kernel_a_plus(1.0, 1.0).unwrap(), 0.0);
    for &mu in &[1.5, 4.0, 9.0] {
        let bound = 8.0 / PI * (mu * mu - 1.0f64).sqrt();
        for &(t, u) in &[(0.1, 0.2), (1.0, 3.0), (5.0, 5.0)] {
            assert!(m.kernel_e_plus(t, u, mu).unwrap().abs() <= bound);
        }
        for &t in &[0.0, 0.3, 2.0, 20.0] {
            assert!(m.kernel_a_plus(t, mu).unwrap() >= 0.0);
        }
    }
    let a4 = a_line(4.0, 0.5).unwrap();
    let far = (m.kernel_a_plus(50.0, 4.0).unwrap() - a4).abs();
    assert!(far < 1e-2);
    let near = (m.kernel_a_plus(0.5, 4.0).unwrap() - a4).abs();
    assert!(far < 0.05 * near, "|a⁺−a| at 50: {far}, at 0.5: {near}");
}

#[test]
fn a_line_closed_form() {
    assert_eq!(a_line(1.0, 0.5).unwrap(), 0.0);
    let r3 = 3f64.sqrt();
    assert_relative_eq!(a_line(2.0, 0.5).unwrap(), (r3 - 0.5 * (2.0 + r3).ln()) / PI, max_relative = 1e-12);
    assert_relative_eq!(e_line(5.0, 0.5), 24f64.sqrt() / PI, max_relative = 1e-14);
}

#[test]
fn layer_function_decay_and_moment() {
    let m = half();
    let spec = QuadratureSpec::default().with_rel_tol(1e-6).with_abs_tol(1e-10);
    let k = |t: f64| layer_k(m, 2, t, &spec).unwrap().value;
    assert_relative_eq!(k(0.0), crate::constants::l1(m.order), max_relative = 1e-7);
    assert!(k(100.0).abs() < 1e-3 * k(0.1).abs());
    let moment: IntegralResult = crate::quadcore::integrate_breaks(|t| t.sqrt() * k(t).abs(), &[0.0, 0.1, 1.0, 3.0, 10.0, 30.0], &spec).unwrap();
    assert!(moment.value.is_finite() && moment.value > 0.0 && moment.value < 1.0);
}

#[test]
fn dirichlet_family_tail_at_zero() {
    let spec = QuadratureSpec::default().with_rel_tol(1e-9);
    assert_relative_eq!(layer_tail(&DirichletFamily, 2, 0.0, &spec).unwrap().value, 1.0 / (6.0 * PI), max_relative = 1e-8);
}

#[test]
fn layer_tail_matches_numeric_k_integral() {
    let m = half();
    let spec = QuadratureSpec::default().with_rel_tol(1e-7).with_abs_tol(1e-11);
    let head = crate::quadcore::integrate_breaks(|t| layer_k(m, 2, t, &spec).unwrap().value, &[0.0, 0.1, 1.0, 2.0], &spec).unwrap();
    let t0 = layer_tail(m, 2, 0.0, &spec).unwrap();
    let t2 = layer_tail(m, 2, 2.0, &spec).unwrap();
    assert_relative_eq!(head.value + t2.value, t0.value, max_relative = 1e-6);
}

#[test]
fn zeta_examples() {
    let m = half();
    assert!(m.zeta_shift(1.001).unwrap().value < 1e-2);
    assert_eq!(m.zeta_shift(0.9).unwrap().value, 0.0);
    for mu in [2.0, 4.0, 8.0] {
        assert!(m.zeta_shift(mu).unwrap().value > 0.0);
    }
}

#[test]
fn xi_shift_derivative_relation() {
    // a(μ) = ∫₀^μ e ⇒ d(μζ(μ))/dμ = ξ(μ)
    let m = half();
    assert_eq!(m.xi_shift(0.99, 10.0, 1.0).unwrap().value, 0.0);
    let h = 1e-3;
    let mz = |mu: f64| mu * m.zeta_shift(mu).unwrap().value;
    let deriv = (mz(4.0 + h) - mz(4.0 - h)) / (2.0 * h);
    let xi = m.xi_shift(4.0, 200.0, 1e-2).unwrap();
    assert!(xi.doubling_delta < 1e-2);
    assert!((xi.value - deriv).abs() < 2.0 * xi.doubling_delta + 1e-4, "ξ = {:?}, d(μζ)/dμ = {deriv}", xi);
    // tiny tolerance exposes the truncation honestly
    assert!(matches!(m.xi_shift(4.0, 2.0, 1e-12), Err(crate::Error::TruncationUnstable { .. })));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn psi_increasing(e in 0.0f64..1e3, de in 1e-6f64..10.0, s in 0.01f64..0.99) {
        prop_assert!(psi(e + de, s) > psi(e, s));
    }

    #[test]
    fn theta_monotone_and_bounded(l in -4.0f64..4.0, dl in 0.01f64..1.0, s in 0.05f64..0.95) {
        let (a, b) = (10f64.powf(l), 10f64.powf(l + dl));
        let (ta, tb) = (theta(a, s).unwrap(), theta(b, s).unwrap());
        prop_assert!(ta >= 0.0 && tb < theta_infinity(s));
        prop_assert!(tb >= ta);
    }

    #[test]
    fn model_theta_table_monotone(j in 0usize..399) {
        let t = half().theta_table();
        prop_assert!(t[j + 1] >= t[j]);
    }

    #[test]
    fn eigenfunction_bounded(l in -3.0f64..3.0, x in 0.0f64..50.0) {
        prop_assert!(half().f(10f64.powf(l), x).abs() <= 2.0);
    }

    #[test]
    fn kernels_vanish_below_one(t in 0.0f64..10.0, u in 0.0f64..10.0, mu in 0.0f64..=1.0) {
        let m = half();
        prop_assert_eq!(m.kernel_e_plus(t, u, mu).unwrap(), 0.0);
        prop_assert_eq!(m.kernel_a_plus(t, mu).unwrap(), 0.0);
        prop_assert_eq!(m.zeta_shift(mu).unwrap().value, 0.0);
        prop_assert_eq!(a_line(mu, 0.5).unwrap(), 0.0);
    }

    #[test]
    fn a_line_monotone(mu in 1.0f64..20.0, dmu in 0.01f64..5.0, s in 0.1f64..0.9) {
        prop_assert!(a_line(mu + dmu, s).unwrap() > a_line(mu, s).unwrap());
    }
}
