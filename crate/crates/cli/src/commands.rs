use fraclap_core::constants::{
    cesaro_riesz_convert, eigenvalue_sum_coefficients_from, l1, l1_quadrature, l2_dirichlet_power, l2_via_eigenfunctions,
    l2_via_k, l2_via_zeta, riesz_cesaro_invert,
};
use fraclap_core::halfline::{layer_grid, layer_tail, phi_fn, theta, theta_infinity};
use fraclap_core::lattice::{
    build_restricted_fractional, eigenvalues_sym, geometric_h_list, halfspace_kernel_check, operator_order_check,
    riesz_mean, two_term_fit, HalfspaceConfig, LatticeDomain, DENSE_LIMIT,
};
use fraclap_core::localization::{neighborhood_integrals, DomainGeometry, LocalizationFamily};
use fraclap_core::{FractionalOrder, HalfLineModel, QuadratureSpec};

use crate::report::{Report, Table};
use crate::CliError;

type Out = Result<Report, CliError>;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn model(order: FractionalOrder, quad: &QuadratureSpec) -> Result<HalfLineModel, CliError> {
    Ok(HalfLineModel::with_quad(order, *quad)?)
}

/// Each route is computed independently; a failed route leaves the rest of the report intact.
pub fn constants(order: FractionalOrder, quad: &QuadratureSpec, shape: Option<(f64, f64)>) -> Out {
    let mut r = Report::default();
    let m = model(order, quad)?;
    let l1v = l1(order);
    r.push("L1", l1v, 0.0, "L1:closed_form");
    let mut failure = None;
    let mut keep = |name: &str, route: &str, res: fraclap_core::Result<fraclap_core::IntegralResult>, r: &mut Report| match res {
        Ok(v) => {
            r.push(name, v.value, v.err_estimate, route);
            Some(v.value)
        }
        Err(e) => {
            failure.get_or_insert(e);
            None
        }
    };
    let l1q = keep("L1_quadrature", "L1:radial_integral", l1_quadrature(order, quad), &mut r);
    let k = keep("L2", "L2:K_integral", l2_via_k(&m, quad), &mut r);
    let eig = keep("L2_eigenfunction", "L2:eigenfunction_form", l2_via_eigenfunctions(&m, quad), &mut r);
    let zeta = keep("L2_zeta", "L2:zeta_integral", l2_via_zeta(&m, quad), &mut r);
    let tilde = keep("L2_tilde", "L2tilde:dirichlet_power", l2_dirichlet_power(order, quad), &mut r);
    if let Some(q) = l1q {
        r.check("L1_routes_agree", rel(q, l1v) < 1e-6);
    }
    if let Some(k) = k {
        r.check("L2_positive", k > 0.0);
        for (name, other) in [("L2_K_vs_eigenfunction", eig), ("L2_K_vs_zeta", zeta)] {
            if let Some(o) = other {
                r.push(format!("{name}_rel_diff"), rel(o, k), 0.0, "comparison");
                r.check(format!("{name}_within_1pct"), rel(o, k) < 0.01);
            }
        }
        if let Some(t) = tilde {
            r.check("L2_below_L2_tilde", k < t);
        }
        if let Some((vol, surf)) = shape {
            r.push("riesz_c0", l1v * vol, 0.0, "L1*|Omega|");
            r.push("riesz_c1", -k * surf, 0.0, "-L2*|dOmega|");
            let (c1, c2) = eigenvalue_sum_coefficients_from(order, l1v, k, vol, surf)?;
            r.push("C1", c1, 0.0, "C:riesz_to_cesaro(L2:K_integral)");
            r.push("C2", c2, 0.0, "C:riesz_to_cesaro(L2:K_integral)");
        }
    }
    match failure {
        None => Ok(r),
        Some(e) => Err(CliError::Partial(Box::new(r), e)),
    }
}

/// ϑ(λ), the regular part I_λ and Φ_λ(t) on a log grid in λ.
pub fn kernels(order: FractionalOrder, quad: &QuadratureSpec, lo: f64, hi: f64, points: usize, t: f64) -> Out {
    if !(lo > 0.0 && hi > lo && points >= 2) {
        return Err(CliError::Usage("kernel grid needs 0 < lambda-min < lambda-max and points ≥ 2".into()));
    }
    let s = order.s;
    let m = model(order, quad)?;
    let mut rows = Vec::with_capacity(points);
    for i in 0..points {
        let l = lo * (hi / lo).powf(i as f64 / (points - 1) as f64);
        rows.push(vec![l, theta(l, s)?, m.theta(l), m.i_reg(l), phi_fn(l, t, s)?]);
    }
    let mut r = Report::default();
    let cap = theta_infinity(s);
    r.push("theta_infinity", cap, 0.0, "theta:limit");
    r.push("t", t, 0.0, "input");
    let spread = rows.iter().map(|row| (row[1] - row[2]).abs()).fold(0.0, f64::max);
    r.push("theta_table_max_diff", spread, 0.0, "theta:quadrature_vs_table");
    r.check("theta_monotone", rows.windows(2).all(|w| w[1][1] >= w[0][1]));
    r.check("theta_in_range", rows.iter().all(|row| row[1] >= 0.0 && row[1] <= cap + 1e-12));
    r.check("theta_table_consistent", spread < 1e-6);
    r.table = Some(Table {
        columns: ["lambda", "theta", "theta_table", "i_reg", "phi"].map(String::from).to_vec(),
        rows,
        route: "kernels:halfline".into(),
    });
    Ok(r)
}

/// `(t, K(t), ∫₀^t K)` with `∫₀^t K = L2_via_K − ∫_t^∞ K`; the closing row (t = ∞) is L2_via_K itself.
pub fn layer(order: FractionalOrder, quad: &QuadratureSpec, t_min: f64, t_max: f64, per_decade: usize) -> Out {
    if !(t_min > 0.0 && t_max > t_min && per_decade >= 1) {
        return Err(CliError::Usage("layer grid needs 0 < t-min < t-max and per-decade ≥ 1".into()));
    }
    let m = model(order, quad)?;
    let d = order.d;
    let total = l2_via_k(&m, quad)?;
    let mut rows = Vec::new();
    let mut tail0 = None;
    for t in layer_grid(t_min, t_max, per_decade) {
        let k = m.k_layer(t)?;
        let tail = layer_tail(&m, d, t, quad)?;
        if t == 0.0 {
            tail0 = Some(tail.value);
        }
        rows.push(vec![t, k.value, total.value - tail.value, k.err_estimate + tail.err_estimate + total.err_estimate]);
    }
    rows.push(vec![f64::INFINITY, 0.0, total.value, total.err_estimate]);
    let mut r = Report::default();
    r.push("L2", total.value, total.err_estimate, "L2:K_integral");
    if let Some(t0) = tail0 {
        r.push("L2_closed_tail", t0, 0.0, "L2:tail_from_zero");
        r.check("closure", rel(t0, total.value) < 1e-6);
    }
    r.check("finite", rows.iter().all(|row| row[1].is_finite() && row[2].is_finite()));
    r.table = Some(Table {
        columns: ["t", "K", "cumulative", "err"].map(String::from).to_vec(),
        rows,
        route: "K:layer".into(),
    });
    Ok(r)
}

pub struct SquareSetup {
    pub m: usize,
    pub h_list: Option<Vec<f64>>,
    pub h_min: Option<f64>,
    pub h_max: f64,
    pub h_count: usize,
    pub c0_tol: f64,
    pub c1_tol: f64,
}

pub fn verify_square(s: f64, quad: &QuadratureSpec, cfg: &SquareSetup) -> Out {
    if cfg.m * cfg.m > DENSE_LIMIT {
        return Err(CliError::Usage(format!("m² must not exceed {DENSE_LIMIT}")));
    }
    let order = FractionalOrder::new(s, 2).map_err(|e| CliError::Usage(e.to_string()))?;
    let dx = 1.0 / cfg.m as f64;
    let hs = match &cfg.h_list {
        Some(v) => v.clone(),
        None => geometric_h_list(cfg.h_min.unwrap_or(4.0 * dx), cfg.h_max, cfg.h_count),
    };
    if hs.iter().any(|h| !(*h > 0.0)) {
        return Err(CliError::Usage("h values must be positive".into()));
    }
    let dom = LatticeDomain::square(cfg.m, dx)?;
    let op = build_restricted_fractional(&dom, s)?;
    let spec = eigenvalues_sym(&op)?;
    let samples: Vec<(f64, f64)> = hs.iter().map(|&h| (h, riesz_mean(&spec.eigenvalues, h, s))).collect();
    let fit = two_term_fit(&samples, 2)?;
    let l2 = l2_via_k(&model(order, quad)?, quad)?;
    let c0_ref = l1(order) * dom.volume();
    let c1_ref = -l2.value * dom.surface();
    let mut r = Report::default();
    r.push("n", spec.eigenvalues.len() as f64, 0.0, "lattice:mask");
    r.push("residual_norm", spec.residual_norm, 0.0, "eigensolver:sampled_residual");
    r.push("c0", fit.c0, fit.rms_residual, "fit:least_squares");
    r.push("c1", fit.c1, fit.rms_residual, "fit:least_squares");
    r.push("c0_reference", c0_ref, 0.0, "L1:closed_form*|Omega|");
    r.push("c1_reference", c1_ref, l2.err_estimate * dom.surface(), "-L2:K_integral*|dOmega|");
    r.push("c0_rel_dev", fit.c0 / c0_ref - 1.0, 0.0, "comparison");
    r.push("c1_rel_dev", fit.c1 / c1_ref - 1.0, 0.0, "comparison");
    r.check("c0_within_tol", rel(fit.c0, c0_ref) < cfg.c0_tol);
    r.check("c1_within_tol", rel(fit.c1, c1_ref) < cfg.c1_tol);
    r.table = Some(Table {
        columns: ["h", "riesz_mean"].map(String::from).to_vec(),
        rows: samples.iter().map(|&(h, v)| vec![h, v]).collect(),
        route: "lattice:riesz_mean".into(),
    });
    Ok(r)
}

pub fn verify_halfspace(order: FractionalOrder, quad: &QuadratureSpec, cfg: &HalfspaceConfig, window: (f64, f64), tol: f64) -> Out {
    let m = model(order, quad)?;
    let rep = halfspace_kernel_check(&m, cfg)?;
    let inside: Vec<_> = rep.rows.iter().filter(|row| row.ratio >= window.0 && row.ratio <= window.1).collect();
    let worst = inside.iter().map(|row| row.rel_gap).fold(0.0, f64::max);
    let mut r = Report::default();
    r.push("interior", rep.interior, 0.0, "lattice:strip_density");
    r.push("interior_continuum", rep.interior_continuum, 0.0, "L1:closed_form/h^2");
    r.push("max_rel_gap", worst, 0.0, "comparison");
    r.check("window_nonempty", !inside.is_empty());
    r.check("rel_gap_within_tol", worst < tol);
    r.table = Some(Table {
        columns: ["x_d", "ratio", "lattice", "continuum", "rel_gap"].map(String::from).to_vec(),
        rows: rep.rows.iter().map(|row| vec![row.x_d, row.ratio, row.lattice, row.continuum, row.rel_gap]).collect(),
        route: "halfspace:kernel_law".into(),
    });
    Ok(r)
}

pub fn order_check(s: f64, shape: &str, m: usize) -> Out {
    let dom = match shape {
        "interval" => LatticeDomain::interval(m, 1.0 / m as f64)?,
        "square" => LatticeDomain::square(m, 1.0 / m as f64)?,
        other => return Err(CliError::Usage(format!("unknown shape {other}"))),
    };
    if dom.len() > DENSE_LIMIT {
        return Err(CliError::Usage(format!("mask size must not exceed {DENSE_LIMIT}")));
    }
    let rep = operator_order_check(&dom, s)?;
    let mut r = Report::default();
    r.push("min_eigenvalue", rep.min_eigenvalue, 0.0, "difference:dirichlet_power-restricted");
    r.push("max_eigenvalue", rep.max_eigenvalue, 0.0, "difference:dirichlet_power-restricted");
    r.push("norm", rep.norm, 0.0, "difference:max_row_sum");
    r.check("ordering", rep.holds);
    Ok(r)
}

/// `k`-th point of the 2D Halton sequence (bases 2, 3).
fn halton(k: usize, base: usize) -> f64 {
    let (mut f, mut x, mut i) = (1.0, 0.0, k);
    while i > 0 {
        f /= base as f64;
        x += f * (i % base) as f64;
        i /= base;
    }
    x
}

pub fn localization_check(geometry: DomainGeometry, l0: f64, points: usize, tol: f64) -> Out {
    let fam = LocalizationFamily::new(geometry, l0)?;
    let (lo, hi) = geometry.bounds();
    let mut pts = Vec::with_capacity(points);
    let mut k = 1;
    while pts.len() < points {
        let x = [lo[0] + (hi[0] - lo[0]) * halton(k, 2), if fam.dim() == 1 { 0.0 } else { lo[1] + (hi[1] - lo[1]) * halton(k, 3) }];
        if geometry.distance(x) > 0.0 {
            pts.push(x);
        }
        k += 1;
    }
    let mut r = Report::default();
    let mut errs = Vec::new();
    for res in [1usize, 2, 4, 8] {
        let e = pts.iter().map(|&x| (fam.partition_check(x, res) - 1.0).abs()).fold(0.0, f64::max);
        r.push(format!("partition_error_res{res}"), e, 0.0, "partition:midpoint_grid");
        errs.push(e);
    }
    r.check("finest_within_tol", errs[3] < tol);
    r.check("error_halves", errs.windows(2).all(|w| w[1] <= 0.5 * w[0]));
    if !matches!(geometry, DomainGeometry::Rectangle { .. }) {
        let nb = neighborhood_integrals(&fam, 0.0)?;
        r.push("bulk_exponent", nb.bulk_exponent, 0.0, "neighborhood:bulk_fit");
        r.push("boundary_exponent", nb.boundary_exponent, 0.0, "neighborhood:boundary_fit");
    }
    Ok(r)
}

pub fn convert(a_coef: f64, b_coef: f64, a: f64, b: f64) -> Out {
    let usage = |e: fraclap_core::Error| CliError::Usage(e.to_string());
    let (c, d) = cesaro_riesz_convert(a_coef, b_coef, a, b).map_err(usage)?;
    let (a_back, b_back) = riesz_cesaro_invert(c, d, a, b).map_err(usage)?;
    let mut r = Report::default();
    r.push("C", c, 0.0, "cesaro_to_riesz");
    r.push("D", d, 0.0, "cesaro_to_riesz");
    r.push("A_roundtrip", a_back, 0.0, "riesz_to_cesaro");
    r.push("B_roundtrip", b_back, 0.0, "riesz_to_cesaro");
    r.check("roundtrip", rel(a_back, a_coef) < 1e-10 && (b_back - b_coef).abs() <= 1e-10 * b_coef.abs().max(1.0));
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn halton_is_low_discrepancy() {
        assert_eq!(halton(1, 2), 0.5);
        assert_eq!(halton(2, 2), 0.25);
        assert_eq!(halton(3, 3), 1.0 / 9.0);
    }

    #[test]
    fn convert_example() {
        let r = convert(1.0, 0.0, 1.0, 0.0).unwrap();
        assert!((r.entries[0].value - 0.25).abs() < 1e-15);
        assert_eq!(r.entries[1].value, 0.0);
        assert!(r.passed());
        assert!(matches!(convert(1.0, 1.0, 1.0, 1.5), Err(CliError::Usage(_))));
    }
}
