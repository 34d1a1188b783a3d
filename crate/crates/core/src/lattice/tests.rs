use super::*;
use crate::localization::{DomainGeometry, LocalizationFamily};
use approx::assert_relative_eq;
use proptest::prelude::*;

#[test]
fn domain_constructors_and_margin() {
    let d = LatticeDomain::interval(10, 0.1).unwrap();
    assert_eq!((d.len(), d.box_points, d.boundary_count), (10, 30, 2));
    assert_relative_eq!(d.volume(), 1.0, epsilon = 1e-14);
    assert_relative_eq!(d.point(0)[0], 0.05, epsilon = 1e-14);
    let sq = LatticeDomain::square(8, 0.125).unwrap();
    assert_eq!(sq.boundary_count, 32);
    assert_relative_eq!(sq.surface(), 4.0, epsilon = 1e-14);
    assert_relative_eq!(sq.surface_estimate(), 4.0, epsilon = 1e-14);
    let disk = LatticeDomain::disk(1.0, 0.1).unwrap();
    assert!((disk.volume_estimate() - PI).abs() < 0.1);
    // staircase perimeter overestimates 2π by about 4/π
    assert!(disk.surface_estimate() > disk.surface());
    assert!(LatticeDomain::new(1, 10, 0.1, vec![[2, 0], [3, 0]]).is_err());
    assert!(LatticeDomain::new(1, 12, 0.1, vec![[4, 0], [5, 0]]).is_ok());
    assert!(LatticeDomain::new(3, 12, 0.1, vec![[4, 0]]).is_err());
}

#[test]
fn s_one_restricts_the_stencil() {
    for dom in [LatticeDomain::interval(9, 0.2).unwrap(), LatticeDomain::rectangle(4, 5, 0.3).unwrap()] {
        let m = build_restricted_fractional(&dom, 1.0).unwrap();
        let l = dirichlet_laplacian(&dom);
        for (a, b) in m.entries.iter().zip(&l.entries) {
            assert!((a - b).abs() < 1e-10 * l.norm());
        }
    }
}

#[test]
fn built_operators_are_symmetric_psd() {
    let dom = LatticeDomain::rectangle(6, 5, 0.1).unwrap();
    for s in [0.25, 0.5, 0.75] {
        for op in [build_restricted_fractional(&dom, s).unwrap(), build_dirichlet_power(&dom, s).unwrap()] {
            assert!(op.asymmetry() < 1e-12);
            let sp = eigenvalues_sym(&op).unwrap();
            assert!(sp.eigenvalues[0] >= -1e-10 * op.norm());
            assert!(sp.residual_norm < 1e-8 * op.norm());
        }
    }
    assert!(build_restricted_fractional(&dom, 1.5).is_err());
}

#[test]
fn dirichlet_closed_form_and_power() {
    let m = 5;
    let dx = 0.3;
    let dom = LatticeDomain::interval(m, dx).unwrap();
    let exact: Vec<f64> = (1..=m).map(|j| (2.0 - 2.0 * (j as f64 * PI / (m + 1) as f64).cos()) / (dx * dx)).collect();
    let sp = eigenvalues_sym(&dirichlet_laplacian(&dom)).unwrap();
    for (a, b) in sp.eigenvalues.iter().zip(&exact) {
        assert_relative_eq!(a, b, max_relative = 1e-12);
    }
    let p = eigenvalues_sym(&build_dirichlet_power(&dom, 0.3).unwrap()).unwrap();
    for (a, b) in p.eigenvalues.iter().zip(&exact) {
        assert_relative_eq!(*a, b.powf(0.3), max_relative = 1e-11);
    }
    let one = build_dirichlet_power(&dom, 1.0).unwrap();
    let l = dirichlet_laplacian(&dom);
    for (a, b) in one.entries.iter().zip(&l.entries) {
        assert!((a - b).abs() < 1e-10 * l.norm());
    }
}

#[test]
fn eigenvalue_examples() {
    let sp = eigenvalues_sym(&SymmetricOperator::new(2, vec![2.0, 1.0, 1.0, 2.0]).unwrap()).unwrap();
    assert_relative_eq!(sp.eigenvalues[0], 1.0, epsilon = 1e-14);
    assert_relative_eq!(sp.eigenvalues[1], 3.0, epsilon = 1e-14);
    let n = 7;
    let mut id = vec![0.0; n * n];
    (0..n).for_each(|i| id[i * n + i] = 1.0);
    let sp = eigenvalues_sym(&SymmetricOperator::new(n, id).unwrap()).unwrap();
    assert!(sp.eigenvalues.iter().all(|&v| (v - 1.0).abs() < 1e-14));
    assert!(SymmetricOperator::new(3, vec![0.0; 8]).is_err());
}

#[test]
fn riesz_mean_limits() {
    let ev = [1.0, 2.0, 5.0];
    assert_eq!(riesz_mean(&ev, 2.0, 0.5), 0.0);
    assert_relative_eq!(riesz_mean(&ev, 1e-12, 0.5), 3.0, epsilon = 1e-5);
    assert_relative_eq!(riesz_mean(&ev, 0.25, 1.0), (1.0 - 0.0625) + (1.0 - 0.125) + (1.0 - 0.3125), epsilon = 1e-14);
}

#[test]
fn fit_recovers_synthetic_data() {
    let hs = geometric_h_list(0.02, 0.2, 6);
    for d in [1u32, 2, 3] {
        let samples: Vec<(f64, f64)> = hs.iter().map(|&h| (h, h.powi(-(d as i32)) - 0.3 * h.powi(1 - d as i32))).collect();
        let f = two_term_fit(&samples, d).unwrap();
        assert_relative_eq!(f.c0, 1.0, epsilon = 1e-10);
        assert_relative_eq!(f.c1, -0.3, epsilon = 1e-10);
        assert!(f.rms_residual < 1e-9);
    }
    // o(h^{−d+1}) perturbation ε h^{−d+2} moves c1 by O(ε h_max)
    let eps = 1e-2;
    let samples: Vec<(f64, f64)> = hs.iter().map(|&h| (h, h.powi(-2) - 0.3 / h + eps)).collect();
    let f = two_term_fit(&samples, 2).unwrap();
    assert!((f.c1 + 0.3).abs() < 2.0 * eps * 0.2, "{}", f.c1);
    assert!(two_term_fit(&samples[..3], 2).is_err());
    assert!(two_term_fit(&[(0.1, 1.0), (0.11, 1.0), (0.12, 1.0), (0.13, 1.0)], 2).is_err());
}

#[test]
fn berezin_bound_on_interval() {
    let dom = LatticeDomain::interval(48, 1.0 / 48.0).unwrap();
    let zero = berezin_bound_check(&dom, 0.5, &vec![0.0; 48], 0.1).unwrap();
    assert_eq!((zero.lhs, zero.bound), (0.0, 0.0));
    let coarse = berezin_bound_check(&dom, 0.5, &vec![1.0; 48], 0.2).unwrap();
    let fine = berezin_bound_check(&dom, 0.5, &vec![1.0; 48], 0.1).unwrap();
    for r in [&coarse, &fine] {
        assert!(r.holds && r.holds_lattice, "{r:?}");
        assert!(r.lattice_bound >= r.bound);
    }
    assert!(fine.slack < coarse.slack);
    let bumpy: Vec<f64> = (0..48).map(|i| (PI * (i as f64 + 0.5) / 48.0).sin()).collect();
    assert!(berezin_bound_check(&dom, 0.25, &bumpy, 0.1).unwrap().holds_lattice);
}

fn gaussian(n: usize, width: f64) -> Vec<f64> {
    let dx = 2.0 * PI / n as f64;
    (0..n * n)
        .map(|i| {
            let (x, y) = ((i / n) as f64 * dx - PI, (i % n) as f64 * dx - PI);
            (-(x * x + y * y) / width).exp()
        })
        .collect()
}

#[test]
fn coherent_state_examples() {
    let n = 64;
    let phi = gaussian(n, 0.5);
    let r = coherent_state_identity_check(0.5, 0.1, [1.0, 0.0], &phi, n).unwrap();
    assert!(r.gap < 1e-6, "{r:?}");
    assert!(r.second_term > 0.0);
    let z = coherent_state_identity_check(0.5, 0.1, [0.0, 0.0], &phi, n).unwrap();
    assert_eq!(z.first_term, 0.0);
    assert!(z.gap < 1e-12);
    assert!(coherent_state_identity_check(0.5, 0.1, [1.05, 0.0], &phi, n).is_err());
    // first term scales by 2^{2s} up to the lattice symbol's curvature at |p/h| = 5, 10
    let a = coherent_state_identity_check(0.75, 0.2, [1.0, 0.0], &phi, n).unwrap();
    let b = coherent_state_identity_check(0.75, 0.2, [2.0, 0.0], &phi, n).unwrap();
    assert_relative_eq!(b.first_term / a.first_term, 2f64.powf(1.5), max_relative = 0.05);
}

#[test]
fn ordering_is_exact_at_matrix_level() {
    for s in [0.25, 0.5, 0.75] {
        let r = operator_order_check(&LatticeDomain::interval(24, 1.0 / 24.0).unwrap(), s).unwrap();
        assert!(r.holds && r.max_eigenvalue > 0.0, "{r:?}");
    }
    // s = 1: both sides are the Dirichlet stencil
    let r = operator_order_check(&LatticeDomain::rectangle(5, 4, 0.2).unwrap(), 1.0).unwrap();
    assert!(r.min_eigenvalue.abs() < 1e-10 * 100.0 && r.max_eigenvalue.abs() < 1e-10 * 100.0, "{r:?}");
}

#[test]
fn ims_identity_on_interval() {
    let dom = LatticeDomain::interval(128, 1.0 / 128.0).unwrap();
    let fam = LocalizationFamily::new(DomainGeometry::Interval { a: 0.0, b: 1.0 }, 0.25).unwrap();
    let r1 = ims_defect_check(&dom, 0.5, &fam, 1).unwrap();
    let r2 = ims_defect_check(&dom, 0.5, &fam, 2).unwrap();
    assert!(r2.gap_continuum < 0.05, "{r2:?}");
    assert!(r2.gap_lattice <= 0.5 * r1.gap_lattice, "{r1:?} {r2:?}");
    assert!(r1.defect_lattice > 0.0 && r1.localized > r1.lhs);
    // degenerate family: one weight φ ≡ 1
    let one = super::checks::ims_defect_with(&dom, 0.5, &[(vec![1.0; dom.len()], 1.0)]).unwrap();
    assert_eq!(one.defect_lattice, 0.0);
    assert_eq!(one.defect_continuum, 0.0);
    assert!(one.gap_lattice < 1e-12);
}

#[test]
fn halfspace_profile_small() {
    let model = crate::HalfLineModel::new(crate::FractionalOrder::new(0.5, 2).unwrap()).unwrap();
    let cfg = HalfspaceConfig { spacing: 0.25, h: 1.0, depth_points: 32, box_depth: 96, tangential_points: 1024, max_ratio: 1.0 };
    let r = halfspace_kernel_check(&model, &cfg).unwrap();
    assert!(r.rows[0].lattice < r.interior);
    assert!(r.rows.windows(2).all(|w| w[0].lattice < w[1].lattice));
    assert!((r.interior / r.interior_continuum - 1.0).abs() < 0.05, "{r:?}");
    let bad = HalfspaceConfig { h: 0.5, ..cfg };
    assert!(halfspace_kernel_check(&model, &bad).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn riesz_mean_nonincreasing(h in 0.01f64..1.0, dh in 0.0f64..0.5, s in 0.1f64..1.0) {
        let ev: Vec<f64> = (1..40).map(|k| (k * k) as f64).collect();
        prop_assert!(riesz_mean(&ev, h + dh, s) <= riesz_mean(&ev, h, s) + 1e-12);
    }

    #[test]
    fn adding_points_does_not_raise_eigenvalues(m in 4usize..14, extra in 0usize..3, s in 0.1f64..0.95) {
        let n = 3 * (m + 2);
        let base: Vec<[usize; 2]> = (n / 3..n / 3 + m).map(|i| [i, 0]).collect();
        let mut bigger = base.clone();
        for k in 0..=extra.min(1) {
            bigger.push([n / 3 + m + k, 0]);
        }
        let a = LatticeDomain::new(1, n, 0.1, base).unwrap();
        let b = LatticeDomain::new(1, n, 0.1, bigger).unwrap();
        let ea = eigenvalues_sym(&build_restricted_fractional(&a, s).unwrap()).unwrap().eigenvalues;
        let eb = eigenvalues_sym(&build_restricted_fractional(&b, s).unwrap()).unwrap().eigenvalues;
        for k in 0..ea.len() {
            prop_assert!(eb[k] <= ea[k] + 1e-10 * ea[k].abs());
        }
    }

    #[test]
    fn restricted_operator_psd(mx in 2usize..6, my in 2usize..6, s in 0.05f64..1.0) {
        let op = build_restricted_fractional(&LatticeDomain::rectangle(mx, my, 0.2).unwrap(), s).unwrap();
        prop_assert!(op.asymmetry() < 1e-12);
        let sp = eigenvalues_sym(&op).unwrap();
        prop_assert!(sp.eigenvalues[0] >= -1e-10 * op.norm());
        prop_assert!(sp.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
    }
}
