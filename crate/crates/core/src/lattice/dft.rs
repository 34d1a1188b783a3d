//! Plain separable DFTs on small periodic boxes. Sizes here are a few hundred points
//! per axis, so O(N) per output sample with a cosine table is fast enough.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

#[cfg(not(feature = "std"))]
use num_traits::Float;
use num_complex::Complex64;

pub(crate) fn cos_table(n: usize) -> Vec<f64> {
    (0..n).map(|j| (2.0 * PI * j as f64 / n as f64).cos()).collect()
}

/// Symbol of the discrete Laplacian along one axis: (2 − 2cos(2πk/N))/Δ².
pub fn laplacian_symbol(k: usize, n: usize, spacing: f64) -> f64 {
    (2.0 - 2.0 * (2.0 * PI * k as f64 / n as f64).cos()) / (spacing * spacing)
}

fn pow_s(sigma: f64, s: f64) -> f64 {
    if sigma <= 0.0 {
        0.0
    } else {
        sigma.powf(s)
    }
}

/// Convolution kernel of the multiplier σ(k)^s on a periodic 1D box: `k[r]` for r = 0..N.
pub fn multiplier_kernel_1d(n: usize, spacing: f64, s: f64) -> Vec<f64> {
    let c = cos_table(n);
    let sym: Vec<f64> = (0..n).map(|k| pow_s(laplacian_symbol(k, n, spacing), s)).collect();
    (0..n)
        .map(|r| sym.iter().enumerate().map(|(k, v)| v * c[(k * r) % n]).sum::<f64>() / n as f64)
        .collect()
}

/// Convolution kernel of (σ(k₁)+σ(k₂))^s on a periodic N×N box, row-major `k[r₁·N + r₂]`.
/// The symbol is even in each frequency separately, so a cosine–cosine transform suffices.
pub fn multiplier_kernel_2d(n: usize, spacing: f64, s: f64) -> Vec<f64> {
    let c = cos_table(n);
    let sig: Vec<f64> = (0..n).map(|k| laplacian_symbol(k, n, spacing)).collect();
    // stage 1: along k₂ for every k₁
    let mut half = vec![0.0; n * n];
    for k1 in 0..n {
        let row: Vec<f64> = (0..n).map(|k2| pow_s(sig[k1] + sig[k2], s)).collect();
        for r2 in 0..n {
            half[k1 * n + r2] = row.iter().enumerate().map(|(k2, v)| v * c[(k2 * r2) % n]).sum();
        }
    }
    // stage 2: along k₁
    let mut out = vec![0.0; n * n];
    let norm = (n * n) as f64;
    for r1 in 0..n {
        for r2 in 0..n {
            let mut acc = 0.0;
            for k1 in 0..n {
                acc += half[k1 * n + r2] * c[(k1 * r1) % n];
            }
            out[r1 * n + r2] = acc / norm;
        }
    }
    out
}

/// Unnormalized forward DFT of a row-major N×N complex array: f̂(q) = Σ_x f(x) e^{−2πi q·x/N}.
pub fn dft_2d(f: &[Complex64], n: usize) -> Vec<Complex64> {
    let tw: Vec<Complex64> = (0..n).map(|j| Complex64::from_polar(1.0, -2.0 * PI * j as f64 / n as f64)).collect();
    let mut tmp = vec![Complex64::new(0.0, 0.0); n * n];
    for x1 in 0..n {
        for q2 in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for x2 in 0..n {
                acc += f[x1 * n + x2] * tw[(q2 * x2) % n];
            }
            tmp[x1 * n + q2] = acc;
        }
    }
    let mut out = vec![Complex64::new(0.0, 0.0); n * n];
    for q1 in 0..n {
        for q2 in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for x1 in 0..n {
                acc += tmp[x1 * n + q2] * tw[(q1 * x1) % n];
            }
            out[q1 * n + q2] = acc;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn s_one_is_the_stencil() {
        let k = multiplier_kernel_1d(12, 0.5, 1.0);
        assert_relative_eq!(k[0], 8.0, epsilon = 1e-12);
        assert_relative_eq!(k[1], -4.0, epsilon = 1e-12);
        assert_relative_eq!(k[11], -4.0, epsilon = 1e-12);
        assert!(k[2..11].iter().all(|v| v.abs() < 1e-12));
        let k2 = multiplier_kernel_2d(9, 1.0, 1.0);
        assert_relative_eq!(k2[0], 4.0, epsilon = 1e-12);
        assert_relative_eq!(k2[1], -1.0, epsilon = 1e-12);
        assert_relative_eq!(k2[9], -1.0, epsilon = 1e-12);
        assert!(k2[10].abs() < 1e-12);
    }

    #[test]
    fn half_power_matches_closed_form() {
        // |2 sin(k/2)| has Fourier coefficients 4/(π(1−4j²)) on the infinite lattice
        let k = multiplier_kernel_1d(2048, 1.0, 0.5);
        for (j, &kj) in k.iter().enumerate().take(5) {
            let exact = 4.0 / (PI * (1.0 - 4.0 * (j * j) as f64));
            assert_relative_eq!(kj, exact, epsilon = 1e-5);
        }
    }

    #[test]
    fn dft_of_delta_and_plane_wave() {
        let n = 6;
        let mut f = vec![Complex64::new(0.0, 0.0); n * n];
        f[0] = Complex64::new(1.0, 0.0);
        assert!(dft_2d(&f, n).iter().all(|z| (z - 1.0).norm() < 1e-14));
        let g: Vec<Complex64> = (0..n * n)
            .map(|i| Complex64::from_polar(1.0, 2.0 * PI * (2 * (i / n)) as f64 / n as f64))
            .collect();
        let gh = dft_2d(&g, n);
        assert_relative_eq!(gh[2 * n].re, (n * n) as f64, epsilon = 1e-10);
        assert!(gh.iter().enumerate().filter(|(i, _)| *i != 2 * n).all(|(_, z)| z.norm() < 1e-10));
    }
}
