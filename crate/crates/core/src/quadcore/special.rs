use core::f64::consts::PI;

#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::error::{domain, Result};

// Lanczos approximation, g = 7, nine terms; ~15 significant digits on x > 0.5.
const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

fn lanczos_sum(x: f64) -> f64 {
    let mut a = LANCZOS[0];
    for (k, c) in LANCZOS.iter().enumerate().skip(1) {
        a += c / (x + k as f64);
    }
    a
}

// Γ(x) for any non-pole x; the reflection formula covers x < 1/2.
fn gamma_any(x: f64) -> f64 {
    if x < 0.5 {
        PI / ((PI * x).sin() * gamma_any(1.0 - x))
    } else {
        let x = x - 1.0;
        let t = x + LANCZOS_G + 0.5;
        (2.0 * PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * lanczos_sum(x)
    }
}

/// Γ(x) for x > 0.
pub fn gamma_fn(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(domain("gamma_fn needs a finite positive argument"));
    }
    if x > 171.6 {
        return Ok(f64::INFINITY);
    }
    Ok(gamma_any(x))
}

/// ln Γ(x) for x > 0, usable where Γ itself overflows.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(domain("ln_gamma needs a finite positive argument"));
    }
    if x < 0.5 {
        return Ok((PI / (PI * x).sin()).ln() - ln_gamma(1.0 - x)?);
    }
    let y = x - 1.0;
    let t = y + LANCZOS_G + 0.5;
    Ok(0.5 * (2.0 * PI).ln() + (y + 0.5) * t.ln() - t + lanczos_sum(y).ln())
}

/// Surface area of the unit sphere 𝕊ⁿ ⊂ ℝⁿ⁺¹.
pub fn sphere_area(n: i32) -> Result<f64> {
    if n < 0 {
        return Err(domain("sphere dimension must be nonnegative"));
    }
    let h = 0.5 * (n as f64 + 1.0);
    Ok(2.0 * PI.powf(h) / gamma_fn(h)?)
}

/// Volume of the unit ball in ℝⁿ.
pub fn ball_volume(n: i32) -> Result<f64> {
    if n < 0 {
        return Err(domain("ball dimension must be nonnegative"));
    }
    let h = 0.5 * n as f64;
    Ok(PI.powf(h) / gamma_fn(h + 1.0)?)
}

/// Constant of the Gagliardo form: 2^{2s−1} π^{−d/2} Γ(d/2+s)/|Γ(−s)|.
pub fn c_sd(s: f64, d: u32) -> Result<f64> {
    if !(s > 0.0 && s < 1.0) {
        return Err(domain("c_sd needs 0 < s < 1"));
    }
    if d == 0 {
        return Err(domain("c_sd needs d ≥ 1"));
    }
    let df = d as f64;
    // |Γ(−s)| = Γ(1−s)/s on (0,1)
    let g_neg = gamma_fn(1.0 - s)? / s;
    Ok(2f64.powf(2.0 * s - 1.0) * PI.powf(-0.5 * df) * gamma_fn(0.5 * df + s)? / g_neg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn gamma_special_values() {
        assert_relative_eq!(gamma_fn(1.0).unwrap(), 1.0, max_relative = 1e-14);
        assert_relative_eq!(gamma_fn(0.5).unwrap(), PI.sqrt(), max_relative = 1e-14);
        assert_relative_eq!(gamma_fn(5.0).unwrap(), 24.0, max_relative = 1e-13);
        assert!(gamma_fn(0.0).is_err());
        assert!(gamma_fn(-1.5).is_err());
    }

    #[test]
    fn gamma_recurrence() {
        for x in [0.3, 1.7, 4.2] {
            let lhs = gamma_fn(x + 1.0).unwrap();
            let rhs = x * gamma_fn(x).unwrap();
            assert_relative_eq!(lhs, rhs, max_relative = 1e-12);
        }
    }

    #[test]
    fn ln_gamma_matches_gamma() {
        for x in [0.1, 0.7, 3.3, 25.0, 120.0] {
            assert_relative_eq!(ln_gamma(x).unwrap(), gamma_fn(x).unwrap().ln(), epsilon = 1e-12, max_relative = 1e-12);
        }
    }

    #[test]
    fn spheres() {
        assert_relative_eq!(sphere_area(0).unwrap(), 2.0, max_relative = 1e-14);
        assert_relative_eq!(sphere_area(1).unwrap(), 2.0 * PI, max_relative = 1e-14);
        assert_relative_eq!(sphere_area(2).unwrap(), 4.0 * PI, max_relative = 1e-14);
        assert!(sphere_area(-1).is_err());
    }

    #[test]
    fn sphere_area_times_radial_integral_is_ball_volume() {
        // |𝕊^{n−1}| ∫₀¹ r^{n−1} dr = vol(Bⁿ)
        for n in 1..=6 {
            let v = sphere_area(n - 1).unwrap() / n as f64;
            assert_relative_eq!(v, ball_volume(n).unwrap(), max_relative = 1e-13);
        }
    }

    #[test]
    fn c_sd_near_one_vanishes_like_gap() {
        // |Γ(−s)|(1−s) → 1 as s → 1⁻, so C_{s,2} ≈ 2(1−s)/π
        let s: f64 = 0.999;
        let g = gamma_fn(1.0 - s).unwrap() / s;
        assert!((g * (1.0 - s) - 1.0).abs() < 2e-3);
        let c = c_sd(s, 2).unwrap();
        assert_relative_eq!(c, 2.0 * (1.0 - s) / PI, max_relative = 5e-3);
        assert!(c_sd(1.0, 2).is_err() && c_sd(0.0, 2).is_err());
    }

    #[test]
    fn c_sd_one_dimensional_half() {
        // s = 1/2, d = 1: 2⁰ π^{−1/2} Γ(1)/ (2√π) = 1/(2π)
        assert_relative_eq!(c_sd(0.5, 1).unwrap(), 0.5 / PI, max_relative = 1e-13);
    }
}
