use alloc::vec::Vec;
use core::f64::consts::PI;

#[cfg(not(feature = "std"))]
use num_traits::Float;

// 21-point Kronrod extension of the 10-point Gauss rule (QUADPACK qk21 tables).
pub(crate) const XGK21: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];
pub(crate) const WGK21: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_208_931_654_437,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];
// Gauss weights for XGK21[1], XGK21[3], …, XGK21[9]
pub(crate) const WG10: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

/// Gauss–Legendre nodes and weights on [−1, 1], ascending.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = alloc::vec![0.0; n];
    let mut w = alloc::vec![0.0; n];
    let m = n.div_ceil(2);
    let nf = n as f64;
    for i in 0..m {
        // Tricomi initial guess, then Newton on P_n
        let mut z = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = nf * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

/// A fixed rule as parallel node/weight vectors.
#[derive(Debug, Clone, Default)]
pub struct Rule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Rule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn sum(&self, mut f: impl FnMut(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }

    /// Composite Gauss–Legendre rule with `per_panel` nodes on each `[edges[i], edges[i+1]]`.
    pub fn composite(edges: &[f64], per_panel: usize) -> Rule {
        let (gx, gw) = gauss_legendre(per_panel);
        let mut r = Rule::default();
        for e in edges.windows(2) {
            let (c, h) = (0.5 * (e[0] + e[1]), 0.5 * (e[1] - e[0]));
            for (x, w) in gx.iter().zip(&gw) {
                r.nodes.push(c + h * x);
                r.weights.push(h * w);
            }
        }
        r
    }

    /// Composite rule on geometrically growing panels `[a, a q], [a q, a q²], …` up to `b`.
    pub fn geometric(a: f64, b: f64, ratio: f64, per_panel: usize) -> Rule {
        let mut edges = alloc::vec![a];
        let mut e = a;
        while e * ratio < b {
            e *= ratio;
            edges.push(e);
        }
        edges.push(b);
        Rule::composite(&edges, per_panel)
    }

    /// Pull the rule back through `x = g(t)` with Jacobian `dg`.
    pub fn mapped(&self, g: impl Fn(f64) -> f64, dg: impl Fn(f64) -> f64) -> Rule {
        Rule {
            nodes: self.nodes.iter().map(|&t| g(t)).collect(),
            weights: self.nodes.iter().zip(&self.weights).map(|(&t, &w)| w * dg(t)).collect(),
        }
    }

    pub fn extend(&mut self, other: Rule) {
        self.nodes.extend(other.nodes);
        self.weights.extend(other.weights);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn gauss_legendre_exact_for_polynomials() {
        for n in [1usize, 2, 5, 10, 24, 64] {
            let (x, w) = gauss_legendre(n);
            assert_relative_eq!(w.iter().sum::<f64>(), 2.0, max_relative = 1e-14);
            let deg = 2 * n - 2;
            let num: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg as i32)).sum();
            assert_relative_eq!(num, 2.0 / (deg as f64 + 1.0), max_relative = 1e-12);
            assert!(x.windows(2).all(|p| p[0] < p[1]));
        }
    }

    #[test]
    fn kronrod_tables_integrate_degree_31() {
        let f = |x: f64| x.powi(30) + x.powi(7);
        let mut k = WGK21[10] * f(0.0);
        for i in 0..10 {
            k += WGK21[i] * (f(XGK21[i]) + f(-XGK21[i]));
        }
        assert_relative_eq!(k, 2.0 / 31.0, max_relative = 1e-13);
        let g = |x: f64| x.powi(18);
        let mut s = 0.0;
        for j in 0..5 {
            s += WG10[j] * 2.0 * g(XGK21[2 * j + 1]);
        }
        assert_relative_eq!(s, 2.0 / 19.0, max_relative = 1e-13);
    }

    #[test]
    fn geometric_rule_covers_range() {
        let r = Rule::geometric(1e-3, 10.0, 2.0, 8);
        assert_relative_eq!(r.sum(|_| 1.0), 10.0 - 1e-3, max_relative = 1e-13);
        assert_relative_eq!(r.sum(|x| 1.0 / x), (1e4f64).ln(), max_relative = 1e-12);
    }
}
