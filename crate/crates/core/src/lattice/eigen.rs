//! Dense symmetric eigensolver: Householder reduction to tridiagonal form followed by
//! implicit-shift QL. Eigenvectors optional; without them the reflectors are kept so a
//! few eigenpairs can still be checked against the original matrix.

use alloc::vec;
use alloc::vec::Vec;

#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 60;

/// Householder reduction of the symmetric row-major `a` (lower triangle is read).
///
/// On return `d` is the diagonal, `e[i]` the subdiagonal entry coupling `i−1` and `i`
/// (`e[0] = 0`), row `i` of `a` holds the reflector `u_i` in columns `0..i` and
/// `hs[i] = |u_i|²/2` (0 for an identity step). `A = Q T Qᵀ` with `Q = P_{n−1}⋯P_1`.
pub(crate) fn tridiagonalize(a: &mut [f64], n: usize) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    let mut hs = vec![0.0; n];
    let mut p = vec![0.0; n];
    for i in (1..n).rev() {
        let l = i - 1;
        let row = i * n;
        let scale: f64 = a[row..row + i].iter().map(|x| x.abs()).sum();
        if l == 0 || scale == 0.0 {
            e[i] = a[row + l];
            continue;
        }
        let mut h = 0.0;
        for x in &mut a[row..row + i] {
            *x /= scale;
            h += *x * *x;
        }
        let f = a[row + l];
        let g = if f >= 0.0 { -h.sqrt() } else { h.sqrt() };
        e[i] = scale * g;
        h -= f * g;
        a[row + l] = f - g;
        // p = A u / h over the leading i×i block, lower triangle only
        let (lead, rest) = a.split_at_mut(row);
        let u = &rest[..i];
        p[..i].iter_mut().for_each(|x| *x = 0.0);
        for j in 0..i {
            let rj = &lead[j * n..j * n + j];
            let uj = u[j];
            let mut acc = 0.0;
            for ((pk, &ajk), &uk) in p[..j].iter_mut().zip(rj).zip(&u[..j]) {
                acc += ajk * uk;
                *pk += ajk * uj;
            }
            p[j] += acc + lead[j * n + j] * uj;
        }
        let mut f = 0.0;
        for j in 0..i {
            p[j] /= h;
            f += p[j] * u[j];
        }
        let hh = f / (h + h);
        for j in 0..i {
            p[j] -= hh * u[j];
        }
        // A ← A − u qᵀ − q uᵀ
        for j in 0..i {
            let (uj, qj) = (u[j], p[j]);
            let rj = &mut lead[j * n..j * n + j + 1];
            for ((ajk, &uk), &qk) in rj.iter_mut().zip(&u[..=j]).zip(&p[..=j]) {
                *ajk -= uj * qk + qj * uk;
            }
        }
        hs[i] = h;
    }
    for i in 0..n {
        d[i] = a[i * n + i];
    }
    e[0] = 0.0;
    (d, e, hs)
}

/// Apply `Q = P_{n−1}⋯P_1` to `y` in place.
pub(crate) fn apply_q(a: &[f64], hs: &[f64], n: usize, y: &mut [f64]) {
    for i in 1..n {
        let h = hs[i];
        if h == 0.0 {
            continue;
        }
        let u = &a[i * n..i * n + i];
        let dot: f64 = u.iter().zip(&y[..i]).map(|(a, b)| a * b).sum();
        let c = dot / h;
        for (yk, uk) in y[..i].iter_mut().zip(u) {
            *yk -= c * uk;
        }
    }
}

/// Form `Q` explicitly, returned row-major with `Q[k][j]` = component k of basis vector j.
fn form_q(a: &[f64], hs: &[f64], n: usize) -> Vec<f64> {
    // Q = P_{n−1}⋯P_1 ; build by applying reflectors to the identity from the right end:
    // rows of Qᵀ are Qᵀ e_k, so we build columns Q e_j = apply_q(e_j). Cheaper: accumulate
    // backwards, Q ← P_i Q for i = 1..n−1 acting on the leading i×i block.
    let mut q = vec![0.0; n * n];
    for k in 0..n {
        q[k * n + k] = 1.0;
    }
    let mut w = vec![0.0; n];
    for i in 1..n {
        let h = hs[i];
        if h == 0.0 {
            continue;
        }
        let u = &a[i * n..i * n + i];
        // Q ← P_i Q: rows 0..i change; w_j = Σ_k u_k Q[k][j]
        w.iter_mut().for_each(|x| *x = 0.0);
        for (k, &uk) in u.iter().enumerate() {
            let row = &q[k * n..(k + 1) * n];
            for (wj, &qkj) in w.iter_mut().zip(row) {
                *wj += uk * qkj;
            }
        }
        for (k, &uk) in u.iter().enumerate() {
            let c = uk / h;
            let row = &mut q[k * n..(k + 1) * n];
            for (qkj, &wj) in row.iter_mut().zip(&w) {
                *qkj -= c * wj;
            }
        }
    }
    q
}

/// Implicit-shift QL on the tridiagonal (d, e). If `z` is given (rows = vectors of the
/// current basis, row-major n×n), the rotations are applied to its rows.
pub(crate) fn tql(d: &mut [f64], e: &mut [f64], mut z: Option<&mut [f64]>) -> Result<()> {
    let n = d.len();
    if n == 0 {
        return Ok(());
    }
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > MAX_SWEEPS {
                return Err(Error::Eigensolver(l));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + if g >= 0.0 { r } else { -r });
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut early = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    early = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                if let Some(z) = z.as_deref_mut() {
                    let (lo, hi) = z.split_at_mut((i + 1) * n);
                    let zi = &mut lo[i * n..];
                    let zi1 = &mut hi[..n];
                    for (a, b) in zi.iter_mut().zip(zi1.iter_mut()) {
                        let fz = *b;
                        *b = s * *a + c * fz;
                        *a = c * *a - s * fz;
                    }
                }
            }
            if early {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

/// Eigenvalues (ascending) and, if requested, eigenvectors as rows of a row-major matrix.
pub(crate) fn eigh_dense(mut a: Vec<f64>, n: usize, vectors: bool) -> Result<(Vec<f64>, Option<Vec<f64>>)> {
    let (mut d, mut e, hs) = tridiagonalize(&mut a, n);
    if !vectors {
        tql(&mut d, &mut e, None)?;
        d.sort_by(f64::total_cmp);
        return Ok((d, None));
    }
    // rows of zt = columns of Q
    let q = form_q(&a, &hs, n);
    let mut zt = vec![0.0; n * n];
    for k in 0..n {
        for j in 0..n {
            zt[j * n + k] = q[k * n + j];
        }
    }
    tql(&mut d, &mut e, Some(&mut zt))?;
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&x, &y| d[x].total_cmp(&d[y]));
    let vals = idx.iter().map(|&i| d[i]).collect();
    let mut vecs = vec![0.0; n * n];
    for (r, &i) in idx.iter().enumerate() {
        vecs[r * n..(r + 1) * n].copy_from_slice(&zt[i * n..(i + 1) * n]);
    }
    Ok((vals, Some(vecs)))
}

/// Eigenvector of the tridiagonal (d, e) (e as returned by [`tridiagonalize`]) for the
/// eigenvalue `lam`, by inverse iteration with partial pivoting.
pub(crate) fn tridiagonal_vector(d: &[f64], e: &[f64], lam: f64, seed: u64) -> Vec<f64> {
    let n = d.len();
    let scale = d.iter().chain(e).fold(0.0f64, |m, x| m.max(x.abs())).max(1e-300);
    let shift = lam + 1e-10 * scale;
    let mut state = seed | 1;
    let mut x: Vec<f64> = (0..n)
        .map(|_| {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        })
        .collect();
    for _ in 0..3 {
        // Solve (T − shift) y = x; T has sub/super e[1..n]. Gaussian elimination with
        // row swaps keeps up to two superdiagonals.
        let mut diag: Vec<f64> = d.iter().map(|v| v - shift).collect();
        let mut sup1: Vec<f64> = (0..n).map(|i| if i + 1 < n { e[i + 1] } else { 0.0 }).collect();
        let mut sup2 = vec![0.0; n];
        let mut rhs = x.clone();
        for i in 0..n.saturating_sub(1) {
            let sub = e[i + 1];
            if sub.abs() > diag[i].abs() {
                // swap rows i and i+1
                let (a0, a1, a2) = (diag[i], sup1[i], sup2[i]);
                diag[i] = sub;
                sup1[i] = diag[i + 1];
                sup2[i] = sup1[i + 1];
                let m = a0 / sub;
                diag[i + 1] = a1 - m * sup1[i];
                sup1[i + 1] = a2 - m * sup2[i];
                rhs.swap(i, i + 1);
                rhs[i + 1] -= m * rhs[i];
            } else {
                let piv = if diag[i] == 0.0 { 1e-300 } else { diag[i] };
                let m = sub / piv;
                diag[i + 1] -= m * sup1[i];
                sup1[i + 1] -= m * sup2[i];
                rhs[i + 1] -= m * rhs[i];
            }
        }
        for i in (0..n).rev() {
            let mut v = rhs[i];
            if i + 1 < n {
                v -= sup1[i] * x[i + 1];
            }
            if i + 2 < n {
                v -= sup2[i] * x[i + 2];
            }
            let piv = if diag[i] == 0.0 { 1e-300 } else { diag[i] };
            x[i] = v / piv;
        }
        let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        x.iter_mut().for_each(|v| *v /= norm);
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn residual(a: &[f64], n: usize, lam: f64, v: &[f64]) -> f64 {
        (0..n)
            .map(|i| {
                let av: f64 = (0..n).map(|k| a[i * n + k] * v[k]).sum();
                (av - lam * v[i]).abs()
            })
            .fold(0.0, f64::max)
    }

    fn random_sym(n: usize, seed: u64) -> Vec<f64> {
        let mut s = seed;
        let mut a = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..=i {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                let v = (s >> 11) as f64 / (1u64 << 53) as f64 - 0.5;
                a[i * n + j] = v;
                a[j * n + i] = v;
            }
        }
        a
    }

    #[test]
    fn two_by_two() {
        let (v, _) = eigh_dense(vec![2.0, 1.0, 1.0, 2.0], 2, false).unwrap();
        assert_relative_eq!(v[0], 1.0, epsilon = 1e-14);
        assert_relative_eq!(v[1], 3.0, epsilon = 1e-14);
    }

    #[test]
    fn vectors_and_residuals() {
        for n in [1usize, 2, 3, 7, 40] {
            let a = random_sym(n, n as u64 + 3);
            let (vals, vecs) = eigh_dense(a.clone(), n, true).unwrap();
            let vecs = vecs.unwrap();
            for j in 0..n {
                let v = &vecs[j * n..(j + 1) * n];
                assert!(residual(&a, n, vals[j], v) < 1e-12, "n={n} j={j}");
                let norm: f64 = v.iter().map(|x| x * x).sum();
                assert_relative_eq!(norm, 1.0, epsilon = 1e-12);
            }
            let (vals2, _) = eigh_dense(a, n, false).unwrap();
            for (x, y) in vals.iter().zip(&vals2) {
                assert_relative_eq!(x, y, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn reflectors_back_transform_inverse_iteration() {
        let n = 30;
        let a = random_sym(n, 11);
        let mut w = a.clone();
        let (d, e, hs) = tridiagonalize(&mut w, n);
        let mut dd = d.clone();
        let mut ee = e.clone();
        tql(&mut dd, &mut ee, None).unwrap();
        for (k, &lam) in dd.iter().enumerate().step_by(7) {
            let mut y = tridiagonal_vector(&d, &e, lam, k as u64 + 1);
            apply_q(&w, &hs, n, &mut y);
            assert!(residual(&a, n, lam, &y) < 1e-10);
        }
    }
}
