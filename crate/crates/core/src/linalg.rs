//! Small dense least-squares kernels. Problems here have at most a few
//! dozen columns, so plain loops are enough.

/// Result of an ordinary least-squares fit.
#[derive(Debug, Clone)]
pub(crate) struct LstsqFit {
    pub coef: Vec<f64>,
    /// `(XᵀX)⁻¹`, row-major `p × p`.
    pub xtx_inv: Vec<f64>,
    pub rss: f64,
}

/// Least squares by Householder QR. `cols` holds the `p` design columns, each
/// of length `n >= p`. Returns `None` when the design is numerically rank
/// deficient.
pub(crate) fn lstsq_qr(cols: &[Vec<f64>], y: &[f64]) -> Option<LstsqFit> {
    let p = cols.len();
    let n = y.len();
    if p == 0 || n < p || cols.iter().any(|c| c.len() != n) {
        return None;
    }
    let mut a: Vec<Vec<f64>> = cols.to_vec();
    let mut qty = y.to_vec();
    let col_norms: Vec<f64> = cols.iter().map(|c| norm(c)).collect();

    for k in 0..p {
        let alpha = norm(&a[k][k..]);
        if alpha == 0.0 || alpha <= 1e-13 * col_norms[k] {
            return None;
        }
        let alpha = if a[k][k] > 0.0 { -alpha } else { alpha };
        let mut v: Vec<f64> = a[k][k..].to_vec();
        v[0] -= alpha;
        let vnorm2: f64 = v.iter().map(|x| x * x).sum();
        if vnorm2 > 0.0 {
            for col in a.iter_mut().skip(k) {
                reflect(&v, vnorm2, &mut col[k..]);
            }
            reflect(&v, vnorm2, &mut qty[k..]);
        }
    }

    // R is the upper p × p block of `a` (column-major by construction).
    let r = |i: usize, j: usize| a[j][i];
    let mut coef = vec![0.0; p];
    for i in (0..p).rev() {
        let mut s = qty[i];
        for (j, c) in coef.iter().enumerate().skip(i + 1) {
            s -= r(i, j) * c;
        }
        coef[i] = s / r(i, i);
    }
    let rss = qty[p..].iter().map(|x| x * x).sum();

    // R⁻¹ (upper triangular), then (XᵀX)⁻¹ = R⁻¹ R⁻ᵀ.
    let mut rinv = vec![0.0; p * p];
    for j in 0..p {
        rinv[j * p + j] = 1.0 / r(j, j);
        for i in (0..j).rev() {
            let mut s = 0.0;
            for k in i + 1..=j {
                s += r(i, k) * rinv[k * p + j];
            }
            rinv[i * p + j] = -s / r(i, i);
        }
    }
    let mut xtx_inv = vec![0.0; p * p];
    for i in 0..p {
        for j in 0..p {
            xtx_inv[i * p + j] = (0..p).map(|k| rinv[i * p + k] * rinv[j * p + k]).sum();
        }
    }
    Some(LstsqFit { coef, xtx_inv, rss })
}

fn reflect(v: &[f64], vnorm2: f64, x: &mut [f64]) {
    let dot: f64 = v.iter().zip(x.iter()).map(|(a, b)| a * b).sum();
    let f = 2.0 * dot / vnorm2;
    for (xi, vi) in x.iter_mut().zip(v) {
        *xi -= f * vi;
    }
}

pub(crate) fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// Solves the symmetric positive-definite system `a x = b` in place by
/// Cholesky factorization (`a` is row-major `n × n`, overwritten).
/// Returns `false` if `a` is not positive definite.
pub(crate) fn cholesky_solve(a: &mut [f64], b: &mut [f64], n: usize) -> bool {
    for j in 0..n {
        let mut d = a[j * n + j];
        for k in 0..j {
            d -= a[j * n + k] * a[j * n + k];
        }
        if d <= 0.0 || !d.is_finite() {
            return false;
        }
        let d = d.sqrt();
        a[j * n + j] = d;
        for i in j + 1..n {
            let mut s = a[i * n + j];
            for k in 0..j {
                s -= a[i * n + k] * a[j * n + k];
            }
            a[i * n + j] = s / d;
        }
    }
    for i in 0..n {
        let mut s = b[i];
        for k in 0..i {
            s -= a[i * n + k] * b[k];
        }
        b[i] = s / a[i * n + i];
    }
    for i in (0..n).rev() {
        let mut s = b[i];
        for k in i + 1..n {
            s -= a[k * n + i] * b[k];
        }
        b[i] = s / a[i * n + i];
    }
    true
}

/// Inverse of a 2 × 2 matrix `[[a, b], [c, d]]`, or `None` if singular.
pub(crate) fn inv2(m: [f64; 4]) -> Option<[f64; 4]> {
    let det = m[0] * m[3] - m[1] * m[2];
    let scale = m.iter().map(|v| v.abs()).fold(0.0, f64::max);
    if det == 0.0 || det.abs() <= 1e-14 * scale * scale || !det.is_finite() {
        return None;
    }
    Some([m[3] / det, -m[1] / det, -m[2] / det, m[0] / det])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn qr_recovers_line() {
        let x = vec![1.0, 2.0, 3.0, 4.0];
        let ones = vec![1.0; 4];
        let y: Vec<f64> = x.iter().map(|v| 0.5 + 2.0 * v).collect();
        let fit = lstsq_qr(&[ones, x], &y).unwrap();
        assert!((fit.coef[0] - 0.5).abs() < 1e-12);
        assert!((fit.coef[1] - 2.0).abs() < 1e-12);
        assert!(fit.rss < 1e-20);
        // (XᵀX)⁻¹ for x = 1..4 with intercept: XᵀX = [[4, 10], [10, 30]]
        let want = [1.5, -0.5, -0.5, 0.2];
        for (a, b) in fit.xtx_inv.iter().zip(want) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn qr_detects_collinearity() {
        let x = vec![2.0; 5];
        let ones = vec![1.0; 5];
        assert!(lstsq_qr(&[ones, x], &[1.0, 2.0, 3.0, 4.0, 5.0]).is_none());
    }

    #[test]
    fn cholesky_solves() {
        let mut a = vec![4.0, 2.0, 2.0, 3.0];
        let mut b = vec![2.0, 1.0];
        assert!(cholesky_solve(&mut a, &mut b, 2));
        assert!((b[0] - 0.5).abs() < 1e-14);
        assert!(b[1].abs() < 1e-14);
        let mut a = vec![1.0, 2.0, 2.0, 1.0];
        assert!(!cholesky_solve(&mut a, &mut [0.0, 0.0], 2));
    }
}
