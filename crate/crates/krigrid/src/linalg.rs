//! Dense symmetric linear algebra: blocked Cholesky, triangular inverses
//! and solves. Blocking routes the cubic work through ndarray's matrix
//! multiply so factorizations of a few thousand rows stay cheap.

use ndarray::linalg::general_mat_mul;
use ndarray::{s, Array1, Array2, ArrayView1, ArrayView2};

const BLOCK: usize = 128;

/// Lower Cholesky factor in place; the strict upper triangle is zeroed.
/// On failure returns the pivot index where positivity was lost.
pub fn cholesky_in_place(a: &mut Array2<f64>) -> Result<(), usize> {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "cholesky needs a square matrix");
    let mut k0 = 0;
    while k0 < n {
        let kb = BLOCK.min(n - k0);
        // diagonal block, unblocked
        for j in k0..k0 + kb {
            let mut d = a[[j, j]];
            for t in k0..j {
                d -= a[[j, t]] * a[[j, t]];
            }
            if d <= 0.0 || !d.is_finite() {
                return Err(j);
            }
            let dj = d.sqrt();
            a[[j, j]] = dj;
            for i in j + 1..k0 + kb {
                let mut v = a[[i, j]];
                for t in k0..j {
                    v -= a[[i, t]] * a[[j, t]];
                }
                a[[i, j]] = v / dj;
            }
        }
        let panel_top = k0 + kb;
        if panel_top < n {
            // panel solve P := A[panel, block] L_kk^{-T}
            for j in k0..k0 + kb {
                let dj = a[[j, j]];
                for i in panel_top..n {
                    let mut v = a[[i, j]];
                    for t in k0..j {
                        v -= a[[i, t]] * a[[j, t]];
                    }
                    a[[i, j]] = v / dj;
                }
            }
            // trailing update A[c.., c] -= P_c P_c^T, lower blocks only
            let mut c0 = panel_top;
            while c0 < n {
                let cb = BLOCK.min(n - c0);
                let pc = a.slice(s![c0..n, k0..k0 + kb]).to_owned();
                let pr = a.slice(s![c0..c0 + cb, k0..k0 + kb]).to_owned();
                let mut target = a.slice_mut(s![c0..n, c0..c0 + cb]);
                general_mat_mul(-1.0, &pc, &pr.t(), 1.0, &mut target);
                c0 += cb;
            }
        }
        k0 += kb;
    }
    for i in 0..n {
        for j in i + 1..n {
            a[[i, j]] = 0.0;
        }
    }
    Ok(())
}

pub fn cholesky(a: ArrayView2<f64>) -> Result<Array2<f64>, usize> {
    let mut c = a.to_owned();
    cholesky_in_place(&mut c)?;
    Ok(c)
}

/// Solve L x = b in place.
pub fn solve_lower(l: &Array2<f64>, b: &mut [f64]) {
    let n = l.nrows();
    debug_assert_eq!(n, b.len());
    let ls = l.as_slice().expect("factor is contiguous");
    for i in 0..n {
        let row = &ls[i * n..i * n + i];
        let mut acc = b[i];
        for (t, &lt) in row.iter().enumerate() {
            acc -= lt * b[t];
        }
        b[i] = acc / ls[i * n + i];
    }
}

/// Solve L^T x = b in place.
pub fn solve_lower_t(l: &Array2<f64>, b: &mut [f64]) {
    let n = l.nrows();
    debug_assert_eq!(n, b.len());
    let ls = l.as_slice().expect("factor is contiguous");
    for i in (0..n).rev() {
        let mut acc = b[i];
        for t in i + 1..n {
            acc -= ls[t * n + i] * b[t];
        }
        b[i] = acc / ls[i * n + i];
    }
}

/// Solve (L L^T) x = b.
pub fn spd_solve(l: &Array2<f64>, b: ArrayView1<f64>) -> Array1<f64> {
    let mut x = b.to_owned();
    {
        let xs = x.as_slice_mut().expect("contiguous");
        solve_lower(l, xs);
        solve_lower_t(l, xs);
    }
    x
}

pub fn log_det_from_cholesky(l: &Array2<f64>) -> f64 {
    2.0 * l.diag().iter().map(|d| d.ln()).sum::<f64>()
}

/// Inverse of a lower triangular matrix, blocked.
pub fn lower_inverse(l: &Array2<f64>) -> Array2<f64> {
    let n = l.nrows();
    let mut x = Array2::<f64>::zeros((n, n));
    let mut c0 = 0;
    while c0 < n {
        let cb = BLOCK.min(n - c0);
        invert_diag_block(l, &mut x, c0, cb);
        let mut r0 = c0 + cb;
        while r0 < n {
            let rb = BLOCK.min(n - r0);
            // S = sum_{j} L[r, j] X[j, c] over the strip j in [c0, r0)
            let lrj = l.slice(s![r0..r0 + rb, c0..r0]);
            let xjc = x.slice(s![c0..r0, c0..c0 + cb]).to_owned();
            let mut srow = Array2::<f64>::zeros((rb, cb));
            general_mat_mul(1.0, &lrj, &xjc, 0.0, &mut srow);
            // X[r, c] = -L[r, r]^{-1} S
            for col in 0..cb {
                for i in 0..rb {
                    let mut v = -srow[[i, col]];
                    for t in 0..i {
                        v -= l[[r0 + i, r0 + t]] * x[[r0 + t, c0 + col]];
                    }
                    x[[r0 + i, c0 + col]] = v / l[[r0 + i, r0 + i]];
                }
            }
            r0 += rb;
        }
        c0 += cb;
    }
    x
}

fn invert_diag_block(l: &Array2<f64>, x: &mut Array2<f64>, c0: usize, cb: usize) {
    for j in 0..cb {
        x[[c0 + j, c0 + j]] = 1.0 / l[[c0 + j, c0 + j]];
        for i in j + 1..cb {
            let mut v = 0.0;
            for t in j..i {
                v -= l[[c0 + i, c0 + t]] * x[[c0 + t, c0 + j]];
            }
            x[[c0 + i, c0 + j]] = v / l[[c0 + i, c0 + i]];
        }
    }
}

/// (L L^T)^{-1} from the Cholesky factor.
pub fn spd_inverse_from_cholesky(l: &Array2<f64>) -> Array2<f64> {
    let w = lower_inverse(l);
    let n = l.nrows();
    let mut inv = Array2::<f64>::zeros((n, n));
    general_mat_mul(1.0, &w.t(), &w, 0.0, &mut inv);
    // enforce exact symmetry lost to rounding
    for i in 0..n {
        for j in 0..i {
            let m = 0.5 * (inv[[i, j]] + inv[[j, i]]);
            inv[[i, j]] = m;
            inv[[j, i]] = m;
        }
    }
    inv
}

/// C = A B.
pub fn matmul(a: ArrayView2<f64>, b: ArrayView2<f64>) -> Array2<f64> {
    let mut c = Array2::<f64>::zeros((a.nrows(), b.ncols()));
    general_mat_mul(1.0, &a, &b, 0.0, &mut c);
    c
}

/// tr(A B) without forming the product.
pub fn trace_of_product(a: ArrayView2<f64>, b: ArrayView2<f64>) -> f64 {
    debug_assert_eq!(a.ncols(), b.nrows());
    debug_assert_eq!(a.nrows(), b.ncols());
    let mut acc = 0.0;
    for (arow, bcol) in a.outer_iter().zip(b.axis_iter(ndarray::Axis(1))) {
        acc += arow.dot(&bcol);
    }
    acc
}

/// Smallest eigenvalue of a symmetric positive definite matrix, by
/// bisection on the shift that keeps R - c I positive definite. Each
/// probe is a Cholesky attempt, so the bracket is rigorous.
pub fn min_eigenvalue_spd(r: ArrayView2<f64>, rel_tol: f64) -> f64 {
    let n = r.nrows();
    let mut hi = r.diag().iter().cloned().fold(f64::INFINITY, f64::min);
    if !hi.is_finite() || hi <= 0.0 {
        return 0.0;
    }
    let shifted_pd = |c: f64| -> bool {
        let mut a = r.to_owned();
        for i in 0..n {
            a[[i, i]] -= c;
        }
        cholesky_in_place(&mut a).is_ok()
    };
    if !shifted_pd(0.0) {
        return 0.0;
    }
    let mut lo = 0.0;
    while hi - lo > rel_tol * hi.max(1e-300) {
        let mid = 0.5 * (lo + hi);
        if shifted_pd(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use ndarray::arr2;

    fn spd_test_matrix(n: usize) -> Array2<f64> {
        // diagonally dominant symmetric matrix with known structure
        let mut a = Array2::<f64>::zeros((n, n));
        for i in 0..n {
            for j in 0..n {
                let d = (i as f64 - j as f64).abs();
                a[[i, j]] = (-0.3 * d).exp();
            }
            a[[i, i]] += 0.5;
        }
        a
    }

    #[test]
    fn cholesky_reconstructs() {
        for &n in &[1usize, 5, 64, 130, 257] {
            let a = spd_test_matrix(n);
            let l = cholesky(a.view()).unwrap();
            let rec = matmul(l.view(), l.t());
            let mut worst = 0.0f64;
            for i in 0..n {
                for j in 0..n {
                    worst = worst.max((rec[[i, j]] - a[[i, j]]).abs());
                }
            }
            assert!(worst < 1e-12, "n = {n}: reconstruction error {worst:e}");
        }
    }

    #[test]
    fn cholesky_rejects_indefinite() {
        let a = arr2(&[[1.0, 2.0], [2.0, 1.0]]);
        assert_eq!(cholesky(a.view()), Err(1));
    }

    #[test]
    fn solve_and_inverse_agree() {
        let n = 93;
        let a = spd_test_matrix(n);
        let l = cholesky(a.view()).unwrap();
        let b = Array1::from_iter((0..n).map(|i| (i as f64 * 0.37).sin()));
        let x = spd_solve(&l, b.view());
        let r = a.dot(&x);
        for i in 0..n {
            assert_relative_eq!(r[i], b[i], max_relative = 1e-10, epsilon = 1e-12);
        }
        let inv = spd_inverse_from_cholesky(&l);
        let xi = inv.dot(&b);
        for i in 0..n {
            assert_relative_eq!(x[i], xi[i], max_relative = 1e-9, epsilon = 1e-12);
        }
    }

    #[test]
    fn lower_inverse_blocked_matches_identity() {
        let n = 200;
        let a = spd_test_matrix(n);
        let l = cholesky(a.view()).unwrap();
        let w = lower_inverse(&l);
        let eye = matmul(w.view(), l.view());
        for i in 0..n {
            for j in 0..n {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((eye[[i, j]] - expect).abs() < 1e-11);
            }
        }
    }

    #[test]
    fn log_det_matches_small_case() {
        let a = arr2(&[[2.0, 0.3], [0.3, 1.5]]);
        let l = cholesky(a.view()).unwrap();
        let det: f64 = 2.0 * 1.5 - 0.09;
        assert_relative_eq!(log_det_from_cholesky(&l), det.ln(), max_relative = 1e-13);
    }

    #[test]
    fn trace_of_product_matches_full_product() {
        let a = spd_test_matrix(40);
        let b = {
            let mut b = spd_test_matrix(40);
            b.mapv_inplace(|v| 0.7 * v);
            b
        };
        let full = matmul(a.view(), b.view());
        let tr: f64 = full.diag().sum();
        assert_relative_eq!(
            trace_of_product(a.view(), b.view()),
            tr,
            max_relative = 1e-12
        );
    }

    #[test]
    fn min_eigenvalue_bisection_matches_2x2() {
        let a = arr2(&[[2.0, 0.5], [0.5, 1.0]]);
        // eigenvalues of [[2, .5], [.5, 1]]
        let expect = 1.5 - (0.25 + 0.25f64).sqrt();
        let got = min_eigenvalue_spd(a.view(), 1e-10);
        assert_relative_eq!(got, expect, max_relative = 1e-6);
    }
}
