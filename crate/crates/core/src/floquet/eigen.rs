//! Eigenvalues of small dense nonsymmetric real matrices.
//!
//! Balancing, Householder reduction to upper Hessenberg form, then the
//! Francis double-shift QR iteration. Eigenvectors come from inverse
//! iteration on the original matrix and are used to certify each
//! eigenvalue by its residual.

#![allow(clippy::needless_range_loop)]

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Total sweep budget is this many sweeps per row (at least 10 rows).
const SWEEPS_PER_ROW: usize = 30;

#[derive(Debug, Clone, PartialEq)]
pub struct Eigenpair {
    pub value: Complex64,
    pub vector: DVector<Complex64>,
    /// `||(M - value I) vector||_2` with `||vector||_2 = 1`.
    pub residual: f64,
}

/// Diagonal similarity scaling (powers of two) that equalizes row and
/// column norms.
fn balance(a: &mut DMatrix<f64>) {
    const RADIX: f64 = 2.0;
    let n = a.nrows();
    let sqrdx = RADIX * RADIX;
    loop {
        let mut done = true;
        for i in 0..n {
            let mut c = 0.0;
            let mut r = 0.0;
            for j in 0..n {
                if j != i {
                    c += a[(j, i)].abs();
                    r += a[(i, j)].abs();
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut g = r / RADIX;
            let mut f = 1.0;
            while c < g {
                f *= RADIX;
                c *= sqrdx;
            }
            g = r * RADIX;
            while c > g {
                f /= RADIX;
                c /= sqrdx;
            }
            if (c + r) / f < 0.95 * s {
                done = false;
                let inv = 1.0 / f;
                for j in 0..n {
                    a[(i, j)] *= inv;
                }
                for j in 0..n {
                    a[(j, i)] *= f;
                }
            }
        }
        if done {
            break;
        }
    }
}

/// Orthogonal similarity reduction to upper Hessenberg form.
fn hessenberg(a: &mut DMatrix<f64>) {
    let n = a.nrows();
    if n < 3 {
        return;
    }
    let mut ort = vec![0.0; n];
    let high = n - 1;
    for m in 1..high {
        let scale: f64 = (m..=high).map(|i| a[(i, m - 1)].abs()).sum();
        if scale == 0.0 {
            continue;
        }
        let mut h = 0.0;
        for i in (m..=high).rev() {
            ort[i] = a[(i, m - 1)] / scale;
            h += ort[i] * ort[i];
        }
        let mut g = h.sqrt();
        if ort[m] > 0.0 {
            g = -g;
        }
        h -= ort[m] * g;
        ort[m] -= g;
        for j in m..n {
            let f: f64 = (m..=high).rev().map(|i| ort[i] * a[(i, j)]).sum::<f64>() / h;
            for i in m..=high {
                a[(i, j)] -= f * ort[i];
            }
        }
        for i in 0..=high {
            let f: f64 = (m..=high).rev().map(|j| ort[j] * a[(i, j)]).sum::<f64>() / h;
            for j in m..=high {
                a[(i, j)] -= f * ort[j];
            }
        }
        a[(m, m - 1)] = scale * g;
        for i in (m + 1)..=high {
            a[(i, m - 1)] = 0.0;
        }
    }
}

fn sign(a: f64, b: f64) -> f64 {
    if b >= 0.0 {
        a.abs()
    } else {
        -a.abs()
    }
}

/// Eigenvalues of an upper Hessenberg matrix by Francis double-shift QR.
/// Works on a 1-based copy to keep the index arithmetic of the classic
/// formulation.
fn hqr(h: &DMatrix<f64>) -> Result<Vec<Complex64>> {
    let n = h.nrows();
    let mut a = vec![vec![0.0f64; n + 1]; n + 1];
    for i in 0..n {
        for j in 0..n {
            a[i + 1][j + 1] = h[(i, j)];
        }
    }
    let mut wr = vec![0.0; n + 1];
    let mut wi = vec![0.0; n + 1];
    let mut anorm = 0.0;
    for i in 1..=n {
        for j in i.saturating_sub(1).max(1)..=n {
            anorm += a[i][j].abs();
        }
    }
    let fail = |sweeps: usize| Error::NoConvergence { sweeps, matrix: h.clone() };

    let mut nn = n;
    let mut t = 0.0;
    let mut total_sweeps = 0;
    while nn >= 1 {
        let mut its = 0;
        loop {
            let mut l = nn;
            while l >= 2 {
                let mut s = a[l - 1][l - 1].abs() + a[l][l].abs();
                if s == 0.0 {
                    s = anorm;
                }
                if a[l][l - 1].abs() + s == s {
                    a[l][l - 1] = 0.0;
                    break;
                }
                l -= 1;
            }
            let mut x = a[nn][nn];
            if l == nn {
                wr[nn] = x + t;
                wi[nn] = 0.0;
                nn -= 1;
                break;
            }
            let mut y = a[nn - 1][nn - 1];
            let mut w = a[nn][nn - 1] * a[nn - 1][nn];
            if l == nn - 1 {
                let p = 0.5 * (y - x);
                let q = p * p + w;
                let mut z = q.abs().sqrt();
                x += t;
                if q >= 0.0 {
                    z = p + sign(z, p);
                    wr[nn - 1] = x + z;
                    wr[nn] = x + z;
                    if z != 0.0 {
                        wr[nn] = x - w / z;
                    }
                    wi[nn - 1] = 0.0;
                    wi[nn] = 0.0;
                } else {
                    wr[nn - 1] = x + p;
                    wr[nn] = x + p;
                    wi[nn - 1] = -z;
                    wi[nn] = z;
                }
                nn = nn.saturating_sub(2);
                break;
            }
            if total_sweeps == SWEEPS_PER_ROW * n.max(10) {
                return Err(fail(total_sweeps));
            }
            if its > 0 && its % 10 == 0 {
                // Exceptional shift.
                t += x;
                for i in 1..=nn {
                    a[i][i] -= x;
                }
                let s = a[nn][nn - 1].abs() + a[nn - 1][nn - 2].abs();
                x = 0.75 * s;
                y = x;
                w = -0.4375 * s * s;
            }
            its += 1;
            total_sweeps += 1;

            let (mut p, mut q, mut r);
            let mut m = nn - 2;
            loop {
                let z = a[m][m];
                let rr = x - z;
                let ss = y - z;
                p = (rr * ss - w) / a[m + 1][m] + a[m][m + 1];
                q = a[m + 1][m + 1] - z - rr - ss;
                r = a[m + 2][m + 1];
                let s = p.abs() + q.abs() + r.abs();
                p /= s;
                q /= s;
                r /= s;
                if m == l {
                    break;
                }
                let u = a[m][m - 1].abs() * (q.abs() + r.abs());
                let v = p.abs() * (a[m - 1][m - 1].abs() + z.abs() + a[m + 1][m + 1].abs());
                if u + v == v {
                    break;
                }
                m -= 1;
            }
            for i in (m + 2)..=nn {
                a[i][i - 2] = 0.0;
                if i != m + 2 {
                    a[i][i - 3] = 0.0;
                }
            }
            let mut k = m;
            while k < nn {
                if k != m {
                    p = a[k][k - 1];
                    q = a[k + 1][k - 1];
                    r = 0.0;
                    if k != nn - 1 {
                        r = a[k + 2][k - 1];
                    }
                    x = p.abs() + q.abs() + r.abs();
                    if x != 0.0 {
                        p /= x;
                        q /= x;
                        r /= x;
                    }
                }
                let s = sign((p * p + q * q + r * r).sqrt(), p);
                if s != 0.0 {
                    if k == m {
                        if l != m {
                            a[k][k - 1] = -a[k][k - 1];
                        }
                    } else {
                        a[k][k - 1] = -s * x;
                    }
                    p += s;
                    x = p / s;
                    y = q / s;
                    let z = r / s;
                    q /= p;
                    r /= p;
                    for j in k..=nn {
                        let mut pp = a[k][j] + q * a[k + 1][j];
                        if k != nn - 1 {
                            pp += r * a[k + 2][j];
                            a[k + 2][j] -= pp * z;
                        }
                        a[k + 1][j] -= pp * y;
                        a[k][j] -= pp * x;
                    }
                    let mmin = if nn < k + 3 { nn } else { k + 3 };
                    for i in l..=mmin {
                        let mut pp = x * a[i][k] + y * a[i][k + 1];
                        if k != nn - 1 {
                            pp += z * a[i][k + 2];
                            a[i][k + 2] -= pp * r;
                        }
                        a[i][k + 1] -= pp * q;
                        a[i][k] -= pp;
                    }
                }
                k += 1;
            }
        }
    }
    Ok((1..=n).map(|i| Complex64::new(wr[i], wi[i])).collect())
}

/// All eigenvalues of a square real matrix, with multiplicity.
pub fn eigenvalues(m: &DMatrix<f64>) -> Result<Vec<Complex64>> {
    if !m.is_square() {
        return Err(Error::invalid(format!("matrix is {}x{}, not square", m.nrows(), m.ncols())));
    }
    if m.iter().any(|v| !v.is_finite()) {
        return Err(Error::invalid("matrix has non-finite entries"));
    }
    if m.nrows() == 0 {
        return Ok(Vec::new());
    }
    let mut a = m.clone();
    balance(&mut a);
    hessenberg(&mut a);
    hqr(&a)
}

/// Unit eigenvector for an (approximate) eigenvalue by inverse iteration.
pub fn eigenvector(m: &DMatrix<f64>, value: Complex64) -> Eigenpair {
    let n = m.nrows();
    let mc: DMatrix<Complex64> = m.map(|v| Complex64::new(v, 0.0));
    let scale = m.norm().max(f64::MIN_POSITIVE);
    let residual_of = |v: &DVector<Complex64>| {
        let r = &mc * v - v * value;
        r.norm()
    };
    // Start from a vector with no special alignment.
    let mut v = DVector::from_fn(n, |i, _| Complex64::new(1.0 + 0.37 * i as f64, 0.11 * i as f64));
    v /= Complex64::new(v.norm(), 0.0);
    let mut best = (residual_of(&v), v.clone());
    for shift_exp in [-10, -8, -6] {
        let delta = Complex64::new(1.0, 0.5) * (scale * 10f64.powi(shift_exp));
        let mut b = mc.clone();
        for i in 0..n {
            b[(i, i)] -= value + delta;
        }
        let lu = b.lu();
        let mut x = v.clone();
        for _ in 0..3 {
            match lu.solve(&x) {
                Some(y) if y.iter().all(|c| c.re.is_finite() && c.im.is_finite()) && y.norm() > 0.0 => {
                    x = &y / Complex64::new(y.norm(), 0.0);
                }
                _ => break,
            }
        }
        let res = residual_of(&x);
        if res < best.0 {
            best = (res, x);
        }
        if best.0 <= 1e-12 * scale {
            break;
        }
    }
    Eigenpair { value, vector: best.1, residual: best.0 }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sorted(mut v: Vec<Complex64>) -> Vec<Complex64> {
        v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        v
    }

    #[test]
    fn rotation_has_conjugate_pair() {
        let m = DMatrix::from_row_slice(2, 2, &[0.0, -2.0, 2.0, 0.0]);
        let ev = sorted(eigenvalues(&m).unwrap());
        assert!((ev[0] - Complex64::new(0.0, -2.0)).norm() < 1e-14);
        assert!((ev[1] - Complex64::new(0.0, 2.0)).norm() < 1e-14);
    }

    #[test]
    fn triangular_diagonal() {
        let m = DMatrix::from_row_slice(
            4,
            4,
            &[
                3.0, 1.0, 2.0, 5.0, //
                0.0, -1.0, 7.0, 1.0, //
                0.0, 0.0, 0.5, 2.0, //
                0.0, 0.0, 0.0, 10.0,
            ],
        );
        let ev = sorted(eigenvalues(&m).unwrap());
        for (e, want) in ev.iter().zip([-1.0, 0.5, 3.0, 10.0]) {
            assert!((e - Complex64::new(want, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn companion_matrix_roots() {
        // (x - 1)(x + 2)(x^2 + 1)(x - 3) = x^5 - 2x^4 - 4x^3 + 4x^2 - 5x + 6.
        let c = [6.0, -5.0, 4.0, -4.0, -2.0];
        let mut m = DMatrix::zeros(5, 5);
        for i in 1..5 {
            m[(i, i - 1)] = 1.0;
        }
        for i in 0..5 {
            m[(i, 4)] = -c[i];
        }
        let ev = sorted(eigenvalues(&m).unwrap());
        let want = sorted(vec![
            Complex64::new(-2.0, 0.0),
            Complex64::new(0.0, -1.0),
            Complex64::new(0.0, 1.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(3.0, 0.0),
        ]);
        for (e, w) in ev.iter().zip(&want) {
            assert!((e - w).norm() < 1e-10, "{ev:?}");
        }
    }

    #[test]
    fn repeated_eigenvalue_vectors() {
        let m = DMatrix::from_diagonal(&DVector::from_vec(vec![-1.0, -1.0, -1.0, -1.0, 1.0, 1.0]));
        let ev = eigenvalues(&m).unwrap();
        for e in ev {
            let p = eigenvector(&m, e);
            assert!(p.residual <= 1e-8 * m.norm());
        }
    }

    #[test]
    fn jordan_block_is_certified() {
        let m = DMatrix::from_row_slice(3, 3, &[2.0, 1.0, 0.0, 0.0, 2.0, 1.0, 0.0, 0.0, 2.0]);
        for e in eigenvalues(&m).unwrap() {
            assert!((e.re - 2.0).abs() < 1e-4);
            assert!(eigenvector(&m, e).residual <= 1e-8 * m.norm());
        }
    }

    #[test]
    fn rejects_non_finite() {
        let m = DMatrix::from_row_slice(2, 2, &[f64::NAN, 0.0, 0.0, 1.0]);
        assert!(eigenvalues(&m).is_err());
    }

    fn char_poly_coeffs(m: &DMatrix<f64>) -> Vec<f64> {
        // Faddeev-LeVerrier: independent of the QR path.
        let n = m.nrows();
        let mut coeffs = vec![0.0; n + 1];
        coeffs[n] = 1.0;
        let mut mk = DMatrix::<f64>::zeros(n, n);
        let id = DMatrix::<f64>::identity(n, n);
        for k in 1..=n {
            mk = m * (&mk + &id * coeffs[n - k + 1]);
            coeffs[n - k] = -mk.trace() / k as f64;
        }
        coeffs
    }

    fn poly_at(coeffs: &[f64], z: Complex64) -> Complex64 {
        coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    proptest! {
        #[test]
        fn eigenvalues_are_roots_and_certified(entries in proptest::collection::vec(-3.0f64..3.0, 36)) {
            let m = DMatrix::from_row_slice(6, 6, &entries);
            let ev = eigenvalues(&m).unwrap();
            prop_assert_eq!(ev.len(), 6);
            // Trace and determinant identities.
            let sum: Complex64 = ev.iter().sum();
            prop_assert!((sum.re - m.trace()).abs() < 1e-9 * (1.0 + m.norm()));
            prop_assert!(sum.im.abs() < 1e-9 * (1.0 + m.norm()));
            let prod: Complex64 = ev.iter().product();
            prop_assert!((prod.re - m.determinant()).abs() < 1e-8 * (1.0 + m.norm().powi(6)));
            let coeffs = char_poly_coeffs(&m);
            for e in &ev {
                let scale: f64 = coeffs.iter().enumerate().map(|(i, c)| c.abs() * e.norm().powi(i as i32)).sum();
                prop_assert!(poly_at(&coeffs, *e).norm() <= 1e-9 * scale);
                prop_assert!(eigenvector(&m, *e).residual <= 1e-8 * m.norm());
            }
        }
    }
}
