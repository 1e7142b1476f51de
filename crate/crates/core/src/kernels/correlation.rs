//! `k`-point correlation functions as determinants of kernel matrices.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Determinant of a small square complex matrix (row-major) by LU with
/// partial pivoting.
pub fn complex_determinant(mut a: Vec<Complex64>, k: usize) -> Complex64 {
    assert_eq!(a.len(), k * k, "matrix must be k x k");
    let mut det = Complex64::new(1.0, 0.0);
    for col in 0..k {
        let pivot = (col..k)
            .max_by(|&i, &j| a[i * k + col].norm().total_cmp(&a[j * k + col].norm()))
            .expect("non-empty pivot range");
        if a[pivot * k + col].norm() == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        if pivot != col {
            for j in 0..k {
                a.swap(pivot * k + j, col * k + j);
            }
            det = -det;
        }
        let p = a[col * k + col];
        det *= p;
        for i in col + 1..k {
            let f = a[i * k + col] / p;
            for j in col..k {
                let sub = f * a[col * k + j];
                a[i * k + j] -= sub;
            }
        }
    }
    det
}

/// `rho_k(z_1, ..., z_k) = det[K(z_j, z_l)]`.
///
/// The kernel is Hermitian, so the determinant is real; an imaginary part
/// larger than `1e-10` of the magnitude signals a non-Hermitian evaluator and
/// is reported as an error.
pub fn correlation_det<P, F>(kernel: F, points: &[P]) -> Result<f64>
where
    F: Fn(&P, &P) -> Result<Complex64>,
{
    let k = points.len();
    if k == 0 {
        return Err(Error::InvalidParameter("correlation needs at least one point".into()));
    }
    let mut m = Vec::with_capacity(k * k);
    for p in points {
        for q in points {
            m.push(kernel(p, q)?);
        }
    }
    let det = complex_determinant(m, k);
    if det.im.abs() > 1e-10 * det.norm().max(f64::MIN_POSITIVE) && det.im.abs() > 1e-300 {
        return Err(Error::Domain(format!(
            "kernel matrix determinant {det} is not real; evaluator is not Hermitian"
        )));
    }
    Ok(det.re)
}
