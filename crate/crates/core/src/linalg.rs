//! Small shared linear-algebra helpers.
//!
//! Hamiltonians are real symmetric while states are complex, so the hot paths
//! multiply a real matrix into a complex vector. Splitting the vector into its
//! real and imaginary parts turns that into two real gemvs, which is both
//! faster than promoting the matrix to complex and keeps the matrix storage
//! real.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

/// `m * v` for real `m` and complex `v`.
pub(crate) fn mul_complex(m: &DMatrix<f64>, v: &DVector<Complex64>) -> DVector<Complex64> {
    let re = v.map(|z| z.re);
    let im = v.map(|z| z.im);
    let mre = m * &re;
    let mim = m * &im;
    DVector::from_fn(m.nrows(), |i, _| Complex64::new(mre[i], mim[i]))
}

/// `mᵀ * v` for real `m` and complex `v` (no transpose materialized).
pub(crate) fn tr_mul_complex(m: &DMatrix<f64>, v: &DVector<Complex64>) -> DVector<Complex64> {
    let re = v.map(|z| z.re);
    let im = v.map(|z| z.im);
    let mre = m.tr_mul(&re);
    let mim = m.tr_mul(&im);
    DVector::from_fn(m.ncols(), |i, _| Complex64::new(mre[i], mim[i]))
}

/// Largest absolute entry of a real matrix (0 for an empty matrix).
pub(crate) fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0_f64, |acc, x| acc.max(x.abs()))
}

/// Largest entry modulus of a complex matrix (0 for an empty matrix).
#[cfg_attr(not(test), allow(dead_code))] // oracle support for unit tests
pub(crate) fn max_modulus(m: &DMatrix<Complex64>) -> f64 {
    m.iter().fold(0.0_f64, |acc, z| acc.max(z.norm()))
}

/// Largest absolute asymmetry `|m_ij - m_ji|` over all pairs (0 if symmetric).
pub(crate) fn max_asymmetry(m: &DMatrix<f64>) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0_f64;
    for i in 0..n {
        for j in (i + 1)..n {
            worst = worst.max((m[(i, j)] - m[(j, i)]).abs());
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mul_complex_matches_manual_loop() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 3.0, 4.0]);
        let v = DVector::from_vec(vec![Complex64::new(1.0, -1.0), Complex64::new(0.5, 2.0)]);
        let got = mul_complex(&m, &v);
        for i in 0..2 {
            let want: Complex64 = (0..2).map(|j| m[(i, j)] * v[j]).sum();
            assert!(
                (got[i] - want).norm() < 1e-15,
                "row {i}: {got:?} vs {want:?}"
            );
        }
    }

    #[test]
    fn tr_mul_complex_is_transpose_product() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 3.0, 4.0]);
        let v = DVector::from_vec(vec![Complex64::new(0.0, 1.0), Complex64::new(1.0, 0.0)]);
        let got = tr_mul_complex(&m, &v);
        let want = mul_complex(&m.transpose(), &v);
        assert!((got - want).norm() < 1e-15);
    }

    #[test]
    fn max_asymmetry_flags_a_single_tweaked_pair() {
        let mut m = DMatrix::from_element(3, 3, 1.0);
        assert_eq!(max_asymmetry(&m), 0.0);
        m[(0, 2)] += 1e-10;
        // 1.0 + 1e-10 rounds, so compare against the actually stored gap.
        let expect = m[(0, 2)] - m[(2, 0)];
        assert_eq!(max_asymmetry(&m), expect);
        assert!((expect - 1e-10).abs() < 1e-16);
    }
}
