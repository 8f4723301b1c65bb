//! Dense complex determinants for the small matrices used by the kernel
//! routines. Gaussian elimination with partial pivoting is plenty for
//! windows of a few dozen positions.

use num_complex::Complex64;

/// Determinant of an `n x n` row-major complex matrix. Consumes the buffer
/// as elimination workspace. The empty matrix has determinant 1.
pub(crate) fn determinant(n: usize, mut m: Vec<Complex64>) -> Complex64 {
    debug_assert_eq!(m.len(), n * n);
    let mut det = Complex64::new(1.0, 0.0);
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| {
                m[i * n + col]
                    .norm_sqr()
                    .total_cmp(&m[j * n + col].norm_sqr())
            })
            .expect("column range is nonempty");
        if m[pivot * n + col].norm_sqr() == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        if pivot != col {
            for k in 0..n {
                m.swap(col * n + k, pivot * n + k);
            }
            det = -det;
        }
        let p = m[col * n + col];
        det *= p;
        for row in col + 1..n {
            let factor = m[row * n + col] / p;
            m[row * n + col] = Complex64::new(0.0, 0.0);
            for k in col + 1..n {
                let sub = factor * m[col * n + k];
                m[row * n + k] -= sub;
            }
        }
    }
    det
}
