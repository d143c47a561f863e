use num_complex::Complex64;

use super::matrix::{ComplexMatrix, ZERO};
use crate::error::{Error, Result};

/// Hermiticity tolerance accepted by [`hermitian_eig`].
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Off-diagonal Frobenius threshold (relative to the matrix norm) that ends
/// the sweeps.
pub const JACOBI_THRESHOLD: f64 = 1e-14;

pub const JACOBI_MAX_SWEEPS: usize = 100;

/// Spectrum of a Hermitian matrix: ascending eigenvalues and the unitary whose
/// columns are the matching eigenvectors.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl HermitianEigen {
    /// `V diag(λ) V†`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let lambda = ComplexMatrix::from_real_diagonal(&self.eigenvalues);
        &(&self.eigenvectors * &lambda) * &self.eigenvectors.adjoint()
    }

    /// Eigenvector `k` as a column.
    pub fn eigenvector(&self, k: usize) -> ComplexMatrix {
        let n = self.eigenvectors.rows();
        let amps: Vec<Complex64> = (0..n).map(|i| self.eigenvectors[(i, k)]).collect();
        ComplexMatrix::column(&amps)
    }
}

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi rotations.
pub fn hermitian_eig(h: &ComplexMatrix) -> Result<HermitianEigen> {
    if !h.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "eigendecomposition of a {}x{} matrix",
            h.rows(),
            h.cols()
        )));
    }
    if !h.is_hermitian(HERMITIAN_TOL) {
        return Err(Error::InvalidArgument(format!(
            "matrix is not Hermitian (max |H - H†| = {:.3e})",
            h.max_abs_diff(&h.adjoint())
        )));
    }

    let n = h.rows();
    // Work on the exactly Hermitian part.
    let mut a = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        a[(i, i)] = Complex64::new(h[(i, i)].re, 0.0);
        for j in (i + 1)..n {
            let z = (h[(i, j)] + h[(j, i)].conj()) * 0.5;
            a[(i, j)] = z;
            a[(j, i)] = z.conj();
        }
    }
    let mut v = ComplexMatrix::identity(n);
    let scale = a.norm().max(f64::MIN_POSITIVE);

    let mut converged = n < 2;
    for _ in 0..JACOBI_MAX_SWEEPS {
        if off_diagonal_norm(&a) <= JACOBI_THRESHOLD * scale {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }
    if !converged && off_diagonal_norm(&a) > JACOBI_THRESHOLD * scale {
        return Err(Error::NoConvergence(JACOBI_MAX_SWEEPS));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let eigenvalues = order.iter().map(|&i| a[(i, i)].re).collect();
    let mut eigenvectors = ComplexMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        for r in 0..n {
            eigenvectors[(r, dst)] = v[(r, src)];
        }
    }
    Ok(HermitianEigen { eigenvalues, eigenvectors })
}

/// Eigenvalues only, ascending.
pub fn eigenvalues(h: &ComplexMatrix) -> Result<Vec<f64>> {
    hermitian_eig(h).map(|e| e.eigenvalues)
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Annihilates `a[p,q]` with `G = diag(1, e^{-iα}) · [[c, s], [-s, c]]` on
/// the `(p, q)` plane, where `α = arg a[p,q]`: `a ← G† a G`, `v ← v G`.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let mag = apq.norm();
    if mag == 0.0 {
        return;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let phase = apq / mag; // e^{iα}

    let tau = (aqq - app) / (2.0 * mag);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    let g_pp = Complex64::new(c, 0.0);
    let g_pq = Complex64::new(s, 0.0);
    let g_qp = -phase.conj() * s;
    let g_qq = phase.conj() * c;

    let n = a.rows();
    // a ← a G (columns p, q)
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * g_pp + akq * g_qp;
        a[(k, q)] = akp * g_pq + akq * g_qq;
    }
    // a ← G† a (rows p, q)
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = g_pp.conj() * apk + g_qp.conj() * aqk;
        a[(q, k)] = g_pq.conj() * apk + g_qq.conj() * aqk;
    }
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;
    a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * g_pp + vkq * g_qp;
        v[(k, q)] = vkp * g_pq + vkq * g_qq;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_input_sorted() {
        let h = ComplexMatrix::from_real_diagonal(&[3.0, 1.0, 2.0]);
        let e = hermitian_eig(&h).unwrap();
        assert_eq!(e.eigenvalues, vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn pauli_x_spectrum() {
        let x = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap();
        let e = hermitian_eig(&x).unwrap();
        assert!((e.eigenvalues[0] + 1.0).abs() < 1e-14);
        assert!((e.eigenvalues[1] - 1.0).abs() < 1e-14);
        assert!(e.reconstruct().max_abs_diff(&x) < 1e-14);
    }

    #[test]
    fn complex_hermitian_reconstruction() {
        // Pauli Y plus a diagonal shift
        let h = ComplexMatrix::from_rows(&[
            vec![Complex64::new(0.5, 0.0), Complex64::new(0.0, -1.0)],
            vec![Complex64::new(0.0, 1.0), Complex64::new(-0.25, 0.0)],
        ])
        .unwrap();
        let e = hermitian_eig(&h).unwrap();
        assert!(e.reconstruct().max_abs_diff(&h) < 1e-14);
        assert!(e.eigenvectors.is_unitary(1e-14));
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[0.0, 1.0]]).unwrap();
        assert!(matches!(hermitian_eig(&m), Err(Error::InvalidArgument(_))));
        let rect = ComplexMatrix::zeros(2, 3);
        assert!(matches!(hermitian_eig(&rect), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn degenerate_spectrum() {
        let h = ComplexMatrix::identity(5).scale_real(0.2);
        let e = hermitian_eig(&h).unwrap();
        assert!(e.eigenvalues.iter().all(|&l| (l - 0.2).abs() < 1e-15));
    }
}
