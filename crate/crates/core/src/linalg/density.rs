use num_complex::Complex64;

use super::eigen::{eigenvalues, hermitian_eig};
use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};

/// Tolerance for Hermiticity, unit trace and positivity of a density operator.
pub const STATE_TOL: f64 = 1e-10;

/// Eigenvalues inside `[-EIG_CLAMP, 1 + EIG_CLAMP]` are clamped to `[0, 1]`
/// before entropies are taken.
pub const EIG_CLAMP: f64 = 1e-10;

/// A validated quantum state: Hermitian, unit trace, positive semidefinite,
/// together with its tensor-factor dimensions (index 0 is leftmost).
#[derive(Debug, Clone)]
pub struct DensityOperator {
    matrix: ComplexMatrix,
    dims: Vec<usize>,
}

impl DensityOperator {
    pub fn new(matrix: ComplexMatrix, dims: Vec<usize>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::InvalidState(format!(
                "matrix is {}x{}, not square",
                matrix.rows(),
                matrix.cols()
            )));
        }
        if dims.is_empty() || dims.contains(&0) || dims.iter().product::<usize>() != matrix.rows() {
            return Err(Error::DimensionMismatch(format!(
                "subsystem dims {:?} do not multiply to {}",
                dims,
                matrix.rows()
            )));
        }
        let herm_err = matrix.max_abs_diff(&matrix.adjoint());
        if herm_err > STATE_TOL {
            return Err(Error::InvalidState(format!("not Hermitian (deviation {herm_err:.3e})")));
        }
        let tr = matrix.trace();
        if (tr - Complex64::new(1.0, 0.0)).norm() > STATE_TOL {
            return Err(Error::InvalidState(format!("trace is {:.12} + {:.3e}i", tr.re, tr.im)));
        }
        let min_eig = eigenvalues(&matrix)?.first().copied().unwrap_or(0.0);
        if min_eig < -STATE_TOL {
            return Err(Error::InvalidState(format!("negative eigenvalue {min_eig:.3e}")));
        }
        Ok(Self { matrix, dims })
    }

    /// Single-factor state.
    pub fn from_matrix(matrix: ComplexMatrix) -> Result<Self> {
        let n = matrix.rows();
        Self::new(matrix, vec![n])
    }

    /// `|ψ><ψ|` for a normalized ket.
    pub fn from_pure(ket: &ComplexMatrix, dims: Vec<usize>) -> Result<Self> {
        if ket.cols() != 1 {
            return Err(Error::InvalidArgument("pure state must be a column vector".into()));
        }
        let norm = ket.norm();
        if (norm - 1.0).abs() > STATE_TOL {
            return Err(Error::InvalidArgument(format!("ket has norm {norm:.12}, expected 1")));
        }
        Self::new(ComplexMatrix::outer(ket, ket), dims)
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    /// `Tr(ρ²)`.
    pub fn purity(&self) -> f64 {
        let n = self.dim();
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                s += self.matrix[(i, j)].norm_sqr();
            }
        }
        s
    }

    /// `ρ ⊗ σ` with concatenated dims.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        Self::new(self.matrix.kron(&other.matrix), dims)
    }

    /// Reduced state on the subsystems listed in `keep` (kept in original order).
    pub fn partial_trace(&self, keep: &[usize]) -> Result<Self> {
        let (matrix, dims) = partial_trace_matrix(&self.matrix, &self.dims, keep)?;
        Self::new(matrix, dims)
    }

    /// Von Neumann entropy in bits.
    pub fn entropy(&self) -> Result<f64> {
        von_neumann_entropy(self)
    }
}

/// Partial trace of an arbitrary square matrix carrying tensor dims.
///
/// Returns the reduced matrix together with the kept dims.
pub fn partial_trace_matrix(
    m: &ComplexMatrix,
    dims: &[usize],
    keep: &[usize],
) -> Result<(ComplexMatrix, Vec<usize>)> {
    if keep.is_empty() {
        return Err(Error::InvalidArgument("partial trace must keep at least one subsystem".into()));
    }
    if dims.iter().product::<usize>() != m.rows() || !m.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "dims {:?} incompatible with a {}x{} matrix",
            dims,
            m.rows(),
            m.cols()
        )));
    }
    let mut kept: Vec<usize> = keep.to_vec();
    kept.sort_unstable();
    kept.dedup();
    if let Some(&bad) = kept.iter().find(|&&k| k >= dims.len()) {
        return Err(Error::InvalidArgument(format!(
            "subsystem index {} out of range for {} subsystems",
            bad,
            dims.len()
        )));
    }
    let traced: Vec<usize> = (0..dims.len()).filter(|i| !kept.contains(i)).collect();

    // Row-major strides of the full index.
    let mut strides = vec![1usize; dims.len()];
    for i in (0..dims.len().saturating_sub(1)).rev() {
        strides[i] = strides[i + 1] * dims[i + 1];
    }
    let kept_dims: Vec<usize> = kept.iter().map(|&i| dims[i]).collect();
    let traced_dims: Vec<usize> = traced.iter().map(|&i| dims[i]).collect();
    let kept_offsets = offsets(&kept, &kept_dims, &strides);
    let traced_offsets = offsets(&traced, &traced_dims, &strides);

    let n = kept_offsets.len();
    let mut out = ComplexMatrix::zeros(n, n);
    for (r, &ro) in kept_offsets.iter().enumerate() {
        for (c, &co) in kept_offsets.iter().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for &t in &traced_offsets {
                acc += m[(ro + t, co + t)];
            }
            out[(r, c)] = acc;
        }
    }
    Ok((out, kept_dims))
}

/// Full-index offsets contributed by every multi-index over `factors`.
fn offsets(factors: &[usize], dims: &[usize], strides: &[usize]) -> Vec<usize> {
    let total: usize = dims.iter().product();
    let mut out = Vec::with_capacity(total);
    for mut flat in 0..total {
        let mut off = 0;
        for (k, &f) in factors.iter().enumerate().rev() {
            let d = dims[k];
            off += (flat % d) * strides[f];
            flat /= d;
        }
        out.push(off);
    }
    out
}

/// Trace norm of a Hermitian matrix: sum of absolute eigenvalues.
pub fn trace_norm(m: &ComplexMatrix) -> Result<f64> {
    Ok(eigenvalues(m)?.iter().map(|l| l.abs()).sum())
}

/// `-Σ λ log₂ λ` over the clamped spectrum.
pub fn von_neumann_entropy(rho: &DensityOperator) -> Result<f64> {
    let spectrum = hermitian_eig(rho.matrix())?.eigenvalues;
    Ok(entropy_of_spectrum(&spectrum))
}

/// Shannon entropy (bits) of a spectrum, clamping round-off into `[0, 1]`.
pub fn entropy_of_spectrum(spectrum: &[f64]) -> f64 {
    spectrum
        .iter()
        .map(|&l| l.clamp(0.0, 1.0))
        .filter(|&l| l > 0.0)
        .map(|l| -l * l.log2())
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn bell_state_reduces_to_maximally_mixed() {
        let bell = ComplexMatrix::column(&[c(FRAC_1_SQRT_2), c(0.0), c(0.0), c(FRAC_1_SQRT_2)]);
        let rho = DensityOperator::from_pure(&bell, vec![2, 2]).unwrap();
        let reduced = rho.partial_trace(&[0]).unwrap();
        let half = ComplexMatrix::identity(2).scale_real(0.5);
        assert!(reduced.matrix().max_abs_diff(&half) < 1e-15);
        assert_eq!(reduced.dims(), &[2]);
        assert!((reduced.entropy().unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn product_state_trace_recovers_factor() {
        let rho = DensityOperator::from_matrix(
            ComplexMatrix::from_rows(&[
                vec![c(0.7), Complex64::new(0.1, 0.2)],
                vec![Complex64::new(0.1, -0.2), c(0.3)],
            ])
            .unwrap(),
        )
        .unwrap();
        let sigma = DensityOperator::from_matrix(ComplexMatrix::from_real_diagonal(&[0.2, 0.5, 0.3])).unwrap();
        let joint = rho.tensor(&sigma).unwrap();
        assert_eq!(joint.dims(), &[2, 3]);
        let back = joint.partial_trace(&[0]).unwrap();
        assert!(back.matrix().max_abs_diff(rho.matrix()) < 1e-15);
        let other = joint.partial_trace(&[1]).unwrap();
        assert!(other.matrix().max_abs_diff(sigma.matrix()) < 1e-15);
    }

    #[test]
    fn invalid_subsystem_index() {
        let rho = DensityOperator::new(ComplexMatrix::identity(4).scale_real(0.25), vec![2, 2]).unwrap();
        assert!(matches!(rho.partial_trace(&[2]), Err(Error::InvalidArgument(_))));
        assert!(matches!(rho.partial_trace(&[]), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn validation_rejects_bad_states() {
        let not_unit = ComplexMatrix::identity(2);
        assert!(matches!(DensityOperator::from_matrix(not_unit), Err(Error::InvalidState(_))));
        let negative = ComplexMatrix::from_real_diagonal(&[1.5, -0.5]);
        assert!(matches!(DensityOperator::from_matrix(negative), Err(Error::InvalidState(_))));
        let wrong_dims = ComplexMatrix::identity(4).scale_real(0.25);
        assert!(matches!(DensityOperator::new(wrong_dims, vec![3]), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn trace_norm_examples() {
        assert!((trace_norm(&ComplexMatrix::from_real_diagonal(&[1.0, -1.0])).unwrap() - 2.0).abs() < 1e-15);
        let rho = ComplexMatrix::from_real_rows(&[&[0.5, 0.5], &[0.5, 0.5]]).unwrap();
        assert!((trace_norm(&rho).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn entropy_examples() {
        let pure = DensityOperator::from_matrix(ComplexMatrix::from_real_diagonal(&[0.0, 1.0])).unwrap();
        assert_eq!(pure.entropy().unwrap(), 0.0);
        let mixed = DensityOperator::from_matrix(ComplexMatrix::from_real_diagonal(&[0.5, 0.5])).unwrap();
        assert!((mixed.entropy().unwrap() - 1.0).abs() < 1e-15);
        // h2(3/4) evaluated independently
        let h2 = -(0.75f64 * 0.75f64.log2() + 0.25 * 0.25f64.log2());
        let rho = DensityOperator::from_matrix(ComplexMatrix::from_real_diagonal(&[0.75, 0.25])).unwrap();
        assert!((rho.entropy().unwrap() - h2).abs() < 1e-15);
    }
}
