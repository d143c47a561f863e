use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, DensityOperator};
use crate::model::path_components;

/// Slack on `Σ p_i = 1` and on detector-state norms.
pub const ENSEMBLE_TOL: f64 = 1e-10;

/// One coherence/distinguishability pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DualityReport {
    pub coherence: f64,
    pub distinguishability: f64,
    pub sum: f64,
    /// `|sum − 1| < tol`.
    pub saturated: bool,
}

impl DualityReport {
    pub fn new(coherence: f64, distinguishability: f64, tol: f64) -> Self {
        let sum = coherence + distinguishability;
        Self { coherence, distinguishability, sum, saturated: (sum - 1.0).abs() < tol }
    }
}

/// Normalized l1 coherence `(1/(n−1)) Σ_{i≠j} |ρ_ij|` in the computational basis.
pub fn l1_coherence(rho: &DensityOperator, n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("coherence needs at least two basis states, got {n}")));
    }
    if rho.dim() != n {
        return Err(Error::DimensionMismatch(format!("state has dimension {}, expected {n}", rho.dim())));
    }
    let m = rho.matrix();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += m[(i, j)].norm();
            }
        }
    }
    Ok(s / (n - 1) as f64)
}

/// `D_Q = 1 − (1/(n−1)) Σ_{i≠j} √(p_i p_j) |<d_j|d_i>|` for a pure detector ensemble.
pub fn path_distinguishability(priors: &[f64], states: &[ComplexMatrix]) -> Result<f64> {
    let n = priors.len();
    if n < 2 || states.len() != n {
        return Err(Error::InvalidArgument(format!("{} priors for {} detector states", n, states.len())));
    }
    if priors.iter().any(|&p| !(p >= 0.0)) || (priors.iter().sum::<f64>() - 1.0).abs() > ENSEMBLE_TOL {
        return Err(Error::InvalidArgument("priors must be non-negative and sum to 1".into()));
    }
    for (i, s) in states.iter().enumerate() {
        if s.cols() != 1 || s.rows() != states[0].rows() {
            return Err(Error::DimensionMismatch(format!("detector state {i} has shape {}x{}", s.rows(), s.cols())));
        }
        if (s.norm() - 1.0).abs() > ENSEMBLE_TOL {
            return Err(Error::InvalidArgument(format!("detector state {i} has norm {:.12}", s.norm())));
        }
    }
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += (priors[i] * priors[j]).sqrt() * states[j].inner(&states[i]).norm();
            }
        }
    }
    Ok(1.0 - s / (n - 1) as f64)
}

/// Path priors and normalized conditional detector states of a pure QD ket.
///
/// Paths with zero weight get `|0>` as a placeholder state; it never
/// contributes because its prior vanishes.
pub fn detector_ensemble(ket: &ComplexMatrix, n: usize, d: usize) -> Result<(Vec<f64>, Vec<ComplexMatrix>)> {
    let parts = path_components(ket, n, d)?;
    let mut priors = Vec::with_capacity(n);
    let mut states = Vec::with_capacity(n);
    for part in parts {
        let w = part.norm();
        priors.push(w * w);
        if w > 0.0 {
            states.push(part.scale_real(1.0 / w));
        } else {
            states.push(ComplexMatrix::basis(d, 0));
        }
    }
    let total: f64 = priors.iter().sum();
    for p in priors.iter_mut() {
        *p /= total;
    }
    Ok((priors, states))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn coherence_examples() {
        let diag = DensityOperator::from_matrix(ComplexMatrix::from_real_diagonal(&[0.2, 0.3, 0.5])).unwrap();
        assert_eq!(l1_coherence(&diag, 3).unwrap(), 0.0);

        for n in 2..6 {
            let amp = c(1.0 / (n as f64).sqrt(), 0.0);
            let ket = ComplexMatrix::column(&vec![amp; n]);
            let rho = DensityOperator::from_pure(&ket, vec![n]).unwrap();
            assert!((l1_coherence(&rho, n).unwrap() - 1.0).abs() < 1e-14);
        }

        let rho = DensityOperator::from_matrix(
            ComplexMatrix::from_rows(&[vec![c(0.5, 0.0), c(0.0, 0.3)], vec![c(0.0, -0.3), c(0.5, 0.0)]]).unwrap(),
        )
        .unwrap();
        // |0.3i| + |−0.3i| over n − 1 = 1
        assert!((l1_coherence(&rho, 2).unwrap() - 0.6).abs() < 1e-15);
        assert!(matches!(l1_coherence(&rho, 1), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn distinguishability_examples() {
        let e0 = ComplexMatrix::basis(3, 0);
        let e1 = ComplexMatrix::basis(3, 1);
        let e2 = ComplexMatrix::basis(3, 2);
        let d = path_distinguishability(&[0.2, 0.3, 0.5], &[e0.clone(), e1, e2]).unwrap();
        assert!((d - 1.0).abs() < 1e-15);
        let d = path_distinguishability(&[0.5, 0.5], &[e0.clone(), e0.clone()]).unwrap();
        assert!(d.abs() < 1e-15);

        let tilted = ComplexMatrix::column(&[c(0.6, 0.0), c(0.0, 0.8), c(0.0, 0.0)]);
        let d = path_distinguishability(&[0.5, 0.5], &[e0.clone(), tilted]).unwrap();
        assert!((d - 0.4).abs() < 1e-15);

        let long = e0.scale_real(2.0);
        assert!(path_distinguishability(&[0.5, 0.5], &[e0.clone(), long]).is_err());
        assert!(path_distinguishability(&[0.6, 0.6], &[e0.clone(), e0]).is_err());
    }

    #[test]
    fn ensemble_of_product_ket() {
        // (√0.3|0> + √0.7|1>) ⊗ |+>
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let a = 0.3f64.sqrt();
        let b = 0.7f64.sqrt();
        let ket = ComplexMatrix::column(&[c(a * h, 0.0), c(a * h, 0.0), c(b * h, 0.0), c(b * h, 0.0)]);
        let (priors, states) = detector_ensemble(&ket, 2, 2).unwrap();
        assert!((priors[0] - 0.3).abs() < 1e-15 && (priors[1] - 0.7).abs() < 1e-15);
        assert!(states[0].max_abs_diff(&states[1]) < 1e-15);
    }

    #[test]
    fn zero_weight_path() {
        let ket = ComplexMatrix::column(&[c(0.0, 0.0), c(0.0, 0.0), c(0.0, 1.0), c(0.0, 0.0)]);
        let (priors, states) = detector_ensemble(&ket, 2, 2).unwrap();
        assert_eq!(priors, vec![0.0, 1.0]);
        assert!((path_distinguishability(&priors, &states).unwrap() - 1.0).abs() < 1e-15);
    }
}
