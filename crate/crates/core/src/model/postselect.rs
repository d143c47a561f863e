use num_complex::Complex64;

use super::{DETECTOR, ORDER, QUANTON};
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, DensityOperator};

/// Outcome probabilities below this leave the conditional state undefined.
pub const DEGENERATE_PROBABILITY: f64 = 1e-12;

/// Projection of the order qubit onto `|±_φ> = (|0> ± e^{iφ}|1>)/√2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OrderOutcome {
    Plus,
    Minus,
}

impl OrderOutcome {
    pub fn sign(self) -> f64 {
        match self {
            OrderOutcome::Plus => 1.0,
            OrderOutcome::Minus => -1.0,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            OrderOutcome::Plus => "+",
            OrderOutcome::Minus => "-",
        }
    }

    /// `|±_φ>` as a column.
    pub fn ket(self, phi: f64) -> ComplexMatrix {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        ComplexMatrix::column(&[Complex64::new(h, 0.0), Complex64::from_polar(self.sign() * h, phi)])
    }
}

/// Normalized states conditioned on one order outcome.
#[derive(Debug, Clone)]
pub struct ConditionalStates {
    /// `ρ⁽±⁾_QD` on `[n, d]`.
    pub qd: DensityOperator,
    /// `ρ⁽±⁾_Q` on `[n]`.
    pub q: DensityOperator,
    /// `ρ⁽±⁾_Q[0,1]`.
    pub gamma: Complex64,
}

#[derive(Debug, Clone)]
pub struct PostSelectionResult {
    pub outcome: OrderOutcome,
    /// `N_±`.
    pub probability: f64,
    /// `None` when the outcome is degenerate.
    pub conditional: Option<ConditionalStates>,
}

impl PostSelectionResult {
    pub fn is_degenerate(&self) -> bool {
        self.conditional.is_none()
    }
}

/// Measures the order factor of `ρ_tot` in the `|±_φ>` basis.
///
/// Returns the `+` result first.
pub fn post_select(rho_tot: &DensityOperator, phi: f64) -> Result<(PostSelectionResult, PostSelectionResult)> {
    let dims = rho_tot.dims();
    if dims.len() != 3 || dims[ORDER] != 2 {
        return Err(Error::DimensionMismatch(format!("expected dims [n, d, 2], found {dims:?}")));
    }
    if !phi.is_finite() {
        return Err(Error::InvalidArgument("basis phase must be finite".into()));
    }
    let qd_dims = vec![dims[QUANTON], dims[DETECTOR]];
    let plus = select_one(rho_tot, &qd_dims, phi, OrderOutcome::Plus)?;
    let minus = select_one(rho_tot, &qd_dims, phi, OrderOutcome::Minus)?;
    Ok((plus, minus))
}

fn select_one(rho: &DensityOperator, qd_dims: &[usize], phi: f64, outcome: OrderOutcome) -> Result<PostSelectionResult> {
    let v = outcome.ket(phi);
    let m = rho.matrix();
    let k = qd_dims[0] * qd_dims[1];
    // <±|ρ|±> on the order factor, unnormalized
    let mut block = ComplexMatrix::zeros(k, k);
    for a in 0..k {
        for b in 0..k {
            let mut acc = Complex64::new(0.0, 0.0);
            for s in 0..2 {
                for t in 0..2 {
                    acc += v[(s, 0)].conj() * m[(2 * a + s, 2 * b + t)] * v[(t, 0)];
                }
            }
            block[(a, b)] = acc;
        }
    }
    let probability = block.trace().re.max(0.0);
    if probability < DEGENERATE_PROBABILITY {
        return Ok(PostSelectionResult { outcome, probability, conditional: None });
    }
    let qd = DensityOperator::new(block.scale_real(1.0 / probability), qd_dims.to_vec())?;
    let q = qd.partial_trace(&[QUANTON])?;
    let gamma = q.matrix()[(0, 1)];
    Ok(PostSelectionResult { outcome, probability, conditional: Some(ConditionalStates { qd, q, gamma }) })
}
