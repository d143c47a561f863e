use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, DensityOperator};
use crate::model::{OrderOutcome, DETECTOR, ORDER, QUANTON};

/// Round-off below zero tolerated (and clamped) for classical-quantum states.
pub const CQ_CLAMP: f64 = 1e-10;

/// Measurement basis on the order qubit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OrderBasis {
    /// `{|0>, |1>}`.
    Z,
    /// `{|+>, |−>}`.
    X,
}

impl OrderBasis {
    fn projectors(self) -> [ComplexMatrix; 2] {
        match self {
            OrderBasis::Z => [ComplexMatrix::from_real_diagonal(&[1.0, 0.0]), ComplexMatrix::from_real_diagonal(&[0.0, 1.0])],
            OrderBasis::X => [OrderOutcome::Plus, OrderOutcome::Minus].map(|o| {
                let v = o.ket(0.0);
                ComplexMatrix::outer(&v, &v)
            }),
        }
    }
}

/// Entropic uncertainty quantities for the order qubit given QD.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropicReport {
    /// `H(Z_O|QD)`.
    pub h_z: f64,
    /// `H(X_O|QD)`.
    pub h_x: f64,
    pub bound: f64,
    /// `h_z + h_x − bound`.
    pub slack: f64,
    pub delta: f64,
    /// `H(O)`.
    pub h_order: f64,
}

impl EntropicReport {
    pub fn new(h_z: f64, h_x: f64, bound: f64, delta: f64, h_order: f64) -> Self {
        Self { h_z, h_x, bound, slack: h_z + h_x - bound, delta, h_order }
    }
}

fn check_dims(rho: &DensityOperator) -> Result<()> {
    let dims = rho.dims();
    if dims.len() != 3 || dims[ORDER] != 2 {
        return Err(Error::DimensionMismatch(format!("expected dims [n, d, 2], found {dims:?}")));
    }
    Ok(())
}

/// `Σ_k (I ⊗ Π_k) ρ (I ⊗ Π_k)` on the order factor.
pub fn dephase_order(rho_oqd: &DensityOperator, basis: OrderBasis) -> Result<DensityOperator> {
    check_dims(rho_oqd)?;
    let id = ComplexMatrix::identity(rho_oqd.dims()[QUANTON] * rho_oqd.dims()[DETECTOR]);
    let mut out = ComplexMatrix::zeros(rho_oqd.dim(), rho_oqd.dim());
    for proj in basis.projectors() {
        let p = id.kron(&proj);
        out = &out + &(&(&p * rho_oqd.matrix()) * &p);
    }
    DensityOperator::new(out, rho_oqd.dims().to_vec())
}

/// `H(M|QD) = H(ρ^M_OQD) − H(ρ_QD)` after measuring the order qubit in `basis`.
pub fn conditional_entropy_after_measurement(rho_oqd: &DensityOperator, basis: OrderBasis) -> Result<f64> {
    let dephased = dephase_order(rho_oqd, basis)?;
    let qd = rho_oqd.partial_trace(&[QUANTON, DETECTOR])?;
    let h = dephased.entropy()? - qd.entropy()?;
    if h < -CQ_CLAMP {
        return Err(Error::Inconsistent(format!("negative classical-quantum conditional entropy {h:.3e}")));
    }
    Ok(h.max(0.0))
}

/// `H(O|QD) = H(ρ_OQD) − H(ρ_QD)`; negative for entangled states.
pub fn conditional_order_entropy(rho_oqd: &DensityOperator) -> Result<f64> {
    check_dims(rho_oqd)?;
    let qd = rho_oqd.partial_trace(&[QUANTON, DETECTOR])?;
    Ok(rho_oqd.entropy()? - qd.entropy()?)
}
