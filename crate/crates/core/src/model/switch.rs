use num_complex::Complex64;

use super::{CausalOrder, PathPreparation, SwitchScenario, WhichPathInteraction, DETECTOR, ORDER, QUANTON, UNITARY_TOL};
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, DensityOperator};

/// Reduction targets of the global `[n, d, 2]` state.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    /// Quanton and detector (order qubit traced out).
    QuantonDetector,
    /// Quanton alone.
    Quanton,
    /// Order qubit alone.
    Order,
}

/// `U_A = Σ_i |ψ_i><ψ_i| ⊗ V_i`.
pub fn build_which_path_unitary(prep: &PathPreparation, wp: &WhichPathInteraction) -> Result<ComplexMatrix> {
    let n = prep.path_count();
    if wp.unitaries().len() != n {
        return Err(Error::DimensionMismatch(format!(
            "{} detector unitaries for {} paths",
            wp.unitaries().len(),
            n
        )));
    }
    let d = wp.detector_dim();
    let mut u = ComplexMatrix::zeros(n * d, n * d);
    for (i, v) in wp.unitaries().iter().enumerate() {
        for r in 0..d {
            for c in 0..d {
                u[(i * d + r, i * d + c)] = v[(r, c)];
            }
        }
    }
    Ok(u)
}

/// `U_sw = U_B U_A ⊗ |0><0| + U_A U_B ⊗ |1><1|`, order qubit last.
pub fn build_switch_unitary(u_a: &ComplexMatrix, u_b: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !u_a.is_square() || u_a.rows() != u_b.rows() || u_a.cols() != u_b.cols() {
        return Err(Error::DimensionMismatch(format!(
            "U_A is {}x{}, U_B is {}x{}",
            u_a.rows(),
            u_a.cols(),
            u_b.rows(),
            u_b.cols()
        )));
    }
    if !u_a.is_unitary(UNITARY_TOL) {
        return Err(Error::InvalidArgument("U_A is not unitary".into()));
    }
    if !u_b.is_unitary(UNITARY_TOL) {
        return Err(Error::InvalidArgument("U_B is not unitary".into()));
    }
    let p0 = ComplexMatrix::from_real_diagonal(&[1.0, 0.0]);
    let p1 = ComplexMatrix::from_real_diagonal(&[0.0, 1.0]);
    let a_then_b = u_b * u_a;
    let b_then_a = u_a * u_b;
    Ok(&a_then_b.kron(&p0) + &b_then_a.kron(&p1))
}

fn order_unitary(scn: &SwitchScenario, order: CausalOrder) -> ComplexMatrix {
    let u_a = scn.which_path_unitary();
    let u_b = scn.interference_unitary();
    match order {
        CausalOrder::AThenB => &u_b * &u_a,
        CausalOrder::BThenA => &u_a * &u_b,
    }
}

/// Branch state `|Ψ_X> = U_X |Ψ⁽⁰⁾>` for one definite order.
pub fn fixed_order_ket(scn: &SwitchScenario, order: CausalOrder) -> ComplexMatrix {
    &order_unitary(scn, order) * &scn.initial_ket()
}

/// `ρ_{A≺B}` or `ρ_{B≺A}` on `[n, d]`.
pub fn fixed_order_state(scn: &SwitchScenario, order: CausalOrder) -> DensityOperator {
    let ket = fixed_order_ket(scn, order);
    DensityOperator::from_pure(&ket, vec![scn.path_count(), scn.detector_dim()])
        .expect("unitary image of a normalized ket")
}

/// `<Ψ_{A≺B}|Ψ_{B≺A}>`.
pub fn branch_overlap(scn: &SwitchScenario) -> Complex64 {
    fixed_order_ket(scn, CausalOrder::AThenB).inner(&fixed_order_ket(scn, CausalOrder::BThenA))
}

/// Closed-form `ρ_O[0,1]` after the switch: `κ₀ <Ψ_{B≺A}|Ψ_{A≺B}>`.
///
/// The trace over QD of `|Ψ_{A≺B}><Ψ_{B≺A}|` is `<Ψ_{B≺A}|Ψ_{A≺B}>`, the
/// conjugate of [`branch_overlap`].
pub fn branch_kappa(scn: &SwitchScenario) -> Complex64 {
    scn.kappa0() * branch_overlap(scn).conj()
}

/// Unnormalized detector vectors `(<i| ⊗ I)|Ψ>` of a QD ket, one per path.
pub fn path_components(ket: &ComplexMatrix, n: usize, d: usize) -> Result<Vec<ComplexMatrix>> {
    if ket.cols() != 1 || ket.rows() != n * d {
        return Err(Error::DimensionMismatch(format!(
            "ket of length {} for {n} paths of detector dimension {d}",
            ket.rows()
        )));
    }
    Ok((0..n)
        .map(|i| {
            let amps: Vec<Complex64> = (0..d).map(|k| ket[(i * d + k, 0)]).collect();
            ComplexMatrix::column(&amps)
        })
        .collect())
}

/// Cross-order detector overlaps `Γ_ij = <d_i^{A≺B}|d_j^{B≺A}>` of a two-path
/// scenario, with `|d_i^X> = √2 (<i| ⊗ I)|Ψ_X>`.
pub fn branch_symmetry_terms(scn: &SwitchScenario) -> Result<[[Complex64; 2]; 2]> {
    if scn.path_count() != 2 {
        return Err(Error::Precondition(format!("needs two paths, scenario has {}", scn.path_count())));
    }
    let d = scn.detector_dim();
    let ab = path_components(&fixed_order_ket(scn, CausalOrder::AThenB), 2, d)?;
    let ba = path_components(&fixed_order_ket(scn, CausalOrder::BThenA), 2, d)?;
    let mut g = [[Complex64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            g[i][j] = ab[i].inner(&ba[j]) * 2.0;
        }
    }
    Ok(g)
}

/// `|Ψ_tot> = √p |Ψ_{A≺B}>|0> + e^{iθ}√(1−p) |Ψ_{B≺A}>|1>`, built directly
/// from the branch kets. Only defined for a pure order qubit.
pub fn switch_ket(scn: &SwitchScenario) -> Result<ComplexMatrix> {
    if !scn.has_pure_order() {
        return Err(Error::Precondition("switch ket requires a pure order qubit".into()));
    }
    let p = scn.p();
    let ab = fixed_order_ket(scn, CausalOrder::AThenB).scale_real(p.sqrt());
    let ba = fixed_order_ket(scn, CausalOrder::BThenA).scale(Complex64::from_polar((1.0 - p).sqrt(), scn.theta()));
    Ok(&ab.kron(&ComplexMatrix::basis(2, 0)) + &ba.kron(&ComplexMatrix::basis(2, 1)))
}

/// `ρ_tot = U_sw (ρ⁽⁰⁾_QD ⊗ ρ_O) U_sw†` on `[n, d, 2]`.
pub fn evolve_switch(scn: &SwitchScenario) -> DensityOperator {
    let psi0 = scn.initial_ket();
    let rho0 = ComplexMatrix::outer(&psi0, &psi0);
    let joint = rho0.kron(scn.order_state().matrix());
    let u_sw = build_switch_unitary(&scn.which_path_unitary(), &scn.interference_unitary()).expect("validated scenario");
    let rho = &(&u_sw * &joint) * &u_sw.adjoint();
    DensityOperator::new(rho, scn.dims()).expect("unitary evolution of a valid state")
}

/// Reduced state of a global `[n, d, 2]` state.
pub fn reduce(rho_tot: &DensityOperator, target: Subsystem) -> Result<DensityOperator> {
    if rho_tot.dims().len() != 3 || rho_tot.dims()[ORDER] != 2 {
        return Err(Error::DimensionMismatch(format!(
            "expected dims [n, d, 2], found {:?}",
            rho_tot.dims()
        )));
    }
    match target {
        Subsystem::QuantonDetector => rho_tot.partial_trace(&[QUANTON, DETECTOR]),
        Subsystem::Quanton => rho_tot.partial_trace(&[QUANTON]),
        Subsystem::Order => rho_tot.partial_trace(&[ORDER]),
    }
}
