use super::{fingerprint, RelationCheck, RELATION_TOL};
use crate::discrimination::{helstrom_guess, DiscriminationProblem};
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, DensityOperator};
use crate::measures::{
    causal_visibility, conditional_entropy_after_measurement, conditional_order_entropy, delta_parameter,
    dephase_order, order_entropy_from_delta, EntropicReport, OrderBasis,
};
use crate::model::{evolve_switch, fixed_order_state, reduce, CausalOrder, Subsystem, SwitchScenario, UNITARY_TOL};

/// Tolerance of the detector-overlap lemma checks.
pub const LEMMA_TOL: f64 = 1e-10;

/// Purity within this of 1 counts as a rank-1 global state.
const PURE_TOL: f64 = 1e-10;

/// Entropic uncertainty for the order qubit with QD as quantum memory.
///
/// The bound is `1 − H(O)` for a pure global state and `1 + H(O|QD)`
/// otherwise; `H(O) = h₂((1+Δ)/2)` is checked in both cases.
pub fn check_entropic_bound(scn: &SwitchScenario) -> Result<(EntropicReport, Vec<RelationCheck>)> {
    let rho = evolve_switch(scn);
    let fp = fingerprint(scn, None);
    let h_z = conditional_entropy_after_measurement(&rho, OrderBasis::Z)?;
    let h_x = conditional_entropy_after_measurement(&rho, OrderBasis::X)?;
    let rho_o = reduce(&rho, Subsystem::Order)?;
    let h_order = rho_o.entropy()?;
    let delta = delta_parameter(scn.p(), causal_visibility(&rho_o)?)?;
    let h_delta = order_entropy_from_delta(delta)?;
    let h_cond = conditional_order_entropy(&rho)?;
    let pure = (rho.purity() - 1.0).abs() < PURE_TOL;
    let bound = if pure { 1.0 - h_order } else { 1.0 + h_cond };
    let report = EntropicReport::new(h_z, h_x, bound, delta, h_order);

    let mut checks = vec![
        RelationCheck::at_most("entropic_bound", bound, h_z + h_x, RELATION_TOL, &fp),
        RelationCheck::equality("order_entropy_delta", h_order, h_delta, RELATION_TOL, &fp),
    ];
    if pure {
        checks.push(RelationCheck::equality("pure_conditional_entropy", h_cond, -h_order, RELATION_TOL, &fp));
    }
    Ok((report, checks))
}

/// Helstrom guessing of the order is unchanged by a detector-local unitary,
/// and dephasing the order qubit yields the fixed-order ensemble.
pub fn check_overlap_lemma(scn: &SwitchScenario, w: &ComplexMatrix) -> Result<Vec<RelationCheck>> {
    let d = scn.detector_dim();
    if w.rows() != d || w.cols() != d {
        return Err(Error::InvalidArgument(format!("detector unitary is {}x{}, expected {d}x{d}", w.rows(), w.cols())));
    }
    if !w.is_unitary(UNITARY_TOL) {
        return Err(Error::InvalidArgument("detector unitary is not unitary".into()));
    }
    let fp = fingerprint(scn, None);
    let p = scn.p();
    let ab = fixed_order_state(scn, CausalOrder::AThenB);
    let ba = fixed_order_state(scn, CausalOrder::BThenA);
    let before = helstrom_guess(&DiscriminationProblem::new(p, ab.clone(), ba.clone())?)?;

    let local = ComplexMatrix::identity(scn.path_count()).kron(w);
    let conj = |rho: &DensityOperator| {
        let m = &(&local * rho.matrix()) * &local.adjoint();
        DensityOperator::new(m, rho.dims().to_vec())
    };
    let after = helstrom_guess(&DiscriminationProblem::new(p, conj(&ab)?, conj(&ba)?)?)?;

    let dephased = dephase_order(&evolve_switch(scn), OrderBasis::Z)?;
    let ensemble = &ab.matrix().kron(&ComplexMatrix::from_real_diagonal(&[p, 0.0]))
        + &ba.matrix().kron(&ComplexMatrix::from_real_diagonal(&[0.0, 1.0 - p]));

    Ok(vec![
        RelationCheck::equality("overlap_lemma_helstrom", after, before, LEMMA_TOL, &fp),
        RelationCheck::equality("overlap_lemma_ensemble", dephased.matrix().max_abs_diff(&ensemble), 0.0, LEMMA_TOL, &fp),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relations::explicit_realization;
    use num_complex::Complex64;

    #[test]
    fn realization_bound_is_one() {
        let (r, checks) = check_entropic_bound(&explicit_realization(0.5)).unwrap();
        assert!((r.delta - 1.0).abs() < 1e-9);
        assert!((r.bound - 1.0).abs() < 1e-9);
        assert!(r.slack >= -1e-9);
        assert!(checks.iter().all(RelationCheck::holds));
    }

    #[test]
    fn orthogonal_branches_trivial_bound() {
        // path 0 input, controlled flip on path 1, path swap: |1>|0> versus |1>|1>
        let x = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap();
        let scn = SwitchScenario::new(
            crate::model::PathPreparation::new(vec![1.0, 0.0], vec![0.0, 0.0]).unwrap(),
            crate::model::WhichPathInteraction::new(2, vec![ComplexMatrix::identity(2), x.clone()], 0).unwrap(),
            x,
            0.5,
            0.0,
            None,
        )
        .unwrap();
        let (r, checks) = check_entropic_bound(&scn).unwrap();
        assert!(r.delta.abs() < 1e-9, "delta = {}", r.delta);
        assert!(r.bound.abs() < 1e-9);
        assert!(checks.iter().all(RelationCheck::holds));
    }

    #[test]
    fn incoherent_order_uses_memory_form() {
        let scn = explicit_realization(0.5).with_order_offdiag(Some(Complex64::new(0.0, 0.0))).unwrap();
        let (r, checks) = check_entropic_bound(&scn).unwrap();
        let h_cond = conditional_order_entropy(&evolve_switch(&scn)).unwrap();
        assert!((r.bound - (1.0 + h_cond)).abs() < 1e-15);
        assert!(checks.iter().all(|c| c.name != "pure_conditional_entropy"));
        assert!(checks.iter().all(RelationCheck::holds));
    }

    #[test]
    fn lemma_with_permutation() {
        let x = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap();
        let scn = explicit_realization(0.3);
        for w in [ComplexMatrix::identity(2), x] {
            assert!(check_overlap_lemma(&scn, &w).unwrap().iter().all(RelationCheck::holds));
        }
        assert!(check_overlap_lemma(&scn, &ComplexMatrix::from_real_diagonal(&[1.0, 2.0])).is_err());
    }
}
