//! Worked examples cross-checked against independent computations.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rand::Rng;

use switchlab_core::discrimination::{causal_duality, helstrom_guess, uqsd_two_pure, DiscriminationProblem};
use switchlab_core::linalg::{hermitian_eig, trace_norm};
use switchlab_core::measures::{
    binary_entropy, causal_visibility, conditional_entropy_after_measurement, delta_parameter, order_interference,
    scanned_visibility, OrderBasis,
};
use switchlab_core::model::{
    branch_kappa, branch_overlap, build_which_path_unitary, evolve_switch, fixed_order_ket, reduce, switch_ket,
    CausalOrder, Subsystem,
};
use switchlab_core::relations::{
    check_fixed_order_duality, check_overlap_lemma, check_post_selected_duality, explicit_realization,
    nogo_counterexample,
};
use switchlab_core::sampling::{
    random_density, random_hermitian, random_ket, random_scenario, random_symmetric_scenario, random_unitary, rng,
};
use switchlab_core::{ComplexMatrix, DensityOperator, PathPreparation, SwitchScenario, WhichPathInteraction};

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Path-0 input, `V₁` a real rotation with `<d₀|V₁d₀> = s`, path swap as
/// interference. The branches are `|1>|d₀>` and `|1>|d₁>`.
fn swap_scenario(p: f64, s: f64) -> SwitchScenario {
    let t = (1.0 - s * s).sqrt();
    let rot = ComplexMatrix::from_real_rows(&[&[s, -t], &[t, s]]).unwrap();
    let swap = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap();
    SwitchScenario::new(
        PathPreparation::new(vec![1.0, 0.0], vec![0.0, 0.0]).unwrap(),
        WhichPathInteraction::new(2, vec![ComplexMatrix::identity(2), rot], 0).unwrap(),
        swap,
        p,
        0.0,
        None,
    )
    .unwrap()
}

#[test]
fn partial_trace_matches_index_summation() {
    let mut r = rng(2024);
    for _ in 0..20 {
        let rho = random_density(&mut r, 8);
        let rho = DensityOperator::new(rho.into_matrix(), vec![2, 2, 2]).unwrap();
        let reduced = rho.partial_trace(&[0, 2]).unwrap();
        let m = rho.matrix();
        for a in 0..2 {
            for cc in 0..2 {
                for a2 in 0..2 {
                    for c2 in 0..2 {
                        let mut acc = c(0.0);
                        for b in 0..2 {
                            acc += m[(a * 4 + b * 2 + cc, a2 * 4 + b * 2 + c2)];
                        }
                        assert!((reduced.matrix()[(a * 2 + cc, a2 * 2 + c2)] - acc).norm() < 1e-12);
                    }
                }
            }
        }
    }
}

#[test]
fn hermitian_reconstruction_eight_by_eight() {
    let mut r = rng(8);
    for _ in 0..50 {
        let h = random_hermitian(&mut r, 8);
        let e = hermitian_eig(&h).unwrap();
        assert!(e.reconstruct().max_abs_diff(&h) < 1e-10);
        assert!(e.eigenvectors.is_unitary(1e-10));
    }
}

#[test]
fn trace_norm_of_equal_prior_pure_difference() {
    let mut r = rng(5);
    for _ in 0..100 {
        let a = random_ket(&mut r, 2);
        let b = random_ket(&mut r, 2);
        let diff = &ComplexMatrix::outer(&a, &a).scale_real(0.5) - &ComplexMatrix::outer(&b, &b).scale_real(0.5);
        let expected = (1.0 - a.inner(&b).norm_sqr()).sqrt();
        assert!((trace_norm(&diff).unwrap() - expected).abs() < 1e-12);
    }
}

#[test]
fn which_path_images_carry_detector_overlaps() {
    for seed in 0..20 {
        let scn = random_scenario(seed, false);
        let (n, d) = (scn.path_count(), scn.detector_dim());
        let u_a = build_which_path_unitary(scn.preparation(), scn.interaction()).unwrap();
        let d0 = scn.interaction().initial_state();
        let images: Vec<ComplexMatrix> = (0..n)
            .map(|i| {
                let out = &u_a * &ComplexMatrix::basis(n, i).kron(&d0);
                // out = |i> ⊗ |d_i>; read the detector block of path i
                ComplexMatrix::column(&(0..d).map(|k| out[(i * d + k, 0)]).collect::<Vec<_>>())
            })
            .collect();
        let v = scn.interaction().unitaries();
        for i in 0..n {
            for j in 0..n {
                let direct = (&(&d0.adjoint() * &(&v[j].adjoint() * &v[i])) * &d0)[(0, 0)];
                assert!((images[j].inner(&images[i]) - direct).norm() < 1e-12);
            }
        }
    }
}

#[test]
fn branch_overlap_by_operator_rearrangement() {
    for seed in 0..50 {
        let scn = random_scenario(seed, false);
        let (u_a, u_b) = (scn.which_path_unitary(), scn.interference_unitary());
        let psi0 = scn.initial_ket();
        let op = &(&(&u_a.adjoint() * &u_b.adjoint()) * &u_a) * &u_b;
        let expected = (&(&psi0.adjoint() * &op) * &psi0)[(0, 0)];
        assert!((branch_overlap(&scn) - expected).norm() < 1e-12);
    }
}

#[test]
fn order_coherence_from_branch_inner_product() {
    for seed in 0..100 {
        let scn = random_scenario(seed, seed % 2 == 1);
        let kappa = reduce(&evolve_switch(&scn), Subsystem::Order).unwrap().matrix()[(0, 1)];
        let ab = fixed_order_ket(&scn, CausalOrder::AThenB);
        let ba = fixed_order_ket(&scn, CausalOrder::BThenA);
        let direct = scn.kappa0() * ba.inner(&ab);
        assert!((kappa - direct).norm() < 1e-12);
        assert!((kappa - branch_kappa(&scn)).norm() < 1e-12);
        if scn.has_pure_order() {
            let p = scn.p();
            assert!((kappa.norm() - (p * (1.0 - p)).sqrt() * branch_overlap(&scn).norm()).abs() < 1e-12);
        }
    }
}

#[test]
fn orthogonal_branches_have_no_order_coherence() {
    let scn = swap_scenario(0.5, 0.0);
    let rho_o = reduce(&evolve_switch(&scn), Subsystem::Order).unwrap();
    assert!(rho_o.matrix()[(0, 1)].norm() < 1e-15);
}

#[test]
fn pure_order_gives_rank_one_switch_state() {
    for seed in 0..30 {
        let scn = random_scenario(seed, false);
        let rho = evolve_switch(&scn);
        assert!((rho.purity() - 1.0).abs() < 1e-10);
        let ket = switch_ket(&scn).unwrap();
        assert!(rho.matrix().max_abs_diff(&ComplexMatrix::outer(&ket, &ket)) < 1e-12);
    }
}

#[test]
fn realization_switch_on_plus_state() {
    let scn = explicit_realization(0.5);
    let h = std::f64::consts::FRAC_1_SQRT_2;
    // (|0>|0> + |1>|1>)/√2 ⊗ |+>
    let bell = ComplexMatrix::column(&[c(h), c(0.0), c(0.0), c(h)]);
    let expected = bell.kron(&ComplexMatrix::column(&[c(h), c(h)]));
    let rho = evolve_switch(&scn);
    assert!(rho.matrix().max_abs_diff(&ComplexMatrix::outer(&expected, &expected)) < 1e-14);
}

#[test]
fn explicit_overlap_causal_coherence() {
    let scn = swap_scenario(0.3, 0.5);
    assert!((branch_overlap(&scn).norm() - 0.5).abs() < 1e-15);
    let rho_o = reduce(&evolve_switch(&scn), Subsystem::Order).unwrap();
    let expected = 2.0 * 0.21f64.sqrt() * 0.5;
    assert!((causal_visibility(&rho_o).unwrap() - expected).abs() < 1e-12);
}

#[test]
fn interference_fits_cosine() {
    let mut r = rng(64);
    for _ in 0..50 {
        let rho_o = random_density(&mut r, 2);
        let kappa = rho_o.matrix()[(0, 1)];
        for k in 0..64 {
            let phi = TAU * k as f64 / 64.0;
            let (pp, pm) = order_interference(&rho_o, phi).unwrap();
            // <±_φ|ρ|±_φ> = ½ ± Re(e^{iφ} κ)
            let fit = 0.5 * (1.0 + 2.0 * kappa.norm() * (phi + kappa.arg()).cos());
            assert!((pp - fit).abs() < 1e-10);
            assert!((pp + pm - 1.0).abs() < 1e-12);
        }
    }
}

#[test]
fn scanned_visibility_on_scenarios() {
    for seed in 0..50 {
        let scn = random_scenario(seed, seed % 3 == 0);
        let rho_o = reduce(&evolve_switch(&scn), Subsystem::Order).unwrap();
        let direct = 2.0 * rho_o.matrix()[(0, 1)].norm();
        assert!((scanned_visibility(&rho_o).unwrap() - direct).abs() < 1e-9);
    }
}

#[test]
fn delta_matches_order_spectrum() {
    // commuting branches with κ₀ = 0.15 give C_causal = 0.3 at p = 0.7
    let scn = explicit_realization(0.7).with_order_offdiag(Some(c(0.15))).unwrap();
    let rho_o = reduce(&evolve_switch(&scn), Subsystem::Order).unwrap();
    let c_causal = causal_visibility(&rho_o).unwrap();
    assert!((c_causal - 0.3).abs() < 1e-12);
    let delta = delta_parameter(0.7, c_causal).unwrap();
    assert!((delta - 0.5).abs() < 1e-12);
    let ev = hermitian_eig(rho_o.matrix()).unwrap().eigenvalues;
    assert!((ev[0] - (1.0 - delta) / 2.0).abs() < 1e-10);
    assert!((ev[1] - (1.0 + delta) / 2.0).abs() < 1e-10);
    assert!((rho_o.entropy().unwrap() - binary_entropy((1.0 + delta) / 2.0).unwrap()).abs() < 1e-10);
}

#[test]
fn realization_entropic_sum() {
    let rho = evolve_switch(&explicit_realization(0.5));
    let hz = conditional_entropy_after_measurement(&rho, OrderBasis::Z).unwrap();
    let hx = conditional_entropy_after_measurement(&rho, OrderBasis::X).unwrap();
    let h_o = reduce(&rho, Subsystem::Order).unwrap().entropy().unwrap();
    assert!(h_o.abs() < 1e-9);
    assert!(hz + hx >= 1.0 - h_o - 1e-9);
}

#[test]
fn helstrom_pure_pairs_match_closed_form() {
    let mut r = rng(77);
    for _ in 0..100 {
        let p: f64 = r.random();
        let a = random_ket(&mut r, 3);
        let b = random_ket(&mut r, 3);
        let prob = DiscriminationProblem::new(
            p,
            DensityOperator::from_pure(&a, vec![3]).unwrap(),
            DensityOperator::from_pure(&b, vec![3]).unwrap(),
        )
        .unwrap();
        let expected = 0.5 * (1.0 + (1.0 - 4.0 * p * (1.0 - p) * a.inner(&b).norm_sqr()).sqrt());
        assert!((helstrom_guess(&prob).unwrap() - expected).abs() < 1e-10);
    }
}

#[test]
fn causal_duality_identity() {
    let mut r = rng(1000);
    let mut tested = 0;
    while tested < 1000 {
        let p: f64 = r.random();
        let a = random_ket(&mut r, 4);
        let b = random_ket(&mut r, 4);
        let (report, uqsd) = causal_duality(p, &a, &b, 1e-10).unwrap();
        if !uqsd.in_regime {
            continue;
        }
        assert!((report.sum - 1.0).abs() < 1e-10);
        assert!(report.saturated);
        tested += 1;
    }
}

#[test]
fn causal_duality_realization_and_orthogonal() {
    let scn = explicit_realization(0.5);
    let (rep, _) = causal_duality(
        0.5,
        &fixed_order_ket(&scn, CausalOrder::AThenB),
        &fixed_order_ket(&scn, CausalOrder::BThenA),
        1e-10,
    )
    .unwrap();
    assert!((rep.coherence - 1.0).abs() < 1e-12 && rep.distinguishability.abs() < 1e-12);
    let swap = swap_scenario(0.5, 0.0);
    let (rep, _) = causal_duality(
        0.5,
        &fixed_order_ket(&swap, CausalOrder::AThenB),
        &fixed_order_ket(&swap, CausalOrder::BThenA),
        1e-10,
    )
    .unwrap();
    assert!(rep.coherence.abs() < 1e-12 && (rep.distinguishability - 1.0).abs() < 1e-12);
}

#[test]
fn uqsd_symmetric_value() {
    let a = ComplexMatrix::basis(2, 0);
    let b = ComplexMatrix::column(&[c(0.6), c(0.8)]);
    let r = uqsd_two_pure(0.5, &a, &b).unwrap();
    assert!((r.value - 0.4).abs() < 1e-15);
}

#[test]
fn fixed_order_saturation_random() {
    for seed in 0..200 {
        let scn = random_scenario(seed, false);
        for order in CausalOrder::BOTH {
            let chk = check_fixed_order_duality(&scn, order).unwrap();
            assert!(chk.holds(), "{chk:?}");
        }
    }
}

#[test]
fn post_selection_closed_form_random_symmetric() {
    for seed in 0..200 {
        let scn = random_symmetric_scenario(seed);
        for out in check_post_selected_duality(&scn, 0.0).unwrap() {
            for chk in &out.checks {
                assert!(chk.holds(), "seed {seed}: {chk:?}");
            }
        }
    }
}

#[test]
fn post_selection_with_basis_phase() {
    // shifting θ and φ together leaves the symmetric condition intact
    for seed in 0..50 {
        let base = random_symmetric_scenario(seed);
        let phi = 0.37 * seed as f64;
        let scn = base.with_theta(base.theta() + phi).unwrap();
        for out in check_post_selected_duality(&scn, phi).unwrap() {
            assert!(out.checks.iter().all(|c| c.holds()), "seed {seed}");
        }
    }
}

#[test]
fn post_selection_precondition_names_condition() {
    let mut found = false;
    for seed in 0..20 {
        let scn = random_symmetric_scenario(seed);
        let skewed = scn.with_theta(scn.theta() + PI / 3.0).unwrap();
        if let Err(e) = check_post_selected_duality(&skewed, 0.0) {
            assert!(e.to_string().contains("Gamma_00"));
            found = true;
        }
    }
    assert!(found);
}

#[test]
fn nogo_pipeline_agrees_with_closed_form() {
    for k in 1..20 {
        let p = k as f64 / 20.0;
        let r = nogo_counterexample(p).unwrap();
        assert!(r.c_q.abs() < 1e-9);
        assert!((r.d_bound - 1.0).abs() < 1e-9);
        assert!((r.c_causal - r.c_causal_closed_form).abs() < 1e-9);
        assert!(r.violation_margin(0.01) > 0.0);
    }
}

#[test]
fn overlap_lemma_random() {
    for seed in 0..50 {
        let scn = random_scenario(seed, false);
        let mut r = rng(seed ^ 0xdead_beef);
        let w = random_unitary(&mut r, scn.detector_dim());
        for chk in check_overlap_lemma(&scn, &w).unwrap() {
            assert!(chk.holds(), "{chk:?}");
        }
    }
}
