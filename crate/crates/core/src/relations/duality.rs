use num_complex::Complex64;

use super::{fingerprint, RelationCheck, RELATION_TOL};
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, DensityOperator};
use crate::measures::{detector_ensemble, l1_coherence, path_distinguishability, DualityReport};
use crate::model::{
    branch_symmetry_terms, evolve_switch, fixed_order_ket, path_components, post_select, reduce, CausalOrder,
    OrderOutcome, Subsystem, SwitchScenario, QUANTON,
};

/// Tolerance on the post-selection preconditions.
pub const SYMMETRY_TOL: f64 = 1e-9;

/// `(C, D_Q)` of one definite order, with `C` from the reduced quanton and
/// `D_Q` from the detector ensemble.
pub fn fixed_order_report(scn: &SwitchScenario, order: CausalOrder) -> Result<DualityReport> {
    let (n, d) = (scn.path_count(), scn.detector_dim());
    let ket = fixed_order_ket(scn, order);
    let rho = DensityOperator::from_pure(&ket, vec![n, d])?;
    let coherence = l1_coherence(&rho.partial_trace(&[QUANTON])?, n)?;
    let (priors, states) = detector_ensemble(&ket, n, d)?;
    let distinguishability = path_distinguishability(&priors, &states)?;
    Ok(DualityReport::new(coherence, distinguishability, RELATION_TOL))
}

/// `C + D_Q = 1` for a definite order (pure QD states saturate the inequality).
pub fn check_fixed_order_duality(scn: &SwitchScenario, order: CausalOrder) -> Result<RelationCheck> {
    let r = fixed_order_report(scn, order)?;
    Ok(RelationCheck::equality(
        format!("fixed_order_duality[{}]", order.label()),
        r.sum,
        1.0,
        RELATION_TOL,
        &fingerprint(scn, None),
    ))
}

/// Spatial quantities of the switch output.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IcoQuantities {
    /// `C_q` of the reduced quanton.
    pub c_q: f64,
    /// `p C^{A≺B} + (1−p) C^{B≺A}`.
    pub c_bound: f64,
    /// `p D^{A≺B} + (1−p) D^{B≺A}`, the convex upper bound on `D_Q^ICO`.
    pub d_bound: f64,
    /// `2|κ|` of the reduced order qubit.
    pub c_causal: f64,
}

pub fn ico_quantities(scn: &SwitchScenario) -> Result<IcoQuantities> {
    let rho_tot = evolve_switch(scn);
    let c_q = l1_coherence(&reduce(&rho_tot, Subsystem::Quanton)?, scn.path_count())?;
    let rho_o = reduce(&rho_tot, Subsystem::Order)?;
    let c_causal = l1_coherence(&rho_o, 2)?;
    let ab = fixed_order_report(scn, CausalOrder::AThenB)?;
    let ba = fixed_order_report(scn, CausalOrder::BThenA)?;
    let p = scn.p();
    Ok(IcoQuantities {
        c_q,
        c_bound: p * ab.coherence + (1.0 - p) * ba.coherence,
        d_bound: p * ab.distinguishability + (1.0 - p) * ba.distinguishability,
        c_causal,
    })
}

/// `C_q ≤ pC^{A≺B} + (1−p)C^{B≺A}` and `C_q + [pD^{A≺B} + (1−p)D^{B≺A}] ≤ 1`.
pub fn check_ico_duality(scn: &SwitchScenario) -> Result<[RelationCheck; 2]> {
    let q = ico_quantities(scn)?;
    let fp = fingerprint(scn, None);
    Ok([
        RelationCheck::at_most("ico_coherence_convexity", q.c_q, q.c_bound, RELATION_TOL, &fp),
        RelationCheck::at_most("ico_duality_bound", q.c_q + q.d_bound, 1.0, RELATION_TOL, &fp),
    ])
}

/// One order-qubit outcome of the post-selected duality check.
#[derive(Debug, Clone)]
pub struct PostSelectedOutcome {
    pub outcome: OrderOutcome,
    /// `N_±` from the matrix pipeline.
    pub probability: f64,
    /// `N_±` from the overlap closed form.
    pub probability_closed_form: f64,
    /// `None` for a degenerate outcome.
    pub report: Option<DualityReport>,
    pub gamma: Option<Complex64>,
    pub gamma_closed_form: Option<Complex64>,
    pub checks: Vec<RelationCheck>,
}

impl PostSelectedOutcome {
    pub fn is_degenerate(&self) -> bool {
        self.report.is_none()
    }
}

fn precondition(what: &str, lhs: f64, rhs: f64) -> Result<()> {
    if (lhs - rhs).abs() > SYMMETRY_TOL {
        return Err(Error::Precondition(format!("{what}: {lhs:.12} vs {rhs:.12}")));
    }
    Ok(())
}

/// Conditional duality `C^(±) + D^(±) = 1` after measuring the order qubit in
/// `|±_φ>`, with `γ_±` cross-checked against the overlap closed form.
///
/// Requires two equally weighted paths, a pure order qubit, unit-norm branch
/// detector vectors and `Re(e^{i(θ−φ)}Γ₀₀) = Re(e^{i(θ−φ)}Γ₁₁)`.
pub fn check_post_selected_duality(scn: &SwitchScenario, phi: f64) -> Result<Vec<PostSelectedOutcome>> {
    if scn.path_count() != 2 {
        return Err(Error::Precondition(format!("two paths required, scenario has {}", scn.path_count())));
    }
    let probs = scn.preparation().probabilities();
    precondition("equal path probabilities", probs[0], probs[1])?;
    if !scn.has_pure_order() {
        return Err(Error::Precondition("pure order qubit required".into()));
    }
    let d = scn.detector_dim();
    let sqrt2 = std::f64::consts::SQRT_2;
    let branch = |order| -> Result<Vec<ComplexMatrix>> {
        Ok(path_components(&fixed_order_ket(scn, order), 2, d)?.iter().map(|c| c.scale_real(sqrt2)).collect())
    };
    let ab = branch(CausalOrder::AThenB)?;
    let ba = branch(CausalOrder::BThenA)?;
    for (label, vs) in [("A<B", &ab), ("B<A", &ba)] {
        for (i, v) in vs.iter().enumerate() {
            precondition(&format!("norm of detector vector {i} in order {label}"), v.norm(), 1.0)?;
        }
    }
    let g = branch_symmetry_terms(scn)?;
    let phase = Complex64::from_polar(1.0, scn.theta() - phi);
    precondition("Re(e^{i(theta-phi)} Gamma_00) = Re(e^{i(theta-phi)} Gamma_11)", (phase * g[0][0]).re, (phase * g[1][1]).re)?;

    let p = scn.p();
    let root = (p * (1.0 - p)).sqrt();
    let c_mix = ab[1].inner(&ab[0]) * p + ba[1].inner(&ba[0]) * (1.0 - p);
    let fp = fingerprint(scn, None);
    let (plus, minus) = post_select(&evolve_switch(scn), phi)?;

    let mut out = Vec::with_capacity(2);
    for res in [plus, minus] {
        let sign = res.outcome.sign();
        let tag = res.outcome.label();
        let n_cf = 0.5 * (1.0 + sign * root * (phase * (g[0][0] + g[1][1])).re);
        let mut checks = vec![RelationCheck::equality(
            format!("post_selected_probability[{tag}]"),
            res.probability,
            n_cf,
            RELATION_TOL,
            &fp,
        )];
        let Some(cond) = res.conditional else {
            out.push(PostSelectedOutcome {
                outcome: res.outcome,
                probability: res.probability,
                probability_closed_form: n_cf,
                report: None,
                gamma: None,
                gamma_closed_form: None,
                checks,
            });
            continue;
        };
        let gamma_cf = (c_mix + (phase * g[1][0] + phase.conj() * g[0][1].conj()) * (sign * root)) / (4.0 * n_cf);

        // conditional detector ensemble from the branch vectors
        let vecs: Vec<ComplexMatrix> = (0..2).map(|i| &ab[i].scale_real(p.sqrt()) + &ba[i].scale(phase * (sign * (1.0 - p).sqrt()))).collect();
        let weights: Vec<f64> = vecs.iter().map(|v| v.norm().powi(2)).collect();
        let total: f64 = weights.iter().sum();
        let priors: Vec<f64> = weights.iter().map(|w| w / total).collect();
        let states: Vec<ComplexMatrix> = vecs.iter().map(|v| v.scale_real(1.0 / v.norm())).collect();
        let coherence = l1_coherence(&cond.q, 2)?;
        let distinguishability = path_distinguishability(&priors, &states)?;
        let report = DualityReport::new(coherence, distinguishability, RELATION_TOL);

        checks.push(RelationCheck::equality(format!("post_selected_duality[{tag}]"), report.sum, 1.0, RELATION_TOL, &fp));
        checks.push(RelationCheck::equality(
            format!("post_selected_gamma[{tag}]"),
            (cond.gamma - gamma_cf).norm(),
            0.0,
            RELATION_TOL,
            &fp,
        ));
        checks.push(RelationCheck::equality(
            format!("post_selected_distinguishability[{tag}]"),
            distinguishability,
            1.0 - 2.0 * gamma_cf.norm(),
            RELATION_TOL,
            &fp,
        ));
        out.push(PostSelectedOutcome {
            outcome: res.outcome,
            probability: res.probability,
            probability_closed_form: n_cf,
            report: Some(report),
            gamma: Some(cond.gamma),
            gamma_closed_form: Some(gamma_cf),
            checks,
        });
    }
    Ok(out)
}
