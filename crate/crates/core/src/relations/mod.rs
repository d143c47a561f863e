//! Machine-checkable complementarity relations.
//!
//! Every check returns [`RelationCheck`] values whose verdict is recomputed
//! from the stored sides and tolerance, so a caller may tighten or loosen the
//! tolerance after the fact.

mod duality;
mod entropic;
mod nogo;

pub use duality::{
    check_fixed_order_duality, check_ico_duality, check_post_selected_duality, fixed_order_report, ico_quantities,
    IcoQuantities, PostSelectedOutcome, SYMMETRY_TOL,
};
pub use entropic::{check_entropic_bound, check_overlap_lemma, LEMMA_TOL};
pub use nogo::{
    commuting_overlap_scenario, explicit_realization, nogo_counterexample, region_sweep, NoGoReport, RegionGrid,
    RegionPoint,
};

use sha2::{Digest, Sha256};

use crate::model::SwitchScenario;

/// Default tolerance for equalities and one-sided slack for inequalities.
pub const RELATION_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RelationKind {
    /// `|lhs − rhs| ≤ tol`.
    Equality,
    /// `lhs ≤ rhs + tol`.
    AtMost,
}

impl RelationKind {
    pub fn symbol(self) -> &'static str {
        match self {
            RelationKind::Equality => "=",
            RelationKind::AtMost => "<=",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RelationCheck {
    pub name: String,
    pub kind: RelationKind,
    pub lhs: f64,
    pub rhs: f64,
    pub tol: f64,
    /// Scenario fingerprint.
    pub context: String,
}

impl RelationCheck {
    pub fn equality(name: impl Into<String>, lhs: f64, rhs: f64, tol: f64, context: &str) -> Self {
        Self { name: name.into(), kind: RelationKind::Equality, lhs, rhs, tol, context: context.to_string() }
    }

    pub fn at_most(name: impl Into<String>, lhs: f64, rhs: f64, tol: f64, context: &str) -> Self {
        Self { name: name.into(), kind: RelationKind::AtMost, lhs, rhs, tol, context: context.to_string() }
    }

    pub fn holds(&self) -> bool {
        match self.kind {
            RelationKind::Equality => (self.lhs - self.rhs).abs() <= self.tol,
            RelationKind::AtMost => self.lhs <= self.rhs + self.tol,
        }
    }

    /// Signed distance from the boundary; non-negative iff the relation holds.
    pub fn margin(&self) -> f64 {
        match self.kind {
            RelationKind::Equality => self.tol - (self.lhs - self.rhs).abs(),
            RelationKind::AtMost => self.rhs + self.tol - self.lhs,
        }
    }
}

/// Hex digest identifying a scenario and, for generated ones, its seed.
pub fn fingerprint(scn: &SwitchScenario, seed: Option<u64>) -> String {
    let mut hasher = Sha256::new();
    hasher.update(scn.canonical_form().as_bytes());
    if let Some(seed) = seed {
        hasher.update(format!("seed={seed}").as_bytes());
    }
    hasher.finalize().iter().take(8).map(|b| format!("{b:02x}")).collect()
}
