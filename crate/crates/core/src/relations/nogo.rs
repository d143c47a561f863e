use super::{fingerprint, ico_quantities};
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::model::{PathPreparation, SwitchScenario, WhichPathInteraction};

/// Balanced two-path input, controlled-flip marking, trivial path phases.
pub fn explicit_realization(p: f64) -> SwitchScenario {
    let flip = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).expect("2x2");
    SwitchScenario::new(
        PathPreparation::balanced(2).expect("two paths"),
        WhichPathInteraction::new(2, vec![ComplexMatrix::identity(2), flip], 0).expect("unitary marking"),
        ComplexMatrix::identity(2),
        p.clamp(0.0, 1.0),
        0.0,
        None,
    )
    .expect("valid realization")
}

/// Balanced two-path scenario with `<d₀|d₁> = s` and diagonal interference,
/// so both operations commute.
pub fn commuting_overlap_scenario(p: f64, s: f64) -> Result<SwitchScenario> {
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::InvalidArgument(format!("detector overlap {s} outside [0, 1]")));
    }
    let t = (1.0 - s * s).sqrt();
    let rotation = ComplexMatrix::from_real_rows(&[&[s, -t], &[t, s]])?;
    SwitchScenario::new(
        PathPreparation::balanced(2)?,
        WhichPathInteraction::new(2, vec![ComplexMatrix::identity(2), rotation], 0)?,
        ComplexMatrix::identity(2),
        p,
        0.0,
        None,
    )
}

/// Spatial and causal quantities of the explicit realization.
#[derive(Debug, Clone, PartialEq)]
pub struct NoGoReport {
    pub p: f64,
    pub c_q: f64,
    pub d_bound: f64,
    /// From the reduced order qubit.
    pub c_causal: f64,
    /// `2√(p(1−p))`.
    pub c_causal_closed_form: f64,
    pub fingerprint: String,
}

impl NoGoReport {
    /// `C_q + D_bound + α C_causal − 1`.
    pub fn violation_margin(&self, alpha: f64) -> f64 {
        self.c_q + self.d_bound + alpha * self.c_causal - 1.0
    }
}

/// Runs the explicit realization through the full matrix pipeline.
pub fn nogo_counterexample(p: f64) -> Result<NoGoReport> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidArgument(format!("p = {p} leaves no superposition of orders")));
    }
    let scn = explicit_realization(p);
    let q = ico_quantities(&scn)?;
    Ok(NoGoReport {
        p,
        c_q: q.c_q,
        d_bound: q.d_bound,
        c_causal: q.c_causal,
        c_causal_closed_form: 2.0 * (p * (1.0 - p)).sqrt(),
        fingerprint: fingerprint(&scn, None),
    })
}

/// Uniform grid over `p ∈ [0, 1]` and detector overlap `s ∈ [0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RegionGrid {
    pub p_steps: usize,
    pub overlap_steps: usize,
}

impl Default for RegionGrid {
    fn default() -> Self {
        Self { p_steps: 21, overlap_steps: 21 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegionPoint {
    pub p: f64,
    pub overlap: f64,
    /// `C_q + D_bound`.
    pub x: f64,
    /// `C_causal`.
    pub y: f64,
    pub fingerprint: String,
}

fn linspace(steps: usize, k: usize) -> f64 {
    if steps <= 1 {
        0.0
    } else {
        k as f64 / (steps - 1) as f64
    }
}

/// Evaluates the commuting-sector family on the grid, row-major in `p`.
pub fn region_sweep(grid: RegionGrid) -> Result<Vec<RegionPoint>> {
    let mut out = Vec::with_capacity(grid.p_steps * grid.overlap_steps);
    for i in 0..grid.p_steps {
        let p = linspace(grid.p_steps, i);
        for j in 0..grid.overlap_steps {
            let s = linspace(grid.overlap_steps, j);
            let scn = commuting_overlap_scenario(p, s)?;
            let q = ico_quantities(&scn)?;
            out.push(RegionPoint { p, overlap: s, x: q.c_q + q.d_bound, y: q.c_causal, fingerprint: fingerprint(&scn, None) });
        }
    }
    Ok(out)
}
