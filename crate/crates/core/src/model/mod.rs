//! States and unitaries of fixed-order interferometers and the quantum switch.
//!
//! Tensor ordering is Quanton ⊗ Detector ⊗ Order throughout; the order qubit
//! is always the last factor.

mod postselect;
mod switch;

pub use postselect::{post_select, ConditionalStates, OrderOutcome, PostSelectionResult, DEGENERATE_PROBABILITY};
pub use switch::{
    branch_kappa, branch_overlap, branch_symmetry_terms, build_switch_unitary, build_which_path_unitary, evolve_switch,
    fixed_order_ket, fixed_order_state, path_components, reduce, switch_ket, Subsystem,
};

use std::fmt::Write as _;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, DensityOperator};

/// Unitarity tolerance for every operator supplied to a scenario.
pub const UNITARY_TOL: f64 = 1e-10;

/// Tolerance on `Σ p_i = 1`.
pub const PROBABILITY_SUM_TOL: f64 = 1e-12;

/// Slack allowed on the order-qubit positivity bound `|κ₀|² ≤ p(1−p)`.
pub const KAPPA_BOUND_TOL: f64 = 1e-12;

/// Index of the quanton, detector and order factors in `[n, d, 2]` states.
pub const QUANTON: usize = 0;
pub const DETECTOR: usize = 1;
pub const ORDER: usize = 2;

/// Which of the two definite temporal orders.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CausalOrder {
    /// Which-path interaction first, then interference: `U_B U_A`.
    AThenB,
    /// Interference first, then which-path interaction: `U_A U_B`.
    BThenA,
}

impl CausalOrder {
    pub const BOTH: [CausalOrder; 2] = [CausalOrder::AThenB, CausalOrder::BThenA];

    pub fn label(self) -> &'static str {
        match self {
            CausalOrder::AThenB => "A<B",
            CausalOrder::BThenA => "B<A",
        }
    }
}

/// Path amplitudes `√p_i e^{iφ_i}` of the input quanton.
#[derive(Debug, Clone, PartialEq)]
pub struct PathPreparation {
    probabilities: Vec<f64>,
    phases: Vec<f64>,
}

impl PathPreparation {
    pub fn new(probabilities: Vec<f64>, phases: Vec<f64>) -> Result<Self> {
        if probabilities.len() < 2 {
            return Err(Error::validation("probabilities", "at least two paths are required"));
        }
        if phases.len() != probabilities.len() {
            return Err(Error::validation(
                "phases",
                format!("{} phases for {} paths", phases.len(), probabilities.len()),
            ));
        }
        if let Some((i, p)) = probabilities.iter().enumerate().find(|(_, p)| !p.is_finite() || **p < 0.0) {
            return Err(Error::validation(format!("probabilities[{i}]"), format!("{p} is not >= 0")));
        }
        let total: f64 = probabilities.iter().sum();
        if (total - 1.0).abs() > PROBABILITY_SUM_TOL {
            return Err(Error::validation(
                "probabilities",
                format!("sum is {total:.15}, must equal 1 within {PROBABILITY_SUM_TOL:e}"),
            ));
        }
        if let Some(i) = phases.iter().position(|x| !x.is_finite()) {
            return Err(Error::validation(format!("phases[{i}]"), "not finite"));
        }
        Ok(Self { probabilities, phases })
    }

    /// Equal weights, zero phases.
    pub fn balanced(n: usize) -> Result<Self> {
        Self::new(vec![1.0 / n as f64; n], vec![0.0; n])
    }

    pub fn path_count(&self) -> usize {
        self.probabilities.len()
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn phases(&self) -> &[f64] {
        &self.phases
    }

    pub fn amplitudes(&self) -> Vec<Complex64> {
        self.probabilities
            .iter()
            .zip(&self.phases)
            .map(|(&p, &phi)| Complex64::from_polar(p.sqrt(), phi))
            .collect()
    }

    /// `Σ_i √p_i e^{iφ_i} |ψ_i>`.
    pub fn ket(&self) -> ComplexMatrix {
        ComplexMatrix::column(&self.amplitudes())
    }
}

/// Which-path coupling `|ψ_i>|d₀> ↦ |ψ_i> V_i|d₀>`.
#[derive(Debug, Clone, PartialEq)]
pub struct WhichPathInteraction {
    detector_dim: usize,
    unitaries: Vec<ComplexMatrix>,
    initial_index: usize,
}

impl WhichPathInteraction {
    pub fn new(detector_dim: usize, unitaries: Vec<ComplexMatrix>, initial_index: usize) -> Result<Self> {
        if detector_dim == 0 {
            return Err(Error::validation("detector_dim", "must be positive"));
        }
        if initial_index >= detector_dim {
            return Err(Error::validation(
                "detector_initial",
                format!("index {initial_index} outside detector dimension {detector_dim}"),
            ));
        }
        for (i, v) in unitaries.iter().enumerate() {
            if v.rows() != detector_dim || v.cols() != detector_dim {
                return Err(Error::validation(
                    format!("detector_unitary.{i}"),
                    format!("shape {}x{}, expected {detector_dim}x{detector_dim}", v.rows(), v.cols()),
                ));
            }
            if !v.is_unitary(UNITARY_TOL) {
                return Err(Error::validation(
                    format!("detector_unitary.{i}"),
                    format!("not unitary within {UNITARY_TOL:e}"),
                ));
            }
        }
        Ok(Self { detector_dim, unitaries, initial_index })
    }

    /// Every path leaves the detector untouched.
    pub fn unmarked(n: usize, detector_dim: usize) -> Result<Self> {
        Self::new(detector_dim, vec![ComplexMatrix::identity(detector_dim); n], 0)
    }

    pub fn detector_dim(&self) -> usize {
        self.detector_dim
    }

    pub fn unitaries(&self) -> &[ComplexMatrix] {
        &self.unitaries
    }

    pub fn initial_index(&self) -> usize {
        self.initial_index
    }

    pub fn initial_state(&self) -> ComplexMatrix {
        ComplexMatrix::basis(self.detector_dim, self.initial_index)
    }

    /// Marked detector states `|d_i> = V_i |d₀>`.
    pub fn detector_states(&self) -> Vec<ComplexMatrix> {
        let d0 = self.initial_state();
        self.unitaries.iter().map(|v| v * &d0).collect()
    }
}

/// One complete switch process.
#[derive(Debug, Clone, PartialEq)]
pub struct SwitchScenario {
    preparation: PathPreparation,
    interaction: WhichPathInteraction,
    interference: ComplexMatrix,
    p: f64,
    theta: f64,
    order_offdiag: Option<Complex64>,
}

impl SwitchScenario {
    pub fn new(
        preparation: PathPreparation,
        interaction: WhichPathInteraction,
        interference: ComplexMatrix,
        p: f64,
        theta: f64,
        order_offdiag: Option<Complex64>,
    ) -> Result<Self> {
        let n = preparation.path_count();
        if interaction.unitaries().len() != n {
            return Err(Error::validation(
                "detector_unitary",
                format!("{} detector unitaries for {} paths", interaction.unitaries().len(), n),
            ));
        }
        if interference.rows() != n || interference.cols() != n {
            return Err(Error::validation(
                "interference",
                format!("shape {}x{}, expected {n}x{n}", interference.rows(), interference.cols()),
            ));
        }
        if !interference.is_unitary(UNITARY_TOL) {
            return Err(Error::validation("interference", format!("not unitary within {UNITARY_TOL:e}")));
        }
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::validation("p", format!("{p} outside [0, 1]")));
        }
        if !theta.is_finite() {
            return Err(Error::validation("theta", "not finite"));
        }
        if let Some(k) = order_offdiag {
            if !k.re.is_finite() || !k.im.is_finite() {
                return Err(Error::validation("kappa0", "not finite"));
            }
            let bound = p * (1.0 - p);
            if k.norm_sqr() > bound + KAPPA_BOUND_TOL {
                return Err(Error::validation(
                    "kappa0",
                    format!("|kappa0|^2 = {:.6e} exceeds p(1-p) = {:.6e}", k.norm_sqr(), bound),
                ));
            }
        }
        Ok(Self { preparation, interaction, interference, p, theta, order_offdiag })
    }

    pub fn preparation(&self) -> &PathPreparation {
        &self.preparation
    }

    pub fn interaction(&self) -> &WhichPathInteraction {
        &self.interaction
    }

    /// Quanton unitary `U_Q`.
    pub fn interference(&self) -> &ComplexMatrix {
        &self.interference
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// Explicit `κ₀` when the order qubit was supplied as a general state.
    pub fn order_offdiag(&self) -> Option<Complex64> {
        self.order_offdiag
    }

    pub fn path_count(&self) -> usize {
        self.preparation.path_count()
    }

    pub fn detector_dim(&self) -> usize {
        self.interaction.detector_dim()
    }

    /// `[n, d, 2]`.
    pub fn dims(&self) -> Vec<usize> {
        vec![self.path_count(), self.detector_dim(), 2]
    }

    /// `κ₀ = √(p(1−p)) e^{−iθ}` for the pure order qubit, else the supplied value.
    pub fn kappa0(&self) -> Complex64 {
        self.order_offdiag.unwrap_or_else(|| self.pure_kappa0())
    }

    fn pure_kappa0(&self) -> Complex64 {
        Complex64::from_polar((self.p * (1.0 - self.p)).sqrt(), -self.theta)
    }

    /// True when the order qubit is the pure state `√p|0> + e^{iθ}√(1−p)|1>`.
    pub fn has_pure_order(&self) -> bool {
        match self.order_offdiag {
            None => true,
            Some(k) => (k - self.pure_kappa0()).norm() <= KAPPA_BOUND_TOL,
        }
    }

    /// Initial order-qubit state `[[p, κ₀], [κ₀*, 1−p]]`.
    pub fn order_state(&self) -> DensityOperator {
        let k = self.kappa0();
        let m = ComplexMatrix::from_rows(&[
            vec![Complex64::new(self.p, 0.0), k],
            vec![k.conj(), Complex64::new(1.0 - self.p, 0.0)],
        ])
        .expect("2x2 order state");
        DensityOperator::from_matrix(m).expect("validated order-qubit parameters")
    }

    /// `|Ψ⁽⁰⁾> = (Σ_i √p_i e^{iφ_i}|ψ_i>) ⊗ |d₀>`.
    pub fn initial_ket(&self) -> ComplexMatrix {
        self.preparation.ket().kron(&self.interaction.initial_state())
    }

    /// `U_A = Σ_i |ψ_i><ψ_i| ⊗ V_i`.
    pub fn which_path_unitary(&self) -> ComplexMatrix {
        build_which_path_unitary(&self.preparation, &self.interaction).expect("validated scenario")
    }

    /// `U_B = U_Q ⊗ I_D`.
    pub fn interference_unitary(&self) -> ComplexMatrix {
        self.interference.kron(&ComplexMatrix::identity(self.detector_dim()))
    }

    pub fn with_p(&self, p: f64) -> Result<Self> {
        let offdiag = self.order_offdiag;
        Self::new(self.preparation.clone(), self.interaction.clone(), self.interference.clone(), p, self.theta, offdiag)
    }

    pub fn with_theta(&self, theta: f64) -> Result<Self> {
        Self::new(
            self.preparation.clone(),
            self.interaction.clone(),
            self.interference.clone(),
            self.p,
            theta,
            self.order_offdiag,
        )
    }

    pub fn with_order_offdiag(&self, order_offdiag: Option<Complex64>) -> Result<Self> {
        Self::new(
            self.preparation.clone(),
            self.interaction.clone(),
            self.interference.clone(),
            self.p,
            self.theta,
            order_offdiag,
        )
    }

    pub fn with_interaction(&self, interaction: WhichPathInteraction) -> Result<Self> {
        Self::new(self.preparation.clone(), interaction, self.interference.clone(), self.p, self.theta, self.order_offdiag)
    }

    /// Canonical text form of every field, floats as exact bit patterns.
    ///
    /// Two scenarios serialize identically iff all fields are bit-identical.
    pub fn canonical_form(&self) -> String {
        let mut s = String::new();
        let _ = write!(s, "n={};", self.path_count());
        s.push_str("prob=");
        for p in self.preparation.probabilities() {
            let _ = write!(s, "{:016x},", p.to_bits());
        }
        s.push_str(";phase=");
        for p in self.preparation.phases() {
            let _ = write!(s, "{:016x},", p.to_bits());
        }
        let _ = write!(s, ";d={};d0={};", self.detector_dim(), self.interaction.initial_index());
        for (i, v) in self.interaction.unitaries().iter().enumerate() {
            let _ = write!(s, "V{i}=");
            write_matrix(&mut s, v);
        }
        s.push_str("UQ=");
        write_matrix(&mut s, &self.interference);
        let _ = write!(s, "p={:016x};theta={:016x};", self.p.to_bits(), self.theta.to_bits());
        match self.order_offdiag {
            Some(k) => {
                let _ = write!(s, "kappa0={:016x},{:016x};", k.re.to_bits(), k.im.to_bits());
            }
            None => s.push_str("kappa0=pure;"),
        }
        s
    }
}

fn write_matrix(s: &mut String, m: &ComplexMatrix) {
    for z in m.as_slice() {
        let _ = write!(s, "{:016x}{:016x},", z.re.to_bits(), z.im.to_bits());
    }
    s.push(';');
}
