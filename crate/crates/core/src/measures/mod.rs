//! Scalar complementarity measures.

mod causal;
mod coherence;
mod entropy;

pub use causal::{
    binary_entropy, causal_coherence, causal_visibility, delta_parameter, order_entropy_from_delta,
    order_interference, scanned_visibility, DELTA_TOL, RANGE_TOL, SCAN_POINTS,
};
pub use coherence::{detector_ensemble, l1_coherence, path_distinguishability, DualityReport, ENSEMBLE_TOL};
pub use entropy::{
    conditional_entropy_after_measurement, conditional_order_entropy, dephase_order, EntropicReport, OrderBasis,
    CQ_CLAMP,
};
