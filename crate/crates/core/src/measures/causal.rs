use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::DensityOperator;
use crate::model::OrderOutcome;

/// Uniform grid size of the visibility scan.
pub const SCAN_POINTS: usize = 720;

/// Slack allowed on `|overlap| ≤ 1` and on input ranges.
pub const RANGE_TOL: f64 = 1e-12;

/// Slack on `Δ ≤ 1`.
pub const DELTA_TOL: f64 = 1e-10;

const GOLDEN_ITERATIONS: usize = 80;

fn check_qubit(rho_o: &DensityOperator) -> Result<()> {
    if rho_o.dim() != 2 {
        return Err(Error::DimensionMismatch(format!("order qubit must be 2x2, found dimension {}", rho_o.dim())));
    }
    Ok(())
}

/// `C_causal = 2 √(p(1−p)) |overlap|`.
pub fn causal_coherence(p: f64, overlap: Complex64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidArgument(format!("p = {p} outside [0, 1]")));
    }
    if overlap.norm() > 1.0 + RANGE_TOL {
        return Err(Error::InvalidArgument(format!("|overlap| = {} exceeds 1", overlap.norm())));
    }
    Ok(2.0 * (p * (1.0 - p)).sqrt() * overlap.norm())
}

/// `(P₊(φ), P₋(φ))` with `P_± = <±_φ|ρ_O|±_φ>`.
pub fn order_interference(rho_o: &DensityOperator, phi: f64) -> Result<(f64, f64)> {
    check_qubit(rho_o)?;
    let m = rho_o.matrix();
    let expect = |outcome: OrderOutcome| {
        let v = outcome.ket(phi);
        (&(&v.adjoint() * m) * &v)[(0, 0)].re
    };
    Ok((expect(OrderOutcome::Plus), expect(OrderOutcome::Minus)))
}

/// `V_causal = 2|κ|` with `κ = ρ_O[0,1]`.
pub fn causal_visibility(rho_o: &DensityOperator) -> Result<f64> {
    check_qubit(rho_o)?;
    Ok(2.0 * rho_o.matrix()[(0, 1)].norm())
}

/// `(P_max − P_min)/(P_max + P_min)` of `P₊(φ)`, located on a uniform grid and
/// polished by golden-section search.
pub fn scanned_visibility(rho_o: &DensityOperator) -> Result<f64> {
    check_qubit(rho_o)?;
    let plus = |phi: f64| order_interference(rho_o, phi).map(|(p, _)| p).unwrap_or(f64::NAN);
    let step = TAU / SCAN_POINTS as f64;
    let grid: Vec<f64> = (0..SCAN_POINTS).map(|k| plus(k as f64 * step)).collect();
    let imax = (0..SCAN_POINTS).max_by(|&a, &b| grid[a].total_cmp(&grid[b])).unwrap_or(0);
    let imin = (0..SCAN_POINTS).min_by(|&a, &b| grid[a].total_cmp(&grid[b])).unwrap_or(0);
    let centre = |i: usize| i as f64 * step;
    let p_max = golden_max(&plus, centre(imax) - step, centre(imax) + step);
    let p_min = -golden_max(&|phi| -plus(phi), centre(imin) - step, centre(imin) + step);
    Ok((p_max - p_min) / (p_max + p_min))
}

/// Maximum of a unimodal function on `[a, b]`.
fn golden_max(f: &dyn Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - r * (b - a);
    let mut x2 = a + r * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..GOLDEN_ITERATIONS {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + r * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - r * (b - a);
            f1 = f(x1);
        }
    }
    f1.max(f2)
}

/// Binary entropy `h₂(x)` in bits.
pub fn binary_entropy(x: f64) -> Result<f64> {
    if !(-RANGE_TOL..=1.0 + RANGE_TOL).contains(&x) {
        return Err(Error::InvalidArgument(format!("binary entropy argument {x} outside [0, 1]")));
    }
    let x = x.clamp(0.0, 1.0);
    let term = |q: f64| if q > 0.0 { -q * q.log2() } else { 0.0 };
    Ok(term(x) + term(1.0 - x))
}

/// `Δ = √((2p−1)² + C_causal²)`.
pub fn delta_parameter(p: f64, c_causal: f64) -> Result<f64> {
    let delta = ((2.0 * p - 1.0).powi(2) + c_causal * c_causal).sqrt();
    if !delta.is_finite() || delta > 1.0 + DELTA_TOL {
        return Err(Error::Inconsistent(format!("Δ = {delta} exceeds 1 for p = {p}, C_causal = {c_causal}")));
    }
    Ok(delta.min(1.0))
}

/// `H(O) = h₂((1+Δ)/2)`.
pub fn order_entropy_from_delta(delta: f64) -> Result<f64> {
    binary_entropy((1.0 + delta) / 2.0)
}
