//! Minimum-error and unambiguous discrimination of two hypotheses.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{trace_norm, ComplexMatrix, DensityOperator};
use crate::measures::{causal_coherence, DualityReport};

/// Slack on prior ranges, ket norms and the IDP window edges.
pub const PRIOR_TOL: f64 = 1e-12;

/// Grid size of the oracle's first pass over `η_a`.
pub const ORACLE_GRID: usize = 10_000;

/// Interval-halving steps after the grid pass.
pub const ORACLE_REFINEMENTS: usize = 50;

const FEASIBILITY_BISECTIONS: usize = 60;

/// Two hypotheses `{p, ρ_a; 1−p, ρ_b}`.
#[derive(Debug, Clone)]
pub struct DiscriminationProblem {
    prior: f64,
    state_a: DensityOperator,
    state_b: DensityOperator,
}

impl DiscriminationProblem {
    pub fn new(prior: f64, state_a: DensityOperator, state_b: DensityOperator) -> Result<Self> {
        if !(0.0..=1.0).contains(&prior) {
            return Err(Error::InvalidArgument(format!("prior {prior} outside [0, 1]")));
        }
        if state_a.dims() != state_b.dims() {
            return Err(Error::DimensionMismatch(format!(
                "hypotheses have dims {:?} and {:?}",
                state_a.dims(),
                state_b.dims()
            )));
        }
        Ok(Self { prior, state_a, state_b })
    }

    pub fn prior(&self) -> f64 {
        self.prior
    }

    pub fn state_a(&self) -> &DensityOperator {
        &self.state_a
    }

    pub fn state_b(&self) -> &DensityOperator {
        &self.state_b
    }
}

/// `½(1 + ‖p ρ_a − (1−p) ρ_b‖₁)`.
pub fn helstrom_guess(prob: &DiscriminationProblem) -> Result<f64> {
    let p = prob.prior;
    let diff = &prob.state_a.matrix().scale_real(p) - &prob.state_b.matrix().scale_real(1.0 - p);
    Ok(0.5 * (1.0 + trace_norm(&diff)?))
}

/// Unambiguous success probability for two pure states.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UqsdResult {
    pub value: f64,
    /// False when the symmetric IDP expression is not optimal for this prior;
    /// `value` then holds the projective optimum.
    pub in_regime: bool,
}

/// Whether `√(p/(1−p)) ∈ [s, 1/s]` for overlap magnitude `s`.
pub fn idp_regime(p: f64, s: f64) -> bool {
    let q = 1.0 - p;
    s * s * q <= p + PRIOR_TOL && s * s * p <= q + PRIOR_TOL
}

fn check_kets(p: f64, a: &ComplexMatrix, b: &ComplexMatrix) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidArgument(format!("prior {p} outside [0, 1]")));
    }
    if a.cols() != 1 || b.cols() != 1 || a.rows() != b.rows() {
        return Err(Error::DimensionMismatch(format!(
            "kets of shape {}x{} and {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    for (name, k) in [("a", a), ("b", b)] {
        if (k.norm() - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidArgument(format!("ket {name} has norm {:.12}", k.norm())));
        }
    }
    Ok(())
}

/// IDP value `1 − 2√(p(1−p))|<ψ_a|ψ_b>|` inside its window, otherwise
/// `max(p, 1−p)(1 − |<ψ_a|ψ_b>|²)`.
pub fn uqsd_two_pure(p: f64, a: &ComplexMatrix, b: &ComplexMatrix) -> Result<UqsdResult> {
    check_kets(p, a, b)?;
    let s = a.inner(b).norm().min(1.0);
    if idp_regime(p, s) {
        Ok(UqsdResult { value: 1.0 - 2.0 * (p * (1.0 - p)).sqrt() * s, in_regime: true })
    } else {
        Ok(UqsdResult { value: p.max(1.0 - p) * (1.0 - s * s), in_regime: false })
    }
}

/// Smallest eigenvalue of a 2×2 Hermitian matrix.
fn min_eig_2x2(m: &[[Complex64; 2]; 2]) -> f64 {
    let half_tr = 0.5 * (m[0][0].re + m[1][1].re);
    let det = m[0][0].re * m[1][1].re - m[0][1].norm_sqr();
    half_tr - (half_tr * half_tr - det).max(0.0).sqrt()
}

/// Brute-force optimum over unambiguous POVMs in the span of two pure states.
///
/// The states are written in an orthonormal basis of their span. For each
/// `η_a` the largest feasible `η_b` is found by bisection on positivity of
/// `Π_? = I − η_a|b⊥><b⊥| − η_b|a⊥><a⊥|`. The success probability is
/// maximized over `η_a` on a uniform grid, then refined by interval halving.
pub fn uqsd_numeric_oracle(p: f64, a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64> {
    check_kets(p, a, b)?;
    // span basis: e1 = a, e2 ∝ b − <a|b> a
    let c = a.inner(b);
    let residual = b - &a.scale(c);
    let r = residual.norm();
    if r < 1e-12 {
        return Ok(0.0);
    }
    let a2 = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)];
    let b2 = [c, Complex64::new(r, 0.0)];
    // unit vectors orthogonal to each state
    let a_perp = [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)];
    let b_perp = [Complex64::new(-r, 0.0), c.conj()];
    let proj = |v: &[Complex64; 2]| [[v[0] * v[0].conj(), v[0] * v[1].conj()], [v[1] * v[0].conj(), v[1] * v[1].conj()]];
    let pa = proj(&b_perp);
    let pb = proj(&a_perp);
    let overlap_sq = |u: &[Complex64; 2], v: &[Complex64; 2]| (u[0].conj() * v[0] + u[1].conj() * v[1]).norm_sqr();
    let hit_a = overlap_sq(&b_perp, &a2);
    let hit_b = overlap_sq(&a_perp, &b2);

    let inconclusive = |eta_a: f64, eta_b: f64| {
        let mut m = [[Complex64::new(0.0, 0.0); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                let id = if i == j { 1.0 } else { 0.0 };
                m[i][j] = Complex64::new(id, 0.0) - pa[i][j] * eta_a - pb[i][j] * eta_b;
            }
        }
        m
    };
    let max_eta_b = |eta_a: f64| {
        if min_eig_2x2(&inconclusive(eta_a, 1.0)) >= 0.0 {
            return 1.0;
        }
        let (mut lo, mut hi) = (0.0, 1.0);
        for _ in 0..FEASIBILITY_BISECTIONS {
            let mid = 0.5 * (lo + hi);
            if min_eig_2x2(&inconclusive(eta_a, mid)) >= 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    };
    let success = |eta_a: f64| p * eta_a * hit_a + (1.0 - p) * max_eta_b(eta_a) * hit_b;

    let step = 1.0 / ORACLE_GRID as f64;
    let mut best = 0;
    let mut best_val = f64::NEG_INFINITY;
    for k in 0..=ORACLE_GRID {
        let v = success(k as f64 * step);
        if v > best_val {
            best = k;
            best_val = v;
        }
    }
    let mut lo = (best as f64 - 1.0).max(0.0) * step;
    let mut hi = (best as f64 + 1.0).min(ORACLE_GRID as f64) * step;
    for _ in 0..ORACLE_REFINEMENTS {
        let mid = 0.5 * (lo + hi);
        let eps = 1e-3 * (hi - lo);
        if success(mid - eps) < success(mid + eps) {
            lo = mid - eps;
        } else {
            hi = mid + eps;
        }
    }
    Ok(best_val.max(success(0.5 * (lo + hi))))
}

/// `C_causal` from the branch overlap and `D_causal` from [`uqsd_two_pure`].
pub fn causal_duality(p: f64, ab: &ComplexMatrix, ba: &ComplexMatrix, tol: f64) -> Result<(DualityReport, UqsdResult)> {
    let uqsd = uqsd_two_pure(p, ab, ba)?;
    let coherence = causal_coherence(p, ab.inner(ba))?;
    Ok((DualityReport::new(coherence, uqsd.value, tol), uqsd))
}
