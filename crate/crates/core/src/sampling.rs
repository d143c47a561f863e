//! Seeded random states, unitaries and scenarios.
//!
//! Every generator takes an explicit RNG; [`rng`] and [`sample_seed`] make the
//! whole pipeline reproducible from a single 64-bit seed.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, StandardNormal};

use crate::linalg::{ComplexMatrix, DensityOperator};
use crate::model::{branch_symmetry_terms, PathPreparation, SwitchScenario, WhichPathInteraction};

/// Upper bound on `n · d` for generated scenarios (global dimension ≤ 16).
pub const MAX_QD_DIM: usize = 8;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Seed of sample `index` in a run keyed by `master`.
pub fn sample_seed(master: u64, index: u64) -> u64 {
    let mut r = rng(master);
    r.set_stream(index);
    r.random()
}

fn gaussian(rng: &mut impl Rng) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im)
}

/// `rows × cols` matrix of independent standard complex Gaussians.
pub fn ginibre(rng: &mut impl Rng, rows: usize, cols: usize) -> ComplexMatrix {
    let data = (0..rows * cols).map(|_| gaussian(rng)).collect();
    ComplexMatrix::new(rows, cols, data).expect("finite Gaussian samples")
}

/// Haar-like unitary from Gram-Schmidt on the columns of a Ginibre matrix.
pub fn random_unitary(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    let g = ginibre(rng, n, n);
    let mut q = ComplexMatrix::zeros(n, n);
    for j in 0..n {
        let mut col: Vec<Complex64> = (0..n).map(|i| g[(i, j)]).collect();
        // two passes keep the columns orthogonal to machine precision
        for _ in 0..2 {
            for k in 0..j {
                let proj: Complex64 = (0..n).map(|i| q[(i, k)].conj() * col[i]).sum();
                for (i, c) in col.iter_mut().enumerate() {
                    *c -= proj * q[(i, k)];
                }
            }
        }
        let norm = col.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        for (i, c) in col.iter().enumerate() {
            q[(i, j)] = c / norm;
        }
    }
    q
}

/// Uniformly distributed normalized ket.
pub fn random_ket(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    let g = ginibre(rng, n, 1);
    let norm = g.norm();
    g.scale_real(1.0 / norm)
}

/// Full-rank mixed state `G G† / Tr(G G†)`.
pub fn random_density(rng: &mut impl Rng, n: usize) -> DensityOperator {
    let g = ginibre(rng, n, n);
    let m = &g * &g.adjoint();
    let tr = m.trace().re;
    DensityOperator::from_matrix(m.scale_real(1.0 / tr)).expect("positive by construction")
}

/// Hermitian matrix with Gaussian entries.
pub fn random_hermitian(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    let g = ginibre(rng, n, n);
    (&g + &g.adjoint()).scale_real(0.5)
}

/// Symmetric Dirichlet(1) probability vector.
pub fn random_probabilities(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    let w: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let total: f64 = w.iter().sum();
    let mut p: Vec<f64> = w.iter().map(|x| x / total).collect();
    // push the rounding residue into the largest entry
    let residue = 1.0 - p.iter().sum::<f64>();
    let imax = (0..n).max_by(|&a, &b| p[a].total_cmp(&p[b])).unwrap_or(0);
    p[imax] += residue;
    p
}

pub fn random_phases(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(0.0..TAU)).collect()
}

/// Random scenario with `n ∈ 2..=4` paths and `n · d ≤ 8`.
///
/// With `mixed`, the order qubit gets `κ₀ = r √(p(1−p)) e^{iχ}` for uniform
/// `r ∈ [0, 1)`; otherwise it is pure.
pub fn random_scenario(seed: u64, mixed: bool) -> SwitchScenario {
    let mut r = rng(seed);
    let n = r.random_range(2..=4usize);
    let d = r.random_range(2..=MAX_QD_DIM / n);
    let preparation = PathPreparation::new(random_probabilities(&mut r, n), random_phases(&mut r, n))
        .expect("Dirichlet sample");
    let unitaries = (0..n).map(|_| random_unitary(&mut r, d)).collect();
    let d0 = r.random_range(0..d);
    let interaction = WhichPathInteraction::new(d, unitaries, d0).expect("random unitaries");
    let interference = random_unitary(&mut r, n);
    let p: f64 = r.random();
    let theta = r.random_range(0.0..TAU);
    let offdiag = if mixed {
        let scale: f64 = r.random();
        let chi = r.random_range(0.0..TAU);
        Some(Complex64::from_polar(scale * (p * (1.0 - p)).sqrt(), chi))
    } else {
        None
    };
    SwitchScenario::new(preparation, interaction, interference, p, theta, offdiag).expect("valid by construction")
}

/// Two-path, equal-weight scenario satisfying the post-selection symmetry
/// condition at `φ = 0`.
///
/// `U_Q` is a phased permutation so both path amplitudes keep weight ½ in each
/// order; `θ` is then chosen so `Re(e^{iθ}Γ₀₀) = Re(e^{iθ}Γ₁₁)`.
pub fn random_symmetric_scenario(seed: u64) -> SwitchScenario {
    let mut r = rng(seed);
    let d = r.random_range(2..=MAX_QD_DIM / 2);
    let preparation = PathPreparation::new(vec![0.5, 0.5], random_phases(&mut r, 2)).expect("balanced");
    let unitaries = (0..2).map(|_| random_unitary(&mut r, d)).collect();
    let d0 = r.random_range(0..d);
    let interaction = WhichPathInteraction::new(d, unitaries, d0).expect("random unitaries");
    let (a, b) = (r.random_range(0.0..TAU), r.random_range(0.0..TAU));
    let mut interference = ComplexMatrix::zeros(2, 2);
    if r.random::<bool>() {
        interference[(0, 0)] = Complex64::from_polar(1.0, a);
        interference[(1, 1)] = Complex64::from_polar(1.0, b);
    } else {
        interference[(0, 1)] = Complex64::from_polar(1.0, a);
        interference[(1, 0)] = Complex64::from_polar(1.0, b);
    }
    let p: f64 = r.random();
    let scn = SwitchScenario::new(preparation, interaction, interference, p, 0.0, None).expect("valid by construction");
    let gamma = branch_symmetry_terms(&scn).expect("two paths");
    let diff = gamma[0][0] - gamma[1][1];
    let theta = if diff.norm() > 0.0 { PI / 2.0 - diff.arg() } else { 0.0 };
    scn.with_theta(theta.rem_euclid(TAU)).expect("finite theta")
}
