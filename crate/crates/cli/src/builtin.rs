//! Named scenarios available without a config file.

use std::f64::consts::TAU;
use std::path::PathBuf;

use num_complex::Complex64;

use crate::config::parse_config_file;
use crate::error::{CliError, Result};
use switchlab_core::relations::explicit_realization;
use switchlab_core::sampling::random_scenario;
use switchlab_core::{ComplexMatrix, PathPreparation, SwitchScenario, WhichPathInteraction};

pub const BUILTINS: [&str; 4] = ["explicit-realization", "no-marking", "full-marking", "generic"];

/// Where a scenario comes from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ScenarioSource {
    Builtin(String),
    File(PathBuf),
}

impl ScenarioSource {
    /// Built-in names win over paths of the same spelling.
    pub fn parse(arg: &str) -> Self {
        if BUILTINS.contains(&arg) {
            ScenarioSource::Builtin(arg.to_string())
        } else {
            ScenarioSource::File(PathBuf::from(arg))
        }
    }

    /// The scenario, plus the seed that generated it when it is seeded.
    pub fn load(&self, seed: u64) -> Result<(SwitchScenario, Option<u64>)> {
        match self {
            ScenarioSource::Builtin(name) => builtin(name, seed),
            ScenarioSource::File(path) => Ok((parse_config_file(path)?, None)),
        }
    }
}

fn no_marking() -> SwitchScenario {
    SwitchScenario::new(
        PathPreparation::balanced(2).expect("two paths"),
        WhichPathInteraction::unmarked(2, 2).expect("identity marking"),
        ComplexMatrix::identity(2),
        0.5,
        0.0,
        None,
    )
    .expect("valid built-in")
}

/// Three paths marked by cyclic shifts of a qutrit detector, so the detector
/// states are orthogonal; diagonal interference commutes with the marking.
fn full_marking() -> SwitchScenario {
    let n = 3;
    let shift = |k: usize| {
        let mut m = ComplexMatrix::zeros(n, n);
        for j in 0..n {
            m[((j + k) % n, j)] = Complex64::new(1.0, 0.0);
        }
        m
    };
    let phases: Vec<Complex64> = (0..n).map(|k| Complex64::from_polar(1.0, TAU * k as f64 / n as f64)).collect();
    SwitchScenario::new(
        PathPreparation::balanced(n).expect("three paths"),
        WhichPathInteraction::new(n, (0..n).map(shift).collect(), 0).expect("permutation marking"),
        ComplexMatrix::from_diagonal(&phases),
        0.5,
        0.0,
        None,
    )
    .expect("valid built-in")
}

pub fn builtin(name: &str, seed: u64) -> Result<(SwitchScenario, Option<u64>)> {
    match name {
        "explicit-realization" => Ok((explicit_realization(0.5), None)),
        "no-marking" => Ok((no_marking(), None)),
        "full-marking" => Ok((full_marking(), None)),
        "generic" => Ok((random_scenario(seed, false), Some(seed))),
        other => Err(CliError::Argument(format!("unknown built-in scenario `{other}` (known: {})", BUILTINS.join(", ")))),
    }
}
