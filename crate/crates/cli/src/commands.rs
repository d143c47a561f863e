use std::cmp::Ordering;
use std::path::PathBuf;
use std::str::FromStr;

use rayon::prelude::*;

use crate::builtin::ScenarioSource;
use crate::error::{CliError, Result};
use crate::table::{Cell, Format, Table};
use switchlab_core::discrimination::causal_duality;
use switchlab_core::linalg::ComplexMatrix;
use switchlab_core::measures::{causal_visibility, order_interference, scanned_visibility};
use switchlab_core::model::{
    branch_kappa, evolve_switch, fixed_order_ket, post_select, reduce, CausalOrder, Subsystem,
};
use switchlab_core::relations::{
    check_entropic_bound, check_fixed_order_duality, check_ico_duality, check_overlap_lemma,
    check_post_selected_duality, fingerprint, ico_quantities, region_sweep, RegionGrid, RelationCheck, RELATION_TOL,
};
use switchlab_core::sampling::{random_scenario, random_unitary, rng, sample_seed};
use switchlab_core::{Error, SwitchScenario, WhichPathInteraction};

/// Tolerance of the post-selection averaging check.
const AVERAGE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Verify,
    Run,
    Sweep,
    Region,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum AxisName {
    P,
    Theta,
    Phi,
    Overlap,
}

impl AxisName {
    pub fn as_str(self) -> &'static str {
        match self {
            AxisName::P => "p",
            AxisName::Theta => "theta",
            AxisName::Phi => "phi",
            AxisName::Overlap => "overlap",
        }
    }
}

impl FromStr for AxisName {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "p" => Ok(AxisName::P),
            "theta" => Ok(AxisName::Theta),
            "phi" => Ok(AxisName::Phi),
            "overlap" => Ok(AxisName::Overlap),
            other => Err(CliError::Argument(format!("unknown axis `{other}` (known: p, theta, phi, overlap)"))),
        }
    }
}

/// `name:start:stop:steps`, sampled inclusively at both ends.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub name: AxisName,
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

impl Axis {
    pub fn values(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.start];
        }
        let span = self.stop - self.start;
        (0..self.steps).map(|k| self.start + span * k as f64 / (self.steps - 1) as f64).collect()
    }
}

impl FromStr for Axis {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let [name, start, stop, steps] = parts.as_slice() else {
            return Err(CliError::Argument(format!("axis `{s}` is not name:start:stop:steps")));
        };
        let real = |v: &str| {
            v.parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| CliError::Argument(format!("axis `{s}`: `{v}` is not a finite number")))
        };
        let steps = steps
            .parse::<usize>()
            .ok()
            .filter(|&n| n >= 1)
            .ok_or_else(|| CliError::Argument(format!("axis `{s}`: step count must be a positive integer")))?;
        Ok(Axis { name: name.parse()?, start: real(start)?, stop: real(stop)?, steps })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub scenario: ScenarioSource,
    pub seed: u64,
    pub samples: usize,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub axes: Vec<Axis>,
    pub alpha: Option<f64>,
    pub tol: Option<f64>,
}

impl RunConfig {
    pub fn new(command: Command, scenario: ScenarioSource) -> Self {
        Self {
            command,
            scenario,
            seed: 0,
            samples: 0,
            out: None,
            format: Format::Csv,
            axes: Vec::new(),
            alpha: None,
            tol: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.axes.len() > 2 {
            return Err(CliError::Argument(format!("at most two axes, got {}", self.axes.len())));
        }
        if self.command == Command::Sweep && self.axes.is_empty() {
            return Err(CliError::Argument("sweep needs at least one --axis".into()));
        }
        if let [a, b] = self.axes.as_slice() {
            if a.name == b.name {
                return Err(CliError::Argument(format!("axis `{}` given twice", a.name.as_str())));
            }
        }
        if let Some(tol) = self.tol {
            if !(tol.is_finite() && tol > 0.0) {
                return Err(CliError::Argument(format!("--tol must be positive, got {tol}")));
            }
        }
        if let Some(alpha) = self.alpha {
            if !alpha.is_finite() {
                return Err(CliError::Argument("--alpha must be finite".into()));
            }
        }
        Ok(())
    }
}

/// A finished command: the table to emit and the failed checks, if any.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub table: Table,
    pub failures: Vec<String>,
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        if self.failures.is_empty() {
            0
        } else {
            1
        }
    }
}

pub fn execute(cfg: &RunConfig) -> Result<Report> {
    cfg.validate()?;
    match cfg.command {
        Command::Verify => run_verify(cfg),
        Command::Run => run_single(cfg),
        Command::Sweep => run_sweep(cfg),
        Command::Region => run_region(cfg),
    }
}

/// All relation checks for one scenario, tagged with its fingerprint.
pub fn scenario_checks(scn: &SwitchScenario, seed: Option<u64>, lemma_seed: u64) -> Result<Vec<RelationCheck>> {
    let mut checks = Vec::new();
    for order in CausalOrder::BOTH {
        checks.push(check_fixed_order_duality(scn, order)?);
    }
    checks.extend(check_ico_duality(scn)?);

    let rho = evolve_switch(scn);
    let rho_o = reduce(&rho, Subsystem::Order)?;
    let visibility = causal_visibility(&rho_o)?;
    let closed = 2.0 * branch_kappa(scn).norm();
    checks.push(RelationCheck::equality("causal_coherence", visibility, closed, RELATION_TOL, ""));
    checks.push(RelationCheck::equality("scanned_visibility", scanned_visibility(&rho_o)?, visibility, RELATION_TOL, ""));
    if scn.has_pure_order() {
        let ab = fixed_order_ket(scn, CausalOrder::AThenB);
        let ba = fixed_order_ket(scn, CausalOrder::BThenA);
        let (report, uqsd) = causal_duality(scn.p(), &ab, &ba, RELATION_TOL)?;
        if uqsd.in_regime {
            checks.push(RelationCheck::equality("causal_duality", report.sum, 1.0, RELATION_TOL, ""));
        }
    }

    let (plus, minus) = post_select(&rho, 0.0)?;
    let qd = reduce(&rho, Subsystem::QuantonDetector)?;
    let mut average = ComplexMatrix::zeros(qd.dim(), qd.dim());
    for res in [&plus, &minus] {
        if let Some(c) = &res.conditional {
            average = &average + &c.qd.matrix().scale_real(res.probability);
        }
    }
    checks.push(RelationCheck::equality(
        "post_selection_average",
        average.max_abs_diff(qd.matrix()),
        0.0,
        AVERAGE_TOL,
        "",
    ));
    match check_post_selected_duality(scn, 0.0) {
        Ok(outcomes) => checks.extend(outcomes.into_iter().flat_map(|o| o.checks)),
        Err(Error::Precondition(_)) => {}
        Err(e) => return Err(e.into()),
    }

    checks.extend(check_entropic_bound(scn)?.1);
    let w = random_unitary(&mut rng(lemma_seed), scn.detector_dim());
    checks.extend(check_overlap_lemma(scn, &w)?);

    let fp = fingerprint(scn, seed);
    for c in &mut checks {
        c.context = fp.clone();
    }
    Ok(checks)
}

fn verify_columns() -> Table {
    Table::new(&["name", "kind", "lhs", "rhs", "tol", "holds", "fingerprint"])
}

fn run_verify(cfg: &RunConfig) -> Result<Report> {
    let (scn, tag) = cfg.scenario.load(cfg.seed)?;
    let mut checks = scenario_checks(&scn, tag, cfg.seed)?;
    let sampled: Vec<Vec<RelationCheck>> = (0..cfg.samples as u64)
        .into_par_iter()
        .map(|i| {
            let seed = sample_seed(cfg.seed, i);
            scenario_checks(&random_scenario(seed, i % 2 == 1), Some(seed), seed)
        })
        .collect::<Result<_>>()?;
    checks.extend(sampled.into_iter().flatten());
    if let Some(tol) = cfg.tol {
        for c in &mut checks {
            c.tol = tol;
        }
    }
    checks.sort_by(|a, b| a.name.cmp(&b.name).then_with(|| a.context.cmp(&b.context)));

    let mut table = verify_columns();
    let mut failures = Vec::new();
    for c in &checks {
        if !c.holds() {
            failures.push(format!("{} @ {}", c.name, c.context));
        }
        table.push(vec![
            Cell::Text(c.name.clone()),
            Cell::Text(c.kind.symbol().to_string()),
            Cell::Real(c.lhs),
            Cell::Real(c.rhs),
            Cell::Real(c.tol),
            Cell::Bool(c.holds()),
            Cell::Text(c.context.clone()),
        ]);
    }
    Ok(Report { table, failures })
}

const QUANTITY_COLUMNS: [&str; 7] = ["c_q", "d_bound", "c_causal", "p_plus", "delta", "h_order", "entropic_slack"];

/// Spatial, causal and entropic quantities of one scenario at basis phase `phi`.
fn quantities(scn: &SwitchScenario, phi: f64, alpha: Option<f64>) -> Result<Vec<Cell>> {
    let q = ico_quantities(scn)?;
    let rho_o = reduce(&evolve_switch(scn), Subsystem::Order)?;
    let (p_plus, _) = order_interference(&rho_o, phi)?;
    let (ent, _) = check_entropic_bound(scn)?;
    let mut row: Vec<Cell> = [q.c_q, q.d_bound, q.c_causal, p_plus, ent.delta, ent.h_order, ent.slack]
        .into_iter()
        .map(Cell::Real)
        .collect();
    if let Some(a) = alpha {
        row.push(Cell::Real(q.c_q + q.d_bound + a * q.c_causal - 1.0));
    }
    Ok(row)
}

fn quantity_table(leading: &[&str], alpha: Option<f64>) -> Table {
    let mut cols: Vec<&str> = leading.to_vec();
    cols.extend(QUANTITY_COLUMNS);
    if alpha.is_some() {
        cols.push("violation_margin");
    }
    cols.push("fingerprint");
    Table::new(&cols)
}

fn run_single(cfg: &RunConfig) -> Result<Report> {
    let (scn, tag) = cfg.scenario.load(cfg.seed)?;
    let mut table = quantity_table(&["p", "theta", "phi"], cfg.alpha);
    let mut row = vec![Cell::Real(scn.p()), Cell::Real(scn.theta()), Cell::Real(0.0)];
    row.extend(quantities(&scn, 0.0, cfg.alpha)?);
    row.push(Cell::Text(fingerprint(&scn, tag)));
    table.push(row);
    Ok(Report { table, failures: Vec::new() })
}

/// Two-path marking with `<d₀|d₁> = s`: `V₀ = I` and `V₁` a real rotation
/// in the plane of `d₀` and the next basis state.
fn with_overlap(scn: &SwitchScenario, s: f64) -> Result<SwitchScenario> {
    if scn.path_count() != 2 {
        return Err(CliError::Argument(format!("the overlap axis needs two paths, scenario has {}", scn.path_count())));
    }
    if !(0.0..=1.0).contains(&s) {
        return Err(CliError::Argument(format!("overlap {s} outside [0, 1]")));
    }
    let d = scn.detector_dim();
    let d0 = scn.interaction().initial_index();
    let d1 = (d0 + 1) % d;
    let t = (1.0 - s * s).sqrt();
    let mut rot = ComplexMatrix::identity(d);
    rot[(d0, d0)] = s.into();
    rot[(d1, d1)] = s.into();
    rot[(d1, d0)] = t.into();
    rot[(d0, d1)] = (-t).into();
    let interaction = WhichPathInteraction::new(d, vec![ComplexMatrix::identity(d), rot], d0)?;
    Ok(scn.with_interaction(interaction)?)
}

fn run_sweep(cfg: &RunConfig) -> Result<Report> {
    let (base, tag) = cfg.scenario.load(cfg.seed)?;
    let names: Vec<&str> = cfg.axes.iter().map(|a| a.name.as_str()).collect();
    let grids: Vec<Vec<f64>> = cfg.axes.iter().map(Axis::values).collect();
    let points: Vec<Vec<f64>> = match grids.as_slice() {
        [a] => a.iter().map(|&x| vec![x]).collect(),
        [a, b] => a.iter().flat_map(|&x| b.iter().map(move |&y| vec![x, y])).collect(),
        _ => unreachable!("validated axis count"),
    };

    let rows: Vec<(Vec<f64>, String, Vec<Cell>)> = points
        .into_par_iter()
        .map(|values| {
            let mut scn = base.clone();
            let mut phi = 0.0;
            for (axis, &v) in cfg.axes.iter().zip(&values) {
                match axis.name {
                    AxisName::P => scn = scn.with_p(v)?,
                    AxisName::Theta => scn = scn.with_theta(v)?,
                    AxisName::Phi => phi = v,
                    AxisName::Overlap => scn = with_overlap(&scn, v)?,
                }
            }
            let fp = fingerprint(&scn, tag);
            let cells = quantities(&scn, phi, cfg.alpha)?;
            Ok((values, fp, cells))
        })
        .collect::<Result<_>>()?;
    let mut rows = rows;
    rows.sort_by(|(va, fa, _), (vb, fb, _)| {
        va.iter()
            .zip(vb)
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| *o != Ordering::Equal)
            .unwrap_or(Ordering::Equal)
            .then_with(|| fa.cmp(fb))
    });

    let mut table = quantity_table(&names, cfg.alpha);
    for (values, fp, cells) in rows {
        let mut row: Vec<Cell> = values.into_iter().map(Cell::Real).collect();
        row.extend(cells);
        row.push(Cell::Text(fp));
        table.push(row);
    }
    Ok(Report { table, failures: Vec::new() })
}

/// The commuting-sector region; axes `p` and `overlap` set the grid sizes
/// over `[0, 1]`.
fn run_region(cfg: &RunConfig) -> Result<Report> {
    let mut grid = RegionGrid::default();
    for axis in &cfg.axes {
        if axis.start != 0.0 || axis.stop != 1.0 {
            return Err(CliError::Argument(format!("region axes span [0, 1]; got {}:{}", axis.start, axis.stop)));
        }
        match axis.name {
            AxisName::P => grid.p_steps = axis.steps,
            AxisName::Overlap => grid.overlap_steps = axis.steps,
            other => return Err(CliError::Argument(format!("region has no `{}` axis", other.as_str()))),
        }
    }
    let mut table = Table::new(&["p", "overlap", "x", "y", "fingerprint"]);
    for pt in region_sweep(grid)? {
        table.push(vec![Cell::Real(pt.p), Cell::Real(pt.overlap), Cell::Real(pt.x), Cell::Real(pt.y), Cell::Text(pt.fingerprint)]);
    }
    Ok(Report { table, failures: Vec::new() })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(command: Command, scenario: &str) -> RunConfig {
        RunConfig::new(command, ScenarioSource::parse(scenario))
    }

    #[test]
    fn axis_parsing() {
        let a: Axis = "phi:0:6.283185307179586:360".parse().unwrap();
        assert_eq!(a.name, AxisName::Phi);
        let v = a.values();
        assert_eq!(v.len(), 360);
        assert_eq!(v[0], 0.0);
        assert_eq!(*v.last().unwrap(), 6.283185307179586);
        assert!("tau:0:1:3".parse::<Axis>().is_err());
        assert!("p:0:1".parse::<Axis>().is_err());
        assert!("p:0:1:0".parse::<Axis>().is_err());
        assert_eq!("p:0.5:1:1".parse::<Axis>().unwrap().values(), vec![0.5]);
    }

    #[test]
    fn realization_verifies() {
        let report = execute(&cfg(Command::Verify, "explicit-realization")).unwrap();
        assert!(report.failures.is_empty(), "{:?}", report.failures);
        let name = report.table.column("name").unwrap();
        let lhs = report.table.column("lhs").unwrap();
        let row = report.table.rows.iter().find(|r| r[name] == Cell::Text("causal_coherence".into())).unwrap();
        match row[lhs] {
            Cell::Real(x) => assert!((x - 1.0).abs() < 1e-9),
            ref other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn tight_tolerance_produces_failures() {
        let mut c = cfg(Command::Verify, "generic");
        c.tol = Some(1e-300);
        let report = execute(&c).unwrap();
        assert_eq!(report.exit_code(), 1);
    }

    #[test]
    fn too_many_axes() {
        let mut c = cfg(Command::Sweep, "explicit-realization");
        c.axes = vec!["p:0:1:2".parse().unwrap(), "theta:0:1:2".parse().unwrap(), "phi:0:1:2".parse().unwrap()];
        assert!(execute(&c).is_err());
        c.axes.clear();
        assert!(execute(&c).is_err());
    }

    #[test]
    fn overlap_axis_sets_detector_overlap() {
        let (scn, _) = ScenarioSource::parse("explicit-realization").load(0).unwrap();
        let tuned = with_overlap(&scn, 0.3).unwrap();
        let states = tuned.interaction().detector_states();
        assert!((states[0].inner(&states[1]).re - 0.3).abs() < 1e-15);
        let (three, _) = ScenarioSource::parse("full-marking").load(0).unwrap();
        assert!(with_overlap(&three, 0.3).is_err());
    }

    #[test]
    fn region_rejects_foreign_axes() {
        let mut c = cfg(Command::Region, "explicit-realization");
        c.axes = vec!["theta:0:1:3".parse().unwrap()];
        assert!(execute(&c).is_err());
        c.axes = vec!["p:0:0.5:3".parse().unwrap()];
        assert!(execute(&c).is_err());
    }
}
