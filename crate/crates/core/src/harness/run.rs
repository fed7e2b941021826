//! Time loop shared by the CLI and the studies.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::cons_bgk::Conservative;
use crate::dirk::ButcherTableau;
use crate::error::Result;
use crate::phase_grid::{macro_fields, DistributionFunction, MacroFields, Moments, PhaseGrid};
use crate::sl_bgk::{BoundaryCondition, SemiLagrangian};

use super::config::{Scheme, SolverConfig, TestCase};
use super::diagnostics::{conservation_error, entropy, total_moments, ConservationDrift, SpaceRule};
use super::experiments::{init_riemann, init_test1};

/// One of the two solver families behind a common step interface.
#[derive(Debug, Clone)]
pub enum Solver {
    SemiLagrangian(SemiLagrangian),
    Conservative(Conservative),
}

impl Solver {
    pub fn from_config(cfg: &SolverConfig) -> Result<Self> {
        let grid = cfg.grid()?;
        let bc = cfg.boundary();
        bc.validate()?;
        let tau = cfg.tau_model();
        Ok(match cfg.scheme.tableau() {
            Some(kind) => Solver::SemiLagrangian(
                SemiLagrangian::new(grid, ButcherTableau::new(kind), bc, tau, cfg.interpolation())
                    .parallel(cfg.parallel),
            ),
            None => Solver::Conservative(
                Conservative::new(grid, bc, tau)
                    .with_epsilon(cfg.weno_eps)
                    .parallel(cfg.parallel),
            ),
        })
    }

    pub fn grid(&self) -> &PhaseGrid {
        match self {
            Solver::SemiLagrangian(s) => s.grid(),
            Solver::Conservative(s) => s.grid(),
        }
    }

    pub fn step(&self, f: &DistributionFunction, dt: f64) -> Result<DistributionFunction> {
        match self {
            Solver::SemiLagrangian(s) => s.advance_step(f, dt),
            Solver::Conservative(s) => s.advance_step(f, dt),
        }
    }
}

/// Initial distribution of the configured test on `grid`.
pub fn initial_condition(cfg: &SolverConfig, grid: &PhaseGrid) -> Result<DistributionFunction> {
    match cfg.test_case() {
        TestCase::Test1 { sigma } => init_test1(sigma, grid),
        TestCase::Riemann {
            left,
            right,
            x_split,
        } => init_riemann(left, right, x_split, grid),
    }
}

/// Number of steps to reach `t_final` with nominal step `dt`. A ratio within
/// 1e-9 of an integer is taken as that integer so the last step is not a
/// round-off sliver.
pub fn step_count(t_final: f64, dt: f64) -> usize {
    if t_final <= 0.0 {
        return 0;
    }
    let r = t_final / dt;
    let n = r.round();
    if (r - n).abs() <= 1e-9 * r.max(1.0) && n >= 1.0 {
        n as usize
    } else {
        r.ceil() as usize
    }
}

/// Step sizes summing to exactly `t_final`: nominal steps, last one clipped.
pub fn step_sizes(t_final: f64, dt: f64) -> Vec<f64> {
    let n = step_count(t_final, dt);
    (0..n)
        .map(|k| {
            if k + 1 == n {
                t_final - k as f64 * dt
            } else {
                dt
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub scheme: Scheme,
    pub cfl: f64,
    /// Relaxation model, e.g. `constant(0.01)`.
    pub tau: String,
    pub n_x: usize,
    pub n_v: usize,
    pub dt: f64,
    pub t_final: f64,
    pub steps: usize,
    pub wall_time_s: f64,
    pub initial_totals: Moments,
    pub final_totals: Moments,
    pub conservation: ConservationDrift,
    /// Interior node positions.
    #[serde(skip)]
    pub x: Vec<f64>,
    #[serde(skip)]
    pub fields: MacroFields,
    /// `(t, H)` after the initial state and every step.
    #[serde(skip)]
    pub entropy: Vec<(f64, f64)>,
}

impl RunReport {
    /// Largest per-step entropy increase (zero for a non-increasing series).
    pub fn max_entropy_increase(&self) -> f64 {
        self.entropy
            .windows(2)
            .map(|w| w[1].1 - w[0].1)
            .fold(0.0, f64::max)
    }
}

/// A finished run: the report together with the final distribution.
#[derive(Debug, Clone)]
pub struct Simulation {
    pub report: RunReport,
    pub grid: PhaseGrid,
    pub f: DistributionFunction,
}

fn space_rule(bc: &BoundaryCondition) -> SpaceRule {
    match bc {
        BoundaryCondition::Periodic => SpaceRule::Periodic,
        BoundaryCondition::PrescribedMoments { .. } => SpaceRule::Gregory,
    }
}

fn describe_tau(cfg: &SolverConfig) -> String {
    match cfg.tau_model() {
        crate::phase_grid::TauModel::Constant(t) => format!("constant({t:e})"),
        crate::phase_grid::TauModel::PowerLaw { c, delta } => {
            format!("power_law(c={c:e}, delta={delta})")
        }
    }
}

/// Run the configured problem to `t_final`.
pub fn simulate(cfg: &SolverConfig) -> Result<Simulation> {
    cfg.validate()?;
    let start = Instant::now();
    let solver = Solver::from_config(cfg)?;
    let grid = solver.grid().clone();
    let rule = space_rule(&cfg.boundary());
    let dt = cfg.dt();

    let mut f = initial_condition(cfg, &grid)?;
    let initial_totals = total_moments(&f, &grid);
    let mut series = vec![(0.0, entropy(&f, &grid, rule))];

    let sizes = step_sizes(cfg.t_final, dt);
    let mut t = 0.0;
    for (k, &h) in sizes.iter().enumerate() {
        f = solver.step(&f, h).map_err(|e| e.at_step(k, t))?;
        t = if k + 1 == sizes.len() {
            cfg.t_final
        } else {
            (k + 1) as f64 * dt
        };
        series.push((t, entropy(&f, &grid, rule)));
    }

    let final_totals = total_moments(&f, &grid);
    let fields = macro_fields(&f, &grid)?;
    let report = RunReport {
        scheme: cfg.scheme,
        cfl: cfg.cfl,
        tau: describe_tau(cfg),
        n_x: cfg.n_x,
        n_v: cfg.n_v,
        dt,
        t_final: t,
        steps: sizes.len(),
        wall_time_s: start.elapsed().as_secs_f64(),
        initial_totals,
        final_totals,
        conservation: conservation_error(initial_totals, final_totals),
        x: grid.positions(),
        fields,
        entropy: series,
    };
    Ok(Simulation { report, grid, f })
}

/// Run the configured problem and return only its report.
pub fn run(cfg: &SolverConfig) -> Result<RunReport> {
    Ok(simulate(cfg)?.report)
}
