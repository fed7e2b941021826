//! The grid-refinement, CFL, conservation and Riemann studies.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::phase_grid::MacroFields;

use super::config::{Scheme, SolverConfig, TestCase};
use super::diagnostics::{error_table, linf_difference, ConservationDrift, ErrorTable};
use super::reference::ReferenceStore;
use super::riemann::{EulerState, RiemannSolution, Wave, GAMMA_1D};
use super::run::{run, RunReport};

pub const CONVERGENCE_SIZES: [usize; 5] = [20, 40, 80, 160, 320];
pub const REFERENCE_SIZE: usize = 1280;
pub const CFL_SWEEP: [f64; 3] = [1.5, 5.5, 10.5];
pub const CFL_REFERENCE: f64 = 0.5;
pub const CFL_SWEEP_SIZE: usize = 200;
pub const CONSERVATION_SIZES: [usize; 7] = [20, 40, 80, 160, 320, 640, 1280];

fn with_n_x(base: &SolverConfig, n_x: usize) -> SolverConfig {
    SolverConfig {
        n_x,
        ..base.clone()
    }
}

/// Errors of `base` at each of `sizes` against the same configuration at
/// `n_ref` nodes. The reference is cached in `store` when one is given.
pub fn convergence(
    base: &SolverConfig,
    sizes: &[usize],
    n_ref: usize,
    store: Option<&ReferenceStore>,
) -> Result<ErrorTable> {
    let ref_cfg = with_n_x(base, n_ref);
    let reference = match store {
        Some(s) => s.get_or_compute(&ref_cfg)?,
        None => run(&ref_cfg)?.fields,
    };
    let mut sorted = sizes.to_vec();
    sorted.sort_unstable();
    let runs = sorted
        .iter()
        .map(|&n| Ok((n, run(&with_n_x(base, n))?.fields)))
        .collect::<Result<Vec<(usize, MacroFields)>>>()?;
    error_table(&runs, &reference)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CflRow {
    pub scheme: Scheme,
    pub cfl: f64,
    /// Largest absolute difference of `(ρ, u, T)` from the reference run.
    pub errors: [f64; 3],
}

impl CflRow {
    pub fn max(&self) -> f64 {
        self.errors.iter().copied().fold(0.0, f64::max)
    }
}

/// Every scheme at every CFL against the same scheme at `reference_cfl`.
pub fn cfl_sweep(
    base: &SolverConfig,
    schemes: &[Scheme],
    cfls: &[f64],
    reference_cfl: f64,
) -> Result<Vec<CflRow>> {
    let mut rows = Vec::new();
    for &scheme in schemes {
        let reference = run(&SolverConfig {
            scheme,
            cfl: reference_cfl,
            ..base.clone()
        })?
        .fields;
        for &cfl in cfls {
            let r = run(&SolverConfig {
                scheme,
                cfl,
                ..base.clone()
            })?;
            rows.push(CflRow {
                scheme,
                cfl,
                errors: linf_difference(&r.fields, &reference),
            });
        }
    }
    Ok(rows)
}

/// Conservation drift of `base` at each resolution.
pub fn conservation_study(base: &SolverConfig, sizes: &[usize]) -> Result<Vec<(usize, ConservationDrift)>> {
    sizes
        .iter()
        .map(|&n| Ok((n, run(&with_n_x(base, n))?.conservation)))
        .collect()
}

/// Linearly interpolated crossings of `level` by the sampled curve.
pub fn crossings(x: &[f64], y: &[f64], level: f64) -> Vec<f64> {
    let mut out = Vec::new();
    for i in 1..x.len() {
        let (a, b) = (y[i - 1] - level, y[i] - level);
        if a == 0.0 {
            out.push(x[i - 1]);
        } else if a * b < 0.0 {
            out.push(x[i - 1] + (x[i] - x[i - 1]) * a / (a - b));
        }
    }
    out
}

fn nearest(candidates: &[f64], target: f64) -> Option<f64> {
    candidates
        .iter()
        .copied()
        .min_by(|a, b| (a - target).abs().total_cmp(&(b - target).abs()))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RiemannComparison {
    pub dx: f64,
    /// `Δx Σ |ρ − ρ_exact|` over the interior nodes.
    pub l1_density: f64,
    pub shock_exact: f64,
    pub shock_numeric: Option<f64>,
    pub contact_exact: f64,
    pub contact_numeric: Option<f64>,
    pub x: Vec<f64>,
    pub rho: Vec<f64>,
    pub rho_exact: Vec<f64>,
}

impl RiemannComparison {
    pub fn shock_error(&self) -> f64 {
        self.shock_numeric.map_or(f64::INFINITY, |s| (s - self.shock_exact).abs())
    }

    pub fn contact_error(&self) -> f64 {
        self.contact_numeric
            .map_or(f64::INFINITY, |s| (s - self.contact_exact).abs())
    }
}

/// Run a Riemann configuration and compare its density with the exact
/// `γ = 3` Euler solution. Shock and contact positions are taken where the
/// density crosses the midpoint of the jump across each wave; the crossing
/// nearest to the exact position is used.
///
/// Only data with a right-moving shock are supported (the default states).
pub fn riemann_comparison(cfg: &SolverConfig) -> Result<RiemannComparison> {
    compare_riemann(cfg, &run(cfg)?)
}

/// As [`riemann_comparison`], for a run that has already been made.
pub fn compare_riemann(cfg: &SolverConfig, report: &RunReport) -> Result<RiemannComparison> {
    let TestCase::Riemann {
        left,
        right,
        x_split,
    } = cfg.test_case()
    else {
        return Err(crate::Error::Config("riemann comparison needs test = \"riemann\"".into()));
    };
    let sol = RiemannSolution::solve(EulerState::from(left), EulerState::from(right), GAMMA_1D)?;
    let t = report.t_final;
    let exact = sol.profile(&report.x, t, x_split);
    let rho_exact: Vec<f64> = exact.iter().map(|s| s.rho).collect();
    let dx = cfg.grid()?.dx();
    let l1_density = report
        .fields
        .rho
        .iter()
        .zip(&rho_exact)
        .map(|(a, b)| (a - b).abs())
        .sum::<f64>()
        * dx;

    let Wave::Shock { speed } = sol.right_wave else {
        return Err(crate::Error::Config("right wave is not a shock".into()));
    };
    let shock_exact = x_split + speed * t;
    let contact_exact = x_split + sol.u_star * t;
    let rho = report.fields.rho.clone();
    let shock_level = 0.5 * (sol.rho_star_right + sol.right.rho);
    let contact_level = 0.5 * (sol.rho_star_left + sol.rho_star_right);
    let shock_numeric = nearest(&crossings(&report.x, &rho, shock_level), shock_exact);
    let contact_numeric = nearest(&crossings(&report.x, &rho, contact_level), contact_exact);

    Ok(RiemannComparison {
        dx,
        l1_density,
        shock_exact,
        shock_numeric,
        contact_exact,
        contact_numeric,
        x: report.x.clone(),
        rho,
        rho_exact,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn crossing_of_a_ramp() {
        let x = [0.0, 1.0, 2.0, 3.0];
        let y = [1.0, 1.0, 0.0, 0.0];
        assert_eq!(crossings(&x, &y, 0.5), vec![1.5]);
        assert_eq!(crossings(&x, &y, 2.0), Vec::<f64>::new());
        assert_eq!(nearest(&[0.1, 0.9, 2.0], 1.2), Some(0.9));
    }
}
