//! Entropy, conservation and error measurements.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::phase_grid::{moments, DistributionFunction, MacroFields, Moments, PhaseGrid};

/// Lower clamp applied to `f` before taking its logarithm.
pub const ENTROPY_CLAMP: f64 = 1e-300;

/// Space quadrature used for integrals over the interior nodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpaceRule {
    /// Fourth-order end-corrected trapezoidal rule over `[x_0, x_{n−1}]`.
    /// Interior weights are all one, so a profile translating by whole cells
    /// keeps its integral.
    Gregory,
    /// Rectangle rule over one full period.
    Periodic,
}

/// Quadrature weights (without the `Δx` factor) for `n` nodes.
pub fn space_weights(n: usize, rule: SpaceRule) -> Vec<f64> {
    let mut w = vec![1.0; n];
    if rule == SpaceRule::Gregory {
        assert!(n >= 6, "fourth-order end correction needs at least 6 nodes");
        let ends = [3.0 / 8.0, 7.0 / 6.0, 23.0 / 24.0];
        for (k, &e) in ends.iter().enumerate() {
            w[k] = e;
            w[n - 1 - k] = e;
        }
    }
    w
}

/// `⟨f log f⟩` at every interior node.
pub fn entropy_density(f: &DistributionFunction, grid: &PhaseGrid) -> Vec<f64> {
    f.interior_nodes()
        .map(|node| {
            let s: f64 = node
                .iter()
                .map(|&v| {
                    let v = v.max(ENTROPY_CLAMP);
                    v * v.ln()
                })
                .sum();
            s * grid.dv()
        })
        .collect()
}

/// Total entropy `H = ∫⟨f log f⟩ dx`.
pub fn entropy(f: &DistributionFunction, grid: &PhaseGrid, rule: SpaceRule) -> f64 {
    let h = entropy_density(f, grid);
    let w = space_weights(h.len(), rule);
    h.iter().zip(&w).map(|(a, b)| a * b).sum::<f64>() * grid.dx()
}

/// `Σ_i Σ_j φ(v_j) f_ij Δx Δv` over the interior.
pub fn total_moments(f: &DistributionFunction, grid: &PhaseGrid) -> Moments {
    f.interior_nodes()
        .map(|node| moments(node, grid))
        .fold(Moments::default(), |a, b| a + b)
        * grid.dx()
}

/// Relative change of the conserved totals between two states.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ConservationDrift {
    pub mass: f64,
    /// Momentum change divided by the initial mass (momentum may vanish).
    pub momentum: f64,
    pub energy: f64,
}

impl ConservationDrift {
    pub fn max(&self) -> f64 {
        self.mass.max(self.momentum).max(self.energy)
    }
}

pub fn conservation_error(initial: Moments, last: Moments) -> ConservationDrift {
    ConservationDrift {
        mass: ((last.density - initial.density) / initial.density).abs(),
        momentum: ((last.momentum - initial.momentum) / initial.density).abs(),
        energy: ((last.energy - initial.energy) / initial.energy).abs(),
    }
}

/// Subsample fine-grid fields onto a nested coarse grid.
pub fn restrict(fine: &MacroFields, n_coarse: usize) -> Result<MacroFields> {
    let n_fine = fine.len();
    if n_coarse == 0 || !n_fine.is_multiple_of(n_coarse) {
        return Err(Error::GridNesting(format!(
            "{n_coarse} nodes do not nest in {n_fine}"
        )));
    }
    let r = n_fine / n_coarse;
    let pick = |v: &[f64]| v.iter().step_by(r).copied().collect::<Vec<_>>();
    Ok(MacroFields {
        rho: pick(&fine.rho),
        u: pick(&fine.u),
        temperature: pick(&fine.temperature),
    })
}

/// `‖a − b‖₂/‖b‖₂`.
pub fn relative_l2(a: &[f64], b: &[f64]) -> f64 {
    let num: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
    let den: f64 = b.iter().map(|y| y * y).sum();
    (num / den).sqrt()
}

/// Largest absolute difference per field `(ρ, u, T)`.
pub fn linf_difference(a: &MacroFields, b: &MacroFields) -> [f64; 3] {
    let d = |x: &[f64], y: &[f64]| {
        x.iter()
            .zip(y)
            .map(|(p, q)| (p - q).abs())
            .fold(0.0, f64::max)
    };
    [
        d(&a.rho, &b.rho),
        d(&a.u, &b.u),
        d(&a.temperature, &b.temperature),
    ]
}

pub fn observed_order(err_coarse: f64, err_fine: f64) -> f64 {
    (err_coarse / err_fine).log2()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorRow {
    pub n_x: usize,
    /// Relative L2 errors of `(ρ, u, T)`.
    pub errors: [f64; 3],
    /// Orders against the previous (coarser) row.
    pub orders: Option<[f64; 3]>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ErrorTable {
    pub rows: Vec<ErrorRow>,
}

impl ErrorTable {
    pub fn row(&self, n_x: usize) -> Option<&ErrorRow> {
        self.rows.iter().find(|r| r.n_x == n_x)
    }
}

/// Relative L2 errors of coarse runs against a nested reference, with the
/// observed orders between successive resolutions. `runs` must be sorted by
/// increasing `n_x`.
pub fn error_table(runs: &[(usize, MacroFields)], reference: &MacroFields) -> Result<ErrorTable> {
    let mut rows: Vec<ErrorRow> = Vec::with_capacity(runs.len());
    for (n_x, fields) in runs {
        if fields.len() != *n_x {
            return Err(Error::GridNesting(format!(
                "run labelled {n_x} has {} nodes",
                fields.len()
            )));
        }
        let r = restrict(reference, *n_x)?;
        let errors = [
            relative_l2(&fields.rho, &r.rho),
            relative_l2(&fields.u, &r.u),
            relative_l2(&fields.temperature, &r.temperature),
        ];
        let orders = rows.last().map(|prev| {
            let mut o = [0.0; 3];
            for k in 0..3 {
                o[k] = observed_order(prev.errors[k], errors[k]) / (*n_x as f64 / prev.n_x as f64).log2();
            }
            o
        });
        rows.push(ErrorRow {
            n_x: *n_x,
            errors,
            orders,
        });
    }
    Ok(ErrorTable { rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phase_grid::{MacroState, Maxwellian};

    #[test]
    fn gregory_is_exact_on_cubics() {
        let n = 11;
        let h = 0.1;
        let w = space_weights(n, SpaceRule::Gregory);
        let p = |x: f64| 1.0 - 2.0 * x + 0.5 * x * x + 3.0 * x * x * x;
        let q: f64 = (0..n).map(|i| w[i] * p(i as f64 * h)).sum::<f64>() * h;
        let exact = 1.0 - 1.0 + 0.5 / 3.0 + 0.75;
        assert!((q - exact).abs() < 1e-13, "{q} vs {exact}");
    }

    #[test]
    fn entropy_of_uniform_maxwellian() {
        let g = PhaseGrid::new(-1.0, 1.0, 32, 10.0, 20, 0).unwrap();
        let m = Maxwellian::new(MacroState::new(1.0, 0.0, 1.0)).unwrap();
        let f = DistributionFunction::from_fn(&g, |_, v| m.eval(v));
        let per_node: f64 = g.velocities().iter().map(|&v| m.eval(v) * m.eval(v).ln()).sum::<f64>() * g.dv();
        let span = (g.n_x() - 1) as f64 * g.dx();
        assert!((entropy(&f, &g, SpaceRule::Gregory) - span * per_node).abs() < 1e-13);
        // continuous value −(1 + ln 2π)/2 per unit length
        assert!((per_node + 0.5 * (1.0 + (2.0 * std::f64::consts::PI).ln())).abs() < 1e-10);
        assert!((entropy(&f, &g, SpaceRule::Periodic) - 2.0 * per_node).abs() < 1e-13);
    }

    #[test]
    fn entropy_scaling_identity() {
        let g = PhaseGrid::new(-1.0, 1.0, 16, 10.0, 20, 0).unwrap();
        let f = DistributionFunction::from_fn(&g, |x, v| {
            Maxwellian::new(MacroState::new(1.0 + 0.3 * x, 0.1, 1.0)).unwrap().eval(v)
        });
        let mut f2 = f.clone();
        f2.as_mut_slice().iter_mut().for_each(|v| *v *= 2.0);
        let h = entropy(&f, &g, SpaceRule::Gregory);
        let h2 = entropy(&f2, &g, SpaceRule::Gregory);
        let w = space_weights(16, SpaceRule::Gregory);
        let mass: f64 = f
            .interior_nodes()
            .zip(&w)
            .map(|(n, wi)| wi * moments(n, &g).density)
            .sum::<f64>()
            * g.dx();
        assert!((h2 - (2.0 * h + 2.0 * 2f64.ln() * mass)).abs() < 1e-12);
    }

    #[test]
    fn entropy_with_zeros_is_finite() {
        let g = PhaseGrid::new(-1.0, 1.0, 8, 10.0, 2, 0).unwrap();
        let f = DistributionFunction::from_fn(&g, |_, v| if v == 0.0 { 0.0 } else { 0.1 });
        assert!(entropy(&f, &g, SpaceRule::Gregory).is_finite());
    }

    #[test]
    fn identical_states_have_no_drift() {
        let m = Moments::new(2.0, 0.0, 1.0);
        assert_eq!(conservation_error(m, m), ConservationDrift::default());
    }

    #[test]
    fn manufactured_second_order_error() {
        let n_ref = 1280;
        let xs = |n: usize| (0..n).map(move |i| -1.0 + 2.0 * i as f64 / n as f64);
        let q = |x: f64| 1.0 + 0.5 * (std::f64::consts::PI * x).sin();
        let g = |x: f64| (3.0 * x).cos();
        let reference = MacroFields {
            rho: xs(n_ref).map(q).collect(),
            u: xs(n_ref).map(|x| 0.2 + q(x)).collect(),
            temperature: xs(n_ref).map(|x| 2.0 * q(x)).collect(),
        };
        let runs: Vec<(usize, MacroFields)> = [20usize, 40, 80, 160, 320]
            .iter()
            .map(|&n| {
                let dx = 2.0 / n as f64;
                let e = |x: f64| dx * dx * g(x);
                let f = MacroFields {
                    rho: xs(n).map(|x| q(x) + e(x)).collect(),
                    u: xs(n).map(|x| 0.2 + q(x) + e(x)).collect(),
                    temperature: xs(n).map(|x| 2.0 * q(x) + e(x)).collect(),
                };
                (n, f)
            })
            .collect();
        let table = error_table(&runs, &reference).unwrap();
        for row in &table.rows[1..] {
            for o in row.orders.unwrap() {
                assert!((o - 2.0).abs() < 0.05, "{o}");
            }
        }
        let same = error_table(&[(20, restrict(&reference, 20).unwrap())], &reference).unwrap();
        assert_eq!(same.rows[0].errors, [0.0; 3]);
        assert!(matches!(restrict(&reference, 300), Err(Error::GridNesting(_))));
    }
}
