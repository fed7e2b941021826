//! Non-conservative semi-Lagrangian BGK solver.
//!
//! Each velocity node is transported exactly along its characteristic
//! `x(t) = x̃ + v t`; only the foot-point values need interpolation. The
//! relaxation is integrated along characteristics with a DIRK tableau whose
//! implicit stages are solved in closed form (see [`crate::dirk`]).
//!
//! Stage geometry: a field known at time `tⁿ + c_k Δt` is read at
//! `x − v (c_l − c_k) Δt` when assembling stage `l` at node `x`, and at
//! `x − v (1 − c_k) Δt` for the final combination at `tⁿ⁺¹`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dirk::{implicit_relax_into, ButcherTableau};
use crate::error::{Error, Result};
use crate::phase_grid::{DistributionFunction, MacroState, Maxwellian, PhaseGrid, TauModel};
use crate::weno::PointwiseWeno;

/// Boundary treatment for the ghost region.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum BoundaryCondition {
    /// Ghost nodes hold the Maxwellian of fixed macroscopic states.
    PrescribedMoments { left: MacroState, right: MacroState },
    /// Wrap-around; `x_max` is identified with `x_min`.
    Periodic,
}

impl BoundaryCondition {
    pub fn validate(&self) -> Result<()> {
        if let BoundaryCondition::PrescribedMoments { left, right } = self {
            left.validate()?;
            right.validate()?;
        }
        Ok(())
    }

    /// Fill ghost nodes of a distribution function.
    pub fn fill_ghosts(&self, f: &mut DistributionFunction, grid: &PhaseGrid) -> Result<()> {
        match *self {
            BoundaryCondition::PrescribedMoments { left, right } => {
                let ml = Maxwellian::new(left)?;
                let mr = Maxwellian::new(right)?;
                let g = grid.ghost() as isize;
                let n = grid.n_x() as isize;
                for i in -g..0 {
                    ml.fill(grid.velocities(), f.node_mut(i));
                }
                for i in n..n + g {
                    mr.fill(grid.velocities(), f.node_mut(i));
                }
                Ok(())
            }
            BoundaryCondition::Periodic => {
                wrap_ghosts(f, grid);
                Ok(())
            }
        }
    }

    /// Fill ghost nodes of a relaxation-increment field. The prescribed
    /// boundary states are equilibria, so their increment is zero.
    pub fn fill_increment_ghosts(&self, k: &mut DistributionFunction, grid: &PhaseGrid) {
        match self {
            BoundaryCondition::PrescribedMoments { .. } => {
                let g = grid.ghost() as isize;
                let n = grid.n_x() as isize;
                for i in (-g..0).chain(n..n + g) {
                    k.node_mut(i).fill(0.0);
                }
            }
            BoundaryCondition::Periodic => wrap_ghosts(k, grid),
        }
    }
}

fn wrap_ghosts(f: &mut DistributionFunction, grid: &PhaseGrid) {
    let g = grid.ghost() as isize;
    let n = grid.n_x() as isize;
    assert!(g <= n, "periodic ghost width {g} exceeds the {n} interior nodes");
    let nv = grid.n_vel();
    let mut buf = vec![0.0; nv];
    for i in -g..0 {
        buf.copy_from_slice(f.node(i + n));
        f.node_mut(i).copy_from_slice(&buf);
    }
    for i in n..n + g {
        buf.copy_from_slice(f.node(i - n));
        f.node_mut(i).copy_from_slice(&buf);
    }
}

/// Upstream point of the characteristic through `x`: `x − v·Δt_back`.
pub fn foot_point(x: f64, v: f64, dt_back: f64) -> f64 {
    x - v * dt_back
}

/// Foot points closer than this (in cells) to a node are snapped onto it.
const NODE_SNAP: f64 = 1e-10;

/// Containing cell and local coordinate of a fractional node index.
#[derive(Debug, Clone, Copy, PartialEq)]
struct CellPoint {
    cell: isize,
    theta: f64,
}

impl CellPoint {
    fn locate(index: f64) -> Self {
        let r = index.round();
        if (index - r).abs() < NODE_SNAP {
            return CellPoint {
                cell: r as isize,
                theta: 0.0,
            };
        }
        let base = index.floor();
        CellPoint {
            cell: base as isize,
            theta: index - base,
        }
    }
}

fn coverage_error(index: f64, grid: &PhaseGrid) -> Error {
    let g = grid.ghost() as isize;
    Error::OutOfCoverage {
        position: index,
        lo: -g,
        hi: grid.n_x() as isize - 1 + g,
    }
}

/// Interpolate a single-velocity field (one value per stored node, ghosts
/// included, ordered from the leftmost ghost) at `x_target`.
pub fn interpolate_field(
    field: &[f64],
    grid: &PhaseGrid,
    x_target: f64,
    interp: PointwiseWeno,
) -> Result<f64> {
    assert_eq!(field.len(), grid.n_nodes());
    let index = (x_target - grid.x_min()) / grid.dx();
    let p = CellPoint::locate(index);
    let g = grid.ghost() as isize;
    let lo = p.cell - interp.radius_left() as isize;
    let hi = p.cell + interp.radius_right() as isize;
    if lo < -g || hi > grid.n_x() as isize - 1 + g {
        return Err(coverage_error(index, grid));
    }
    let start = (lo + g) as usize;
    Ok(interp.interpolate(&field[start..=(hi + g) as usize], p.theta))
}

/// Velocity-major copy of a distribution function: `data[j·n_nodes + node]`.
#[derive(Debug, Clone)]
pub(crate) struct Columns {
    n_nodes: usize,
    data: Vec<f64>,
}

impl Columns {
    pub(crate) fn from_distribution(f: &DistributionFunction) -> Self {
        let n_nodes = f.n_x() + 2 * f.ghost();
        let nv = f.n_vel();
        let mut data = vec![0.0; n_nodes * nv];
        for (node, slice) in f.as_slice().chunks_exact(nv).enumerate() {
            for (j, &v) in slice.iter().enumerate() {
                data[j * n_nodes + node] = v;
            }
        }
        Self { n_nodes, data }
    }

    pub(crate) fn column(&self, j: usize) -> &[f64] {
        &self.data[j * self.n_nodes..(j + 1) * self.n_nodes]
    }
}

/// Read a whole column at foot points shifted by `shift` cells
/// (`x_i − shift·Δx`) and write (or add `scale ×`) into `out[0..n_x]`.
fn shift_column(
    col: &[f64],
    grid: &PhaseGrid,
    shift: f64,
    interp: PointwiseWeno,
    scale: f64,
    accumulate: bool,
    out: &mut [f64],
) -> Result<()> {
    let g = grid.ghost() as isize;
    let n = grid.n_x() as isize;
    let p = CellPoint::locate(-shift);
    let rl = interp.radius_left() as isize;
    let rr = interp.radius_right() as isize;
    let width = (rl + rr + 1) as usize;
    if p.cell - rl < -g || n - 1 + p.cell + rr > n - 1 + g {
        let worst = if shift > 0.0 { -shift } else { (n - 1) as f64 - shift };
        return Err(coverage_error(worst, grid));
    }
    let first = (p.cell - rl + g) as usize;
    for (i, o) in out.iter_mut().enumerate() {
        let s = &col[first + i..first + i + width];
        let value = if p.theta == 0.0 {
            s[rl as usize]
        } else {
            interp.interpolate(s, p.theta)
        };
        if accumulate {
            *o += scale * value;
        } else {
            *o = scale * value;
        }
    }
    Ok(())
}

/// Snapshot of one DIRK stage at the grid nodes (interior only, node-major).
#[derive(Debug, Clone)]
pub struct StageField {
    /// Explicit part `f*` assembled along the characteristics.
    pub explicit: Vec<f64>,
    /// Preliminary stage `F̂`.
    pub stage: Vec<f64>,
    /// Relaxation increment `K̂ = (F̂ − f*)/a_ll`.
    pub flux: Vec<f64>,
}

/// Semi-Lagrangian DIRK solver.
#[derive(Debug, Clone)]
pub struct SemiLagrangian {
    grid: PhaseGrid,
    tableau: ButcherTableau,
    bc: BoundaryCondition,
    tau: TauModel,
    interp: PointwiseWeno,
    parallel: bool,
}

impl SemiLagrangian {
    pub fn new(
        grid: PhaseGrid,
        tableau: ButcherTableau,
        bc: BoundaryCondition,
        tau: TauModel,
        interp: PointwiseWeno,
    ) -> Self {
        Self {
            grid,
            tableau,
            bc,
            tau,
            interp,
            parallel: true,
        }
    }

    /// Toggle rayon parallelism. Results are bitwise identical either way.
    pub fn parallel(mut self, on: bool) -> Self {
        self.parallel = on;
        self
    }

    pub fn grid(&self) -> &PhaseGrid {
        &self.grid
    }

    pub fn tableau(&self) -> &ButcherTableau {
        &self.tableau
    }

    pub fn boundary(&self) -> &BoundaryCondition {
        &self.bc
    }

    pub fn tau(&self) -> TauModel {
        self.tau
    }

    /// Copy of `f` with ghosts filled by the boundary condition.
    pub fn with_ghosts(&self, f: &DistributionFunction) -> Result<DistributionFunction> {
        let mut out = if f.ghost() == self.grid.ghost() {
            f.clone()
        } else {
            f.with_ghost(self.grid.ghost())
        };
        self.bc.fill_ghosts(&mut out, &self.grid)?;
        Ok(out)
    }

    pub fn advance_step(&self, f: &DistributionFunction, dt: f64) -> Result<DistributionFunction> {
        self.step_impl(f, dt, None)
    }

    /// As [`advance_step`](Self::advance_step), also returning every stage.
    pub fn advance_step_traced(
        &self,
        f: &DistributionFunction,
        dt: f64,
    ) -> Result<(DistributionFunction, Vec<StageField>)> {
        let mut trace = Vec::new();
        let out = self.step_impl(f, dt, Some(&mut trace))?;
        Ok((out, trace))
    }

    fn step_impl(
        &self,
        f: &DistributionFunction,
        dt: f64,
        mut trace: Option<&mut Vec<StageField>>,
    ) -> Result<DistributionFunction> {
        if !(dt > 0.0) {
            return Err(Error::Domain(format!("time step {dt}")));
        }
        let grid = &self.grid;
        let (n_x, nv) = (grid.n_x(), grid.n_vel());
        let f_n = self.with_ghosts(f)?;
        let f_cols = Columns::from_distribution(&f_n);
        let c = self.tableau.c();
        let s = self.tableau.stages();
        let cells_per_time: Vec<f64> = grid
            .velocities()
            .iter()
            .map(|&v| v * dt / grid.dx())
            .collect();

        let mut flux_cols: Vec<Columns> = Vec::with_capacity(s);
        // velocity-major interior scratch
        let mut explicit_vm = vec![0.0; nv * n_x];

        for l in 0..s {
            self.for_each_column(&mut explicit_vm, n_x, |j, out| {
                let cpt = cells_per_time[j];
                shift_column(f_cols.column(j), grid, cpt * c[l], self.interp, 1.0, false, out)?;
                for (k, kc) in flux_cols.iter().enumerate() {
                    let a = self.tableau.a(l, k);
                    shift_column(kc.column(j), grid, cpt * (c[l] - c[k]), self.interp, a, true, out)?;
                }
                Ok(())
            })?;
            let explicit = transpose_to_nodes(&explicit_vm, n_x, nv);

            let a_ll = self.tableau.diag(l);
            let mut stage = vec![0.0; n_x * nv];
            let tau = self.tau;
            self.for_each_chunk(&mut stage, nv, |i, out| {
                implicit_relax_into(&explicit[i * nv..(i + 1) * nv], a_ll * dt, tau, grid, out)
                    .map_err(|e| e.at_node(i))
            })?;

            let mut k_field = DistributionFunction::zeros(grid);
            for (i, node) in k_field.interior_nodes_mut().enumerate() {
                for j in 0..nv {
                    node[j] = (stage[i * nv + j] - explicit[i * nv + j]) / a_ll;
                }
            }
            self.bc.fill_increment_ghosts(&mut k_field, grid);
            flux_cols.push(Columns::from_distribution(&k_field));

            if let Some(t) = trace.as_deref_mut() {
                let flux = k_field.interior_nodes().flatten().copied().collect();
                t.push(StageField {
                    explicit,
                    stage,
                    flux,
                });
            }
        }

        let w = self.tableau.w();
        let mut next_vm = vec![0.0; nv * n_x];
        self.for_each_column(&mut next_vm, n_x, |j, out| {
            let cpt = cells_per_time[j];
            shift_column(f_cols.column(j), grid, cpt, self.interp, 1.0, false, out)?;
            for (k, kc) in flux_cols.iter().enumerate() {
                shift_column(kc.column(j), grid, cpt * (1.0 - c[k]), self.interp, w[k], true, out)?;
            }
            Ok(())
        })?;

        let mut out = DistributionFunction::zeros(grid);
        for (i, node) in out.interior_nodes_mut().enumerate() {
            for j in 0..nv {
                node[j] = next_vm[j * n_x + i];
            }
        }
        self.bc.fill_ghosts(&mut out, grid)?;
        Ok(out)
    }

    fn for_each_column<F>(&self, data: &mut [f64], n_x: usize, f: F) -> Result<()>
    where
        F: Fn(usize, &mut [f64]) -> Result<()> + Sync,
    {
        self.for_each_chunk(data, n_x, f)
    }

    fn for_each_chunk<F>(&self, data: &mut [f64], chunk: usize, f: F) -> Result<()>
    where
        F: Fn(usize, &mut [f64]) -> Result<()> + Sync,
    {
        let results: Vec<Result<()>> = if self.parallel {
            data.par_chunks_mut(chunk)
                .enumerate()
                .map(|(i, c)| f(i, c))
                .collect()
        } else {
            data.chunks_mut(chunk).enumerate().map(|(i, c)| f(i, c)).collect()
        };
        results.into_iter().collect()
    }
}

fn transpose_to_nodes(vm: &[f64], n_x: usize, nv: usize) -> Vec<f64> {
    let mut out = vec![0.0; n_x * nv];
    for j in 0..nv {
        for i in 0..n_x {
            out[i * nv + j] = vm[j * n_x + i];
        }
    }
    out
}
