//! Phase-space discretization: uniform space and velocity grids, the
//! distribution function storage, velocity moments and the local Maxwellian.
//!
//! Units are nondimensional with the gas constant `R = 1` and one translational
//! degree of freedom, so `E = ½ρu² + ½ρT` and `p = ρT`.

use std::f64::consts::PI;
use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Gas constant in nondimensional units.
pub const GAS_CONSTANT: f64 = 1.0;

/// Uniform grid in space and velocity.
///
/// Space nodes are `x_i = x_min + i·Δx` for `i = 0..n_x` with
/// `Δx = (x_max − x_min)/n_x`, i.e. the node at `x_max` is not stored. Halving
/// `Δx` therefore keeps every coarse node on the fine grid, and under periodic
/// boundaries `x_max` is identified with `x_min`.
///
/// Velocity nodes are `v_j = j·Δv` for `j = −n_v..=n_v`, `Δv = v_bound/n_v`,
/// stored at offset `j + n_v`. The grid always contains `v = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseGrid {
    x_min: f64,
    x_max: f64,
    n_x: usize,
    dx: f64,
    v_bound: f64,
    n_v: usize,
    dv: f64,
    ghost: usize,
    velocities: Vec<f64>,
}

impl PhaseGrid {
    pub fn new(
        x_min: f64,
        x_max: f64,
        n_x: usize,
        v_bound: f64,
        n_v: usize,
        ghost: usize,
    ) -> Result<Self> {
        if !(x_max > x_min) || !x_min.is_finite() || !x_max.is_finite() {
            return Err(Error::InvalidGrid(format!(
                "space interval [{x_min}, {x_max}] is empty or not finite"
            )));
        }
        if n_x < 2 {
            return Err(Error::InvalidGrid(format!("n_x = {n_x}, need at least 2")));
        }
        if !(v_bound > 0.0) || !v_bound.is_finite() {
            return Err(Error::InvalidGrid(format!("v_bound = {v_bound}")));
        }
        if n_v == 0 {
            return Err(Error::InvalidGrid("n_v must be positive".into()));
        }
        let dx = (x_max - x_min) / n_x as f64;
        let dv = v_bound / n_v as f64;
        let velocities = (0..=2 * n_v)
            .map(|k| (k as isize - n_v as isize) as f64 * dv)
            .collect();
        Ok(Self {
            x_min,
            x_max,
            n_x,
            dx,
            v_bound,
            n_v,
            dv,
            ghost,
            velocities,
        })
    }

    /// Ghost width needed for a run: the interpolation stencil radius plus the
    /// largest characteristic shift in cells.
    pub fn ghost_width_for(cfl: f64, stencil_radius: usize) -> usize {
        stencil_radius + cfl.ceil().max(0.0) as usize
    }

    pub fn with_ghost(&self, ghost: usize) -> Self {
        Self {
            ghost,
            ..self.clone()
        }
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }
    pub fn x_max(&self) -> f64 {
        self.x_max
    }
    pub fn n_x(&self) -> usize {
        self.n_x
    }
    pub fn dx(&self) -> f64 {
        self.dx
    }
    pub fn v_bound(&self) -> f64 {
        self.v_bound
    }
    /// Half-count of velocity nodes; the grid has `2·n_v + 1` nodes.
    pub fn n_v(&self) -> usize {
        self.n_v
    }
    pub fn dv(&self) -> f64 {
        self.dv
    }
    pub fn ghost(&self) -> usize {
        self.ghost
    }
    /// Number of velocity nodes, `2·n_v + 1`.
    pub fn n_vel(&self) -> usize {
        2 * self.n_v + 1
    }
    /// Number of stored space nodes, ghosts included.
    pub fn n_nodes(&self) -> usize {
        self.n_x + 2 * self.ghost
    }
    pub fn velocities(&self) -> &[f64] {
        &self.velocities
    }
    /// Position of space node `i`; negative or `≥ n_x` indices are ghosts.
    pub fn x(&self, i: isize) -> f64 {
        self.x_min + i as f64 * self.dx
    }
    /// Interior node positions.
    pub fn positions(&self) -> Vec<f64> {
        (0..self.n_x as isize).map(|i| self.x(i)).collect()
    }
}

/// Distribution function values over (space node incl. ghosts, velocity node).
///
/// Storage is node-major: the velocity slice of one space node is contiguous.
#[derive(Debug, Clone, PartialEq)]
pub struct DistributionFunction {
    n_x: usize,
    ghost: usize,
    n_vel: usize,
    values: Vec<f64>,
}

impl DistributionFunction {
    pub fn zeros(grid: &PhaseGrid) -> Self {
        Self {
            n_x: grid.n_x(),
            ghost: grid.ghost(),
            n_vel: grid.n_vel(),
            values: vec![0.0; grid.n_nodes() * grid.n_vel()],
        }
    }

    /// Fill interior nodes from `f(x, v)`; ghosts are left at zero.
    pub fn from_fn(grid: &PhaseGrid, mut f: impl FnMut(f64, f64) -> f64) -> Self {
        let mut out = Self::zeros(grid);
        for i in 0..grid.n_x() {
            let x = grid.x(i as isize);
            for (j, &v) in grid.velocities().iter().enumerate() {
                out.set(i as isize, j, f(x, v));
            }
        }
        out
    }

    pub fn n_x(&self) -> usize {
        self.n_x
    }
    pub fn ghost(&self) -> usize {
        self.ghost
    }
    pub fn n_vel(&self) -> usize {
        self.n_vel
    }

    pub fn matches(&self, grid: &PhaseGrid) -> bool {
        self.n_x == grid.n_x() && self.ghost == grid.ghost() && self.n_vel == grid.n_vel()
    }

    #[inline]
    fn offset(&self, i: isize) -> usize {
        let k = i + self.ghost as isize;
        debug_assert!(k >= 0 && (k as usize) < self.n_x + 2 * self.ghost);
        k as usize * self.n_vel
    }

    #[inline]
    pub fn get(&self, i: isize, j: usize) -> f64 {
        self.values[self.offset(i) + j]
    }

    #[inline]
    pub fn set(&mut self, i: isize, j: usize, value: f64) {
        let k = self.offset(i) + j;
        self.values[k] = value;
    }

    /// Velocity slice at space node `i` (ghost indices allowed).
    pub fn node(&self, i: isize) -> &[f64] {
        let k = self.offset(i);
        &self.values[k..k + self.n_vel]
    }

    pub fn node_mut(&mut self, i: isize) -> &mut [f64] {
        let k = self.offset(i);
        let n = self.n_vel;
        &mut self.values[k..k + n]
    }

    /// Mutable interior node slices, in order.
    pub fn interior_nodes_mut(&mut self) -> impl Iterator<Item = &mut [f64]> {
        let start = self.ghost * self.n_vel;
        let end = start + self.n_x * self.n_vel;
        self.values[start..end].chunks_exact_mut(self.n_vel)
    }

    pub fn interior_nodes(&self) -> impl Iterator<Item = &[f64]> {
        let start = self.ghost * self.n_vel;
        let end = start + self.n_x * self.n_vel;
        self.values[start..end].chunks_exact(self.n_vel)
    }

    /// Raw storage, ghosts included.
    pub fn as_slice(&self) -> &[f64] {
        &self.values
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn is_finite(&self) -> bool {
        self.interior_nodes().flatten().all(|v| v.is_finite())
    }

    /// Copy of this function re-laid onto a grid with a different ghost width.
    pub fn with_ghost(&self, ghost: usize) -> Self {
        let mut out = Self {
            n_x: self.n_x,
            ghost,
            n_vel: self.n_vel,
            values: vec![0.0; (self.n_x + 2 * ghost) * self.n_vel],
        };
        for i in 0..self.n_x as isize {
            out.node_mut(i).copy_from_slice(self.node(i));
        }
        out
    }
}

/// Velocity moments `(ρ, ρu, E)` of a distribution.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Moments {
    pub density: f64,
    pub momentum: f64,
    pub energy: f64,
}

impl Moments {
    pub fn new(density: f64, momentum: f64, energy: f64) -> Self {
        Self {
            density,
            momentum,
            energy,
        }
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.density, self.momentum, self.energy]
    }
}

impl Add for Moments {
    type Output = Moments;
    fn add(self, o: Moments) -> Moments {
        Moments::new(
            self.density + o.density,
            self.momentum + o.momentum,
            self.energy + o.energy,
        )
    }
}

impl Sub for Moments {
    type Output = Moments;
    fn sub(self, o: Moments) -> Moments {
        Moments::new(
            self.density - o.density,
            self.momentum - o.momentum,
            self.energy - o.energy,
        )
    }
}

impl Mul<f64> for Moments {
    type Output = Moments;
    fn mul(self, s: f64) -> Moments {
        Moments::new(self.density * s, self.momentum * s, self.energy * s)
    }
}

/// Primitive macroscopic state at one space node.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MacroState {
    pub rho: f64,
    pub u: f64,
    pub temperature: f64,
}

impl MacroState {
    pub fn new(rho: f64, u: f64, temperature: f64) -> Self {
        Self {
            rho,
            u,
            temperature,
        }
    }

    /// Total energy `½ρu² + ½ρRT`.
    pub fn energy(&self) -> f64 {
        0.5 * self.rho * self.u * self.u + 0.5 * self.rho * GAS_CONSTANT * self.temperature
    }

    pub fn pressure(&self) -> f64 {
        self.rho * GAS_CONSTANT * self.temperature
    }

    pub fn moments(&self) -> Moments {
        Moments::new(self.rho, self.rho * self.u, self.energy())
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rho > 0.0) || !self.rho.is_finite() {
            return Err(Error::NonPositiveDensity(self.rho));
        }
        if !(self.temperature > 0.0) || !self.temperature.is_finite() {
            return Err(Error::NonPositiveTemperature(self.temperature));
        }
        if !self.u.is_finite() {
            return Err(Error::Domain(format!("velocity {}", self.u)));
        }
        Ok(())
    }
}

/// Per-node macroscopic fields over the interior of a grid.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct MacroFields {
    pub rho: Vec<f64>,
    pub u: Vec<f64>,
    pub temperature: Vec<f64>,
}

impl MacroFields {
    pub fn len(&self) -> usize {
        self.rho.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rho.is_empty()
    }

    pub fn pressure(&self) -> Vec<f64> {
        self.rho
            .iter()
            .zip(&self.temperature)
            .map(|(r, t)| r * GAS_CONSTANT * t)
            .collect()
    }

    pub fn energy(&self) -> Vec<f64> {
        (0..self.len())
            .map(|i| MacroState::new(self.rho[i], self.u[i], self.temperature[i]).energy())
            .collect()
    }

    pub fn state(&self, i: usize) -> MacroState {
        MacroState::new(self.rho[i], self.u[i], self.temperature[i])
    }

    pub fn push(&mut self, s: MacroState) {
        self.rho.push(s.rho);
        self.u.push(s.u);
        self.temperature.push(s.temperature);
    }
}

/// Macroscopic fields of every interior node of `f`.
pub fn macro_fields(f: &DistributionFunction, grid: &PhaseGrid) -> Result<MacroFields> {
    let mut out = MacroFields::default();
    for (i, slice) in f.interior_nodes().enumerate() {
        let m = moments(slice, grid);
        out.push(fields_from_moments(m).map_err(|e| e.at_node(i))?);
    }
    Ok(out)
}

/// Local Maxwellian `ρ/√(2πRT)·exp(−(v−u)²/(2RT))`.
pub fn maxwellian(rho: f64, u: f64, temperature: f64, v: f64) -> Result<f64> {
    Ok(Maxwellian::new(MacroState::new(rho, u, temperature))?.eval(v))
}

/// A Maxwellian with its normalization precomputed, for evaluation on a whole
/// velocity grid.
#[derive(Debug, Clone, Copy)]
pub struct Maxwellian {
    u: f64,
    prefactor: f64,
    inv_two_rt: f64,
}

impl Maxwellian {
    pub fn new(state: MacroState) -> Result<Self> {
        if !(state.rho > 0.0) || !state.rho.is_finite() {
            return Err(Error::NonPositiveDensity(state.rho));
        }
        if !(state.temperature > 0.0) || !state.temperature.is_finite() {
            return Err(Error::NonPositiveTemperature(state.temperature));
        }
        let rt = GAS_CONSTANT * state.temperature;
        Ok(Self {
            u: state.u,
            prefactor: state.rho / (2.0 * PI * rt).sqrt(),
            inv_two_rt: 0.5 / rt,
        })
    }

    #[inline]
    pub fn eval(&self, v: f64) -> f64 {
        let c = v - self.u;
        self.prefactor * (-c * c * self.inv_two_rt).exp()
    }

    /// Fill `out[j] = M(v_j)`.
    pub fn fill(&self, velocities: &[f64], out: &mut [f64]) {
        for (o, &v) in out.iter_mut().zip(velocities) {
            *o = self.eval(v);
        }
    }
}

/// Discrete moments by plain summation quadrature over the velocity grid.
pub fn moments(f_slice: &[f64], grid: &PhaseGrid) -> Moments {
    debug_assert_eq!(f_slice.len(), grid.n_vel());
    let mut rho = 0.0;
    let mut mom = 0.0;
    let mut en = 0.0;
    for (&f, &v) in f_slice.iter().zip(grid.velocities()) {
        rho += f;
        mom += v * f;
        en += v * v * f;
    }
    let dv = grid.dv();
    Moments::new(rho * dv, mom * dv, 0.5 * en * dv)
}

/// Invert `(ρ, ρu, E)` to `(ρ, u, T)`.
pub fn fields_from_moments(m: Moments) -> Result<MacroState> {
    let rho = m.density;
    if !(rho > 0.0) || !rho.is_finite() {
        return Err(Error::NonPositiveDensity(rho));
    }
    let u = m.momentum / rho;
    let temperature = (2.0 * m.energy / rho - u * u) / GAS_CONSTANT;
    if !(temperature > 0.0) || !temperature.is_finite() {
        return Err(Error::NonPositiveTemperature(temperature));
    }
    Ok(MacroState::new(rho, u, temperature))
}

/// Relaxation time law.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum TauModel {
    /// Fixed relaxation time. `f64::INFINITY` disables relaxation (free transport).
    Constant(f64),
    /// `τ⁻¹ = c·ρ·T^(1−δ)`, with the exponent taken literally.
    PowerLaw { c: f64, delta: f64 },
}

impl TauModel {
    pub fn validate(&self) -> Result<()> {
        match *self {
            TauModel::Constant(t) if t > 0.0 => Ok(()),
            TauModel::Constant(t) => Err(Error::Domain(format!("relaxation time {t}"))),
            TauModel::PowerLaw { c, delta } if c > 0.0 && delta.is_finite() => Ok(()),
            TauModel::PowerLaw { c, delta } => Err(Error::Domain(format!(
                "power-law relaxation c = {c}, delta = {delta}"
            ))),
        }
    }

    pub fn is_constant(&self) -> bool {
        matches!(self, TauModel::Constant(_))
    }
}

pub fn tau_eval(model: TauModel, rho: f64, temperature: f64) -> Result<f64> {
    if !(rho > 0.0) {
        return Err(Error::NonPositiveDensity(rho));
    }
    if !(temperature > 0.0) {
        return Err(Error::NonPositiveTemperature(temperature));
    }
    match model {
        TauModel::Constant(t) => Ok(t),
        TauModel::PowerLaw { c, delta } => Ok(1.0 / (c * rho * temperature.powf(1.0 - delta))),
    }
}
