//! Initial data of the two benchmark problems.

use crate::error::Result;
use crate::phase_grid::{DistributionFunction, MacroState, Maxwellian, PhaseGrid};

/// Initial velocity of the smooth test,
/// `u₀(x) = (exp(−(σx − 1)²) − 2 exp(−(σx + 3)²))/σ`.
pub fn test1_velocity(sigma: f64, x: f64) -> f64 {
    let a = sigma * x - 1.0;
    let b = sigma * x + 3.0;
    ((-a * a).exp() - 2.0 * (-b * b).exp()) / sigma
}

/// Local Maxwellian with `ρ = 1`, `T = 1` and velocity [`test1_velocity`].
pub fn init_test1(sigma: f64, grid: &PhaseGrid) -> Result<DistributionFunction> {
    let mut f = DistributionFunction::zeros(grid);
    for (i, node) in f.interior_nodes_mut().enumerate() {
        let u = test1_velocity(sigma, grid.x(i as isize));
        Maxwellian::new(MacroState::new(1.0, u, 1.0))?.fill(grid.velocities(), node);
    }
    Ok(f)
}

/// Left state strictly left of `x_split`, right state from `x_split` on.
pub fn init_riemann(
    left: MacroState,
    right: MacroState,
    x_split: f64,
    grid: &PhaseGrid,
) -> Result<DistributionFunction> {
    let ml = Maxwellian::new(left)?;
    let mr = Maxwellian::new(right)?;
    let mut f = DistributionFunction::zeros(grid);
    for (i, node) in f.interior_nodes_mut().enumerate() {
        let m = if grid.x(i as isize) < x_split { &ml } else { &mr };
        m.fill(grid.velocities(), node);
    }
    Ok(f)
}

/// Default Sod-type states `(ρ, u, T)`: `(1, 0, 1)` and `(0.125, 0, 0.8)`.
pub fn sod_states() -> (MacroState, MacroState) {
    (
        MacroState::new(1.0, 0.0, 1.0),
        MacroState::new(0.125, 0.0, 0.8),
    )
}
