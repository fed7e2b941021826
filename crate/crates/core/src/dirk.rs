//! L-stable diagonally implicit Runge–Kutta tableaux for the relaxation term
//! and the closed-form solution of one implicit relaxation stage.
//!
//! A stage `F = f* + a·Δt/τ·(M[F] − F)` is solved without iteration: the
//! relaxation operator has zero moments, so `F` and `f*` share their moments
//! and `M[F] = M[f*]` is known before `F` is.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::phase_grid::{fields_from_moments, moments, tau_eval, Maxwellian, PhaseGrid, TauModel};

/// Named DIRK schemes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TableauKind {
    /// Implicit Euler.
    S1,
    /// Two stages, second order (`α = 1 − √2/2`).
    S2,
    /// Three stages, third order.
    S3,
}

impl std::fmt::Display for TableauKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            TableauKind::S1 => "S1",
            TableauKind::S2 => "S2",
            TableauKind::S3 => "S3",
        };
        f.write_str(s)
    }
}

pub const S2_ALPHA: f64 = 1.0 - std::f64::consts::FRAC_1_SQRT_2;
/// Root of `γ³ − 3γ² + 3γ/2 − 1/6 = 0` near 0.4359 (printed as 0.4358665215).
pub const S3_GAMMA: f64 = 0.435_866_521_508_459;
/// `(6γ² − 20γ + 5)/4`, the value that makes S3 third order. The commonly
/// printed −0.644373171 misses the order conditions by ~3e-6.
pub const S3_DELTA: f64 = -0.644_363_170_684_469;

/// Lower-triangular Butcher tableau `(A, c, w)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ButcherTableau {
    kind: TableauKind,
    a: Vec<Vec<f64>>,
    c: Vec<f64>,
    w: Vec<f64>,
}

impl ButcherTableau {
    pub fn new(kind: TableauKind) -> Self {
        match kind {
            TableauKind::S1 => Self {
                kind,
                a: vec![vec![1.0]],
                c: vec![1.0],
                w: vec![1.0],
            },
            TableauKind::S2 => {
                let al = S2_ALPHA;
                Self {
                    kind,
                    a: vec![vec![al], vec![1.0 - al, al]],
                    c: vec![al, 1.0],
                    w: vec![1.0 - al, al],
                }
            }
            TableauKind::S3 => {
                let (g, d) = (S3_GAMMA, S3_DELTA);
                Self {
                    kind,
                    a: vec![
                        vec![g],
                        vec![(1.0 - g) / 2.0, g],
                        vec![1.0 - d - g, d, g],
                    ],
                    c: vec![g, (1.0 + g) / 2.0, 1.0],
                    w: vec![1.0 - d - g, d, g],
                }
            }
        }
    }

    pub fn kind(&self) -> TableauKind {
        self.kind
    }

    pub fn stages(&self) -> usize {
        self.c.len()
    }

    /// `a_{lk}` (zero above the diagonal), zero-based indices.
    pub fn a(&self, l: usize, k: usize) -> f64 {
        self.a[l].get(k).copied().unwrap_or(0.0)
    }

    pub fn diag(&self, l: usize) -> f64 {
        self.a[l][l]
    }

    pub fn c(&self) -> &[f64] {
        &self.c
    }

    pub fn w(&self) -> &[f64] {
        &self.w
    }

    /// Last row of `A` equals `w` and `c_s = 1`: the step result is the last stage.
    pub fn is_stiffly_accurate(&self) -> bool {
        let s = self.stages();
        self.c[s - 1] == 1.0 && (0..s).all(|k| self.a(s - 1, k) == self.w[k])
    }
}

/// Solve one implicit relaxation stage in place of `out`:
/// `F_j = (τ·f*_j + h·M_j)/(τ + h)`, `h = a_ll·Δt`, with `M` and `τ` built from
/// the moments of `f*`.
///
/// An infinite constant `τ` (or `h = 0`) returns `f*` untouched and skips the
/// moment inversion entirely.
pub fn implicit_relax_into(
    f_star: &[f64],
    step: f64,
    tau: TauModel,
    grid: &PhaseGrid,
    out: &mut [f64],
) -> Result<()> {
    if step == 0.0 || tau == TauModel::Constant(f64::INFINITY) {
        out.copy_from_slice(f_star);
        return Ok(());
    }
    let state = fields_from_moments(moments(f_star, grid))?;
    let tau = tau_eval(tau, state.rho, state.temperature)?;
    let m = Maxwellian::new(state)?;
    let denom = tau + step;
    for ((o, &fs), &v) in out.iter_mut().zip(f_star).zip(grid.velocities()) {
        *o = (tau * fs + step * m.eval(v)) / denom;
    }
    Ok(())
}

pub fn implicit_relax(f_star: &[f64], step: f64, tau: TauModel, grid: &PhaseGrid) -> Result<Vec<f64>> {
    let mut out = vec![0.0; f_star.len()];
    implicit_relax_into(f_star, step, tau, grid, &mut out)?;
    Ok(out)
}

/// Relaxation increment of a stage, `Δt/τ·(M[F] − F) = (F − f*)/a_ll`.
///
/// This is finite as `τ → 0`, unlike the right-hand form.
pub fn stage_flux(stage: &[f64], f_star: &[f64], a_ll: f64) -> Vec<f64> {
    stage
        .iter()
        .zip(f_star)
        .map(|(&f, &s)| (f - s) / a_ll)
        .collect()
}

/// Integrate the space-homogeneous relaxation `df/dt = (M[f] − f)/τ` with
/// `n_steps` DIRK steps of size `dt`.
pub fn ode_relax_solve(
    f0: &[f64],
    tau: TauModel,
    dt: f64,
    n_steps: usize,
    tableau: &ButcherTableau,
    grid: &PhaseGrid,
) -> Result<Vec<f64>> {
    let s = tableau.stages();
    let n = f0.len();
    let mut f = f0.to_vec();
    let mut fluxes = vec![vec![0.0; n]; s];
    let mut f_star = vec![0.0; n];
    let mut stage = vec![0.0; n];
    for _ in 0..n_steps {
        for l in 0..s {
            f_star.copy_from_slice(&f);
            for (k, flux) in fluxes.iter().enumerate().take(l) {
                let a = tableau.a(l, k);
                for (fs, &kv) in f_star.iter_mut().zip(flux) {
                    *fs += a * kv;
                }
            }
            let a_ll = tableau.diag(l);
            implicit_relax_into(&f_star, a_ll * dt, tau, grid, &mut stage)?;
            for ((kv, &fv), &fs) in fluxes[l].iter_mut().zip(&stage).zip(&f_star) {
                *kv = (fv - fs) / a_ll;
            }
        }
        for (k, flux) in fluxes.iter().enumerate() {
            let wk = tableau.w()[k];
            for (fv, &kv) in f.iter_mut().zip(flux) {
                *fv += wk * kv;
            }
        }
    }
    Ok(f)
}
