//! Exact Riemann solver for the 1D Euler equations of an ideal gas.
//!
//! The fluid limit of the BGK model with one translational degree of freedom
//! is the Euler system with `γ = 1 + 2/N = 3`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::phase_grid::MacroState;

/// Adiabatic exponent of the `N = 1` fluid limit.
pub const GAMMA_1D: f64 = 3.0;

const PRESSURE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EulerState {
    pub rho: f64,
    pub u: f64,
    pub p: f64,
}

impl EulerState {
    pub fn new(rho: f64, u: f64, p: f64) -> Self {
        Self { rho, u, p }
    }

    pub fn sound_speed(&self, gamma: f64) -> f64 {
        (gamma * self.p / self.rho).sqrt()
    }
}

impl From<MacroState> for EulerState {
    fn from(s: MacroState) -> Self {
        EulerState::new(s.rho, s.u, s.pressure())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Wave {
    Shock { speed: f64 },
    Rarefaction { head: f64, tail: f64 },
}

/// Solved star region of a Riemann problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RiemannSolution {
    pub gamma: f64,
    pub left: EulerState,
    pub right: EulerState,
    pub p_star: f64,
    pub u_star: f64,
    pub rho_star_left: f64,
    pub rho_star_right: f64,
    pub left_wave: Wave,
    pub right_wave: Wave,
}

/// Pressure function of one side and its derivative.
fn side_function(p: f64, s: &EulerState, gamma: f64) -> (f64, f64) {
    let a = s.sound_speed(gamma);
    if p > s.p {
        let ak = 2.0 / ((gamma + 1.0) * s.rho);
        let bk = (gamma - 1.0) / (gamma + 1.0) * s.p;
        let q = (ak / (p + bk)).sqrt();
        let f = (p - s.p) * q;
        let df = q * (1.0 - 0.5 * (p - s.p) / (p + bk));
        (f, df)
    } else {
        let e = (gamma - 1.0) / (2.0 * gamma);
        let r = p / s.p;
        let f = 2.0 * a / (gamma - 1.0) * (r.powf(e) - 1.0);
        let df = r.powf(-(gamma + 1.0) / (2.0 * gamma)) / (s.rho * a);
        (f, df)
    }
}

impl RiemannSolution {
    pub fn solve(left: EulerState, right: EulerState, gamma: f64) -> Result<Self> {
        for s in [&left, &right] {
            if !(s.rho > 0.0 && s.p > 0.0) {
                return Err(Error::Domain(format!("Riemann state {s:?} is not positive")));
            }
        }
        let (al, ar) = (left.sound_speed(gamma), right.sound_speed(gamma));
        let du = right.u - left.u;
        if 2.0 * (al + ar) / (gamma - 1.0) <= du {
            return Err(Error::Vacuum);
        }

        // two-rarefaction guess
        let e = (gamma - 1.0) / (2.0 * gamma);
        let guess = ((al + ar - 0.5 * (gamma - 1.0) * du)
            / (al / left.p.powf(e) + ar / right.p.powf(e)))
        .powf(1.0 / e);
        let mut p = guess.max(PRESSURE_TOL);
        let mut converged = false;
        for _ in 0..100 {
            let (fl, dfl) = side_function(p, &left, gamma);
            let (fr, dfr) = side_function(p, &right, gamma);
            let next = (p - (fl + fr + du) / (dfl + dfr)).max(PRESSURE_TOL * 1e-3);
            let change = 2.0 * (next - p).abs() / (next + p);
            p = next;
            if change < PRESSURE_TOL {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::Domain("star pressure iteration did not converge".into()));
        }
        let (fl, _) = side_function(p, &left, gamma);
        let (fr, _) = side_function(p, &right, gamma);
        let u_star = 0.5 * (left.u + right.u) + 0.5 * (fr - fl);

        let g = (gamma - 1.0) / (gamma + 1.0);
        let star_density = |s: &EulerState| {
            let r = p / s.p;
            if p > s.p {
                s.rho * (r + g) / (g * r + 1.0)
            } else {
                s.rho * r.powf(1.0 / gamma)
            }
        };
        let rho_star_left = star_density(&left);
        let rho_star_right = star_density(&right);

        let shock_factor = |s: &EulerState| {
            ((gamma + 1.0) / (2.0 * gamma) * p / s.p + (gamma - 1.0) / (2.0 * gamma)).sqrt()
        };
        let left_wave = if p > left.p {
            Wave::Shock {
                speed: left.u - al * shock_factor(&left),
            }
        } else {
            Wave::Rarefaction {
                head: left.u - al,
                tail: u_star - al * (p / left.p).powf(e),
            }
        };
        let right_wave = if p > right.p {
            Wave::Shock {
                speed: right.u + ar * shock_factor(&right),
            }
        } else {
            Wave::Rarefaction {
                head: right.u + ar,
                tail: u_star + ar * (p / right.p).powf(e),
            }
        };
        Ok(Self {
            gamma,
            left,
            right,
            p_star: p,
            u_star,
            rho_star_left,
            rho_star_right,
            left_wave,
            right_wave,
        })
    }

    /// State on the ray `ξ = (x − x₀)/t`.
    pub fn sample(&self, xi: f64) -> EulerState {
        let gamma = self.gamma;
        let e = (gamma - 1.0) / (2.0 * gamma);
        if xi <= self.u_star {
            let s = self.left;
            let a = s.sound_speed(gamma);
            match self.left_wave {
                Wave::Shock { speed } => {
                    if xi <= speed {
                        s
                    } else {
                        EulerState::new(self.rho_star_left, self.u_star, self.p_star)
                    }
                }
                Wave::Rarefaction { head, tail } => {
                    if xi <= head {
                        s
                    } else if xi >= tail {
                        EulerState::new(self.rho_star_left, self.u_star, self.p_star)
                    } else {
                        let c = 2.0 / (gamma + 1.0) + (gamma - 1.0) / ((gamma + 1.0) * a) * (s.u - xi);
                        EulerState::new(
                            s.rho * c.powf(2.0 / (gamma - 1.0)),
                            2.0 / (gamma + 1.0) * (a + 0.5 * (gamma - 1.0) * s.u + xi),
                            s.p * c.powf(1.0 / e),
                        )
                    }
                }
            }
        } else {
            let s = self.right;
            let a = s.sound_speed(gamma);
            match self.right_wave {
                Wave::Shock { speed } => {
                    if xi >= speed {
                        s
                    } else {
                        EulerState::new(self.rho_star_right, self.u_star, self.p_star)
                    }
                }
                Wave::Rarefaction { head, tail } => {
                    if xi >= head {
                        s
                    } else if xi <= tail {
                        EulerState::new(self.rho_star_right, self.u_star, self.p_star)
                    } else {
                        let c = 2.0 / (gamma + 1.0) - (gamma - 1.0) / ((gamma + 1.0) * a) * (s.u - xi);
                        EulerState::new(
                            s.rho * c.powf(2.0 / (gamma - 1.0)),
                            2.0 / (gamma + 1.0) * (-a + 0.5 * (gamma - 1.0) * s.u + xi),
                            s.p * c.powf(1.0 / e),
                        )
                    }
                }
            }
        }
    }

    /// Profile at time `t` for a discontinuity initially at `x0`.
    pub fn profile(&self, xs: &[f64], t: f64, x0: f64) -> Vec<EulerState> {
        if t <= 0.0 {
            return xs
                .iter()
                .map(|&x| if x < x0 { self.left } else { self.right })
                .collect();
        }
        xs.iter().map(|&x| self.sample((x - x0) / t)).collect()
    }
}

/// Sample the exact solution of the Riemann problem at `xs` and time `t`.
pub fn exact_riemann_euler(
    left: EulerState,
    right: EulerState,
    gamma: f64,
    xs: &[f64],
    t: f64,
    x0: f64,
) -> Result<Vec<EulerState>> {
    Ok(RiemannSolution::solve(left, right, gamma)?.profile(xs, t, x0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_data_stays_uniform() {
        let s = EulerState::new(0.7, 0.3, 1.1);
        let sol = RiemannSolution::solve(s, s, GAMMA_1D).unwrap();
        assert!((sol.p_star - 1.1).abs() < 1e-10);
        assert!((sol.u_star - 0.3).abs() < 1e-10);
        for x in [-3.0, -0.5, 0.0, 0.4, 2.0] {
            let q = sol.sample(x);
            assert!((q.rho - 0.7).abs() < 1e-9 && (q.u - 0.3).abs() < 1e-9 && (q.p - 1.1).abs() < 1e-9);
        }
    }

    #[test]
    fn symmetric_collision_has_zero_star_velocity() {
        let sol = RiemannSolution::solve(
            EulerState::new(1.0, 0.8, 1.0),
            EulerState::new(1.0, -0.8, 1.0),
            GAMMA_1D,
        )
        .unwrap();
        assert!(sol.u_star.abs() < 1e-12);
        assert!(matches!(sol.left_wave, Wave::Shock { .. }));
        assert!(matches!(sol.right_wave, Wave::Shock { .. }));
    }

    #[test]
    fn vacuum_is_detected() {
        let r = RiemannSolution::solve(
            EulerState::new(1.0, -10.0, 1.0),
            EulerState::new(1.0, 10.0, 1.0),
            GAMMA_1D,
        );
        assert!(matches!(r, Err(Error::Vacuum)));
    }

    #[test]
    fn rarefaction_fan_is_continuous() {
        let sol = RiemannSolution::solve(
            EulerState::new(1.0, 0.0, 1.0),
            EulerState::new(0.125, 0.0, 0.1),
            GAMMA_1D,
        )
        .unwrap();
        let Wave::Rarefaction { head, tail } = sol.left_wave else {
            panic!("expected a left rarefaction");
        };
        let a = sol.sample(head + 1e-12);
        assert!((a.rho - 1.0).abs() < 1e-9);
        let b = sol.sample(tail - 1e-12);
        assert!((b.rho - sol.rho_star_left).abs() < 1e-9);
        assert!((b.p - sol.p_star).abs() < 1e-9);
    }
}
