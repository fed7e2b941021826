//! Run configuration.
//!
//! The on-disk form is flat TOML whose keys are exactly the field names of
//! [`SolverConfig`]; unknown keys are rejected. Every key is optional and
//! falls back to the smooth-perturbation defaults.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::cons_bgk::TRANSPORT_STENCIL_RADIUS;
use crate::dirk::TableauKind;
use crate::error::{Error, Result};
use crate::phase_grid::{MacroState, PhaseGrid, TauModel};
use crate::sl_bgk::BoundaryCondition;
use crate::weno::{PointwiseWeno, DEFAULT_EPSILON};

use super::experiments;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Scheme {
    S1,
    S2,
    S3,
    Conservative,
}

impl Scheme {
    /// DIRK tableau of the semi-Lagrangian schemes; `None` for the conservative one.
    pub fn tableau(&self) -> Option<TableauKind> {
        match self {
            Scheme::S1 => Some(TableauKind::S1),
            Scheme::S2 => Some(TableauKind::S2),
            Scheme::S3 => Some(TableauKind::S3),
            Scheme::Conservative => None,
        }
    }
}

impl std::fmt::Display for Scheme {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Scheme::S1 => "S1",
            Scheme::S2 => "S2",
            Scheme::S3 => "S3",
            Scheme::Conservative => "Conservative",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for Scheme {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "s1" => Ok(Scheme::S1),
            "s2" => Ok(Scheme::S2),
            "s3" => Ok(Scheme::S3),
            "conservative" | "cons" => Ok(Scheme::Conservative),
            _ => Err(Error::Config(format!("unknown scheme {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TestKind {
    /// Smooth velocity perturbation of a uniform gas.
    Test1,
    /// Piecewise-constant Riemann data.
    Riemann,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TauKind {
    Constant,
    PowerLaw,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BcKind {
    /// Maxwellians of the initial states at the two ends.
    Prescribed,
    Periodic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InterpolationKind {
    Linear,
    Weno3,
}

/// The macroscopic test problem, resolved from the flat config keys.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TestCase {
    Test1 {
        sigma: f64,
    },
    Riemann {
        left: MacroState,
        right: MacroState,
        x_split: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverConfig {
    pub scheme: Scheme,
    pub test: TestKind,
    pub n_x: usize,
    pub n_v: usize,
    pub v_bound: f64,
    pub x_min: f64,
    pub x_max: f64,
    pub cfl: f64,
    pub t_final: f64,
    pub tau_model: TauKind,
    /// Relaxation time for `tau_model = "constant"`.
    pub tau: f64,
    /// `c` in `τ⁻¹ = c ρ T^(1−δ)`.
    pub tau_c: f64,
    /// `δ` in `τ⁻¹ = c ρ T^(1−δ)`.
    pub tau_delta: f64,
    pub bc: BcKind,
    pub sigma: f64,
    /// Left Riemann state `[ρ, u, T]`.
    pub left: [f64; 3],
    /// Right Riemann state `[ρ, u, T]`.
    pub right: [f64; 3],
    pub x_split: f64,
    /// Foot-point interpolation; defaults to linear for S1, WENO otherwise.
    pub interpolation: Option<InterpolationKind>,
    pub weno_eps: f64,
    pub output_dir: PathBuf,
    pub parallel: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            scheme: Scheme::S2,
            test: TestKind::Test1,
            n_x: 160,
            n_v: 20,
            v_bound: 10.0,
            x_min: -1.0,
            x_max: 1.0,
            cfl: 4.5,
            t_final: 0.04,
            tau_model: TauKind::Constant,
            tau: 1e-2,
            tau_c: 1.0,
            tau_delta: 0.0,
            bc: BcKind::Prescribed,
            sigma: 10.0,
            left: [1.0, 0.0, 1.0],
            right: [0.125, 0.0, 0.8],
            x_split: 0.0,
            interpolation: None,
            weno_eps: DEFAULT_EPSILON,
            output_dir: PathBuf::from("out"),
            parallel: true,
        }
    }
}

impl SolverConfig {
    /// Smooth perturbation test.
    pub fn test1(scheme: Scheme, n_x: usize, tau: f64) -> Self {
        Self {
            scheme,
            n_x,
            tau,
            ..Self::default()
        }
    }

    /// Sod-type Riemann problem with the default states.
    pub fn riemann(scheme: Scheme, n_x: usize, tau: f64) -> Self {
        Self {
            scheme,
            test: TestKind::Riemann,
            n_x,
            n_v: 60,
            t_final: 0.25,
            tau,
            ..Self::default()
        }
    }

    pub fn from_toml_str(text: &str, overrides: &[String]) -> Result<Self> {
        let mut table: toml::Table = text
            .parse()
            .map_err(|e: toml::de::Error| Error::Config(e.to_string()))?;
        for o in overrides {
            apply_override(&mut table, o)?;
        }
        let cfg: SolverConfig = toml::Value::Table(table)
            .try_into()
            .map_err(|e: toml::de::Error| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path, overrides: &[String]) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_toml_str(&text, overrides)
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if !(self.cfl > 0.0) || !self.cfl.is_finite() {
            return bad(format!("cfl must be positive, got {}", self.cfl));
        }
        if !(self.t_final >= 0.0) || !self.t_final.is_finite() {
            return bad(format!("t_final must be non-negative, got {}", self.t_final));
        }
        if self.n_x < 8 {
            return bad(format!("n_x must be at least 8, got {}", self.n_x));
        }
        if self.n_v == 0 || !(self.v_bound > 0.0) {
            return bad("velocity grid needs n_v > 0 and v_bound > 0".into());
        }
        if !(self.x_max > self.x_min) {
            return bad("x_max must exceed x_min".into());
        }
        if !(self.weno_eps > 0.0) {
            return bad("weno_eps must be positive".into());
        }
        self.tau_model().validate()?;
        if let TestCase::Test1 { sigma } = self.test_case() {
            if !(sigma > 0.0) {
                return bad(format!("sigma must be positive, got {sigma}"));
            }
        }
        if let TestCase::Riemann { left, right, .. } = self.test_case() {
            left.validate()?;
            right.validate()?;
        }
        if self.bc == BcKind::Periodic && self.ghost_width() > self.n_x {
            return bad("periodic ghost region wider than the domain; lower cfl".into());
        }
        Ok(())
    }

    pub fn tau_model(&self) -> TauModel {
        match self.tau_model {
            TauKind::Constant => TauModel::Constant(self.tau),
            TauKind::PowerLaw => TauModel::PowerLaw {
                c: self.tau_c,
                delta: self.tau_delta,
            },
        }
    }

    pub fn test_case(&self) -> TestCase {
        match self.test {
            TestKind::Test1 => TestCase::Test1 { sigma: self.sigma },
            TestKind::Riemann => TestCase::Riemann {
                left: state(self.left),
                right: state(self.right),
                x_split: self.x_split,
            },
        }
    }

    pub fn interpolation(&self) -> PointwiseWeno {
        let kind = self.interpolation.unwrap_or(match self.scheme {
            Scheme::S1 | Scheme::Conservative => InterpolationKind::Linear,
            Scheme::S2 | Scheme::S3 => InterpolationKind::Weno3,
        });
        match kind {
            InterpolationKind::Linear => PointwiseWeno::Linear,
            InterpolationKind::Weno3 => PointwiseWeno::Weno3 { eps: self.weno_eps },
        }
    }

    /// `stencil radius + ceil(CFL)`, widened for the conservative transport stencil.
    pub fn ghost_width(&self) -> usize {
        let sl = PhaseGrid::ghost_width_for(self.cfl, 2);
        match self.scheme {
            Scheme::Conservative => sl.max(TRANSPORT_STENCIL_RADIUS),
            _ => sl,
        }
    }

    pub fn grid(&self) -> Result<PhaseGrid> {
        PhaseGrid::new(
            self.x_min,
            self.x_max,
            self.n_x,
            self.v_bound,
            self.n_v,
            self.ghost_width(),
        )
    }

    /// `Δt = CFL·Δx/v_bound`.
    pub fn dt(&self) -> f64 {
        self.cfl * (self.x_max - self.x_min) / self.n_x as f64 / self.v_bound
    }

    pub fn boundary(&self) -> BoundaryCondition {
        match self.bc {
            BcKind::Periodic => BoundaryCondition::Periodic,
            BcKind::Prescribed => match self.test_case() {
                TestCase::Test1 { sigma } => BoundaryCondition::PrescribedMoments {
                    left: MacroState::new(1.0, experiments::test1_velocity(sigma, self.x_min), 1.0),
                    right: MacroState::new(1.0, experiments::test1_velocity(sigma, self.x_max), 1.0),
                },
                TestCase::Riemann { left, right, .. } => {
                    BoundaryCondition::PrescribedMoments { left, right }
                }
            },
        }
    }
}

fn state(a: [f64; 3]) -> MacroState {
    MacroState::new(a[0], a[1], a[2])
}

/// Apply one `key=value` override; the value is read as a TOML value, or as a
/// bare string when it does not parse as one.
pub fn apply_override(table: &mut toml::Table, kv: &str) -> Result<()> {
    let (key, raw) = kv
        .split_once('=')
        .ok_or_else(|| Error::Config(format!("override {kv:?} is not key=value")))?;
    let key = key.trim();
    let raw = raw.trim();
    let value = format!("v = {raw}")
        .parse::<toml::Table>()
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| toml::Value::String(raw.to_string()));
    table.insert(key.to_string(), value);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_gives_defaults() {
        let c = SolverConfig::from_toml_str("", &[]).unwrap();
        assert_eq!(c, SolverConfig::default());
    }

    #[test]
    fn unknown_keys_are_errors() {
        let e = SolverConfig::from_toml_str("n_x = 20\nfoo = 1\n", &[]).unwrap_err();
        assert!(matches!(e, Error::Config(_)), "{e}");
    }

    #[test]
    fn overrides_win() {
        let c = SolverConfig::from_toml_str(
            "scheme = \"S3\"\nn_x = 40\n",
            &["n_x=80".into(), "scheme=S1".into(), "left=[2.0, 0.0, 1.0]".into()],
        )
        .unwrap();
        assert_eq!(c.n_x, 80);
        assert_eq!(c.scheme, Scheme::S1);
        assert_eq!(c.left, [2.0, 0.0, 1.0]);
    }

    #[test]
    fn rejects_bad_values() {
        for bad in ["cfl = -1.0", "n_x = 4", "tau = 0.0", "t_final = -0.1"] {
            assert!(SolverConfig::from_toml_str(bad, &[]).is_err(), "{bad}");
        }
    }

    #[test]
    fn toml_roundtrip() {
        let c = SolverConfig::riemann(Scheme::Conservative, 300, 1e-6);
        let text = c.to_toml_string().unwrap();
        assert_eq!(SolverConfig::from_toml_str(&text, &[]).unwrap(), c);
    }

    #[test]
    fn ghost_width_follows_cfl() {
        let mut c = SolverConfig {
            cfl: 4.5,
            ..SolverConfig::default()
        };
        assert_eq!(c.ghost_width(), 7);
        c.cfl = 0.5;
        c.scheme = Scheme::Conservative;
        assert_eq!(c.ghost_width(), 3);
    }
}
