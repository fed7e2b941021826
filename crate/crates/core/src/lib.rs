//! Semi-Lagrangian large-time-step solvers for the BGK model of the Boltzmann
//! equation in one space and one velocity dimension.
//!
//! The distribution function lives on a fixed phase-space grid
//! ([`phase_grid`]). Every velocity node is transported exactly along its
//! characteristic, so the time step is not limited by a CFL condition; only
//! foot-point values need interpolation ([`weno`]). Stiff relaxation is
//! integrated with L-stable DIRK tableaux whose implicit stages have a closed
//! form ([`dirk`]). Two solvers are built on these pieces:
//!
//! * [`sl_bgk::SemiLagrangian`]: high order, not strictly conservative;
//! * [`cons_bgk::Conservative`]: first order, exactly conservative.
//!
//! [`harness`] holds the smooth-flow and Riemann experiments, diagnostics and
//! the reference Euler solver used by the `bgk` command-line tool.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cons_bgk;
pub mod dirk;
pub mod error;
pub mod harness;
pub mod phase_grid;
pub mod sl_bgk;
pub mod weno;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/phase-space.md")]
    mod phase_space {}
    #[doc = include_str!("../../../book/src/weno.md")]
    mod weno {}
    #[doc = include_str!("../../../book/src/dirk.md")]
    mod dirk {}
    #[doc = include_str!("../../../book/src/semi-lagrangian.md")]
    mod semi_lagrangian {}
    #[doc = include_str!("../../../book/src/conservative.md")]
    mod conservative {}
    #[doc = include_str!("../../../book/src/experiments.md")]
    mod experiments {}
}
