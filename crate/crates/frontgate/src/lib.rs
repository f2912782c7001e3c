//! Bistable reaction-diffusion fronts and the population-gradient hindrances
//! that block them.
//!
//! The crate computes traveling-wave speeds, standing blocking fronts
//! ("barriers") via a phase-plane double-shooting argument, critical
//! propagules, critical population jumps, and runs 1-D finite-difference
//! simulations that classify invasion versus blocking.
//!
//! Entry points:
//! - [`reaction`]: nonlinearities f, potentials F, population laws h(p) and
//!   the change of variable reducing the frequency-dependent equation.
//! - [`wavespeed`]: the unique bistable speed and the KPP minimal speed.
//! - [`phaseplane`]: the (p, p') system, its energy, and the w-equation.
//! - [`barrier`]: the double-shooting solver, minimal blocking lengths
//!   L*(C) / coefficients C*(L), barrier enumeration, critical jumps.
//! - [`propagule`]: compactly supported invasion-triggering sub-solutions.
//! - [`pde`]: time-dependent simulators and outcome classification.
//! - [`cli`]: configuration-driven commands and figure recipes used by the
//!   `frontgate` binary.

pub mod barrier;
pub mod cli;
pub mod config;
pub mod error;
pub mod numerics;
pub mod pde;
pub mod phaseplane;
pub mod propagule;
pub mod reaction;
pub mod report;
pub mod wavespeed;

pub use error::{Error, Result};
