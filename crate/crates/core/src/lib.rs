//! Self-consistent spherically symmetric eigenstates of a proton–electron
//! pair that interact only through a shared classical electrostatic
//! potential, plus the analytic Coulomb hydrogen baseline they are compared
//! against.
//!
//! Units are Hartree atomic units throughout (ħ = e = m_e = 1).

pub mod cli;
pub mod coulomb_ref;
pub mod error;
pub mod grid;
pub mod poisson;
pub mod radial_ode;
pub mod scf;

pub use error::{Error, Particle, Result};
pub use grid::{PhysicalConstants, RadialFunction, RadialGrid, Weight};
pub use poisson::ChargeDensity;
pub use radial_ode::{BoundState, EffectivePotential};
pub use scf::{EigenstateSolution, ScfConfig};
