//! Electrostatic potential of a spherically symmetric charge density.
//!
//! The potential is built directly from the double integral
//!
//! ```text
//! φ(r) = ∫_r^∞ Q(s)/s² ds,   Q(s) = ∫_0^s 4π ρ(t) t² dt
//! ```
//!
//! which solves `φ'' + (2/r)φ' = −4πρ` and vanishes at infinity. Beyond
//! `r_max` the density is taken to be zero, so the outer integral closes
//! with the analytic Coulomb tail `Q(r_max)/r`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::grid::{self, RadialFunction, RadialGrid, Weight};
use crate::radial_ode::BoundState;

/// Normalization tolerance demanded of the states entering [`charge_density`].
pub const NORMALIZATION_TOL: f64 = 1e-8;

/// Charge per volume in atomic units (e = 1).
#[derive(Debug, Clone, PartialEq)]
pub struct ChargeDensity {
    pub rho: RadialFunction,
}

impl ChargeDensity {
    pub fn new(rho: RadialFunction) -> Self {
        Self { rho }
    }

    pub fn zero(grid: RadialGrid) -> Self {
        Self::new(RadialFunction::zeros(grid))
    }

    /// `e(|ψ_p|² − |ψ_e|²)` from raw wavefunction samples, without any
    /// normalization check.
    pub fn from_wavefunctions(psi_p: &RadialFunction, psi_e: &RadialFunction) -> Result<Self> {
        psi_p.ensure_same_grid(psi_e)?;
        let rho = psi_p
            .values()
            .iter()
            .zip(psi_e.values())
            .map(|(p, e)| p * p - e * e)
            .collect();
        Ok(Self::new(RadialFunction::new(*psi_p.grid(), rho)?))
    }

    pub fn grid(&self) -> &RadialGrid {
        self.rho.grid()
    }

    /// `4π∫ρr²dr`.
    pub fn total_charge(&self) -> Result<f64> {
        grid::integrate_radial(&self.rho, Weight::Spherical)
    }

    /// Enclosed charge `Q(r_i)` at every grid point.
    pub fn enclosed_charge(&self) -> RadialFunction {
        let g = *self.grid();
        let nodes = grid::weighted_nodes(&g, self.rho.values(), Weight::Spherical);
        let q = grid::cumulative_integral(&nodes, g.spacing());
        RadialFunction::new(g, q[1..].to_vec()).expect("finite by construction")
    }
}

/// Charge density of the proton–electron pair.
pub fn charge_density(psi_p: &BoundState, psi_e: &BoundState) -> Result<ChargeDensity> {
    psi_p.psi.ensure_same_grid(&psi_e.psi)?;
    for (name, s) in [("proton", psi_p), ("electron", psi_e)] {
        let norm = s.norm()?;
        if (norm - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::invalid(format!(
                "{name} state is not normalized (4π∫|ψ|²r²dr = {norm})"
            )));
        }
    }
    ChargeDensity::from_wavefunctions(&psi_p.psi, &psi_e.psi)
}

/// Potential generated by `rho`, with `φ → 0` as `r → ∞`.
pub fn solve_potential(rho: &ChargeDensity) -> Result<RadialFunction> {
    let g = *rho.grid();
    grid::check_finite(rho.rho.values())?;
    let h = g.spacing();
    let q_nodes = grid::cumulative_integral(
        &grid::weighted_nodes(&g, rho.rho.values(), Weight::Spherical),
        h,
    );
    // Q(r)/r² on the nodes r = 0, h, …; it vanishes linearly at the origin.
    let mut field = Vec::with_capacity(q_nodes.len());
    field.push(0.0);
    field.extend((1..q_nodes.len()).map(|j| q_nodes[j] / (j as f64 * h).powi(2)));
    let running = grid::cumulative_integral(&field, h);
    let total = *running.last().expect("non-empty");
    let q_total = *q_nodes.last().expect("non-empty");
    let tail = q_total / g.r_max();
    let phi = (1..running.len())
        .map(|j| total - running[j] + tail)
        .collect();
    RadialFunction::new(g, phi)
}

/// Residual of the radial Poisson equation written for `w = rφ`:
/// `max |w'' + 4π r ρ|` over interior points, three-point second differences.
///
/// This is `r·(φ'' + (2/r)φ' + 4πρ)`; the factor `r` keeps the removable
/// singularity at the origin from dominating the norm.
pub fn poisson_residual(phi: &RadialFunction, rho: &ChargeDensity) -> Result<f64> {
    phi.ensure_same_grid(&rho.rho)?;
    let g = *phi.grid();
    let h2 = g.spacing().powi(2);
    let w: Vec<f64> = phi
        .values()
        .iter()
        .enumerate()
        .map(|(i, p)| g.r(i) * p)
        .collect();
    let rho = rho.rho.values();
    let mut worst = 0.0_f64;
    for i in 1..w.len() - 1 {
        let lap = (w[i + 1] - 2.0 * w[i] + w[i - 1]) / h2;
        worst = worst.max((lap + 4.0 * PI * g.r(i) * rho[i]).abs());
    }
    Ok(worst)
}
