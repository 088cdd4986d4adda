//! Self-consistent field driver.
//!
//! For a frozen potential φ the proton and the electron each solve the radial
//! equation with potential energy `+eφ` and `−eφ` respectively. Their densities
//! give a charge density, whose potential becomes the next φ. The loop mixes
//! old and new potentials linearly until potential and levels stop moving.
//!
//! Both densities enter the charge density, so each particle also feels its
//! own field. An optional confining well, identical for both particles, can
//! be switched on to study the coupled problem where it has bound solutions.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Particle, Result};
use crate::grid::{differentiate, PhysicalConstants, RadialFunction, RadialGrid};
use crate::poisson::{charge_density, poisson_residual, solve_potential, ChargeDensity};
use crate::radial_ode::{
    eigen_residual, find_bound_state_with, BoundState, EffectivePotential, EigenSolverOptions,
    DEFAULT_ENERGY_CEILING,
};

pub const DEFAULT_MIXING: f64 = 0.3;
pub const DEFAULT_TOL_PHI: f64 = 1e-8;
pub const DEFAULT_TOL_ENERGY: f64 = 1e-9;
pub const DEFAULT_MAX_ITER: usize = 500;
pub const DEFAULT_BALL_RADIUS_P: f64 = 0.001;
pub const DEFAULT_BALL_RADIUS_E: f64 = 1.0;

#[derive(Debug, Clone, PartialEq)]
pub enum InitialGuess {
    /// Potential of a hydrogen-like 1s proton cloud of radius `m_e/m_p` and a
    /// 1s electron cloud of radius one Bohr.
    Hydrogenic,
    /// Potential of two uniformly charged balls of opposite charge.
    UniformBall {
        radius_p: f64,
        radius_e: f64,
    },
    User(RadialFunction),
}

/// Species-independent well `w(r) = −depth·exp(−(r/radius)²)` added to both
/// particles' potential energy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Confinement {
    pub depth: f64,
    pub radius: f64,
}

impl Confinement {
    pub fn at(&self, r: f64) -> f64 {
        -self.depth * (-(r / self.radius).powi(2)).exp()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScfConfig {
    pub constants: PhysicalConstants,
    pub grid: RadialGrid,
    pub node_p: usize,
    pub node_e: usize,
    pub mixing: f64,
    pub tol_phi: f64,
    pub tol_energy: f64,
    pub max_iter: usize,
    pub initial_guess: InitialGuess,
    pub confinement: Option<Confinement>,
    /// Upper edge of every eigenvalue bracket, relative to the potential's tail.
    pub energy_ceiling: f64,
    pub eigen: EigenSolverOptions,
}

impl Default for ScfConfig {
    fn default() -> Self {
        Self::new(RadialGrid::default())
    }
}

impl ScfConfig {
    pub fn new(grid: RadialGrid) -> Self {
        Self {
            constants: PhysicalConstants::default(),
            grid,
            node_p: 0,
            node_e: 0,
            mixing: DEFAULT_MIXING,
            tol_phi: DEFAULT_TOL_PHI,
            tol_energy: DEFAULT_TOL_ENERGY,
            max_iter: DEFAULT_MAX_ITER,
            initial_guess: InitialGuess::Hydrogenic,
            confinement: None,
            energy_ceiling: DEFAULT_ENERGY_CEILING,
            eigen: EigenSolverOptions::default(),
        }
    }

    /// Every violated invariant, one message each.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        if let Err(e) = self.constants.validate() {
            out.push(e.to_string());
        }
        if !(self.mixing > 0.0 && self.mixing <= 1.0) {
            out.push(format!("mixing must be in (0,1], got {}", self.mixing));
        }
        for (name, v) in [("tol_phi", self.tol_phi), ("tol_energy", self.tol_energy)] {
            if !(v.is_finite() && v > 0.0) {
                out.push(format!("{name} must be positive, got {v}"));
            }
        }
        if self.max_iter == 0 {
            out.push("max_iter must be at least 1".into());
        }
        if !(self.energy_ceiling.is_finite() && self.energy_ceiling < 0.0) {
            out.push(format!(
                "energy_ceiling must be negative, got {}",
                self.energy_ceiling
            ));
        }
        if self.grid.len() < 8 {
            out.push(format!(
                "grid needs at least 8 points, got {}",
                self.grid.len()
            ));
        }
        match &self.initial_guess {
            InitialGuess::UniformBall { radius_p, radius_e } => {
                if !(*radius_p > 0.0 && *radius_e > 0.0) {
                    out.push("ball radii must be positive".into());
                }
            }
            InitialGuess::User(phi) => {
                if *phi.grid() != self.grid {
                    out.push("user-supplied potential is not on the configured grid".into());
                }
            }
            InitialGuess::Hydrogenic => {}
        }
        if let Some(c) = self.confinement {
            if !(c.depth.is_finite() && c.depth >= 0.0 && c.radius.is_finite() && c.radius > 0.0) {
                out.push("confinement needs depth ≥ 0 and radius > 0".into());
            }
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        let v = self.violations();
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::invalid(v.join("; ")))
        }
    }

    fn mass(&self, particle: Particle) -> f64 {
        match particle {
            Particle::Proton => self.constants.mass_p,
            Particle::Electron => self.constants.mass_e,
        }
    }

    /// Sign of the particle's charge in units of e.
    fn charge(&self, particle: Particle) -> f64 {
        match particle {
            Particle::Proton => self.constants.charge_e,
            Particle::Electron => -self.constants.charge_e,
        }
    }
}

/// One row of the convergence log.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResidualRecord {
    pub iteration: usize,
    /// `max |φ_out − φ_in|`.
    pub phi_residual: f64,
    pub delta_e_p: Option<f64>,
    pub delta_e_e: Option<f64>,
}

/// Post-hoc checks on a solution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub norm_p: f64,
    pub norm_e: f64,
    pub total_charge: f64,
    pub poisson_residual: f64,
    pub eigen_residual_p: f64,
    pub eigen_residual_e: f64,
    /// `max |j_p − j_e|` of the probability-current balance.
    pub current_mismatch: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenstateSolution {
    pub psi_p: BoundState,
    pub psi_e: BoundState,
    pub phi: RadialFunction,
    pub e_p: f64,
    pub e_e: f64,
    pub rho: ChargeDensity,
    pub e_field: RadialFunction,
    pub converged: bool,
    pub iterations: usize,
    pub residual_history: Vec<ResidualRecord>,
    /// Constant removed from φ to pin its value at infinity to zero.
    pub gauge_constant: f64,
    pub diagnostics: Diagnostics,
}

impl EigenstateSolution {
    /// Sum of the two partial levels.
    pub fn total_energy(&self) -> f64 {
        self.e_p + self.e_e
    }

    pub fn grid(&self) -> &RadialGrid {
        self.phi.grid()
    }
}

/// Effective potentials `±eφ + w` for the proton and the electron.
pub fn particle_potentials(
    phi: &RadialFunction,
    config: &ScfConfig,
) -> Result<(EffectivePotential, EffectivePotential)> {
    let build = |particle: Particle| -> Result<EffectivePotential> {
        let q = config.charge(particle);
        let g = *phi.grid();
        let u = phi
            .values()
            .iter()
            .enumerate()
            .map(|(i, p)| q * p + config.confinement.map_or(0.0, |c| c.at(g.r(i))))
            .collect();
        EffectivePotential::new(RadialFunction::new(g, u)?, q * phi.last())
    };
    Ok((build(Particle::Proton)?, build(Particle::Electron)?))
}

/// Output of one unmixed SCF map application.
#[derive(Debug, Clone, PartialEq)]
pub struct StepResult {
    pub psi_p: BoundState,
    pub psi_e: BoundState,
    pub rho: ChargeDensity,
    pub phi_out: RadialFunction,
}

impl StepResult {
    pub fn e_p(&self) -> f64 {
        self.psi_p.energy
    }

    pub fn e_e(&self) -> f64 {
        self.psi_e.energy
    }
}

fn solve_particle(
    pot: &EffectivePotential,
    particle: Particle,
    config: &ScfConfig,
) -> Result<BoundState> {
    let nodes = match particle {
        Particle::Proton => config.node_p,
        Particle::Electron => config.node_e,
    };
    let (lo, hi) = pot.default_bracket(config.energy_ceiling);
    let result = if lo >= hi {
        Err(Error::NoBoundState(format!(
            "potential never drops below {hi:e}"
        )))
    } else {
        find_bound_state_with(pot, config.mass(particle), nodes, (lo, hi), &config.eigen)
    };
    result.map_err(|e| Error::Particle {
        particle,
        source: Box::new(e),
    })
}

/// Potential → states → density → potential. No mixing.
pub fn scf_step(phi_in: &RadialFunction, config: &ScfConfig) -> Result<StepResult> {
    if *phi_in.grid() != config.grid {
        return Err(Error::GridMismatch);
    }
    let (pot_p, pot_e) = particle_potentials(phi_in, config)?;
    let (psi_p, psi_e) = std::thread::scope(|s| {
        let proton = s.spawn(|| solve_particle(&pot_p, Particle::Proton, config));
        let electron = solve_particle(&pot_e, Particle::Electron, config);
        (proton.join().expect("proton eigensolve panicked"), electron)
    });
    let (psi_p, psi_e) = (psi_p?, psi_e?);
    let rho = charge_density(&psi_p, &psi_e)?;
    let phi_out = solve_potential(&rho)?;
    Ok(StepResult {
        psi_p,
        psi_e,
        rho,
        phi_out,
    })
}

/// `(1 − α)·old + α·new`.
pub fn mix(old: &RadialFunction, new: &RadialFunction, alpha: f64) -> Result<RadialFunction> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::invalid(format!(
            "mixing must be in (0,1], got {alpha}"
        )));
    }
    old.ensure_same_grid(new)?;
    if alpha == 1.0 {
        return Ok(new.clone());
    }
    // old + α(new − old) is exactly old at a fixed point.
    RadialFunction::new(
        *old.grid(),
        old.values()
            .iter()
            .zip(new.values())
            .map(|(o, n)| o + alpha * (n - o))
            .collect(),
    )
}

/// Potential of a normalized 1s cloud `e^{−2r/a}/(πa³)` carrying charge `q`.
pub fn hydrogenic_cloud_potential(r: f64, a: f64, q: f64) -> f64 {
    let x = 2.0 * r / a;
    // 1/r − e^{−x}(1/r + 1/a), arranged to avoid cancellation for small x.
    q * (-(-x).exp_m1() - 0.5 * x * (-x).exp()) / r
}

/// Potential of a uniformly charged ball of radius `radius` and charge `q`.
pub fn uniform_ball_potential(r: f64, radius: f64, q: f64) -> f64 {
    if r >= radius {
        q / r
    } else {
        q * (3.0 * radius * radius - r * r) / (2.0 * radius.powi(3))
    }
}

pub fn initial_potential(config: &ScfConfig) -> Result<RadialFunction> {
    let g = config.grid;
    let e = config.constants.charge_e;
    match &config.initial_guess {
        InitialGuess::Hydrogenic => {
            let a_p = config.constants.mass_e / config.constants.mass_p;
            RadialFunction::from_fn(g, |r| {
                hydrogenic_cloud_potential(r, a_p, e) + hydrogenic_cloud_potential(r, 1.0, -e)
            })
        }
        InitialGuess::UniformBall { radius_p, radius_e } => RadialFunction::from_fn(g, |r| {
            uniform_ball_potential(r, *radius_p, e) + uniform_ball_potential(r, *radius_e, -e)
        }),
        InitialGuess::User(phi) => {
            if *phi.grid() != g {
                return Err(Error::GridMismatch);
            }
            Ok(phi.clone())
        }
    }
}

/// Probability current `(ħ/m)·(a b' − b a')` of `ψ = a + ib`, in units of e.
pub fn current_density(
    re: &RadialFunction,
    im: &RadialFunction,
    mass: f64,
    hbar: f64,
) -> Result<RadialFunction> {
    re.ensure_same_grid(im)?;
    let (da, db) = (differentiate(re)?, differentiate(im)?);
    let j = re
        .values()
        .iter()
        .zip(im.values())
        .zip(da.values().iter().zip(db.values()))
        .map(|((a, b), (a1, b1))| hbar / mass * (a * b1 - b * a1))
        .collect();
    RadialFunction::new(*re.grid(), j)
}

fn diagnostics(
    config: &ScfConfig,
    phi: &RadialFunction,
    psi_p: &BoundState,
    psi_e: &BoundState,
    rho: &ChargeDensity,
) -> Result<Diagnostics> {
    let (pot_p, pot_e) = particle_potentials(phi, config)?;
    // Eigenfunctions are real; the imaginary part is identically zero.
    let zero = RadialFunction::zeros(*phi.grid());
    let hbar = config.constants.hbar;
    let j_p = current_density(&psi_p.psi, &zero, psi_p.mass, hbar)?;
    let j_e = current_density(&psi_e.psi, &zero, psi_e.mass, hbar)?;
    Ok(Diagnostics {
        norm_p: psi_p.norm()?,
        norm_e: psi_e.norm()?,
        total_charge: rho.total_charge()?,
        poisson_residual: poisson_residual(phi, rho)?,
        eigen_residual_p: eigen_residual(psi_p, &pot_p)?,
        eigen_residual_e: eigen_residual(psi_e, &pot_e)?,
        current_mismatch: j_p.max_abs_diff(&j_e)?,
    })
}

/// Assembles a solution object from a potential and the states it binds.
#[allow(clippy::too_many_arguments)]
pub fn assemble_solution(
    config: &ScfConfig,
    phi: RadialFunction,
    psi_p: BoundState,
    psi_e: BoundState,
    converged: bool,
    iterations: usize,
    residual_history: Vec<ResidualRecord>,
    gauge_constant: f64,
) -> Result<EigenstateSolution> {
    let rho = ChargeDensity::from_wavefunctions(&psi_p.psi, &psi_e.psi)?;
    let e_field = differentiate(&phi)?.scaled(-1.0)?;
    let diagnostics = diagnostics(config, &phi, &psi_p, &psi_e, &rho)?;
    Ok(EigenstateSolution {
        e_p: psi_p.energy,
        e_e: psi_e.energy,
        psi_p,
        psi_e,
        phi,
        rho,
        e_field,
        converged,
        iterations,
        residual_history,
        gauge_constant,
        diagnostics,
    })
}

/// Damped fixed-point iteration of [`scf_step`] to self-consistency.
///
/// A missing bound level at any iterate ends the run with
/// [`Error::ModelFailure`]; running out of iterations yields
/// [`Error::NonConvergence`]. Both carry the residual history.
pub fn scf_solve(config: &ScfConfig) -> Result<EigenstateSolution> {
    scf_solve_observed(config, |_| {})
}

/// [`scf_solve`] with a callback invoked after every iteration.
pub fn scf_solve_observed(
    config: &ScfConfig,
    mut observe: impl FnMut(&ResidualRecord),
) -> Result<EigenstateSolution> {
    config.validate()?;
    let mut phi = initial_potential(config)?;
    let mut gauge_constant = phi.last();
    phi = phi.shifted(-gauge_constant)?;

    let mut history: Vec<ResidualRecord> = Vec::new();
    let mut prev: Option<(f64, f64)> = None;
    for iteration in 1..=config.max_iter {
        let step = match scf_step(&phi, config) {
            Ok(s) => s,
            Err(e @ Error::Particle { .. }) => {
                return Err(Error::ModelFailure {
                    iteration,
                    source: Box::new(e),
                    history,
                })
            }
            Err(e) => return Err(e),
        };
        let phi_residual = step.phi_out.max_abs_diff(&phi)?;
        let (delta_e_p, delta_e_e) = match prev {
            Some((p, e)) => (Some(step.e_p() - p), Some(step.e_e() - e)),
            None => (None, None),
        };
        let record = ResidualRecord {
            iteration,
            phi_residual,
            delta_e_p,
            delta_e_e,
        };
        observe(&record);
        history.push(record);
        prev = Some((step.e_p(), step.e_e()));

        let settled = |d: Option<f64>| d.is_some_and(|d| d.abs() < config.tol_energy);
        if phi_residual < config.tol_phi && settled(delta_e_p) && settled(delta_e_e) {
            return assemble_solution(
                config,
                phi,
                step.psi_p,
                step.psi_e,
                true,
                iteration,
                history,
                gauge_constant,
            );
        }

        let mixed = mix(&phi, &step.phi_out, config.mixing)?;
        let drift = mixed.last();
        gauge_constant += drift;
        phi = mixed.shifted(-drift)?;
    }
    Err(Error::NonConvergence {
        iterations: config.max_iter,
        history,
    })
}

/// `φ → φ − C`, `E_p → E_p − eC`, `E_e → E_e + eC`; wavefunctions untouched.
pub fn gauge_shift(solution: &EigenstateSolution, c: f64) -> Result<EigenstateSolution> {
    let e = 1.0;
    let mut out = solution.clone();
    out.phi = solution.phi.shifted(-c)?;
    out.e_p = solution.e_p - e * c;
    out.e_e = solution.e_e + e * c;
    out.psi_p.energy = out.e_p;
    out.psi_e.energy = out.e_e;
    out.psi_p.tail_limit -= e * c;
    out.psi_e.tail_limit += e * c;
    out.gauge_constant += c;
    Ok(out)
}

/// Electrostatic self-energy `½∫ρφ d³r`, non-negative for any density.
pub fn coulomb_energy(rho: &ChargeDensity, phi: &RadialFunction) -> Result<f64> {
    rho.rho.ensure_same_grid(phi)?;
    let prod: Vec<f64> = rho
        .rho
        .values()
        .iter()
        .zip(phi.values())
        .map(|(r, p)| r * p)
        .collect();
    Ok(0.5 * crate::grid::integrate_samples(rho.grid(), &prod, crate::grid::Weight::Spherical)?)
}

/// `4π∫ w(r) ψ² r² dr` for the confining well, zero without one.
pub fn confinement_energy(config: &ScfConfig, state: &BoundState) -> Result<f64> {
    let Some(c) = config.confinement else {
        return Ok(0.0);
    };
    let g = *state.grid();
    let vals: Vec<f64> = state
        .psi
        .values()
        .iter()
        .enumerate()
        .map(|(i, p)| c.at(g.r(i)) * p * p)
        .collect();
    crate::grid::integrate_samples(&g, &vals, crate::grid::Weight::Spherical)
}
