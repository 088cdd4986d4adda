//! Bound states of the s-wave radial equation
//!
//! ```text
//! -(ħ²/2m) (ψ'' + (2/r) ψ') + u(r) ψ = ε ψ
//! ```
//!
//! solved for `v = r·ψ`, which obeys `v'' = 2m (u − ε) v` with `v(0) = 0`.
//! Eigenvalues are located by shooting: a Numerov sweep from the origin and
//! one from `r_max` meet at the outer classical turning point. The node count
//! of the outward solution picks the branch, then the log-derivative mismatch
//! at the matching point is driven to zero.

use crate::error::{Error, Result};
use crate::grid::{self, differentiate, RadialFunction, RadialGrid, Weight};

const RESCALE_THRESHOLD: f64 = 1e150;
const RESCALE_FACTOR: f64 = 1e-150;

/// Default upper edge of the energy bracket, relative to the potential's
/// asymptotic value.
pub const DEFAULT_ENERGY_CEILING: f64 = -1e-6;
pub const DEFAULT_MAX_ITER: usize = 200;

/// Potential energy `u(r)` together with its limit at infinity.
#[derive(Debug, Clone, PartialEq)]
pub struct EffectivePotential {
    u: RadialFunction,
    tail_limit: f64,
}

impl EffectivePotential {
    pub fn new(u: RadialFunction, tail_limit: f64) -> Result<Self> {
        if !tail_limit.is_finite() {
            return Err(Error::invalid("tail limit must be finite"));
        }
        Ok(Self { u, tail_limit })
    }

    /// `u(r) = −strength / r`, vanishing at infinity.
    pub fn coulomb(grid: RadialGrid, strength: f64) -> Result<Self> {
        Self::new(RadialFunction::from_fn(grid, |r| -strength / r)?, 0.0)
    }

    pub fn zero(grid: RadialGrid) -> Self {
        Self {
            u: RadialFunction::zeros(grid),
            tail_limit: 0.0,
        }
    }

    /// `u → u + c` together with its tail.
    pub fn shifted(&self, c: f64) -> Result<Self> {
        Self::new(self.u.shifted(c)?, self.tail_limit + c)
    }

    pub fn u(&self) -> &RadialFunction {
        &self.u
    }

    pub fn grid(&self) -> &RadialGrid {
        self.u.grid()
    }

    pub fn tail_limit(&self) -> f64 {
        self.tail_limit
    }

    /// `(min u, tail_limit + ceiling)`: every bound level lies in here.
    pub fn default_bracket(&self, ceiling: f64) -> (f64, f64) {
        (self.u.min(), self.tail_limit + ceiling)
    }
}

/// One normalized, real eigenpair.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundState {
    pub energy: f64,
    /// ψ(r), normalized so that `4π∫ψ²r²dr = 1`.
    pub psi: RadialFunction,
    pub nodes: usize,
    pub mass: f64,
    pub tail_limit: f64,
    pub match_index: usize,
    /// `(1/2m)·4π∫|ψ'|²r²dr`.
    pub kinetic_energy: f64,
}

impl BoundState {
    pub fn grid(&self) -> &RadialGrid {
        self.psi.grid()
    }

    /// `4π∫ψ²r²dr`.
    pub fn norm(&self) -> Result<f64> {
        norm_of(&self.psi)
    }

    /// `v = r·ψ`.
    pub fn reduced(&self) -> RadialFunction {
        let g = *self.grid();
        let v = self
            .psi
            .values()
            .iter()
            .enumerate()
            .map(|(i, p)| p * g.r(i))
            .collect();
        RadialFunction::new(g, v).expect("finite by construction")
    }

    /// Radial moment `4π∫ψ² r^{2+k} dr`.
    pub fn moment(&self, k: i32) -> Result<f64> {
        let g = *self.grid();
        let vals: Vec<f64> = self
            .psi
            .values()
            .iter()
            .enumerate()
            .map(|(i, p)| p * p * g.r(i).powi(k))
            .collect();
        grid::integrate_samples(&g, &vals, Weight::Spherical)
    }
}

fn norm_of(psi: &RadialFunction) -> Result<f64> {
    let sq: Vec<f64> = psi.values().iter().map(|p| p * p).collect();
    grid::integrate_samples(psi.grid(), &sq, Weight::Spherical)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Outward,
    Inward,
}

/// Result of one Numerov sweep: `v = rψ` on `first..=last`, zero elsewhere.
/// The overall scale is arbitrary.
#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub direction: Direction,
    pub first: usize,
    pub last: usize,
    pub nodes: usize,
    values: Vec<f64>,
}

impl Sweep {
    pub fn segment(&self) -> &[f64] {
        &self.values[self.first..=self.last]
    }

    /// The sweep on the full grid, zero-padded outside the swept segment.
    pub fn to_function(&self, grid: RadialGrid) -> RadialFunction {
        RadialFunction::new(grid, self.values.clone()).expect("finite by construction")
    }
}

/// Integrates `v'' = 2m(u − ε)v` across part of the grid.
///
/// The outward sweep covers `0..=match_index` starting from the regular
/// solution `v ≈ r(1 + m·(ru)₀·r)`; the inward sweep covers
/// `match_index..n-1` starting from the decaying asymptotic `e^{−κr}`,
/// `κ = √(2m(u − ε))` evaluated at the outermost points.
pub fn integrate_numerov(
    pot: &EffectivePotential,
    mass: f64,
    energy: f64,
    direction: Direction,
    match_index: usize,
) -> Result<Sweep> {
    check_mass(mass)?;
    let n = pot.grid().len();
    if n < 5 || match_index == 0 || match_index >= n - 1 {
        return Err(Error::invalid(format!(
            "match index {match_index} is not strictly inside a grid of {n} points"
        )));
    }
    let f = numerov_coefficients(pot, mass, energy)?;
    let h = pot.grid().spacing();
    let mut values = vec![0.0; n];
    match direction {
        Direction::Outward => {
            let (seg, nodes) = sweep_outward(&f, pot, mass, match_index)?;
            values[..=match_index].copy_from_slice(&seg);
            Ok(Sweep {
                direction,
                first: 0,
                last: match_index,
                nodes,
                values,
            })
        }
        Direction::Inward => {
            let kappa = decay_constant(pot, mass, energy)?;
            let (seg, nodes) = sweep_inward(&f, h, kappa, match_index)?;
            values[match_index..].copy_from_slice(&seg);
            Ok(Sweep {
                direction,
                first: match_index,
                last: n - 1,
                nodes,
                values,
            })
        }
    }
}

fn check_mass(mass: f64) -> Result<()> {
    if !(mass.is_finite() && mass > 0.0) {
        return Err(Error::invalid(format!("mass must be positive, got {mass}")));
    }
    Ok(())
}

fn decay_constant(pot: &EffectivePotential, mass: f64, energy: f64) -> Result<f64> {
    if energy.is_nan() || energy >= pot.tail_limit {
        return Err(Error::InvalidEnergy {
            energy,
            tail_limit: pot.tail_limit,
        });
    }
    Ok((2.0 * mass * (pot.tail_limit - energy)).sqrt())
}

/// `f_i = 2m(u_i − ε)`, checked against the Numerov stability limit.
fn numerov_coefficients(pot: &EffectivePotential, mass: f64, energy: f64) -> Result<Vec<f64>> {
    if !energy.is_finite() {
        return Err(Error::invalid("energy must be finite"));
    }
    let h2 = pot.grid().spacing().powi(2);
    let f: Vec<f64> = pot
        .u
        .values()
        .iter()
        .map(|u| 2.0 * mass * (u - energy))
        .collect();
    if let Some(i) = f.iter().position(|fi| h2 * fi / 12.0 >= 1.0) {
        return Err(Error::invalid(format!(
            "grid spacing too coarse for the potential at r = {} (h²·2m(u−ε)/12 ≥ 1)",
            pot.grid().r(i)
        )));
    }
    Ok(f)
}

#[inline]
fn numerov_next(
    f: &[f64],
    h2: f64,
    v_prev: f64,
    v_cur: f64,
    i: usize,
    next: usize,
    prev: usize,
) -> f64 {
    (2.0 * (1.0 + 5.0 * h2 * f[i] / 12.0) * v_cur - (1.0 - h2 * f[prev] / 12.0) * v_prev)
        / (1.0 - h2 * f[next] / 12.0)
}

/// Counts strict sign changes, skipping exact zeros.
struct SignTracker {
    last: f64,
    changes: usize,
}

impl SignTracker {
    fn new() -> Self {
        Self {
            last: 0.0,
            changes: 0,
        }
    }

    fn push(&mut self, v: f64) {
        if v == 0.0 {
            return;
        }
        if self.last != 0.0 && (v > 0.0) != (self.last > 0.0) {
            self.changes += 1;
        }
        self.last = v;
    }
}

/// Outward Numerov sweep over `0..=end`. Nodes are counted on the fly so that
/// rescaling cannot erase them.
fn sweep_outward(
    f: &[f64],
    pot: &EffectivePotential,
    mass: f64,
    end: usize,
) -> Result<(Vec<f64>, usize)> {
    let g = pot.grid();
    let h = g.spacing();
    let h2 = h * h;
    let u = pot.u.values();
    // lim_{r→0} r·u(r), linearly extrapolated; −Z for a Coulomb core, 0 otherwise.
    let ru0 = 2.0 * g.r(0) * u[0] - g.r(1) * u[1];
    let slope_correction = mass * ru0;
    let mut v = vec![0.0; end + 1];
    v[0] = h * (1.0 + slope_correction * h);
    // Numerov step from the origin, where v = 0 but f·v → 2m·(ru)₀·v'(0).
    let origin_fv = 2.0 * mass * ru0;
    if end >= 1 {
        v[1] = (2.0 * (1.0 + 5.0 * h2 * f[0] / 12.0) * v[0] + h2 * origin_fv / 12.0)
            / (1.0 - h2 * f[1] / 12.0);
    }
    let mut signs = SignTracker::new();
    signs.push(v[0]);
    if end >= 1 {
        signs.push(v[1]);
    }
    for i in 1..end {
        let next = numerov_next(f, h2, v[i - 1], v[i], i, i + 1, i - 1);
        v[i + 1] = next;
        signs.push(next);
        if next.abs() > RESCALE_THRESHOLD {
            v[..=i + 1].iter_mut().for_each(|x| *x *= RESCALE_FACTOR);
        }
    }
    if v.iter().any(|x| !x.is_finite()) {
        return Err(Error::invalid("outward sweep produced non-finite values"));
    }
    Ok((v, signs.changes))
}

/// Inward sweep over `end..n`, returned in grid order.
///
/// The two seeds follow the WKB form `κ^{-1/2}·exp(−∫κ)` with the local
/// `κ(r) = √f(r)`, which reduces to `e^{−κr}` once the potential has reached
/// its tail; `kappa` is used where the local value is not real.
fn sweep_inward(f: &[f64], h: f64, kappa: f64, end: usize) -> Result<(Vec<f64>, usize)> {
    let n = f.len();
    let h2 = h * h;
    let local = |i: usize| if f[i] > 0.0 { f[i].sqrt() } else { kappa };
    let (k_last, k_prev) = (local(n - 1), local(n - 2));
    let mut v = vec![0.0; n];
    v[n - 1] = 1.0;
    v[n - 2] = (0.5 * h * (k_last + k_prev)).exp() * (k_last / k_prev).sqrt();
    let mut signs = SignTracker::new();
    signs.push(v[n - 1]);
    signs.push(v[n - 2]);
    for i in (end + 1..n - 1).rev() {
        let next = numerov_next(f, h2, v[i + 1], v[i], i, i - 1, i + 1);
        v[i - 1] = next;
        signs.push(next);
        if next.abs() > RESCALE_THRESHOLD {
            v[i - 1..].iter_mut().for_each(|x| *x *= RESCALE_FACTOR);
        }
    }
    let seg = v.split_off(end);
    if seg.iter().any(|x| !x.is_finite()) {
        return Err(Error::invalid("inward sweep produced non-finite values"));
    }
    Ok((seg, signs.changes))
}

/// Number of strict sign changes of `v` (exact zeros are skipped).
pub fn count_nodes(v: &RadialFunction) -> Result<usize> {
    if v.values().iter().all(|x| *x == 0.0) {
        return Err(Error::invalid(
            "cannot count nodes of an identically zero function",
        ));
    }
    let mut t = SignTracker::new();
    v.values().iter().for_each(|x| t.push(*x));
    Ok(t.changes)
}

/// Matching point: one past the outermost sample with `u < ε`, kept at least
/// two points away from either end. Falls back to the grid midpoint when the
/// energy is classically forbidden everywhere.
fn matching_index(pot: &EffectivePotential, energy: f64) -> usize {
    let n = pot.grid().len();
    let turning = pot.u.values().iter().rposition(|u| *u < energy);
    let m = match turning {
        Some(i) => i + 1,
        None => n / 2,
    };
    m.clamp(2, n - 3)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenSolverOptions {
    pub max_iter: usize,
    /// Stop when the bracket is narrower than `energy_tol·max(1, |ε|)`.
    pub energy_tol: f64,
}

impl Default for EigenSolverOptions {
    fn default() -> Self {
        Self {
            max_iter: DEFAULT_MAX_ITER,
            energy_tol: 1e-13,
        }
    }
}

struct Shooter<'a> {
    pot: &'a EffectivePotential,
    mass: f64,
    n: usize,
}

impl Shooter<'_> {
    /// Node count of the regular solution over the whole grid.
    fn nodes(&self, energy: f64) -> Result<usize> {
        let f = numerov_coefficients(self.pot, self.mass, energy)?;
        Ok(sweep_outward(&f, self.pot, self.mass, self.n - 1)?.1)
    }

    /// `v'_out/v_out − v'_in/v_in` at `m`, central differences on both sweeps.
    fn mismatch(&self, energy: f64, m: usize) -> Result<f64> {
        let h = self.pot.grid().spacing();
        let f = numerov_coefficients(self.pot, self.mass, energy)?;
        let (out, _) = sweep_outward(&f, self.pot, self.mass, m + 1)?;
        let kappa = decay_constant(self.pot, self.mass, energy)?;
        let (inw, _) = sweep_inward(&f, h, kappa, m - 1)?;
        // inw[0] is grid index m-1.
        let log_out = (out[m + 1] - out[m - 1]) / (2.0 * h * out[m]);
        let log_in = (inw[2] - inw[0]) / (2.0 * h * inw[1]);
        Ok(log_out - log_in)
    }

    fn assemble(&self, energy: f64, m: usize) -> Result<Vec<f64>> {
        let h = self.pot.grid().spacing();
        let f = numerov_coefficients(self.pot, self.mass, energy)?;
        let (mut v, _) = sweep_outward(&f, self.pot, self.mass, m)?;
        let kappa = decay_constant(self.pot, self.mass, energy)?;
        let (inw, _) = sweep_inward(&f, h, kappa, m)?;
        if v[m] == 0.0 || inw[0] == 0.0 {
            return Err(Error::invalid("sweep vanishes at the matching point"));
        }
        let s = v[m] / inw[0];
        v.extend(inw[1..].iter().map(|x| x * s));
        Ok(v)
    }
}

/// Eigenpair of the radial equation with exactly `node_target` interior nodes
/// and energy in `bracket`.
pub fn find_bound_state(
    pot: &EffectivePotential,
    mass: f64,
    node_target: usize,
    bracket: (f64, f64),
) -> Result<BoundState> {
    find_bound_state_with(
        pot,
        mass,
        node_target,
        bracket,
        &EigenSolverOptions::default(),
    )
}

pub fn find_bound_state_with(
    pot: &EffectivePotential,
    mass: f64,
    node_target: usize,
    bracket: (f64, f64),
    opts: &EigenSolverOptions,
) -> Result<BoundState> {
    check_mass(mass)?;
    let (mut lo, mut hi) = bracket;
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::invalid(format!("bad energy bracket ({lo}, {hi})")));
    }
    if hi > pot.tail_limit {
        return Err(Error::InvalidEnergy {
            energy: hi,
            tail_limit: pot.tail_limit,
        });
    }
    let n = pot.grid().len();
    if n < 8 {
        return Err(Error::invalid("eigensolver needs at least 8 grid points"));
    }
    let shooter = Shooter { pot, mass, n };
    let k = node_target;

    let mut n_hi = shooter.nodes(hi)?;
    if n_hi <= k {
        return Err(Error::NoBoundState(format!(
            "only {n_hi} level(s) below {hi:e}; none with {k} node(s)"
        )));
    }
    let mut n_lo = shooter.nodes(lo)?;
    if n_lo > k {
        return Err(Error::NoBoundState(format!(
            "the level with {k} node(s) lies below the bracket edge {lo:e}"
        )));
    }

    let tol = |e: f64| opts.energy_tol * e.abs().max(1.0);
    let mut iter = 0;
    let bump = |iter: &mut usize, lo: f64, hi: f64| -> Result<()> {
        *iter += 1;
        if *iter > opts.max_iter {
            return Err(Error::ConvergenceFailure {
                lo,
                hi,
                iterations: opts.max_iter,
            });
        }
        Ok(())
    };

    // Node-guided bisection until the bracket isolates one root of D.
    let (energy, m) = loop {
        if n_lo == k && n_hi == k + 1 {
            let m = matching_index(pot, 0.5 * (lo + hi));
            let d_lo = shooter.mismatch(lo, m)?;
            let d_hi = shooter.mismatch(hi, m)?;
            if d_lo.is_finite() && d_hi.is_finite() && d_lo > 0.0 && d_hi < 0.0 {
                break polish(&shooter, (lo, d_lo), (hi, d_hi), m, &mut iter, opts, &tol)?;
            }
        }
        if hi - lo <= tol(hi) {
            let e = 0.5 * (lo + hi);
            break (e, matching_index(pot, e));
        }
        bump(&mut iter, lo, hi)?;
        let mid = 0.5 * (lo + hi);
        let nm = shooter.nodes(mid)?;
        if nm <= k {
            lo = mid;
            n_lo = nm;
        } else {
            hi = mid;
            n_hi = nm;
        }
    };

    let v = shooter.assemble(energy, m)?;
    build_state(pot, mass, energy, m, v, k)
}

/// Bisection while the bracket is wide, then secant steps kept inside it.
fn polish(
    shooter: &Shooter<'_>,
    (mut lo, mut d_lo): (f64, f64),
    (mut hi, mut d_hi): (f64, f64),
    m: usize,
    iter: &mut usize,
    opts: &EigenSolverOptions,
    tol: &dyn Fn(f64) -> f64,
) -> Result<(f64, usize)> {
    let secant_switch = |e: f64| 1e-4 * e.abs().max(1e-3);
    let mut prev = (lo, d_lo);
    let mut last = (hi, d_hi);
    loop {
        *iter += 1;
        if *iter > opts.max_iter {
            return Err(Error::ConvergenceFailure {
                lo,
                hi,
                iterations: opts.max_iter,
            });
        }
        let width = hi - lo;
        if width <= tol(hi) {
            // Pick the end with the smaller mismatch.
            let e = if d_lo.abs() < d_hi.abs() { lo } else { hi };
            return Ok((e, m));
        }
        let mid = 0.5 * (lo + hi);
        let candidate = if width > secant_switch(mid) || last.1 == prev.1 {
            mid
        } else {
            let s = last.0 - last.1 * (last.0 - prev.0) / (last.1 - prev.1);
            if s > lo && s < hi {
                s
            } else {
                mid
            }
        };
        let d = shooter.mismatch(candidate, m)?;
        if !d.is_finite() {
            return Err(Error::ConvergenceFailure {
                lo,
                hi,
                iterations: *iter,
            });
        }
        if d == 0.0 || (candidate - last.0).abs() <= tol(candidate) {
            return Ok((candidate, m));
        }
        if d > 0.0 {
            lo = candidate;
            d_lo = d;
        } else {
            hi = candidate;
            d_hi = d;
        }
        prev = last;
        last = (candidate, d);
    }
}

fn build_state(
    pot: &EffectivePotential,
    mass: f64,
    energy: f64,
    m: usize,
    v: Vec<f64>,
    node_target: usize,
) -> Result<BoundState> {
    let g = *pot.grid();
    let mut v = v;
    // Sign convention: positive next to the origin.
    if let Some(first) = v.iter().find(|x| **x != 0.0) {
        if *first < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
    }
    let nodes = {
        let mut t = SignTracker::new();
        v.iter().for_each(|x| t.push(*x));
        t.changes
    };
    if nodes != node_target {
        return Err(Error::NoBoundState(format!(
            "state at {energy:e} has {nodes} node(s) instead of {node_target}; \
             the level is not resolved inside r_max"
        )));
    }
    let psi: Vec<f64> = v.iter().enumerate().map(|(i, x)| x / g.r(i)).collect();
    let psi = RadialFunction::new(g, psi)?;
    let norm = norm_of(&psi)?;
    if !(norm.is_finite() && norm > 0.0) {
        return Err(Error::invalid(
            "eigenfunction is not square-integrable on the grid",
        ));
    }
    let psi = psi.scaled(1.0 / norm.sqrt())?;
    let dpsi = differentiate(&psi)?;
    let grad_sq: Vec<f64> = dpsi.values().iter().map(|d| d * d).collect();
    let grad = grid::integrate_samples(&g, &grad_sq, Weight::Spherical)?;
    if !grad.is_finite() {
        return Err(Error::invalid(
            "eigenfunction gradient is not square-integrable",
        ));
    }
    Ok(BoundState {
        energy,
        psi,
        nodes,
        mass,
        tail_limit: pot.tail_limit,
        match_index: m,
        kinetic_energy: grad / (2.0 * mass),
    })
}

/// Max-norm over interior points of `−(1/2m)v'' + (u − ε)v` for `v = rψ`,
/// with a three-point second difference. This is `r` times the residual of
/// the equation in ψ form, which keeps the origin regular.
pub fn eigen_residual(state: &BoundState, pot: &EffectivePotential) -> Result<f64> {
    state.psi.ensure_same_grid(pot.u())?;
    let g = *state.grid();
    let v = state.reduced();
    let v = v.values();
    let u = pot.u().values();
    let h2 = g.spacing().powi(2);
    let mut worst = 0.0_f64;
    for i in 1..v.len() - 1 {
        let lap = (v[i + 1] - 2.0 * v[i] + v[i - 1]) / h2;
        let r = -lap / (2.0 * state.mass) + (u[i] - state.energy) * v[i];
        worst = worst.max(r.abs());
    }
    Ok(worst)
}

/// `W = ψ₁ψ₂' − ψ₁'ψ₂` at grid index `at`, with `ψ = v/r` and a five-point
/// central derivative.
pub fn wronskian(v1: &RadialFunction, v2: &RadialFunction, at: usize) -> Result<f64> {
    v1.ensure_same_grid(v2)?;
    let g = *v1.grid();
    let n = g.len();
    if at < 2 || at + 2 >= n {
        return Err(Error::invalid(format!(
            "Wronskian index {at} too close to the grid boundary (n = {n})"
        )));
    }
    let psi = |v: &RadialFunction, i: usize| v.values()[i] / g.r(i);
    let deriv = |v: &RadialFunction| {
        (psi(v, at - 2) - 8.0 * psi(v, at - 1) + 8.0 * psi(v, at + 1) - psi(v, at + 2))
            / (12.0 * g.spacing())
    };
    Ok(psi(v1, at) * deriv(v2) - deriv(v1) * psi(v2, at))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn default_grid() -> RadialGrid {
        RadialGrid::default()
    }

    #[test]
    fn free_particle_outward_sweep_is_nodeless_and_growing() {
        let g = RadialGrid::with_extent(0.01, 5.0).unwrap();
        let pot = EffectivePotential::zero(g);
        let s = integrate_numerov(&pot, 1.0, -0.5, Direction::Outward, 300).unwrap();
        assert_eq!(s.nodes, 0);
        assert!(s.segment().windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn inward_sweep_rejects_unbound_energy() {
        let pot = EffectivePotential::zero(RadialGrid::with_extent(0.01, 5.0).unwrap());
        let err = integrate_numerov(&pot, 1.0, 0.1, Direction::Inward, 100).unwrap_err();
        assert!(matches!(err, Error::InvalidEnergy { .. }));
        assert!(integrate_numerov(&pot, 1.0, -0.1, Direction::Inward, 0).is_err());
    }

    #[test]
    fn coulomb_sweeps_follow_hydrogen_ground_state() {
        let g = default_grid();
        let pot = EffectivePotential::coulomb(g, 1.0).unwrap();
        let m = 1000; // r = 2.002
        let out = integrate_numerov(&pot, 1.0, -0.5, Direction::Outward, m).unwrap();
        let inw = integrate_numerov(&pot, 1.0, -0.5, Direction::Inward, m).unwrap();
        let exact = |r: f64| r * (-r).exp();
        for sweep in [&out, &inw] {
            let scale = exact(g.r(m)) / sweep.to_function(g).values()[m];
            for i in [m - 500, m - 10, m] {
                if i < sweep.first || i > sweep.last {
                    continue;
                }
                let got = sweep.to_function(g).values()[i] * scale;
                assert!(((got - exact(g.r(i))) / exact(g.r(i))).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn node_counts() {
        let g = default_grid();
        let one_s = RadialFunction::from_fn(g, |r| r * (-r).exp()).unwrap();
        assert_eq!(count_nodes(&one_s).unwrap(), 0);
        let two_s = RadialFunction::from_fn(g, |r| r * (1.0 - r / 2.0) * (-r / 2.0).exp()).unwrap();
        assert_eq!(count_nodes(&two_s).unwrap(), 1);
        assert!(count_nodes(&RadialFunction::zeros(g)).is_err());
    }

    #[test]
    fn free_particle_has_no_bound_state() {
        let pot = EffectivePotential::zero(default_grid());
        let err = find_bound_state(&pot, 1.0, 0, (-1.0, -1e-6)).unwrap_err();
        assert!(err.is_no_bound_state(), "{err}");
    }

    #[test]
    fn bracket_validation() {
        let pot = EffectivePotential::coulomb(default_grid(), 1.0).unwrap();
        assert!(find_bound_state(&pot, 1.0, 0, (-0.1, -0.2)).is_err());
        assert!(matches!(
            find_bound_state(&pot, 1.0, 0, (-1.0, 0.5)),
            Err(Error::InvalidEnergy { .. })
        ));
        assert!(find_bound_state(&pot, -1.0, 0, (-1.0, -0.1)).is_err());
        // Ground level is below the bracket.
        assert!(find_bound_state(&pot, 1.0, 0, (-0.3, -0.01))
            .unwrap_err()
            .is_no_bound_state());
    }

    #[test]
    fn wronskian_of_dependent_pair_vanishes() {
        let g = default_grid();
        let v = RadialFunction::from_fn(g, |r| r * (-r).exp() * (1.0 + 0.3 * r.sin())).unwrap();
        let v2 = v.scaled(2.0).unwrap();
        for at in [2, 500, 10_000] {
            assert_eq!(wronskian(&v, &v, at).unwrap(), 0.0);
            assert!(wronskian(&v, &v2, at).unwrap().abs() < 1e-15);
        }
        assert!(wronskian(&v, &v, 1).is_err());
        assert!(wronskian(&v, &v, g.len() - 2).is_err());
    }

    #[test]
    fn ground_state_is_normalized_and_positive() {
        let pot = EffectivePotential::coulomb(default_grid(), 1.0).unwrap();
        let s = find_bound_state(&pot, 1.0, 0, (-2.0, -1e-4)).unwrap();
        assert!((s.norm().unwrap() - 1.0).abs() < 1e-8);
        assert!(s.psi.values()[0] > 0.0);
        assert_eq!(s.nodes, 0);
        assert!(s.energy < s.tail_limit);
        // <T> = 1/2 for the hydrogen ground state.
        assert!(
            (s.kinetic_energy - 0.5).abs() < 1e-4,
            "{}",
            s.kinetic_energy
        );
    }
}
