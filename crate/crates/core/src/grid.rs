//! Radial discretization of the half-line and the quadrature rules used on it.
//!
//! All quantities are in Hartree atomic units (ħ = e = m_e = 1): lengths in
//! Bohr radii (1 a₀ = 0.529177210903 Å), energies in Hartree
//! (1 E_h = 27.211386245988 eV).
//!
//! The grid is uniform and excludes the origin: `r_i = i·h` for `i = 1..=n`.
//! Quadrature rules treat the origin as a virtual node whose value is
//! extrapolated from the first samples; for the `r²` weights that value is
//! exactly zero.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Bohr radius in Ångström.
pub const BOHR_TO_ANGSTROM: f64 = 0.529_177_210_903;
/// Hartree in electron-volt.
pub const HARTREE_TO_EV: f64 = 27.211_386_245_988;
/// Proton mass in electron masses.
pub const PROTON_ELECTRON_MASS_RATIO: f64 = 1_836.152_673_43;

pub const DEFAULT_SPACING: f64 = 2.0e-3;
pub const DEFAULT_R_MAX: f64 = 40.0;

/// ħ, e and m_e are fixed at one; only the proton mass is free.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalConstants {
    pub hbar: f64,
    pub charge_e: f64,
    pub mass_e: f64,
    pub mass_p: f64,
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self {
            hbar: 1.0,
            charge_e: 1.0,
            mass_e: 1.0,
            mass_p: PROTON_ELECTRON_MASS_RATIO,
        }
    }
}

impl PhysicalConstants {
    pub fn with_proton_mass(mass_p: f64) -> Result<Self> {
        let c = Self {
            mass_p,
            ..Self::default()
        };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("hbar", self.hbar),
            ("charge_e", self.charge_e),
            ("mass_e", self.mass_e),
            ("mass_p", self.mass_p),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::invalid(format!("{name} must be positive, got {v}")));
            }
        }
        // Equal masses are admitted for the symmetric smoke test.
        if self.mass_p < self.mass_e {
            return Err(Error::invalid(format!(
                "mass_p ({}) must not be below mass_e ({})",
                self.mass_p, self.mass_e
            )));
        }
        Ok(())
    }
}

/// Uniform grid `r_i = i·h`, `i = 1..=n_points`. Cheap to copy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadialGrid {
    n_points: usize,
    spacing: f64,
}

impl Default for RadialGrid {
    fn default() -> Self {
        Self::with_extent(DEFAULT_SPACING, DEFAULT_R_MAX).expect("default grid is valid")
    }
}

impl RadialGrid {
    pub fn new(spacing: f64, n_points: usize) -> Result<Self> {
        if !(spacing.is_finite() && spacing > 0.0) {
            return Err(Error::invalid(format!(
                "grid spacing must be positive, got {spacing}"
            )));
        }
        if n_points < 2 {
            return Err(Error::invalid(format!(
                "grid needs at least 2 points, got {n_points}"
            )));
        }
        Ok(Self { n_points, spacing })
    }

    /// Grid with spacing `h` whose last point is the multiple of `h` nearest to `r_max`.
    pub fn with_extent(spacing: f64, r_max: f64) -> Result<Self> {
        if !(r_max.is_finite() && r_max > 0.0) {
            return Err(Error::invalid(format!(
                "r_max must be positive, got {r_max}"
            )));
        }
        if !(spacing.is_finite() && spacing > 0.0) {
            return Err(Error::invalid(format!(
                "grid spacing must be positive, got {spacing}"
            )));
        }
        Self::new(spacing, (r_max / spacing).round() as usize)
    }

    pub fn len(&self) -> usize {
        self.n_points
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    /// Radius of the zero-based sample `i`.
    #[inline]
    pub fn r(&self, i: usize) -> f64 {
        (i + 1) as f64 * self.spacing
    }

    pub fn r_max(&self) -> f64 {
        self.r(self.n_points - 1)
    }

    pub fn r_values(&self) -> impl ExactSizeIterator<Item = f64> + '_ {
        (0..self.n_points).map(|i| self.r(i))
    }
}

/// A real function sampled on a [`RadialGrid`]. Values are always finite.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialFunction {
    grid: RadialGrid,
    values: Vec<f64>,
}

impl RadialFunction {
    pub fn new(grid: RadialGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::invalid(format!(
                "{} samples for a grid of {} points",
                values.len(),
                grid.len()
            )));
        }
        check_finite(&values)?;
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: RadialGrid) -> Self {
        Self {
            grid,
            values: vec![0.0; grid.len()],
        }
    }

    pub fn constant(grid: RadialGrid, c: f64) -> Result<Self> {
        Self::new(grid, vec![c; grid.len()])
    }

    pub fn from_fn(grid: RadialGrid, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(grid, grid.r_values().map(f).collect())
    }

    pub fn grid(&self) -> &RadialGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn last(&self) -> f64 {
        self.values[self.values.len() - 1]
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn scaled(&self, a: f64) -> Result<Self> {
        Self::new(self.grid, self.values.iter().map(|v| a * v).collect())
    }

    pub fn shifted(&self, c: f64) -> Result<Self> {
        Self::new(self.grid, self.values.iter().map(|v| v + c).collect())
    }

    /// Pointwise `a·self + b·other`.
    pub fn combine(&self, a: f64, other: &RadialFunction, b: f64) -> Result<Self> {
        self.ensure_same_grid(other)?;
        Self::new(
            self.grid,
            self.values
                .iter()
                .zip(&other.values)
                .map(|(x, y)| a * x + b * y)
                .collect(),
        )
    }

    /// Max-norm of the pointwise difference.
    pub fn max_abs_diff(&self, other: &RadialFunction) -> Result<f64> {
        self.ensure_same_grid(other)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .fold(0.0, |m, (x, y)| m.max((x - y).abs())))
    }

    pub(crate) fn ensure_same_grid(&self, other: &RadialFunction) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        Ok(())
    }
}

/// Radial measure applied inside [`integrate_radial`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Weight {
    Plain,
    RSquared,
    /// `4πr²`, the spherical volume element.
    Spherical,
}

impl Weight {
    fn at(self, r: f64) -> f64 {
        match self {
            Weight::Plain => 1.0,
            Weight::RSquared => r * r,
            Weight::Spherical => 4.0 * PI * r * r,
        }
    }
}

/// `∫₀^{r_max} f(r)·w(r) dr` by composite Simpson over the grid plus the virtual
/// origin node. An odd interval count closes with Simpson's 3/8 rule on the
/// last three intervals, so the rule stays exact for cubics.
pub fn integrate_radial(f: &RadialFunction, weight: Weight) -> Result<f64> {
    integrate_samples(&f.grid, &f.values, weight)
}

pub(crate) fn integrate_samples(grid: &RadialGrid, values: &[f64], weight: Weight) -> Result<f64> {
    if values.len() != grid.len() {
        return Err(Error::invalid("sample count does not match grid"));
    }
    check_finite(values)?;
    let nodes = weighted_nodes(grid, values, weight);
    Ok(composite_simpson(&nodes, grid.spacing()))
}

/// Integrand on the nodes `r = 0, h, 2h, …, r_max`.
pub(crate) fn weighted_nodes(grid: &RadialGrid, values: &[f64], weight: Weight) -> Vec<f64> {
    let mut nodes = Vec::with_capacity(values.len() + 1);
    nodes.push(weight.at(0.0) * origin_limit(values));
    nodes.extend(
        values
            .iter()
            .enumerate()
            .map(|(i, v)| weight.at(grid.r(i)) * v),
    );
    nodes
}

/// Extrapolated value at `r = 0` from the first samples (cubic when possible).
pub(crate) fn origin_limit(values: &[f64]) -> f64 {
    match values {
        [a, b, c, d, ..] => 4.0 * a - 6.0 * b + 4.0 * c - d,
        [a, b, ..] => 2.0 * a - b,
        [a] => *a,
        [] => 0.0,
    }
}

fn composite_simpson(g: &[f64], h: f64) -> f64 {
    let intervals = g.len().saturating_sub(1);
    match intervals {
        0 => 0.0,
        1 => 0.5 * h * (g[0] + g[1]),
        _ if intervals.is_multiple_of(2) => simpson_even(g, h),
        _ => {
            let split = intervals - 3;
            let head = if split > 0 {
                simpson_even(&g[..=split], h)
            } else {
                0.0
            };
            let t = &g[split..];
            head + 3.0 * h / 8.0 * (t[0] + 3.0 * t[1] + 3.0 * t[2] + t[3])
        }
    }
}

fn simpson_even(g: &[f64], h: f64) -> f64 {
    let n = g.len() - 1;
    debug_assert!(n.is_multiple_of(2));
    let mut s = g[0] + g[n];
    for (i, v) in g.iter().enumerate().take(n).skip(1) {
        s += if i % 2 == 1 { 4.0 * v } else { 2.0 * v };
    }
    s * h / 3.0
}

/// Running integral `C_j = ∫_{x_0}^{x_j} g` over equally spaced nodes. Each
/// interval uses the cubic through its four nearest nodes, so the result is
/// fourth-order accurate at every node and exact for cubics.
pub(crate) fn cumulative_integral(g: &[f64], h: f64) -> Vec<f64> {
    let m = g.len().saturating_sub(1);
    let mut out = vec![0.0; g.len()];
    for j in 0..m {
        let piece = if m < 3 {
            0.5 * h * (g[j] + g[j + 1])
        } else if j == 0 {
            h / 24.0 * (9.0 * g[0] + 19.0 * g[1] - 5.0 * g[2] + g[3])
        } else if j == m - 1 {
            h / 24.0 * (9.0 * g[m] + 19.0 * g[m - 1] - 5.0 * g[m - 2] + g[m - 3])
        } else {
            h / 24.0 * (-g[j - 1] + 13.0 * g[j] + 13.0 * g[j + 1] - g[j + 2])
        };
        out[j + 1] = out[j] + piece;
    }
    out
}

/// First derivative: central differences inside, second-order one-sided
/// stencils at both ends. Diagnostic use only.
pub fn differentiate(f: &RadialFunction) -> Result<RadialFunction> {
    let n = f.grid.len();
    if n < 5 {
        return Err(Error::invalid(format!(
            "differentiation needs at least 5 grid points, got {n}"
        )));
    }
    let v = &f.values;
    let h2 = 2.0 * f.grid.spacing();
    let mut d = vec![0.0; n];
    d[0] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / h2;
    for i in 1..n - 1 {
        d[i] = (v[i + 1] - v[i - 1]) / h2;
    }
    d[n - 1] = (3.0 * v[n - 1] - 4.0 * v[n - 2] + v[n - 3]) / h2;
    RadialFunction::new(f.grid, d)
}

pub(crate) fn check_finite(values: &[f64]) -> Result<()> {
    match values.iter().position(|v| !v.is_finite()) {
        Some(i) => Err(Error::invalid(format!(
            "non-finite sample {} at index {i}",
            values[i]
        ))),
        None => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(h: f64, r_max: f64) -> RadialGrid {
        RadialGrid::with_extent(h, r_max).unwrap()
    }

    #[test]
    fn grid_layout() {
        let g = grid(0.5, 3.0);
        assert_eq!(g.len(), 6);
        let r: Vec<_> = g.r_values().collect();
        assert_eq!(r, vec![0.5, 1.0, 1.5, 2.0, 2.5, 3.0]);
        assert_eq!(g.r_max(), 3.0);
        assert!(RadialGrid::new(-0.1, 10).is_err());
        assert!(RadialGrid::new(0.1, 1).is_err());
    }

    #[test]
    fn constants_invariants() {
        assert!(PhysicalConstants::default().validate().is_ok());
        assert!(PhysicalConstants::with_proton_mass(0.5).is_err());
        assert!(PhysicalConstants::with_proton_mass(-1.0).is_err());
        assert!(PhysicalConstants::with_proton_mass(1.0).is_ok());
    }

    #[test]
    fn rejects_non_finite() {
        let g = grid(0.1, 1.0);
        let mut v = vec![1.0; g.len()];
        v[3] = f64::NAN;
        assert!(RadialFunction::new(g, v.clone()).is_err());
        assert!(integrate_samples(&g, &v, Weight::Plain).is_err());
        assert!(RadialFunction::new(g, vec![1.0; 3]).is_err());
    }

    #[test]
    fn zero_function_integrates_to_zero() {
        let f = RadialFunction::zeros(grid(0.01, 5.0));
        for w in [Weight::Plain, Weight::RSquared, Weight::Spherical] {
            assert_eq!(integrate_radial(&f, w).unwrap(), 0.0);
        }
    }

    #[test]
    fn unit_function_r_squared() {
        for h in [1e-3, 3.0 / 1001.0, 0.1] {
            let f = RadialFunction::constant(grid(h, 3.0), 1.0).unwrap();
            let got = integrate_radial(&f, Weight::RSquared).unwrap();
            let exact = f.grid().r_max().powi(3) / 3.0;
            assert!(((got - exact) / exact).abs() < 1e-10, "h={h}: {got}");
        }
    }

    #[test]
    fn cubic_exact_plain_weight() {
        // Both interval parities.
        for n in [200, 201] {
            let g = RadialGrid::new(0.01, n).unwrap();
            let f =
                RadialFunction::from_fn(g, |r| 1.0 - 2.0 * r + 0.5 * r * r + r.powi(3)).unwrap();
            let b = g.r_max();
            let exact = b - b * b + b.powi(3) / 6.0 + b.powi(4) / 4.0;
            let got = integrate_radial(&f, Weight::Plain).unwrap();
            assert!(
                ((got - exact) / exact).abs() < 1e-12,
                "n={n}: {got} vs {exact}"
            );
        }
    }

    #[test]
    fn cumulative_matches_antiderivative_of_cubic() {
        let h = 0.05;
        let g: Vec<f64> = (0..41).map(|i| (i as f64 * h).powi(3) - 2.0).collect();
        let c = cumulative_integral(&g, h);
        for (i, ci) in c.iter().enumerate() {
            let x = i as f64 * h;
            assert!((ci - (x.powi(4) / 4.0 - 2.0 * x)).abs() < 1e-12);
        }
    }

    #[test]
    fn derivative_of_linear_and_constant() {
        let g = grid(0.01, 2.0);
        let lin = differentiate(&RadialFunction::from_fn(g, |r| r).unwrap()).unwrap();
        assert!(lin.values().iter().all(|d| (d - 1.0).abs() < 1e-10));
        let c = differentiate(&RadialFunction::constant(g, 4.2).unwrap()).unwrap();
        assert!(c.values().iter().all(|d| d.abs() < 1e-12));
        let tiny = RadialFunction::zeros(RadialGrid::new(0.1, 4).unwrap());
        assert!(differentiate(&tiny).is_err());
    }

    #[test]
    fn derivative_of_square_converges_second_order() {
        let err = |h: f64| {
            let f = RadialFunction::from_fn(grid(h, 2.0), |r| r * r).unwrap();
            let d = differentiate(&f).unwrap();
            d.grid()
                .r_values()
                .zip(d.values())
                .fold(0.0_f64, |m, (r, v)| m.max((v - 2.0 * r).abs()))
        };
        // Central differences are exact for quadratics; the ends are too.
        assert!(err(0.01) < 1e-10);
        // A non-polynomial function shows the h² trend.
        let err_exp = |h: f64| {
            let f = RadialFunction::from_fn(grid(h, 2.0), |r| (-r).exp() * r * r).unwrap();
            let d = differentiate(&f).unwrap();
            d.grid()
                .r_values()
                .zip(d.values())
                .fold(0.0_f64, |m, (r, v)| {
                    m.max((v - (2.0 * r - r * r) * (-r).exp()).abs())
                })
        };
        let (e1, e2, e3) = (err_exp(0.02), err_exp(0.01), err_exp(0.005));
        assert!((e1 / e2 - 4.0).abs() < 0.4, "{e1} {e2}");
        assert!((e2 / e3 - 4.0).abs() < 0.4, "{e2} {e3}");
    }
}
