mod common;

use std::f64::consts::PI;

use proptest::prelude::*;
use twobody_scf::poisson::{charge_density, poisson_residual, solve_potential};
use twobody_scf::radial_ode::find_bound_state;
use twobody_scf::{ChargeDensity, EffectivePotential, RadialFunction, RadialGrid};

fn one_s_electron_density(g: RadialGrid) -> ChargeDensity {
    ChargeDensity::new(RadialFunction::from_fn(g, |r| -(-2.0 * r).exp() / PI).unwrap())
}

#[test]
fn closed_form_agrees_with_quadrature_oracle() {
    // φ(r) = Q(r)/r + ∫_r^∞ 4πρ s ds for ρ = −e^{−2s}/π.
    for r in [0.1, 1.0, 3.0] {
        let inner = common::adaptive_simpson(&|s| -4.0 * s * s * (-2.0 * s).exp(), 0.0, r, 1e-13);
        let outer = common::adaptive_simpson(&|s| -4.0 * s * (-2.0 * s).exp(), r, 60.0, 1e-13);
        let oracle = inner / r + outer;
        assert!((oracle - common::screened_electron_potential(r)).abs() < 1e-11);
    }
}

#[test]
fn screened_potential_of_one_s_cloud() {
    let g = RadialGrid::default();
    let phi = solve_potential(&one_s_electron_density(g)).unwrap();
    let worst = g.r_values().zip(phi.values()).fold(0.0_f64, |m, (r, p)| {
        m.max((p - common::screened_electron_potential(r)).abs())
    });
    assert!(worst < 1e-5, "max error {worst}");
}

#[test]
fn residual_shrinks_fourfold_per_halving() {
    let mut res = Vec::new();
    for h in [4e-3, 2e-3, 1e-3] {
        let g = RadialGrid::with_extent(h, 40.0).unwrap();
        let rho = one_s_electron_density(g);
        let phi = solve_potential(&rho).unwrap();
        let r = poisson_residual(&phi, &rho).unwrap();
        assert!(r <= 10.0 * h * h * 4.0 * PI * rho.rho.max_abs());
        res.push(r);
    }
    for w in res.windows(2) {
        let ratio = w[0] / w[1];
        assert!((3.5..4.5).contains(&ratio), "ratio {ratio}");
    }
}

#[test]
fn narrow_gaussian_looks_like_a_point_charge() {
    let g = RadialGrid::with_extent(1e-3, 20.0).unwrap();
    let width: f64 = 0.05;
    let norm = 1.0 / (PI.powf(1.5) * width.powi(3));
    let rho = ChargeDensity::new(
        RadialFunction::from_fn(g, |r| norm * (-(r / width).powi(2)).exp()).unwrap(),
    );
    let phi = solve_potential(&rho).unwrap();
    let i = (1.0 / g.spacing()).round() as usize - 1;
    assert!((g.r(i) - 1.0).abs() < 1e-12);
    assert!((phi.values()[i] - 1.0).abs() < 1e-4);
}

#[test]
fn two_cloud_density_is_neutral_with_sign_change() {
    let g = RadialGrid::default();
    let hydrogen_like = |a: f64| {
        let pot = EffectivePotential::coulomb(g, 1.0).unwrap();
        // A 1s state of radius a is the Coulomb ground state with mass 1/a.
        find_bound_state(&pot, 1.0 / a, 0, (-2.0 / (a * a), -1e-4)).unwrap()
    };
    let (p, e) = (hydrogen_like(0.05), hydrogen_like(1.0));
    let rho = charge_density(&p, &e).unwrap();
    assert!(rho.rho.values()[0] > 0.0);
    let at_one = (1.0 / g.spacing()) as usize - 1;
    assert!(rho.rho.values()[at_one] < 0.0);
    assert!(rho.total_charge().unwrap().abs() < 1e-8);
}

#[test]
fn unnormalized_state_rejected() {
    let g = RadialGrid::with_extent(0.01, 20.0).unwrap();
    let pot = EffectivePotential::coulomb(g, 1.0).unwrap();
    let s = find_bound_state(&pot, 1.0, 0, (-2.0, -1e-4)).unwrap();
    let mut bad = s.clone();
    bad.psi = s.psi.scaled(1.1).unwrap();
    assert!(charge_density(&bad, &s).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]
    #[test]
    fn potential_is_linear_in_density(a in -3.0..3.0_f64, b in -3.0..3.0_f64, w in 0.3..2.0_f64) {
        let g = RadialGrid::with_extent(0.01, 20.0).unwrap();
        let r1 = ChargeDensity::new(RadialFunction::from_fn(g, |r| (-r / w).exp()).unwrap());
        let r2 = ChargeDensity::new(RadialFunction::from_fn(g, |r| (1.0 - r) * (-r * r).exp()).unwrap());
        let both = ChargeDensity::new(r1.rho.combine(a, &r2.rho, b).unwrap());
        let lhs = solve_potential(&both).unwrap();
        let rhs = solve_potential(&r1).unwrap().combine(a, &solve_potential(&r2).unwrap(), b).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs).unwrap() <= 1e-10);
    }
}
