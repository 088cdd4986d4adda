mod common;

use twobody_scf::coulomb_ref::{compare_models, coulomb_levels, reduced_mass};
use twobody_scf::radial_ode::find_bound_state;
use twobody_scf::scf::{assemble_solution, ScfConfig};
use twobody_scf::{EffectivePotential, PhysicalConstants, RadialFunction, RadialGrid};

#[test]
fn hydrogen_spectrum_values() {
    let mu = reduced_mass(1_836.152_673_43, 1.0).unwrap();
    assert!((mu - 0.999_455_679_4).abs() < 1e-10);
    let lv = coulomb_levels(1.0, 3);
    assert_eq!(lv[0].energy, -0.5);
    assert_eq!(lv[1].energy, -0.125);
}

#[test]
fn heavy_proton_coulomb_electron_matches_hydrogen() {
    let g = RadialGrid::default();
    let phi = RadialFunction::from_fn(g, |r| 1.0 / r).unwrap();
    let pot = EffectivePotential::coulomb(g, 1.0).unwrap();
    let psi_e = find_bound_state(&pot, 1.0, 0, (-2.0, -1e-4)).unwrap();
    let mut psi_p = psi_e.clone();
    psi_p.mass = 1e12;
    let cfg = ScfConfig {
        constants: PhysicalConstants::with_proton_mass(1e12).unwrap(),
        ..ScfConfig::new(g)
    };
    let sol = assemble_solution(&cfg, phi, psi_p, psi_e, true, 1, Vec::new(), 0.0).unwrap();
    let rep = compare_models(&sol, 3).unwrap();
    assert_eq!(rep.rows.len(), 3);
    assert!(rep.rows[0].electron_delta_rel.abs() < 1e-6);
    assert!(rep.rows.iter().all(|r| r.total_delta.is_finite()));
    assert!((rep.moments.r_mean - rep.moments.r_mean_coulomb).abs() < 1e-6);
    assert!((rep.moments.r2_mean - rep.moments.r2_mean_coulomb).abs() < 1e-6);
    assert!(compare_models(&sol, 0).is_err());

    let json = serde_json::to_string(&rep).unwrap();
    let back: twobody_scf::coulomb_ref::ComparisonReport = serde_json::from_str(&json).unwrap();
    assert_eq!(back, rep);
}

#[test]
fn converged_well_solution_compares() {
    let rep = compare_models(common::well_solution(), 2).unwrap();
    assert!((rep.reduced_mass - 5.0 / 6.0).abs() < 1e-15);
    assert_eq!(rep.to_csv().lines().count(), 3);
}
