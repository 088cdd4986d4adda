#![allow(dead_code)]

use std::sync::OnceLock;

use twobody_scf::scf::{self, Confinement, EigenstateSolution, ScfConfig};
use twobody_scf::{PhysicalConstants, RadialGrid};

/// Adaptive Simpson on `[a, b]`, independent of the library's grid rules.
pub fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson(f: &dyn Fn(f64) -> f64, a: f64, fa: f64, b: f64, fb: f64) -> (f64, f64, f64) {
        let m = 0.5 * (a + b);
        let fm = f(m);
        (m, fm, (b - a) / 6.0 * (fa + 4.0 * fm + fb))
    }
    #[allow(clippy::too_many_arguments)]
    fn recurse(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        fa: f64,
        b: f64,
        fb: f64,
        m: f64,
        fm: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let (lm, flm, left) = simpson(f, a, fa, m, fm);
        let (rm, frm, right) = simpson(f, m, fm, b, fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        recurse(f, a, fa, m, fm, lm, flm, left, tol / 2.0, depth - 1)
            + recurse(f, m, fm, b, fb, rm, frm, right, tol / 2.0, depth - 1)
    }
    let (fa, fb) = (f(a), f(b));
    let (m, fm, whole) = simpson(f, a, fa, b, fb);
    recurse(f, a, fa, b, fb, m, fm, whole, tol, 50)
}

/// Potential of a unit 1s electron cloud (a = 1), closed form.
pub fn screened_electron_potential(r: f64) -> f64 {
    -(1.0 / r - (-2.0 * r).exp() * (1.0 / r + 1.0))
}

/// Proton and electron sharing a Gaussian well; the configuration used for
/// every converged-solution check.
pub fn well_config() -> ScfConfig {
    ScfConfig {
        constants: PhysicalConstants::with_proton_mass(5.0).unwrap(),
        confinement: Some(Confinement {
            depth: 2.0,
            radius: 1.0,
        }),
        ..ScfConfig::new(RadialGrid::with_extent(0.01, 30.0).unwrap())
    }
}

pub const WELL_TOML: &str =
    "mass_p = 5\ngrid_spacing = 0.01\nr_max = 30\ntrap_depth = 2\ntrap_radius = 1\n";

pub fn well_solution() -> &'static EigenstateSolution {
    static SOL: OnceLock<EigenstateSolution> = OnceLock::new();
    SOL.get_or_init(|| scf::scf_solve(&well_config()).expect("well run converges"))
}
