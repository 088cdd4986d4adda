//! Standard hydrogen: analytic s-levels of the Coulomb problem in relative
//! coordinates, and the comparison table against a self-consistent solution.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scf::EigenstateSolution;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoulombLevel {
    pub n: u32,
    /// Hartree.
    pub energy: f64,
    pub reduced_mass: f64,
}

/// `m_e·m_p / (m_e + m_p)`.
pub fn reduced_mass(m_p: f64, m_e: f64) -> Result<f64> {
    for (name, m) in [("m_p", m_p), ("m_e", m_e)] {
        if !(m.is_finite() && m > 0.0) {
            return Err(Error::invalid(format!("{name} must be positive, got {m}")));
        }
    }
    Ok(m_e * m_p / (m_e + m_p))
}

/// `ε_n = −m̃/(2n²)`.
pub fn coulomb_level(reduced_mass: f64, n: u32) -> CoulombLevel {
    CoulombLevel {
        n,
        energy: -reduced_mass / (2.0 * f64::from(n).powi(2)),
        reduced_mass,
    }
}

/// Levels `n = 1..=n_max`.
pub fn coulomb_levels(reduced_mass: f64, n_max: u32) -> Vec<CoulombLevel> {
    (1..=n_max)
        .map(|n| coulomb_level(reduced_mass, n))
        .collect()
}

/// What the comparison needs from a model run; extracted from a solution or
/// read back from a run summary.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelLevels {
    pub mass_p: f64,
    pub mass_e: f64,
    pub e_p: f64,
    pub e_e: f64,
    pub e_total: f64,
    /// `⟨r⟩` of the electron state.
    pub electron_r_mean: f64,
    /// `⟨r²⟩` of the electron state.
    pub electron_r2_mean: f64,
    pub converged: bool,
}

impl ModelLevels {
    pub fn from_solution(solution: &EigenstateSolution) -> Result<Self> {
        Ok(Self {
            mass_p: solution.psi_p.mass,
            mass_e: solution.psi_e.mass,
            e_p: solution.e_p,
            e_e: solution.e_e,
            e_total: solution.total_energy(),
            electron_r_mean: solution.psi_e.moment(1)?,
            electron_r2_mean: solution.psi_e.moment(2)?,
            converged: solution.converged,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub n: u32,
    pub coulomb_energy: f64,
    pub electron_delta: f64,
    pub electron_delta_rel: f64,
    pub total_delta: f64,
    pub total_delta_rel: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentComparison {
    pub r_mean: f64,
    /// `3/(2m̃)` for the Coulomb 1s state.
    pub r_mean_coulomb: f64,
    pub r2_mean: f64,
    /// `3/m̃²` for the Coulomb 1s state.
    pub r2_mean_coulomb: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub reduced_mass: f64,
    pub e_p: f64,
    pub e_e: f64,
    pub e_total: f64,
    pub rows: Vec<ComparisonRow>,
    pub moments: MomentComparison,
}

pub const COMPARISON_CSV_HEADER: &str =
    "n,coulomb_energy,electron_delta,electron_delta_rel,total_delta,total_delta_rel";

impl ComparisonReport {
    pub fn to_csv(&self) -> String {
        let mut s = String::from(COMPARISON_CSV_HEADER);
        s.push('\n');
        for r in &self.rows {
            s.push_str(&format!(
                "{},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}\n",
                r.n,
                r.coulomb_energy,
                r.electron_delta,
                r.electron_delta_rel,
                r.total_delta,
                r.total_delta_rel
            ));
        }
        s
    }
}

/// Tabulates the model's levels against the Coulomb spectrum with the same
/// reduced mass.
pub fn compare_models(solution: &EigenstateSolution, n_max: u32) -> Result<ComparisonReport> {
    compare_levels(&ModelLevels::from_solution(solution)?, n_max)
}

pub fn compare_levels(model: &ModelLevels, n_max: u32) -> Result<ComparisonReport> {
    if n_max == 0 {
        return Err(Error::invalid("n_max must be at least 1"));
    }
    if !model.converged {
        return Err(Error::invalid("cannot compare an unconverged solution"));
    }
    let mu = reduced_mass(model.mass_p, model.mass_e)?;
    let rows = coulomb_levels(mu, n_max)
        .into_iter()
        .map(|lvl| ComparisonRow {
            n: lvl.n,
            coulomb_energy: lvl.energy,
            electron_delta: model.e_e - lvl.energy,
            electron_delta_rel: (model.e_e - lvl.energy) / lvl.energy.abs(),
            total_delta: model.e_total - lvl.energy,
            total_delta_rel: (model.e_total - lvl.energy) / lvl.energy.abs(),
        })
        .collect();
    Ok(ComparisonReport {
        reduced_mass: mu,
        e_p: model.e_p,
        e_e: model.e_e,
        e_total: model.e_total,
        rows,
        moments: MomentComparison {
            r_mean: model.electron_r_mean,
            r_mean_coulomb: 1.5 / mu,
            r2_mean: model.electron_r2_mean,
            r2_mean_coulomb: 3.0 / (mu * mu),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduced_mass_cases() {
        assert_eq!(reduced_mass(1.0, 1.0).unwrap(), 0.5);
        assert!((reduced_mass(1e12, 1.0).unwrap() - 1.0).abs() < 1e-12);
        // 1836.15267343 / 1837.15267343, evaluated independently.
        let expected = 1.0 - 1.0 / 1_837.152_673_43;
        assert!((reduced_mass(1_836.152_673_43, 1.0).unwrap() - expected).abs() < 1e-15);
        assert!((expected - 0.999_455_679).abs() < 1e-9);
        assert!(reduced_mass(0.0, 1.0).is_err());
        assert!(reduced_mass(1.0, -2.0).is_err());
    }

    #[test]
    fn level_values() {
        let lv = coulomb_levels(1.0, 3);
        assert_eq!(lv.len(), 3);
        assert_eq!(lv[0].energy, -0.5);
        assert!((lv[2].energy + 1.0 / 18.0).abs() < 1e-16);
        assert_eq!(coulomb_levels(0.5, 1)[0].energy, -0.25);
        assert!(coulomb_levels(1.0, 0).is_empty());
    }

    #[test]
    fn levels_increase_toward_zero() {
        let lv = coulomb_levels(0.75, 12);
        assert!(lv.iter().all(|l| l.energy < 0.0));
        assert!(lv.windows(2).all(|w| w[1].energy > w[0].energy));
    }

    fn model() -> ModelLevels {
        ModelLevels {
            mass_p: 1e12,
            mass_e: 1.0,
            e_p: -0.1,
            e_e: -0.5,
            e_total: -0.6,
            electron_r_mean: 1.5,
            electron_r2_mean: 3.0,
            converged: true,
        }
    }

    #[test]
    fn report_shape_and_errors() {
        let rep = compare_levels(&model(), 4).unwrap();
        assert_eq!(rep.rows.len(), 4);
        assert!(rep
            .rows
            .iter()
            .all(|r| r.total_delta.is_finite() && r.electron_delta_rel.is_finite()));
        assert!(rep.rows[0].electron_delta.abs() < 1e-11);
        assert_eq!(rep.to_csv().lines().count(), 5);
        assert!(compare_levels(&model(), 0).is_err());
        let unconverged = ModelLevels {
            converged: false,
            ..model()
        };
        assert!(compare_levels(&unconverged, 2).is_err());
    }
}
