use std::fmt;

use crate::scf::ResidualRecord;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Which of the two particles an eigensolve belonged to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Particle {
    Proton,
    Electron,
}

impl fmt::Display for Particle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Particle::Proton => f.write_str("proton"),
            Particle::Electron => f.write_str("electron"),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("functions live on different grids")]
    GridMismatch,

    #[error("energy {energy} is not below the asymptotic potential {tail_limit}")]
    InvalidEnergy { energy: f64, tail_limit: f64 },

    #[error("no bound state: {0}")]
    NoBoundState(String),

    #[error("eigenvalue search did not converge after {iterations} iterations (best bracket [{lo}, {hi}])")]
    ConvergenceFailure { lo: f64, hi: f64, iterations: usize },

    #[error("{particle} eigensolve failed: {source}")]
    Particle {
        particle: Particle,
        #[source]
        source: Box<Error>,
    },

    #[error("model failure at iteration {iteration}: {source}")]
    ModelFailure {
        iteration: usize,
        #[source]
        source: Box<Error>,
        history: Vec<ResidualRecord>,
    },

    #[error("self-consistent iteration did not converge in {iterations} iterations")]
    NonConvergence {
        iterations: usize,
        history: Vec<ResidualRecord>,
    },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    /// True when the root cause is the absence of a bound level, as opposed
    /// to bad input or a numerical failure.
    pub fn is_no_bound_state(&self) -> bool {
        match self {
            Error::NoBoundState(_) => true,
            Error::Particle { source, .. } | Error::ModelFailure { source, .. } => {
                source.is_no_bound_state()
            }
            _ => false,
        }
    }

    /// Innermost error beneath particle and model-failure wrappers.
    pub fn root(&self) -> &Error {
        match self {
            Error::Particle { source, .. } | Error::ModelFailure { source, .. } => source.root(),
            other => other,
        }
    }

    /// Residual history carried by SCF failures, if any.
    pub fn history(&self) -> Option<&[ResidualRecord]> {
        match self {
            Error::ModelFailure { history, .. } | Error::NonConvergence { history, .. } => {
                Some(history)
            }
            _ => None,
        }
    }

    /// The particle whose eigensolve failed, if the error is annotated with one.
    pub fn particle(&self) -> Option<Particle> {
        match self {
            Error::Particle { particle, .. } => Some(*particle),
            Error::ModelFailure { source, .. } => source.particle(),
            _ => None,
        }
    }
}
