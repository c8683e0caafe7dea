use thiserror::Error;

use crate::scheme::{Level, SchemeClass};

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid dot state (n_e={n_e}, n_h={n_h}, s={s}, t={t}): {reason}")]
    InvalidState {
        n_e: u8,
        n_h: u8,
        s: i8,
        t: i8,
        reason: &'static str,
    },

    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("scheme {0:?} has no bright exciton")]
    NoBrightExciton(SchemeClass),

    #[error("scheme {0:?} cannot produce polarization-entangled pairs")]
    NotEntanglementCapable(SchemeClass),

    #[error("scheme {0:?} is not supported by the rate-graph builder (flat or tall cylindrical only)")]
    UnsupportedScheme(SchemeClass),

    #[error("frequency grid is empty")]
    EmptyGrid,

    #[error("singular transient generator starting from {initial:?}: {detail}")]
    SingularGenerator { initial: Level, detail: String },

    #[error("trajectory {trajectory} stalled in {level:?} at t={time}: zero total rate")]
    StalledTrajectory {
        trajectory: u64,
        level: Level,
        time: f64,
    },

    #[error("density operator is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    NotPositiveSemidefinite { min_eigenvalue: f64 },

    #[error("density operator is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("density operator trace is {trace}, expected 1")]
    NotNormalized { trace: f64 },

    #[error(
        "cavity misalignment theta={theta} leaves the u-polarized channel undamped \
         (Gamma*cos^2(theta) = 0); the density integral has no decaying mode"
    )]
    DegenerateCavityMode { theta: f64 },

    #[error("quadrature did not reach tolerance {tolerance:e} (estimated error {error:e})")]
    QuadratureFailed { tolerance: f64, error: f64 },
}
