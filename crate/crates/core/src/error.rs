use alloc::string::String;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("degenerate orbit: angular momentum {h:e} km^2/s below tolerance")]
    DegenerateOrbit { h: f64 },
    #[error("orbit is not elliptic (e = {e})")]
    NotElliptic { e: f64 },
    #[error("altitude {altitude_km:.1} km outside atmosphere table [{min_km}, {max_km}] km")]
    AltitudeOutOfRange {
        altitude_km: f64,
        min_km: f64,
        max_km: f64,
    },
    #[error("no relative RAAN drift between spacecraft and target")]
    NoRelativeDrift,
    #[error("drag restart loop exceeded {max} restarts")]
    DragRestartLimit { max: usize },
    #[error("altitude dropped to {altitude_km:.1} km at t = {t:.0} s")]
    AltitudeFloor { altitude_km: f64, t: f64 },
    #[error("mass {mass:.3} kg fell below the dry-mass floor at t = {t:.0} s")]
    MassFloor { mass: f64, t: f64 },
    #[error("integrator failed at t = {t:.3} s: {reason}")]
    Integrator { t: f64, reason: &'static str },
    #[error("no feasible tour found; best constraint violation {violation:.6}")]
    Infeasible { violation: f64 },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
