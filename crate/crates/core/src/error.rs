use thiserror::Error;

/// Errors raised by the simulation and verification layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("drive not evaluable at t = {t} (table covers [{start}, {end}])")]
    DriveOutOfRange { t: f64, start: f64, end: f64 },

    #[error("magnetic field is not axial: B = ({0}, {1}, {2})")]
    NonAxialField(f64, f64, f64),

    #[error("non-finite state encountered at t = {time}")]
    NonFinite { time: f64 },

    #[error("grid support violated: boundary mass {mass:.3e} exceeds {tolerance:.3e}")]
    GridSupport { mass: f64, tolerance: f64 },

    #[error("quadrature order too small: off-shell leakage {leakage:.3e}")]
    QuadratureLeakage { leakage: f64 },

    #[error("time step {dt} does not divide period {period}")]
    StepMismatch { dt: f64, period: f64 },

    #[error("time step {dt} too coarse for the drive time scale {scale}")]
    StepTooCoarse { dt: f64, scale: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn ensure(cond: bool, name: &'static str, reason: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            reason: reason(),
        })
    }
}
