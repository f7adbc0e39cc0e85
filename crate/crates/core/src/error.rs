use std::path::PathBuf;

use thiserror::Error;

use crate::variants::Variant;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("value {0} does not fit in Q2.30 (|v| must be < 2)")]
    FixedOverflow(f64),

    #[error("micro-rotation index {0} outside [0, 31]")]
    IndexOutOfRange(u32),

    #[error("angle must be non-zero")]
    ZeroAngle,

    #[error("angle must be finite, got {0}")]
    NonFinite(f64),

    #[error("angle {0} outside [-pi/4, pi/4]")]
    AngleOutOfRange(f64),

    #[error("iteration count {got} outside [1, {max}]")]
    InvalidIterations { got: usize, max: usize },

    #[error("variant {0} has no micro-rotation coefficients")]
    NoCoefficients(Variant),

    #[error("inner polynomial must have a zero constant term")]
    NonZeroConstant,

    #[error("coefficient {0} is not a dyadic rational")]
    NotDyadic(String),

    #[error("datapath is in phase {0:?}; expected {1:?}")]
    PhaseViolation(crate::hwsim::Phase, crate::hwsim::Phase),

    #[error("datapath already signalled done")]
    AlreadyDone,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("report has no cell for {variant} at {iterations} iterations ({function})")]
    MissingCell {
        variant: Variant,
        iterations: usize,
        function: crate::bench::Function,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}
