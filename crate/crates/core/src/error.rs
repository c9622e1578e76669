use thiserror::Error;

/// Errors raised by the channel, lens and analysis routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("degenerate geometry: transmitter and receiver coincide")]
    DegenerateGeometry,
    #[error("light incident from below surface (cos = {0:.3e})")]
    IncidentFromBelow(f64),
    #[error("voltage exceeds wetting limit (k*v^2/d = {0:.6})")]
    VoltageExceedsWettingLimit(f64),
    #[error("unreachable contact angle {0:.6} rad")]
    UnreachableContactAngle(f64),
    #[error("tilt not actuatable on {wall} wall: needs {volts:.1} V, limit {limit:.1} V")]
    TiltNotActuatable {
        wall: &'static str,
        volts: f64,
        limit: f64,
    },
    #[error("no feasible lens tilt found")]
    Infeasible,
    #[error("Beta pole at ({0}, {1})")]
    BetaPole(f64, f64),
    #[error("endpoint singularity: upper limit {u2} with q = {q}")]
    EndpointSingularity { u2: f64, q: f64 },
    #[error("argument {0} outside supported domain")]
    UnsupportedDomain(f64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("line {line}: {msg}")]
    Config { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
