use thiserror::Error;

/// Errors raised by the dynamics, fitting and control routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A scalar argument violated its domain (e.g. a non-positive length).
    #[error("domain error: {name} = {value} violates {constraint}")]
    Domain {
        name: &'static str,
        value: f64,
        constraint: &'static str,
    },

    /// Requested tether length leaves no slack over the straight-line distance.
    #[error("infeasible slack: length {length} <= anchor-UAV distance {distance}")]
    InfeasibleSlack { length: f64, distance: f64 },

    /// Requested tether length exceeds what the spool holds.
    #[error("over-length: requested {length} exceeds maximum tether length {max}")]
    OverLength { length: f64, max: f64 },

    /// UAV is directly above the anchor; the catenary plane is undefined.
    #[error("degenerate vertical geometry: horizontal span is zero")]
    DegenerateVertical,

    /// Two points that must differ coincide.
    #[error("degenerate geometry: points coincide")]
    DegenerateGeometry,

    /// Iterative solver exhausted its iteration budget.
    #[error("solver did not converge within {iterations} iterations (residual {residual})")]
    NoConvergence { iterations: usize, residual: f64 },

    /// Attitude too close to the thrust-inversion singularity.
    #[error("attitude singularity: |cos(pitch)*cos(roll)| = {value} below {limit}")]
    Singularity { value: f64, limit: f64 },

    /// Thrust magnitude too small to invert for attitude references.
    #[error("thrust inversion failed: |thrust| = {value} too small")]
    ThrustInversion { value: f64 },

    /// Released tether length left the physical spool range.
    #[error("released length {released} outside spool range [0, {max}]")]
    SpoolRange { released: f64, max: f64 },

    /// A state or derivative stopped being finite during integration.
    #[error("numerical blowup at t = {time}")]
    NumericalBlowup { time: f64 },
}

impl Error {
    pub(crate) fn domain(name: &'static str, value: f64, constraint: &'static str) -> Self {
        Error::Domain {
            name,
            value,
            constraint,
        }
    }
}
