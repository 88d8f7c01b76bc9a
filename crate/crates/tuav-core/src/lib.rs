//! # tuav-core
//!
//! Dynamics and control library for a tethered UAV connected to a ground
//! winch through a slack (catenary) tether.
//!
//! The crate models the full 14-state system -- twelve UAV states (position,
//! velocity, attitude, body rates) plus the winch angle and rate -- and closes
//! the loop with nonlinear backstepping controllers for altitude, attitude,
//! horizontal position and tether length. A fixed-step simulation engine
//! integrates the coupled system and records enough telemetry to certify the
//! controllers' Lyapunov descent numerically.
//!
//! ## Modules
//!
//! - [`catenary`]: tether curve evaluation, two-point fitting, tension resolution
//! - [`winder`]: ground winch mass/inertia model and equation of motion
//! - [`uav`]: rigid-body UAV dynamics and the stacked 14-state derivative
//! - [`control`]: error junction, backstepping laws, Lyapunov instrumentation
//! - [`sim`]: trajectory generation, closed-loop integration, metrics
//! - [`scenarios`]: built-in scenario configurations

pub mod catenary;
pub mod control;
pub mod scenarios;
pub mod sim;
pub mod uav;
pub mod winder;

mod error;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// 3D vector in the inertial frame [m], [m/s], [N] depending on context.
pub type Vec3 = nalgebra::Vector3<f64>;

/// 3x3 matrix.
pub type Mat3 = nalgebra::Matrix3<f64>;
