//! Built-in scenario configurations.
//!
//! Five presets cover the standard study cases: setpoint stabilization,
//! linear and circular trajectory tracking, multi-waypoint repositioning and
//! the open-loop winch spin-down. Each returns a complete [`SimConfig`] that
//! a caller may further override.

use crate::sim::{SimConfig, TrajectorySpec};
use crate::uav::FullState;
use crate::Vec3;

/// Names of the built-in scenarios, in presentation order.
pub const NAMES: [&str; 5] = [
    "setpoint",
    "linear",
    "circular",
    "waypoints",
    "winder-decay",
];

/// One-line description for each built-in scenario.
pub fn describe(name: &str) -> Option<&'static str> {
    match name {
        "setpoint" => Some("climb from (0.5, -0.5, 1) to a fixed setpoint at (1, 1, 5)"),
        "linear" => Some("track a 10 s constant-speed ramp at fixed altitude, then hold"),
        "circular" => Some("orbit a 1 m circle at 0.2 rad/s and 5 m altitude"),
        "waypoints" => Some("visit a sequence of waypoints, re-anchoring at each arrival"),
        "winder-decay" => Some("free winch spin-down under viscous friction at hover"),
        _ => None,
    }
}

/// Look up a built-in configuration by name.
pub fn by_name(name: &str) -> Option<SimConfig> {
    match name {
        "setpoint" => Some(setpoint()),
        "linear" => Some(linear()),
        "circular" => Some(circular()),
        "waypoints" => Some(waypoints()),
        "winder-decay" => Some(winder_decay()),
        _ => None,
    }
}

fn initial_at(position: Vec3) -> FullState {
    let mut state = FullState::default();
    state.uav.position = position;
    state
}

/// Setpoint stabilization from (0.5, -0.5, 1) to (1, 1, 5).
pub fn setpoint() -> SimConfig {
    SimConfig {
        initial: initial_at(Vec3::new(0.5, -0.5, 1.0)),
        trajectory: TrajectorySpec::Setpoint {
            target: Vec3::new(1.0, 1.0, 5.0),
            yaw: 0.0,
        },
        duration: 30.0,
        ..SimConfig::default()
    }
}

/// Constant-altitude linear ramp covering its span in 10 s, then hold.
pub fn linear() -> SimConfig {
    let start = Vec3::new(0.5, -0.5, 3.0);
    let end = Vec3::new(2.0, 1.0, 3.0);
    let speed = (end - start).norm() / 10.0;
    SimConfig {
        initial: initial_at(start),
        trajectory: TrajectorySpec::Linear {
            start,
            end,
            speed,
            yaw: 0.0,
        },
        duration: 30.0,
        ..SimConfig::default()
    }
}

/// Circular orbit: R = 1 m, 0.2 rad/s, 5 m altitude, centred over the anchor.
pub fn circular() -> SimConfig {
    SimConfig {
        initial: initial_at(Vec3::new(1.0, 0.0, 5.0)),
        trajectory: TrajectorySpec::Circular {
            center_x: 0.0,
            center_y: 0.0,
            radius: 1.0,
            angular_rate: 0.2,
            altitude: 5.0,
            yaw: 0.0,
        },
        // transient plus two full periods (2 * 2*pi/0.2 ~ 62.8 s)
        duration: 75.0,
        ..SimConfig::default()
    }
}

/// Three-waypoint repositioning run.
pub fn waypoints() -> SimConfig {
    SimConfig {
        initial: initial_at(Vec3::new(0.5, -0.5, 1.0)),
        trajectory: TrajectorySpec::Waypoints {
            points: vec![
                Vec3::new(1.0, 1.0, 3.0),
                Vec3::new(-1.0, 1.0, 4.0),
                Vec3::new(0.5, -1.0, 2.0),
            ],
            tolerance: 0.05,
            yaw: 0.0,
        },
        duration: 40.0,
        ..SimConfig::default()
    }
}

/// Open-loop winch spin-down: the UAV hovers directly above the anchor while
/// the drum decelerates under viscous friction alone. The drum inertia is
/// frozen at its initial value so the rate decay has a closed form.
pub fn winder_decay() -> SimConfig {
    let mut config = SimConfig {
        initial: initial_at(Vec3::new(0.0, 0.0, 5.0)),
        trajectory: TrajectorySpec::Setpoint {
            target: Vec3::new(0.0, 0.0, 5.0),
            yaw: 0.0,
        },
        duration: 5.0,
        winch_control: false,
        ..SimConfig::default()
    };
    config.initial.winder.rate = 10.0;
    let released = 1.05 * 5.0;
    let mass = config.winder.base_mass
        + (config.winder.max_length - released) * config.winder.tether_density;
    config.winder.frozen_inertia = Some(
        0.5 * mass
            * (config.winder.radius * config.winder.radius
                + config.winder.inner_radius * config.winder.inner_radius),
    );
    config
}

/// Hover at the current position: an exact closed-loop equilibrium used by
/// the start-at-equilibrium checks.
pub fn hover_equilibrium(duration: f64) -> SimConfig {
    SimConfig {
        initial: initial_at(Vec3::new(0.0, 0.0, 5.0)),
        trajectory: TrajectorySpec::Setpoint {
            target: Vec3::new(0.0, 0.0, 5.0),
            yaw: 0.0,
        },
        duration,
        ..SimConfig::default()
    }
}
