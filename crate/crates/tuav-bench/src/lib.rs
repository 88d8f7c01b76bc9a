//! Shared fixtures for the benchmark suite.

use tuav_core::catenary::TensionVector;
use tuav_core::uav::{ControlInputs, FullState};
use tuav_core::Vec3;

/// A mid-flight state representative of the tracking scenarios.
pub fn flight_state() -> FullState {
    let mut state = FullState::default();
    state.uav.position = Vec3::new(0.8, 0.4, 3.5);
    state.uav.velocity = Vec3::new(0.2, -0.1, 0.6);
    state.uav.attitude = Vec3::new(0.03, -0.02, 0.0);
    state.uav.rates = Vec3::new(0.05, 0.04, -0.01);
    state.winder.angle = 1.05 * state.uav.position.norm() / 0.05;
    state.winder.rate = 0.4;
    state
}

/// Hover-scale inputs for the derivative benchmarks.
pub fn flight_inputs() -> ControlInputs {
    ControlInputs {
        thrust: 27.9,
        roll_moment: 0.02,
        pitch_moment: -0.01,
        yaw_moment: 0.005,
        winch_torque: 0.08,
    }
}

/// A small representative tension.
pub fn flight_tension() -> TensionVector {
    tuav_core::catenary::resolve_tension(0.15, -0.1, 1.3).unwrap()
}
