//! Rigid-body UAV dynamics and the stacked 14-state derivative.
//!
//! State ordering follows the position/velocity interleaving used throughout
//! the crate: `(x, x_dot, y, y_dot, z, z_dot, roll, roll_rate, pitch,
//! pitch_rate, yaw, yaw_rate, winch_angle, winch_rate)`.
//!
//! The translational equations resolve thrust through the attitude rotation,
//! subtract linear drag and apply the tether tension components from the
//! fitted catenary. A fidelity flag optionally restores the body-frame
//! gravity-tilt terms in the horizontal rows; the default model keeps gravity
//! purely vertical, which is required for the horizontal axes to stay
//! controllable through attitude near hover.

use crate::catenary::TensionVector;
use crate::winder::{self, WinderParams, WinderState};
use crate::{Error, Mat3, Result, Vec3};

/// UAV physical parameters and plant-model fidelity switches.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UavParams {
    /// Mass [kg].
    pub mass: f64,
    /// Gravitational acceleration [m/s^2].
    pub gravity: f64,
    /// Principal moments of inertia (Ixx, Iyy, Izz) [kg*m^2].
    pub inertia: Vec3,
    /// Linear drag coefficients per axis [N*s/m].
    pub drag: Vec3,
    /// Sign of the gravity term in the vertical acceleration row:
    /// -1 points gravity downward (standard); +1 flips it.
    pub gravity_sign: f64,
    /// Restore the body-frame gravity-tilt terms in the horizontal rows.
    pub body_gravity_xy: bool,
}

impl Default for UavParams {
    fn default() -> Self {
        Self {
            mass: 2.84,
            gravity: 9.81,
            inertia: Vec3::new(0.5192, 0.4929, 0.0947),
            drag: Vec3::new(0.3, 0.3, 0.3),
            gravity_sign: -1.0,
            body_gravity_xy: false,
        }
    }
}

impl UavParams {
    pub fn validate(&self) -> Result<()> {
        if self.mass <= 0.0 {
            return Err(Error::domain("uav.m", self.mass, "m > 0"));
        }
        for (name, value) in [
            ("uav.ixx", self.inertia.x),
            ("uav.iyy", self.inertia.y),
            ("uav.izz", self.inertia.z),
        ] {
            if value <= 0.0 {
                return Err(Error::domain(name, value, "inertia > 0"));
            }
        }
        for (name, value) in [
            ("uav.ax", self.drag.x),
            ("uav.ay", self.drag.y),
            ("uav.az", self.drag.z),
        ] {
            if value < 0.0 {
                return Err(Error::domain(name, value, "drag >= 0"));
            }
        }
        if self.gravity <= 0.0 {
            return Err(Error::domain("uav.g", self.gravity, "g > 0"));
        }
        if self.gravity_sign != 1.0 && self.gravity_sign != -1.0 {
            return Err(Error::domain(
                "uav.gravity_sign",
                self.gravity_sign,
                "gravity_sign in {+1, -1}",
            ));
        }
        Ok(())
    }
}

/// Twelve UAV states.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct UavState {
    /// Inertial position (x, y, z) [m].
    pub position: Vec3,
    /// Inertial velocity [m/s].
    pub velocity: Vec3,
    /// Euler angles (roll, pitch, yaw) [rad].
    pub attitude: Vec3,
    /// Euler angle rates [rad/s].
    pub rates: Vec3,
}

/// The complete 14-dimensional system state.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FullState {
    pub uav: UavState,
    pub winder: WinderState,
}

impl FullState {
    /// Flatten into the interleaved state array.
    pub fn to_array(&self) -> [f64; 14] {
        let u = &self.uav;
        [
            u.position.x,
            u.velocity.x,
            u.position.y,
            u.velocity.y,
            u.position.z,
            u.velocity.z,
            u.attitude.x,
            u.rates.x,
            u.attitude.y,
            u.rates.y,
            u.attitude.z,
            u.rates.z,
            self.winder.angle,
            self.winder.rate,
        ]
    }

    pub fn from_array(a: &[f64; 14]) -> Self {
        Self {
            uav: UavState {
                position: Vec3::new(a[0], a[2], a[4]),
                velocity: Vec3::new(a[1], a[3], a[5]),
                attitude: Vec3::new(a[6], a[8], a[10]),
                rates: Vec3::new(a[7], a[9], a[11]),
            },
            winder: WinderState {
                angle: a[12],
                rate: a[13],
            },
        }
    }

    pub fn is_finite(&self) -> bool {
        self.to_array().iter().all(|v| v.is_finite())
    }
}

/// Actuator commands for one control tick.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ControlInputs {
    /// Collective lift thrust [N].
    pub thrust: f64,
    /// Roll moment [N*m].
    pub roll_moment: f64,
    /// Pitch moment [N*m].
    pub pitch_moment: f64,
    /// Yaw moment [N*m].
    pub yaw_moment: f64,
    /// Winch torque [N*m].
    pub winch_torque: f64,
}

/// Optional symmetric saturation bounds on the actuator commands.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct InputLimits {
    pub thrust: Option<f64>,
    pub moment: Option<f64>,
    pub winch_torque: Option<f64>,
}

impl ControlInputs {
    /// Apply symmetric saturation where limits are configured.
    pub fn saturate(&self, limits: &InputLimits) -> Self {
        let clamp = |v: f64, lim: Option<f64>| match lim {
            Some(l) => v.clamp(-l, l),
            None => v,
        };
        Self {
            thrust: clamp(self.thrust, limits.thrust),
            roll_moment: clamp(self.roll_moment, limits.moment),
            pitch_moment: clamp(self.pitch_moment, limits.moment),
            yaw_moment: clamp(self.yaw_moment, limits.moment),
            winch_torque: clamp(self.winch_torque, limits.winch_torque),
        }
    }
}

/// Rotation matrix from the body frame to the inertial frame (ZYX Euler).
pub fn rotation_matrix(roll: f64, pitch: f64, yaw: f64) -> Mat3 {
    let (sp, cp) = roll.sin_cos();
    let (st, ct) = pitch.sin_cos();
    let (ss, cs) = yaw.sin_cos();
    Mat3::new(
        ct * cs,
        cs * st * sp - cp * ss,
        sp * ss + cp * cs * st,
        ct * ss,
        cp * cs + st * sp * ss,
        cp * st * ss - cs * sp,
        -st,
        ct * sp,
        ct * cp,
    )
}

/// Map from generalized Euler-angle rates to the body-frame angular velocity.
///
/// Singular at pitch = +-pi/2 (det = -cos(pitch)).
pub fn angular_velocity_map(roll: f64, pitch: f64) -> Mat3 {
    let (sp, cp) = roll.sin_cos();
    let (st, ct) = pitch.sin_cos();
    Mat3::new(-st, 0.0, 1.0, ct * sp, cp, 0.0, ct * cp, -sp, 0.0)
}

/// Generalized inertia `J = W^T I W` expressed in Euler-angle coordinates.
pub fn generalized_inertia(roll: f64, pitch: f64, inertia: &Vec3) -> Mat3 {
    let w = angular_velocity_map(roll, pitch);
    let i = Mat3::from_diagonal(inertia);
    w.transpose() * i * w
}

/// Translational accelerations `(x_ddot, y_ddot, z_ddot)` [m/s^2].
pub fn translational_accel(
    state: &UavState,
    thrust: f64,
    tension: &TensionVector,
    params: &UavParams,
) -> Vec3 {
    let m = params.mass;
    let g = params.gravity;
    let (sp, cp) = state.attitude.x.sin_cos();
    let (st, ct) = state.attitude.y.sin_cos();
    let (ss, cs) = state.attitude.z.sin_cos();
    let (u, v, w) = (state.velocity.x, state.velocity.y, state.velocity.z);
    let (p, q, r) = (state.rates.x, state.rates.y, state.rates.z);
    let t = &tension.components;

    let mut ax = thrust * (cs * cp * st + ss * sp) + m * (r * v - q * w) - t.x - params.drag.x * u;
    let mut ay = thrust * (cp * ss * st - cs * sp) + m * (r * u - p * w) + t.y - params.drag.y * v;
    if params.body_gravity_xy {
        ax -= m * g * st;
        ay -= m * g * ct * sp;
    }
    let az = thrust * ct * cp + m * (q * u - p * v) + params.gravity_sign * m * g * ct * cp
        - t.z
        - params.drag.z * w;

    Vec3::new(ax / m, ay / m, az / m)
}

/// Euler-angle accelerations `(roll_ddot, pitch_ddot, yaw_ddot)` [rad/s^2].
pub fn rotational_accel(state: &UavState, moments: &Vec3, params: &UavParams) -> Vec3 {
    let (p, q, r) = (state.rates.x, state.rates.y, state.rates.z);
    let (ixx, iyy, izz) = (params.inertia.x, params.inertia.y, params.inertia.z);
    Vec3::new(
        (moments.x - q * r * (iyy - izz)) / ixx,
        (moments.y + p * r * (ixx - izz)) / iyy,
        (moments.z - p * q * (ixx - iyy)) / izz,
    )
}

/// Stacked derivative of the full 14-state system.
///
/// Controls and tension are held constant by the caller across an
/// integration step (zero-order hold); the function itself is pure.
pub fn full_derivative(
    state: &FullState,
    inputs: &ControlInputs,
    tension: &TensionVector,
    uav_params: &UavParams,
    winder_params: &WinderParams,
) -> Result<[f64; 14]> {
    let accel = translational_accel(&state.uav, inputs.thrust, tension, uav_params);
    let moments = Vec3::new(inputs.roll_moment, inputs.pitch_moment, inputs.yaw_moment);
    let ang_accel = rotational_accel(&state.uav, &moments, uav_params);

    let pull_norm = if winder_params.inelastic {
        0.0
    } else {
        let anchor = Vec3::zeros();
        let elongation = winder::tether_elongation(
            &state.uav.position,
            &anchor,
            winder_params.radius,
            state.winder.angle,
        )?;
        winder::pulling_force(winder_params, elongation, &state.uav.position, &anchor)?.norm()
    };
    let winch_accel =
        winder::acceleration(winder_params, &state.winder, pull_norm, inputs.winch_torque)?;

    let u = &state.uav;
    Ok([
        u.velocity.x,
        accel.x,
        u.velocity.y,
        accel.y,
        u.velocity.z,
        accel.z,
        u.rates.x,
        ang_accel.x,
        u.rates.y,
        ang_accel.y,
        u.rates.z,
        ang_accel.z,
        state.winder.rate,
        winch_accel,
    ])
}
