//! Backstepping control laws and Lyapunov instrumentation.
//!
//! The architecture splits into an error junction, a tether-length estimator,
//! and five control laws: altitude thrust, three attitude moments and the
//! winch torque. A horizontal-position cascade converts x/y backstepping
//! accelerations into roll/pitch references through the small-angle thrust
//! inversion, and a critically damped second-order shaper turns those raw
//! references into smooth signals with exact rate and acceleration
//! feedforward for the attitude laws.
//!
//! Each law cancels its row of the plant exactly and imposes the two-step
//! backstepping target dynamics, so along closed-loop trajectories the
//! composite functions satisfy `V_dot = -k_a*e^2 - k_b*z^2` up to
//! discretization error. The bare-gain variants replace the
//! virtual-control derivative terms with standalone gain constants; they
//! are retained for comparison runs and destroy the origin as an
//! equilibrium.

use crate::catenary::{self, TensionVector, TetherMaterial};
use crate::uav::{UavParams, UavState};
use crate::winder::{self, WinderParams, WinderState};
use crate::{Error, Result, Vec3};

/// Attitude singularity guard on `cos(pitch)*cos(roll)`.
pub const SINGULARITY_LIMIT: f64 = 1e-3;

/// Default clamp on the roll/pitch references produced by the position
/// cascade [rad].
pub const TILT_LIMIT: f64 = std::f64::consts::FRAC_PI_6;

/// Backstepping gains. All must be nonnegative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GainSet {
    /// Altitude pair.
    pub k1: f64,
    pub k2: f64,
    /// Roll pair.
    pub k3: f64,
    pub k4: f64,
    /// Pitch pair.
    pub k5: f64,
    pub k6: f64,
    /// Yaw pair.
    pub k7: f64,
    pub k8: f64,
    /// Winch pair.
    pub kw: f64,
    pub kw2: f64,
    /// Horizontal position pairs.
    pub kx1: f64,
    pub kx2: f64,
    pub ky1: f64,
    pub ky2: f64,
}

impl Default for GainSet {
    fn default() -> Self {
        Self {
            k1: 2.0,
            k2: 2.0,
            k3: 2.0,
            k4: 2.0,
            k5: 2.0,
            k6: 2.0,
            k7: 2.0,
            k8: 2.0,
            kw: 2.0,
            kw2: 2.0,
            kx1: 1.5,
            kx2: 1.5,
            ky1: 1.5,
            ky2: 1.5,
        }
    }
}

impl GainSet {
    pub fn validate(&self) -> Result<()> {
        for (name, value) in [
            ("gains.k1", self.k1),
            ("gains.k2", self.k2),
            ("gains.k3", self.k3),
            ("gains.k4", self.k4),
            ("gains.k5", self.k5),
            ("gains.k6", self.k6),
            ("gains.k7", self.k7),
            ("gains.k8", self.k8),
            ("gains.kw", self.kw),
            ("gains.kw2", self.kw2),
            ("gains.kx1", self.kx1),
            ("gains.kx2", self.kx2),
            ("gains.ky1", self.ky1),
            ("gains.ky2", self.ky2),
        ] {
            if value < 0.0 {
                return Err(Error::domain(name, value, "gains >= 0"));
            }
        }
        Ok(())
    }
}

/// Reference signal for one control tick: desired position, attitude and
/// tether length with velocity/acceleration feedforward (zero when no
/// feedforward is available).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ReferenceSignal {
    pub position: Vec3,
    pub velocity: Vec3,
    pub acceleration: Vec3,
    /// Desired attitude (roll, pitch, yaw) [rad]. Roll and pitch come from
    /// the position cascade through the reference shaper; yaw is the user's.
    pub attitude: Vec3,
    pub attitude_rate: Vec3,
    pub attitude_accel: Vec3,
    /// Desired tether length [m] and its feedforward derivatives.
    pub tether_length: f64,
    pub tether_rate: f64,
    pub tether_accel: f64,
}

/// Errors and backstepping transform variables for one tick.
///
/// Errors are componentwise actual minus desired. `z1..z4` and `z7` are the
/// transform variables of the altitude, attitude and winch laws; `z5`/`z6`
/// belong to the horizontal cascade.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ErrorVector {
    pub position: Vec3,
    pub velocity: Vec3,
    pub attitude: Vec3,
    pub attitude_rate: Vec3,
    /// Tether length error [m] and rate [m/s].
    pub tether: f64,
    pub tether_rate: f64,
    /// Tether error converted to winch angle [rad] and rate [rad/s].
    pub tether_angle: f64,
    pub tether_angle_rate: f64,
    pub z1: f64,
    pub z2: f64,
    pub z3: f64,
    pub z4: f64,
    pub z5: f64,
    pub z6: f64,
    pub z7: f64,
}

/// Composite Lyapunov values for the altitude, roll and winch subsystems.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct LyapunovSample {
    /// Altitude composite `0.5*e_z^2 + 0.5*z1^2` (column `V_c1`).
    pub altitude: f64,
    /// Roll composite `0.5*e_roll^2 + 0.5*z2^2` (column `V_c2`).
    pub roll: f64,
    /// Winch composite `0.5*e_w^2 + 0.5*z7^2` (column `V_c12`).
    pub winder: f64,
}

/// Law fidelity: the corrected laws feed back the virtual-control
/// derivative; the bare-gain variants keep a standalone gain constant in
/// its place, which shifts the closed-loop equilibrium away from the
/// origin. The latter exist for comparison runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LawFidelity {
    #[default]
    Corrected,
    BareGain,
}

/// Policy for the desired tether length.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LengthPolicy {
    /// `L_ref = sigma * |P1 - P0|`.
    SlackFactor { sigma: f64 },
    /// Arc length of the catenary through both endpoints at a fixed
    /// horizontal tension.
    Catenary { horizontal_tension: f64 },
}

impl Default for LengthPolicy {
    fn default() -> Self {
        LengthPolicy::SlackFactor { sigma: 1.05 }
    }
}

/// Desired tether length with feedforward derivatives.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct TetherReference {
    pub length: f64,
    pub rate: f64,
    pub accel: f64,
}

/// Compute all tracking errors and transform variables.
pub fn error_junction(
    uav: &UavState,
    winch: &WinderState,
    reference: &ReferenceSignal,
    gains: &GainSet,
    winch_radius: f64,
) -> ErrorVector {
    let position = uav.position - reference.position;
    let velocity = uav.velocity - reference.velocity;
    let attitude = uav.attitude - reference.attitude;
    let attitude_rate = uav.rates - reference.attitude_rate;
    let tether = winch_radius * winch.angle - reference.tether_length;
    let tether_rate = winch_radius * winch.rate - reference.tether_rate;
    let tether_angle = tether / winch_radius;
    let tether_angle_rate = tether_rate / winch_radius;
    ErrorVector {
        position,
        velocity,
        attitude,
        attitude_rate,
        tether,
        tether_rate,
        tether_angle,
        tether_angle_rate,
        z1: velocity.z + gains.k1 * position.z,
        z2: attitude_rate.x + gains.k3 * attitude.x,
        z3: attitude_rate.y + gains.k5 * attitude.y,
        z4: attitude_rate.z + gains.k7 * attitude.z,
        z5: velocity.x + gains.kx1 * position.x,
        z6: velocity.y + gains.ky1 * position.y,
        z7: tether_angle_rate + gains.kw * tether_angle,
    }
}

/// Desired tether length from the current UAV motion.
///
/// `accel` is the UAV translational acceleration used for the second
/// feedforward derivative; pass zeros when unavailable.
pub fn desired_tether_length(
    position: &Vec3,
    velocity: &Vec3,
    accel: &Vec3,
    policy: &LengthPolicy,
    material: &TetherMaterial,
) -> Result<TetherReference> {
    if position.z < 0.0 {
        return Err(Error::domain("position.z", position.z, "z >= 0"));
    }
    let reference = match *policy {
        LengthPolicy::SlackFactor { sigma } => {
            let n = position.norm();
            if n == 0.0 {
                TetherReference::default()
            } else {
                let radial = position.dot(velocity) / n;
                let radial_accel =
                    (velocity.dot(velocity) + position.dot(accel)) / n - radial * radial / n;
                TetherReference {
                    length: sigma * n,
                    rate: sigma * radial,
                    accel: sigma * radial_accel,
                }
            }
        }
        LengthPolicy::Catenary { horizontal_tension } => {
            let a = catenary::parameter(horizontal_tension, material)?;
            let anchor = Vec3::zeros();
            let geometry = match catenary::geometry_for_parameter(&anchor, position, a) {
                Ok(g) => g,
                // directly overhead: fall back to a straight vertical tether
                Err(Error::DegenerateVertical) => {
                    let r = TetherReference {
                        length: position.z,
                        rate: velocity.z,
                        accel: accel.z,
                    };
                    if r.length > material.max_length {
                        return Err(Error::OverLength {
                            length: r.length,
                            max: material.max_length,
                        });
                    }
                    return Ok(r);
                }
                Err(e) => return Err(e),
            };
            let span = geometry.span;
            let dz = geometry.height_delta;
            let length = geometry.arc_length();

            let span_rate = (position.x * velocity.x + position.y * velocity.y) / span;
            let span_accel = (velocity.x * velocity.x
                + velocity.y * velocity.y
                + position.x * accel.x
                + position.y * accel.y)
                / span
                - span_rate * span_rate / span;
            let half = span / (2.0 * a);
            let chord = 2.0 * a * half.sinh();
            let chord_rate = half.cosh() * span_rate;
            let chord_accel =
                half.sinh() * span_rate * span_rate / (2.0 * a) + half.cosh() * span_accel;
            let rate = (chord * chord_rate + dz * velocity.z) / length;
            let accel_ff = (chord_rate * chord_rate
                + chord * chord_accel
                + velocity.z * velocity.z
                + dz * accel.z
                - rate * rate)
                / length;
            TetherReference {
                length,
                rate,
                accel: accel_ff,
            }
        }
    };
    if reference.length > material.max_length {
        return Err(Error::OverLength {
            length: reference.length,
            max: material.max_length,
        });
    }
    Ok(reference)
}

/// Altitude backstepping thrust.
///
/// Inverts the vertical acceleration row (gravity, drag, Coriolis products
/// and the tether tension z-component) and imposes
/// `z_ddot = z_ddot_ref - e_z - k2*z1 - k1*e_z_dot`.
pub fn altitude_thrust(
    state: &UavState,
    errors: &ErrorVector,
    reference: &ReferenceSignal,
    gains: &GainSet,
    tension_z: f64,
    params: &UavParams,
    fidelity: LawFidelity,
) -> Result<f64> {
    let cc = state.attitude.y.cos() * state.attitude.x.cos();
    if cc.abs() < SINGULARITY_LIMIT {
        return Err(Error::Singularity {
            value: cc.abs(),
            limit: SINGULARITY_LIMIT,
        });
    }
    let m = params.mass;
    let (p, q, r) = (state.rates.x, state.rates.y, state.rates.z);
    let (u, v, w) = (state.velocity.x, state.velocity.y, state.velocity.z);
    let gravity = params.gravity_sign * m * params.gravity * cc;

    let (target, coriolis) = match fidelity {
        LawFidelity::Corrected => (
            reference.acceleration.z
                - errors.position.z
                - gains.k2 * errors.z1
                - gains.k1 * errors.velocity.z,
            m * (q * u - p * v),
        ),
        // bare -k1 constant and the q*r product
        LawFidelity::BareGain => (
            -errors.position.z - gains.k2 * errors.z1 - gains.k1,
            m * (q * r - p * v),
        ),
    };
    Ok((m * target - coriolis - gravity + tension_z + params.drag.z * w) / cc)
}

/// Roll backstepping moment. The gyroscopic coupling term matches the plant
/// row exactly, so the roll subsystem cancels in closed loop.
pub fn roll_moment(
    state: &UavState,
    errors: &ErrorVector,
    reference: &ReferenceSignal,
    gains: &GainSet,
    params: &UavParams,
    fidelity: LawFidelity,
) -> f64 {
    let (q, r) = (state.rates.y, state.rates.z);
    let coupling = q * r * (params.inertia.y - params.inertia.z);
    let target = match fidelity {
        LawFidelity::Corrected => {
            reference.attitude_accel.x
                - errors.attitude.x
                - gains.k4 * errors.z2
                - gains.k3 * errors.attitude_rate.x
        }
        LawFidelity::BareGain => -gains.k3 * errors.z2 - errors.attitude.x - gains.k3,
    };
    params.inertia.x * target + coupling
}

/// Pitch backstepping moment with the gyroscopic terms kept in their
/// non-cancelling form (`+ p*r*Ixx + p*r*Izz`); the residual vanishes
/// with the yaw rate.
pub fn pitch_moment(
    state: &UavState,
    errors: &ErrorVector,
    reference: &ReferenceSignal,
    gains: &GainSet,
    params: &UavParams,
    fidelity: LawFidelity,
) -> f64 {
    let (p, r) = (state.rates.x, state.rates.z);
    let coupling = p * r * params.inertia.x + p * r * params.inertia.z;
    let target = match fidelity {
        LawFidelity::Corrected => {
            reference.attitude_accel.y
                - errors.attitude.y
                - gains.k6 * errors.z3
                - gains.k5 * errors.attitude_rate.y
        }
        LawFidelity::BareGain => -gains.k6 * errors.z3 - errors.attitude.y - gains.k5,
    };
    params.inertia.y * target + coupling
}

/// Yaw backstepping moment with the non-cancelling gyroscopic terms
/// (`- p*q*Ixx + p*q*Iyy`).
pub fn yaw_moment(
    state: &UavState,
    errors: &ErrorVector,
    reference: &ReferenceSignal,
    gains: &GainSet,
    params: &UavParams,
    fidelity: LawFidelity,
) -> f64 {
    let (p, q) = (state.rates.x, state.rates.y);
    let coupling = -p * q * params.inertia.x + p * q * params.inertia.y;
    let target = match fidelity {
        LawFidelity::Corrected => {
            reference.attitude_accel.z
                - errors.attitude.z
                - gains.k8 * errors.z4
                - gains.k7 * errors.attitude_rate.z
        }
        LawFidelity::BareGain => -gains.k8 * errors.z4 - errors.attitude.z - gains.k7,
    };
    params.inertia.z * target + coupling
}

/// Horizontal position cascade: backstepping accelerations on (x, y),
/// feedforward of the known horizontal-row terms (drag, Coriolis products,
/// tension), then small-angle inversion through the current thrust into
/// roll/pitch references, clamped to `tilt_limit`.
pub fn attitude_references(
    state: &UavState,
    errors: &ErrorVector,
    reference: &ReferenceSignal,
    gains: &GainSet,
    thrust: f64,
    tension: &TensionVector,
    params: &UavParams,
    tilt_limit: f64,
) -> Result<(f64, f64)> {
    if thrust.abs() < 1e-6 {
        return Err(Error::ThrustInversion { value: thrust });
    }
    let m = params.mass;
    let (p, q, r) = (state.rates.x, state.rates.y, state.rates.z);
    let (u, v, w) = (state.velocity.x, state.velocity.y, state.velocity.z);
    let t = &tension.components;

    let ax = reference.acceleration.x
        - errors.position.x
        - gains.kx2 * errors.z5
        - gains.kx1 * errors.velocity.x
        - (r * v - q * w)
        + (t.x + params.drag.x * u) / m;
    let ay = reference.acceleration.y
        - errors.position.y
        - gains.ky2 * errors.z6
        - gains.ky1 * errors.velocity.y
        - (r * u - p * w)
        + (-t.y + params.drag.y * v) / m;

    let (s_yaw, c_yaw) = state.attitude.z.sin_cos();
    let scale = m / thrust;
    let pitch_ref = (scale * (ax * c_yaw + ay * s_yaw)).clamp(-tilt_limit, tilt_limit);
    let roll_ref = (scale * (ax * s_yaw - ay * c_yaw)).clamp(-tilt_limit, tilt_limit);
    Ok((roll_ref, pitch_ref))
}

/// Winch backstepping torque. The tether-length error is converted to a
/// winch-angle error; friction is compensated and the drum inertia is
/// evaluated at the instantaneous winch angle.
pub fn winch_torque(
    winch: &WinderState,
    errors: &ErrorVector,
    reference: &ReferenceSignal,
    gains: &GainSet,
    params: &WinderParams,
    fidelity: LawFidelity,
) -> Result<f64> {
    let inertia = winder::inertia_at(params, winch.angle)?;
    let target = match fidelity {
        LawFidelity::Corrected => {
            reference.tether_accel / params.radius
                - errors.tether_angle
                - gains.kw2 * errors.z7
                - gains.kw * errors.tether_angle_rate
        }
        LawFidelity::BareGain => {
            -errors.tether_angle - gains.kw2 * errors.z7 - gains.kw * winch.angle
        }
    };
    Ok((inertia * target + params.viscous_friction * winch.rate) / params.radius)
}

/// Composite Lyapunov values from the current errors.
pub fn lyapunov_sample(errors: &ErrorVector) -> LyapunovSample {
    LyapunovSample {
        altitude: 0.5 * (errors.position.z * errors.position.z + errors.z1 * errors.z1),
        roll: 0.5 * (errors.attitude.x * errors.attitude.x + errors.z2 * errors.z2),
        winder: 0.5 * (errors.tether_angle * errors.tether_angle + errors.z7 * errors.z7),
    }
}

/// Critically damped second-order shaper for the roll/pitch references.
///
/// Holding the raw demand constant over a tick, the filter response has the
/// closed form `x(t) = c + e^(-w t) (A + B t)` which this struct advances
/// exactly; its acceleration `w^2 (c - x) - 2 w x_dot` is algebraic, giving
/// the attitude laws smooth, self-consistent feedforward.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReferenceShaper {
    pub natural_frequency: f64,
    pub roll: f64,
    pub roll_rate: f64,
    pub pitch: f64,
    pub pitch_rate: f64,
}

impl ReferenceShaper {
    pub fn new(natural_frequency: f64, roll: f64, pitch: f64) -> Self {
        Self {
            natural_frequency,
            roll,
            roll_rate: 0.0,
            pitch,
            pitch_rate: 0.0,
        }
    }

    fn advance_axis(omega: f64, value: f64, rate: f64, target: f64, dt: f64) -> (f64, f64) {
        let a = value - target;
        let b = rate + omega * a;
        let decay = (-omega * dt).exp();
        let new_value = target + decay * (a + b * dt);
        let new_rate = decay * (b - omega * (a + b * dt));
        (new_value, new_rate)
    }

    /// Filter state after `dt` with the raw demands held constant.
    pub fn advanced(&self, roll_target: f64, pitch_target: f64, dt: f64) -> Self {
        let (roll, roll_rate) = Self::advance_axis(
            self.natural_frequency,
            self.roll,
            self.roll_rate,
            roll_target,
            dt,
        );
        let (pitch, pitch_rate) = Self::advance_axis(
            self.natural_frequency,
            self.pitch,
            self.pitch_rate,
            pitch_target,
            dt,
        );
        Self {
            natural_frequency: self.natural_frequency,
            roll,
            roll_rate,
            pitch,
            pitch_rate,
        }
    }

    /// Instantaneous accelerations of the shaped references.
    pub fn accelerations(&self, roll_target: f64, pitch_target: f64) -> (f64, f64) {
        let w = self.natural_frequency;
        (
            w * w * (roll_target - self.roll) - 2.0 * w * self.roll_rate,
            w * w * (pitch_target - self.pitch) - 2.0 * w * self.pitch_rate,
        )
    }
}
