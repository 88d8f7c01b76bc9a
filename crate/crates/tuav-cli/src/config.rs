//! Run-configuration parsing.
//!
//! The format is flat `key = value` text: UTF-8, `#` starts a comment,
//! dotted prefixes group related keys (`uav.m = 2.84`). A `scenario` key
//! selects one of the built-in presets as the baseline; every other key
//! overrides a single field. Unknown keys are errors, missing keys keep
//! their documented defaults.

use std::fmt;
use std::path::Path;

use tuav_core::control::{LawFidelity, LengthPolicy};
use tuav_core::scenarios;
use tuav_core::sim::{Integrator, SimConfig, TrajectorySpec};
use tuav_core::Vec3;

#[derive(Debug)]
pub enum ConfigError {
    Io { path: String, message: String },
    Parse { line: usize, message: String },
    Validation { message: String },
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigError::Io { path, message } => write!(f, "cannot read {path}: {message}"),
            ConfigError::Parse { line, message } => write!(f, "line {line}: {message}"),
            ConfigError::Validation { message } => write!(f, "invalid configuration: {message}"),
        }
    }
}

impl std::error::Error for ConfigError {}

/// Mutable trajectory fields collected during parsing; the variant is built
/// once the whole file has been applied.
struct TrajectoryDraft {
    kind: String,
    target: Vec3,
    yaw: f64,
    start: Vec3,
    end: Vec3,
    speed: f64,
    center_x: f64,
    center_y: f64,
    radius: f64,
    rate: f64,
    altitude: f64,
    waypoints: Vec<Vec3>,
    tolerance: f64,
}

impl TrajectoryDraft {
    fn from_spec(spec: &TrajectorySpec) -> Self {
        let mut draft = Self {
            kind: "setpoint".into(),
            target: Vec3::new(1.0, 1.0, 5.0),
            yaw: 0.0,
            start: Vec3::zeros(),
            end: Vec3::new(1.0, 1.0, 3.0),
            speed: 0.2,
            center_x: 0.0,
            center_y: 0.0,
            radius: 1.0,
            rate: 0.2,
            altitude: 5.0,
            waypoints: vec![Vec3::new(1.0, 1.0, 3.0)],
            tolerance: 0.05,
        };
        match spec {
            TrajectorySpec::Setpoint { target, yaw } => {
                draft.kind = "setpoint".into();
                draft.target = *target;
                draft.yaw = *yaw;
            }
            TrajectorySpec::Linear {
                start,
                end,
                speed,
                yaw,
            } => {
                draft.kind = "linear".into();
                draft.start = *start;
                draft.end = *end;
                draft.speed = *speed;
                draft.yaw = *yaw;
            }
            TrajectorySpec::Circular {
                center_x,
                center_y,
                radius,
                angular_rate,
                altitude,
                yaw,
            } => {
                draft.kind = "circular".into();
                draft.center_x = *center_x;
                draft.center_y = *center_y;
                draft.radius = *radius;
                draft.rate = *angular_rate;
                draft.altitude = *altitude;
                draft.yaw = *yaw;
            }
            TrajectorySpec::Waypoints {
                points,
                tolerance,
                yaw,
            } => {
                draft.kind = "waypoints".into();
                draft.waypoints = points.clone();
                draft.tolerance = *tolerance;
                draft.yaw = *yaw;
            }
        }
        draft
    }

    fn build(&self) -> Result<TrajectorySpec, ConfigError> {
        match self.kind.as_str() {
            "setpoint" => Ok(TrajectorySpec::Setpoint {
                target: self.target,
                yaw: self.yaw,
            }),
            "linear" => {
                if self.speed <= 0.0 {
                    return Err(validation("trajectory.speed must satisfy speed > 0"));
                }
                Ok(TrajectorySpec::Linear {
                    start: self.start,
                    end: self.end,
                    speed: self.speed,
                    yaw: self.yaw,
                })
            }
            "circular" => {
                if self.radius <= 0.0 {
                    return Err(validation("trajectory.radius must satisfy radius > 0"));
                }
                Ok(TrajectorySpec::Circular {
                    center_x: self.center_x,
                    center_y: self.center_y,
                    radius: self.radius,
                    angular_rate: self.rate,
                    altitude: self.altitude,
                    yaw: self.yaw,
                })
            }
            "waypoints" => {
                if self.waypoints.is_empty() {
                    return Err(validation(
                        "trajectory.waypoints must list at least one point",
                    ));
                }
                if self.tolerance <= 0.0 {
                    return Err(validation(
                        "trajectory.tolerance must satisfy tolerance > 0",
                    ));
                }
                Ok(TrajectorySpec::Waypoints {
                    points: self.waypoints.clone(),
                    tolerance: self.tolerance,
                    yaw: self.yaw,
                })
            }
            other => Err(validation(&format!(
                "trajectory.kind `{other}` is not one of setpoint|linear|circular|waypoints"
            ))),
        }
    }
}

fn validation(message: &str) -> ConfigError {
    ConfigError::Validation {
        message: message.into(),
    }
}

fn parse_number(line: usize, key: &str, value: &str) -> Result<f64, ConfigError> {
    value.parse::<f64>().map_err(|_| ConfigError::Parse {
        line,
        message: format!("value `{value}` for key `{key}` is not a number"),
    })
}

fn parse_bool(line: usize, key: &str, value: &str) -> Result<bool, ConfigError> {
    match value {
        "true" | "on" | "1" => Ok(true),
        "false" | "off" | "0" => Ok(false),
        _ => Err(ConfigError::Parse {
            line,
            message: format!("value `{value}` for key `{key}` is not a boolean"),
        }),
    }
}

/// Parse `x,y,z; x,y,z; ...` into waypoints.
fn parse_waypoints(line: usize, value: &str) -> Result<Vec<Vec3>, ConfigError> {
    let mut points = Vec::new();
    for triple in value.split(';') {
        let triple = triple.trim();
        if triple.is_empty() {
            continue;
        }
        let parts: Vec<&str> = triple.split(',').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(ConfigError::Parse {
                line,
                message: format!("waypoint `{triple}` is not an x,y,z triple"),
            });
        }
        let x = parse_number(line, "trajectory.waypoints", parts[0])?;
        let y = parse_number(line, "trajectory.waypoints", parts[1])?;
        let z = parse_number(line, "trajectory.waypoints", parts[2])?;
        points.push(Vec3::new(x, y, z));
    }
    Ok(points)
}

/// Parse a configuration file into a complete [`SimConfig`].
pub fn parse_config(path: &Path) -> Result<SimConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse_config_str(&text)
}

/// Parse configuration text (see module docs for the format).
pub fn parse_config_str(text: &str) -> Result<SimConfig, ConfigError> {
    // First pass: the scenario key selects the baseline preset.
    let mut config = SimConfig::default();
    for (index, raw) in text.lines().enumerate() {
        let line = index + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let Some((key, value)) = content.split_once('=') else {
            return Err(ConfigError::Parse {
                line,
                message: format!("`{content}` has no `=`"),
            });
        };
        if key.trim() == "scenario" {
            let name = value.trim();
            config = scenarios::by_name(name).ok_or_else(|| ConfigError::Parse {
                line,
                message: format!(
                    "unknown scenario `{name}` (known: {})",
                    scenarios::NAMES.join(", ")
                ),
            })?;
        }
    }

    let mut trajectory = TrajectoryDraft::from_spec(&config.trajectory);
    let mut sigma = match config.length_policy {
        LengthPolicy::SlackFactor { sigma } => sigma,
        _ => 1.05,
    };
    let mut policy_kind = match config.length_policy {
        LengthPolicy::SlackFactor { .. } => "slack".to_string(),
        LengthPolicy::Catenary { .. } => "catenary".to_string(),
    };
    let mut horizontal_tension = 5.0;

    for (index, raw) in text.lines().enumerate() {
        let line = index + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content.split_once('=').expect("checked in first pass");
        let key = key.trim();
        let value = value.trim();
        let num = |v: &mut f64| -> Result<(), ConfigError> {
            *v = parse_number(line, key, value)?;
            Ok(())
        };
        match key {
            "scenario" => {} // applied in the first pass
            "sim.dt" => num(&mut config.dt)?,
            "sim.duration" => num(&mut config.duration)?,
            "sim.integrator" => {
                config.integrator = match value {
                    "rk4" => Integrator::Rk4,
                    "euler" => Integrator::Euler,
                    _ => {
                        return Err(ConfigError::Parse {
                            line,
                            message: format!("integrator `{value}` is not rk4|euler"),
                        })
                    }
                }
            }
            "sim.midpoint_control" => config.midpoint_sampling = parse_bool(line, key, value)?,
            "uav.m" => num(&mut config.uav.mass)?,
            "uav.g" => num(&mut config.uav.gravity)?,
            "uav.ixx" => num(&mut config.uav.inertia.x)?,
            "uav.iyy" => num(&mut config.uav.inertia.y)?,
            "uav.izz" => num(&mut config.uav.inertia.z)?,
            "uav.ax" => num(&mut config.uav.drag.x)?,
            "uav.ay" => num(&mut config.uav.drag.y)?,
            "uav.az" => num(&mut config.uav.drag.z)?,
            "uav.gravity_sign" => num(&mut config.uav.gravity_sign)?,
            "uav.body_gravity_xy" => config.uav.body_gravity_xy = parse_bool(line, key, value)?,
            "material.rho" => num(&mut config.material.linear_density)?,
            "material.area" => num(&mut config.material.cross_section)?,
            "material.g" => num(&mut config.material.gravity)?,
            "material.max_length" => {
                num(&mut config.material.max_length)?;
                config.winder.max_length = config.material.max_length;
            }
            "winder.base_mass" => num(&mut config.winder.base_mass)?,
            "winder.density" => num(&mut config.winder.tether_density)?,
            "winder.radius" => {
                num(&mut config.winder.radius)?;
                config.winder.moment_arm = config.winder.radius;
            }
            "winder.inner_radius" => num(&mut config.winder.inner_radius)?,
            "winder.friction" => num(&mut config.winder.viscous_friction)?,
            "winder.stiffness" => num(&mut config.winder.stiffness)?,
            "winder.moment_arm" => num(&mut config.winder.moment_arm)?,
            "winder.inelastic" => config.winder.inelastic = parse_bool(line, key, value)?,
            "winder.frozen_inertia" => {
                let mut v = 0.0;
                num(&mut v)?;
                config.winder.frozen_inertia = Some(v);
            }
            "gains.k1" => num(&mut config.gains.k1)?,
            "gains.k2" => num(&mut config.gains.k2)?,
            "gains.k3" => num(&mut config.gains.k3)?,
            "gains.k4" => num(&mut config.gains.k4)?,
            "gains.k5" => num(&mut config.gains.k5)?,
            "gains.k6" => num(&mut config.gains.k6)?,
            "gains.k7" => num(&mut config.gains.k7)?,
            "gains.k8" => num(&mut config.gains.k8)?,
            "gains.kw" => num(&mut config.gains.kw)?,
            "gains.kw2" => num(&mut config.gains.kw2)?,
            "gains.kx1" => num(&mut config.gains.kx1)?,
            "gains.kx2" => num(&mut config.gains.kx2)?,
            "gains.ky1" => num(&mut config.gains.ky1)?,
            "gains.ky2" => num(&mut config.gains.ky2)?,
            "lbar.policy" => policy_kind = value.to_string(),
            "lbar.sigma" => num(&mut sigma)?,
            "lbar.t0" => num(&mut horizontal_tension)?,
            "control.bare_gain_laws" => {
                config.fidelity = if parse_bool(line, key, value)? {
                    LawFidelity::BareGain
                } else {
                    LawFidelity::Corrected
                }
            }
            "control.tilt_limit" => num(&mut config.tilt_limit)?,
            "control.shaper_frequency" => num(&mut config.shaper_frequency)?,
            "control.winch_enabled" => config.winch_control = parse_bool(line, key, value)?,
            "limits.thrust" => {
                let mut v = 0.0;
                num(&mut v)?;
                config.limits.thrust = Some(v);
            }
            "limits.moment" => {
                let mut v = 0.0;
                num(&mut v)?;
                config.limits.moment = Some(v);
            }
            "limits.winch" => {
                let mut v = 0.0;
                num(&mut v)?;
                config.limits.winch_torque = Some(v);
            }
            "init.x" => num(&mut config.initial.uav.position.x)?,
            "init.y" => num(&mut config.initial.uav.position.y)?,
            "init.z" => num(&mut config.initial.uav.position.z)?,
            "init.vx" => num(&mut config.initial.uav.velocity.x)?,
            "init.vy" => num(&mut config.initial.uav.velocity.y)?,
            "init.vz" => num(&mut config.initial.uav.velocity.z)?,
            "init.roll" => num(&mut config.initial.uav.attitude.x)?,
            "init.pitch" => num(&mut config.initial.uav.attitude.y)?,
            "init.yaw" => num(&mut config.initial.uav.attitude.z)?,
            "init.roll_rate" => num(&mut config.initial.uav.rates.x)?,
            "init.pitch_rate" => num(&mut config.initial.uav.rates.y)?,
            "init.yaw_rate" => num(&mut config.initial.uav.rates.z)?,
            "init.winch_angle" => {
                num(&mut config.initial.winder.angle)?;
                config.auto_spool = false;
            }
            "init.winch_rate" => num(&mut config.initial.winder.rate)?,
            "trajectory.kind" => trajectory.kind = value.to_string(),
            "trajectory.yaw" => num(&mut trajectory.yaw)?,
            "trajectory.target_x" => num(&mut trajectory.target.x)?,
            "trajectory.target_y" => num(&mut trajectory.target.y)?,
            "trajectory.target_z" => num(&mut trajectory.target.z)?,
            "trajectory.start_x" => num(&mut trajectory.start.x)?,
            "trajectory.start_y" => num(&mut trajectory.start.y)?,
            "trajectory.start_z" => num(&mut trajectory.start.z)?,
            "trajectory.end_x" => num(&mut trajectory.end.x)?,
            "trajectory.end_y" => num(&mut trajectory.end.y)?,
            "trajectory.end_z" => num(&mut trajectory.end.z)?,
            "trajectory.speed" => num(&mut trajectory.speed)?,
            "trajectory.center_x" => num(&mut trajectory.center_x)?,
            "trajectory.center_y" => num(&mut trajectory.center_y)?,
            "trajectory.radius" => num(&mut trajectory.radius)?,
            "trajectory.rate" => num(&mut trajectory.rate)?,
            "trajectory.altitude" => num(&mut trajectory.altitude)?,
            "trajectory.waypoints" => trajectory.waypoints = parse_waypoints(line, value)?,
            "trajectory.tolerance" => num(&mut trajectory.tolerance)?,
            _ => {
                return Err(ConfigError::Parse {
                    line,
                    message: format!("unknown key `{key}`"),
                })
            }
        }
    }

    config.trajectory = trajectory.build()?;
    config.length_policy = match policy_kind.as_str() {
        "slack" => {
            if sigma <= 1.0 {
                return Err(validation("lbar.sigma must satisfy sigma > 1"));
            }
            LengthPolicy::SlackFactor { sigma }
        }
        "catenary" => {
            if horizontal_tension <= 0.0 {
                return Err(validation("lbar.t0 must satisfy T0 > 0"));
            }
            LengthPolicy::Catenary { horizontal_tension }
        }
        other => {
            return Err(validation(&format!(
                "lbar.policy `{other}` is not slack|catenary"
            )))
        }
    };

    config.validate().map_err(|e| ConfigError::Validation {
        message: e.to_string(),
    })?;
    Ok(config)
}
