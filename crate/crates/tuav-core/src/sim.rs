//! Fixed-step closed-loop simulation of the full tethered system.
//!
//! One run is strictly sequential: per tick the engine generates the
//! reference, fits the catenary for the tension feedforward, evaluates the
//! control laws, then integrates the 14-state derivative with the inputs and
//! tension held constant across the step (zero-order hold). Identical
//! configurations produce bitwise-identical logs.
//!
//! Control sampling: by default the laws are evaluated at a half-step
//! prediction of the state (one explicit half-Euler under the previous
//! inputs). The hold is still zero-order; sampling at the step midpoint
//! centres the hold error so the logged Lyapunov descent matches the
//! continuous-time theory to second order in `dt` instead of first.

use crate::catenary::{self, CatenaryGeometry, TensionVector, TetherMaterial};
use crate::control::{
    self, ErrorVector, GainSet, LawFidelity, LengthPolicy, LyapunovSample, ReferenceShaper,
    ReferenceSignal, TetherReference,
};
use crate::uav::{self, ControlInputs, FullState, InputLimits, UavParams};
use crate::winder::WinderParams;
use crate::{Error, Result, Vec3};

/// Fixed-step integration scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Integrator {
    #[default]
    Rk4,
    Euler,
}

/// One classical fourth-order Runge-Kutta step.
pub fn rk4_step<const N: usize, F>(f: &mut F, x: &[f64; N], dt: f64) -> Result<[f64; N]>
where
    F: FnMut(&[f64; N]) -> Result<[f64; N]>,
{
    let k1 = f(x)?;
    let mut x2 = *x;
    for i in 0..N {
        x2[i] = x[i] + 0.5 * dt * k1[i];
    }
    let k2 = f(&x2)?;
    for i in 0..N {
        x2[i] = x[i] + 0.5 * dt * k2[i];
    }
    let k3 = f(&x2)?;
    for i in 0..N {
        x2[i] = x[i] + dt * k3[i];
    }
    let k4 = f(&x2)?;
    let mut out = *x;
    for i in 0..N {
        out[i] = x[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    Ok(out)
}

/// One explicit Euler step.
pub fn euler_step<const N: usize, F>(f: &mut F, x: &[f64; N], dt: f64) -> Result<[f64; N]>
where
    F: FnMut(&[f64; N]) -> Result<[f64; N]>,
{
    let d = f(x)?;
    let mut out = *x;
    for i in 0..N {
        out[i] = x[i] + dt * d[i];
    }
    Ok(out)
}

/// Advance a state with the configured scheme, inputs held constant.
pub fn integrate_step<const N: usize, F>(
    integrator: Integrator,
    f: &mut F,
    x: &[f64; N],
    dt: f64,
) -> Result<[f64; N]>
where
    F: FnMut(&[f64; N]) -> Result<[f64; N]>,
{
    if dt <= 0.0 {
        return Err(Error::domain("dt", dt, "dt > 0"));
    }
    match integrator {
        Integrator::Rk4 => rk4_step(f, x, dt),
        Integrator::Euler => euler_step(f, x, dt),
    }
}

/// Reference trajectory shapes.
#[derive(Debug, Clone, PartialEq)]
pub enum TrajectorySpec {
    /// Constant setpoint.
    Setpoint { target: Vec3, yaw: f64 },
    /// Constant-speed interpolation from start to end, then hold.
    Linear {
        start: Vec3,
        end: Vec3,
        speed: f64,
        yaw: f64,
    },
    /// Circle at fixed altitude: `(cx + R cos(w t), cy + R sin(w t), alt)`.
    Circular {
        center_x: f64,
        center_y: f64,
        radius: f64,
        angular_rate: f64,
        altitude: f64,
        yaw: f64,
    },
    /// Sequential setpoints; the target advances when the UAV comes within
    /// the arrival tolerance, making each reached point the next start.
    Waypoints {
        points: Vec<Vec3>,
        tolerance: f64,
        yaw: f64,
    },
}

impl Default for TrajectorySpec {
    fn default() -> Self {
        TrajectorySpec::Setpoint {
            target: Vec3::new(1.0, 1.0, 5.0),
            yaw: 0.0,
        }
    }
}

/// Position part of the reference with analytic feedforward.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PositionReference {
    pub position: Vec3,
    pub velocity: Vec3,
    pub acceleration: Vec3,
    pub yaw: f64,
}

/// Evaluate the trajectory at time `t`. For waypoint trajectories
/// `waypoint_index` selects the active target (managed by the run loop).
pub fn generate_reference(
    spec: &TrajectorySpec,
    t: f64,
    waypoint_index: usize,
) -> PositionReference {
    match spec {
        TrajectorySpec::Setpoint { target, yaw } => PositionReference {
            position: *target,
            yaw: *yaw,
            ..Default::default()
        },
        TrajectorySpec::Linear {
            start,
            end,
            speed,
            yaw,
        } => {
            let span = end - start;
            let distance = span.norm();
            if distance == 0.0 || *speed <= 0.0 {
                return PositionReference {
                    position: *end,
                    yaw: *yaw,
                    ..Default::default()
                };
            }
            let direction = span / distance;
            let end_time = distance / speed;
            if t < end_time {
                PositionReference {
                    position: start + direction * (speed * t),
                    velocity: direction * *speed,
                    acceleration: Vec3::zeros(),
                    yaw: *yaw,
                }
            } else {
                PositionReference {
                    position: *end,
                    yaw: *yaw,
                    ..Default::default()
                }
            }
        }
        TrajectorySpec::Circular {
            center_x,
            center_y,
            radius,
            angular_rate,
            altitude,
            yaw,
        } => {
            let (s, c) = (angular_rate * t).sin_cos();
            let w = *angular_rate;
            PositionReference {
                position: Vec3::new(center_x + radius * c, center_y + radius * s, *altitude),
                velocity: Vec3::new(-radius * w * s, radius * w * c, 0.0),
                acceleration: Vec3::new(-radius * w * w * c, -radius * w * w * s, 0.0),
                yaw: *yaw,
            }
        }
        TrajectorySpec::Waypoints {
            points,
            tolerance: _,
            yaw,
        } => {
            let index = waypoint_index.min(points.len().saturating_sub(1));
            let position = points.get(index).copied().unwrap_or_else(Vec3::zeros);
            PositionReference {
                position,
                yaw: *yaw,
                ..Default::default()
            }
        }
    }
}

/// Full simulation configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    /// Integration step [s].
    pub dt: f64,
    /// Simulated duration [s].
    pub duration: f64,
    pub integrator: Integrator,
    pub initial: FullState,
    /// Initialize the winch angle so the released length matches the length
    /// policy at the initial position.
    pub auto_spool: bool,
    pub trajectory: TrajectorySpec,
    pub gains: GainSet,
    pub uav: UavParams,
    pub winder: WinderParams,
    pub material: TetherMaterial,
    pub length_policy: LengthPolicy,
    /// Corrected (default) or bare-gain control laws.
    pub fidelity: LawFidelity,
    pub limits: InputLimits,
    /// Natural frequency of the roll/pitch reference shaper [rad/s].
    pub shaper_frequency: f64,
    /// Clamp on the cascade's roll/pitch references [rad].
    pub tilt_limit: f64,
    /// Evaluate the control laws at the predicted step midpoint.
    pub midpoint_sampling: bool,
    /// Disable the winch law (free drum) for open-loop winch studies.
    pub winch_control: bool,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            dt: 1e-3,
            duration: 30.0,
            integrator: Integrator::Rk4,
            initial: FullState::default(),
            auto_spool: true,
            trajectory: TrajectorySpec::default(),
            gains: GainSet::default(),
            uav: UavParams::default(),
            winder: WinderParams::default(),
            material: TetherMaterial::default(),
            length_policy: LengthPolicy::default(),
            fidelity: LawFidelity::default(),
            limits: InputLimits::default(),
            shaper_frequency: 10.0,
            tilt_limit: control::TILT_LIMIT,
            midpoint_sampling: true,
            winch_control: true,
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if self.dt <= 0.0 {
            return Err(Error::domain("sim.dt", self.dt, "dt > 0"));
        }
        if self.duration < 0.0 {
            return Err(Error::domain(
                "sim.duration",
                self.duration,
                "duration >= 0",
            ));
        }
        if self.shaper_frequency <= 0.0 {
            return Err(Error::domain(
                "control.shaper_frequency",
                self.shaper_frequency,
                "omega > 0",
            ));
        }
        if self.tilt_limit <= 0.0 {
            return Err(Error::domain(
                "control.tilt_limit",
                self.tilt_limit,
                "tilt limit > 0",
            ));
        }
        self.uav.validate()?;
        self.winder.validate()?;
        self.material.validate()?;
        self.gains.validate()?;
        Ok(())
    }
}

/// Events of interest recorded during a run.
#[derive(Debug, Clone, PartialEq)]
pub enum SimEvent {
    /// Integration drove the released length outside the spool; the state
    /// was clamped and the drum stopped.
    SpoolClamped { time: f64 },
    /// The catenary fit failed (degenerate or taut geometry); tension
    /// feedforward holds its last value.
    FitFailed { time: f64 },
    /// The fit succeeded again after a failure.
    FitRecovered { time: f64 },
    /// A waypoint was reached and the target advanced.
    WaypointReached { time: f64, index: usize },
}

/// One logged tick.
#[derive(Debug, Clone, PartialEq)]
pub struct LogRow {
    pub time: f64,
    pub state: FullState,
    pub reference: ReferenceSignal,
    pub errors: ErrorVector,
    pub inputs: ControlInputs,
    /// Released tether length [m].
    pub tether_length: f64,
    /// Desired tether length [m].
    pub tether_length_ref: f64,
    pub lyapunov: LyapunovSample,
    pub geometry: Option<CatenaryGeometry>,
    pub tension: TensionVector,
}

/// Time-indexed record of a run.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SimLog {
    pub dt: f64,
    pub rows: Vec<LogRow>,
    pub events: Vec<SimEvent>,
}

impl SimLog {
    /// Central finite differences of the composite Lyapunov values;
    /// `rates[k]` estimates the derivatives at row `k+1`.
    pub fn lyapunov_rates(&self) -> Vec<[f64; 3]> {
        if self.rows.len() < 3 {
            return Vec::new();
        }
        let h = 2.0 * self.dt;
        self.rows
            .windows(3)
            .map(|w| {
                [
                    (w[2].lyapunov.altitude - w[0].lyapunov.altitude) / h,
                    (w[2].lyapunov.roll - w[0].lyapunov.roll) / h,
                    (w[2].lyapunov.winder - w[0].lyapunov.winder) / h,
                ]
            })
            .collect()
    }
}

/// A failed run, with the log retained up to the failure.
#[derive(Debug)]
pub struct SimFailure {
    pub error: Error,
    pub partial: SimLog,
}

impl std::fmt::Display for SimFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "simulation failed: {}", self.error)
    }
}

impl std::error::Error for SimFailure {}

/// Per-channel tracking metrics.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelMetrics {
    pub name: &'static str,
    /// Earliest time after which the error magnitude stays inside the 2%
    /// band of its initial magnitude; `None` when the channel never settles.
    pub settling_time: Option<f64>,
    /// Error magnitude at the final row.
    pub steady_state_error: f64,
    /// RMS error over the post-settling window (whole run when unsettled).
    pub rms_after_settling: f64,
}

/// Metrics extracted from a run log.
#[derive(Debug, Clone, PartialEq)]
pub struct Metrics {
    pub channels: Vec<ChannelMetrics>,
    /// Largest positive excursion of the finite-difference derivatives of
    /// (V_c1, V_c2, V_c12).
    pub max_lyapunov_rate: [f64; 3],
}

struct TickControls {
    inputs: ControlInputs,
    raw_roll: f64,
    raw_pitch: f64,
}

struct Engine<'a> {
    config: &'a SimConfig,
    shaper: ReferenceShaper,
    held_tension: TensionVector,
    held_geometry: Option<CatenaryGeometry>,
    /// None until the first fit attempt, then the last attempt's outcome.
    fit_ok: Option<bool>,
    waypoint_index: usize,
    events: Vec<SimEvent>,
}

impl<'a> Engine<'a> {
    fn new(config: &'a SimConfig, initial_raw: (f64, f64)) -> Self {
        Self {
            config,
            shaper: ReferenceShaper::new(config.shaper_frequency, initial_raw.0, initial_raw.1),
            held_tension: TensionVector::zero(),
            held_geometry: None,
            fit_ok: None,
            waypoint_index: 0,
            events: Vec::new(),
        }
    }

    fn advance_waypoint(&mut self, t: f64, state: &FullState) {
        if let TrajectorySpec::Waypoints {
            points, tolerance, ..
        } = &self.config.trajectory
        {
            if self.waypoint_index + 1 < points.len() {
                let target = points[self.waypoint_index];
                if (state.uav.position - target).norm() <= *tolerance {
                    self.waypoint_index += 1;
                    self.events.push(SimEvent::WaypointReached {
                        time: t,
                        index: self.waypoint_index,
                    });
                }
            }
        }
    }

    /// Refit the catenary at the current state; on failure hold the last
    /// tension and record the transition.
    fn refresh_tension(&mut self, t: f64, state: &FullState) {
        let released = self.config.winder.radius * state.winder.angle;
        let anchor = Vec3::zeros();
        let fit = catenary::fit(
            &anchor,
            &state.uav.position,
            released,
            self.config.material.max_length,
        )
        .and_then(|geometry| {
            catenary::tension_from_geometry(&geometry, &self.config.material, state.uav.position.z)
                .map(|tension| (geometry, tension))
        });
        match fit {
            Ok((geometry, tension)) => {
                if self.fit_ok == Some(false) {
                    self.events.push(SimEvent::FitRecovered { time: t });
                }
                self.fit_ok = Some(true);
                self.held_geometry = Some(geometry);
                self.held_tension = tension;
            }
            Err(_) => {
                if self.fit_ok != Some(false) {
                    self.events.push(SimEvent::FitFailed { time: t });
                }
                self.fit_ok = Some(false);
            }
        }
    }

    /// Commanded-point feasibility: the desired length at the commanded
    /// position must stay on the spool.
    fn check_reach(&self, reference: &PositionReference) -> Result<()> {
        let zero = Vec3::zeros();
        control::desired_tether_length(
            &reference.position,
            &zero,
            &zero,
            &self.config.length_policy,
            &self.config.material,
        )
        .map(|_| ())
    }

    /// Evaluate every control law for the state `eval` at time `t_eval`,
    /// with the shaper advanced by `shaper_dt` under this tick's raw demand.
    fn compute_controls(
        &self,
        t_eval: f64,
        eval: &FullState,
        shaper_dt: f64,
    ) -> Result<(TickControls, ReferenceSignal, TetherReference)> {
        let cfg = self.config;
        let position_ref = generate_reference(&cfg.trajectory, t_eval, self.waypoint_index);
        self.check_reach(&position_ref)?;

        let mut reference = ReferenceSignal {
            position: position_ref.position,
            velocity: position_ref.velocity,
            acceleration: position_ref.acceleration,
            attitude: Vec3::new(0.0, 0.0, position_ref.yaw),
            ..Default::default()
        };

        // Altitude law first: it only needs the vertical channel and its
        // thrust feeds the horizontal inversion.
        let errors = control::error_junction(
            &eval.uav,
            &eval.winder,
            &reference,
            &cfg.gains,
            cfg.winder.radius,
        );
        let thrust = control::altitude_thrust(
            &eval.uav,
            &errors,
            &reference,
            &cfg.gains,
            self.held_tension.components.z,
            &cfg.uav,
            cfg.fidelity,
        )?;

        let (raw_roll, raw_pitch) = control::attitude_references(
            &eval.uav,
            &errors,
            &reference,
            &cfg.gains,
            thrust,
            &self.held_tension,
            &cfg.uav,
            cfg.tilt_limit,
        )?;

        // Shaped attitude references at the evaluation instant.
        let shaper = if shaper_dt > 0.0 {
            self.shaper.advanced(raw_roll, raw_pitch, shaper_dt)
        } else {
            self.shaper
        };
        let (roll_accel, pitch_accel) = shaper.accelerations(raw_roll, raw_pitch);
        reference.attitude.x = shaper.roll;
        reference.attitude.y = shaper.pitch;
        reference.attitude_rate = Vec3::new(shaper.roll_rate, shaper.pitch_rate, 0.0);
        reference.attitude_accel = Vec3::new(roll_accel, pitch_accel, 0.0);

        // Tether reference with fresh acceleration feedforward.
        let accel = uav::translational_accel(&eval.uav, thrust, &self.held_tension, &cfg.uav);
        let tether_ref = control::desired_tether_length(
            &eval.uav.position,
            &eval.uav.velocity,
            &accel,
            &cfg.length_policy,
            &cfg.material,
        )?;
        reference.tether_length = tether_ref.length;
        reference.tether_rate = tether_ref.rate;
        reference.tether_accel = tether_ref.accel;

        let errors = control::error_junction(
            &eval.uav,
            &eval.winder,
            &reference,
            &cfg.gains,
            cfg.winder.radius,
        );

        let inputs = ControlInputs {
            thrust,
            roll_moment: control::roll_moment(
                &eval.uav,
                &errors,
                &reference,
                &cfg.gains,
                &cfg.uav,
                cfg.fidelity,
            ),
            pitch_moment: control::pitch_moment(
                &eval.uav,
                &errors,
                &reference,
                &cfg.gains,
                &cfg.uav,
                cfg.fidelity,
            ),
            yaw_moment: control::yaw_moment(
                &eval.uav,
                &errors,
                &reference,
                &cfg.gains,
                &cfg.uav,
                cfg.fidelity,
            ),
            winch_torque: if cfg.winch_control {
                control::winch_torque(
                    &eval.winder,
                    &errors,
                    &reference,
                    &cfg.gains,
                    &cfg.winder,
                    cfg.fidelity,
                )?
            } else {
                0.0
            },
        }
        .saturate(&cfg.limits);

        Ok((
            TickControls {
                inputs,
                raw_roll,
                raw_pitch,
            },
            reference,
            tether_ref,
        ))
    }

    /// Reference and errors at the logged sample instant (shaper state as
    /// of the tick start, analytic feedforward irrelevant for the log).
    fn log_row(&self, t: f64, state: &FullState, inputs: &ControlInputs) -> Result<LogRow> {
        let cfg = self.config;
        let position_ref = generate_reference(&cfg.trajectory, t, self.waypoint_index);
        let zero = Vec3::zeros();
        let tether_ref = control::desired_tether_length(
            &state.uav.position,
            &state.uav.velocity,
            &zero,
            &cfg.length_policy,
            &cfg.material,
        )?;
        let reference = ReferenceSignal {
            position: position_ref.position,
            velocity: position_ref.velocity,
            acceleration: position_ref.acceleration,
            attitude: Vec3::new(self.shaper.roll, self.shaper.pitch, position_ref.yaw),
            attitude_rate: Vec3::new(self.shaper.roll_rate, self.shaper.pitch_rate, 0.0),
            attitude_accel: Vec3::zeros(),
            tether_length: tether_ref.length,
            tether_rate: tether_ref.rate,
            tether_accel: 0.0,
        };
        let errors = control::error_junction(
            &state.uav,
            &state.winder,
            &reference,
            &cfg.gains,
            cfg.winder.radius,
        );
        Ok(LogRow {
            time: t,
            state: *state,
            reference,
            errors,
            inputs: *inputs,
            tether_length: cfg.winder.radius * state.winder.angle,
            tether_length_ref: tether_ref.length,
            lyapunov: control::lyapunov_sample(&errors),
            geometry: self.held_geometry,
            tension: self.held_tension,
        })
    }
}

/// Run the closed loop. On failure the partial log is retained.
pub fn run_closed_loop(config: &SimConfig) -> std::result::Result<SimLog, Box<SimFailure>> {
    // Failure returns carry the log accumulated so far, with any engine
    // events folded in.
    let fail = |error: Error, mut log: SimLog, events: &mut Vec<SimEvent>| {
        log.events.append(events);
        Err(Box::new(SimFailure {
            error,
            partial: log,
        }))
    };
    let mut no_events: Vec<SimEvent> = Vec::new();

    let mut log = SimLog {
        dt: config.dt,
        rows: Vec::new(),
        events: Vec::new(),
    };
    if let Err(e) = config.validate() {
        return fail(e, log, &mut no_events);
    }

    let mut state = config.initial;
    if config.auto_spool {
        let zero = Vec3::zeros();
        match control::desired_tether_length(
            &state.uav.position,
            &zero,
            &zero,
            &config.length_policy,
            &config.material,
        ) {
            Ok(r) => state.winder.angle = r.length / config.winder.radius,
            Err(e) => return fail(e, log, &mut no_events),
        }
    }

    let steps = ((config.duration / config.dt) + 1e-9).floor() as usize;
    log.rows.reserve(steps + 1);

    // Bootstrap: seed the shaper at the initial raw demand and the held
    // inputs at the tick-sampled controls.
    let mut engine = Engine::new(config, (0.0, 0.0));
    engine.advance_waypoint(0.0, &state);
    engine.refresh_tension(0.0, &state);
    let initial = match engine.compute_controls(0.0, &state, 0.0) {
        Ok((tick, _, _)) => tick,
        Err(e) => return fail(e, log, &mut engine.events),
    };
    engine.shaper =
        ReferenceShaper::new(config.shaper_frequency, initial.raw_roll, initial.raw_pitch);
    let mut last_inputs = initial.inputs;

    for step in 0..=steps {
        let t = step as f64 * config.dt;
        if step > 0 {
            engine.advance_waypoint(t, &state);
            engine.refresh_tension(t, &state);
        }

        // Control evaluation point: the predicted step midpoint by default.
        // The prediction is iterated once so the inputs it assumes are the
        // ones actually applied, removing their first-order staleness.
        let tick = if config.midpoint_sampling && step < steps {
            let mut inputs = last_inputs;
            let mut tick = None;
            for _ in 0..2 {
                let derivative = match uav::full_derivative(
                    &state,
                    &inputs,
                    &engine.held_tension,
                    &config.uav,
                    &config.winder,
                ) {
                    Ok(d) => d,
                    Err(e) => return fail(e, log, &mut engine.events),
                };
                let mut predicted = state.to_array();
                for i in 0..14 {
                    predicted[i] += 0.5 * config.dt * derivative[i];
                }
                match engine.compute_controls(
                    t + 0.5 * config.dt,
                    &FullState::from_array(&predicted),
                    0.5 * config.dt,
                ) {
                    Ok((next, _, _)) => {
                        inputs = next.inputs;
                        tick = Some(next);
                    }
                    Err(e) => return fail(e, log, &mut engine.events),
                }
            }
            tick.unwrap()
        } else {
            match engine.compute_controls(t, &state, 0.0) {
                Ok((tick, _, _)) => tick,
                Err(e) => return fail(e, log, &mut engine.events),
            }
        };

        match engine.log_row(t, &state, &tick.inputs) {
            Ok(row) => log.rows.push(row),
            Err(e) => return fail(e, log, &mut engine.events),
        }
        if step == steps {
            break;
        }

        // Integrate with inputs and tension held constant.
        let mut derivative_fn = |x: &[f64; 14]| {
            uav::full_derivative(
                &FullState::from_array(x),
                &tick.inputs,
                &engine.held_tension,
                &config.uav,
                &config.winder,
            )
        };
        let next = match integrate_step(
            config.integrator,
            &mut derivative_fn,
            &state.to_array(),
            config.dt,
        ) {
            Ok(next) => next,
            Err(e) => return fail(e, log, &mut engine.events),
        };
        let mut next = FullState::from_array(&next);
        if !next.is_finite() {
            return fail(Error::NumericalBlowup { time: t }, log, &mut engine.events);
        }

        // Physical spool stop.
        let released = config.winder.radius * next.winder.angle;
        if released < 0.0 {
            next.winder.angle = 0.0;
            next.winder.rate = 0.0;
            engine.events.push(SimEvent::SpoolClamped { time: t });
        } else if released > config.material.max_length {
            next.winder.angle = config.material.max_length / config.winder.radius;
            next.winder.rate = 0.0;
            engine.events.push(SimEvent::SpoolClamped { time: t });
        }

        engine.shaper = engine
            .shaper
            .advanced(tick.raw_roll, tick.raw_pitch, config.dt);
        last_inputs = tick.inputs;
        state = next;
    }

    log.events = engine.events;
    Ok(log)
}

/// Settling band: 2% of the initial error magnitude, floored so channels
/// that start settled report immediately.
fn settling_band(initial: f64) -> f64 {
    (0.02 * initial.abs()).max(1e-9)
}

/// Extract per-channel settling, steady-state and RMS metrics plus the
/// worst positive Lyapunov-rate excursions.
pub fn compute_metrics(log: &SimLog) -> Metrics {
    let channels: [(&'static str, fn(&LogRow) -> f64); 7] = [
        ("x", |r| r.errors.position.x),
        ("y", |r| r.errors.position.y),
        ("z", |r| r.errors.position.z),
        ("roll", |r| r.errors.attitude.x),
        ("pitch", |r| r.errors.attitude.y),
        ("yaw", |r| r.errors.attitude.z),
        ("tether", |r| r.errors.tether),
    ];

    let mut out = Vec::with_capacity(channels.len());
    for (name, extract) in channels {
        let series: Vec<f64> = log.rows.iter().map(extract).collect();
        if series.is_empty() {
            out.push(ChannelMetrics {
                name,
                settling_time: None,
                steady_state_error: f64::NAN,
                rms_after_settling: f64::NAN,
            });
            continue;
        }
        let band = settling_band(series[0]);
        // last index outside the band decides the settling instant
        let mut settle_index = Some(0);
        for (i, e) in series.iter().enumerate() {
            if e.abs() > band {
                settle_index = if i + 1 < series.len() {
                    Some(i + 1)
                } else {
                    None
                };
            }
        }
        let window = match settle_index {
            Some(i) => &series[i..],
            None => &series[..],
        };
        let rms = (window.iter().map(|e| e * e).sum::<f64>() / window.len() as f64).sqrt();
        out.push(ChannelMetrics {
            name,
            settling_time: settle_index.map(|i| i as f64 * log.dt),
            steady_state_error: series.last().unwrap().abs(),
            rms_after_settling: rms,
        });
    }

    let mut max_rate = [f64::NEG_INFINITY; 3];
    for rate in log.lyapunov_rates() {
        for i in 0..3 {
            max_rate[i] = max_rate[i].max(rate[i]);
        }
    }
    if log.rows.len() < 3 {
        max_rate = [0.0; 3];
    }
    Metrics {
        channels: out,
        max_lyapunov_rate: [
            max_rate[0].max(0.0),
            max_rate[1].max(0.0),
            max_rate[2].max(0.0),
        ],
    }
}
