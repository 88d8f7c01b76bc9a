//! Ground winch model.
//!
//! The winch stores the unreleased tether, so its mass and moment of inertia
//! depend on how much cable is out. The drum obeys a single rotational
//! equation of motion driven by the control torque, viscous friction and --
//! when the cable is treated as elastic -- the tether pulling force. Under
//! the inelastic-cable assumption the pulling force is identically zero and
//! the equation reduces to its friction/torque form.

use crate::{Error, Result, Vec3};

/// Winch drum and tether parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WinderParams {
    /// Winch mass without any tether [kg].
    pub base_mass: f64,
    /// Tether linear density [kg/m].
    pub tether_density: f64,
    /// Maximum tether length on the spool [m].
    pub max_length: f64,
    /// Effective winch radius [m].
    pub radius: f64,
    /// Inner drum radius [m].
    pub inner_radius: f64,
    /// Viscous friction coefficient [N*m*s].
    pub viscous_friction: f64,
    /// Tether stiffness constant [N/m].
    pub stiffness: f64,
    /// Moment arm of the pulling force [m]; defaults to the effective radius.
    pub moment_arm: f64,
    /// Inelastic-cable mode: the pulling force is zero by assumption.
    pub inelastic: bool,
    /// When set, the equation of motion uses this fixed inertia instead of
    /// recomputing it from the instantaneous winch angle.
    pub frozen_inertia: Option<f64>,
}

impl Default for WinderParams {
    fn default() -> Self {
        let radius = 0.05;
        Self {
            base_mass: 1.2,
            tether_density: 0.034,
            max_length: 30.0,
            radius,
            inner_radius: 0.03,
            viscous_friction: 0.01,
            stiffness: 100.0,
            moment_arm: radius,
            inelastic: true,
            frozen_inertia: None,
        }
    }
}

impl WinderParams {
    pub fn validate(&self) -> Result<()> {
        for (name, value) in [
            ("winder.base_mass", self.base_mass),
            ("winder.tether_density", self.tether_density),
            ("winder.max_length", self.max_length),
            ("winder.radius", self.radius),
            ("winder.inner_radius", self.inner_radius),
            ("winder.viscous_friction", self.viscous_friction),
            ("winder.stiffness", self.stiffness),
            ("winder.moment_arm", self.moment_arm),
        ] {
            if value <= 0.0 {
                return Err(Error::domain(name, value, "all winch parameters > 0"));
            }
        }
        if self.inner_radius > self.radius {
            return Err(Error::domain(
                "winder.inner_radius",
                self.inner_radius,
                "0 < r_i <= r_w",
            ));
        }
        Ok(())
    }
}

/// Winch state: angular position and velocity of the drum.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct WinderState {
    /// Winch angle [rad]; `radius * angle` is the released tether length.
    pub angle: f64,
    /// Winch angular velocity [rad/s].
    pub rate: f64,
}

impl WinderState {
    /// Released tether length [m].
    pub fn released_length(&self, params: &WinderParams) -> f64 {
        params.radius * self.angle
    }
}

/// Winch mass including the unreleased tether:
/// `m_w = base + (L_T - r_w*angle) * rho`.
pub fn mass(params: &WinderParams, angle: f64) -> Result<f64> {
    let released = params.radius * angle;
    if !(0.0..=params.max_length).contains(&released) {
        return Err(Error::SpoolRange {
            released,
            max: params.max_length,
        });
    }
    Ok(params.base_mass + (params.max_length - released) * params.tether_density)
}

/// Hollow-drum moment of inertia: `I_w = 1/2 * m_w * (r_w^2 + r_i^2)`.
pub fn inertia(winch_mass: f64, radius: f64, inner_radius: f64) -> Result<f64> {
    if inner_radius <= 0.0 || inner_radius > radius {
        return Err(Error::domain(
            "inner_radius",
            inner_radius,
            "0 < r_i <= r_w",
        ));
    }
    Ok(0.5 * winch_mass * (radius * radius + inner_radius * inner_radius))
}

/// Inertia at the current winch angle (or the frozen value when configured).
///
/// The released length is clamped to the spool range so integrator stages
/// that momentarily overstep the physical stop still see a valid drum.
pub fn inertia_at(params: &WinderParams, angle: f64) -> Result<f64> {
    if let Some(frozen) = params.frozen_inertia {
        return Ok(frozen);
    }
    let released = (params.radius * angle).clamp(0.0, params.max_length);
    let winch_mass = params.base_mass + (params.max_length - released) * params.tether_density;
    inertia(winch_mass, params.radius, params.inner_radius)
}

/// Tether elongation: excess of the anchor-UAV distance over the released
/// length, clamped at zero for a slack cable.
pub fn tether_elongation(p1: &Vec3, p0: &Vec3, radius: f64, angle: f64) -> Result<f64> {
    let distance = (p1 - p0).norm();
    if distance == 0.0 {
        return Err(Error::DegenerateGeometry);
    }
    Ok((distance - radius * angle).max(0.0))
}

/// Pulling force exerted by an elastic tether on the UAV attachment:
/// `F_p = K_t * e_t * (p1 - p0)/|p1 - p0|`; identically zero in inelastic
/// mode.
pub fn pulling_force(params: &WinderParams, elongation: f64, p1: &Vec3, p0: &Vec3) -> Result<Vec3> {
    if params.inelastic {
        return Ok(Vec3::zeros());
    }
    let delta = p1 - p0;
    let distance = delta.norm();
    if distance == 0.0 {
        return Err(Error::DegenerateGeometry);
    }
    Ok(delta * (params.stiffness * elongation / distance))
}

/// Winch angular acceleration.
///
/// Elastic mode: `(r_e*|F_p| - beta_w*rate + r_w*torque) / I_w`;
/// inelastic mode drops the pulling-force term.
pub fn acceleration(
    params: &WinderParams,
    state: &WinderState,
    pulling_force_norm: f64,
    torque: f64,
) -> Result<f64> {
    let inertia = inertia_at(params, state.angle)?;
    let friction = -params.viscous_friction * state.rate;
    let drive = params.radius * torque;
    let pull = if params.inelastic {
        0.0
    } else {
        params.moment_arm * pulling_force_norm
    };
    Ok((pull + friction + drive) / inertia)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn params() -> WinderParams {
        WinderParams::default()
    }

    #[test]
    fn mass_full_and_empty_spool() {
        let p = params();
        assert_relative_eq!(
            mass(&p, 0.0).unwrap(),
            p.base_mass + p.max_length * p.tether_density
        );
        let empty = p.max_length / p.radius;
        assert_relative_eq!(mass(&p, empty).unwrap(), p.base_mass);
    }

    #[test]
    fn mass_reference_value() {
        // 1.2 + (30 - 0.05*100) * 0.034 = 2.05
        let p = params();
        assert_relative_eq!(mass(&p, 100.0).unwrap(), 2.05, max_relative = 1e-12);
    }

    #[test]
    fn mass_rejects_out_of_range_release() {
        let p = params();
        assert!(matches!(mass(&p, -1.0), Err(Error::SpoolRange { .. })));
        assert!(matches!(mass(&p, 1e6), Err(Error::SpoolRange { .. })));
    }

    #[test]
    fn mass_is_affine_decreasing_in_angle() {
        let p = params();
        let m0 = mass(&p, 0.0).unwrap();
        let m1 = mass(&p, 100.0).unwrap();
        let m2 = mass(&p, 200.0).unwrap();
        assert!(m1 < m0 && m2 < m1);
        assert_relative_eq!(m0 - m1, m1 - m2, max_relative = 1e-12);
    }

    #[test]
    fn inertia_limits() {
        // r_i -> 0 approaches the half-disc value; r_i = r_w doubles it.
        let i_thin = inertia(2.0, 0.05, 1e-12).unwrap();
        assert_relative_eq!(i_thin, 0.5 * 2.0 * 0.05 * 0.05, max_relative = 1e-6);
        let i_equal = inertia(2.0, 0.05, 0.05).unwrap();
        assert_relative_eq!(i_equal, 2.0 * 0.05 * 0.05, max_relative = 1e-12);
        assert!(inertia(2.0, 0.05, 0.06).is_err());
    }

    #[test]
    fn inertia_reference_value() {
        // 0.5 * 2.05 * (0.0025 + 0.0009) = 0.003485
        assert_relative_eq!(
            inertia(2.05, 0.05, 0.03).unwrap(),
            0.003485,
            max_relative = 1e-12
        );
    }

    #[test]
    fn inertia_increases_with_mass() {
        let a = inertia(1.0, 0.05, 0.03).unwrap();
        let b = inertia(2.0, 0.05, 0.03).unwrap();
        assert!(b > a);
    }

    #[test]
    fn elongation_clamps_at_zero() {
        let p0 = Vec3::zeros();
        let p1 = Vec3::new(0.0, 0.0, 10.0);
        // released 12 m covers the 10 m distance
        assert_abs_diff_eq!(tether_elongation(&p1, &p0, 0.05, 240.0).unwrap(), 0.0);
        // released 9.5 m leaves 0.5 m stretch
        assert_relative_eq!(
            tether_elongation(&p1, &p0, 0.05, 190.0).unwrap(),
            0.5,
            max_relative = 1e-12
        );
        assert!(tether_elongation(&p0, &p0, 0.05, 0.0).is_err());
    }

    #[test]
    fn elongation_is_continuous_piecewise_linear_in_angle() {
        let p0 = Vec3::zeros();
        let p1 = Vec3::new(3.0, 4.0, 0.0);
        let p = params();
        let mut previous = None;
        for i in 0..=400 {
            let angle = i as f64 * 0.5;
            let e = tether_elongation(&p1, &p0, p.radius, angle).unwrap();
            assert!(e >= 0.0);
            if let Some(prev) = previous {
                // slope is either -radius*0.5 per step or zero
                let step: f64 = e - prev;
                assert!(step <= 1e-12);
                assert!(step >= -p.radius * 0.5 - 1e-12);
            }
            previous = Some(e);
        }
    }

    #[test]
    fn pulling_force_modes() {
        let p0 = Vec3::zeros();
        let p1 = Vec3::new(0.0, 0.0, 2.0);
        let mut p = params();
        p.inelastic = false;

        assert_abs_diff_eq!(pulling_force(&p, 0.0, &p1, &p0).unwrap().norm(), 0.0);

        let f = pulling_force(&p, 0.5, &p1, &p0).unwrap();
        assert_relative_eq!(f.z, 50.0, max_relative = 1e-12);
        assert_abs_diff_eq!(f.x, 0.0);

        p.inelastic = true;
        assert_abs_diff_eq!(pulling_force(&p, 0.5, &p1, &p0).unwrap().norm(), 0.0);
    }

    #[test]
    fn pulling_force_is_parallel_with_nonnegative_coefficient() {
        let mut p = params();
        p.inelastic = false;
        let p0 = Vec3::new(0.1, -0.2, 0.0);
        for (x, y, z, e) in [
            (1.0, 2.0, 2.0, 0.3),
            (-2.0, 0.5, 4.0, 0.0),
            (3.0, 3.0, 1.0, 1.2),
        ] {
            let p1 = Vec3::new(x, y, z);
            let f = pulling_force(&p, e, &p1, &p0).unwrap();
            let dir = (p1 - p0).normalize();
            let coefficient = f.dot(&dir);
            assert!(coefficient >= 0.0);
            assert_abs_diff_eq!((f - dir * coefficient).norm(), 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn acceleration_rest_equilibrium() {
        let p = params();
        let state = WinderState {
            angle: 10.0,
            rate: 0.0,
        };
        assert_abs_diff_eq!(acceleration(&p, &state, 0.0, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn acceleration_single_term_balances() {
        let mut p = params();
        p.inelastic = false;
        p.frozen_inertia = Some(0.003485);
        let state = WinderState::default();
        let f = 2.0;
        assert_relative_eq!(
            acceleration(&p, &state, f, 0.0).unwrap(),
            p.moment_arm * f / 0.003485,
            max_relative = 1e-12
        );
    }

    #[test]
    fn free_spin_matches_exponential_decay() {
        // Inelastic, no torque, frozen inertia: rate(t) = rate(0)*exp(-beta_w*t/I_w).
        let mut p = params();
        let frozen = inertia_at(&p, 100.0).unwrap();
        p.frozen_inertia = Some(frozen);

        let dt = 1e-3;
        let mut state = WinderState {
            angle: 100.0,
            rate: 8.0,
        };
        let mut t = 0.0;
        while t < 1.0 - 0.5 * dt {
            // RK4 on the 2-state winch subsystem
            let f = |s: &WinderState| {
                let acc = acceleration(&p, s, 0.0, 0.0).unwrap();
                (s.rate, acc)
            };
            let k1 = f(&state);
            let k2 = f(&WinderState {
                angle: state.angle + 0.5 * dt * k1.0,
                rate: state.rate + 0.5 * dt * k1.1,
            });
            let k3 = f(&WinderState {
                angle: state.angle + 0.5 * dt * k2.0,
                rate: state.rate + 0.5 * dt * k2.1,
            });
            let k4 = f(&WinderState {
                angle: state.angle + dt * k3.0,
                rate: state.rate + dt * k3.1,
            });
            state.angle += dt / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0);
            state.rate += dt / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1);
            t += dt;
        }
        let expected = 8.0 * (-p.viscous_friction * 1.0 / frozen).exp();
        assert_relative_eq!(state.rate, expected, max_relative = 1e-6);
    }

    #[test]
    fn free_spin_rate_magnitude_never_increases() {
        let mut p = params();
        p.frozen_inertia = Some(inertia_at(&p, 50.0).unwrap());
        let mut state = WinderState {
            angle: 50.0,
            rate: -5.0,
        };
        let dt = 1e-3;
        let mut last = state.rate.abs();
        for _ in 0..2000 {
            let acc = acceleration(&p, &state, 0.0, 0.0).unwrap();
            state.rate += dt * acc;
            state.angle += dt * state.rate;
            assert!(state.rate.abs() <= last + 1e-15);
            last = state.rate.abs();
        }
    }
}
