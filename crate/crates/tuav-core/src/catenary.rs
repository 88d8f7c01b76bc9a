//! Catenary tether model.
//!
//! A uniform flexible cable hanging under its own weight follows
//! `z(x) = a*cosh(x/a)` with the flatness parameter `a` set by the ratio of
//! horizontal tension to weight per unit length. This module evaluates the
//! curve, its arc length, fits the two-point boundary problem (anchor and UAV
//! attachment, given cable length), and resolves the tension applied at the
//! top of the cable into inertial components.

use crate::{Error, Result, Vec3};

/// Iteration budget for the two-point fit.
const FIT_MAX_ITERATIONS: usize = 200;

/// Relative tolerance on the arc-length residual of the fit. Tighter than
/// the contractual 1e-10 so the recovered parameter stays accurate even for
/// flat, ill-conditioned geometries.
const FIT_TOLERANCE: f64 = 1e-13;

/// Physical tether properties.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TetherMaterial {
    /// Linear density [kg/m].
    pub linear_density: f64,
    /// Cross-sectional area [m^2].
    pub cross_section: f64,
    /// Gravitational acceleration [m/s^2].
    pub gravity: f64,
    /// Maximum tether length on the spool [m].
    pub max_length: f64,
}

impl Default for TetherMaterial {
    fn default() -> Self {
        Self {
            linear_density: 0.034,
            cross_section: 1.1e-4,
            gravity: 9.81,
            max_length: 30.0,
        }
    }
}

impl TetherMaterial {
    pub fn validate(&self) -> Result<()> {
        if self.linear_density <= 0.0 {
            return Err(Error::domain(
                "material.rho",
                self.linear_density,
                "rho > 0",
            ));
        }
        if self.cross_section <= 0.0 {
            return Err(Error::domain("material.area", self.cross_section, "A > 0"));
        }
        if self.gravity <= 0.0 {
            return Err(Error::domain("material.g", self.gravity, "g > 0"));
        }
        if self.max_length <= 0.0 {
            return Err(Error::domain(
                "material.max_length",
                self.max_length,
                "L_T > 0",
            ));
        }
        Ok(())
    }
}

/// Fitted catenary in the vertical plane through anchor and UAV.
///
/// The in-plane abscissa `s` runs from 0 at the anchor to `span` at the UAV
/// footprint; the curve is `z(s) = a*cosh((s - vertex_offset)/a) + c` with `c`
/// fixed by the anchor end.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CatenaryGeometry {
    /// Catenary parameter `a` [m].
    pub parameter: f64,
    /// Horizontal coordinate of the curve's vertex relative to the anchor [m].
    pub vertex_offset: f64,
    /// Horizontal span from anchor to UAV footprint [m].
    pub span: f64,
    /// Vertical offset between the endpoints [m].
    pub height_delta: f64,
}

impl CatenaryGeometry {
    /// Arc length of the fitted section [m].
    pub fn arc_length(&self) -> f64 {
        arc_length(self.span, self.height_delta, self.parameter)
            .expect("geometry holds a validated parameter")
    }

    /// Cable height relative to the anchor at in-plane abscissa `s` [m].
    pub fn height_at(&self, s: f64) -> f64 {
        let a = self.parameter;
        a * (((s - self.vertex_offset) / a).cosh() - ((-self.vertex_offset) / a).cosh())
    }

    /// Tangent angles at the anchor (`alpha`) and UAV (`beta`) ends [rad].
    pub fn end_angles(&self) -> (f64, f64) {
        tension_angles(self.span, self.vertex_offset, self.parameter)
            .expect("geometry holds a validated parameter")
    }
}

/// Tension at the UAV attachment, resolved in the inertial frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TensionVector {
    /// Tension magnitude at the top of the tether [N].
    pub magnitude: f64,
    /// Vertical inclination angle [rad].
    pub alpha: f64,
    /// Azimuthal resolution angle [rad].
    pub beta: f64,
    /// Resolved (T_X, T_Y, T_Z) components [N].
    pub components: Vec3,
}

impl TensionVector {
    /// Zero tension (slack or unknown geometry).
    pub fn zero() -> Self {
        Self {
            magnitude: 0.0,
            alpha: 0.0,
            beta: 0.0,
            components: Vec3::zeros(),
        }
    }
}

impl Default for TensionVector {
    fn default() -> Self {
        Self::zero()
    }
}

/// Catenary parameter from the horizontal tension: `a = T0 / (rho * g)`.
pub fn parameter(horizontal_tension: f64, material: &TetherMaterial) -> Result<f64> {
    material.validate()?;
    if horizontal_tension <= 0.0 {
        return Err(Error::domain("T0", horizontal_tension, "T0 > 0"));
    }
    Ok(horizontal_tension / (material.linear_density * material.gravity))
}

/// Curve height `z = a*cosh(x/a)` with `x` measured from the vertex [m].
pub fn height(x: f64, a: f64) -> Result<f64> {
    if a <= 0.0 {
        return Err(Error::domain("a", a, "a > 0"));
    }
    Ok(a * (x / a).cosh())
}

/// Tension at the top of the tether: `T1 = T0 + rho * A * z * g`.
pub fn tension_at_top(horizontal_tension: f64, material: &TetherMaterial, z: f64) -> Result<f64> {
    material.validate()?;
    if z < 0.0 {
        return Err(Error::domain("z", z, "z >= 0"));
    }
    Ok(
        horizontal_tension
            + material.linear_density * material.cross_section * z * material.gravity,
    )
}

/// Arc length of a catenary section with horizontal span `span` and endpoint
/// height difference `height_delta`:
/// `L = sqrt((2a*sinh(span/2a))^2 + height_delta^2)`.
pub fn arc_length(span: f64, height_delta: f64, a: f64) -> Result<f64> {
    if a <= 0.0 {
        return Err(Error::domain("a", a, "a > 0"));
    }
    let chord = 2.0 * a * (span / (2.0 * a)).sinh();
    Ok((chord * chord + height_delta * height_delta).sqrt())
}

/// Cable tangent angles at the two ends of a fitted section.
///
/// `beta` is the tangent angle at the UAV end (`s = span`), `alpha` at the
/// anchor end (`s = 0`); both are `arctan` of the local slope and therefore
/// lie in (-pi/2, pi/2).
pub fn tension_angles(span: f64, vertex_offset: f64, a: f64) -> Result<(f64, f64)> {
    if a <= 0.0 {
        return Err(Error::domain("a", a, "a > 0"));
    }
    let beta = ((span - vertex_offset) / a).sinh().atan();
    let alpha = ((-vertex_offset) / a).sinh().atan();
    Ok((alpha, beta))
}

/// Resolve the top tension into inertial components:
/// `T_X = T1*cos(alpha)*sin(beta)`, `T_Y = T1*cos(alpha)*cos(beta)`,
/// `T_Z = T1*sin(alpha)`.
pub fn resolve_tension(magnitude: f64, alpha: f64, beta: f64) -> Result<TensionVector> {
    if magnitude < 0.0 {
        return Err(Error::domain("T1", magnitude, "T1 >= 0"));
    }
    let components = Vec3::new(
        magnitude * alpha.cos() * beta.sin(),
        magnitude * alpha.cos() * beta.cos(),
        magnitude * alpha.sin(),
    );
    Ok(TensionVector {
        magnitude,
        alpha,
        beta,
        components,
    })
}

/// Residual of the length equation at parameter `a`:
/// `f(a) = 2a*sinh(span/2a) - sqrt(L^2 - dz^2)`.
///
/// Monotone decreasing in `a`; positive for small `a`, approaches
/// `span - sqrt(L^2 - dz^2) < 0` as `a -> inf` whenever slack exists.
fn length_residual(a: f64, span: f64, straight: f64) -> f64 {
    let arg = span / (2.0 * a);
    // For extreme arguments the residual is astronomically positive; avoid
    // overflowing sinh.
    if arg > 350.0 {
        return f64::MAX;
    }
    2.0 * a * arg.sinh() - straight
}

fn length_residual_derivative(a: f64, span: f64) -> f64 {
    let arg = span / (2.0 * a);
    2.0 * arg.sinh() - (span / a) * arg.cosh()
}

/// Fit a catenary through the anchor `p0` and UAV position `p1` with total
/// cable length `length`.
///
/// Solves the standard two-point boundary problem by bracketing the
/// transcendental length equation in `a` and polishing with safeguarded
/// Newton iteration; the vertex offset then follows in closed form.
pub fn fit(p0: &Vec3, p1: &Vec3, length: f64, max_length: f64) -> Result<CatenaryGeometry> {
    let delta = p1 - p0;
    let span = (delta.x * delta.x + delta.y * delta.y).sqrt();
    let height_delta = delta.z;
    let distance = delta.norm();

    if length > max_length {
        return Err(Error::OverLength {
            length,
            max: max_length,
        });
    }
    if length <= distance {
        return Err(Error::InfeasibleSlack { length, distance });
    }
    if span <= 0.0 {
        return Err(Error::DegenerateVertical);
    }

    // sqrt(L^2 - dz^2) is the length of the "levelled" catenary; slack
    // guarantees it exceeds the span.
    let straight = (length * length - height_delta * height_delta).sqrt();

    // Bracket: residual is positive for small a and negative at a_hi.
    let mut a_hi = 1e6 * distance;
    if length_residual(a_hi, span, straight) > 0.0 {
        // Numerically taut beyond representable flatness.
        return Err(Error::InfeasibleSlack { length, distance });
    }
    let mut a_lo = span / 2.0;
    while length_residual(a_lo, span, straight) <= 0.0 {
        a_hi = a_hi.min(a_lo * 2.0);
        a_lo *= 0.5;
        if a_lo < 1e-15 * distance {
            return Err(Error::NoConvergence {
                iterations: 0,
                residual: f64::NAN,
            });
        }
    }

    // Safeguarded Newton: fall back to bisection whenever the Newton step
    // leaves the bracket.
    let mut a = 0.5 * (a_lo + a_hi);
    let mut residual = f64::MAX;
    for _ in 0..FIT_MAX_ITERATIONS {
        residual = length_residual(a, span, straight);
        let bracket_collapsed = (a_hi - a_lo) <= 4.0 * f64::EPSILON * a_hi;
        if residual.abs() <= FIT_TOLERANCE * straight || bracket_collapsed {
            let vertex_offset = vertex_from_parameter(a, span, height_delta);
            return Ok(CatenaryGeometry {
                parameter: a,
                vertex_offset,
                span,
                height_delta,
            });
        }
        if residual > 0.0 {
            a_lo = a;
        } else {
            a_hi = a;
        }
        let slope = length_residual_derivative(a, span);
        let newton = a - residual / slope;
        a = if slope != 0.0 && newton > a_lo && newton < a_hi {
            newton
        } else {
            0.5 * (a_lo + a_hi)
        };
    }
    Err(Error::NoConvergence {
        iterations: FIT_MAX_ITERATIONS,
        residual,
    })
}

/// Vertex offset for a catenary of known parameter through both endpoints:
/// `x0 = span/2 - a*asinh(dz / (2a*sinh(span/2a)))`.
fn vertex_from_parameter(a: f64, span: f64, height_delta: f64) -> f64 {
    let chord = 2.0 * a * (span / (2.0 * a)).sinh();
    span / 2.0 - a * (height_delta / chord).asinh()
}

/// Catenary through both endpoints with a prescribed parameter `a` (i.e. a
/// prescribed horizontal tension). Used by the catenary tether-length policy.
pub fn geometry_for_parameter(p0: &Vec3, p1: &Vec3, a: f64) -> Result<CatenaryGeometry> {
    if a <= 0.0 {
        return Err(Error::domain("a", a, "a > 0"));
    }
    let delta = p1 - p0;
    let span = (delta.x * delta.x + delta.y * delta.y).sqrt();
    if span <= 0.0 {
        return Err(Error::DegenerateVertical);
    }
    let height_delta = delta.z;
    Ok(CatenaryGeometry {
        parameter: a,
        vertex_offset: vertex_from_parameter(a, span, height_delta),
        span,
        height_delta,
    })
}

/// Top-of-tether tension for a fitted geometry, resolved into components.
///
/// The horizontal tension follows from the fitted parameter, the magnitude
/// from the attachment height `z_top`, and the direction from the end angles.
pub fn tension_from_geometry(
    geometry: &CatenaryGeometry,
    material: &TetherMaterial,
    z_top: f64,
) -> Result<TensionVector> {
    let horizontal = geometry.parameter * material.linear_density * material.gravity;
    let magnitude = tension_at_top(horizontal, material, z_top.max(0.0))?;
    let (alpha, beta) = geometry.end_angles();
    resolve_tension(magnitude, alpha, beta)
}

/// Sample the fitted curve as a 3D polyline from `p0` to `p1`.
///
/// Points are spaced uniformly in the in-plane abscissa; the first and last
/// samples are pinned to the endpoints exactly.
pub fn sample_polyline(
    geometry: &CatenaryGeometry,
    p0: &Vec3,
    p1: &Vec3,
    samples: usize,
) -> Vec<Vec3> {
    assert!(samples >= 2, "a polyline needs at least two points");
    let delta = p1 - p0;
    let span = geometry.span;
    let dir = if span > 0.0 {
        Vec3::new(delta.x / span, delta.y / span, 0.0)
    } else {
        Vec3::zeros()
    };
    let mut points = Vec::with_capacity(samples);
    points.push(*p0);
    for i in 1..samples - 1 {
        let s = span * (i as f64) / ((samples - 1) as f64);
        let z = geometry.height_at(s);
        points.push(p0 + dir * s + Vec3::new(0.0, 0.0, z));
    }
    points.push(*p1);
    points
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Adaptive Simpson quadrature of the catenary arc-length integrand
    /// `sqrt(1 + sinh^2(s/a)) = cosh(s/a)`; independent oracle for
    /// `arc_length`.
    fn quad_arc_length(a: f64, lo: f64, hi: f64) -> f64 {
        fn integrand(a: f64, s: f64) -> f64 {
            (1.0 + (s / a).sinh().powi(2)).sqrt()
        }
        fn simpson(a: f64, lo: f64, hi: f64) -> f64 {
            let mid = 0.5 * (lo + hi);
            (hi - lo) / 6.0 * (integrand(a, lo) + 4.0 * integrand(a, mid) + integrand(a, hi))
        }
        fn recurse(a: f64, lo: f64, hi: f64, whole: f64, depth: usize) -> f64 {
            let mid = 0.5 * (lo + hi);
            let left = simpson(a, lo, mid);
            let right = simpson(a, mid, hi);
            if depth == 0 || (left + right - whole).abs() < 1e-12 * whole.abs().max(1.0) {
                left + right + (left + right - whole) / 15.0
            } else {
                recurse(a, lo, mid, left, depth - 1) + recurse(a, mid, hi, right, depth - 1)
            }
        }
        recurse(a, lo, hi, simpson(a, lo, hi), 40)
    }

    fn material() -> TetherMaterial {
        TetherMaterial::default()
    }

    #[test]
    fn parameter_ratio_identity() {
        let m = material();
        let t0 = m.linear_density * m.gravity;
        assert_relative_eq!(parameter(t0, &m).unwrap(), 1.0, max_relative = 1e-14);
    }

    #[test]
    fn parameter_reference_value() {
        // 1 / (0.034 * 9.81) evaluated with 30-digit arithmetic.
        let a = parameter(1.0, &material()).unwrap();
        assert_relative_eq!(a, 2.998141152485459, max_relative = 1e-12);
    }

    #[test]
    fn parameter_rejects_nonpositive_tension() {
        assert!(matches!(
            parameter(0.0, &material()),
            Err(Error::Domain { .. })
        ));
        let mut bad = material();
        bad.linear_density = -1.0;
        assert!(parameter(1.0, &bad).is_err());
    }

    #[test]
    fn height_at_vertex_equals_parameter() {
        for a in [0.3, 1.0, 7.5] {
            assert_relative_eq!(height(0.0, a).unwrap(), a, max_relative = 1e-15);
        }
    }

    #[test]
    fn height_reference_value() {
        // cosh(1) to 16 digits.
        assert_relative_eq!(
            height(1.0, 1.0).unwrap(),
            1.5430806348152437,
            max_relative = 1e-14
        );
    }

    #[test]
    fn height_rejects_nonpositive_parameter() {
        assert!(height(1.0, 0.0).is_err());
        assert!(height(1.0, -2.0).is_err());
    }

    #[test]
    fn tension_at_top_is_affine_in_height() {
        let m = material();
        let t0 = 5.0;
        assert_relative_eq!(tension_at_top(t0, &m, 0.0).unwrap(), t0);
        // 5 + 0.034 * 1.1e-4 * 10 * 9.81
        assert_relative_eq!(
            tension_at_top(t0, &m, 10.0).unwrap(),
            5.000366894,
            max_relative = 1e-12
        );
        // tolerance reflects the cancellation in recovering the small increment
        let inc1 = tension_at_top(t0, &m, 4.0).unwrap() - t0;
        let inc2 = tension_at_top(t0, &m, 8.0).unwrap() - t0;
        assert_relative_eq!(inc2, 2.0 * inc1, max_relative = 1e-8);
        assert!(tension_at_top(t0, &m, -1.0).is_err());
    }

    #[test]
    fn arc_length_degenerate_cases() {
        assert_abs_diff_eq!(arc_length(0.0, 0.0, 1.0).unwrap(), 0.0);
        assert_relative_eq!(arc_length(0.0, 3.5, 1.0).unwrap(), 3.5);
        assert!(arc_length(1.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn arc_length_matches_quadrature() {
        // Fixed spot check from the operation contract.
        let (span, dz_shift, a) = (2.0, 0.5, 1.5);
        // Choose the interval start so the endpoint height difference is the
        // requested offset, then integrate the exact integrand.
        // Solve a*(cosh((s0+span)/a) - cosh(s0/a)) = dz for s0 by bisection.
        let target = dz_shift;
        let f = |s0: f64| a * (((s0 + span) / a).cosh() - (s0 / a).cosh()) - target;
        let (mut lo, mut hi) = (-10.0, 10.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if f(mid) > 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let s0 = 0.5 * (lo + hi);
        let oracle = quad_arc_length(a, s0, s0 + span);
        assert_relative_eq!(
            arc_length(span, dz_shift, a).unwrap(),
            oracle,
            max_relative = 1e-8
        );
    }

    #[test]
    fn arc_length_matches_quadrature_randomized() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x7e7);
        for _ in 0..100 {
            let a: f64 = rng.gen_range(0.2..5.0);
            let span: f64 = rng.gen_range(0.05..6.0);
            let s0: f64 = rng.gen_range(-2.0 * a..2.0 * a);
            let dz = a * (((s0 + span) / a).cosh() - (s0 / a).cosh());
            let oracle = quad_arc_length(a, s0, s0 + span);
            let formula = arc_length(span, dz, a).unwrap();
            assert_relative_eq!(formula, oracle, max_relative = 1e-8);
        }
    }

    #[test]
    fn tension_angles_zeros() {
        let (alpha, beta) = tension_angles(1.0, 1.0, 2.0).unwrap();
        assert_abs_diff_eq!(beta, 0.0);
        assert!(alpha < 0.0);
        let (alpha, _) = tension_angles(1.0, 0.0, 2.0).unwrap();
        assert_abs_diff_eq!(alpha, 0.0);
    }

    #[test]
    fn tension_angles_reference_value() {
        // arctan(sinh(0.35)) to 16 digits.
        let (_, beta) = tension_angles(1.0, 0.3, 2.0).unwrap();
        assert_relative_eq!(beta, 0.3430655098021891, max_relative = 1e-14);
    }

    #[test]
    fn resolve_tension_axis_cases() {
        let t = resolve_tension(4.0, 0.0, 0.0).unwrap();
        assert_abs_diff_eq!(t.components.x, 0.0);
        assert_relative_eq!(t.components.y, 4.0);
        assert_abs_diff_eq!(t.components.z, 0.0);

        let eps = 1e-9;
        let t = resolve_tension(4.0, std::f64::consts::FRAC_PI_2 - eps, 0.7).unwrap();
        assert_relative_eq!(t.components.z, 4.0, max_relative = 1e-9);

        assert!(resolve_tension(-1.0, 0.0, 0.0).is_err());
    }

    proptest! {
        /// Component norm equals the magnitude for any angles.
        #[test]
        fn resolved_tension_preserves_norm(
            magnitude in 0.0..1e3f64,
            alpha in -1.5f64..1.5,
            beta in -1.5f64..1.5,
        ) {
            let t = resolve_tension(magnitude, alpha, beta).unwrap();
            prop_assert!((t.components.norm() - magnitude).abs() <= 1e-12 * magnitude.max(1.0));
        }

        /// The curve is even around its vertex.
        #[test]
        fn height_is_even(x in -30.0f64..30.0, a in 0.1f64..10.0) {
            let lhs = height(x, a).unwrap();
            let rhs = height(-x, a).unwrap();
            prop_assert!((lhs - rhs).abs() <= 1e-12 * lhs.abs().max(1.0));
        }
    }

    #[test]
    fn fit_roundtrip_recovers_parameter() {
        // Forward-evaluate a known geometry, then fit it back.
        let a: f64 = 2.0;
        let span: f64 = 3.0;
        let vertex_offset = span / 2.0;
        let dz = a * (((span - vertex_offset) / a).cosh() - ((-vertex_offset) / a).cosh());
        let length = arc_length(span, dz, a).unwrap();
        let p0 = Vec3::zeros();
        let p1 = Vec3::new(span, 0.0, dz);
        let geom = fit(&p0, &p1, length, 100.0).unwrap();
        assert_relative_eq!(geom.parameter, a, max_relative = 1e-8);
        assert_relative_eq!(geom.vertex_offset, vertex_offset, max_relative = 1e-8);
        assert_relative_eq!(geom.arc_length(), length, max_relative = 1e-8);
    }

    #[test]
    fn fit_roundtrip_randomized() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..50 {
            let a: f64 = rng.gen_range(0.3..6.0);
            // keep the hyperbolic arguments moderate so lengths stay physical
            let span: f64 = a * rng.gen_range(0.1..4.0);
            let vertex_offset: f64 = a * rng.gen_range(-3.0..3.0);
            let dz = a * (((span - vertex_offset) / a).cosh() - ((-vertex_offset) / a).cosh());
            let length = arc_length(span, dz, a).unwrap();
            let p0 = Vec3::new(0.0, 0.0, 0.0);
            let p1 = Vec3::new(span / f64::sqrt(2.0), span / f64::sqrt(2.0), dz);
            let geom = fit(&p0, &p1, length, 1e9).unwrap();
            assert_relative_eq!(geom.parameter, a, max_relative = 1e-8);
            assert_relative_eq!(geom.arc_length(), length, max_relative = 1e-8);
        }
    }

    #[test]
    fn fit_rejects_taut_and_degenerate_inputs() {
        let p0 = Vec3::zeros();
        let p1 = Vec3::new(3.0, 0.0, 4.0);
        assert!(matches!(
            fit(&p0, &p1, 5.0, 100.0),
            Err(Error::InfeasibleSlack { .. })
        ));
        assert!(matches!(
            fit(&p0, &p1, 4.0, 100.0),
            Err(Error::InfeasibleSlack { .. })
        ));
        assert!(matches!(
            fit(&p0, &p1, 50.0, 30.0),
            Err(Error::OverLength { .. })
        ));
        let above = Vec3::new(0.0, 0.0, 4.0);
        assert!(matches!(
            fit(&p0, &above, 4.5, 100.0),
            Err(Error::DegenerateVertical)
        ));
    }

    #[test]
    fn fit_parameter_grows_as_slack_shrinks() {
        let p0 = Vec3::zeros();
        let p1 = Vec3::new(4.0, 0.0, 3.0);
        let distance = (p1 - p0).norm();
        let mut last = 0.0;
        for k in 1..=6 {
            let slack = 10f64.powi(-k);
            let geom = fit(&p0, &p1, distance * (1.0 + slack), 1e9).unwrap();
            assert!(
                geom.parameter > last,
                "parameter must grow monotonically as the cable gets tauter"
            );
            last = geom.parameter;
        }
    }

    #[test]
    fn geometry_for_parameter_passes_through_endpoints() {
        let p0 = Vec3::zeros();
        let p1 = Vec3::new(2.0, 1.0, 4.0);
        let geom = geometry_for_parameter(&p0, &p1, 1.3).unwrap();
        assert_relative_eq!(geom.height_at(0.0), 0.0, epsilon = 1e-12);
        assert_relative_eq!(geom.height_at(geom.span), 4.0, max_relative = 1e-12);
    }

    #[test]
    fn polyline_hits_endpoints_and_converges_to_arc_length() {
        let p0 = Vec3::zeros();
        let p1 = Vec3::new(3.0, 1.0, 4.0);
        let length = (p1 - p0).norm() * 1.08;
        let geom = fit(&p0, &p1, length, 100.0).unwrap();

        let line = sample_polyline(&geom, &p0, &p1, 2);
        assert_eq!(line, vec![p0, p1]);

        let line = sample_polyline(&geom, &p0, &p1, 200);
        assert_eq!(line[0], p0);
        assert_eq!(*line.last().unwrap(), p1);
        let chord_sum: f64 = line.windows(2).map(|w| (w[1] - w[0]).norm()).sum();
        assert_relative_eq!(chord_sum, length, max_relative = 1e-3);
    }
}
