//! Two-body spring/drag dynamics and a fixed-step RK4 integrator.
//!
//! The model is two point masses connected by a linear spring, falling under
//! gravity and optionally braked by quadratic air drag. Everything here is a
//! pure function of its inputs, so trajectories are reproducible bit-for-bit
//! on a given platform — the property the golden-file harness depends on.

use std::ops::{Add, Div, Mul, Neg, Sub};

use thiserror::Error;

use crate::real::{real, Real};

/// Below this separation the spring direction is undefined; the spring term
/// is dropped for that evaluation instead of producing NaN.
pub const COINCIDENCE_THRESHOLD: f64 = 1e-12;

/// A 3-component vector of positions, velocities or accelerations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Vec3<R> {
    pub x: R,
    pub y: R,
    pub z: R,
}

impl<R: Real> Vec3<R> {
    pub fn new(x: R, y: R, z: R) -> Self {
        Vec3 { x, y, z }
    }

    pub fn zero() -> Self {
        Vec3::new(R::zero(), R::zero(), R::zero())
    }

    pub fn norm(self) -> R {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }
}

impl<R: Real> Add for Vec3<R> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Vec3::new(self.x + rhs.x, self.y + rhs.y, self.z + rhs.z)
    }
}

impl<R: Real> Sub for Vec3<R> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Vec3::new(self.x - rhs.x, self.y - rhs.y, self.z - rhs.z)
    }
}

impl<R: Real> Neg for Vec3<R> {
    type Output = Self;
    fn neg(self) -> Self {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

impl<R: Real> Mul<R> for Vec3<R> {
    type Output = Self;
    fn mul(self, rhs: R) -> Self {
        Vec3::new(self.x * rhs, self.y * rhs, self.z * rhs)
    }
}

impl<R: Real> Div<R> for Vec3<R> {
    type Output = Self;
    fn div(self, rhs: R) -> Self {
        Vec3::new(self.x / rhs, self.y / rhs, self.z / rhs)
    }
}

/// First-order state vector: positions of bodies 1 and 2, then their
/// velocities, flattened component-wise.
///
/// Ordering is `(x1x, x1y, x1z, x2x, x2y, x2z, v1x, ..., v2z)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct State12<R>(pub [R; 12]);

impl<R: Real> State12<R> {
    pub fn from_parts(positions: [Vec3<R>; 2], velocities: [Vec3<R>; 2]) -> Self {
        let mut y = [R::zero(); 12];
        for (i, v) in positions.iter().chain(velocities.iter()).enumerate() {
            y[3 * i] = v.x;
            y[3 * i + 1] = v.y;
            y[3 * i + 2] = v.z;
        }
        State12(y)
    }

    /// Position of body `body` (0 or 1).
    pub fn position(&self, body: usize) -> Vec3<R> {
        let o = 3 * body;
        Vec3::new(self.0[o], self.0[o + 1], self.0[o + 2])
    }

    /// Velocity of body `body` (0 or 1).
    pub fn velocity(&self, body: usize) -> Vec3<R> {
        let o = 6 + 3 * body;
        Vec3::new(self.0[o], self.0[o + 1], self.0[o + 2])
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.is_finite())
    }
}

impl<R: Real> Add for State12<R> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let mut y = self.0;
        for (a, b) in y.iter_mut().zip(rhs.0.iter()) {
            *a = *a + *b;
        }
        State12(y)
    }
}

impl<R: Real> Mul<R> for State12<R> {
    type Output = Self;
    fn mul(self, rhs: R) -> Self {
        let mut y = self.0;
        for a in y.iter_mut() {
            *a = *a * rhs;
        }
        State12(y)
    }
}

/// Full physical and numerical configuration of one simulation run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpringScenario<R> {
    /// Masses of the two bodies, kg.
    pub masses: [R; 2],
    /// Spring constant, N/m.
    pub spring_constant: R,
    /// Separation at which the spring exerts no force, m.
    pub rest_length: R,
    /// Quadratic drag coefficients of the two bodies, kg/m.
    pub friction: [R; 2],
    /// Gravity magnitude, applied as (0, 0, -g), m/s².
    pub gravity: R,
    /// Initial positions, m.
    pub initial_positions: [Vec3<R>; 2],
    /// Initial velocities, m/s.
    pub initial_velocities: [Vec3<R>; 2],
    /// End of the integration interval, s.
    pub end_time: R,
    /// Fixed integration step, s.
    pub time_step: R,
    /// Trajectory sampling cadence, s.
    pub output_interval: R,
}

/// A scenario field violating its constraint. `key` matches the input-file
/// vocabulary so diagnostics point at the offending parameter.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("\"{key}\" {requirement}")]
pub struct InvalidScenario {
    pub key: &'static str,
    pub requirement: &'static str,
}

fn check(ok: bool, key: &'static str, requirement: &'static str) -> Result<(), InvalidScenario> {
    if ok {
        Ok(())
    } else {
        Err(InvalidScenario { key, requirement })
    }
}

impl<R: Real> SpringScenario<R> {
    /// Checks every scenario invariant, reporting the first violation.
    pub fn validate(&self) -> Result<(), InvalidScenario> {
        let finite_pair = |p: &[R; 2]| p.iter().all(|v| v.is_finite());
        check(finite_pair(&self.masses), "masses", "must be finite")?;
        check(
            self.masses.iter().all(|m| *m > R::zero()),
            "masses",
            "must be positive",
        )?;
        check(
            self.spring_constant.is_finite(),
            "spring constant",
            "must be finite",
        )?;
        check(
            self.spring_constant >= R::zero(),
            "spring constant",
            "must be non-negative",
        )?;
        check(self.rest_length.is_finite(), "rest length", "must be finite")?;
        check(
            self.rest_length >= R::zero(),
            "rest length",
            "must be non-negative",
        )?;
        check(finite_pair(&self.friction), "friction", "must be finite")?;
        check(
            self.friction.iter().all(|c| *c >= R::zero()),
            "friction",
            "must be non-negative",
        )?;
        check(self.gravity.is_finite(), "gravity", "must be finite")?;
        check(
            self.initial_positions.iter().all(|v| v.is_finite()),
            "initial positions",
            "must be finite",
        )?;
        check(
            self.initial_velocities.iter().all(|v| v.is_finite()),
            "initial velocities",
            "must be finite",
        )?;
        check(self.end_time.is_finite(), "end time", "must be finite")?;
        check(self.end_time > R::zero(), "end time", "must be positive")?;
        check(self.time_step.is_finite(), "time step", "must be finite")?;
        check(self.time_step > R::zero(), "time step", "must be positive")?;
        check(
            self.time_step <= self.end_time,
            "time step",
            "must not exceed the end time",
        )?;
        check(
            self.output_interval.is_finite(),
            "output interval",
            "must be finite",
        )?;
        check(
            self.output_interval >= self.time_step,
            "output interval",
            "must be at least the time step",
        )?;
        Ok(())
    }

    /// State vector at t = 0.
    pub fn initial_state(&self) -> State12<R> {
        State12::from_parts(self.initial_positions, self.initial_velocities)
    }
}

/// Simulated trajectory: `(t, state)` samples with the first at t = 0 and
/// the last exactly at the scenario end time.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<R> {
    pub samples: Vec<(R, State12<R>)>,
}

impl<R: Real> Trajectory<R> {
    pub fn final_state(&self) -> State12<R> {
        self.samples
            .last()
            .expect("a trajectory holds at least the initial sample")
            .1
    }
}

/// Integration failure. The state stopped being representable; the time of
/// the offending step is reported so the failing region can be inspected.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum OdeError {
    #[error("non-finite state encountered at t = {time}")]
    NonFinite { time: f64 },
}

/// Derivative of the two-body state.
///
/// The first six output components are the input velocities; the last six
/// are the accelerations
///
/// a_i = g + (1/m_i) [ D (Δ - L) d_i  -  C_i ‖v_i‖ v_i ],
///
/// with Δ the current separation, d_1 the unit vector from body 1 towards
/// body 2 and d_2 = -d_1. A stretched spring pulls the bodies together; the
/// drag force opposes the velocity with magnitude proportional to speed
/// squared. Coincident bodies contribute no spring force.
pub fn rhs<R: Real>(_t: R, y: &State12<R>, sc: &SpringScenario<R>) -> State12<R> {
    let x1 = y.position(0);
    let x2 = y.position(1);
    let v1 = y.velocity(0);
    let v2 = y.velocity(1);

    let separation = x2 - x1;
    let distance = separation.norm();
    let spring_on_1 = if distance < real(COINCIDENCE_THRESHOLD) {
        Vec3::zero()
    } else {
        separation * (sc.spring_constant * (distance - sc.rest_length) / distance)
    };

    let gravity = Vec3::new(R::zero(), R::zero(), -sc.gravity);
    let drag1 = v1 * (sc.friction[0] * v1.norm());
    let drag2 = v2 * (sc.friction[1] * v2.norm());
    let a1 = gravity + (spring_on_1 - drag1) / sc.masses[0];
    let a2 = gravity + (-spring_on_1 - drag2) / sc.masses[1];

    State12::from_parts([v1, v2], [a1, a2])
}

/// One classical fourth-order Runge–Kutta step of size `dt` from `(t, y)`.
///
/// Errors if any stage or the updated state is non-finite.
pub fn rk4_step<R, F>(f: &F, t: R, y: State12<R>, dt: R) -> Result<State12<R>, OdeError>
where
    R: Real,
    F: Fn(R, &State12<R>) -> State12<R>,
{
    let half = dt * real(0.5);
    let two = real::<R>(2.0);

    let k1 = f(t, &y);
    let k2 = f(t + half, &(y + k1 * half));
    let k3 = f(t + half, &(y + k2 * half));
    let k4 = f(t + dt, &(y + k3 * dt));

    let next = y + (k1 + k2 * two + k3 * two + k4) * (dt / real(6.0));
    if !(k1.is_finite() && k2.is_finite() && k3.is_finite() && k4.is_finite() && next.is_finite()) {
        return Err(OdeError::NonFinite {
            time: t.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(next)
}

/// Number of fixed steps covering `[0, end]`, and whether the last one must
/// be shortened to land exactly on `end`.
fn step_count<R: Real>(end: R, dt: R) -> u64 {
    let ratio = end / dt;
    let rounded = ratio.round();
    // Treat end times within one part in 1e9 of an integer multiple of dt as
    // exact multiples; the remainder is rounding noise, not a real short step.
    if (ratio - rounded).abs() <= real::<R>(1e-9) * rounded.max(R::one()) {
        (rounded.to_f64().unwrap() as u64).max(1)
    } else {
        ratio.floor().to_f64().unwrap() as u64 + 1
    }
}

/// Integrates the scenario with fixed-step RK4 from t = 0 to the end time.
///
/// The state is sampled at t = 0, then once per output interval, and always
/// at the end time; the final step is shortened when the end time is not an
/// integer multiple of the step.
pub fn integrate<R: Real>(sc: &SpringScenario<R>) -> Result<Trajectory<R>, OdeError> {
    let f = |t: R, y: &State12<R>| rhs(t, y, sc);
    let dt = sc.time_step;
    let end = sc.end_time;
    let steps = step_count(end, dt);
    let half = real::<R>(0.5);

    let mut y = sc.initial_state();
    let mut samples = vec![(R::zero(), y)];
    let mut next_output = sc.output_interval;

    for k in 0..steps {
        let t = R::from_u64(k).unwrap() * dt;
        let last = k == steps - 1;
        let step = if last { end - t } else { dt };
        y = rk4_step(&f, t, y, step)?;

        if last {
            samples.push((end, y));
        } else {
            let t_next = R::from_u64(k + 1).unwrap() * dt;
            // Half-step slack absorbs grid points that sit a few ulps below
            // an output boundary.
            if t_next + dt * half >= next_output {
                samples.push((t_next, y));
                while next_output <= t_next + dt * half {
                    next_output = next_output + sc.output_interval;
                }
            }
        }
    }

    debug_assert!(samples.windows(2).all(|w| w[0].0 < w[1].0));
    Ok(Trajectory { samples })
}
