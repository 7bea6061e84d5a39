//! Golden-file regression testing toolkit built around a deterministic
//! two-body spring simulator.
//!
//! The pieces fit together like this:
//!
//! - [`ode`] evaluates and integrates the coupled two-body spring/drag
//!   dynamics with fixed-step RK4, generically over the scalar type;
//! - [`scenario`] reads JSON input files with backward-compatible defaults;
//! - [`output`] renders results in a byte-stable text format;
//! - [`numdiff`] compares two texts token by token, forgiving differences
//!   between numbers that fall within an absolute/relative tolerance;
//! - [`harness`] discovers input/reference pairs, reruns the simulator,
//!   reports a dot/X table, and re-records (blesses) references on demand;
//! - [`lineage`] renders the clone ancestry of a test corpus as a minimum
//!   spanning tree over textual distances between input files.

pub mod harness;
pub mod lineage;
pub mod numdiff;
pub mod ode;
pub mod output;
pub mod real;
pub mod scenario;

pub use real::Real;

/// The concrete scalar used by the CLI and the on-disk formats.
pub type Vec3 = ode::Vec3<f64>;
pub type State12 = ode::State12<f64>;
pub type SpringScenario = ode::SpringScenario<f64>;
pub type Trajectory = ode::Trajectory<f64>;
pub type Tolerance = numdiff::Tolerance<f64>;
