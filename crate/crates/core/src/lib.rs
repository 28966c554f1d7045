//! Scalarization of solid cones in ℝ^m and the metric structure it induces.
//!
//! A cone-valued distance `d: X × X → P` over a solid cone `P` carries no more
//! information than the family of real metrics `d_e = ξ_e ∘ d`, one for each
//! interior point `e`, where
//!
//! ```text
//! ξ_e(y) = inf { t ∈ ℝ : t·e − y ∈ P }
//! ```
//!
//! is the nonlinear scalarization function. This crate provides:
//!
//! * [`cones`]: orthant, Lorentz and polyhedral cones with tolerance-aware
//!   membership, interior and order oracles.
//! * [`scalarization`]: `ξ_e`, the induced norm `‖x‖_e`, and the sharp
//!   equivalence constants between `‖·‖_e` and `‖·‖_{e'}`.
//! * [`cone_metric`]: cone-valued metrics, the induced real metrics `d_e`,
//!   sequence tail analysis, order checks and condition translation.
//! * [`gauges`]: comparison functions `φ` and cone self-maps `ψ`, sampled class
//!   checks, the `r₀` orbit bound, and the reduction `φ(t) = ‖ψ(te)‖_e`.
//! * [`fixed_point`]: the Jungck iteration for a pair `f, g` under a
//!   five-gauge contraction condition, with orbit diagnostics, and its
//!   cone-metric wrapper.
//! * [`selftest`]: seeded property suites over all of the above; [`cli`] and
//!   [`json`] expose everything through the `conescale` binary.
//!
//! Every sampled check is seeded; see [`sampling`].
//!
//! ```
//! use conescale::{cones::SolidCone, scalarization, Vector};
//!
//! let cone = SolidCone::orthant(2).unwrap();
//! let e = Vector::from([1.0, 1.0]);
//! let y = Vector::from([3.0, 5.0]);
//! let xi = scalarization::xi(&cone, &e, &y).unwrap();
//! assert_eq!(xi.value, 5.0);
//! ```

pub mod cli;
pub mod cone_metric;
pub mod cones;
mod error;
pub mod fixed_point;
pub mod gauges;
pub mod json;
mod report;
pub mod sampling;
pub mod scalarization;
pub mod selftest;
mod vector;

pub use error::{Error, Result};
pub use report::{Check, ValidationReport};
pub use vector::Vector;

pub use nalgebra;
