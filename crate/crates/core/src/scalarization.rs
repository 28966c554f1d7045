//! The scalarization function `ξ_e` and the norms it induces.
//!
//! For `e ∈ int P`, `ξ_e(y) = inf { t : t·e − y ∈ P }`. The set of admissible
//! `t` is the closed ray `[ξ_e(y), ∞)`, so `t ↦ [t·e − y ∈ P]` is a monotone
//! predicate and the infimum can be found by bracketing and bisection. The
//! orthant and axis-aligned Lorentz cases have closed forms.
//!
//! `‖x‖_e = max(|ξ_e(x)|, |ξ_e(−x)|)` is a norm on ℝ^m, and any two of these
//! norms satisfy
//!
//! ```text
//! ‖x‖_e / ξ_e(e') ≤ ‖x‖_{e'} ≤ ξ_{e'}(e) · ‖x‖_e
//! ```
//!
//! with both constants attained (at `x = e'` and `x = e`).

use serde::Serialize;

use crate::cones::{ConeKind, SolidCone};
use crate::error::{Error, Result};
use crate::vector::Vector;

/// Relative width of the final bisection bracket.
pub const DEFAULT_TOL_BISECT: f64 = 1e-12;
pub const MAX_BISECT_ITER: usize = 200;

/// Doubling stops once `|t|` exceeds this.
const BRACKET_LIMIT: f64 = 1e300;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Zero,
    ClosedForm,
    Bisection,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalarizationResult {
    pub value: f64,
    pub bracket_lo: f64,
    pub bracket_hi: f64,
    pub iterations: usize,
    pub method: Method,
}

impl ScalarizationResult {
    fn exact(value: f64, method: Method) -> Self {
        ScalarizationResult {
            value,
            bracket_lo: value,
            bracket_hi: value,
            iterations: 0,
            method,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EquivalenceConstants {
    pub lower: f64,
    pub upper: f64,
}

/// `ξ_e` for a fixed cone and interior point `e`.
#[derive(Debug, Clone)]
pub struct Scalarizer<'c> {
    cone: &'c SolidCone,
    e: Vector,
    tol_bisect: f64,
}

impl<'c> Scalarizer<'c> {
    pub fn new(cone: &'c SolidCone, e: &Vector) -> Result<Self> {
        e.check_dim(cone.dim())?;
        cone.require_interior(e, "e")?;
        Ok(Scalarizer {
            cone,
            e: e.clone(),
            tol_bisect: DEFAULT_TOL_BISECT,
        })
    }

    pub fn with_tol_bisect(mut self, tol: f64) -> Self {
        self.tol_bisect = tol;
        self
    }

    pub fn cone(&self) -> &'c SolidCone {
        self.cone
    }

    pub fn e(&self) -> &Vector {
        &self.e
    }

    fn admissible(&self, t: f64, y: &Vector) -> bool {
        self.cone
            .contains(&(&self.e.scale(t) - y))
            .expect("dimension checked")
    }

    /// `(lo, hi)` with `hi·e − y ∈ P` and `lo·e − y ∉ P`, by doubling `t` over
    /// `±1, ±2, ±4, …`. Returns `(0, 0)` for `y = 0`.
    pub fn bracket(&self, y: &Vector) -> Result<(f64, f64)> {
        y.check_dim(self.cone.dim())?;
        if y.is_zero() {
            return Ok((0.0, 0.0));
        }
        let exhausted = || Error::Numerical(format!("bracket doubling exhausted for y = {y}"));
        if self.admissible(1.0, y) {
            let mut hi = 1.0;
            let mut t = -1.0;
            while self.admissible(t, y) {
                hi = t;
                t *= 2.0;
                if t.abs() > BRACKET_LIMIT {
                    return Err(exhausted());
                }
            }
            Ok((t, hi))
        } else {
            let mut lo = 1.0;
            let mut t = 2.0;
            while !self.admissible(t, y) {
                lo = t;
                t *= 2.0;
                if t > BRACKET_LIMIT {
                    return Err(exhausted());
                }
            }
            Ok((lo, t))
        }
    }

    /// Closed form when one exists for this cone and `e`.
    pub fn closed_form(&self, y: &Vector) -> Option<f64> {
        let e = self.e.as_slice();
        let ys = y.as_slice();
        match self.cone.kind() {
            ConeKind::Orthant => Some(
                ys.iter()
                    .zip(e)
                    .map(|(yi, ei)| yi / ei)
                    .fold(f64::NEG_INFINITY, f64::max),
            ),
            ConeKind::Lorentz => {
                let (s, e_bar) = e.split_last()?;
                if e_bar.iter().any(|&v| v != 0.0) {
                    return None;
                }
                let (yt, y_bar) = ys.split_last()?;
                let r = y_bar.iter().map(|v| v * v).sum::<f64>().sqrt();
                Some((yt + r) / s)
            }
            ConeKind::Polyhedral { .. } => None,
        }
    }

    pub fn xi(&self, y: &Vector) -> Result<ScalarizationResult> {
        y.check_dim(self.cone.dim())?;
        if y.is_zero() {
            return Ok(ScalarizationResult::exact(0.0, Method::Zero));
        }
        match self.closed_form(y) {
            Some(v) => Ok(ScalarizationResult::exact(v, Method::ClosedForm)),
            None => self.xi_bisection(y),
        }
    }

    /// The generic path: bracket, then bisect the membership predicate.
    pub fn xi_bisection(&self, y: &Vector) -> Result<ScalarizationResult> {
        let (mut lo, mut hi) = self.bracket(y)?;
        if lo == hi {
            return Ok(ScalarizationResult::exact(lo, Method::Zero));
        }
        let mut iterations = 0;
        loop {
            let mid = 0.5 * (lo + hi);
            if hi - lo <= self.tol_bisect * mid.abs().max(1.0) {
                return Ok(ScalarizationResult {
                    value: mid,
                    bracket_lo: lo,
                    bracket_hi: hi,
                    iterations,
                    method: Method::Bisection,
                });
            }
            if iterations >= MAX_BISECT_ITER || mid == lo || mid == hi {
                return Err(Error::Numerical(format!(
                    "bisection stalled at [{lo}, {hi}] after {iterations} iterations"
                )));
            }
            if self.admissible(mid, y) {
                hi = mid;
            } else {
                lo = mid;
            }
            iterations += 1;
        }
    }

    pub fn value(&self, y: &Vector) -> Result<f64> {
        Ok(self.xi(y)?.value)
    }

    pub fn norm(&self, x: &Vector) -> Result<f64> {
        let plus = self.value(x)?;
        let minus = self.value(&-x)?;
        Ok(plus.abs().max(minus.abs()))
    }
}

pub fn bracket(cone: &SolidCone, e: &Vector, y: &Vector) -> Result<(f64, f64)> {
    Scalarizer::new(cone, e)?.bracket(y)
}

pub fn xi(cone: &SolidCone, e: &Vector, y: &Vector) -> Result<ScalarizationResult> {
    Scalarizer::new(cone, e)?.xi(y)
}

pub fn norm_e(cone: &SolidCone, e: &Vector, x: &Vector) -> Result<f64> {
    Scalarizer::new(cone, e)?.norm(x)
}

/// `lower = 1/ξ_e(e2)` and `upper = ξ_{e2}(e)`, the sharp constants with
/// `lower·‖x‖_e ≤ ‖x‖_{e2} ≤ upper·‖x‖_e`.
pub fn equivalence_constants(
    cone: &SolidCone,
    e: &Vector,
    e2: &Vector,
) -> Result<EquivalenceConstants> {
    let se = Scalarizer::new(cone, e)?;
    let se2 = Scalarizer::new(cone, e2)?;
    Ok(EquivalenceConstants {
        lower: 1.0 / se.value(e2)?,
        upper: se2.value(e)?,
    })
}
