//! Solid cones in ℝ^m and the order they induce.
//!
//! A cone `P` is closed under addition and nonnegative scaling and satisfies
//! `P ∩ −P = {0}`; it is solid when its interior is nonempty. Three families
//! are supported:
//!
//! * the nonnegative orthant `{x : x_i ≥ 0}`,
//! * the Lorentz (second-order) cone `{(x̄, t) : ‖x̄‖₂ ≤ t}`,
//! * polyhedral cones `{x : ⟨a_i, x⟩ ≥ 0 ∀i}` given by their normals and a
//!   caller-supplied interior witness.
//!
//! Membership is tested with an absolute slack `τ = tol·max(1, ‖x‖∞)` on each
//! normalized defining inequality; interior membership requires a strict
//! margin of at least `τ`.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::report::ValidationReport;
use crate::sampling::{self, SampleRng};
use crate::vector::Vector;

pub const DEFAULT_TOL_MEMBERSHIP: f64 = 1e-12;

/// Number of random pairs used by the closure spot-checks in [`SolidCone::validate`].
pub const CLOSURE_SAMPLES: usize = 1000;

/// Largest divisor tried by [`SolidCone::find_scale`], `2^60`.
const FIND_SCALE_MAX_EXPONENT: i32 = 60;

#[derive(Debug, Clone, PartialEq)]
pub enum ConeKind {
    Orthant,
    Lorentz,
    Polyhedral {
        normals: Vec<Vector>,
        witness: Vector,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ConeSpec", into = "ConeSpec")]
pub struct SolidCone {
    kind: ConeKind,
    dim: usize,
    tol: f64,
}

/// Wire form of a cone.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum ConeSpec {
    Orthant {
        dim: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        tol_membership: Option<f64>,
    },
    Lorentz {
        dim: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        tol_membership: Option<f64>,
    },
    Polyhedral {
        normals: Vec<Vector>,
        interior_witness: Vector,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        tol_membership: Option<f64>,
    },
}

impl TryFrom<ConeSpec> for SolidCone {
    type Error = Error;

    fn try_from(spec: ConeSpec) -> Result<Self> {
        let (cone, tol) = match spec {
            ConeSpec::Orthant {
                dim,
                tol_membership,
            } => (SolidCone::orthant(dim)?, tol_membership),
            ConeSpec::Lorentz {
                dim,
                tol_membership,
            } => (SolidCone::lorentz(dim)?, tol_membership),
            ConeSpec::Polyhedral {
                normals,
                interior_witness,
                tol_membership,
            } => (
                SolidCone::polyhedral(normals, interior_witness)?,
                tol_membership,
            ),
        };
        match tol {
            Some(t) => cone.with_tolerance(t),
            None => Ok(cone),
        }
    }
}

impl From<SolidCone> for ConeSpec {
    fn from(cone: SolidCone) -> Self {
        let tol_membership = (cone.tol != DEFAULT_TOL_MEMBERSHIP).then_some(cone.tol);
        match cone.kind {
            ConeKind::Orthant => ConeSpec::Orthant {
                dim: cone.dim,
                tol_membership,
            },
            ConeKind::Lorentz => ConeSpec::Lorentz {
                dim: cone.dim,
                tol_membership,
            },
            ConeKind::Polyhedral { normals, witness } => ConeSpec::Polyhedral {
                normals,
                interior_witness: witness,
                tol_membership,
            },
        }
    }
}

impl SolidCone {
    pub fn orthant(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Domain("cone dimension must be positive".into()));
        }
        Ok(SolidCone {
            kind: ConeKind::Orthant,
            dim,
            tol: DEFAULT_TOL_MEMBERSHIP,
        })
    }

    /// The cone `{(x̄, t) : ‖x̄‖₂ ≤ t}`, with `t` the last coordinate.
    pub fn lorentz(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Domain("cone dimension must be positive".into()));
        }
        Ok(SolidCone {
            kind: ConeKind::Lorentz,
            dim,
            tol: DEFAULT_TOL_MEMBERSHIP,
        })
    }

    /// `P = {x : ⟨a_i, x⟩ ≥ 0 ∀i}`. The witness must satisfy every inequality
    /// strictly; pointedness is not checked here (see [`SolidCone::validate`]).
    pub fn polyhedral(normals: Vec<Vector>, witness: Vector) -> Result<Self> {
        let dim = witness.dim();
        if dim == 0 {
            return Err(Error::Domain("cone dimension must be positive".into()));
        }
        if normals.is_empty() {
            return Err(Error::Domain(
                "polyhedral cone needs at least one normal".into(),
            ));
        }
        for a in &normals {
            a.check_dim(dim)?;
            if a.is_zero() {
                return Err(Error::Domain("polyhedral normals must be nonzero".into()));
            }
        }
        let cone = SolidCone {
            kind: ConeKind::Polyhedral { normals, witness },
            dim,
            tol: DEFAULT_TOL_MEMBERSHIP,
        };
        let w = cone.witness();
        if !cone.interior_contains(&w)? {
            return Err(Error::NotInterior(format!("interior witness {w}")));
        }
        Ok(cone)
    }

    pub fn with_tolerance(mut self, tol: f64) -> Result<Self> {
        if !(tol >= 0.0 && tol.is_finite()) {
            return Err(Error::Domain(format!(
                "membership tolerance {tol} must be finite and nonnegative"
            )));
        }
        self.tol = tol;
        Ok(self)
    }

    pub fn kind(&self) -> &ConeKind {
        &self.kind
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn tolerance(&self) -> f64 {
        self.tol
    }

    pub fn family(&self) -> &'static str {
        match self.kind {
            ConeKind::Orthant => "orthant",
            ConeKind::Lorentz => "lorentz",
            ConeKind::Polyhedral { .. } => "polyhedral",
        }
    }

    /// A fixed interior point: all-ones, the last axis, or the stored witness.
    pub fn witness(&self) -> Vector {
        match &self.kind {
            ConeKind::Orthant => Vector::ones(self.dim),
            ConeKind::Lorentz => Vector::last_axis(self.dim),
            ConeKind::Polyhedral { witness, .. } => witness.clone(),
        }
    }

    /// Signed depth of `x`: the smallest normalized defining inequality.
    /// Nonnegative exactly on `P`, positive exactly on its interior.
    pub fn margin(&self, x: &Vector) -> Result<f64> {
        x.check_dim(self.dim)?;
        let s = x.as_slice();
        Ok(match &self.kind {
            ConeKind::Orthant => s.iter().copied().fold(f64::INFINITY, f64::min),
            ConeKind::Lorentz => {
                let (t, bar) = s.split_last().expect("dim > 0");
                t - bar.iter().map(|v| v * v).sum::<f64>().sqrt()
            }
            ConeKind::Polyhedral { normals, .. } => normals
                .iter()
                .map(|a| a.dot(x) / a.norm2())
                .fold(f64::INFINITY, f64::min),
        })
    }

    fn slack(&self, x: &Vector) -> f64 {
        self.tol * x.norm_inf().max(1.0)
    }

    pub fn contains(&self, x: &Vector) -> Result<bool> {
        Ok(self.margin(x)? >= -self.slack(x))
    }

    pub fn interior_contains(&self, x: &Vector) -> Result<bool> {
        Ok(self.margin(x)? > self.slack(x))
    }

    /// `x ≤ y`, i.e. `y − x ∈ P`.
    pub fn leq(&self, x: &Vector, y: &Vector) -> Result<bool> {
        x.check_dim(self.dim)?;
        y.check_dim(self.dim)?;
        self.contains(&(y - x))
    }

    /// `x ≪ y`, i.e. `y − x ∈ int P`.
    pub fn strictly_less(&self, x: &Vector, y: &Vector) -> Result<bool> {
        x.check_dim(self.dim)?;
        y.check_dim(self.dim)?;
        self.interior_contains(&(y - x))
    }

    pub(crate) fn require_interior(&self, x: &Vector, what: &str) -> Result<()> {
        if self.interior_contains(x)? {
            Ok(())
        } else {
            Err(Error::NotInterior(format!("{what} = {x}")))
        }
    }

    /// Returns `δ = 1/n` for the first `n` in `1, 2, 4, 8, …` with `δ·c ≪ e`.
    pub fn find_scale(&self, c: &Vector, e: &Vector) -> Result<f64> {
        self.require_interior(c, "c")?;
        self.require_interior(e, "e")?;
        for k in 0..=FIND_SCALE_MAX_EXPONENT {
            let delta = 2f64.powi(-k);
            if self.interior_contains(&e.axpy(-delta, c))? {
                return Ok(delta);
            }
        }
        Err(Error::Numerical(format!(
            "no n ≤ 2^{FIND_SCALE_MAX_EXPONENT} with c/n ≪ e"
        )))
    }

    /// Checks pointedness, solidity and (sampled) closure with the default seed.
    pub fn validate(&self) -> ValidationReport {
        self.validate_with(&mut sampling::rng(sampling::DEFAULT_SEED))
    }

    pub fn validate_with(&self, rng: &mut SampleRng) -> ValidationReport {
        let mut report = ValidationReport::new();

        match &self.kind {
            ConeKind::Polyhedral { normals, .. } => {
                let rank = rank_of_rows(normals, self.dim);
                report.push(
                    "pointedness",
                    rank == self.dim,
                    format!("normals have rank {rank} in dimension {}", self.dim),
                );
            }
            _ => report.push(
                "pointedness",
                true,
                format!("{} cone is pointed", self.family()),
            ),
        }

        let w = self.witness();
        let solid = self.interior_contains(&w).unwrap_or(false);
        report.push(
            "solidity",
            solid,
            format!("witness {w} strictly interior: {solid}"),
        );

        let mut add_fail = 0;
        let mut scale_fail = 0;
        for _ in 0..CLOSURE_SAMPLES {
            let x = sampling::sample_member(self, rng);
            let y = sampling::sample_member(self, rng);
            let lambda = sampling::uniform(rng, 0.0, 10.0);
            if !self.contains(&(&x + &y)).unwrap_or(false) {
                add_fail += 1;
            }
            if !self.contains(&x.scale(lambda)).unwrap_or(false) {
                scale_fail += 1;
            }
        }
        report.push(
            "closure_addition",
            add_fail == 0,
            format!("{add_fail} of {CLOSURE_SAMPLES} sampled sums left the cone"),
        );
        report.push(
            "closure_scaling",
            scale_fail == 0,
            format!("{scale_fail} of {CLOSURE_SAMPLES} sampled scalings left the cone"),
        );
        report
    }
}

/// Numerical rank of the matrix whose rows are `rows`.
pub(crate) fn rank_of_rows(rows: &[Vector], dim: usize) -> usize {
    let m = DMatrix::from_fn(rows.len(), dim, |i, j| rows[i][j]);
    let sv = m.singular_values();
    let top = sv.iter().copied().fold(0.0, f64::max);
    if top == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > 1e-10 * top).count()
}
