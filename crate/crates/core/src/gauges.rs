//! Comparison functions and cone self-maps used by the contraction conditions.
//!
//! A gauge `φ: [0, ∞) → [0, ∞)` is in class Φ when `φ(0) = 0`, `φ(t) < t` for
//! `t > 0` and `t − φ(t) → ∞`. Φ₁ adds monotonicity and `limsup_{s→r+} φ(s) < r`;
//! Φ₂ asks `limsup_{s→r} φ(s) < r` for every `r > 0`. Monotone members of Φ₁
//! are in Φ₂.
//!
//! These are analytic conditions. [`validate_gauge`] checks them on a finite
//! grid and reports "consistent with class", never "in class".
//!
//! A [`ConeGauge`] `ψ: P → P` plays the same role for cone-valued distances. For
//! an interior `e`, `φ(t) = ‖ψ(t·e)‖_e` turns it into a scalar gauge
//! ([`gauge_from_cone_map`]).

use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::cones::SolidCone;
use crate::error::{Error, Result};
use crate::report::ValidationReport;
use crate::sampling::{self, SampleRng};
use crate::scalarization::Scalarizer;
use crate::vector::Vector;

/// Bounds a grid passed to [`validate_gauge`] must reach.
pub const GRID_MIN: f64 = 1e-6;
pub const GRID_MAX: f64 = 1e6;
pub const DEFAULT_GRID_POINTS: usize = 64;

/// Half-width of the Φ₂ window, relative to `r`.
const LIMSUP_WINDOW: f64 = 1e-4;
/// Window halvings; the last few levels estimate the limsup.
const LIMSUP_LEVELS: i32 = 36;
const LIMSUP_TAIL_LEVELS: i32 = 4;

/// Tail offsets `max(r, 1)·2^j·1e-15`, `j = 0..=100`, used by [`compute_r0`].
const R0_TAIL_BASE: f64 = 1e-15;
const R0_TAIL_STEPS: i32 = 100;
const R0_DOUBLING_CAP: i32 = 60;
const R0_BISECT_ITER: usize = 200;
const R0_REL_TOL: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GaugeClass {
    Phi,
    Phi1,
    Phi2,
}

type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
type ConeFn = Arc<dyn Fn(&Vector) -> Vector + Send + Sync>;

#[derive(Clone)]
pub enum GaugeKind {
    /// `t ↦ k·t`, `0 ≤ k < 1`.
    Linear(f64),
    /// `t ↦ t / (1 + t)`.
    Saturating,
    /// Piecewise-linear through `(0, 0)` and the given points, extended with
    /// the last slope.
    Table(Vec<(f64, f64)>),
    Custom(ScalarFn),
    /// Pointwise maximum.
    Majorant(Vec<GaugeFunction>),
    /// `t ↦ ‖ψ(t·e)‖_e`.
    ConeMap {
        cone: SolidCone,
        e: Vector,
        psi: ConeGauge,
    },
}

impl fmt::Debug for GaugeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GaugeKind::Linear(k) => write!(f, "Linear({k})"),
            GaugeKind::Saturating => write!(f, "Saturating"),
            GaugeKind::Table(t) => write!(f, "Table({} points)", t.len()),
            GaugeKind::Custom(_) => write!(f, "Custom"),
            GaugeKind::Majorant(gs) => f.debug_tuple("Majorant").field(gs).finish(),
            GaugeKind::ConeMap { e, psi, .. } => write!(f, "ConeMap(e = {e}, ψ = {psi:?})"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct GaugeFunction {
    kind: GaugeKind,
    class: GaugeClass,
}

/// Wire form of the builtin gauges.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum GaugeSpec {
    Linear { k: f64 },
    Saturating,
    Table { points: Vec<(f64, f64)> },
}

impl TryFrom<GaugeSpec> for GaugeFunction {
    type Error = Error;

    fn try_from(spec: GaugeSpec) -> Result<Self> {
        match spec {
            GaugeSpec::Linear { k } => GaugeFunction::linear(k),
            GaugeSpec::Saturating => Ok(GaugeFunction::saturating()),
            GaugeSpec::Table { points } => GaugeFunction::table(points, GaugeClass::Phi),
        }
    }
}

impl<'de> Deserialize<'de> for GaugeFunction {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        GaugeSpec::deserialize(d)?
            .try_into()
            .map_err(serde::de::Error::custom)
    }
}

impl GaugeFunction {
    pub fn linear(k: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&k) {
            return Err(Error::Domain(format!(
                "linear gauge needs 0 ≤ k < 1, got {k}"
            )));
        }
        Ok(GaugeFunction {
            kind: GaugeKind::Linear(k),
            class: GaugeClass::Phi1,
        })
    }

    /// `Linear(k)` without the `k < 1` check; for negative controls.
    pub fn linear_unchecked(k: f64) -> Self {
        GaugeFunction {
            kind: GaugeKind::Linear(k),
            class: GaugeClass::Phi,
        }
    }

    pub fn saturating() -> Self {
        GaugeFunction {
            kind: GaugeKind::Saturating,
            class: GaugeClass::Phi1,
        }
    }

    pub fn table(points: Vec<(f64, f64)>, class: GaugeClass) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Domain("gauge table is empty".into()));
        }
        let mut prev = 0.0;
        for &(t, v) in &points {
            if !(t > prev && t.is_finite() && v >= 0.0 && v.is_finite()) {
                return Err(Error::Domain(format!(
                    "gauge table needs increasing positive abscissae and nonnegative finite values; bad point ({t}, {v})"
                )));
            }
            prev = t;
        }
        Ok(GaugeFunction {
            kind: GaugeKind::Table(points),
            class,
        })
    }

    pub fn custom(f: impl Fn(f64) -> f64 + Send + Sync + 'static, class: GaugeClass) -> Self {
        GaugeFunction {
            kind: GaugeKind::Custom(Arc::new(f)),
            class,
        }
    }

    pub fn kind(&self) -> &GaugeKind {
        &self.kind
    }

    pub fn class(&self) -> GaugeClass {
        self.class
    }

    pub fn eval(&self, t: f64) -> Result<f64> {
        if t.is_nan() || t < 0.0 {
            return Err(Error::Domain(format!(
                "gauge argument {t} must be nonnegative"
            )));
        }
        let v = match &self.kind {
            GaugeKind::Linear(k) => k * t,
            GaugeKind::Saturating => t / (1.0 + t),
            GaugeKind::Table(points) => interpolate(points, t),
            GaugeKind::Custom(f) => f(t),
            GaugeKind::Majorant(gs) => {
                let mut m = f64::NEG_INFINITY;
                for g in gs {
                    m = m.max(g.eval(t)?);
                }
                m
            }
            GaugeKind::ConeMap { cone, e, psi } => {
                let xi = Scalarizer::new(cone, e)?;
                xi.norm(&psi.apply(&e.scale(t))?)?
            }
        };
        if v.is_nan() {
            return Err(Error::Numerical(format!("gauge returned NaN at t = {t}")));
        }
        Ok(v)
    }
}

fn interpolate(points: &[(f64, f64)], t: f64) -> f64 {
    let mut prev = (0.0, 0.0);
    for &(x, y) in points {
        if t <= x {
            return prev.1 + (y - prev.1) * (t - prev.0) / (x - prev.0);
        }
        prev = (x, y);
    }
    let n = points.len();
    let before = if n >= 2 { points[n - 2] } else { (0.0, 0.0) };
    let (x, y) = points[n - 1];
    y + (y - before.1) / (x - before.0) * (t - x)
}

pub fn eval_gauge(g: &GaugeFunction, t: f64) -> Result<f64> {
    g.eval(t)
}

/// `DEFAULT_GRID_POINTS` log-spaced points from `GRID_MIN` to `GRID_MAX`.
pub fn default_grid() -> Vec<f64> {
    let n = DEFAULT_GRID_POINTS;
    let (a, b) = (GRID_MIN.log10(), GRID_MAX.log10());
    (0..n)
        .map(|i| 10f64.powf(a + (b - a) * i as f64 / (n - 1) as f64))
        .collect()
}

/// Outcome of [`validate_gauge`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GaugeValidation {
    pub declared: GaugeClass,
    pub report: ValidationReport,
    /// `min_r (r − limsup_estimate(r)) / r` over the grid.
    pub limsup_margin: f64,
}

impl GaugeValidation {
    /// Whether every clause required by `class` passed.
    pub fn consistent_with(&self, class: GaugeClass) -> bool {
        let mut required = vec!["zero_at_zero", "nonnegative", "below_identity", "growth"];
        match class {
            GaugeClass::Phi => {}
            GaugeClass::Phi1 => required.extend(["monotone", "limsup"]),
            GaugeClass::Phi2 => required.push("limsup"),
        }
        required.iter().all(|c| self.report.is_passed(c))
    }

    pub fn consistent(&self) -> bool {
        self.consistent_with(self.declared)
    }
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.len() < 2 {
        return Err(Error::Domain("grid needs at least two points".into()));
    }
    if grid.iter().any(|t| !(t.is_finite() && *t > 0.0)) {
        return Err(Error::Domain(
            "grid points must be positive and finite".into(),
        ));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Domain("grid must be strictly increasing".into()));
    }
    if grid[0] > GRID_MIN || grid[grid.len() - 1] < GRID_MAX {
        return Err(Error::Domain(format!(
            "grid must span at least [{GRID_MIN:e}, {GRID_MAX:e}]"
        )));
    }
    Ok(())
}

/// Grid estimate of `limsup_{s→r, s≠r} φ(s)`: the largest value over the
/// smallest punctured windows `r ± h·2^-j`.
fn limsup_estimate(g: &GaugeFunction, r: f64) -> Result<f64> {
    let h = LIMSUP_WINDOW * r;
    let mut est = f64::NEG_INFINITY;
    for j in (LIMSUP_LEVELS - LIMSUP_TAIL_LEVELS)..=LIMSUP_LEVELS {
        let off = h * 2f64.powi(-j);
        for s in [r - off, r + off] {
            if s != r && s >= 0.0 {
                est = est.max(g.eval(s)?);
            }
        }
    }
    Ok(est)
}

/// Grid checks of the class clauses. Passing is necessary, not sufficient.
pub fn validate_gauge(g: &GaugeFunction, grid: &[f64]) -> Result<GaugeValidation> {
    check_grid(grid)?;
    let mut report = ValidationReport::new();
    report.note("grid checks are necessary, not sufficient, for class membership");

    let at_zero = g.eval(0.0)?;
    report.push("zero_at_zero", at_zero == 0.0, format!("φ(0) = {at_zero}"));

    let values: Vec<f64> = grid.iter().map(|&t| g.eval(t)).collect::<Result<_>>()?;

    let negative: Vec<f64> = grid
        .iter()
        .zip(&values)
        .filter(|(_, v)| **v < 0.0)
        .map(|(t, _)| *t)
        .collect();
    report.push(
        "nonnegative",
        negative.is_empty(),
        format!("{} grid points with φ(t) < 0", negative.len()),
    );

    let above: Vec<f64> = grid
        .iter()
        .zip(&values)
        .filter(|(t, v)| **v >= **t)
        .map(|(t, _)| *t)
        .collect();
    report.push(
        "below_identity",
        above.is_empty(),
        match above.first() {
            None => "φ(t) < t at every grid point".to_string(),
            Some(t) => format!(
                "{} grid points with φ(t) ≥ t, first at t = {t:e}",
                above.len()
            ),
        },
    );

    let (t_max, v_max) = (grid[grid.len() - 1], values[values.len() - 1]);
    let gap = t_max - v_max;
    let target = t_max.sqrt();
    report.push(
        "growth",
        gap >= target,
        format!("t − φ(t) = {gap:e} at t = {t_max:e}; target √t = {target:e}"),
    );

    let drops = values
        .windows(2)
        .filter(|w| w[1] < w[0] - 1e-12 * w[0].abs().max(1.0))
        .count();
    report.push(
        "monotone",
        drops == 0,
        format!("{drops} decreases between consecutive grid points"),
    );

    let mut margin = f64::INFINITY;
    let mut worst = None;
    for &r in grid {
        let est = limsup_estimate(g, r)?;
        let m = (r - est) / r;
        if m < margin {
            margin = m;
            worst = Some(r);
        }
    }
    report.push(
        "limsup",
        margin > 0.0,
        format!(
            "min relative margin (r − limsup φ)/r = {margin:.3e} at r = {:e}",
            worst.unwrap_or(f64::NAN)
        ),
    );

    Ok(GaugeValidation {
        declared: g.class,
        report,
        limsup_margin: margin,
    })
}

/// `r₀ = inf { r : s − φ(s) > d0 for all s > r }`.
///
/// The inner "for all" is evaluated on the tail `r + max(r,1)·2^j·1e-15`,
/// `j = 0..=100`; `r₀` is bracketed by doubling and refined by bisection.
pub fn compute_r0(g: &GaugeFunction, d0: f64) -> Result<f64> {
    if !(d0 >= 0.0 && d0.is_finite()) {
        return Err(Error::Domain(format!(
            "d0 = {d0} must be finite and nonnegative"
        )));
    }
    let tail_ok = |r: f64| -> Result<bool> {
        let scale = r.max(1.0);
        for j in 0..=R0_TAIL_STEPS {
            let s = r + scale * R0_TAIL_BASE * 2f64.powi(j);
            if s - g.eval(s)? <= d0 {
                return Ok(false);
            }
        }
        Ok(true)
    };
    if tail_ok(0.0)? {
        return Ok(0.0);
    }
    let mut lo = 0.0;
    let mut hi = 1.0;
    let mut k = 0;
    while !tail_ok(hi)? {
        lo = hi;
        hi *= 2.0;
        k += 1;
        if k > R0_DOUBLING_CAP {
            return Err(Error::Numerical(format!(
                "s − φ(s) never stays above d0 = {d0}; the gauge fails the growth clause"
            )));
        }
    }
    for _ in 0..R0_BISECT_ITER {
        if hi - lo <= R0_REL_TOL * hi.max(1.0) {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if tail_ok(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// Pointwise maximum. The result is declared Φ₂ when every input is in Φ₁ or
/// Φ₂, otherwise Φ; it is never declared monotone.
pub fn majorant(gs: &[GaugeFunction]) -> Result<GaugeFunction> {
    match gs {
        [] => Err(Error::Domain("majorant of an empty gauge list".into())),
        [g] => Ok(g.clone()),
        _ => {
            let class = if gs.iter().all(|g| g.class != GaugeClass::Phi) {
                GaugeClass::Phi2
            } else {
                GaugeClass::Phi
            };
            Ok(GaugeFunction {
                kind: GaugeKind::Majorant(gs.to_vec()),
                class,
            })
        }
    }
}

#[derive(Clone)]
pub enum ConeGaugeForm {
    /// `x ↦ k·x`, `0 ≤ k < 1`.
    Scale(f64),
    /// `x ↦ A·x`.
    LinearOperator(DMatrix<f64>),
    Custom(ConeFn),
}

impl fmt::Debug for ConeGaugeForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConeGaugeForm::Scale(k) => write!(f, "Scale({k})"),
            ConeGaugeForm::LinearOperator(a) => write!(f, "LinearOperator({:?})", a.as_slice()),
            ConeGaugeForm::Custom(_) => write!(f, "Custom"),
        }
    }
}

/// A cone self-map `ψ: P → P` with a declared uniform margin `ε ∈ (0, 1)`.
#[derive(Debug, Clone)]
pub struct ConeGauge {
    cone: SolidCone,
    form: ConeGaugeForm,
    epsilon: f64,
}

/// Wire form; the cone comes from the surrounding problem.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum ConeGaugeSpec {
    Scale { k: f64, epsilon: f64 },
    Operator { matrix: Vec<Vec<f64>>, epsilon: f64 },
}

impl ConeGaugeSpec {
    pub fn build(&self, cone: &SolidCone) -> Result<ConeGauge> {
        match self {
            ConeGaugeSpec::Scale { k, epsilon } => ConeGauge::scale(cone.clone(), *k, *epsilon),
            ConeGaugeSpec::Operator { matrix, epsilon } => {
                ConeGauge::linear_operator(cone.clone(), matrix_from_rows(matrix)?, *epsilon)
            }
        }
    }
}

/// Square matrix from JSON-style rows.
pub fn matrix_from_rows(rows: &[Vec<f64>]) -> Result<DMatrix<f64>> {
    let n = rows.len();
    if n == 0 {
        return Err(Error::Domain("empty matrix".into()));
    }
    for row in rows {
        if row.len() != n {
            return Err(Error::dim(n, row.len()));
        }
        if row.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain("matrix entries must be finite".into()));
        }
    }
    Ok(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if epsilon > 0.0 && epsilon < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("ε = {epsilon} must lie in (0, 1)")))
    }
}

impl ConeGauge {
    pub fn scale(cone: SolidCone, k: f64, epsilon: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&k) {
            return Err(Error::Domain(format!(
                "scale gauge needs 0 ≤ k < 1, got {k}"
            )));
        }
        check_epsilon(epsilon)?;
        Ok(ConeGauge {
            cone,
            form: ConeGaugeForm::Scale(k),
            epsilon,
        })
    }

    pub fn linear_operator(cone: SolidCone, a: DMatrix<f64>, epsilon: f64) -> Result<Self> {
        if a.nrows() != cone.dim() || a.ncols() != cone.dim() {
            return Err(Error::dim(cone.dim(), a.nrows().max(a.ncols())));
        }
        check_epsilon(epsilon)?;
        Ok(ConeGauge {
            cone,
            form: ConeGaugeForm::LinearOperator(a),
            epsilon,
        })
    }

    pub fn custom(
        cone: SolidCone,
        psi: impl Fn(&Vector) -> Vector + Send + Sync + 'static,
        epsilon: f64,
    ) -> Result<Self> {
        check_epsilon(epsilon)?;
        Ok(ConeGauge {
            cone,
            form: ConeGaugeForm::Custom(Arc::new(psi)),
            epsilon,
        })
    }

    pub fn cone(&self) -> &SolidCone {
        &self.cone
    }

    pub fn form(&self) -> &ConeGaugeForm {
        &self.form
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn apply(&self, x: &Vector) -> Result<Vector> {
        x.check_dim(self.cone.dim())?;
        let y = match &self.form {
            ConeGaugeForm::Scale(k) => x.scale(*k),
            ConeGaugeForm::LinearOperator(a) => {
                let v = a * nalgebra::DVector::from_column_slice(x.as_slice());
                Vector::new(v.iter().copied().collect())?
            }
            ConeGaugeForm::Custom(f) => f(x),
        };
        y.check_dim(self.cone.dim())?;
        Ok(y)
    }

    /// Sampled checks of `ψ(0) = 0`, `ψ(P) ⊆ P`, `(I − ψ)(int P) ⊆ int P`, and
    /// growth of `t·x − ψ(t·x)` along random rays.
    pub fn check_invariants(&self, samples: usize, rng: &mut SampleRng) -> ValidationReport {
        let cone = &self.cone;
        let dim = cone.dim();
        let mut report = ValidationReport::new();

        let zero = self.apply(&Vector::zeros(dim));
        let ok = matches!(&zero, Ok(z) if z.norm_inf() <= 1e-12);
        report.push("psi_zero", ok, format!("ψ(0) = {zero:?}"));

        let mut into = 0;
        let mut interior = 0;
        let mut growth = 0;
        let xi = Scalarizer::new(cone, &cone.witness()).expect("witness is interior");
        let big = GRID_MAX;
        for _ in 0..samples {
            let x = sampling::sample_member(cone, rng);
            if !self
                .apply(&x)
                .and_then(|y| cone.contains(&y))
                .unwrap_or(false)
            {
                into += 1;
            }
            let w = sampling::sample_interior(cone, rng);
            let diff = self.apply(&w).map(|p| &w - &p);
            if !diff
                .and_then(|d| cone.interior_contains(&d))
                .unwrap_or(false)
            {
                interior += 1;
            }
            if !x.is_zero() {
                let tx = x.scale(big);
                let grows = self
                    .apply(&tx)
                    .and_then(|p| Ok((xi.value(&(&tx - &p))?, xi.value(&x)?)))
                    .map(|(far, unit)| far >= big.sqrt() * unit)
                    .unwrap_or(false);
                if !grows {
                    growth += 1;
                }
            }
        }
        report.push(
            "maps_into_cone",
            into == 0,
            format!("{into} of {samples} samples left the cone"),
        );
        report.push(
            "interior_contraction",
            interior == 0,
            format!("{interior} of {samples} interior samples with x − ψ(x) ∉ int P"),
        );
        report.push(
            "ray_growth",
            growth == 0,
            format!("{growth} of {samples} rays with ξ_e(tx − ψ(tx)) < √t·ξ_e(x) at t = {big:e}"),
        );
        report.note("growth is sampled along finitely many rays only");
        report
    }

    /// The uniform-margin clause: for random interior `x` and sequences
    /// `x_n → x` inside the interior, finds the index after which
    /// `ψ(x_n) ≤ (1 − ε)·x` holds for every retained `n`.
    pub fn check_uniform_margin(&self, samples: usize, rng: &mut SampleRng) -> MarginReport {
        const TERMS: i32 = 48;
        let cone = &self.cone;
        let mut indices = Vec::with_capacity(samples);
        for _ in 0..samples {
            let x = sampling::sample_interior(cone, rng);
            let mut z = sampling::vector(rng, cone.dim(), 1.0);
            // keep x ± z interior
            while !(cone.interior_contains(&(&x + &z)).unwrap_or(false)
                && cone.interior_contains(&(&x - &z)).unwrap_or(false))
            {
                z = z.scale(0.5);
            }
            let target = x.scale(1.0 - self.epsilon);
            let mut last_bad: Option<i32> = None;
            for n in 0..=TERMS {
                let xn = x.axpy(2f64.powi(-n), &z);
                let ok = self
                    .apply(&xn)
                    .and_then(|p| cone.leq(&p, &target))
                    .unwrap_or(false);
                if !ok {
                    last_bad = Some(n);
                }
            }
            indices.push(match last_bad {
                None => Some(0),
                Some(n) if n < TERMS => Some(n as usize + 1),
                Some(_) => None,
            });
        }
        MarginReport {
            epsilon: self.epsilon,
            passed: indices.iter().all(Option::is_some),
            max_index: indices.iter().flatten().copied().max(),
            indices,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MarginReport {
    pub epsilon: f64,
    /// Per sample: first index after which the margin holds, `None` if it
    /// still failed at the last retained term.
    pub indices: Vec<Option<usize>>,
    pub max_index: Option<usize>,
    pub passed: bool,
}

/// `φ(t) = ‖ψ(t·e)‖_e`.
pub fn gauge_from_cone_map(cone: &SolidCone, e: &Vector, psi: &ConeGauge) -> Result<GaugeFunction> {
    Scalarizer::new(cone, e)?;
    if psi.cone.dim() != cone.dim() {
        return Err(Error::dim(cone.dim(), psi.cone.dim()));
    }
    Ok(GaugeFunction {
        kind: GaugeKind::ConeMap {
            cone: cone.clone(),
            e: e.clone(),
            psi: psi.clone(),
        },
        class: GaugeClass::Phi2,
    })
}

/// Sampled checks for a linear `A`: `A(P) ⊆ P`, `(I − A)(int P) ⊆ int P`, and
/// invertibility of `A` and `I − A`. Surjectivity onto `P` is not checkable
/// by sampling.
pub fn linear_operator_check(
    cone: &SolidCone,
    a: &DMatrix<f64>,
    samples: usize,
    rng: &mut SampleRng,
) -> Result<ValidationReport> {
    let m = cone.dim();
    if a.nrows() != m || a.ncols() != m {
        return Err(Error::dim(
            m,
            if a.nrows() != m { a.nrows() } else { a.ncols() },
        ));
    }
    let apply = |x: &Vector| -> Vector {
        let v = a * nalgebra::DVector::from_column_slice(x.as_slice());
        Vector::new(v.iter().copied().collect()).expect("finite")
    };
    let mut report = ValidationReport::new();
    let mut into = 0;
    let mut interior = 0;
    for _ in 0..samples {
        let x = sampling::sample_member(cone, rng);
        if !cone.contains(&apply(&x))? {
            into += 1;
        }
        let w = sampling::sample_interior(cone, rng);
        if !cone.interior_contains(&(&w - &apply(&w)))? {
            interior += 1;
        }
    }
    report.push(
        "maps_cone_into_cone",
        into == 0,
        format!("{into} of {samples} samples with Ax ∉ P"),
    );
    report.push(
        "interior_contraction",
        interior == 0,
        format!("{interior} of {samples} interior samples with x − Ax ∉ int P"),
    );
    let identity = DMatrix::<f64>::identity(m, m);
    for (name, mat) in [
        ("a_invertible", a.clone()),
        ("i_minus_a_invertible", &identity - a),
    ] {
        let sv = mat.singular_values();
        let top = sv.max();
        let bottom = sv.min();
        let cond = if bottom > 0.0 {
            top / bottom
        } else {
            f64::INFINITY
        };
        let det = mat.determinant();
        report.push(
            name,
            det.abs() > 1e-12 && cond < 1e12,
            format!("det = {det:.6e}, condition ≈ {cond:.3e}"),
        );
    }
    report.note("A(P) = P and (I − A)(P) = P are checked only as inclusion plus invertibility");
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v<const N: usize>(a: [f64; N]) -> Vector {
        Vector::from(a)
    }

    #[test]
    fn eval_examples() {
        assert_eq!(GaugeFunction::linear(0.5).unwrap().eval(4.0).unwrap(), 2.0);
        assert_eq!(GaugeFunction::saturating().eval(1.0).unwrap(), 0.5);
        for g in [
            GaugeFunction::linear(0.3).unwrap(),
            GaugeFunction::saturating(),
        ] {
            assert_eq!(g.eval(0.0).unwrap(), 0.0);
        }
        assert!(matches!(
            GaugeFunction::saturating().eval(-1.0),
            Err(Error::Domain(_))
        ));
        assert!(GaugeFunction::linear(1.0).is_err());
    }

    #[test]
    fn table_interpolates() {
        let g = GaugeFunction::table(vec![(1.0, 0.5), (2.0, 0.5), (4.0, 1.5)], GaugeClass::Phi)
            .unwrap();
        assert_eq!(g.eval(0.5).unwrap(), 0.25);
        assert_eq!(g.eval(1.5).unwrap(), 0.5);
        assert_eq!(g.eval(3.0).unwrap(), 1.0);
        assert_eq!(g.eval(6.0).unwrap(), 2.5);
        assert!(GaugeFunction::table(vec![(1.0, 0.5), (0.5, 0.1)], GaugeClass::Phi).is_err());
    }

    #[test]
    fn validate_examples() {
        let grid = default_grid();
        assert_eq!(grid.len(), 64);
        let lin = validate_gauge(&GaugeFunction::linear(0.9).unwrap(), &grid).unwrap();
        assert!(lin.report.passed(), "{:?}", lin.report);
        assert!((lin.limsup_margin - 0.1).abs() < 1e-6);

        let ident = validate_gauge(&GaugeFunction::linear_unchecked(1.0), &grid).unwrap();
        assert!(!ident.report.is_passed("below_identity"));

        let sat = validate_gauge(&GaugeFunction::saturating(), &grid).unwrap();
        assert!(sat.report.is_passed("limsup"));
        assert!(sat.report.is_passed("growth"));
        assert!(sat.consistent_with(GaugeClass::Phi2));
    }

    #[test]
    fn validate_rejects_bad_grids() {
        let g = GaugeFunction::saturating();
        assert!(validate_gauge(&g, &[1.0, 2.0]).is_err());
        assert!(validate_gauge(&g, &[1e-6, 1e7, 1e6]).is_err());
        assert!(validate_gauge(&g, &[-1.0, 1e6]).is_err());
    }

    #[test]
    fn limsup_catches_spike() {
        // φ(s) = 1 on (1, 1.001), s/2 elsewhere: limsup at r = 1 equals 1.
        let spike = GaugeFunction::custom(
            |s| if s > 1.0 && s < 1.001 { 1.0 } else { 0.5 * s },
            GaugeClass::Phi2,
        );
        let mut grid = default_grid();
        grid.push(1.0);
        grid.sort_by(f64::total_cmp);
        grid.dedup();
        let r = validate_gauge(&spike, &grid).unwrap();
        assert!(r.report.is_passed("below_identity"));
        assert!(!r.report.is_passed("limsup"));
    }

    #[test]
    fn r0_examples() {
        let r0 = compute_r0(&GaugeFunction::linear(0.5).unwrap(), 1.0).unwrap();
        assert!((r0 - 2.0).abs() < 1e-12);
        let r0 = compute_r0(&GaugeFunction::linear(0.0).unwrap(), 5.0).unwrap();
        assert!((r0 - 5.0).abs() < 1e-12);
        assert_eq!(
            compute_r0(&GaugeFunction::linear(0.5).unwrap(), 0.0).unwrap(),
            0.0
        );
        assert!(matches!(
            compute_r0(
                &GaugeFunction::custom(|t| (t - 1.0).max(0.0), GaugeClass::Phi),
                2.0
            ),
            Err(Error::Numerical(_))
        ));
        assert!(compute_r0(&GaugeFunction::saturating(), -1.0).is_err());
    }

    #[test]
    fn majorant_examples() {
        let grid = default_grid();
        let m = majorant(&[
            GaugeFunction::linear(0.3).unwrap(),
            GaugeFunction::linear(0.7).unwrap(),
        ])
        .unwrap();
        for &t in &grid {
            assert_eq!(m.eval(t).unwrap(), 0.7 * t);
        }
        let m = majorant(&[
            GaugeFunction::linear(0.5).unwrap(),
            GaugeFunction::saturating(),
        ])
        .unwrap();
        assert_eq!(m.eval(2.0).unwrap(), 1.0);
        assert_eq!(m.class(), GaugeClass::Phi2);
        assert!(majorant(&[]).is_err());
    }

    #[test]
    fn cone_map_examples() {
        let o = SolidCone::orthant(2).unwrap();
        let e = v([1.0, 1.0]);
        let half = ConeGauge::scale(o.clone(), 0.5, 0.25).unwrap();
        let g = gauge_from_cone_map(&o, &e, &half).unwrap();
        assert_eq!(g.eval(3.0).unwrap(), 1.5);

        let zero = ConeGauge::custom(o.clone(), |x| Vector::zeros(x.dim()), 0.5).unwrap();
        assert_eq!(
            gauge_from_cone_map(&o, &e, &zero)
                .unwrap()
                .eval(7.0)
                .unwrap(),
            0.0
        );

        let diag = DMatrix::from_row_slice(2, 2, &[0.5, 0.0, 0.0, 0.25]);
        let op = ConeGauge::linear_operator(o.clone(), diag, 0.25).unwrap();
        let g = gauge_from_cone_map(&o, &e, &op).unwrap();
        assert_eq!(g.eval(4.0).unwrap(), 2.0);
        assert!(validate_gauge(&g, &default_grid()).unwrap().consistent());
    }

    #[test]
    fn linear_operator_examples() {
        let o = SolidCone::orthant(2).unwrap();
        let mut r = sampling::rng(1);
        let half = DMatrix::from_row_slice(2, 2, &[0.5, 0.0, 0.0, 0.5]);
        assert!(linear_operator_check(&o, &half, 200, &mut r)
            .unwrap()
            .passed());

        let id = DMatrix::<f64>::identity(2, 2);
        let rep = linear_operator_check(&o, &id, 200, &mut r).unwrap();
        assert!(!rep.is_passed("interior_contraction"));
        assert!(!rep.is_passed("i_minus_a_invertible"));

        // x − Ax = (x₁ − x₂/2, x₂ − x₁/2) leaves the orthant for unbalanced x,
        // e.g. (3, 0.1) ↦ (2.95, −1.4).
        let swap = DMatrix::from_row_slice(2, 2, &[0.0, 0.5, 0.5, 0.0]);
        let rep = linear_operator_check(&o, &swap, 200, &mut r).unwrap();
        assert!(rep.is_passed("maps_cone_into_cone"));
        assert!(!rep.is_passed("interior_contraction"));
        assert!(rep.is_passed("i_minus_a_invertible"));

        assert!(matches!(
            linear_operator_check(&o, &DMatrix::<f64>::identity(3, 3), 10, &mut r),
            Err(Error::Dimension { .. })
        ));
    }

    #[test]
    fn cone_gauge_invariants_and_margin() {
        let mut r = sampling::rng(3);
        let l = SolidCone::lorentz(3).unwrap();
        let psi = ConeGauge::scale(l.clone(), 0.6, 0.2).unwrap();
        assert!(psi.check_invariants(100, &mut r).passed());
        let margin = psi.check_uniform_margin(50, &mut r);
        assert!(margin.passed, "{margin:?}");

        let ident = ConeGauge::custom(l, |x| x.clone(), 0.2).unwrap();
        let rep = ident.check_invariants(50, &mut r);
        assert!(!rep.is_passed("interior_contraction"));
        assert!(!ident.check_uniform_margin(10, &mut r).passed);
    }

    #[test]
    fn gauge_json() {
        let g: GaugeFunction = serde_json::from_str(r#"{"kind":"linear","k":0.5}"#).unwrap();
        assert_eq!(g.eval(2.0).unwrap(), 1.0);
        let s: GaugeFunction = serde_json::from_str(r#"{"kind":"saturating"}"#).unwrap();
        assert_eq!(s.eval(1.0).unwrap(), 0.5);
        assert!(serde_json::from_str::<GaugeFunction>(r#"{"kind":"linear","k":1.5}"#).is_err());
        let spec: ConeGaugeSpec = serde_json::from_str(
            r#"{"kind":"operator","matrix":[[0.5,0],[0,0.25]],"epsilon":0.5}"#,
        )
        .unwrap();
        let psi = spec.build(&SolidCone::orthant(2).unwrap()).unwrap();
        assert_eq!(psi.apply(&v([2.0, 4.0])).unwrap(), v([1.0, 1.0]));
    }
}
