//! Jungck iteration `f(x_n) = g(x_{n+1})` with orbit diagnostics.
//!
//! The solver is a checker, not a prover: the five-gauge contraction bound is
//! evaluated only on orbit pairs, and a clean report means no counterexample
//! was observed.

use serde::Serialize;

use crate::cone_metric::{induced_metric, ConeMetric, Metric};
use crate::error::{Error, Result};
use crate::gauges::{self, compute_r0, gauge_from_cone_map, majorant, ConeGauge, GaugeFunction};
use crate::vector::Vector;

pub const DEFAULT_TOL_CONV: f64 = 1e-10;
pub const DEFAULT_MAX_ITER: usize = 10_000;
/// Orbit points kept for diameter diagnostics.
pub const ORBIT_RETENTION: usize = 4096;
/// Violations stored in full; the rest are only counted.
pub const MAX_RECORDED_VIOLATIONS: usize = 1000;
/// Relative slack of the contraction check.
pub const CONTRACTION_TOL: f64 = 1e-9;
/// Allowed mismatch `d(g(x_{n+1}), f(x_n))`, relative to `1 + d(f x_n, f x_0)`.
pub const PREIMAGE_TOL: f64 = 1e-9;
/// Largest window length `n` in the windowed-diameter recursion check.
pub const WINDOW_CHECK_LEN: usize = 4;
const WINDOW_CHECK_TOL: f64 = 1e-9;

type Map<'a, X, Y> = Box<dyn Fn(&X) -> Y + 'a>;
type Selector<'a, X, Y> = Box<dyn Fn(&Y) -> Option<X> + 'a>;

/// The maps of a coincidence problem.
pub struct Maps<'a, X, Y> {
    pub f: Map<'a, X, Y>,
    pub g: Map<'a, X, Y>,
    /// Returns some `x` with `g(x) = y`, or `None` when `y ∉ g(X)`.
    pub g_preimage: Selector<'a, X, Y>,
    /// Identification `Y → X`, present when the two spaces coincide.
    pub embed: Option<Map<'a, Y, X>>,
}

impl<'a, X, Y> Maps<'a, X, Y> {
    pub fn new(
        f: impl Fn(&X) -> Y + 'a,
        g: impl Fn(&X) -> Y + 'a,
        g_preimage: impl Fn(&Y) -> Option<X> + 'a,
    ) -> Self {
        Maps {
            f: Box::new(f),
            g: Box::new(g),
            g_preimage: Box::new(g_preimage),
            embed: None,
        }
    }
}

impl<'a, X: Clone + 'a> Maps<'a, X, X> {
    /// Self-maps of one space.
    pub fn self_maps(
        f: impl Fn(&X) -> X + 'a,
        g: impl Fn(&X) -> X + 'a,
        g_preimage: impl Fn(&X) -> Option<X> + 'a,
    ) -> Self {
        Maps {
            embed: Some(Box::new(X::clone)),
            ..Maps::new(f, g, g_preimage)
        }
    }

    /// `f` with `g = id`.
    pub fn picard(f: impl Fn(&X) -> X + 'a) -> Self {
        Self::self_maps(f, X::clone, |y: &X| Some(y.clone()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances {
    pub tol_conv: f64,
    pub max_iter: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            tol_conv: DEFAULT_TOL_CONV,
            max_iter: DEFAULT_MAX_ITER,
        }
    }
}

pub struct JungckProblem<'a, X, Y> {
    pub metric: Box<dyn Metric<Y> + 'a>,
    pub maps: Maps<'a, X, Y>,
    /// `φ₁ … φ₅`, applied to `d(gx,gy)`, `d(gx,fx)`, `d(gy,fy)`, `d(gx,fy)`,
    /// `d(fx,gy)`.
    pub gauges: [GaugeFunction; 5],
    pub x0: X,
    pub tolerances: Tolerances,
    /// Asserted by the caller; only commutation at the recovered argument is
    /// checked.
    pub weakly_compatible: bool,
}

impl<'a, X, Y> JungckProblem<'a, X, Y> {
    pub fn new(
        metric: impl Metric<Y> + 'a,
        maps: Maps<'a, X, Y>,
        gauges: [GaugeFunction; 5],
        x0: X,
    ) -> Self {
        JungckProblem {
            metric: Box::new(metric),
            maps,
            gauges,
            x0,
            tolerances: Tolerances::default(),
            weakly_compatible: false,
        }
    }

    pub fn with_tolerances(mut self, tolerances: Tolerances) -> Self {
        self.tolerances = tolerances;
        self
    }

    pub fn weakly_compatible(mut self, flag: bool) -> Self {
        self.weakly_compatible = flag;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Converged,
    NonConvergence,
}

/// A pair `(x_n, x_{n+lag})` on which the contraction bound failed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Violation {
    pub n: usize,
    pub lag: usize,
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SolveReport<X, Y> {
    pub status: Status,
    pub iterations: usize,
    /// `d(f x_n, f x_{n+1})`.
    pub trajectory_gaps: Vec<f64>,
    pub limit: Y,
    /// `z*` with `g(z*) = limit`.
    pub coincidence_argument: X,
    /// `d(f z*, g z*)`.
    pub coincidence_residual: f64,
    pub d0: f64,
    pub r0_bound: f64,
    pub observed_orbit_diameter: f64,
    pub contraction_violations: Vec<Violation>,
    pub contraction_violation_count: usize,
    /// Pairs breaking `δ(O_n(x_k)) ≤ φ̂(δ(O_{n+1}(x_{k−1})))`.
    pub window_violations: usize,
    /// `d(z, f z)`, when the spaces coincide and weak compatibility is asserted.
    pub fixed_point_residual: Option<f64>,
    /// `d(f(g z*), g(f z*))`, when the spaces coincide.
    pub commutation_residual: Option<f64>,
    /// Cone-side violations (cone-valued problems only).
    pub tvs_violations: Vec<Violation>,
    pub tvs_violation_count: usize,
    /// Pairs flagged by exactly one of the scalar and cone-side checks.
    pub check_disagreements: Vec<(usize, usize)>,
    pub notes: Vec<String>,
    /// `f x_0, f x_1, …`, the first `ORBIT_RETENTION` points.
    #[serde(skip)]
    pub orbit: Vec<Y>,
}

impl<X, Y> SolveReport<X, Y> {
    pub fn converged(&self) -> bool {
        self.status == Status::Converged
    }
}

/// What an observer sees for each checked pair `(x, y) = (x_n, x_{n+lag})`.
pub struct PairView<'p, X, Y> {
    pub n: usize,
    pub lag: usize,
    pub x: &'p X,
    pub y: &'p X,
    pub fx: &'p Y,
    pub fy: &'p Y,
    pub gx: &'p Y,
    pub gy: &'p Y,
    pub scalar_violation: bool,
}

struct Step<X, Y> {
    x: X,
    fx: Y,
    gx: Y,
}

fn contraction_bound<Y>(
    metric: &dyn Metric<Y>,
    gauges: &[GaugeFunction; 5],
    a: &Step<impl Sized, Y>,
    b: &Step<impl Sized, Y>,
) -> Result<(f64, f64)> {
    let lhs = metric.distance(&a.fx, &b.fx)?;
    let args = [
        metric.distance(&a.gx, &b.gx)?,
        metric.distance(&a.gx, &a.fx)?,
        metric.distance(&b.gx, &b.fx)?,
        metric.distance(&a.gx, &b.fx)?,
        metric.distance(&a.fx, &b.gx)?,
    ];
    let mut rhs = f64::NEG_INFINITY;
    for (g, t) in gauges.iter().zip(args) {
        rhs = rhs.max(g.eval(t.max(0.0))?);
    }
    Ok((lhs, rhs))
}

fn violates(lhs: f64, rhs: f64) -> bool {
    lhs > rhs + CONTRACTION_TOL * lhs.abs().max(rhs.abs())
}

/// Runs the iteration. Status `NonConvergence` is a flag on the report;
/// preimage failures are errors.
pub fn jungck_solve<X: Clone, Y: Clone>(p: &JungckProblem<'_, X, Y>) -> Result<SolveReport<X, Y>> {
    solve_observed(p, &mut |_| Ok(()))
}

/// As [`jungck_solve`], calling `observer` on every checked pair.
pub fn solve_observed<X: Clone, Y: Clone>(
    p: &JungckProblem<'_, X, Y>,
    observer: &mut dyn FnMut(&PairView<'_, X, Y>) -> Result<()>,
) -> Result<SolveReport<X, Y>> {
    let tol = p.tolerances.tol_conv;
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::Domain(format!("tol_conv = {tol} must be positive")));
    }
    let grid = gauges::default_grid();
    for (i, g) in p.gauges.iter().enumerate() {
        let v = gauges::validate_gauge(g, &grid)?;
        if !v.consistent() {
            let failed: Vec<_> = v.report.failures().map(|c| c.name.clone()).collect();
            return Err(Error::Domain(format!(
                "gauge φ{} fails {}",
                i + 1,
                failed.join(", ")
            )));
        }
    }
    let metric = p.metric.as_ref();
    let maps = &p.maps;
    let step = |x: X| -> Step<X, Y> {
        Step {
            fx: (maps.f)(&x),
            gx: (maps.g)(&x),
            x,
        }
    };

    let first = step(p.x0.clone());
    let d0 = metric.distance(&first.fx, &first.gx)?;
    let r0 = compute_r0(&majorant(&p.gauges)?, d0)?;
    let mut notes = vec!["window check uses the pointwise majorant; the proof-level monotone majorant is nonconstructive".to_string()];

    let mut orbit = vec![first.fx.clone()];
    let mut gaps = Vec::new();
    let mut violations = Vec::new();
    let mut violation_count = 0;
    let mut status = Status::NonConvergence;
    let mut iterations = 0;
    let mut prev: Option<Step<X, Y>> = None;
    let mut cur = first;

    if d0 < tol {
        status = Status::Converged;
        notes.push("x0 is already a coincidence argument".into());
    } else {
        let f0 = cur.fx.clone();
        for n in 0..p.tolerances.max_iter {
            let x_next = (maps.g_preimage)(&cur.fx).ok_or_else(|| {
                Error::RangeInclusion(format!("no g-preimage of f(x_{n}); f(X) ⊆ g(X) fails"))
            })?;
            let next = step(x_next);
            let gap = metric.distance(&cur.fx, &next.fx)?;
            if !gap.is_finite() {
                notes.push(format!("orbit left the finite range at step {n}"));
                break;
            }
            let mismatch = metric.distance(&next.gx, &cur.fx)?;
            let scale = 1.0 + metric.distance(&cur.fx, &f0)?;
            if mismatch > PREIMAGE_TOL * scale {
                return Err(Error::RangeInclusion(format!(
                    "preimage selector is inexact at step {n}: d(g(x_{{n+1}}), f(x_n)) = {mismatch:e}"
                )));
            }
            gaps.push(gap);

            // lag 2 catches maps whose consecutive pairs sit exactly on the bound
            let mut pairs = vec![(n, 1, &cur)];
            if let Some(before) = &prev {
                pairs.push((n - 1, 2, before));
            }
            for (start, lag, a) in pairs {
                let (lhs, rhs) = contraction_bound(metric, &p.gauges, a, &next)?;
                let bad = violates(lhs, rhs);
                if bad {
                    violation_count += 1;
                    if violations.len() < MAX_RECORDED_VIOLATIONS {
                        violations.push(Violation {
                            n: start,
                            lag,
                            lhs,
                            rhs,
                        });
                    }
                }
                observer(&PairView {
                    n: start,
                    lag,
                    x: &a.x,
                    y: &next.x,
                    fx: &a.fx,
                    fy: &next.fx,
                    gx: &a.gx,
                    gy: &next.gx,
                    scalar_violation: bad,
                })?;
            }

            if orbit.len() < ORBIT_RETENTION {
                orbit.push(next.fx.clone());
            }
            prev = Some(std::mem::replace(&mut cur, next));
            iterations = n + 1;
            if gap < tol {
                status = Status::Converged;
                break;
            }
        }
    }

    let limit = cur.fx.clone();
    let z = (maps.g_preimage)(&limit)
        .ok_or_else(|| Error::RangeInclusion("no g-preimage of the limit".into()))?;
    let coincidence_residual = metric.distance(&(maps.f)(&z), &(maps.g)(&z))?;
    let (mut fixed_point_residual, mut commutation_residual) = (None, None);
    if let Some(embed) = &maps.embed {
        let gz = embed(&(maps.g)(&z));
        let fz = embed(&(maps.f)(&z));
        commutation_residual = Some(metric.distance(&(maps.f)(&gz), &(maps.g)(&fz))?);
        if p.weakly_compatible {
            let zy = embed(&limit);
            fixed_point_residual = Some(metric.distance(&limit, &(maps.f)(&zy))?);
        }
    }
    if orbit.len() == ORBIT_RETENTION {
        notes.push(format!(
            "orbit diagnostics use the first {ORBIT_RETENTION} points"
        ));
    }
    let observed_orbit_diameter = diameter(metric, &orbit)?;
    let window_violations = window_check(metric, &majorant(&p.gauges)?, &orbit)?;

    Ok(SolveReport {
        status,
        iterations,
        trajectory_gaps: gaps,
        limit,
        coincidence_argument: z,
        coincidence_residual,
        d0,
        r0_bound: r0,
        observed_orbit_diameter,
        contraction_violations: violations,
        contraction_violation_count: violation_count,
        window_violations,
        fixed_point_residual,
        commutation_residual,
        tvs_violations: Vec::new(),
        tvs_violation_count: 0,
        check_disagreements: Vec::new(),
        notes,
        orbit,
    })
}

fn diameter<Y>(metric: &dyn Metric<Y>, points: &[Y]) -> Result<f64> {
    let mut d: f64 = 0.0;
    for (i, a) in points.iter().enumerate() {
        for b in &points[i + 1..] {
            d = d.max(metric.distance(a, b)?);
        }
    }
    Ok(d)
}

/// Table `δ(O_n(x_k))` for `n ≤ max_n`: row `k`, column `n`.
pub fn window_diameters<Y>(
    metric: &dyn Metric<Y>,
    orbit: &[Y],
    max_n: usize,
) -> Result<Vec<Vec<f64>>> {
    let mut table = Vec::with_capacity(orbit.len());
    for k in 0..orbit.len() {
        let mut row = vec![0.0];
        for n in 1..=max_n {
            if k + n >= orbit.len() {
                break;
            }
            let mut d: f64 = row[n - 1];
            for j in k..k + n {
                d = d.max(metric.distance(&orbit[j], &orbit[k + n])?);
            }
            row.push(d);
        }
        table.push(row);
    }
    Ok(table)
}

fn window_check<Y>(metric: &dyn Metric<Y>, phi: &GaugeFunction, orbit: &[Y]) -> Result<usize> {
    let table = window_diameters(metric, orbit, WINDOW_CHECK_LEN + 1)?;
    let mut bad = 0;
    for k in 1..table.len() {
        for n in 1..=WINDOW_CHECK_LEN {
            if let (Some(&inner), Some(&outer)) = (table[k].get(n), table[k - 1].get(n + 1)) {
                if inner > phi.eval(outer)? + WINDOW_CHECK_TOL {
                    bad += 1;
                }
            }
        }
    }
    Ok(bad)
}

/// Largest pairwise distance among the first `window` retained orbit points.
pub fn orbit_diameter<X, Y>(
    report: &SolveReport<X, Y>,
    metric: &dyn Metric<Y>,
    window: usize,
) -> Result<f64> {
    if window == 0 || window > report.orbit.len() {
        return Err(Error::Domain(format!(
            "window {window} outside the retained orbit of {} points",
            report.orbit.len()
        )));
    }
    diameter(metric, &report.orbit[..window])
}

/// `d(f z, g z) ≤ tol`.
pub fn verify_point_of_coincidence<X, Y>(p: &JungckProblem<'_, X, Y>, z: &X, tol: f64) -> bool {
    let (fz, gz) = ((p.maps.f)(z), (p.maps.g)(z));
    matches!(p.metric.distance(&fz, &gz), Ok(d) if d <= tol)
}

/// Cone-valued problem: reduces `ψ_k` to `φ_k(t) = ‖ψ_k(t·e)‖_e`, solves in
/// the induced metric, and checks `d(fx,fy) ≤ ψ_k(·)` for some `k` directly.
pub fn tvs_jungck_solve<'a, X: Clone, M: ConeMetric>(
    space: &'a M,
    maps: Maps<'a, X, M::Point>,
    cone_gauges: &[ConeGauge; 5],
    e: &Vector,
    x0: X,
    tolerances: Tolerances,
) -> Result<SolveReport<X, M::Point>>
where
    M::Point: Clone,
{
    let cone = space.cone();
    let phis: Vec<GaugeFunction> = cone_gauges
        .iter()
        .map(|psi| gauge_from_cone_map(cone, e, psi))
        .collect::<Result<_>>()?;
    let gauges: [GaugeFunction; 5] = phis.try_into().expect("five gauges");
    let problem =
        JungckProblem::new(induced_metric(space, e)?, maps, gauges, x0).with_tolerances(tolerances);

    let mut tvs = Vec::new();
    let mut tvs_count = 0;
    let mut disagreements = Vec::new();
    let mut observer = |v: &PairView<'_, X, M::Point>| -> Result<()> {
        let lhs = space.distance(v.fx, v.fy)?;
        let args = [
            space.distance(v.gx, v.gy)?,
            space.distance(v.gx, v.fx)?,
            space.distance(v.gy, v.fy)?,
            space.distance(v.gx, v.fy)?,
            space.distance(v.fx, v.gy)?,
        ];
        let mut dominated = false;
        for (psi, d) in cone_gauges.iter().zip(&args) {
            if cone.leq(&lhs, &psi.apply(d)?)? {
                dominated = true;
                break;
            }
        }
        if !dominated {
            tvs_count += 1;
            if tvs.len() < MAX_RECORDED_VIOLATIONS {
                tvs.push(Violation {
                    n: v.n,
                    lag: v.lag,
                    lhs: lhs.norm_inf(),
                    rhs: f64::NAN,
                });
            }
        }
        if dominated == v.scalar_violation && disagreements.len() < MAX_RECORDED_VIOLATIONS {
            disagreements.push((v.n, v.lag));
        }
        Ok(())
    };
    let mut report = solve_observed(&problem, &mut observer)?;
    report.tvs_violations = tvs;
    report.tvs_violation_count = tvs_count;
    report.check_disagreements = disagreements;
    Ok(report)
}
