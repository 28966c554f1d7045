//! Cone-valued metrics and the real metrics they induce.
//!
//! A cone metric `d: X × X → P` satisfies `d(x, y) = 0 ⇔ x = y`, symmetry, and
//! the triangle inequality in the cone order. For every `e ∈ int P` the map
//! `d_e = ξ_e ∘ d` is an ordinary metric, and all of them are equivalent with
//! the constants from [`equivalence_constants`]. Convergence and Cauchy-ness
//! in `d` are the same as in any `d_e`, which [`sequence_analysis`] checks on
//! finite prefixes.
//!
//! Completeness is inherited from the real metric and is not tested here.
//! Continuity-type statements are not covered.

use std::fmt;
use std::marker::PhantomData;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::cones::SolidCone;
use crate::error::{Error, Result};
use crate::report::ValidationReport;
use crate::sampling::SampleRng;
use crate::scalarization::{equivalence_constants, Scalarizer};
use crate::vector::Vector;

/// Tolerance for the axiom checks of [`validate_cone_metric`].
pub const AXIOM_TOL: f64 = 1e-9;

/// Slack on `ξ_e(A) ≤ ξ_e(B)` in the scalarized order checks.
pub const SCALAR_ORDER_TOL: f64 = 1e-9;

/// Default number of interior directions sampled for order checks.
pub const DEFAULT_E_SAMPLES: usize = 16;

/// A real-valued distance.
pub trait Metric<P: ?Sized> {
    fn distance(&self, a: &P, b: &P) -> Result<f64>;
}

impl<P: ?Sized, M: Metric<P> + ?Sized> Metric<P> for &M {
    fn distance(&self, a: &P, b: &P) -> Result<f64> {
        (**self).distance(a, b)
    }
}

/// `|a − b|` on ℝ.
#[derive(Debug, Clone, Copy, Default)]
pub struct AbsMetric;

impl Metric<f64> for AbsMetric {
    fn distance(&self, a: &f64, b: &f64) -> Result<f64> {
        Ok((a - b).abs())
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct EuclideanMetric;

impl Metric<Vector> for EuclideanMetric {
    fn distance(&self, a: &Vector, b: &Vector) -> Result<f64> {
        a.check_dim(b.dim())?;
        Ok((a - b).norm2())
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct SupMetric;

impl Metric<Vector> for SupMetric {
    fn distance(&self, a: &Vector, b: &Vector) -> Result<f64> {
        a.check_dim(b.dim())?;
        Ok(a.dist_inf(b))
    }
}

/// Wraps a closure `Fn(&P, &P) -> f64` as a [`Metric`].
pub struct FnMetric<F>(pub F);

impl<P, F: Fn(&P, &P) -> f64> Metric<P> for FnMetric<F> {
    fn distance(&self, a: &P, b: &P) -> Result<f64> {
        Ok((self.0)(a, b))
    }
}

/// A distance with values in a solid cone.
pub trait ConeMetric {
    type Point;

    fn cone(&self) -> &SolidCone;

    fn distance(&self, x: &Self::Point, y: &Self::Point) -> Result<Vector>;
}

impl<M: ConeMetric + ?Sized> ConeMetric for &M {
    type Point = M::Point;

    fn cone(&self) -> &SolidCone {
        (**self).cone()
    }

    fn distance(&self, x: &Self::Point, y: &Self::Point) -> Result<Vector> {
        (**self).distance(x, y)
    }
}

type DistanceFn<P> = Box<dyn Fn(&P, &P) -> Vector + Send + Sync>;

/// A cone metric given by a caller-supplied distance oracle.
pub struct ConeMetricSpace<P> {
    cone: SolidCone,
    d: DistanceFn<P>,
    _point: PhantomData<fn(&P)>,
}

impl<P> fmt::Debug for ConeMetricSpace<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ConeMetricSpace")
            .field("cone", &self.cone)
            .finish_non_exhaustive()
    }
}

impl<P> ConeMetricSpace<P> {
    pub fn new(cone: SolidCone, d: impl Fn(&P, &P) -> Vector + Send + Sync + 'static) -> Self {
        ConeMetricSpace {
            cone,
            d: Box::new(d),
            _point: PhantomData,
        }
    }
}

impl<P: PartialEq + 'static> ConeMetricSpace<P> {
    /// `d(x, y) = w` for `x ≠ y`, `0` otherwise.
    pub fn discrete(cone: SolidCone, w: Vector) -> Result<Self> {
        w.check_dim(cone.dim())?;
        if !cone.contains(&w)? || w.is_zero() {
            return Err(Error::Domain(format!(
                "discrete distance {w} must be a nonzero member of the cone"
            )));
        }
        let zero = Vector::zeros(cone.dim());
        Ok(Self::new(cone, move |x, y| {
            if x == y {
                zero.clone()
            } else {
                w.clone()
            }
        }))
    }
}

impl ConeMetricSpace<Vector> {
    /// `d(x, y) = (|x_1 − y_1|, …, |x_m − y_m|)`; a cone metric for the orthant.
    pub fn coordinatewise_abs(cone: SolidCone) -> Self {
        Self::new(cone, |x, y| {
            Vector::new(x.iter().zip(y.iter()).map(|(a, b)| (a - b).abs()).collect())
                .expect("finite")
        })
    }

    /// `d(x, y) = ‖x − y‖₂ · w` for a fixed nonzero `w ∈ P`; a cone metric for
    /// any cone. Points may have any dimension.
    pub fn scaled_norm(cone: SolidCone, w: Vector) -> Result<Self> {
        w.check_dim(cone.dim())?;
        if !cone.contains(&w)? || w.is_zero() {
            return Err(Error::Domain(format!(
                "direction {w} must be a nonzero member of the cone"
            )));
        }
        Ok(Self::new(cone, move |x, y| w.scale((x - y).norm2())))
    }
}

impl<P> ConeMetric for ConeMetricSpace<P> {
    type Point = P;

    fn cone(&self) -> &SolidCone {
        &self.cone
    }

    fn distance(&self, x: &P, y: &P) -> Result<Vector> {
        let d = (self.d)(x, y);
        d.check_dim(self.cone.dim())?;
        Ok(d)
    }
}

/// A cone metric on the points `0..n`, stored as an `n × n` matrix of vectors.
///
/// JSON form: `{"cone": …, "n_points": n, "d": [[[…], …], …]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FiniteSpec", into = "FiniteSpec")]
pub struct FiniteConeMetric {
    cone: SolidCone,
    d: Vec<Vec<Vector>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FiniteSpec {
    cone: SolidCone,
    n_points: usize,
    d: Vec<Vec<Vector>>,
}

impl TryFrom<FiniteSpec> for FiniteConeMetric {
    type Error = Error;

    fn try_from(spec: FiniteSpec) -> Result<Self> {
        if spec.d.len() != spec.n_points {
            return Err(Error::dim(spec.n_points, spec.d.len()));
        }
        FiniteConeMetric::new(spec.cone, spec.d)
    }
}

impl From<FiniteConeMetric> for FiniteSpec {
    fn from(m: FiniteConeMetric) -> Self {
        FiniteSpec {
            n_points: m.d.len(),
            cone: m.cone,
            d: m.d,
        }
    }
}

impl FiniteConeMetric {
    /// Checks shape only; axioms are checked by [`validate_cone_metric`].
    pub fn new(cone: SolidCone, d: Vec<Vec<Vector>>) -> Result<Self> {
        let n = d.len();
        for row in &d {
            if row.len() != n {
                return Err(Error::dim(n, row.len()));
            }
            for v in row {
                v.check_dim(cone.dim())?;
            }
        }
        Ok(FiniteConeMetric { cone, d })
    }

    pub fn len(&self) -> usize {
        self.d.len()
    }

    pub fn is_empty(&self) -> bool {
        self.d.is_empty()
    }

    pub fn points(&self) -> Vec<usize> {
        (0..self.len()).collect()
    }

    /// The full matrix of `d_e`.
    pub fn induced_matrix(&self, e: &Vector) -> Result<Vec<Vec<f64>>> {
        let xi = Scalarizer::new(&self.cone, e)?;
        self.d
            .iter()
            .map(|row| row.iter().map(|v| xi.value(v)).collect())
            .collect()
    }
}

impl ConeMetric for FiniteConeMetric {
    type Point = usize;

    fn cone(&self) -> &SolidCone {
        &self.cone
    }

    fn distance(&self, x: &usize, y: &usize) -> Result<Vector> {
        let n = self.len();
        if *x >= n || *y >= n {
            return Err(Error::Domain(format!("point index out of range 0..{n}")));
        }
        Ok(self.d[*x][*y].clone())
    }
}

/// `d_e = ξ_e ∘ d`.
pub struct InducedMetric<'a, M: ConeMetric> {
    base: &'a M,
    xi: Scalarizer<'a>,
}

impl<M: ConeMetric> fmt::Debug for InducedMetric<'_, M> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("InducedMetric")
            .field("e", self.xi.e())
            .finish_non_exhaustive()
    }
}

impl<'a, M: ConeMetric> InducedMetric<'a, M> {
    pub fn e(&self) -> &Vector {
        self.xi.e()
    }

    pub fn base(&self) -> &'a M {
        self.base
    }

    pub fn scalarizer(&self) -> &Scalarizer<'a> {
        &self.xi
    }
}

impl<M: ConeMetric> Metric<M::Point> for InducedMetric<'_, M> {
    fn distance(&self, x: &M::Point, y: &M::Point) -> Result<f64> {
        self.xi.value(&self.base.distance(x, y)?)
    }
}

pub fn induced_metric<'a, M: ConeMetric>(space: &'a M, e: &Vector) -> Result<InducedMetric<'a, M>> {
    Ok(InducedMetric {
        base: space,
        xi: Scalarizer::new(space.cone(), e)?,
    })
}

/// Samples `sample_triples` index triples from `points` and checks the cone
/// metric axioms, listing offending index tuples.
pub fn validate_cone_metric<M>(
    space: &M,
    points: &[M::Point],
    sample_triples: usize,
    rng: &mut SampleRng,
) -> ValidationReport
where
    M: ConeMetric,
    M::Point: PartialEq,
{
    const SHOWN: usize = 8;
    let cone = space.cone();
    let mut report = ValidationReport::new();
    if points.is_empty() {
        report.push("points", false, "no points to sample");
        return report;
    }

    let mut outside = Vec::new();
    let mut identity = Vec::new();
    let mut separation = Vec::new();
    let mut symmetry = Vec::new();
    let mut triangle = Vec::new();
    let mut errors = Vec::new();

    let n = points.len();
    for _ in 0..sample_triples {
        let (i, j, k) = (
            rng.random_range(0..n),
            rng.random_range(0..n),
            rng.random_range(0..n),
        );
        let (x, y, z) = (&points[i], &points[j], &points[k]);
        let eval = || -> Result<[Vector; 5]> {
            Ok([
                space.distance(x, x)?,
                space.distance(x, y)?,
                space.distance(y, x)?,
                space.distance(y, z)?,
                space.distance(x, z)?,
            ])
        };
        let [dxx, dxy, dyx, dyz, dxz] = match eval() {
            Ok(v) => v,
            Err(err) => {
                errors.push(format!("({i},{j},{k}): {err}"));
                continue;
            }
        };
        let scale = dxy.norm_inf().max(1.0);
        if !cone.contains(&dxy).unwrap_or(false) {
            outside.push((i, j));
        }
        if dxx.norm_inf() > AXIOM_TOL {
            identity.push((i, i));
        }
        if x != y && dxy.norm_inf() <= AXIOM_TOL {
            separation.push((i, j));
        }
        if dxy.dist_inf(&dyx) > AXIOM_TOL * scale {
            symmetry.push((i, j));
        }
        if !cone.leq(&dxz, &(&dxy + &dyz)).unwrap_or(false) {
            triangle.push((i, j, k));
        }
    }

    fn detail<T: fmt::Debug>(items: &[T], what: &str) -> String {
        if items.is_empty() {
            format!("no {what}")
        } else {
            let shown: Vec<String> = items.iter().take(SHOWN).map(|t| format!("{t:?}")).collect();
            format!("{} {what}, e.g. {}", items.len(), shown.join(" "))
        }
    }

    report.push(
        "values_in_cone",
        outside.is_empty(),
        detail(&outside, "pairs with d(x,y) outside P"),
    );
    report.push(
        "identity",
        identity.is_empty(),
        detail(&identity, "points with d(x,x) ≠ 0"),
    );
    report.push(
        "separation",
        separation.is_empty(),
        detail(&separation, "distinct pairs with d(x,y) = 0"),
    );
    report.push(
        "symmetry",
        symmetry.is_empty(),
        detail(&symmetry, "pairs with d(x,y) ≠ d(y,x)"),
    );
    report.push(
        "triangle",
        triangle.is_empty(),
        detail(&triangle, "triples with d(x,z) ≰ d(x,y) + d(y,z)"),
    );
    if !errors.is_empty() {
        report.push("evaluation", false, errors.join("; "));
    }
    report
}

/// Tail indices of a finite sequence under one `d_e`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TailReport {
    pub e: Vector,
    /// Smallest `N` with `d_e(x_m, x_n) < eps` for all retained `m, n ≥ N`.
    pub cauchy_tail: Option<usize>,
    /// Smallest `N` with `d_e(x_n, x) < eps` for all retained `n ≥ N`.
    pub limit_tail: Option<usize>,
    /// Whether the tails are within the window predicted by the equivalence
    /// constants relative to the first `e`.
    pub consistent: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SequenceReport {
    pub eps: f64,
    pub tails: Vec<TailReport>,
    pub consistent: bool,
}

struct TailProfile {
    /// Suffix diameters: `max_{m,n ≥ N} d_e(x_m, x_n)`.
    cauchy: Vec<f64>,
    /// Suffix maxima of `d_e(x_n, x)`.
    limit: Option<Vec<f64>>,
}

impl TailProfile {
    fn tail(profile: &[f64], eps: f64) -> Option<usize> {
        // profile is nonincreasing; find the first index below eps.
        let idx = profile.partition_point(|&v| v >= eps);
        (idx < profile.len()).then_some(idx)
    }
}

fn tail_profile<M: ConeMetric>(
    metric: &InducedMetric<'_, M>,
    seq: &[M::Point],
    limit: Option<&M::Point>,
) -> Result<TailProfile> {
    let n = seq.len();
    let mut cauchy = vec![0.0; n];
    for i in (0..n).rev() {
        let mut row = 0.0f64;
        for j in i + 1..n {
            row = row.max(metric.distance(&seq[i], &seq[j])?);
        }
        cauchy[i] = if i + 1 < n {
            row.max(cauchy[i + 1])
        } else {
            0.0
        };
    }
    let limit = match limit {
        Some(x) => {
            let mut suffix = vec![0.0; n];
            let mut acc = f64::NEG_INFINITY;
            for i in (0..n).rev() {
                acc = acc.max(metric.distance(&seq[i], x)?);
                suffix[i] = acc;
            }
            Some(suffix)
        }
        None => None,
    };
    Ok(TailProfile { cauchy, limit })
}

/// `None` counts as infinitely late.
fn ordered(a: Option<usize>, b: Option<usize>) -> bool {
    match (a, b) {
        (_, None) => true,
        (None, Some(_)) => false,
        (Some(a), Some(b)) => a <= b,
    }
}

/// Reports Cauchy and limit tail indices under each `d_e`, and whether they
/// agree up to the shift allowed by the equivalence constants.
pub fn sequence_analysis<M: ConeMetric>(
    space: &M,
    seq: &[M::Point],
    e_samples: &[Vector],
    eps: f64,
    limit: Option<&M::Point>,
) -> Result<SequenceReport> {
    if seq.len() < 2 {
        return Err(Error::Domain(
            "sequence analysis needs at least two points".into(),
        ));
    }
    if e_samples.is_empty() {
        return Err(Error::Domain(
            "at least one interior direction is required".into(),
        ));
    }
    if eps.is_nan() || eps <= 0.0 {
        return Err(Error::Domain(format!("eps = {eps} must be positive")));
    }
    let cone = space.cone();
    let profiles: Vec<TailProfile> = e_samples
        .iter()
        .map(|e| tail_profile(&induced_metric(space, e)?, seq, limit))
        .collect::<Result<_>>()?;

    let reference = &profiles[0];
    let widen = 1.0 + 1e-9;
    let mut tails = Vec::with_capacity(e_samples.len());
    for (e, prof) in e_samples.iter().zip(&profiles) {
        let c = equivalence_constants(cone, &e_samples[0], e)?;
        // lower·d_ref ≤ d_e ≤ upper·d_ref, so
        // tail_ref(eps/lower) ≤ tail_e(eps) ≤ tail_ref(eps/upper).
        let window_ok = |r: &[f64], p: &[f64]| {
            let t = TailProfile::tail(p, eps);
            ordered(TailProfile::tail(r, eps / c.lower * widen), t)
                && ordered(t, TailProfile::tail(r, eps / c.upper / widen))
        };
        let mut consistent = window_ok(&reference.cauchy, &prof.cauchy);
        if let (Some(r), Some(p)) = (&reference.limit, &prof.limit) {
            consistent &= window_ok(r, p);
        }
        tails.push(TailReport {
            e: e.clone(),
            cauchy_tail: TailProfile::tail(&prof.cauchy, eps),
            limit_tail: prof
                .limit
                .as_deref()
                .and_then(|p| TailProfile::tail(p, eps)),
            consistent,
        });
    }
    let consistent = tails.iter().all(|t| t.consistent);
    Ok(SequenceReport {
        eps,
        tails,
        consistent,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct OrderCheck {
    pub leq_membership: bool,
    pub leq_scalarized: bool,
    /// Scalarized order holds on every sampled `e` but membership fails:
    /// more directions are needed to separate `x` and `y`.
    pub insufficient_sampling: bool,
}

/// Compares `x ≤_P y` with `ξ_e(x) ≤ ξ_e(y)` over the sampled `e`.
/// Both `x` and `y` must lie in `P`.
pub fn order_check(
    cone: &SolidCone,
    x: &Vector,
    y: &Vector,
    e_samples: &[Vector],
) -> Result<OrderCheck> {
    for (name, v) in [("x", x), ("y", y)] {
        v.check_dim(cone.dim())?;
        if !cone.contains(v)? {
            return Err(Error::Domain(format!("{name} = {v} is not in the cone")));
        }
    }
    let leq_membership = cone.leq(x, y)?;
    let mut leq_scalarized = true;
    for e in e_samples {
        let xi = Scalarizer::new(cone, e)?;
        if xi.value(x)? > xi.value(y)? + SCALAR_ORDER_TOL {
            leq_scalarized = false;
            break;
        }
    }
    Ok(OrderCheck {
        leq_membership,
        leq_scalarized,
        insufficient_sampling: !leq_membership && leq_scalarized,
    })
}

/// `(d_{e1}(x,y), d_{e2}(x,y), d_{e1+e2}(x,y))`, printed side by side as a
/// diagnostic; no relation between them is asserted.
pub fn sum_direction_diagnostic<M: ConeMetric>(
    space: &M,
    x: &M::Point,
    y: &M::Point,
    e1: &Vector,
    e2: &Vector,
) -> Result<[f64; 3]> {
    let sum = e1 + e2;
    Ok([
        induced_metric(space, e1)?.distance(x, y)?,
        induced_metric(space, e2)?.distance(x, y)?,
        induced_metric(space, &sum)?.distance(x, y)?,
    ])
}

/// A point expression in a contraction template.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Var {
    X,
    Y,
    Fx,
    Fy,
    Gx,
    Gy,
}

impl Var {
    fn parse(s: &str) -> Option<Var> {
        Some(match s {
            "x" => Var::X,
            "y" => Var::Y,
            "fx" => Var::Fx,
            "fy" => Var::Fy,
            "gx" => Var::Gx,
            "gy" => Var::Gy,
            _ => return None,
        })
    }

    fn name(self) -> &'static str {
        match self {
            Var::X => "x",
            Var::Y => "y",
            Var::Fx => "fx",
            Var::Fy => "fy",
            Var::Gx => "gx",
            Var::Gy => "gy",
        }
    }
}

/// `coef · d(a, b)` with `coef ≥ 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DTerm {
    pub coef: f64,
    pub a: Var,
    pub b: Var,
}

/// An inequality `Σ c_i d(a_i, b_i) ≤ Σ c_j d(a_j, b_j)` between nonnegative
/// combinations of distance terms. An empty side is the zero vector.
///
/// Parsed from text such as `d(fx,fy) <= 0.5*d(x,y) + 0.25*d(x,fx)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Template {
    pub lhs: Vec<DTerm>,
    pub rhs: Vec<DTerm>,
}

impl fmt::Display for Template {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn side(f: &mut fmt::Formatter<'_>, terms: &[DTerm]) -> fmt::Result {
            if terms.is_empty() {
                return write!(f, "0");
            }
            for (i, t) in terms.iter().enumerate() {
                if i > 0 {
                    write!(f, " + ")?;
                }
                write!(f, "{}*d({},{})", t.coef, t.a.name(), t.b.name())?;
            }
            Ok(())
        }
        side(f, &self.lhs)?;
        write!(f, " <= ")?;
        side(f, &self.rhs)
    }
}

impl FromStr for Template {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let compact = compact.replace('≤', "<=");
        let mut parts = compact.split("<=");
        let (lhs, rhs) = match (parts.next(), parts.next(), parts.next()) {
            (Some(l), Some(r), None) => (l, r),
            _ => {
                return Err(Error::Template(format!(
                    "expected exactly one `<=` in {s:?}"
                )))
            }
        };
        Ok(Template {
            lhs: parse_side(lhs)?,
            rhs: parse_side(rhs)?,
        })
    }
}

fn parse_side(side: &str) -> Result<Vec<DTerm>> {
    if side == "0" {
        return Ok(Vec::new());
    }
    if side.is_empty() {
        return Err(Error::Template("empty side".into()));
    }
    side.split('+').map(parse_term).collect()
}

fn parse_term(term: &str) -> Result<DTerm> {
    let bad = || Error::Template(format!("cannot parse term {term:?}"));
    let start = term.find("d(").ok_or_else(bad)?;
    let coef = match &term[..start] {
        "" => 1.0,
        c => {
            let c = c.strip_suffix('*').unwrap_or(c);
            let v: f64 = c.parse().map_err(|_| bad())?;
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::Template(format!(
                    "coefficient {c} must be finite and nonnegative"
                )));
            }
            v
        }
    };
    let inner = term[start + 2..].strip_suffix(')').ok_or_else(bad)?;
    let (a, b) = inner.split_once(',').ok_or_else(bad)?;
    Ok(DTerm {
        coef,
        a: Var::parse(a).ok_or_else(bad)?,
        b: Var::parse(b).ok_or_else(bad)?,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TranslationReport {
    pub template: String,
    pub pairs: usize,
    /// Pairs where `A ≤_P B` fails.
    pub tvs_violations: usize,
    /// Pairs where `ξ_e(A) ≤ ξ_e(B)` fails for at least one sampled `e`.
    pub scalar_violations: usize,
    /// Violation counts per sampled `e`.
    pub per_e_violations: Vec<usize>,
    /// `A ≤_P B` holds but some `ξ_e(A) > ξ_e(B)`. Always zero for a correct
    /// scalarization.
    pub forward_violations: usize,
    /// `A ≤_P B` fails while every sampled `e` accepts; more directions needed.
    pub reverse_gaps: usize,
}

/// Evaluates a template on sampled point pairs both in the cone order and
/// through `ξ_e` for each sampled `e`.
#[allow(clippy::too_many_arguments)]
pub fn check_condition_translation<M, F, G>(
    space: &M,
    f: F,
    g: G,
    template: &Template,
    points: &[M::Point],
    sample_pairs: usize,
    e_samples: &[Vector],
    rng: &mut SampleRng,
) -> Result<TranslationReport>
where
    M: ConeMetric,
    F: Fn(&M::Point) -> M::Point,
    G: Fn(&M::Point) -> M::Point,
{
    if points.len() < 2 {
        return Err(Error::Domain(
            "need at least two points to sample pairs".into(),
        ));
    }
    let cone = space.cone();
    let xis: Vec<Scalarizer<'_>> = e_samples
        .iter()
        .map(|e| Scalarizer::new(cone, e))
        .collect::<Result<_>>()?;

    let side = |terms: &[DTerm], vals: &[&M::Point; 6]| -> Result<Vector> {
        let mut acc = Vector::zeros(cone.dim());
        for t in terms {
            let d = space.distance(vals[t.a as usize], vals[t.b as usize])?;
            acc = acc.axpy(t.coef, &d);
        }
        Ok(acc)
    };

    let mut report = TranslationReport {
        template: template.to_string(),
        pairs: 0,
        tvs_violations: 0,
        scalar_violations: 0,
        per_e_violations: vec![0; xis.len()],
        forward_violations: 0,
        reverse_gaps: 0,
    };
    let n = points.len();
    for _ in 0..sample_pairs {
        let i = rng.random_range(0..n);
        let mut j = rng.random_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let (x, y) = (&points[i], &points[j]);
        let (fx, fy, gx, gy) = (f(x), f(y), g(x), g(y));
        let vals = [x, y, &fx, &fy, &gx, &gy];
        let a = side(&template.lhs, &vals)?;
        let b = side(&template.rhs, &vals)?;

        let tvs = cone.leq(&a, &b)?;
        let mut all_scalar = true;
        for (k, xi) in xis.iter().enumerate() {
            if xi.value(&a)? > xi.value(&b)? + SCALAR_ORDER_TOL {
                report.per_e_violations[k] += 1;
                all_scalar = false;
            }
        }
        report.pairs += 1;
        if !tvs {
            report.tvs_violations += 1;
        }
        if !all_scalar {
            report.scalar_violations += 1;
        }
        if tvs && !all_scalar {
            report.forward_violations += 1;
        }
        if !tvs && all_scalar {
            report.reverse_gaps += 1;
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling;

    fn v<const N: usize>(a: [f64; N]) -> Vector {
        Vector::from(a)
    }

    fn plane_points(n: usize, seed: u64) -> Vec<Vector> {
        let mut r = sampling::rng(seed);
        (0..n).map(|_| sampling::vector(&mut r, 2, 5.0)).collect()
    }

    #[test]
    fn induced_metric_examples() {
        let space = ConeMetricSpace::coordinatewise_abs(SolidCone::orthant(2).unwrap());
        let de = induced_metric(&space, &v([1.0, 1.0])).unwrap();
        for (x, y) in [
            (v([0.0, 0.0]), v([1.0, -3.0])),
            (v([2.5, 1.0]), v([-1.0, 0.5])),
        ] {
            assert_eq!(de.distance(&x, &y).unwrap(), x.dist_inf(&y));
            assert_eq!(de.distance(&x, &x).unwrap(), 0.0);
        }
        let de2 = induced_metric(&space, &v([1.0, 2.0])).unwrap();
        assert_eq!(de2.distance(&v([0.0, 0.0]), &v([1.0, 1.0])).unwrap(), 1.0);
        assert!(matches!(
            induced_metric(&space, &v([0.0, 1.0])),
            Err(Error::NotInterior(_))
        ));
    }

    #[test]
    fn validate_examples() {
        let points = plane_points(20, 1);
        let mut r = sampling::rng(2);
        let good = ConeMetricSpace::coordinatewise_abs(SolidCone::orthant(2).unwrap());
        assert!(validate_cone_metric(&good, &points, 200, &mut r).passed());

        let signed =
            ConeMetricSpace::new(SolidCone::orthant(2).unwrap(), |x: &Vector, y: &Vector| {
                v([x[0] - y[0], 0.0])
            });
        let report = validate_cone_metric(&signed, &points, 200, &mut r);
        assert!(!report.is_passed("symmetry"));

        let discrete =
            ConeMetricSpace::discrete(SolidCone::orthant(2).unwrap(), v([1.0, 1.0])).unwrap();
        assert!(validate_cone_metric(&discrete, &points, 200, &mut r).passed());
    }

    #[test]
    fn finite_metric_json_and_matrix() {
        let json = r#"{"cone":{"kind":"orthant","dim":2},"n_points":2,
                       "d":[[[0,0],[1,2]],[[1,2],[0,0]]]}"#;
        let m: FiniteConeMetric = serde_json::from_str(json).unwrap();
        assert_eq!(
            m.induced_matrix(&v([1.0, 1.0])).unwrap(),
            vec![vec![0.0, 2.0], vec![2.0, 0.0]]
        );
        let mut r = sampling::rng(0);
        assert!(validate_cone_metric(&m, &m.points(), 50, &mut r).passed());
        let bad = r#"{"cone":{"kind":"orthant","dim":2},"n_points":3,"d":[[[0,0]]]}"#;
        assert!(serde_json::from_str::<FiniteConeMetric>(bad).is_err());
    }

    #[test]
    fn sequence_examples() {
        let space = ConeMetricSpace::coordinatewise_abs(SolidCone::orthant(2).unwrap());
        let seq: Vec<Vector> = (0..=30)
            .map(|n| v([2f64.powi(-n), 2f64.powi(-n)]))
            .collect();
        let zero = v([0.0, 0.0]);
        let report = sequence_analysis(
            &space,
            &seq,
            &[v([1.0, 1.0]), v([1.0, 2.0])],
            1e-3,
            Some(&zero),
        )
        .unwrap();
        assert_eq!(report.tails[0].limit_tail, Some(10));
        assert_eq!(report.tails[1].limit_tail, Some(10));
        assert!(report.consistent);

        let constant = vec![v([1.0, 2.0]); 5];
        let report = sequence_analysis(
            &space,
            &constant,
            &[v([1.0, 1.0])],
            1e-3,
            Some(&constant[0]),
        )
        .unwrap();
        assert_eq!(report.tails[0].cauchy_tail, Some(0));
        assert_eq!(report.tails[0].limit_tail, Some(0));

        assert!(sequence_analysis(&space, &seq[..1], &[v([1.0, 1.0])], 1e-3, None).is_err());
    }

    #[test]
    fn order_examples() {
        let o = SolidCone::orthant(2).unwrap();
        let mut r = sampling::rng(5);
        let es = sampling::interior_directions(&o, 16, &mut r);
        let c = order_check(&o, &v([1.0, 1.0]), &v([2.0, 3.0]), &es).unwrap();
        assert!(c.leq_membership && c.leq_scalarized);
        let c = order_check(&o, &v([1.0, 1.0]), &v([1.0, 1.0]), &es).unwrap();
        assert!(c.leq_membership && c.leq_scalarized);
        let es = [v([1.0, 1.0]), v([2.0, 1.0]), v([1.0, 2.0])];
        let c = order_check(&o, &v([1.0, 0.0]), &v([0.0, 1.0]), &es).unwrap();
        assert_eq!((c.leq_membership, c.leq_scalarized), (false, false));
        // Only e = (1,1): the tie hides the incomparability.
        let c = order_check(&o, &v([1.0, 0.0]), &v([0.0, 1.0]), &es[..1]).unwrap();
        assert!(c.insufficient_sampling);
        assert!(matches!(
            order_check(&o, &v([-1.0, 0.0]), &v([0.0, 1.0]), &es),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn template_parsing() {
        let t: Template = "d(fx,fy) <= 0.5*d(x,y) + d(gx, fx)".parse().unwrap();
        assert_eq!(
            t.lhs,
            vec![DTerm {
                coef: 1.0,
                a: Var::Fx,
                b: Var::Fy
            }]
        );
        assert_eq!(t.rhs.len(), 2);
        assert_eq!(t.rhs[0].coef, 0.5);
        assert_eq!(t.to_string().parse::<Template>().unwrap(), t);
        assert!("d(x,y) ≤ 0".parse::<Template>().unwrap().rhs.is_empty());
        for bad in [
            "d(x,y)",
            "d(x,z) <= d(x,y)",
            "-1*d(x,y) <= d(x,y)",
            "d(x,y) <= <= 0",
            "q(x,y) <= 0",
        ] {
            assert!(
                matches!(bad.parse::<Template>(), Err(Error::Template(_))),
                "{bad}"
            );
        }
    }

    #[test]
    fn translation_examples() {
        let space = ConeMetricSpace::coordinatewise_abs(SolidCone::orthant(2).unwrap());
        let points = plane_points(30, 9);
        let mut r = sampling::rng(10);
        let es = sampling::interior_directions(space.cone(), 16, &mut r);
        let id = |x: &Vector| x.clone();
        let half = |x: &Vector| x.scale(0.5);

        let t: Template = "d(fx,fy) <= 0.5*d(x,y)".parse().unwrap();
        let rep =
            check_condition_translation(&space, half, id, &t, &points, 200, &es, &mut r).unwrap();
        assert_eq!((rep.tvs_violations, rep.scalar_violations), (0, 0));

        let t: Template = "d(x,y) <= d(x,y)".parse().unwrap();
        let rep =
            check_condition_translation(&space, id, id, &t, &points, 200, &es, &mut r).unwrap();
        assert_eq!((rep.tvs_violations, rep.scalar_violations), (0, 0));

        let t: Template = "d(x,y) <= 0.5*d(x,y)".parse().unwrap();
        let rep =
            check_condition_translation(&space, id, id, &t, &points, 200, &es, &mut r).unwrap();
        assert_eq!(rep.tvs_violations, 200);
        assert_eq!(rep.scalar_violations, 200);
        assert_eq!(rep.forward_violations, 0);
    }

    #[test]
    fn sum_direction_diagnostic_runs() {
        let space = ConeMetricSpace::coordinatewise_abs(SolidCone::orthant(2).unwrap());
        let [a, b, c] = sum_direction_diagnostic(
            &space,
            &v([0.0, 0.0]),
            &v([1.0, 3.0]),
            &v([1.0, 1.0]),
            &v([1.0, 3.0]),
        )
        .unwrap();
        assert_eq!((a, b, c), (3.0, 1.0, 0.75));
    }
}
