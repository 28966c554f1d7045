//! Seeded property suites over every module.
//!
//! Each suite returns named checks with a failure count and the first
//! counterexample. Output depends only on the seed.

use serde::Serialize;

use crate::cone_metric::{
    induced_metric, order_check, sequence_analysis, validate_cone_metric, AbsMetric, ConeMetric,
    ConeMetricSpace, EuclideanMetric, Metric,
};
use crate::cones::SolidCone;
use crate::error::{Error, Result};
use crate::fixed_point::{jungck_solve, tvs_jungck_solve, JungckProblem, Maps, Status, Tolerances};
use crate::gauges::{
    self, compute_r0, gauge_from_cone_map, majorant, validate_gauge, ConeGauge, GaugeClass,
    GaugeFunction, GaugeKind,
};
use crate::report::ValidationReport;
use crate::sampling::{self, Family, SampleRng};
use crate::scalarization::{equivalence_constants, Scalarizer};
use crate::vector::Vector;

pub const SUITES: [&str; 5] = [
    "cones",
    "scalarization",
    "cone_metric",
    "gauges",
    "fixed_point",
];
/// Samples per cone family.
pub const SAMPLES: usize = 1000;
pub const TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub passed: bool,
    pub report: ValidationReport,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SelftestReport {
    pub seed: u64,
    pub passed: bool,
    pub suites: Vec<SuiteReport>,
}

/// Runs the named suites, or all of them for an empty list.
pub fn run(seed: u64, suites: &[String]) -> Result<SelftestReport> {
    let names: Vec<&str> = if suites.is_empty() {
        SUITES.to_vec()
    } else {
        suites.iter().map(String::as_str).collect()
    };
    let reports = names
        .iter()
        .map(|n| run_suite(n, seed))
        .collect::<Result<Vec<_>>>()?;
    Ok(SelftestReport {
        seed,
        passed: reports.iter().all(|r| r.passed),
        suites: reports,
    })
}

pub fn run_suite(name: &str, seed: u64) -> Result<SuiteReport> {
    let mut report = ValidationReport::new();
    match name {
        "cones" => cones_suite(seed, &mut report),
        "scalarization" => scalarization_suite(seed, &mut report),
        "cone_metric" => cone_metric_suite(seed, &mut report),
        "gauges" => gauges_suite(seed, &mut report),
        "fixed_point" => fixed_point_suite(seed, &mut report),
        _ => {
            return Err(Error::Domain(format!(
                "unknown suite {name:?}; expected one of {}",
                SUITES.join(", ")
            )))
        }
    }
    Ok(SuiteReport {
        suite: name.to_string(),
        passed: report.passed(),
        report,
    })
}

/// Failure counter for one named property.
struct Tally {
    name: String,
    trials: usize,
    failures: usize,
    first: Option<String>,
}

impl Tally {
    fn new(name: impl Into<String>) -> Self {
        Tally {
            name: name.into(),
            trials: 0,
            failures: 0,
            first: None,
        }
    }

    fn record(&mut self, ok: bool, context: impl FnOnce() -> String) {
        self.trials += 1;
        if !ok {
            self.failures += 1;
            if self.first.is_none() {
                self.first = Some(context());
            }
        }
    }

    /// Errors count as failures.
    fn record_result(&mut self, outcome: Result<bool>, context: impl FnOnce() -> String) {
        match outcome {
            Ok(ok) => self.record(ok, context),
            Err(e) => self.record(false, || format!("{}: {e}", context())),
        }
    }

    fn finish(self, report: &mut ValidationReport) {
        let detail = match &self.first {
            None => format!("{} trials, 0 failures", self.trials),
            Some(c) => format!(
                "{} trials, {} failures; first: {c}",
                self.trials, self.failures
            ),
        };
        report.push(self.name, self.failures == 0 && self.trials > 0, detail);
    }
}

fn rel(a: f64, b: f64) -> f64 {
    TOL * a.abs().max(b.abs()).max(1.0)
}

fn dim_for(i: usize) -> usize {
    2 + i % 5
}

fn stream(seed: u64, suite: &str, family: Family) -> SampleRng {
    sampling::substream(seed, &format!("{suite}/{}", family.name()))
}

fn cones_suite(seed: u64, report: &mut ValidationReport) {
    for family in Family::ALL {
        let f = family.name();
        let mut rng = stream(seed, "cones", family);
        let mut structure = Tally::new(format!("{f}/structure"));
        for dim in 2..=6 {
            let cone = sampling::random_cone(&mut rng, family, dim);
            let v = cone.validate_with(&mut rng);
            structure.record(v.passed(), || {
                format!(
                    "dim {dim}: {:?}",
                    v.failures().map(|c| &c.name).collect::<Vec<_>>()
                )
            });
        }
        structure.finish(report);

        let mut sum = Tally::new(format!("{f}/interior_sum"));
        let mut refl = Tally::new(format!("{f}/leq_reflexive"));
        let mut trans = Tally::new(format!("{f}/leq_transitive"));
        let mut anti = Tally::new(format!("{f}/leq_antisymmetric"));
        let mut scale = Tally::new(format!("{f}/find_scale"));
        let mut strict = Tally::new(format!("{f}/strict_implies_leq"));
        for i in 0..SAMPLES {
            let dim = dim_for(i);
            let cone = sampling::random_cone(&mut rng, family, dim);
            let tol = cone.tolerance();
            let x = sampling::sample_member(&cone, &mut rng);
            let y = sampling::sample_interior(&cone, &mut rng);
            let s = &x + &y;
            sum.record_result(
                cone.contains(&s)
                    .and_then(|a| Ok(a && cone.interior_contains(&s)?)),
                || format!("x = {x}, y = {y}"),
            );

            let a = sampling::vector(&mut rng, dim, 5.0);
            refl.record_result(cone.leq(&a, &a), || format!("x = {a}"));

            let b = &a + &sampling::sample_member(&cone, &mut rng);
            let c = &b + &sampling::sample_member(&cone, &mut rng);
            let chain = (|| Ok(!(cone.leq(&a, &b)? && cone.leq(&b, &c)?) || cone.leq(&a, &c)?))();
            trans.record_result(chain, || format!("{a} ≤ {b} ≤ {c}"));

            let step = [0.0, 1e-14, 1e-6, 1.0][i % 4];
            let d = a.axpy(step, &sampling::sample_member(&cone, &mut rng));
            let both = (|| {
                Ok(!(cone.leq(&a, &d)? && cone.leq(&d, &a)?)
                    || a.dist_inf(&d) <= 10.0 * tol * a.norm_inf().max(1.0))
            })();
            anti.record_result(both, || format!("x = {a}, y = {d}"));

            let e = sampling::sample_interior(&cone, &mut rng);
            let cv = sampling::sample_interior(&cone, &mut rng)
                .scale(sampling::uniform(&mut rng, 0.01, 100.0));
            let found = cone
                .find_scale(&cv, &e)
                .and_then(|delta| cone.strictly_less(&Vector::zeros(dim), &e.axpy(-delta, &cv)));
            scale.record_result(found, || format!("c = {cv}, e = {e}"));

            let p = sampling::vector(&mut rng, dim, 3.0);
            let q = sampling::vector(&mut rng, dim, 3.0);
            for (u, w) in [(&p, &q), (&x, &s), (&a, &c)] {
                let implied = (|| Ok(!cone.strictly_less(u, w)? || cone.leq(u, w)?))();
                strict.record_result(implied, || format!("x = {u}, y = {w}"));
            }
        }
        for t in [sum, refl, trans, anti, scale, strict] {
            t.finish(report);
        }
    }
}

fn scalarization_suite(seed: u64, report: &mut ValidationReport) {
    for family in Family::ALL {
        let f = family.name();
        let mut rng = stream(seed, "scalarization", family);
        let names = [
            "xi_zero",
            "xi_nonnegative_on_cone",
            "xi_monotone",
            "xi_subadditive",
            "xi_homogeneous",
            "xi_ray",
            "order_interval",
            "norm_axioms",
            "norm_equals_xi_on_cone",
            "sandwich",
            "tightness",
            "closed_form_agreement",
        ];
        let mut t: Vec<Tally> = names
            .iter()
            .map(|n| Tally::new(format!("{f}/{n}")))
            .collect();
        for i in 0..SAMPLES {
            let dim = dim_for(i);
            let cone = sampling::random_cone(&mut rng, family, dim);
            let e = sampling::sample_interior(&cone, &mut rng);
            let e2 = sampling::sample_interior(&cone, &mut rng);
            let xi = Scalarizer::new(&cone, &e).expect("interior e");
            let xi2 = Scalarizer::new(&cone, &e2).expect("interior e2");
            let y = sampling::vector(&mut rng, dim, 5.0);
            let z = sampling::vector(&mut rng, dim, 5.0);
            let p = sampling::sample_member(&cone, &mut rng);
            let lambda = sampling::uniform(&mut rng, 0.01, 100.0);
            let ctx = || format!("dim {dim}, e = {e}, y = {y}");

            t[0].record_result(xi.value(&Vector::zeros(dim)).map(|v| v == 0.0), ctx);
            t[1].record_result(xi.value(&p).map(|v| v >= -rel(v, 0.0)), || {
                format!("p = {p}")
            });

            let lower = &y - &p;
            let mono = (|| {
                if !cone.leq(&lower, &y)? {
                    return Ok(true);
                }
                let (a, b) = (xi.value(&lower)?, xi.value(&y)?);
                Ok(a <= b + rel(a, b))
            })();
            t[2].record_result(mono, ctx);

            let sub = (|| {
                let (a, b, c) = (xi.value(&(&y + &z))?, xi.value(&y)?, xi.value(&z)?);
                Ok(a <= b + c + rel(a, b.abs() + c.abs()))
            })();
            t[3].record_result(sub, || format!("x = {y}, y = {z}"));

            let hom = (|| {
                let (a, b) = (xi.value(&y.scale(lambda))?, lambda * xi.value(&y)?);
                Ok((a - b).abs() <= rel(a, b))
            })();
            t[4].record_result(hom, || format!("λ = {lambda}, y = {y}"));

            let ray = (|| {
                let v = xi.value(&y)?;
                Ok(cone.contains(&(&e.scale(v + 1e-8) - &y))?
                    && !cone.contains(&(&e.scale(v - 1e-6) - &y))?)
            })();
            t[5].record_result(ray, ctx);

            let interval = (|| {
                let lam = sampling::uniform(&mut rng, 0.5, 5.0);
                let raw = sampling::sample_interior(&cone, &mut rng);
                let x = raw.scale(lam * sampling::uniform(&mut rng, 0.1, 0.9) / xi.value(&raw)?);
                let zero = Vector::zeros(dim);
                if !(cone.strictly_less(&zero, &x)? && cone.strictly_less(&x, &e.scale(lam))?) {
                    return Ok(false);
                }
                let (a, b) = (xi.value(&x)?, -xi.value(&-&x)?);
                Ok(a >= 0.0 && a < lam && b < lam)
            })();
            t[6].record_result(interval, ctx);

            let norms = (|| {
                let (ny, nz, nsum) = (xi.norm(&y)?, xi.norm(&z)?, xi.norm(&(&y + &z))?);
                let k = sampling::uniform(&mut rng, -5.0, 5.0);
                let nk = xi.norm(&y.scale(k))?;
                let n0 = xi.norm(&Vector::zeros(dim))?;
                Ok(ny >= 0.0
                    && n0 == 0.0
                    && (ny > 0.0 || y.norm_inf() <= 1e-8)
                    && nsum <= ny + nz + rel(nsum, ny + nz)
                    && (nk - k.abs() * ny).abs() <= rel(nk, ny))
            })();
            t[7].record_result(norms, ctx);

            let on_cone = (|| {
                let (a, b) = (xi.norm(&p)?, xi.value(&p)?);
                Ok((a - b).abs() <= rel(a, b))
            })();
            t[8].record_result(on_cone, || format!("p = {p}"));

            let sandwich = (|| -> Result<(bool, bool)> {
                let c = equivalence_constants(&cone, &e, &e2)?;
                let (n1, n2) = (xi.norm(&y)?, xi2.norm(&y)?);
                let ok = c.lower * n1 <= n2 + rel(n1, n2) && n2 <= c.upper * n1 + rel(n1, n2);
                let left = (c.lower * xi.norm(&e2)? - xi2.norm(&e2)?).abs();
                let right = (xi2.norm(&e)? - c.upper * xi.norm(&e)?).abs();
                Ok((ok, left <= rel(1.0, c.lower) && right <= rel(1.0, c.upper)))
            })();
            let ctx2 = || format!("e = {e}, e2 = {e2}, x = {y}");
            match sandwich {
                Ok((ok, tight)) => {
                    t[9].record(ok, ctx2);
                    t[10].record(tight, ctx2);
                }
                Err(err) => {
                    t[9].record(false, || format!("{}: {err}", ctx2()));
                    t[10].record(false, || err.to_string());
                }
            }

            if family != Family::Polyhedral {
                let e_cf = match family {
                    Family::Orthant => e.clone(),
                    _ => Vector::last_axis(dim).scale(sampling::uniform(&mut rng, 0.2, 4.0)),
                };
                let agree = (|| {
                    let s = Scalarizer::new(&cone, &e_cf)?;
                    let closed = s
                        .closed_form(&y)
                        .ok_or_else(|| Error::Numerical("no closed form".into()))?;
                    let bis = s.xi_bisection(&y)?.value;
                    Ok((closed - bis).abs() <= 1e-8 * closed.abs().max(1.0))
                })();
                t[11].record_result(agree, || format!("e = {e_cf}, y = {y}"));
            }
        }
        if family == Family::Polyhedral {
            t.pop();
        }
        for tally in t {
            tally.finish(report);
        }
    }
}

fn spaces(rng: &mut SampleRng) -> Vec<(&'static str, ConeMetricSpace<Vector>)> {
    let orthant = SolidCone::orthant(3).expect("dim 3");
    let lorentz = SolidCone::lorentz(3).expect("dim 3");
    let poly = sampling::random_polyhedral(rng, 4);
    let w_l = sampling::sample_interior(&lorentz, rng);
    let w_p = poly.witness();
    vec![
        (
            "coordinatewise_abs",
            ConeMetricSpace::coordinatewise_abs(orthant),
        ),
        (
            "scaled_norm_lorentz",
            ConeMetricSpace::scaled_norm(lorentz, w_l).expect("interior w"),
        ),
        (
            "scaled_norm_polyhedral",
            ConeMetricSpace::scaled_norm(poly, w_p).expect("interior w"),
        ),
    ]
}

fn cone_metric_suite(seed: u64, report: &mut ValidationReport) {
    let mut rng = sampling::substream(seed, "cone_metric");
    for (name, space) in spaces(&mut rng) {
        let cone = space.cone().clone();
        let points: Vec<Vector> = (0..40)
            .map(|_| sampling::vector(&mut rng, 3, 4.0))
            .collect();
        let v = validate_cone_metric(&space, &points, 200, &mut rng);
        report.push(
            format!("{name}/cone_metric_axioms"),
            v.passed(),
            format!(
                "failed: {:?}",
                v.failures().map(|c| &c.name).collect::<Vec<_>>()
            ),
        );

        let e = sampling::sample_interior(&cone, &mut rng);
        let e2 = sampling::sample_interior(&cone, &mut rng);
        let de = induced_metric(&space, &e).expect("interior e");
        let de2 = induced_metric(&space, &e2).expect("interior e2");
        let c = equivalence_constants(&cone, &e, &e2).expect("interior");
        let mut axioms = Tally::new(format!("{name}/induced_axioms"));
        let mut sandwich = Tally::new(format!("{name}/induced_sandwich"));
        for _ in 0..200 {
            let x = sampling::vector(&mut rng, 3, 4.0);
            let y = sampling::vector(&mut rng, 3, 4.0);
            let z = sampling::vector(&mut rng, 3, 4.0);
            let ok = (|| {
                let (xy, yx, xz, zy, xx) = (
                    de.distance(&x, &y)?,
                    de.distance(&y, &x)?,
                    de.distance(&x, &z)?,
                    de.distance(&z, &y)?,
                    de.distance(&x, &x)?,
                );
                Ok(xx.abs() <= TOL
                    && xy > 0.0
                    && (xy - yx).abs() <= rel(xy, yx)
                    && xy <= xz + zy + rel(xy, xz + zy))
            })();
            axioms.record_result(ok, || format!("x = {x}, y = {y}, z = {z}"));
            let sw = (|| {
                let (a, b) = (de.distance(&x, &y)?, de2.distance(&x, &y)?);
                Ok(c.lower * a <= b + rel(a, b) && b <= c.upper * a + rel(a, b))
            })();
            sandwich.record_result(sw, || format!("x = {x}, y = {y}"));
        }
        axioms.finish(report);
        sandwich.finish(report);

        let limit = sampling::vector(&mut rng, 3, 2.0);
        let dir = sampling::vector(&mut rng, 3, 1.0);
        let seq: Vec<Vector> = (0..60).map(|n| limit.axpy(0.5f64.powi(n), &dir)).collect();
        let es = sampling::interior_directions(&cone, 4, &mut rng);
        let tails = sequence_analysis(&space, &seq, &es, 1e-3, Some(&limit));
        report.push(
            format!("{name}/tail_consistency"),
            matches!(&tails, Ok(r) if r.consistent),
            match &tails {
                Ok(r) => format!(
                    "cauchy tails {:?}",
                    r.tails.iter().map(|t| t.cauchy_tail).collect::<Vec<_>>()
                ),
                Err(e) => e.to_string(),
            },
        );
    }

    for family in Family::ALL {
        let mut rng = stream(seed, "cone_metric/order", family);
        let mut forward = Tally::new(format!("{}/order_forward", family.name()));
        for i in 0..SAMPLES {
            let cone = sampling::random_cone(&mut rng, family, dim_for(i));
            let x = sampling::sample_member(&cone, &mut rng);
            let y = if i % 2 == 0 {
                &x + &sampling::sample_member(&cone, &mut rng)
            } else {
                sampling::sample_member(&cone, &mut rng)
            };
            let es = sampling::interior_directions(&cone, 16, &mut rng);
            let ok = order_check(&cone, &x, &y, &es).map(|r| !r.leq_membership || r.leq_scalarized);
            forward.record_result(ok, || format!("x = {x}, y = {y}"));
        }
        forward.finish(report);
    }
}

fn gauges_suite(seed: u64, report: &mut ValidationReport) {
    let grid = gauges::default_grid();
    let ks: Vec<f64> = (1..=9).map(|i| i as f64 / 10.0).collect();
    let mut builtins: Vec<(String, GaugeFunction)> = ks
        .iter()
        .map(|&k| {
            (
                format!("linear({k})"),
                GaugeFunction::linear(k).expect("k < 1"),
            )
        })
        .collect();
    builtins.push((
        "linear(0)".into(),
        GaugeFunction::linear(0.0).expect("k < 1"),
    ));
    builtins.push(("saturating".into(), GaugeFunction::saturating()));

    let mut valid = Tally::new("builtin_validate");
    for (name, g) in &builtins {
        let v = validate_gauge(g, &grid);
        valid.record(matches!(&v, Ok(v) if v.consistent()), || name.clone());
    }
    valid.finish(report);

    let mut formula = Tally::new("r0_linear_formula");
    let mut defining = Tally::new("r0_defining_inequalities");
    for (name, g) in &builtins {
        for d0 in [0.5, 1.0, 10.0] {
            let r0 = compute_r0(g, d0);
            if let GaugeKind::Linear(k) = g.kind() {
                let expect = d0 / (1.0 - k);
                formula.record(
                    matches!(r0, Ok(r) if (r - expect).abs() <= rel(r, expect)),
                    || format!("{name}, d0 = {d0}: {r0:?} vs {expect}"),
                );
            }
            let ok = r0.and_then(|r| {
                let s = r + 1e-6;
                Ok(r - g.eval(r)? <= d0 + 1e-6 && s - g.eval(s)? > d0)
            });
            defining.record_result(ok, || format!("{name}, d0 = {d0}"));
        }
    }
    formula.finish(report);
    defining.finish(report);

    let mut maj = Tally::new("majorant_limsup");
    for (i, (a, ga)) in builtins.iter().enumerate() {
        for (b, gb) in &builtins[i + 1..] {
            let v = majorant(&[ga.clone(), gb.clone()]).and_then(|m| validate_gauge(&m, &grid));
            maj.record(
                matches!(&v, Ok(v) if v.consistent_with(GaugeClass::Phi2)),
                || format!("max({a}, {b})"),
            );
        }
    }
    maj.finish(report);

    for family in Family::ALL {
        let f = family.name();
        let mut rng = stream(seed, "gauges", family);
        let mut reduction = Tally::new(format!("{f}/cone_map_scale_is_linear"));
        let mut invariants = Tally::new(format!("{f}/cone_gauge_invariants"));
        let mut margin = Tally::new(format!("{f}/uniform_margin"));
        for dim in 2..=6 {
            let cone = sampling::random_cone(&mut rng, family, dim);
            let k = sampling::uniform(&mut rng, 0.05, 0.95);
            let psi = ConeGauge::scale(cone.clone(), k, 0.5 * (1.0 - k)).expect("valid scale");
            for _ in 0..2 {
                let e = sampling::sample_interior(&cone, &mut rng);
                let ok = gauge_from_cone_map(&cone, &e, &psi).and_then(|phi| {
                    for &t in &grid {
                        let v = phi.eval(t)?;
                        if (v - k * t).abs() > rel(v, k * t) {
                            return Ok(false);
                        }
                    }
                    Ok(true)
                });
                reduction.record_result(ok, || format!("dim {dim}, k = {k}, e = {e}"));
            }
            let inv = psi.check_invariants(SAMPLES / 5, &mut rng);
            invariants.record(inv.passed(), || {
                format!(
                    "dim {dim}: {:?}",
                    inv.failures().map(|c| &c.name).collect::<Vec<_>>()
                )
            });
            let m = psi.check_uniform_margin(200, &mut rng);
            margin.record(m.passed, || format!("dim {dim}, k = {k}"));
        }
        reduction.finish(report);
        invariants.finish(report);
        margin.finish(report);
    }
}

fn linear5(k: f64) -> [GaugeFunction; 5] {
    std::array::from_fn(|_| GaugeFunction::linear(k).expect("k < 1"))
}

fn fixed_point_suite(seed: u64, report: &mut ValidationReport) {
    let mut rng = sampling::substream(seed, "fixed_point");

    let p = JungckProblem::new(
        AbsMetric,
        Maps::picard(|x: &f64| 0.5 * x + 1.0),
        linear5(0.6),
        0.0,
    )
    .weakly_compatible(true);
    let r = jungck_solve(&p);
    report.push(
        "affine_convergence",
        matches!(&r, Ok(r) if r.converged() && (r.limit - 2.0).abs() < 1e-8
            && r.coincidence_residual < 1e-8 && r.iterations <= 60),
        match &r {
            Ok(r) => format!("limit {}, {} iterations", r.limit, r.iterations),
            Err(e) => e.to_string(),
        },
    );

    let mut bounded = Tally::new("orbit_bounded_by_r0");
    let mut window = Tally::new("window_diameters");
    let mut unique = Tally::new("uniqueness_probe");
    let mut fixed = Tally::new("fixed_point_residual");
    for _ in 0..40 {
        let dim = 1 + rng_index(&mut rng, 3);
        let k = sampling::uniform(&mut rng, 0.0, 0.85);
        let rot = sampling::uniform(&mut rng, 0.0, std::f64::consts::TAU);
        let b = sampling::vector(&mut rng, dim, 3.0);
        let x0 = sampling::vector(&mut rng, dim, 10.0);
        let x1 = sampling::vector(&mut rng, dim, 10.0);
        // k times a rotation in the first two coordinates: a Euclidean contraction
        let offset = b.clone();
        let f = move |x: &Vector| -> Vector {
            let mut y: Vec<f64> = x.iter().map(|v| k * v).collect();
            if x.dim() >= 2 {
                let (c, s) = (rot.cos(), rot.sin());
                y[0] = k * (c * x[0] - s * x[1]);
                y[1] = k * (s * x[0] + c * x[1]);
            }
            &Vector::new(y).expect("finite") + &offset
        };
        let gauges = linear5((k + 0.1).min(0.95));
        let solve = |x0: &Vector| {
            let p = JungckProblem::new(
                EuclideanMetric,
                Maps::picard(f.clone()),
                gauges.clone(),
                x0.clone(),
            )
            .weakly_compatible(true);
            jungck_solve(&p)
        };
        let ctx = || format!("k = {k}, b = {b}, x0 = {x0}");
        match (solve(&x0), solve(&x1)) {
            (Ok(a), Ok(c)) => {
                let clean = a.converged() && a.contraction_violations.is_empty();
                bounded.record(clean && a.observed_orbit_diameter <= a.r0_bound + 1e-6, ctx);
                window.record(a.window_violations == 0, ctx);
                unique.record(a.limit.dist_inf(&c.limit) <= 10.0 * a_tol(), ctx);
                fixed.record(
                    a.fixed_point_residual.is_some_and(|d| d <= 10.0 * a_tol()),
                    ctx,
                );
            }
            (Err(e), _) | (_, Err(e)) => {
                for t in [&mut bounded, &mut window, &mut unique, &mut fixed] {
                    t.record(false, || format!("{}: {e}", ctx()));
                }
            }
        }
    }
    for t in [bounded, window, unique, fixed] {
        t.finish(report);
    }

    let mut tvs = Tally::new("tvs_checks_agree");
    for i in 0..12 {
        let dim = 2 + i % 3;
        let cone = SolidCone::orthant(dim).expect("dim > 0");
        let space = ConeMetricSpace::coordinatewise_abs(cone.clone());
        let k = sampling::uniform(&mut rng, 0.1, 0.8);
        let psi: [ConeGauge; 5] = std::array::from_fn(|_| {
            ConeGauge::scale(cone.clone(), (k + 0.1).min(0.95), 0.02).expect("valid")
        });
        let e = sampling::sample_interior(&cone, &mut rng);
        let x0 = sampling::vector(&mut rng, dim, 10.0);
        let r = tvs_jungck_solve(
            &space,
            Maps::picard(move |x: &Vector| x.scale(k)),
            &psi,
            &e,
            x0,
            Tolerances::default(),
        );
        tvs.record(
            matches!(&r, Ok(r) if r.converged() && r.check_disagreements.is_empty() && r.tvs_violations.is_empty()),
            || format!("dim {dim}, k = {k}, e = {e}"),
        );
    }
    tvs.finish(report);

    let shift = JungckProblem::new(
        AbsMetric,
        Maps::picard(|x: &f64| x + 1.0),
        linear5(0.5),
        0.0,
    );
    let r = jungck_solve(&shift);
    report.push(
        "negative_control",
        matches!(&r, Ok(r) if r.status == Status::NonConvergence && !r.contraction_violations.is_empty()),
        match &r {
            Ok(r) => format!("{:?}, {} violations", r.status, r.contraction_violation_count),
            Err(e) => e.to_string(),
        },
    );
}

fn a_tol() -> f64 {
    Tolerances::default().tol_conv
}

fn rng_index(rng: &mut SampleRng, n: usize) -> usize {
    (sampling::uniform(rng, 0.0, n as f64) as usize).min(n - 1)
}
