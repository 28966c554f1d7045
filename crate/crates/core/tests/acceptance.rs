//! Acceptance criteria, one PASS/FAIL line each. Runs as a plain binary so the
//! lines are always printed; exits non-zero if any criterion fails.

use std::process::Command;

use conescale::cone_metric::{induced_metric, order_check, AbsMetric, ConeMetricSpace, Metric};
use conescale::cones::SolidCone;
use conescale::fixed_point::{
    jungck_solve, tvs_jungck_solve, JungckProblem, Maps, Status, Tolerances,
};
use conescale::gauges::{compute_r0, default_grid, gauge_from_cone_map, ConeGauge, GaugeFunction};
use conescale::nalgebra::DMatrix;
use conescale::sampling::{self, Family, SampleRng};
use conescale::scalarization::{equivalence_constants, Scalarizer};
use conescale::Vector;

const SEED: u64 = 42;
const SAMPLES: usize = 1000;
/// Law tolerance, relative where the quantities scale.
const TOL: f64 = 1e-9;
/// Closed form against bisection.
const TOL_CLOSED_FORM: f64 = 1e-8;
const TOL_RESIDUAL: f64 = 1e-8;
const TOL_DIAMETER: f64 = 1e-6;
const MAX_ITER_AFFINE: usize = 60;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn rel(a: f64, b: f64) -> f64 {
    TOL * a.abs().max(b.abs()).max(1.0)
}

fn rng(label: &str) -> SampleRng {
    sampling::substream(SEED, &format!("acceptance/{label}"))
}

fn dim_for(i: usize) -> usize {
    2 + i % 5
}

/// Counts failures and remembers the first.
#[derive(Default)]
struct Failures {
    count: usize,
    trials: usize,
    first: Option<String>,
}

impl Failures {
    fn check(&mut self, ok: bool, ctx: impl FnOnce() -> String) {
        self.trials += 1;
        if !ok {
            self.count += 1;
            self.first.get_or_insert_with(ctx);
        }
    }

    fn outcome(self) -> Outcome {
        match self.first {
            None => Ok(format!("{} checks, 0 failures", self.trials)),
            Some(c) => Err(format!(
                "{} of {} checks failed; first: {c}",
                self.count, self.trials
            )),
        }
    }
}

fn xi(s: &Scalarizer<'_>, y: &Vector) -> f64 {
    s.value(y).expect("scalarization")
}

fn norm(s: &Scalarizer<'_>, y: &Vector) -> f64 {
    s.norm(y).expect("norm")
}

fn scalarization_laws() -> Outcome {
    let mut fails = Failures::default();
    for family in Family::ALL {
        let mut r = rng(&format!("laws/{}", family.name()));
        for i in 0..SAMPLES {
            let dim = dim_for(i);
            let cone = sampling::random_cone(&mut r, family, dim);
            let e = sampling::sample_interior(&cone, &mut r);
            let s = Scalarizer::new(&cone, &e).unwrap();
            let y = sampling::vector(&mut r, dim, 5.0);
            let z = sampling::vector(&mut r, dim, 5.0);
            let p = sampling::sample_member(&cone, &mut r);
            let lambda = sampling::uniform(&mut r, 0.01, 100.0);
            let ctx = || format!("{} dim {dim}: e = {e}, y = {y}", family.name());

            fails.check(xi(&s, &Vector::zeros(dim)) == 0.0, ctx);
            fails.check(xi(&s, &p) >= -TOL * p.norm_inf().max(1.0), ctx);
            let below = &y - &p;
            let (a, b) = (xi(&s, &below), xi(&s, &y));
            fails.check(a <= b + rel(a, b), ctx);
            let (sum, xy, xz) = (xi(&s, &(&y + &z)), xi(&s, &y), xi(&s, &z));
            fails.check(sum <= xy + xz + rel(sum, xy.abs() + xz.abs()), ctx);
            let (scaled, lin) = (xi(&s, &y.scale(lambda)), lambda * xi(&s, &y));
            fails.check((scaled - lin).abs() <= rel(scaled, lin), ctx);
        }
    }
    fails.outcome()
}

fn closed_form_agreement() -> Outcome {
    let mut fails = Failures::default();
    for family in [Family::Orthant, Family::Lorentz] {
        let mut r = rng(&format!("closed/{}", family.name()));
        for i in 0..SAMPLES {
            let dim = dim_for(i);
            let cone = sampling::random_cone(&mut r, family, dim);
            let e = match family {
                Family::Orthant => sampling::sample_interior(&cone, &mut r),
                _ => Vector::last_axis(dim).scale(sampling::uniform(&mut r, 0.2, 4.0)),
            };
            let s = Scalarizer::new(&cone, &e).unwrap();
            let y = sampling::vector(&mut r, dim, 5.0);
            let closed = s.closed_form(&y);
            let bis = s.xi_bisection(&y).map(|r| r.value);
            let ok = matches!((closed, &bis), (Some(c), Ok(b)) if (c - b).abs() <= TOL_CLOSED_FORM * c.abs().max(1.0));
            fails.check(ok, || format!("e = {e}, y = {y}: {closed:?} vs {bis:?}"));
        }
    }
    fails.outcome()
}

fn norm_suite() -> Outcome {
    let mut fails = Failures::default();
    for family in Family::ALL {
        let mut r = rng(&format!("norm/{}", family.name()));
        for i in 0..SAMPLES {
            let dim = dim_for(i);
            let cone = sampling::random_cone(&mut r, family, dim);
            let e = sampling::sample_interior(&cone, &mut r);
            let s = Scalarizer::new(&cone, &e).unwrap();
            let x = sampling::vector(&mut r, dim, 5.0);
            let y = sampling::vector(&mut r, dim, 5.0);
            let k = sampling::uniform(&mut r, -5.0, 5.0);
            let p = sampling::sample_member(&cone, &mut r);
            let ctx = || format!("{} dim {dim}: e = {e}, x = {x}", family.name());

            let (nx, ny, nxy) = (norm(&s, &x), norm(&s, &y), norm(&s, &(&x + &y)));
            fails.check(nx >= 0.0 && (nx > 0.0 || x.norm_inf() <= 1e-8), ctx);
            fails.check(norm(&s, &Vector::zeros(dim)) == 0.0, ctx);
            fails.check(nxy <= nx + ny + rel(nxy, nx + ny), ctx);
            let nk = norm(&s, &x.scale(k));
            fails.check((nk - k.abs() * nx).abs() <= rel(nk, nx), ctx);
            let (np, xp) = (norm(&s, &p), xi(&s, &p));
            fails.check((np - xp).abs() <= rel(np, xp), || format!("p = {p}"));
        }
    }
    fails.outcome()
}

fn equivalence_sandwich() -> Outcome {
    let mut fails = Failures::default();
    for family in Family::ALL {
        let mut r = rng(&format!("equiv/{}", family.name()));
        for i in 0..SAMPLES {
            let dim = dim_for(i);
            let cone = sampling::random_cone(&mut r, family, dim);
            let e = sampling::sample_interior(&cone, &mut r);
            let e2 = sampling::sample_interior(&cone, &mut r);
            let x = sampling::vector(&mut r, dim, 5.0);
            let (s, s2) = (
                Scalarizer::new(&cone, &e).unwrap(),
                Scalarizer::new(&cone, &e2).unwrap(),
            );
            let c = equivalence_constants(&cone, &e, &e2).unwrap();
            let ctx = || format!("{}: e = {e}, e2 = {e2}, x = {x}", family.name());
            let (n1, n2) = (norm(&s, &x), norm(&s2, &x));
            fails.check(c.lower * n1 <= n2 + rel(n1, n2), ctx);
            fails.check(n2 <= c.upper * n1 + rel(n1, n2), ctx);
            let left = (c.lower * norm(&s, &e2) - norm(&s2, &e2)).abs();
            fails.check(left <= rel(1.0, c.lower), || {
                format!("tightness at e2: {}", ctx())
            });
            let right = (norm(&s2, &e) - c.upper * norm(&s, &e)).abs();
            fails.check(right <= rel(1.0, c.upper), || {
                format!("tightness at e: {}", ctx())
            });
        }
    }
    fails.outcome()
}

fn induced_metric_suite() -> Outcome {
    let mut r = rng("induced");
    let orthant = SolidCone::orthant(3).unwrap();
    let lorentz = SolidCone::lorentz(3).unwrap();
    let poly = sampling::random_polyhedral(&mut r, 3);
    let w = sampling::sample_interior(&lorentz, &mut r);
    let spaces = [
        ConeMetricSpace::coordinatewise_abs(orthant.clone()),
        ConeMetricSpace::scaled_norm(lorentz.clone(), w).unwrap(),
        ConeMetricSpace::scaled_norm(poly.clone(), poly.witness()).unwrap(),
    ];
    let mut fails = Failures::default();
    for (space, cone) in spaces.iter().zip([&orthant, &lorentz, &poly]) {
        let e = sampling::sample_interior(cone, &mut r);
        let e2 = sampling::sample_interior(cone, &mut r);
        let (d, d2) = (
            induced_metric(space, &e).unwrap(),
            induced_metric(space, &e2).unwrap(),
        );
        let c = equivalence_constants(cone, &e, &e2).unwrap();
        for _ in 0..200 {
            let [x, y, z] = [0; 3].map(|_| sampling::vector(&mut r, 3, 4.0));
            let dist = |a: &Vector, b: &Vector| d.distance(a, b).unwrap();
            let ctx = || format!("{} cone: x = {x}, y = {y}, z = {z}", cone.family());
            let (xy, yx) = (dist(&x, &y), dist(&y, &x));
            fails.check(dist(&x, &x).abs() <= TOL && xy > 0.0, ctx);
            fails.check((xy - yx).abs() <= rel(xy, yx), ctx);
            let (xz, zy) = (dist(&x, &z), dist(&z, &y));
            fails.check(xy <= xz + zy + rel(xy, xz + zy), ctx);
            let b = d2.distance(&x, &y).unwrap();
            fails.check(
                c.lower * xy <= b + rel(xy, b) && b <= c.upper * xy + rel(xy, b),
                ctx,
            );
        }
    }
    fails.outcome()
}

fn order_forward() -> Outcome {
    let mut fails = Failures::default();
    for family in Family::ALL {
        let mut r = rng(&format!("order/{}", family.name()));
        for i in 0..SAMPLES {
            let cone = sampling::random_cone(&mut r, family, dim_for(i));
            let x = sampling::sample_member(&cone, &mut r);
            let y = &x + &sampling::sample_member(&cone, &mut r);
            let es = sampling::interior_directions(&cone, 16, &mut r);
            let check = order_check(&cone, &x, &y, &es).unwrap();
            fails.check(check.leq_membership && check.leq_scalarized, || {
                format!("x = {x}, y = {y}")
            });
        }
    }
    fails.outcome()
}

fn r0_bound() -> Outcome {
    let mut fails = Failures::default();
    for i in 1..=9 {
        let k = i as f64 / 10.0;
        let g = GaugeFunction::linear(k).unwrap();
        for d0 in [0.5, 1.0, 10.0] {
            let r0 = compute_r0(&g, d0).unwrap();
            let expect = d0 / (1.0 - k);
            fails.check((r0 - expect).abs() <= TOL, || {
                format!("k = {k}, d0 = {d0}: {r0} vs {expect}")
            });
            let s = r0 + 1e-6;
            fails.check(r0 - g.eval(r0).unwrap() <= d0 + 1e-6, || {
                format!("k = {k}, d0 = {d0}: left inequality")
            });
            fails.check(s - g.eval(s).unwrap() > d0, || {
                format!("k = {k}, d0 = {d0}: right inequality")
            });
        }
    }
    fails.outcome()
}

fn solver_convergence() -> Outcome {
    let gauges = std::array::from_fn(|_| GaugeFunction::linear(0.6).unwrap());
    let p = JungckProblem::new(
        AbsMetric,
        Maps::picard(|x: &f64| x / 2.0 + 1.0),
        gauges,
        0.0,
    );
    let r = jungck_solve(&p).map_err(|e| e.to_string())?;
    let detail = format!(
        "limit {}, residual {:e}, {} iterations, diameter {} vs r0 {}",
        r.limit, r.coincidence_residual, r.iterations, r.observed_orbit_diameter, r.r0_bound
    );
    let ok = r.converged()
        && (r.limit - 2.0).abs() < TOL_RESIDUAL
        && r.coincidence_residual < TOL_RESIDUAL
        && r.iterations <= MAX_ITER_AFFINE
        && r.contraction_violations.is_empty()
        && r.observed_orbit_diameter <= r.r0_bound + TOL_DIAMETER;
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn tvs_reduction() -> Outcome {
    let o = SolidCone::orthant(2).unwrap();
    let space = ConeMetricSpace::coordinatewise_abs(o.clone());
    let e = Vector::from([1.0, 1.0]);
    let scale: [ConeGauge; 5] =
        std::array::from_fn(|_| ConeGauge::scale(o.clone(), 0.6, 0.2).unwrap());
    let r = tvs_jungck_solve(
        &space,
        Maps::picard(|x: &Vector| x.scale(0.5)),
        &scale,
        &e,
        Vector::from([8.0, 8.0]),
        Tolerances::default(),
    )
    .map_err(|e| e.to_string())?;
    let mut fails = Failures::default();
    fails.check(
        r.converged() && r.limit.norm_inf() < TOL_RESIDUAL && r.coincidence_residual < TOL_RESIDUAL,
        || {
            format!(
                "scale solve: limit {}, residual {:e}",
                r.limit, r.coincidence_residual
            )
        },
    );
    fails.check(r.check_disagreements.is_empty(), || {
        format!("scale solve disagreements {:?}", r.check_disagreements)
    });

    let a = DMatrix::from_row_slice(2, 2, &[0.5, 0.0, 0.0, 0.25]);
    let op: [ConeGauge; 5] =
        std::array::from_fn(|_| ConeGauge::linear_operator(o.clone(), a.clone(), 0.2).unwrap());
    let f = |x: &Vector| Vector::from([x[0] / 2.0, x[1] / 4.0]);
    let r = tvs_jungck_solve(
        &space,
        Maps::picard(f),
        &op,
        &e,
        Vector::from([3.0, -5.0]),
        Tolerances::default(),
    )
    .map_err(|e| e.to_string())?;
    fails.check(r.converged() && r.limit.norm_inf() < TOL_RESIDUAL, || {
        format!("operator solve: limit {}", r.limit)
    });
    fails.check(
        r.check_disagreements.is_empty() && r.tvs_violations.is_empty(),
        || format!("operator solve disagreements {:?}", r.check_disagreements),
    );

    let grid = default_grid();
    let mut rr = rng("tvs");
    for family in Family::ALL {
        for dim in 2..=4 {
            let cone = sampling::random_cone(&mut rr, family, dim);
            let e = sampling::sample_interior(&cone, &mut rr);
            for i in 1..=9 {
                let k = i as f64 / 10.0;
                let psi = ConeGauge::scale(cone.clone(), k, 0.5 * (1.0 - k)).unwrap();
                let phi = gauge_from_cone_map(&cone, &e, &psi).unwrap();
                let worst = grid
                    .iter()
                    .map(|&t| (phi.eval(t).unwrap() - k * t).abs() / (k * t).max(1.0))
                    .fold(0.0, f64::max);
                fails.check(worst <= TOL, || {
                    format!(
                        "{} dim {dim}, k = {k}: relative gap {worst:e}",
                        family.name()
                    )
                });
            }
        }
    }
    fails.outcome()
}

fn negative_control() -> Outcome {
    let gauges = std::array::from_fn(|_| GaugeFunction::linear(0.5).unwrap());
    let p = JungckProblem::new(AbsMetric, Maps::picard(|x: &f64| x + 1.0), gauges, 0.0);
    let r = jungck_solve(&p).map_err(|e| e.to_string())?;
    let detail = format!(
        "{:?} after {} iterations, {} violations",
        r.status, r.iterations, r.contraction_violation_count
    );
    if r.status == Status::NonConvergence && !r.contraction_violations.is_empty() {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn reproducibility() -> Outcome {
    let exe = env!("CARGO_BIN_EXE_conescale");
    let run = || {
        Command::new(exe)
            .args(["selftest", "--seed", "42"])
            .env_remove("CONESCALE_SEED")
            .output()
            .map_err(|e| e.to_string())
    };
    let (a, b) = (run()?, run()?);
    if !a.status.success() {
        return Err(format!("selftest exited with {}", a.status));
    }
    if a.stdout == b.stdout && !a.stdout.is_empty() {
        Ok(format!("{} identical bytes", a.stdout.len()))
    } else {
        Err("outputs differ".into())
    }
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("scalarization laws", scalarization_laws),
        ("closed form vs bisection", closed_form_agreement),
        ("induced norm", norm_suite),
        ("equivalence sandwich and tightness", equivalence_sandwich),
        ("induced metric axioms and sandwich", induced_metric_suite),
        ("order characterization, forward", order_forward),
        ("r0 bound", r0_bound),
        ("affine solver convergence", solver_convergence),
        ("cone-valued solver reduction", tvs_reduction),
        ("negative control", negative_control),
        ("selftest reproducibility", reproducibility),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {detail}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
