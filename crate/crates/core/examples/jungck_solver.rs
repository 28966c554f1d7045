//! Coincidence of f(x) = x/2 + 1 and g(x) = 2x, and a non-contractive control.

use conescale::cone_metric::AbsMetric;
use conescale::fixed_point::{jungck_solve, JungckProblem, Maps};
use conescale::gauges::GaugeFunction;
use conescale::Result;

fn gauges(k: f64) -> Result<[GaugeFunction; 5]> {
    let g = GaugeFunction::linear(k)?;
    Ok(std::array::from_fn(|_| g.clone()))
}

fn main() -> Result<()> {
    let maps = Maps::self_maps(
        |x: &f64| 0.5 * x + 1.0,
        |x: &f64| 2.0 * x,
        |y: &f64| Some(y / 2.0),
    );
    let problem = JungckProblem::new(AbsMetric, maps, gauges(0.6)?, 0.0);
    let r = jungck_solve(&problem)?;
    println!(
        "{:?} after {} iterations: f(z) = g(z) = {} at z = {}",
        r.status, r.iterations, r.limit, r.coincidence_argument
    );
    println!(
        "orbit diameter {:.6} within r0 = {:.6}; f∘g − g∘f at z: {:e} (the pair does not commute there)",
        r.observed_orbit_diameter,
        r.r0_bound,
        r.commutation_residual.unwrap_or(f64::NAN)
    );

    let shift = JungckProblem::new(
        AbsMetric,
        Maps::picard(|x: &f64| x + 1.0),
        gauges(0.5)?,
        0.0,
    );
    let r = jungck_solve(&shift)?;
    let first = r.contraction_violations.first();
    println!(
        "shift: {:?}, {} violations, first {first:?}",
        r.status, r.contraction_violation_count
    );
    Ok(())
}
