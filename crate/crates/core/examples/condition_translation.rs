//! A contraction template checked on the cone side and after scalarization.

use conescale::cone_metric::{check_condition_translation, ConeMetricSpace, Template};
use conescale::cones::SolidCone;
use conescale::sampling;
use conescale::{Result, Vector};

fn main() -> Result<()> {
    let cone = SolidCone::orthant(2)?;
    let space = ConeMetricSpace::coordinatewise_abs(cone.clone());
    let template: Template = "d(fx,fy) <= 0.5*d(gx,gy) + 0.25*d(gx,fx)".parse()?;
    println!("template: {template}");

    let mut rng = sampling::rng(11);
    let points: Vec<Vector> = (0..50)
        .map(|_| sampling::vector(&mut rng, 2, 4.0))
        .collect();
    let es = sampling::interior_directions(&cone, 8, &mut rng);
    let f = |x: &Vector| x.scale(0.4);
    let g = |x: &Vector| x.clone();
    let report = check_condition_translation(&space, f, g, &template, &points, 500, &es, &mut rng)?;
    println!(
        "{} pairs: {} cone-side violations, {} scalarized violations",
        report.pairs, report.tvs_violations, report.scalar_violations
    );
    Ok(())
}
