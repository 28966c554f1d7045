//! A cone-valued metric, its real scalarizations d_e, and tail analysis of a
//! convergent sequence under several e.

use conescale::cone_metric::{
    induced_metric, sequence_analysis, validate_cone_metric, ConeMetricSpace, Metric,
};
use conescale::cones::SolidCone;
use conescale::sampling;
use conescale::{Result, Vector};

fn main() -> Result<()> {
    let cone = SolidCone::orthant(2)?;
    let space = ConeMetricSpace::coordinatewise_abs(cone.clone());
    let mut rng = sampling::rng(1);

    let points: Vec<Vector> = (0..30)
        .map(|_| sampling::vector(&mut rng, 2, 5.0))
        .collect();
    let report = validate_cone_metric(&space, &points, 200, &mut rng);
    println!("cone metric axioms hold on samples: {}", report.passed());

    let (x, y) = (Vector::from([0.0, 0.0]), Vector::from([1.0, -3.0]));
    for e in [Vector::from([1.0, 1.0]), Vector::from([2.0, 0.5])] {
        let d = induced_metric(&space, &e)?;
        println!("d_{e}({x}, {y}) = {}", d.distance(&x, &y)?);
    }

    let seq: Vec<Vector> = (0..40)
        .map(|n| Vector::from([0.5f64.powi(n), -(0.5f64.powi(n))]))
        .collect();
    let es = sampling::interior_directions(&cone, 3, &mut rng);
    let tails = sequence_analysis(&space, &seq, &es, 1e-3, Some(&Vector::zeros(2)))?;
    for t in &tails.tails {
        println!(
            "e = {}: cauchy tail {:?}, limit tail {:?}",
            t.e, t.cauchy_tail, t.limit_tail
        );
    }
    println!(
        "tails consistent with the equivalence constants: {}",
        tails.consistent
    );
    Ok(())
}
