//! Cone-valued contraction reduced to a real one through ξ_e.

use conescale::cone_metric::ConeMetricSpace;
use conescale::cones::SolidCone;
use conescale::fixed_point::{tvs_jungck_solve, Maps, Tolerances};
use conescale::gauges::ConeGauge;
use conescale::nalgebra::DMatrix;
use conescale::{Result, Vector};

fn main() -> Result<()> {
    let cone = SolidCone::orthant(2)?;
    let space = ConeMetricSpace::coordinatewise_abs(cone.clone());
    let a = DMatrix::from_row_slice(2, 2, &[0.5, 0.0, 0.0, 0.25]);
    let psi = ConeGauge::linear_operator(cone.clone(), a, 0.2)?;
    let psis: [ConeGauge; 5] = std::array::from_fn(|_| psi.clone());

    let f = |x: &Vector| Vector::from([x[0] / 2.0, x[1] / 4.0]);
    let e = Vector::from([1.0, 1.0]);
    let r = tvs_jungck_solve(
        &space,
        Maps::picard(f),
        &psis,
        &e,
        Vector::from([3.0, -5.0]),
        Tolerances::default(),
    )?;
    println!(
        "{:?} after {} iterations, limit {}",
        r.status, r.iterations, r.limit
    );
    println!(
        "scalar violations {}, cone-side violations {}, disagreements {}",
        r.contraction_violation_count,
        r.tvs_violation_count,
        r.check_disagreements.len()
    );
    Ok(())
}
