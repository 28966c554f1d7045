//! Gauge functions: grid validation, the r₀ bound, majorants and cone maps.

use conescale::cones::SolidCone;
use conescale::gauges::{
    compute_r0, default_grid, gauge_from_cone_map, linear_operator_check, majorant, validate_gauge,
    ConeGauge, GaugeFunction,
};
use conescale::nalgebra::DMatrix;
use conescale::sampling;
use conescale::{Result, Vector};

fn main() -> Result<()> {
    let grid = default_grid();
    for g in [
        GaugeFunction::linear(0.9)?,
        GaugeFunction::saturating(),
        GaugeFunction::linear_unchecked(1.0),
    ] {
        let v = validate_gauge(&g, &grid)?;
        let failed: Vec<_> = v.report.failures().map(|c| c.name.as_str()).collect();
        println!(
            "{:?}: consistent {}, failed {:?}",
            g.kind(),
            v.consistent(),
            failed
        );
    }

    for d0 in [0.5, 1.0, 10.0] {
        println!(
            "r0(Linear(0.5), d0 = {d0}) = {}",
            compute_r0(&GaugeFunction::linear(0.5)?, d0)?
        );
    }

    let m = majorant(&[GaugeFunction::linear(0.5)?, GaugeFunction::saturating()])?;
    println!(
        "max(t/2, t/(1+t)) at 0.5 and 2: {} {}",
        m.eval(0.5)?,
        m.eval(2.0)?
    );

    let cone = SolidCone::orthant(2)?;
    let a = DMatrix::from_row_slice(2, 2, &[0.5, 0.0, 0.0, 0.25]);
    let psi = ConeGauge::linear_operator(cone.clone(), a.clone(), 0.25)?;
    let phi = gauge_from_cone_map(&cone, &Vector::from([1.0, 1.0]), &psi)?;
    println!("φ(t) = ‖ψ(t·e)‖_e at t = 4: {}", phi.eval(4.0)?);

    let mut rng = sampling::rng(5);
    let report = linear_operator_check(&cone, &a, 500, &mut rng)?;
    for c in &report.checks {
        println!("operator {:22} {} ({})", c.name, c.passed, c.detail);
    }
    Ok(())
}
