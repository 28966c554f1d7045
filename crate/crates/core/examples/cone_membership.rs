//! Membership, interior and order oracles for the three cone families.

use conescale::cones::SolidCone;
use conescale::{Result, Vector};

fn main() -> Result<()> {
    let orthant = SolidCone::orthant(2)?;
    let lorentz = SolidCone::lorentz(3)?;
    let wedge = SolidCone::polyhedral(
        vec![Vector::from([1.0, -0.5]), Vector::from([-0.5, 1.0])],
        Vector::from([1.0, 1.0]),
    )?;

    for (name, cone, point) in [
        ("orthant", &orthant, Vector::from([1.0, 0.0])),
        ("lorentz", &lorentz, Vector::from([0.6, 0.8, 1.0])),
        ("wedge", &wedge, Vector::from([2.0, 1.5])),
    ] {
        println!(
            "{name:8} {point}: member {}, interior {}, margin {:.3}",
            cone.contains(&point)?,
            cone.interior_contains(&point)?,
            cone.margin(&point)?
        );
    }

    let (x, y) = (Vector::from([1.0, 2.0]), Vector::from([3.0, 2.0]));
    println!(
        "orthant: {x} ≤ {y}: {}, {x} ≪ {y}: {}",
        orthant.leq(&x, &y)?,
        orthant.strictly_less(&x, &y)?
    );

    let delta = orthant.find_scale(&Vector::from([2.0, 2.0]), &Vector::from([1.0, 1.0]))?;
    println!("find_scale((2,2), (1,1)) = {delta}");

    let report = wedge.validate();
    for check in &report.checks {
        println!(
            "wedge {:18} {}",
            check.name,
            if check.passed { "ok" } else { "FAILED" }
        );
    }
    Ok(())
}
