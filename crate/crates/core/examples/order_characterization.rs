//! x ≤ y exactly when ξ_e(x) ≤ ξ_e(y) for every interior e.

use conescale::cone_metric::order_check;
use conescale::cones::SolidCone;
use conescale::sampling;
use conescale::{Result, Vector};

fn main() -> Result<()> {
    let cone = SolidCone::lorentz(3)?;
    let mut rng = sampling::rng(3);
    let es = sampling::interior_directions(&cone, 16, &mut rng);

    let x = Vector::from([0.0, 0.0, 1.0]);
    for y in [Vector::from([0.5, 0.0, 2.0]), Vector::from([1.0, 0.0, 1.2])] {
        let r = order_check(&cone, &x, &y, &es)?;
        println!(
            "{x} ≤ {y}: membership {}, all 16 scalarizations {}",
            r.leq_membership, r.leq_scalarized
        );
    }
    Ok(())
}
