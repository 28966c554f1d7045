//! Induced norms ‖x‖_e and the best constants between two of them.

use conescale::cones::SolidCone;
use conescale::sampling;
use conescale::scalarization::{equivalence_constants, norm_e};
use conescale::{Result, Vector};

fn main() -> Result<()> {
    let cone = SolidCone::orthant(3)?;
    let e = Vector::from([1.0, 1.0, 1.0]);
    let e2 = Vector::from([0.5, 2.0, 1.0]);
    let c = equivalence_constants(&cone, &e, &e2)?;
    println!("lower = {}, upper = {}", c.lower, c.upper);

    let mut rng = sampling::rng(7);
    let mut worst = (f64::INFINITY, 0.0f64);
    for _ in 0..10_000 {
        let x = sampling::vector(&mut rng, 3, 10.0);
        let ratio = norm_e(&cone, &e2, &x)? / norm_e(&cone, &e, &x)?;
        worst = (worst.0.min(ratio), worst.1.max(ratio));
    }
    println!("observed ratio range [{:.6}, {:.6}]", worst.0, worst.1);
    println!(
        "attained at x = e2: {:.6}, at x = e: {:.6}",
        norm_e(&cone, &e2, &e2)? / norm_e(&cone, &e, &e2)?,
        norm_e(&cone, &e2, &e)? / norm_e(&cone, &e, &e)?
    );
    Ok(())
}
