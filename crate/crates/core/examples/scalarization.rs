//! ξ_e(y) = inf{t : t·e − y ∈ P}, closed forms and the generic bracket.

use conescale::cones::SolidCone;
use conescale::scalarization::Scalarizer;
use conescale::{Result, Vector};

fn main() -> Result<()> {
    let orthant = SolidCone::orthant(2)?;
    let xi = Scalarizer::new(&orthant, &Vector::from([1.0, 1.0]))?;
    let y = Vector::from([3.0, 5.0]);
    let r = xi.xi(&y)?;
    println!("orthant ξ_(1,1)({y}) = {} via {:?}", r.value, r.method);
    println!("bracket {:?}", xi.bracket(&y)?);
    println!("bisection path agrees: {}", xi.xi_bisection(&y)?.value);

    let lorentz = SolidCone::lorentz(3)?;
    let axis = Scalarizer::new(&lorentz, &Vector::from([0.0, 0.0, 2.0]))?;
    let tilted = Scalarizer::new(&lorentz, &Vector::from([0.3, 0.0, 1.0]))?;
    let y = Vector::from([1.0, -2.0, 0.5]);
    for (name, s) in [("axis", &axis), ("tilted", &tilted)] {
        let r = s.xi(&y)?;
        println!(
            "lorentz {name:6} ξ({y}) = {:.12} ({:?}, {} iterations)",
            r.value, r.method, r.iterations
        );
    }
    Ok(())
}
