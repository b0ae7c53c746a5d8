//! Deformed spheres: presentations, the unit-sphere relation and
//! localization at a hemisphere function.
//!
//! Run with: cargo run -p qtoric --example deformed_spheres

use qtoric::catalog;
use qtoric::presentation::localize;
use qtoric::DegreeVector;

fn main() -> qtoric::Result<()> {
    // S^3: two conjugate generator pairs with sum xs_i x_i = 1.
    let s3 = catalog::sphere_odd(catalog::theta2(), 2);
    println!("S3 generators: {:?}", s3.generators().iter().map(|g| g.name.as_str()).collect::<Vec<_>>());
    let sum = s3.parse_element("xs1*x1 + xs2*x2")?;
    println!("reduce(xs1*x1 + xs2*x2) = {}", s3.reduce(&sum)?.render());

    // S^4 adds the coinvariant generator z.
    let s4 = catalog::sphere_even(catalog::theta2(), 2);
    let sum4 = s4.parse_element("xs1*x1 + xs2*x2 + z^2")?;
    println!("reduce on S4: {}", s4.reduce(&sum4)?.render());

    // Graded dimensions of the quotient at small caps.
    for cap in 0..=3usize {
        let dim = s4.standard_monomials(&DegreeVector::zero(2), cap).len();
        println!("S4 coinvariants up to degree {cap}: dimension {dim}");
    }

    // Localize at the north hemisphere function s1 = (1 - z)/2: one new
    // central generator y with relation s1*y = 1.
    let (s1, _) = catalog::hemisphere_elements(&s4);
    let loc = localize(&s4, &s1)?;
    println!("chart algebra has {} generators:", loc.algebra.num_gens());
    for g in loc.algebra.generators() {
        println!("  {} of degree {}{}", g.name, g.degree, if g.invertible { " (invertible)" } else { "" });
    }
    let y = loc.algebra.generator(loc.inverse_index)?;
    let check = loc.map.apply(&s1)?.mul(&y)?;
    println!("ell(s1) * y reduces to {}", loc.algebra.reduce(&check)?.render());

    // The inverse generator genuinely divides: (1 - z) y = 2 in the chart.
    let e = loc.algebra.parse_element("(1 - z)*y")?;
    println!("(1 - z)*y reduces to {}", loc.algebra.reduce(&e)?.render());
    Ok(())
}
