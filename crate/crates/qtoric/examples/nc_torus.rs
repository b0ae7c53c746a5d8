//! The noncommutative torus: braided normalization and ideal reduction.
//!
//! Run with: cargo run -p qtoric --example nc_torus

use qtoric::catalog;
use qtoric::{DegreeVector, Scalar};

fn main() -> qtoric::Result<()> {
    // Deformation [[0,1],[-1,0]] on Z^2; x has degree (1,0), xs degree (-1,0),
    // with the relation xs*x = 1.
    let torus = catalog::nc_torus_rank2();
    println!("generators:");
    for g in torus.generators() {
        println!("  {} of degree {}", g.name, g.degree);
    }
    for rel in torus.relations() {
        println!("relation: {}", rel.render());
    }

    // Words normalize into sorted monomials, picking up chi phases. Here the
    // conjugate pair commutes on the nose (chi(m, -m) = 1).
    let w = torus.parse_element("xs*x*xs")?;
    println!("xs*x*xs normalizes to {}", w.render());
    println!("...and reduces to {}", torus.reduce(&w)?.render());

    // On a genuinely deformed plane the phase shows up:
    let plane = qtoric::Presentation::free(
        catalog::theta2(),
        vec![
            qtoric::GeneratorSpec::new("a", DegreeVector(vec![1, 0])),
            qtoric::GeneratorSpec::new("b", DegreeVector(vec![0, 1])),
        ],
    )?;
    let ba = plane.parse_element("b*a")?;
    println!("on the deformed plane: b*a = {}", ba.render());

    // The Groebner basis of the torus ideal and some normal forms.
    let gb = torus.groebner();
    println!("groebner basis ({} element):", gb.len());
    for g in gb.basis_elements() {
        println!("  {}", g.render());
    }
    for text in ["x*xs", "x^3*xs^2", "x*xs + xs*x - 2"] {
        let e = torus.parse_element(text)?;
        println!("reduce({text}) = {}", torus.reduce(&e)?.render());
    }

    // Standard monomials form exact graded bases of the quotient.
    let zero = DegreeVector::zero(2);
    let dim = torus.standard_monomials(&zero, 4).len();
    println!("coinvariant component at cap 4 has dimension {dim}");
    let m = DegreeVector(vec![3, 0]);
    for mono in torus.standard_monomials(&m, 5) {
        let e = torus.monomial_element(mono, Scalar::one())?;
        println!("degree (3,0) basis vector: {}", e.render());
    }
    Ok(())
}
