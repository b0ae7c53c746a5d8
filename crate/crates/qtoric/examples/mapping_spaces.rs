//! Stage-wise mapping spaces: a stage-B point of the space of self-maps of
//! X_A is a morphism A -> B ⊔ A, so richer stages detect more maps than the
//! bare Hom-set.
//!
//! Run with: cargo run -p qtoric --example mapping_spaces

use qtoric::catalog;
use qtoric::morphism::{graded_points, hom_constraints};
use qtoric::presentation::coproduct;
use qtoric::DegreeVector;

fn main() -> qtoric::Result<()> {
    let m = DegreeVector(vec![1, 0]);
    let line = catalog::free_line(catalog::theta2(), &m);

    // At the trivial stage K the only equivariant self-maps of the line are
    // the scalings x -> c x: a one-dimensional space of points.
    let pts = graded_points(&line, &m, 3);
    println!("stage K: {} point(s):", pts.len());
    for p in &pts {
        println!("  x -> c * {}", p.render());
    }

    // At the circle stage the mapping space opens up: maps x -> sum_j c_j
    // y^(j-1) x^j appear, one for every polynomial degree.
    let circle = catalog::circle(catalog::theta2(), &m)?;
    let stage = coproduct(&circle, &line)?.algebra;
    for j_max in 1..=4usize {
        let cap = 2 * j_max - 1;
        let pts = graded_points(&stage, &m, cap);
        let rendered: Vec<String> = pts.iter().map(|p| p.render()).collect();
        println!("circle stage, cap {cap}: {} points: {}", pts.len(), rendered.join(", "));
    }

    // For constrained targets the Hom description becomes a polynomial
    // system in the unknown coefficients; the torus-to-torus case is
    // quadratic (an invertibility constraint).
    let torus = catalog::nc_torus_rank2();
    let sys = hom_constraints(&torus, &torus, 1)?;
    println!(
        "torus -> torus at cap 1: {} unknowns, {} constraint(s), degree {}",
        sys.unknowns.len(),
        sys.constraints.len(),
        sys.max_constraint_degree()
    );
    for c in &sys.constraints {
        println!("  {} = 0", c.poly.render(&sys.unknowns));
    }
    Ok(())
}
