//! The two pictures of infinitesimal automorphisms agree: coinvariant
//! tensors b ⊗ L over der(A) map through xi onto the equivariant stage
//! derivations, bijectively at matching caps and compatibly with brackets.
//!
//! Run with: cargo run -p qtoric --example xi_isomorphism

use qtoric::catalog;
use qtoric::derivation::{j_stage_basis, psi, verify_xi_iso, xi};
use qtoric::presentation::Presentation;
use qtoric::DegreeVector;

fn main() -> qtoric::Result<()> {
    let line = catalog::free_line(catalog::theta2(), &DegreeVector(vec![1, 0]));
    let point = Presentation::trivial(catalog::theta2());
    let torus = catalog::nc_torus_rank2();

    for (name, space, stage, cap) in [
        ("(F_m, K, 1)", &line, &point, 1usize),
        ("(F_m, F_m, 2)", &line, &line, 2),
        ("(torus, K, 2)", &torus, &point, 2),
    ] {
        println!("== {name} ==");
        let report = verify_xi_iso(space, stage, cap)?;
        print!("{report}");
    }

    // A peek inside: the j-stage basis for (F_m, F_m, 2) and one xi image.
    let basis = j_stage_basis(&line, &line, 2)?;
    for t in &basis {
        let (b, l) = &t.pairs()[0];
        let h = xi(t)?;
        println!("xi({} (x) {}) sends x to {}", b.render(), l, h.images()[0].render());
    }

    // psi merges two stage tensors with a single chi phase; bracketing the
    // inner slots and applying xi closes the comparison square.
    let merged = psi(&basis[0], &basis[1])?;
    let through_j = xi(&merged.bracket()?)?;
    println!("upper path of the bracket square: x -> {}", through_j.images()[0].render());
    Ok(())
}
