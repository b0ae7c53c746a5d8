//! Infinitesimal automorphisms through the dual numbers: the monoid of
//! stage-wise self-maps, invertibility checks, and the exact correspondence
//! between pointed maps over D ⊔ B and equivariant derivations.
//!
//! Run with: cargo run -p qtoric --example tangent_automorphisms

use qtoric::catalog;
use qtoric::mapping::{hder_bracket, te_aut_basis, MappingStage, TangentStage};
use qtoric::{DegreeVector, Scalar};

fn main() -> qtoric::Result<()> {
    let line = catalog::free_line(catalog::theta2(), &DegreeVector(vec![1, 0]));
    let torus = catalog::nc_torus_rank2();

    // The mapping stage caches B ⊔ A and its inclusions; stage elements
    // compose through (g • h)* = (mu_B ⊗ id) (id_B ⊗ h*) g*.
    let ms = MappingStage::new(&line, &torus)?;
    let x_img = ms.space_inclusion().apply(&line.generator(0)?)?;
    let g = ms.element(vec![x_img.scale(&Scalar::rational(2, 1))])?;
    let gi = ms.element(vec![x_img.scale(&Scalar::rational(1, 2))])?;
    println!("scaling by 2 has inverse scaling by 1/2: {}", ms.verify_inverse(&g, &gi)?);

    // The tangent space at the identity: equivariant Leibniz maps A -> B ⊔ A.
    let basis = te_aut_basis(&line, &torus, 2)?;
    println!("tangent dimension at cap 2: {}", basis.len());
    for (i, v) in basis.iter().enumerate() {
        println!("  v{}: x -> {}", i + 1, v.images()[0].render());
    }

    // Each tangent vector lifts to an invertible map over the dual-numbers
    // stage (eps^2 = 0 makes 1 - eps d the inverse of 1 + eps d), and
    // splitting recovers the derivation exactly.
    let ts = TangentStage::new(&line, &torus)?;
    for v in &basis {
        let (lifted, inverse) = ts.lift(v)?;
        let ok = ts.mapping.verify_inverse(&lifted, &inverse)?;
        let (_, back) = ts.split(&lifted)?;
        println!(
            "lift x -> {} : invertible {}, splits back {}",
            lifted.images()[0].render(),
            ok,
            back == *v
        );
    }

    // The stage-wise Lie bracket of tangent vectors.
    if basis.len() >= 2 {
        let b = hder_bracket(&basis[0], &basis[1])?;
        println!("[v1, v2]: x -> {}", b.images()[0].render());
    }
    Ok(())
}
