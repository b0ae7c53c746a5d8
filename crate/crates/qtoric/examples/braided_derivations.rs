//! Braided derivations: phase-twisted partial derivatives, the relation
//! kernel, and the braided Lie bracket.
//!
//! Run with: cargo run -p qtoric --example braided_derivations

use qtoric::catalog;
use qtoric::derivation::{der_basis, der_bracket, partial, BraidedDerivation};
use qtoric::DegreeVector;

fn main() -> qtoric::Result<()> {
    let line = catalog::free_line(catalog::theta2(), &DegreeVector(vec![1, 0]));
    let x = line.generator(0)?;

    // The partial derivative obeys the braided Leibniz rule; on a single
    // generator of degree m the phases collapse and d(x^k) = k x^(k-1).
    for k in 1..5u32 {
        println!("d(x^{k}) = {}", partial(0, &x.pow(k)?)?.render());
    }

    // der(A) for the free line at cap 3: the operators x^k d.
    let basis = der_basis(&line, 3)?;
    println!("der(F_m) at cap 3: dimension {}", basis.len());
    for l in &basis {
        println!("  {l}");
    }

    // The classical sl(2)-flavor bracket [x d, d] = -d survives deformation.
    let d = BraidedDerivation::partial_operator(&line, 0)?;
    let xd = BraidedDerivation::new(&line, vec![x.clone()], None)?;
    println!("[x*d, d] = {}", der_bracket(&xd, &d)?);

    // On the torus the coefficients must annihilate the relation: the
    // derivations pair x d_x against xs d_xs.
    let torus = catalog::nc_torus_rank2();
    let tbasis = der_basis(&torus, 1)?;
    println!("der(torus) at cap 1: dimension {}", tbasis.len());
    for l in &tbasis {
        println!("  {l}");
        for f in torus.relations() {
            assert!(l.eval(&f)?.is_zero());
        }
    }

    // Evaluation is well-defined on the quotient: ev(L ⊗ x*xs) = ev(L ⊗ 1).
    let l = &tbasis[0];
    let a = torus.parse_element("x*xs")?;
    println!(
        "ev(L, x*xs) = {} and ev(L, 1) = {}",
        l.eval(&a)?.render(),
        l.eval(&torus.one())?.render()
    );
    Ok(())
}
