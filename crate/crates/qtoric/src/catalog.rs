//! Ready-made presentations: deformed planes, tori, circles, spheres and the
//! dual-numbers stage.
//!
//! Degrees of the sphere/torus generators are the standard basis vectors of
//! Z^rank, so the deformation rank must be at least the number of conjugate
//! generator pairs.

use crate::algebra::GeneratorSpec;
use crate::deformation::{DeformationData, DegreeVector};
use crate::error::Result;
use crate::presentation::Presentation;
use crate::scalar::Scalar;
use std::sync::Arc;

/// The rank-2 deformation [[0,1],[-1,0]] used throughout the examples.
pub fn theta2() -> DeformationData {
    DeformationData::new(vec![vec![0, 1], vec![-1, 0]]).unwrap()
}

/// Free algebra on one generator `x` of the given degree.
pub fn free_line(d: DeformationData, m: &DegreeVector) -> Arc<Presentation> {
    Presentation::free(d, vec![GeneratorSpec::new("x", m.clone())]).expect("valid free line")
}

/// Free algebra on one coinvariant generator `t`.
pub fn affine_line(d: DeformationData) -> Arc<Presentation> {
    let rank = d.rank();
    Presentation::free(d, vec![GeneratorSpec::new("t", DegreeVector::zero(rank))])
        .expect("valid affine line")
}

fn basis_degree(rank: usize, i: usize) -> DegreeVector {
    let mut v = vec![0i64; rank];
    v[i] = 1;
    DegreeVector(v)
}

/// One-dimensional noncommutative torus: x, xs with xs*x = 1.
pub fn nc_torus(d: DeformationData, m: &DegreeVector) -> Result<Arc<Presentation>> {
    let p = Presentation::free(
        d,
        vec![
            GeneratorSpec::new("x", m.clone()),
            GeneratorSpec::new("xs", m.neg()),
        ],
    )?;
    let rel = p
        .generator(1)?
        .mul(&p.generator(0)?)?
        .sub(&p.one())?;
    Presentation::quotient(&p, vec![rel])
}

/// The rank-2 example torus with x of degree (1,0).
pub fn nc_torus_rank2() -> Arc<Presentation> {
    nc_torus(theta2(), &DegreeVector(vec![1, 0])).unwrap()
}

/// N-dimensional noncommutative torus: pairs (x_i, xs_i) with xs_i x_i = 1.
pub fn nc_torus_pairs(d: DeformationData, degrees: &[DegreeVector]) -> Result<Arc<Presentation>> {
    let mut gens = Vec::new();
    for (i, m) in degrees.iter().enumerate() {
        gens.push(GeneratorSpec::new(format!("u{}", i + 1), m.clone()));
        gens.push(GeneratorSpec::new(format!("us{}", i + 1), m.neg()));
    }
    let p = Presentation::free(d, gens)?;
    let mut rels = Vec::new();
    for i in 0..degrees.len() {
        let rel = p
            .generator(2 * i + 1)?
            .mul(&p.generator(2 * i)?)?
            .sub(&p.one())?;
        rels.push(rel);
    }
    Presentation::quotient(&p, rels)
}

/// Noncommutative circle A_T: y of degree -m, ys of degree m, ys*y = 1.
pub fn circle(d: DeformationData, m: &DegreeVector) -> Result<Arc<Presentation>> {
    let p = Presentation::free(
        d,
        vec![
            GeneratorSpec::new("y", m.neg()),
            GeneratorSpec::new("ys", m.clone()),
        ],
    )?;
    let rel = p.generator(1)?.mul(&p.generator(0)?)?.sub(&p.one())?;
    Presentation::quotient(&p, vec![rel])
}

fn sphere_generators(d: &DeformationData, pairs: usize) -> Vec<GeneratorSpec> {
    let rank = d.rank();
    assert!(pairs <= rank, "need rank >= number of generator pairs");
    let mut gens = Vec::new();
    for i in 0..pairs {
        gens.push(GeneratorSpec::new(format!("x{}", i + 1), basis_degree(rank, i)));
    }
    for i in 0..pairs {
        gens.push(GeneratorSpec::new(format!("xs{}", i + 1), basis_degree(rank, i).neg()));
    }
    gens
}

/// Odd deformed sphere S^{2N-1}: sum_i xs_i x_i = 1.
pub fn sphere_odd(d: DeformationData, pairs: usize) -> Arc<Presentation> {
    let gens = sphere_generators(&d, pairs);
    let p = Presentation::free(d, gens).expect("valid sphere generators");
    let mut rel = p.one().neg();
    for i in 0..pairs {
        let term = p
            .generator(pairs + i)
            .unwrap()
            .mul(&p.generator(i).unwrap())
            .unwrap();
        rel = rel.add(&term).unwrap();
    }
    Presentation::quotient(&p, vec![rel]).expect("homogeneous sphere relation")
}

/// Even deformed sphere S^{2N}: sum_i xs_i x_i + z^2 = 1 with z coinvariant.
pub fn sphere_even(d: DeformationData, pairs: usize) -> Arc<Presentation> {
    let rank = d.rank();
    let mut gens = sphere_generators(&d, pairs);
    gens.push(GeneratorSpec::new("z", DegreeVector::zero(rank)));
    let p = Presentation::free(d, gens).expect("valid sphere generators");
    let z = p.generator(2 * pairs).unwrap();
    let mut rel = z.pow(2).unwrap().sub(&p.one()).unwrap();
    for i in 0..pairs {
        let term = p
            .generator(pairs + i)
            .unwrap()
            .mul(&p.generator(i).unwrap())
            .unwrap();
        rel = rel.add(&term).unwrap();
    }
    Presentation::quotient(&p, vec![rel]).expect("homogeneous sphere relation")
}

/// North/south hemisphere data for an even sphere: s1 = (1-z)/2, s2 = (1+z)/2
/// with witnesses 1, 1.
pub fn hemisphere_elements(sphere: &Arc<Presentation>) -> (crate::algebra::Element, crate::algebra::Element) {
    let z = sphere
        .generator_by_name("z")
        .expect("even sphere has generator z");
    let half = Scalar::rational(1, 2);
    let s1 = sphere.one().sub(&z).unwrap().scale(&half);
    let s2 = sphere.one().add(&z).unwrap().scale(&half);
    (s1, s2)
}

/// Dual numbers D = F_0/(eps^2), the infinitesimal stage.
pub fn dual_numbers(d: DeformationData) -> Arc<Presentation> {
    let rank = d.rank();
    let p = Presentation::free(d, vec![GeneratorSpec::new("eps", DegreeVector::zero(rank))])
        .expect("valid dual numbers");
    let rel = p.generator(0).unwrap().pow(2).unwrap();
    Presentation::quotient(&p, vec![rel]).expect("eps^2 is homogeneous")
}
